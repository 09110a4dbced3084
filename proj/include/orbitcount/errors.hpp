#pragma once
// Error taxonomy shared by all modules. The CLI maps errc values to process
// exit codes and machine-readable tags; see tools/main.cpp and README.md.

#include <stdexcept>
#include <string>

namespace orbitcount {

enum class errc {
  usage = 2,             // bad arguments / malformed input object
  config = 3,            // config file invalid
  coding_unstable = 4,   // coset acceptor failed closure or oracle verification
  coding_unverified = 5, // counting asked for lengths beyond the verified range
  budget = 6,            // state/orbit/path budget exceeded
  audit = 7,             // a runtime invariant audit tripped (hard error by design)
  spectral = 8,          // eigenvalue/bisection failure
  io = 9,                // filesystem problems
};

const char* errc_tag(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

// Carries how deep the automaton agreed with the oracle before diverging.
class unstable_coding_error : public error {
 public:
  unstable_coding_error(const std::string& what, int verified_len)
      : error(errc::coding_unstable, what), verified_len_(verified_len) {}
  int verified_len() const { return verified_len_; }

 private:
  int verified_len_;
};

}  // namespace orbitcount
