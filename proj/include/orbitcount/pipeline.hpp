#pragma once
// End-to-end run: build and verify the codings, compute pressure and the
// critical exponent, count orbits and conjugacy classes, fit growth rates,
// and leave a deterministic artifact directory behind:
//
//   acceptor.txt, coset_acceptor.txt   the two automata
//   potential_c<k>.csv                 cylinder roof values per component
//   hoelder.csv                        roof oscillation decay by depth
//   pressure_curve.csv                 t, pressure, derivative
//   counts_<kind>.csv                  radius, cumulative count, increment
//   length_audit.csv                   conjugate-length approximation error
//   summary.json                       headline numbers
//
// Failures leave summary.partial.json with the error instead of summary.json.

#include <string>

#include "orbitcount/config.hpp"
#include "orbitcount/counting.hpp"

namespace orbitcount::pipeline {

struct RunResult {
  uint64_t config_hash = 0;
  double delta_pressure = 0.0;  // root of the top component's pressure
  double delta_fit = 0.0;       // fitted full-orbit growth rate
  double conj_rate = 0.0;       // fitted conjugacy-class growth rate
  double rate_ratio = 0.0;      // conj_rate / delta_fit, should be near 1/2
  int multiplicity = 0;
  std::string lattice_verdict;  // "arithmetic" | "non_arithmetic" | "inconclusive"
  double lattice_span = 0.0;
  bool mixing = false;  // non-arithmetic length spectrum
  double c_estimate = 0.0;
  bool c_low_confidence = false;
  std::string summary_path;
};

RunResult run(const config::Config& cfg, const std::string& out_dir);

// Reads <out_dir>/summary.json back and renders it as terminal text.
std::string report(const std::string& out_dir);

// Shared artifact helpers (also used by the single-step CLI commands).
void write_text_file(const std::string& path, const std::string& content);
std::string format_series_csv(const counting::CountSeries& series, uint64_t config_hash);
std::string format_automaton(const coding::LabeledAutomaton& a);

}  // namespace orbitcount::pipeline
