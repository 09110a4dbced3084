#pragma once
// Free-group word algebra over a symmetric generating set.
//
// Letters are small integers 0..2k-1. The default layout for rank k pairs
// letter 2i with its inverse 2i+1 and orders letters by index, which gives
// a < a^-1 < b < b^-1 < ...  Serialization uses the alphabet a,A,b,B,...
// (capital = inverse of the lowercase letter).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitcount/errors.hpp"

namespace orbitcount::group {

using Letter = int;
using Word = std::vector<Letter>;  // freely reduced unless stated otherwise

struct GeneratorSet {
  int rank = 0;
  std::vector<int> involution;  // involution[l] = l^-1; fixed-point-free
  std::vector<int> order;       // order[l] = sort key of letter l; a permutation of 0..2k-1

  int alphabet_size() const { return 2 * rank; }
  Letter inverse(Letter l) const { return involution[static_cast<size_t>(l)]; }

  // Standard layout: involution swaps 2i <-> 2i+1, order = identity.
  static GeneratorSet free_group(int rank);

  // Throws errc::usage if the involution is not a fixed-point-free involution
  // or order is not a permutation.
  void validate() const;
};

// --- serialization ---------------------------------------------------------

char letter_to_char(Letter l);
Letter char_to_letter(char c, const GeneratorSet& gens);
std::string to_string(const Word& w);
Word parse_word(const std::string& s, const GeneratorSet& gens);

// --- reduction and arithmetic ----------------------------------------------

// Free reduction (single linear stack pass).
Word reduce(const GeneratorSet& gens, const Word& w);

Word multiply(const GeneratorSet& gens, const Word& a, const Word& b);
Word invert(const GeneratorSet& gens, const Word& a);
// h^-1 g h
Word conjugate(const GeneratorSet& gens, const Word& h, const Word& g);

// Splits g = conjugator * core * conjugator^-1 with core cyclically reduced;
// the concatenation on the right-hand side is reduced as written.
struct CyclicForm {
  Word core;
  Word conjugator;
};
CyclicForm cyclic_reduce(const GeneratorSet& gens, const Word& g);

// core = root^power with root primitive (not a proper power).
// Throws errc::usage when g reduces to the empty word.
struct ConjugacyData {
  Word core;
  Word conjugator;
  Word root;
  int power = 0;
};
ConjugacyData primitive_root(const GeneratorSet& gens, const Word& g);

// Length first, then first differing letter under gens.order.
bool shortlex_less(const GeneratorSet& gens, const Word& a, const Word& b);

// 2*(g,h)_e = |g| + |h| - |g^-1 h| in the word metric; returns (g,h)_e.
double word_gromov_product(const GeneratorSet& gens, const Word& g, const Word& h);

// --- hashing (for dedup sets) ----------------------------------------------

struct WordHash {
  size_t operator()(const Word& w) const noexcept {
    uint64_t h = 1469598103934665603ull;
    for (Letter l : w) {
      h ^= static_cast<uint64_t>(l) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace orbitcount::group
