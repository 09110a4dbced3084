#include "orbitcount/group.hpp"

#include <algorithm>
#include <cctype>

namespace orbitcount::group {

GeneratorSet GeneratorSet::free_group(int rank) {
  if (rank < 1) throw error(errc::usage, "free_group: rank must be >= 1");
  GeneratorSet g;
  g.rank = rank;
  g.involution.resize(2 * rank);
  g.order.resize(2 * rank);
  for (int i = 0; i < 2 * rank; ++i) {
    g.involution[i] = i ^ 1;
    g.order[i] = i;
  }
  return g;
}

void GeneratorSet::validate() const {
  const int n = alphabet_size();
  if (rank < 1) throw error(errc::usage, "GeneratorSet: rank must be >= 1");
  if (static_cast<int>(involution.size()) != n || static_cast<int>(order.size()) != n)
    throw error(errc::usage, "GeneratorSet: involution/order size mismatch");
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    int j = involution[i];
    if (j < 0 || j >= n || j == i || involution[j] != i)
      throw error(errc::usage, "GeneratorSet: involution must be fixed-point-free");
    if (order[i] < 0 || order[i] >= n || seen[order[i]])
      throw error(errc::usage, "GeneratorSet: order must be a permutation");
    seen[order[i]] = true;
  }
}

char letter_to_char(Letter l) {
  int pair = l / 2;
  if (pair > 25) throw error(errc::usage, "letter_to_char: rank beyond z unsupported in text form");
  return static_cast<char>(((l & 1) ? 'A' : 'a') + pair);
}

Letter char_to_letter(char c, const GeneratorSet& gens) {
  int l;
  if (c >= 'a' && c <= 'z')
    l = 2 * (c - 'a');
  else if (c >= 'A' && c <= 'Z')
    l = 2 * (c - 'A') + 1;
  else
    throw error(errc::usage, std::string("char_to_letter: bad letter '") + c + "'");
  if (l >= gens.alphabet_size())
    throw error(errc::usage, std::string("char_to_letter: letter '") + c + "' outside rank");
  return l;
}

std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter l : w) s.push_back(letter_to_char(l));
  return s;
}

Word parse_word(const std::string& s, const GeneratorSet& gens) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    w.push_back(char_to_letter(c, gens));
  }
  return reduce(gens, w);
}

Word reduce(const GeneratorSet& gens, const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == gens.inverse(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word multiply(const GeneratorSet& gens, const Word& a, const Word& b) {
  Word out = a;
  out.reserve(a.size() + b.size());
  for (Letter l : b) {
    if (!out.empty() && out.back() == gens.inverse(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word invert(const GeneratorSet& gens, const Word& a) {
  Word out;
  out.reserve(a.size());
  for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(gens.inverse(*it));
  return out;
}

Word conjugate(const GeneratorSet& gens, const Word& h, const Word& g) {
  return multiply(gens, multiply(gens, invert(gens, h), g), h);
}

CyclicForm cyclic_reduce(const GeneratorSet& gens, const Word& g_in) {
  Word g = reduce(gens, g_in);
  Word conj;
  size_t lo = 0, hi = g.size();
  while (hi - lo >= 2 && g[lo] == gens.inverse(g[hi - 1])) {
    conj.push_back(g[lo]);
    ++lo;
    --hi;
  }
  return CyclicForm{Word(g.begin() + lo, g.begin() + hi), conj};
}

ConjugacyData primitive_root(const GeneratorSet& gens, const Word& g) {
  CyclicForm cf = cyclic_reduce(gens, g);
  if (cf.core.empty())
    throw error(errc::usage, "primitive_root: trivial element has no primitive root");
  const int n = static_cast<int>(cf.core.size());
  // Smallest divisor-length prefix whose power recovers the core. A cyclically
  // reduced word is a d-th power iff it is literally periodic with period n/d.
  for (int p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (int i = p; i < n && periodic; ++i)
      if (cf.core[i] != cf.core[i - p]) periodic = false;
    if (periodic) {
      ConjugacyData d;
      d.core = cf.core;
      d.conjugator = cf.conjugator;
      d.root = Word(cf.core.begin(), cf.core.begin() + p);
      d.power = n / p;
      return d;
    }
  }
  throw error(errc::usage, "primitive_root: unreachable");
}

bool shortlex_less(const GeneratorSet& gens, const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return gens.order[a[i]] < gens.order[b[i]];
  return false;
}

double word_gromov_product(const GeneratorSet& gens, const Word& g, const Word& h) {
  Word gh = multiply(gens, invert(gens, g), h);
  return 0.5 * (static_cast<double>(g.size()) + static_cast<double>(h.size()) -
                static_cast<double>(gh.size()));
}

}  // namespace orbitcount::group

namespace orbitcount {
const char* errc_tag(errc c) {
  switch (c) {
    case errc::usage: return "usage";
    case errc::config: return "config";
    case errc::coding_unstable: return "coding-unstable";
    case errc::coding_unverified: return "coding-unverified";
    case errc::budget: return "budget";
    case errc::audit: return "audit";
    case errc::spectral: return "spectral";
    case errc::io: return "io";
  }
  return "unknown";
}
}  // namespace orbitcount
