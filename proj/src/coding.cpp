#include "orbitcount/coding.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace orbitcount::coding {

using group::GeneratorSet;
using group::Letter;
using group::Word;

std::vector<LabeledAutomaton::Edge> LabeledAutomaton::edges() const {
  std::vector<Edge> es;
  for (int v = 0; v < num_vertices; ++v)
    for (int l = 0; l < static_cast<int>(next[v].size()); ++l)
      if (next[v][l] >= 0) es.push_back(Edge{v, next[v][l], l});
  return es;  // construction order is already (from, label)
}

LabeledAutomaton build_geodesic_acceptor(const GeneratorSet& gens) {
  gens.validate();
  const int n = gens.alphabet_size();
  LabeledAutomaton a;
  a.num_vertices = 1 + n;  // * plus one vertex per last letter
  a.next.assign(a.num_vertices, std::vector<int>(n, -1));
  for (Letter s = 0; s < n; ++s) {
    a.next[0][s] = 1 + s;
    for (Letter t = 0; t < n; ++t)
      if (t != gens.inverse(s)) a.next[1 + s][t] = 1 + t;
  }
  a.tag = "geodesic";
  a.verified_len = 0;
  return a;
}

namespace {

// z_k = conjugator root^k conjugator^-1, literally concatenated; reduced as
// written because the cyclic form has no cancellation at the junctions.
Word translate_word(const GeneratorSet& gens, const group::ConjugacyData& cd, int k) {
  Word z = cd.conjugator;
  if (k >= 0) {
    for (int i = 0; i < k; ++i) z.insert(z.end(), cd.root.begin(), cd.root.end());
  } else {
    Word ri = group::invert(gens, cd.root);
    for (int i = 0; i < -k; ++i) z.insert(z.end(), ri.begin(), ri.end());
  }
  Word ci = group::invert(gens, cd.conjugator);
  z.insert(z.end(), ci.begin(), ci.end());
  return z;
}

struct TranslateTable {
  const GeneratorSet* gens;
  group::ConjugacyData cd;
  mutable std::vector<Word> pos, neg;  // pos[k-1] = z_k, neg[k-1] = z_-k

  const Word& get(int k) const {
    auto& side = k > 0 ? pos : neg;
    int idx = std::abs(k) - 1;
    while (static_cast<int>(side.size()) <= idx)
      side.push_back(translate_word(*gens, cd, k > 0 ? static_cast<int>(side.size()) + 1
                                                     : -static_cast<int>(side.size()) - 1));
    return side[idx];
  }
};

// Any translate that could tie or beat u in shortlex satisfies
// |k| * |root| <= 2|u| (triangle inequality), so this range is exhaustive.
int translate_range(const TranslateTable& tt, int len_u) {
  return 2 * len_u / static_cast<int>(tt.cd.root.size()) + 2;
}

bool is_canonical_rep(const GeneratorSet& gens, const TranslateTable& tt, const Word& u) {
  int K = translate_range(tt, static_cast<int>(u.size()));
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    Word t = group::multiply(gens, tt.get(k), u);
    if (group::shortlex_less(gens, t, u)) return false;
  }
  return true;
}

using Signature = std::vector<int64_t>;

// Per in-window translate t = z_k u the signature keeps what a future
// extension letter can still interact with. If the product left part of u
// standing, t ends with u's own last letter, so no reduced extension ever
// cancels into it: its length gap is frozen and only the (already decided)
// lex flag matters. If z_k swallowed u whole, t is a prefix of the fixed word
// z_k and extensions can keep eating it, so (k, |t|) pins t exactly; it also
// pins u itself, u = (z_k minus that prefix)^-1. Words with equal signatures
// therefore admit exactly the same canonical extensions, as far as the window
// can see.
Signature cone_signature(const GeneratorSet& gens, const TranslateTable& tt, const Word& u,
                         int radius, int ball_kmax) {
  Signature sig;
  sig.push_back(u.empty() ? -1 : static_cast<int64_t>(u.back()));
  for (int k = -ball_kmax; k <= ball_kmax; ++k) {
    if (k == 0) continue;
    const Word& z = tt.get(k);
    Word t = group::multiply(gens, z, u);
    int64_t delta = static_cast<int64_t>(t.size()) - static_cast<int64_t>(u.size());
    if (delta > radius) continue;
    sig.push_back(k);
    sig.push_back(delta);
    size_t m = std::min(t.size(), u.size());
    int64_t flag = 0;
    for (size_t i = 0; i < m; ++i) {
      if (t[i] != u[i]) {
        flag = gens.order[static_cast<size_t>(t[i])] < gens.order[static_cast<size_t>(u[i])] ? -1 : 1;
        break;
      }
    }
    sig.push_back(flag);
    // c = (|z| + |u| - |t|) / 2 letters of u cancelled; absorbed means c == |u|
    bool absorbed = z.size() >= u.size() && t.size() == z.size() - u.size();
    sig.push_back(absorbed ? static_cast<int64_t>(t.size()) : -1);
  }
  return sig;
}

// Largest D such that the two shortlex-sorted lists agree on all lengths <= D.
int deepest_agreement(const GeneratorSet&, const std::vector<Word>& got,
                      const std::vector<Word>& want, int max_len) {
  auto by_len = [max_len](const std::vector<Word>& ws) {
    std::vector<std::vector<Word>> b(static_cast<size_t>(max_len) + 1);
    for (const auto& w : ws)
      if (static_cast<int>(w.size()) <= max_len) b[w.size()].push_back(w);
    return b;
  };
  auto g = by_len(got), w = by_len(want);
  for (int d = 0; d <= max_len; ++d)
    if (g[d] != w[d]) return d - 1;
  return max_len;
}

}  // namespace

std::vector<Word> minimal_coset_representatives(const GeneratorSet& gens, const Word& g,
                                                int max_len) {
  gens.validate();
  Word gr = group::reduce(gens, g);
  if (gr.empty())
    throw error(errc::usage, "minimal_coset_representatives: g must be nontrivial");
  if (max_len < 0) throw error(errc::usage, "minimal_coset_representatives: max_len >= 0");
  TranslateTable tt{&gens, group::primitive_root(gens, gr), {}, {}};

  std::vector<Word> reps;
  Word u;
  auto dfs = [&](auto&& self) -> void {
    if (is_canonical_rep(gens, tt, u)) reps.push_back(u);
    // Extensions of non-canonical words can be canonical only if the word
    // itself is; canonical languages are prefix-closed, so prune here.
    else
      return;
    if (static_cast<int>(u.size()) == max_len) return;
    for (Letter s = 0; s < gens.alphabet_size(); ++s) {
      if (!u.empty() && s == gens.inverse(u.back())) continue;
      u.push_back(s);
      self(self);
      u.pop_back();
    }
  };
  dfs(dfs);
  std::sort(reps.begin(), reps.end(),
            [&](const Word& a, const Word& b) { return group::shortlex_less(gens, a, b); });
  return reps;
}

LabeledAutomaton build_coset_acceptor(const GeneratorSet& gens, const Word& g,
                                      const CosetAcceptorOptions& opts) {
  gens.validate();
  Word gr = group::reduce(gens, g);
  if (gr.empty()) throw error(errc::usage, "build_coset_acceptor: g must be nontrivial");
  TranslateTable tt{&gens, group::primitive_root(gens, gr), {}, {}};
  const int rootlen = static_cast<int>(tt.cd.root.size());
  const int radius = opts.signature_radius > 0 ? opts.signature_radius : 2 * (rootlen + 4);
  const int ball = 2 * radius + rootlen + 4;  // |z| cap for signature translates
  const int ball_kmax =
      std::max(0, (ball - 2 * static_cast<int>(tt.cd.conjugator.size())) / rootlen) + 1;

  LabeledAutomaton a;
  a.tag = "coset:" + group::to_string(gr);
  const int nletters = gens.alphabet_size();

  std::map<Signature, int> state_of;
  std::vector<Word> witness;
  std::vector<Signature> sigs;
  bool budget_hit = false;

  auto intern = [&](const Word& u) -> int {
    Signature sig = cone_signature(gens, tt, u, radius, ball_kmax);
    auto it = state_of.find(sig);
    if (it != state_of.end()) return it->second;
    if (static_cast<int>(witness.size()) >= opts.state_budget) {
      budget_hit = true;
      return -1;
    }
    int id = static_cast<int>(witness.size());
    state_of.emplace(std::move(sig), id);
    witness.push_back(u);
    a.next.emplace_back(nletters, -1);
    return id;
  };

  intern(Word{});  // the empty word is the canonical representative of Z(g)e
  for (size_t head = 0; head < witness.size() && !budget_hit; ++head) {
    Word u = witness[head];  // copy: witness may reallocate
    for (Letter s = 0; s < nletters && !budget_hit; ++s) {
      if (!u.empty() && s == gens.inverse(u.back())) continue;
      Word v = u;
      v.push_back(s);
      if (!is_canonical_rep(gens, tt, v)) continue;
      int to = intern(v);
      if (to >= 0) a.next[head][s] = to;
    }
  }
  a.num_vertices = static_cast<int>(witness.size());

  // Mandatory verification against the brute-force oracle; never hand back an
  // unverified automaton.
  std::vector<Word> got = language(a, gens, opts.verify_len);
  std::vector<Word> want = minimal_coset_representatives(gens, gr, opts.verify_len);
  int agree = deepest_agreement(gens, got, want, opts.verify_len);
  if (budget_hit)
    throw unstable_coding_error(
        "unstable coding: state budget " + std::to_string(opts.state_budget) +
            " exceeded for g=" + group::to_string(gr) + "; deepest verified length " +
            std::to_string(agree),
        agree);
  if (agree < opts.verify_len)
    throw unstable_coding_error(
        "unstable coding: acceptor for g=" + group::to_string(gr) +
            " disagrees with the representative oracle beyond length " + std::to_string(agree),
        agree);
  a.verified_len = opts.verify_len;
  return a;
}

std::vector<Word> language(const LabeledAutomaton& a, const GeneratorSet& gens, int max_len) {
  std::vector<Word> out;
  Word w;
  auto dfs = [&](auto&& self, int v) -> void {
    out.push_back(w);
    if (static_cast<int>(w.size()) == max_len) return;
    for (Letter s = 0; s < static_cast<int>(a.next[v].size()); ++s) {
      int to = a.next[v][s];
      if (to < 0) continue;
      w.push_back(s);
      self(self, to);
      w.pop_back();
    }
  };
  if (a.num_vertices > 0) dfs(dfs, 0);
  std::sort(out.begin(), out.end(),
            [&](const Word& x, const Word& y) { return group::shortlex_less(gens, x, y); });
  return out;
}

std::vector<double> path_counts(const LabeledAutomaton& a, int max_len) {
  std::vector<double> counts(static_cast<size_t>(max_len) + 1, 0.0);
  std::vector<double> cur(a.num_vertices, 0.0), nxt(a.num_vertices, 0.0);
  if (a.num_vertices == 0) return counts;
  cur[0] = 1.0;
  counts[0] = 1.0;
  for (int n = 1; n <= max_len; ++n) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (int v = 0; v < a.num_vertices; ++v) {
      if (cur[v] == 0.0) continue;
      for (int to : a.next[v])
        if (to >= 0) nxt[to] += cur[v];
    }
    std::swap(cur, nxt);
    counts[n] = std::accumulate(cur.begin(), cur.end(), 0.0);
  }
  return counts;
}

void save_automaton(std::ostream& os, const LabeledAutomaton& a) {
  os << "vertices " << a.num_vertices << " start 0\n";
  // tags never contain whitespace; "-" stands in for an empty tag
  os << "tag " << (a.tag.empty() ? "-" : a.tag) << " verified " << a.verified_len << '\n';
  for (const auto& e : a.edges())
    os << e.from << ' ' << e.to << ' ' << group::letter_to_char(e.label) << '\n';
}

LabeledAutomaton load_automaton(std::istream& is, const GeneratorSet& gens) {
  std::string kw1, kw2;
  int n = 0, start = 0;
  if (!(is >> kw1 >> n >> kw2 >> start) || kw1 != "vertices" || kw2 != "start" || start != 0)
    throw error(errc::io, "load_automaton: bad header");
  std::string tag;
  int vlen = 0;
  if (!(is >> kw1 >> tag >> kw2 >> vlen) || kw1 != "tag" || kw2 != "verified")
    throw error(errc::io, "load_automaton: bad header");
  LabeledAutomaton a;
  a.tag = tag == "-" ? std::string{} : tag;
  a.verified_len = vlen;
  a.num_vertices = n;
  a.next.assign(n, std::vector<int>(gens.alphabet_size(), -1));
  int from, to;
  char label;
  while (is >> from >> to >> label) {
    if (from < 0 || from >= n || to < 0 || to >= n)
      throw error(errc::io, "load_automaton: edge endpoint out of range");
    Letter l = group::char_to_letter(label, gens);
    if (a.next[from][l] != -1) throw error(errc::io, "load_automaton: duplicate edge label");
    a.next[from][l] = to;
  }
  return a;
}

// --- augmented subshift ------------------------------------------------------

bool AugmentedShift::has_edge(int u, int v) const {
  return std::binary_search(succ[u].begin(), succ[u].end(), v);
}

Letter AugmentedShift::label_of(int u, int v) const {
  for (const auto& [to, l] : out_labels[u])
    if (to == v) return l;
  throw error(errc::usage, "label_of: no automaton edge between these states");
}

AugmentedShift augment(const LabeledAutomaton& a) {
  AugmentedShift s;
  s.num_states = a.num_vertices + 1;
  s.start = 1;
  s.succ.assign(s.num_states, {});
  s.out_labels.assign(s.num_states, {});
  s.succ[0] = {0};
  for (int v = 0; v < a.num_vertices; ++v) {
    int from = v + 1;
    s.succ[from].push_back(0);
    for (Letter l = 0; l < static_cast<int>(a.next[v].size()); ++l) {
      int to = a.next[v][l];
      if (to < 0) continue;
      for (const auto& [prev_to, prev_l] : s.out_labels[from])
        if (prev_to == to + 1)
          throw error(errc::usage,
                      "augment: two labels on one state pair break the path-word bijection");
      s.out_labels[from].emplace_back(to + 1, l);
      s.succ[from].push_back(to + 1);
    }
    std::sort(s.succ[from].begin(), s.succ[from].end());
  }
  return s;
}

// --- strongly connected components -------------------------------------------

namespace {

struct TarjanState {
  const AugmentedShift* s = nullptr;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  int counter = 0, ncomp = 0;

  void run() {
    int n = s->num_states;
    index.assign(n, -1);
    low.assign(n, 0);
    comp.assign(n, -1);
    on_stack.assign(n, false);
    for (int v = 0; v < n; ++v)
      if (index[v] < 0) visit(v);
  }

  // Iterative Tarjan: frame = (vertex, next successor position).
  void visit(int root) {
    std::vector<std::pair<int, size_t>> frames{{root, 0}};
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos == 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (pos < s->succ[v].size()) {
        int w = s->succ[v][pos++];
        if (index[w] < 0) {
          frames.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      int finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
};

}  // namespace

ComponentGraph scc_decompose(const AugmentedShift& shift) {
  TarjanState tj;
  tj.s = &shift;
  tj.run();
  const int k = tj.ncomp;

  // Condensation edges on raw component ids.
  std::vector<std::vector<int>> raw_edges(k);
  for (int u = 0; u < shift.num_states; ++u)
    for (int v : shift.succ[u])
      if (tj.comp[u] != tj.comp[v]) raw_edges[tj.comp[u]].push_back(tj.comp[v]);
  for (auto& es : raw_edges) {
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
  }

  // Block order: place a component once all its out-neighbors are placed
  // (sinks first), ties broken by smallest member state for determinism.
  // The terminal {0} block lands first, the start block last.
  std::vector<int> pending(k);
  std::vector<std::vector<int>> rev(k);
  for (int c = 0; c < k; ++c) {
    pending[c] = static_cast<int>(raw_edges[c].size());
    for (int d : raw_edges[c]) rev[d].push_back(c);
  }
  std::vector<int> min_member(k, shift.num_states);
  for (int v = 0; v < shift.num_states; ++v)
    min_member[tj.comp[v]] = std::min(min_member[tj.comp[v]], v);

  std::vector<int> order;  // order[i] = raw id of block i
  std::set<std::pair<int, int>> ready;
  for (int c = 0; c < k; ++c)
    if (pending[c] == 0) ready.emplace(min_member[c], c);
  while (!ready.empty()) {
    int best = ready.begin()->second;
    ready.erase(ready.begin());
    order.push_back(best);
    for (int c : rev[best])
      if (--pending[c] == 0) ready.emplace(min_member[c], c);
  }
  if (static_cast<int>(order.size()) != k)
    throw error(errc::usage, "scc_decompose: condensation is not acyclic");

  std::vector<int> block_of_raw(k);
  for (int i = 0; i < k; ++i) block_of_raw[order[i]] = i;

  ComponentGraph cg;
  cg.num_components = k;
  cg.component_of.resize(shift.num_states);
  cg.members.assign(k, {});
  for (int v = 0; v < shift.num_states; ++v) {
    int c = block_of_raw[tj.comp[v]];
    cg.component_of[v] = c;
    cg.members[c].push_back(v);
  }
  for (auto& m : cg.members) std::sort(m.begin(), m.end());

  cg.comp_edges.assign(k, {});
  for (int c = 0; c < k; ++c) {
    for (int d : raw_edges[order[c]]) cg.comp_edges[c].push_back(block_of_raw[d]);
    std::sort(cg.comp_edges[c].begin(), cg.comp_edges[c].end());
  }

  cg.has_cycle.assign(k, false);
  for (int c = 0; c < k; ++c) {
    if (cg.members[c].size() > 1)
      cg.has_cycle[c] = true;
    else {
      int v = cg.members[c][0];
      cg.has_cycle[c] = shift.has_edge(v, v);
    }
  }

  cg.reach.assign(k, std::vector<bool>(k, false));
  for (int c = 0; c < k; ++c)  // edges target lower blocks, so ascending order works
    for (int d : cg.comp_edges[c]) {
      cg.reach[c][d] = true;
      for (int e = 0; e < k; ++e)
        if (cg.reach[d][e]) cg.reach[c][e] = true;
    }
  return cg;
}

std::vector<int> ComponentGraph::block_permutation() const {
  std::vector<int> perm;
  for (const auto& m : members) perm.insert(perm.end(), m.begin(), m.end());
  return perm;
}

std::optional<int> component_period(const AugmentedShift& shift, const ComponentGraph& cg,
                                    int component) {
  if (component < 0 || component >= cg.num_components)
    throw error(errc::usage, "component_period: bad component index");
  if (!cg.has_cycle[component]) return std::nullopt;  // wandering: no cycles at all
  const auto& mem = cg.members[component];
  std::vector<int> level(shift.num_states, -1);
  std::vector<int> queue{mem[0]};
  level[mem[0]] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int v : shift.succ[u]) {
      if (cg.component_of[v] != component) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  int g = 0;
  for (int u : mem)
    for (int v : shift.succ[u])
      if (cg.component_of[v] == component) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
  return g == 0 ? std::optional<int>() : std::optional<int>(g);
}

int maximal_path_multiplicity(const ComponentGraph& cg, const std::vector<bool>& flagged) {
  if (static_cast<int>(flagged.size()) != cg.num_components)
    throw error(errc::usage, "maximal_path_multiplicity: flag vector size mismatch");
  std::vector<int> best(cg.num_components, 0);
  int overall = 0;
  for (int c = 0; c < cg.num_components; ++c) {  // successors have lower indices
    int succ_best = 0;
    for (int d : cg.comp_edges[c]) succ_best = std::max(succ_best, best[d]);
    best[c] = succ_best + (flagged[c] ? 1 : 0);
    overall = std::max(overall, best[c]);
  }
  return overall;
}

}  // namespace orbitcount::coding
