#pragma once
// Symbolic codings of a free group and of centralizer coset spaces.
//
// build_geodesic_acceptor returns the automaton of all freely reduced words
// (start vertex * plus one vertex per last letter). build_coset_acceptor
// returns a deterministic acceptor for the shortlex-least minimal-length
// representatives of Z(g)\F_k. Its states are cone-type signatures (bounded
// centralizer translates with their length offsets, plus the last letter);
// every constructed acceptor is checked against the brute-force oracle up to
// verify_len and construction fails loudly instead of returning an
// unverified automaton.
//
// augment() turns an acceptor into the subshift used by the thermodynamic
// machinery: shift state 0 is the absorbing terminal vertex, automaton vertex
// v becomes state v+1, every state gains an edge to 0, and 0 keeps a
// self-loop. scc_decompose orders the strongly connected components so the
// transition matrix is lower block-triangular ({0} block first, * block
// last).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbitcount/group.hpp"

namespace orbitcount::coding {

struct LabeledAutomaton {
  int num_vertices = 0;                // ids 0..num_vertices-1; start is 0
  std::vector<std::vector<int>> next;  // next[v][letter] = target, -1 if absent
  std::string tag;                     // "geodesic" or "coset:<word>"
  int verified_len = 0;                // oracle-certified language depth

  struct Edge {
    int from, to;
    group::Letter label;
  };
  std::vector<Edge> edges() const;  // sorted by (from, label)
  int alphabet_size() const { return next.empty() ? 0 : static_cast<int>(next[0].size()); }
};

LabeledAutomaton build_geodesic_acceptor(const group::GeneratorSet& gens);

// One shortlex-least minimal-length representative per coset Z(g)h that meets
// the ball of radius max_len; sorted shortlex. Brute force, O(ball * ball).
std::vector<group::Word> minimal_coset_representatives(const group::GeneratorSet& gens,
                                                       const group::Word& g, int max_len);

struct CosetAcceptorOptions {
  int signature_radius = -1;  // -1: 2 * (|root| + 4)
  int verify_len = 8;
  int state_budget = 100000;
};

LabeledAutomaton build_coset_acceptor(const group::GeneratorSet& gens, const group::Word& g,
                                      const CosetAcceptorOptions& opts = {});

// All accepted words of length <= max_len, sorted shortlex (prefix-closed
// languages: every path from the start is accepting).
std::vector<group::Word> language(const LabeledAutomaton& a, const group::GeneratorSet& gens,
                                  int max_len);

// Accepted-word counts by length 0..max_len via the transition table.
std::vector<double> path_counts(const LabeledAutomaton& a, int max_len);

void save_automaton(std::ostream& os, const LabeledAutomaton& a);
LabeledAutomaton load_automaton(std::istream& is, const group::GeneratorSet& gens);

// --- augmented subshift ------------------------------------------------------

struct AugmentedShift {
  int num_states = 0;  // state 0 = terminal; automaton vertex v -> state v+1
  int start = 1;
  std::vector<std::vector<int>> succ;  // sorted; includes terminal edges and 0->0
  // Labels of automaton edges, in shift-state ids (no terminal edges).
  std::vector<std::vector<std::pair<int, group::Letter>>> out_labels;

  bool has_edge(int u, int v) const;
  // Label of the unique automaton edge u->v; throws for terminal moves.
  group::Letter label_of(int u, int v) const;
};

AugmentedShift augment(const LabeledAutomaton& a);

struct ComponentGraph {
  // Components are numbered in block order: component 0 is the terminal {0}
  // block and edges only go from higher-numbered to lower-numbered blocks
  // (or stay inside one), i.e. the permuted transition matrix is lower
  // block-triangular with the components as diagonal blocks.
  int num_components = 0;
  std::vector<int> component_of;          // per shift state
  std::vector<std::vector<int>> members;  // per component, sorted state ids
  std::vector<std::vector<int>> comp_edges;  // condensation edges (to lower indices)
  std::vector<bool> has_cycle;            // false = wandering singleton
  std::vector<std::vector<bool>> reach;   // reach[c][d]: some path c -> d (c != d allowed)

  // Permutation of states realizing the block order (concatenated members).
  std::vector<int> block_permutation() const;
};

ComponentGraph scc_decompose(const AugmentedShift& shift);

// gcd of cycle lengths inside the component; nullopt for wandering
// components (no cycle at all).
std::optional<int> component_period(const AugmentedShift& shift, const ComponentGraph& cg,
                                    int component);

// Longest chain of flagged components visited by one condensation path.
int maximal_path_multiplicity(const ComponentGraph& cg, const std::vector<bool>& flagged);

}  // namespace orbitcount::coding
