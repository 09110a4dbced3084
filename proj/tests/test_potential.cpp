#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "orbitcount/coding.hpp"
#include "orbitcount/geometry.hpp"
#include "orbitcount/potential.hpp"

using namespace orbitcount;
using coding::AugmentedShift;
using geometry::ModelSpace;
using group::GeneratorSet;
using group::Word;

namespace {
const GeneratorSet F2 = GeneratorSet::free_group(2);
Word W(const std::string& s) { return group::parse_word(s, F2); }

ModelSpace schottky() {
  Eigen::Matrix2d a, b;
  a << 5.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0;
  b << 25.0 / 3.0, -32.0, 4.0 / 3.0, -5.0;
  return geometry::make_half_plane_space(F2, {a, b});
}

// random shift path from the start state, following real (non-terminal) edges
std::vector<int> random_path(oracles::Rng& rng, const AugmentedShift& s, int len) {
  std::vector<int> p{s.start};
  for (int i = 0; i < len; ++i) {
    const auto& outs = s.out_labels[static_cast<size_t>(p.back())];
    if (outs.empty()) break;
    p.push_back(outs[static_cast<size_t>(rng.below(static_cast<int>(outs.size())))].first);
  }
  return p;
}
}  // namespace

TEST_CASE("roof values on the unit tree are the first edge weight") {
  ModelSpace tr = geometry::make_tree_space(F2, {1.0, 1.0});
  AugmentedShift s = coding::augment(coding::build_coset_acceptor(F2, W("a")));

  std::vector<int> only_start{s.start};
  CHECK(potential::roof_on_terminating(tr, s, only_start) == doctest::Approx(0.0));

  oracles::Rng rng(4);
  for (int iter = 0; iter < 200; ++iter) {
    auto p = random_path(rng, s, 1 + rng.below(8));
    if (p.size() < 2) continue;
    CHECK(potential::roof_on_terminating(tr, s, p) == doctest::Approx(1.0).epsilon(1e-12));
    // trailing terminal zeros change nothing
    auto padded = p;
    padded.push_back(0);
    padded.push_back(0);
    CHECK(potential::roof_on_terminating(tr, s, padded) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("roof values on a weighted tree are the weight of the first letter") {
  ModelSpace tr = geometry::make_tree_space(F2, {1.0, std::sqrt(2.0)});
  AugmentedShift s = coding::augment(coding::build_coset_acceptor(F2, W("a")));
  oracles::Rng rng(9);
  for (int iter = 0; iter < 200; ++iter) {
    auto p = random_path(rng, s, 1 + rng.below(8));
    if (p.size() < 2) continue;
    double want = tr.weights[static_cast<size_t>(s.label_of(p[0], p[1]))];
    CHECK(potential::roof_on_terminating(tr, s, p) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("cylinder table covers each in-component path once, sorted") {
  ModelSpace tr = geometry::make_tree_space(F2, {1.0, 1.0});
  AugmentedShift s = coding::augment(coding::build_coset_acceptor(F2, W("a")));
  coding::ComponentGraph cg = coding::scc_decompose(s);
  // pick the largest recurrent component
  int comp = -1;
  size_t best = 0;
  for (int c = 1; c < cg.num_components; ++c)
    if (cg.has_cycle[static_cast<size_t>(c)] && cg.members[static_cast<size_t>(c)].size() > best) {
      best = cg.members[static_cast<size_t>(c)].size();
      comp = c;
    }
  REQUIRE(comp >= 0);
  const auto& members = cg.members[static_cast<size_t>(comp)];

  auto table = potential::build_cylinder_potential(tr, s, members, 2);
  CHECK(table.depth == 2);
  CHECK(std::is_sorted(table.values.begin(), table.values.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; }));
  for (const auto& [path, value] : table.values) {
    CHECK(path.size() == 3);
    CHECK(value == doctest::Approx(1.0).epsilon(1e-12));
  }
  // 4 states, 3 continuations each, twice
  CHECK(table.values.size() == 4 * 3 * 3);

  CHECK_THROWS_AS(potential::build_cylinder_potential(tr, s, members, 0), error);
}

TEST_CASE("Birkhoff sums telescope to the displacement") {
  ModelSpace hp = schottky();
  AugmentedShift s = coding::augment(coding::build_geodesic_acceptor(F2));
  oracles::Rng rng(77);
  for (int iter = 0; iter < 100; ++iter) {
    auto p = random_path(rng, s, 1 + rng.below(9));
    auto [birkhoff, disp] = potential::birkhoff_displacement_check(hp, s, p);
    CHECK(std::abs(birkhoff - disp) < 1e-9);
  }

  ModelSpace tr = geometry::make_tree_space(F2, {1.0, std::sqrt(2.0)});
  for (int iter = 0; iter < 100; ++iter) {
    auto p = random_path(rng, s, 1 + rng.below(9));
    auto [birkhoff, disp] = potential::birkhoff_displacement_check(tr, s, p);
    CHECK(std::abs(birkhoff - disp) < 1e-12);
  }
}

TEST_CASE("tree roofs depend only on the first edge: zero oscillation") {
  ModelSpace tr = geometry::make_tree_space(F2, {1.0, 1.0});
  AugmentedShift s = coding::augment(coding::build_coset_acceptor(F2, W("a")));
  auto rows = potential::hoelder_audit(tr, s, {1, 2, 3});
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row.max_oscillation <= 1e-12);
    CHECK(row.cylinders > 0);
  }
}

TEST_CASE("half-plane roof oscillation decays geometrically with depth") {
  ModelSpace hp = schottky();
  AugmentedShift s = coding::augment(coding::build_geodesic_acceptor(F2));
  auto rows = potential::hoelder_audit(hp, s, {2, 3, 4, 5}, 6, 2000000);
  REQUIRE(rows.size() == 4);
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    CHECK(rows[i].max_oscillation > 0.0);
    CHECK(rows[i + 1].max_oscillation < rows[i].max_oscillation);
  }
  // decay is roughly e^{-2 log 3} per level; allow a generous factor
  CHECK(rows[3].max_oscillation < rows[0].max_oscillation * 0.1);
}
