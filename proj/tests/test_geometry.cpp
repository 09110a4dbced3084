#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "orbitcount/errors.hpp"
#include "orbitcount/geometry.hpp"

using namespace orbitcount;
using geometry::HalfPlanePoint;
using geometry::ModelSpace;
using geometry::Point;
using geometry::TreePoint;
using group::GeneratorSet;
using group::Word;

namespace {

const GeneratorSet F2 = GeneratorSet::free_group(2);
Word W(const std::string& s) { return group::parse_word(s, F2); }

ModelSpace unit_tree() { return geometry::make_tree_space(F2, {1.0, 1.0}); }
ModelSpace weighted_tree() { return geometry::make_tree_space(F2, {1.0, std::sqrt(2.0)}); }

ModelSpace schottky() {
  Eigen::Matrix2d a, b;
  a << 5.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0;
  b << 25.0 / 3.0, -32.0, 4.0 / 3.0, -5.0;
  return geometry::make_half_plane_space(F2, {a, b});
}

// Independent Moebius action for cross-checking apply().
HalfPlanePoint moebius(const Eigen::Matrix2d& m, const HalfPlanePoint& p) {
  // (a z + b) / (c z + d) for z = x + i y
  double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  double nre = a * p.x + b, nim = a * p.y;
  double dre = c * p.x + d, dim = c * p.y;
  double den = dre * dre + dim * dim;
  return {(nre * dre + nim * dim) / den, (nim * dre - nre * dim) / den};
}

double hp_dist(const HalfPlanePoint& p, const HalfPlanePoint& q) {
  double dx = p.x - q.x, dy = p.y - q.y;
  return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y));
}

}  // namespace

TEST_CASE("half-plane distances match the textbook formula") {
  ModelSpace hp = schottky();
  HalfPlanePoint i{0, 1}, i2{0, 2}, j{1, 1};
  CHECK(geometry::distance(hp, Point{i}, Point{i2}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(geometry::distance(hp, Point{i}, Point{j}) ==
        doctest::Approx(std::acosh(1.5)).epsilon(1e-12));
  CHECK(geometry::distance(hp, Point{i}, Point{i}) == doctest::Approx(0.0));

  oracles::Rng rng(5);
  for (int iter = 0; iter < 200; ++iter) {
    HalfPlanePoint p{4 * rng.unit() - 2, 0.1 + 3 * rng.unit()};
    HalfPlanePoint q{4 * rng.unit() - 2, 0.1 + 3 * rng.unit()};
    CHECK(geometry::distance(hp, Point{p}, Point{q}) ==
          doctest::Approx(hp_dist(p, q)).epsilon(1e-10));
  }
}

TEST_CASE("tiny half-plane distances keep relative accuracy") {
  ModelSpace hp = schottky();
  // The naive acosh formula loses every digit here; the series branch must not.
  for (double t : {1e-12, 1e-10, 1e-8}) {
    HalfPlanePoint p{0, 1}, q{0, 1 + t};
    double d = geometry::distance(hp, Point{p}, Point{q});
    CHECK(d == doctest::Approx(t).epsilon(1e-6));
  }
  // and the two branches agree near the crossover
  for (double t : {1e-5, 1e-4, 1e-3}) {
    HalfPlanePoint p{t, 1}, q{0, 1};
    double d = geometry::distance(hp, Point{p}, Point{q});
    CHECK(d == doctest::Approx(t).epsilon(1e-4));
  }
}

TEST_CASE("matrix action is isometric and composes") {
  ModelSpace hp = schottky();
  oracles::Rng rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    Word w = oracles::random_reduced(rng, F2, 1 + rng.below(6));
    auto iso = geometry::isometry_of_word(hp, w);
    HalfPlanePoint p{3 * rng.unit() - 1, 0.2 + 2 * rng.unit()};
    HalfPlanePoint q{3 * rng.unit() - 1, 0.2 + 2 * rng.unit()};
    double before = geometry::distance(hp, Point{p}, Point{q});
    Point gp = geometry::apply(hp, iso, Point{p});
    Point gq = geometry::apply(hp, iso, Point{q});
    // products of up to six generator matrices leave ~1e-8 of relative noise
    CHECK(geometry::distance(hp, gp, gq) == doctest::Approx(before).epsilon(1e-6));
  }
  // (gh) . p == g . (h . p)
  for (int iter = 0; iter < 300; ++iter) {
    Word g = oracles::random_reduced(rng, F2, 1 + rng.below(4));
    Word h = oracles::random_reduced(rng, F2, 1 + rng.below(4));
    auto ig = geometry::isometry_of_word(hp, g);
    auto ih = geometry::isometry_of_word(hp, h);
    auto igh = geometry::isometry_of_word(hp, group::multiply(F2, g, h));
    // compare the isometries themselves: distances between image points lose
    // accuracy near the boundary, where heights shrink to e^{-d}
    Eigen::Matrix2d ml = std::get<Eigen::Matrix2d>(igh.rep);
    Eigen::Matrix2d mr = std::get<Eigen::Matrix2d>(geometry::compose(hp, ig, ih).rep);
    // matrices represent isometries projectively, so compare unit-norm copies;
    // the residual scales with the factor norms over the result norm
    ml /= ml.norm();
    mr /= mr.norm();
    double amp = std::get<Eigen::Matrix2d>(ig.rep).norm() *
                 std::get<Eigen::Matrix2d>(ih.rep).norm() /
                 std::get<Eigen::Matrix2d>(igh.rep).norm();
    double diff = std::min((ml - mr).cwiseAbs().maxCoeff(), (ml + mr).cwiseAbs().maxCoeff());
    CHECK(diff < 1e-12 * std::max(1.0, amp));
  }
}

TEST_CASE("apply matches an independent Moebius evaluation") {
  ModelSpace hp = schottky();
  oracles::Rng rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    Word w = oracles::random_reduced(rng, F2, 1 + rng.below(4));
    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
    for (auto l : w) m = m * hp.generator_mat[static_cast<size_t>(l)];
    HalfPlanePoint p{2 * rng.unit() - 1, 0.3 + rng.unit()};
    HalfPlanePoint want = moebius(m, p);
    Point got = geometry::apply(hp, geometry::isometry_of_word(hp, w), Point{p});
    auto gp = std::get<HalfPlanePoint>(got);
    CHECK(gp.x == doctest::Approx(want.x).epsilon(1e-7));
    CHECK(gp.y == doctest::Approx(want.y).epsilon(1e-7));
  }
}

TEST_CASE("generator a translates its axis by exactly 2 log 3 at the basepoint") {
  ModelSpace hp = schottky();
  double disp = geometry::displacement_word(hp, W("a"));
  CHECK(std::abs(disp - 2.0 * std::log(3.0)) < 1e-12);
  // b has the same trace but its axis misses the basepoint
  CHECK(geometry::displacement_word(hp, W("b")) > 2.0 * std::log(3.0) + 1.0);
  // displacement is conjugation-invariant in trace terms: d(w) == d(w^-1)
  oracles::Rng rng(3);
  for (int iter = 0; iter < 100; ++iter) {
    Word w = oracles::random_reduced(rng, F2, 1 + rng.below(6));
    CHECK(geometry::displacement_word(hp, w) ==
          doctest::Approx(geometry::displacement_word(hp, group::invert(F2, w))).epsilon(1e-7));
  }
}

TEST_CASE("matrix normalization fixes scale and sign") {
  Eigen::Matrix2d m;
  m << 2, 0, 0, 2;  // det 4, normalizes to the identity
  Eigen::Matrix2d n = geometry::normalize_matrix(m);
  CHECK(n(0, 0) == doctest::Approx(1.0));
  CHECK(n(1, 1) == doctest::Approx(1.0));

  Eigen::Matrix2d neg;
  neg << -1, 0, 0, -1;  // det 1 but leading entry negative: flip
  n = geometry::normalize_matrix(neg);
  CHECK(n(0, 0) == doctest::Approx(1.0));

  Eigen::Matrix2d sing;
  sing << 1, 0, 0, 0;
  CHECK_THROWS_AS(geometry::normalize_matrix(sing), error);
  Eigen::Matrix2d flip;
  flip << 0, 1, 1, 0;  // det -1
  CHECK_THROWS_AS(geometry::normalize_matrix(flip), error);
}

TEST_CASE("matrix keys identify matrices up to sign and jitter") {
  ModelSpace hp = schottky();
  Eigen::Matrix2d a = hp.generator_mat[0];
  CHECK(geometry::matrix_key(a) == geometry::matrix_key(-a));
  Eigen::Matrix2d jitter = a;
  jitter(0, 0) += 1e-13;
  CHECK(geometry::matrix_key(a) == geometry::matrix_key(jitter));
  CHECK(geometry::matrix_key(a) != geometry::matrix_key(hp.generator_mat[2]));
}

TEST_CASE("tree vertex distances are weighted word distances") {
  ModelSpace tr = weighted_tree();
  const std::vector<double>& wt = tr.weights;
  oracles::Rng rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    Word u = oracles::random_reduced(rng, F2, rng.below(8));
    Word v = oracles::random_reduced(rng, F2, rng.below(8));
    Word rel = group::multiply(F2, group::invert(F2, u), v);
    double want = oracles::wlen(rel, wt);
    CHECK(geometry::distance(tr, Point{TreePoint{u, 0}}, Point{TreePoint{v, 0}}) ==
          doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(geometry::displacement_word(tr, W("ab")) == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("tree edge offsets shift distances along the last edge") {
  ModelSpace tr = unit_tree();
  TreePoint ab{W("ab"), 0.3};
  CHECK(geometry::distance(tr, Point{ab}, Point{TreePoint{W("ab"), 0}}) == doctest::Approx(0.3));
  CHECK(geometry::distance(tr, Point{ab}, Point{TreePoint{W("a"), 0}}) == doctest::Approx(0.7));
  // braches through the common vertex a
  CHECK(geometry::distance(tr, Point{ab}, Point{TreePoint{W("aB"), 0.4}}) ==
        doctest::Approx(0.7 + 0.6));
  // two offsets on the same edge
  CHECK(geometry::distance(tr, Point{TreePoint{W("ab"), 0.5}}, Point{ab}) == doctest::Approx(0.2));
}

TEST_CASE("Gromov products agree with the common-prefix picture on trees") {
  ModelSpace tr = unit_tree();
  Point e{TreePoint{{}, 0}};
  CHECK(geometry::gromov_product(tr, e, Point{TreePoint{W("ab"), 0}},
                                 Point{TreePoint{W("aB"), 0}}) == doctest::Approx(1.0));
  CHECK(geometry::gromov_product(tr, e, Point{TreePoint{W("b"), 0}},
                                 Point{TreePoint{W("B"), 0}}) == doctest::Approx(0.0));
  // base moved to a: products measure overlap seen from there
  CHECK(geometry::gromov_product(tr, Point{TreePoint{W("a"), 0}}, Point{TreePoint{W("ab"), 0}},
                                 Point{TreePoint{W("aB"), 0}}) == doctest::Approx(0.0));

  oracles::Rng rng(42);
  for (int iter = 0; iter < 300; ++iter) {
    Word x = oracles::random_reduced(rng, F2, rng.below(6));
    Word y = oracles::random_reduced(rng, F2, rng.below(6));
    Word z = oracles::random_reduced(rng, F2, rng.below(6));
    Point px{TreePoint{x, 0}}, py{TreePoint{y, 0}}, pz{TreePoint{z, 0}};
    double prod = geometry::gromov_product(tr, px, py, pz);
    double dxy = geometry::distance(tr, px, py);
    double dxz = geometry::distance(tr, px, pz);
    double dyz = geometry::distance(tr, py, pz);
    CHECK(prod == doctest::Approx((dxy + dxz - dyz) / 2.0).epsilon(1e-12));
    CHECK(prod >= -1e-12);
  }
}

TEST_CASE("four-point defects vanish on trees and stay bounded on the half-plane") {
  ModelSpace tr = unit_tree();
  oracles::Rng rng(8);
  std::vector<std::array<Point, 4>> quads;
  for (int iter = 0; iter < 200; ++iter) {
    std::array<Point, 4> q;
    for (auto& p : q) p = Point{TreePoint{oracles::random_reduced(rng, F2, 4 + rng.below(8)), 0}};
    quads.push_back(q);
  }
  auto audit = geometry::strong_hyperbolicity_audit(tr, quads, 2.0);
  CHECK(audit.used + audit.skipped == 200);
  CHECK(audit.max_violation <= 1e-9);

  ModelSpace hp = schottky();
  std::vector<std::array<Point, 4>> hquads;
  for (int iter = 0; iter < 200; ++iter) {
    std::array<Point, 4> q;
    for (auto& p : q) {
      Word w = oracles::random_reduced(rng, F2, 1 + rng.below(5));
      p = geometry::apply(hp, geometry::isometry_of_word(hp, w), hp.basepoint);
    }
    hquads.push_back(q);
  }
  auto haudit = geometry::strong_hyperbolicity_audit(hp, hquads, 2.0);
  CHECK(haudit.used > 0);
  // exponential decay of the defect: the implied constant stays moderate
  CHECK(haudit.fitted_L < 100.0);
}

TEST_CASE("weights must be positive and paired") {
  CHECK_THROWS_AS(geometry::make_tree_space(F2, {1.0}), error);
  CHECK_THROWS_AS(geometry::make_tree_space(F2, {1.0, -2.0}), error);
}
