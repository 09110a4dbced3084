#pragma once
// Two negatively curved model spaces behind one interface:
//  - the hyperbolic upper half-plane, acted on by det-1 real 2x2 matrices
//    through Moebius transformations, and
//  - the Cayley tree of a free group with per-generator edge weights, acted
//    on by left multiplication.
//
// Matrices are renormalized to det 1 after every product and sign-normalized
// (first nonzero entry positive) so equality keys are well defined. Tree
// points carry (vertex word, offset) where the offset backs up along the
// vertex's last edge; counting code only ever uses vertices.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "orbitcount/group.hpp"

namespace orbitcount::geometry {

struct HalfPlanePoint {
  double x = 0.0;
  double y = 1.0;  // y > 0
};

struct TreePoint {
  group::Word vertex;
  double offset = 0.0;  // distance back along the edge into `vertex`; 0 = the vertex
};

using Point = std::variant<HalfPlanePoint, TreePoint>;

struct Isometry {
  std::variant<Eigen::Matrix2d, group::Word> rep;
};

struct ModelSpace {
  enum class Kind { half_plane, weighted_tree };
  Kind kind = Kind::weighted_tree;
  group::GeneratorSet gens;
  std::vector<double> weights;                // per letter; weight[l] == weight[l^-1] > 0
  std::vector<Eigen::Matrix2d> generator_mat; // per letter (half-plane only)
  Point basepoint;

  bool is_tree() const { return kind == Kind::weighted_tree; }
};

// weights_by_pair[i] is the weight of generator pair i (letters 2i, 2i+1).
ModelSpace make_tree_space(const group::GeneratorSet& gens,
                           const std::vector<double>& weights_by_pair);
// mats_by_pair[i] acts for letter 2i; letter 2i+1 gets the inverse matrix.
ModelSpace make_half_plane_space(const group::GeneratorSet& gens,
                                 const std::vector<Eigen::Matrix2d>& mats_by_pair,
                                 const HalfPlanePoint& basepoint = HalfPlanePoint{0.0, 1.0});

// --- matrix helpers (half-plane) -------------------------------------------

// Rescales to det 1 (throws errc::usage if det <= 0) and flips the sign so
// that a dominant entry is positive. Meant for configured input matrices and
// for canonical keys of moderate-sized isometries; the determinant of a huge
// product carries an O(eps |m|^2) error, so its det-1 representative is only
// trustworthy while entries stay below ~1e6.
Eigen::Matrix2d normalize_matrix(const Eigen::Matrix2d& m);
// Rounded key for dedup sets: per entry of the normalized matrix, exponent and
// 1e-12-quantized mantissa packed into one integer. Valid in the same range as
// normalize_matrix.
std::array<int64_t, 4> matrix_key(const Eigen::Matrix2d& m);
// Divides out the magnitude once entries leave the comfortable floating range.
// Isometry matrices act projectively, so every derived quantity (the Moebius
// action, displacement) is unchanged; long products just stop overflowing.
Eigen::Matrix2d scale_clamp(const Eigen::Matrix2d& m);

// --- core operations --------------------------------------------------------

double distance(const ModelSpace& space, const Point& a, const Point& b);
double gromov_product(const ModelSpace& space, const Point& base, const Point& y,
                      const Point& z);

Isometry identity_isometry(const ModelSpace& space);
Isometry isometry_of_letter(const ModelSpace& space, group::Letter l);
Isometry isometry_of_word(const ModelSpace& space, const group::Word& w);
Isometry compose(const ModelSpace& space, const Isometry& a, const Isometry& b);
Point apply(const ModelSpace& space, const Isometry& iso, const Point& p);

// On the half-plane this evaluates cosh d(x0, m.x0) = |C^-1 m C|_F^2 / (2 det m)
// with C the unit-determinant map i -> x0. The Frobenius norm has no
// cancellation and the compensated determinant keeps full relative accuracy,
// so the formula survives matrices far too large for coordinate arithmetic,
// whose image heights collapse into rounding noise near the boundary.
double displacement(const ModelSpace& space, const Isometry& iso);
// d(w . x0, x0); the hot path for counting. Tree spaces with the origin
// basepoint short-circuit to the weighted word length.
double displacement_word(const ModelSpace& space, const group::Word& w);

// --- strong hyperbolicity audit ---------------------------------------------
//
// For quadruples (x,y,z,t) with R := d(x,y)+d(z,t)-d(x,z)-d(y,t) >= R0 the
// four-point defect |d(x,y)+d(z,t)-d(x,t)-d(z,y)| should be <= L e^{-R/2}.
// (On the half-plane the defect of a gap-R quadruple really does shrink like
// e^{-R/2}, not e^{-R}; on trees it is exactly zero.)
// Reports the worst raw defect and the implied constant max(defect * e^{R/2}).

struct HyperbolicityAudit {
  double max_violation = 0.0;  // max raw defect among used quadruples
  double fitted_L = 0.0;       // max defect * e^{R/2}
  int used = 0;
  int skipped = 0;  // quadruples with R < R0
};

HyperbolicityAudit strong_hyperbolicity_audit(const ModelSpace& space,
                                              const std::vector<std::array<Point, 4>>& quadruples,
                                              double R0 = 5.0);

}  // namespace orbitcount::geometry
