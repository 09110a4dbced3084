#include "orbitcount/geometry.hpp"

#include <cmath>
#include <complex>

namespace orbitcount::geometry {

namespace {

// acosh(1+e) for small e >= 0, series branch keeps relative accuracy where the
// naive form loses half the significant digits.
double acosh1p(double e) {
  if (e < 1e-9) {
    double s = std::sqrt(2.0 * e);
    return s * (1.0 - e / 12.0 + 3.0 * e * e / 160.0);
  }
  double u = 1.0 + e;
  return std::log(u + std::sqrt(u * u - 1.0));
}

double half_plane_distance(const HalfPlanePoint& a, const HalfPlanePoint& b) {
  if (a.y <= 0.0 || b.y <= 0.0) throw error(errc::usage, "half-plane point needs y > 0");
  double dx = a.x - b.x, dy = a.y - b.y;
  double e = (dx * dx + dy * dy) / (2.0 * a.y * b.y);
  return acosh1p(e);
}


double weighted_len(const ModelSpace& s, const group::Word& w) {
  double acc = 0.0;
  for (group::Letter l : w) acc += s.weights[static_cast<size_t>(l)];
  return acc;
}

double tree_vertex_distance(const ModelSpace& s, const group::Word& u, const group::Word& v) {
  return weighted_len(s, group::multiply(s.gens, group::invert(s.gens, u), v));
}

struct EdgeEnds {
  // Endpoint vertices of the (possibly degenerate) edge a tree point sits on,
  // with the point's distance to each.
  group::Word child;   // the named vertex
  group::Word parent;  // child minus last letter (== child when offset == 0)
  double to_child = 0.0;
  double to_parent = 0.0;
  bool degenerate = true;  // point is a vertex
};

EdgeEnds tree_ends(const ModelSpace& s, const TreePoint& p) {
  EdgeEnds e;
  e.child = p.vertex;
  if (p.offset == 0.0) {
    e.parent = p.vertex;
    return e;
  }
  if (p.vertex.empty()) throw error(errc::usage, "tree basepoint vertex has no edge to offset into");
  double w = s.weights[static_cast<size_t>(p.vertex.back())];
  if (p.offset < 0.0 || p.offset > w)
    throw error(errc::usage, "tree point offset outside its edge");
  e.parent = group::Word(p.vertex.begin(), p.vertex.end() - 1);
  e.to_child = p.offset;
  e.to_parent = w - p.offset;
  e.degenerate = false;
  return e;
}

double tree_distance(const ModelSpace& s, const TreePoint& a, const TreePoint& b) {
  EdgeEnds ea = tree_ends(s, a), eb = tree_ends(s, b);
  if (!ea.degenerate && !eb.degenerate && ea.child == eb.child)
    return std::abs(a.offset - b.offset);  // same edge
  double best = std::numeric_limits<double>::infinity();
  const group::Word* averts[2] = {&ea.child, &ea.parent};
  double adist[2] = {ea.to_child, ea.to_parent};
  const group::Word* bverts[2] = {&eb.child, &eb.parent};
  double bdist[2] = {eb.to_child, eb.to_parent};
  int an = ea.degenerate ? 1 : 2, bn = eb.degenerate ? 1 : 2;
  for (int i = 0; i < an; ++i)
    for (int j = 0; j < bn; ++j) {
      double d = adist[i] + tree_vertex_distance(s, *averts[i], *bverts[j]) + bdist[j];
      best = std::min(best, d);
    }
  return best;
}

std::complex<double> moebius(const Eigen::Matrix2d& m, std::complex<double> z) {
  return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1));
}

}  // namespace

ModelSpace make_tree_space(const group::GeneratorSet& gens,
                           const std::vector<double>& weights_by_pair) {
  gens.validate();
  if (static_cast<int>(weights_by_pair.size()) != gens.rank)
    throw error(errc::usage, "make_tree_space: one weight per generator pair required");
  ModelSpace s;
  s.kind = ModelSpace::Kind::weighted_tree;
  s.gens = gens;
  s.weights.resize(gens.alphabet_size());
  for (int i = 0; i < gens.rank; ++i) {
    if (!(weights_by_pair[i] > 0.0))
      throw error(errc::usage, "make_tree_space: weights must be positive");
    s.weights[2 * i] = weights_by_pair[i];
    s.weights[static_cast<size_t>(gens.inverse(2 * i))] = weights_by_pair[i];
  }
  s.basepoint = TreePoint{};
  return s;
}

ModelSpace make_half_plane_space(const group::GeneratorSet& gens,
                                 const std::vector<Eigen::Matrix2d>& mats_by_pair,
                                 const HalfPlanePoint& basepoint) {
  gens.validate();
  if (static_cast<int>(mats_by_pair.size()) != gens.rank)
    throw error(errc::usage, "make_half_plane_space: one matrix per generator pair required");
  if (basepoint.y <= 0.0) throw error(errc::usage, "basepoint must satisfy y > 0");
  ModelSpace s;
  s.kind = ModelSpace::Kind::half_plane;
  s.gens = gens;
  s.generator_mat.resize(gens.alphabet_size());
  for (int i = 0; i < gens.rank; ++i) {
    Eigen::Matrix2d m = normalize_matrix(mats_by_pair[i]);
    Eigen::Matrix2d inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);  // adjugate; det is 1
    s.generator_mat[2 * i] = m;
    s.generator_mat[static_cast<size_t>(gens.inverse(2 * i))] = normalize_matrix(inv);
  }
  s.basepoint = basepoint;
  return s;
}

// Compensated 2x2 determinant (Kahan): ad - bc cancels catastrophically in
// plain arithmetic once entries grow, while this form keeps ~2 ulp relative
// accuracy at any scale.
static double det2(const Eigen::Matrix2d& m) {
  double w = m(0, 1) * m(1, 0);
  return std::fma(m(0, 0), m(1, 1), -w) + std::fma(-m(0, 1), m(1, 0), w);
}

Eigen::Matrix2d normalize_matrix(const Eigen::Matrix2d& m) {
  double det = det2(m);
  if (!(det > 0.0))
    throw error(errc::usage, "normalize_matrix: determinant must be positive");
  Eigen::Matrix2d out = m / std::sqrt(det);
  // fix the projective sign from a dominant entry: a small leading entry can
  // change sign between two roundings of the same isometry, a large one cannot
  double scale = out.cwiseAbs().maxCoeff();
  for (int i = 0; i < 4; ++i) {
    double v = out(i / 2, i % 2);
    if (std::abs(v) >= 0.5 * scale) {
      if (v < 0.0) out = -out;
      break;
    }
  }
  return out;
}

Eigen::Matrix2d scale_clamp(const Eigen::Matrix2d& m) {
  double s = m.cwiseAbs().maxCoeff();
  if (s > 1e8) return m / s;
  return m;
}

std::array<int64_t, 4> matrix_key(const Eigen::Matrix2d& m_in) {
  Eigen::Matrix2d m = normalize_matrix(m_in);
  std::array<int64_t, 4> k;
  for (int i = 0; i < 4; ++i) {
    // quantize mantissa and exponent separately; entries reach e^{d/2} and
    // would overflow any fixed-point scale
    int ex = 0;
    double man = std::frexp(m(i / 2, i % 2), &ex);
    k[i] = static_cast<int64_t>(ex) * 10'000'000'000'000 + llround(man * 1e12);
  }
  return k;
}

double distance(const ModelSpace& space, const Point& a, const Point& b) {
  if (space.is_tree()) return tree_distance(space, std::get<TreePoint>(a), std::get<TreePoint>(b));
  return half_plane_distance(std::get<HalfPlanePoint>(a), std::get<HalfPlanePoint>(b));
}

double gromov_product(const ModelSpace& space, const Point& base, const Point& y,
                      const Point& z) {
  return 0.5 * (distance(space, base, y) + distance(space, base, z) - distance(space, y, z));
}

Isometry identity_isometry(const ModelSpace& space) {
  if (space.is_tree()) return Isometry{group::Word{}};
  return Isometry{Eigen::Matrix2d::Identity().eval()};
}

Isometry isometry_of_letter(const ModelSpace& space, group::Letter l) {
  if (l < 0 || l >= space.gens.alphabet_size())
    throw error(errc::usage, "isometry_of_letter: letter outside alphabet");
  if (space.is_tree()) return Isometry{group::Word{l}};
  return Isometry{space.generator_mat[static_cast<size_t>(l)]};
}

Isometry isometry_of_word(const ModelSpace& space, const group::Word& w) {
  if (space.is_tree()) return Isometry{group::reduce(space.gens, w)};
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (group::Letter l : w) m = scale_clamp(m * space.generator_mat[static_cast<size_t>(l)]);
  return Isometry{m};
}

Isometry compose(const ModelSpace& space, const Isometry& a, const Isometry& b) {
  if (space.is_tree())
    return Isometry{
        group::multiply(space.gens, std::get<group::Word>(a.rep), std::get<group::Word>(b.rep))};
  return Isometry{
      scale_clamp(std::get<Eigen::Matrix2d>(a.rep) * std::get<Eigen::Matrix2d>(b.rep))};
}

Point apply(const ModelSpace& space, const Isometry& iso, const Point& p) {
  if (!space.is_tree()) {
    const auto& m = std::get<Eigen::Matrix2d>(iso.rep);
    const auto& hp = std::get<HalfPlanePoint>(p);
    std::complex<double> w = moebius(m, {hp.x, hp.y});
    return HalfPlanePoint{w.real(), w.imag()};
  }
  const auto& h = std::get<group::Word>(iso.rep);
  const auto& tp = std::get<TreePoint>(p);
  if (tp.offset == 0.0)
    return TreePoint{group::multiply(space.gens, h, tp.vertex), 0.0};
  // Map both endpoints of the point's edge; the image edge's child vertex is
  // the longer image word.
  EdgeEnds e = tree_ends(space, tp);
  group::Word ic = group::multiply(space.gens, h, e.child);
  group::Word ip = group::multiply(space.gens, h, e.parent);
  if (ic.size() > ip.size()) return TreePoint{ic, tp.offset};
  double w = space.weights[static_cast<size_t>(ip.back())];
  double off = w - tp.offset;
  if (off == 0.0) return TreePoint{group::Word(ip.begin(), ip.end() - 1), 0.0};
  return TreePoint{ip, off};
}

double displacement(const ModelSpace& space, const Isometry& iso) {
  if (space.is_tree()) return distance(space, apply(space, iso, space.basepoint), space.basepoint);
  // cosh d(x0, m.x0) = |C^-1 m C|_F^2 / (2 det m), C = [sqrt y, x/sqrt y; 0,
  // 1/sqrt y] the det-1 map i -> x0. Sums of squares cannot cancel and det2
  // is accurate at any scale, so this works where coordinates of m.x0 drown
  // in rounding noise (heights shrink like e^{-d}).
  const auto& m = std::get<Eigen::Matrix2d>(iso.rep);
  const auto& bp = std::get<HalfPlanePoint>(space.basepoint);
  double ry = std::sqrt(bp.y);
  Eigen::Matrix2d c, cinv;
  c << ry, bp.x / ry, 0.0, 1.0 / ry;
  cinv << 1.0 / ry, -bp.x / ry, 0.0, ry;
  Eigen::Matrix2d n = cinv * m * c;
  double det = det2(n);
  if (!(det > 0.0))
    throw error(errc::usage, "displacement: isometry matrix must have positive determinant");
  double e = n.squaredNorm() / (2.0 * det) - 1.0;
  return acosh1p(std::max(0.0, e));
}

double displacement_word(const ModelSpace& space, const group::Word& w) {
  if (space.is_tree()) {
    const auto& bp = std::get<TreePoint>(space.basepoint);
    if (bp.vertex.empty() && bp.offset == 0.0) {
      double acc = 0.0;
      for (group::Letter l : group::reduce(space.gens, w))
        acc += space.weights[static_cast<size_t>(l)];
      return acc;
    }
  }
  return displacement(space, isometry_of_word(space, w));
}

HyperbolicityAudit strong_hyperbolicity_audit(const ModelSpace& space,
                                              const std::vector<std::array<Point, 4>>& quadruples,
                                              double R0) {
  HyperbolicityAudit out;
  for (const auto& q : quadruples) {
    double dxy = distance(space, q[0], q[1]);
    double dzt = distance(space, q[2], q[3]);
    double dxz = distance(space, q[0], q[2]);
    double dyt = distance(space, q[1], q[3]);
    double R = dxy + dzt - dxz - dyt;
    if (R < R0) {
      ++out.skipped;
      continue;
    }
    double dxt = distance(space, q[0], q[3]);
    double dzy = distance(space, q[2], q[1]);
    double defect = std::abs(dxy + dzt - dxt - dzy);
    out.max_violation = std::max(out.max_violation, defect);
    out.fitted_L = std::max(out.fitted_L, defect * std::exp(R / 2.0));
    ++out.used;
  }
  return out;
}

}  // namespace orbitcount::geometry
