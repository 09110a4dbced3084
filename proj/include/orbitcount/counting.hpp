#pragma once
// Orbit counting by direct enumeration: full orbits, centralizer-coset
// orbits, conjugacy classes, and cylinder-restricted classes, all counted
// against a grid of radii. Enumeration is pruned by a linear lower envelope
// on displacement versus word length; the envelope is estimated from shallow
// samples and re-checked on every enumerated word (violations are hard
// errors, not warnings).

#include <string>
#include <vector>

#include "orbitcount/coding.hpp"
#include "orbitcount/geometry.hpp"
#include "orbitcount/group.hpp"

namespace orbitcount::counting {

// displacement >= inv_lambda * word_length - c for every enumerated word.
struct PruningEnvelope {
  double inv_lambda = 0.0;
  double c = 0.0;
  int sample_depth = 0;
};

struct CountSeries {
  std::string kind;
  std::vector<double> grid;      // ascending radii
  std::vector<long> counts;      // cumulative: elements with displacement <= grid[i]
  std::vector<long> increments;  // counts[i] - counts[i-1]
  long enumerated = 0;           // words visited during the scan
};

struct CountOptions {
  long word_budget = 20000000;
  int envelope_sample_depth = 6;
};

std::vector<double> uniform_grid(double t_max, double step = 1.0);

// All group elements (reduced words) with displacement within the grid.
CountSeries count_full_orbit(const geometry::ModelSpace& space, const std::vector<double>& grid,
                             const CountOptions& opts = {});

// Words of the acceptor language (one per centralizer coset) by displacement.
CountSeries count_coset_orbit(const geometry::ModelSpace& space,
                              const coding::LabeledAutomaton& coset_acceptor,
                              const std::vector<double>& grid, const CountOptions& opts = {});

// Distinct conjugates h^{-1} g h, h running over the acceptor language, by
// displacement of the conjugate. Duplicate conjugates are hard errors.
CountSeries count_conjugacy_class(const geometry::ModelSpace& space, const group::Word& g,
                                  const coding::LabeledAutomaton& coset_acceptor,
                                  const std::vector<double>& grid, const CountOptions& opts = {});

// Same count restricted to conjugating words that start with the prefix u.
CountSeries count_cylinder_restricted(const geometry::ModelSpace& space, const group::Word& g,
                                      const coding::LabeledAutomaton& coset_acceptor,
                                      const group::Word& u, const std::vector<double>& grid,
                                      const CountOptions& opts = {});

// Envelope the conjugacy scans prune with, and the conjugator length it
// implies at a given radius (how deep the acceptor language is actually used,
// hence how deep it should stay oracle-verified).
PruningEnvelope conjugacy_pruning_envelope(const geometry::ModelSpace& space, const group::Word& g,
                                           const coding::LabeledAutomaton& coset_acceptor,
                                           const CountOptions& opts = {});
// Same, for plain coset-orbit scans (no conjugation), whose depth cap at a
// given radius is generally deeper than the conjugacy one.
PruningEnvelope coset_pruning_envelope(const geometry::ModelSpace& space,
                                       const coding::LabeledAutomaton& coset_acceptor,
                                       const CountOptions& opts = {});
int envelope_depth_cap(const PruningEnvelope& env, double t_max);

// Asymptotic length shift of conjugates whose conjugator starts with u:
// d(h^{-1}gh) - 2 d(h) -> tau(u) as h deepens inside the cylinder.
double tau(const geometry::ModelSpace& space, const group::Word& g, const group::Word& u);

struct LengthAuditRow {
  int depth = 0;
  double max_error = 0.0;
  long samples = 0;
};

// Per-depth worst deviation |d(h^{-1}gh) - 2 d(h) - tau(prefix(h))| over
// acceptor words h, truncated deterministically to the sample budget.
std::vector<LengthAuditRow> length_comparison_audit(const geometry::ModelSpace& space,
                                                    const group::Word& g,
                                                    const coding::LabeledAutomaton& coset_acceptor,
                                                    int prefix_len, int max_depth,
                                                    long sample_budget = 200000);

struct CylinderEstimate {
  group::Word prefix;
  long count = 0;      // conjugates from this cylinder within t_ref
  double tau = 0.0;
  double c_u = 0.0;    // count * exp(-delta * (t_ref - tau) / 2)
};

struct ConstantEstimate {
  double c = 0.0;  // sum of c_u * exp(-delta * tau / 2)
  double t_ref = 0.0;
  double delta = 0.0;
  bool low_confidence = false;  // some cylinder held fewer than 50 conjugates
  std::vector<CylinderEstimate> rows;
};

// Leading-constant estimate for the conjugacy growth law C * exp(delta T / 2),
// aggregated over conjugator cylinders of the given prefix length at the
// largest grid radius.
ConstantEstimate estimate_C(const geometry::ModelSpace& space, const group::Word& g,
                            const coding::LabeledAutomaton& coset_acceptor, int prefix_len,
                            double delta, const std::vector<double>& grid,
                            const CountOptions& opts = {});

struct PoincareValue {
  double s = 0.0;
  double partial = 0.0;  // sum of increments[i] * exp(-s * grid[i])
  double tail = 0.0;     // geometric tail estimate past the grid
  bool divergent = false;
};

// Truncated Poincare-type series of a count series at exponent s; rate is the
// believed exponential growth rate of the counts (divergence threshold).
PoincareValue poincare_partial(const CountSeries& series, double s, double rate);

struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log N - fit| over used points
  double t_lo = 0.0, t_hi = 0.0;
  int points = 0;
  double lattice_span = 0.0;  // gcd of gaps between realized grid points
};

// Least-squares slope of log counts over grid points in [t_lo, t_hi]. In
// lattice mode only points where the count actually increased are used, so
// a lattice length spectrum does not flatten the fit.
RateFit fit_rate(const CountSeries& series, double t_lo, double t_hi, bool lattice_mode = true);

}  // namespace orbitcount::counting
