#pragma once
// Thermodynamic layer: finite-depth transfer operators per recurrent
// component, Perron eigenvalues by power iteration (block-averaged over the
// component period), pressure roots, the system critical exponent, the
// lattice/non-lattice dichotomy, and periodic orbit counts.
//
// Only finite cylinder discretizations are computed here; no essential
// spectral radius or quasicompactness bound is certified numerically.

#include <functional>
#include <span>
#include <vector>

#include "orbitcount/coding.hpp"
#include "orbitcount/geometry.hpp"
#include "orbitcount/potential.hpp"

namespace orbitcount::spectral {

// Terminating roof value of an augmented-shift state path.
using RoofFn = std::function<double(std::span<const int>)>;

RoofFn roof_from_space(const geometry::ModelSpace& space, const coding::AugmentedShift& shift);

struct TransferStructure {
  int component = -1;
  int depth = 0;
  int dim = 0;     // depth-edge paths inside the component
  int period = 1;  // gcd of component cycle lengths
  // Entry i moves mass col[i] -> row[i] with weight exp(-t * rval[i]); rval is
  // the roof of the one-step combined path, independent of t.
  std::vector<int> row, col;
  std::vector<double> rval;
  std::vector<std::vector<int>> paths;  // index -> (depth+1)-state path
};

TransferStructure build_transfer_structure(const coding::AugmentedShift& shift,
                                           const coding::ComponentGraph& cg, int component,
                                           int depth, const RoofFn& roof);

// log of the Perron eigenvalue of the weighted transfer matrix at parameter t.
double pressure(const TransferStructure& ts, double t, double rel_tol = 1e-12);

// Root of t -> pressure(t); brackets by doubling (up to 60 times), bisects to
// tol, and checks the central-difference derivative is negative at the root.
double critical_exponent(const TransferStructure& ts, double tol = 1e-10);

struct PressureSample {
  double t = 0.0, value = 0.0, derivative = 0.0;
};
std::vector<PressureSample> pressure_curve(const TransferStructure& ts, double lo, double hi,
                                           double step);

struct SystemDelta {
  double delta = 0.0;
  // Indexed by component; NaN for wandering components and the terminal block.
  std::vector<double> exponents;
  std::vector<bool> maximal;
  int multiplicity = 0;  // most maximal components on one condensation path
  std::vector<TransferStructure> structures;  // for components with exponents
};

SystemDelta system_delta(const coding::AugmentedShift& shift, const coding::ComponentGraph& cg,
                         int depth, const RoofFn& roof);

enum class LatticeVerdict { arithmetic, non_arithmetic, inconclusive };

struct LatticeResult {
  LatticeVerdict verdict = LatticeVerdict::inconclusive;
  double span = 0.0;        // common span b when arithmetic
  int distinct_lengths = 0; // cycle lengths that contributed sums
  long sums_used = 0;
};

// Collects Birkhoff sums of the depth-approximated roof over all closed paths
// of length <= max_period in the component and reduces them by a real gcd
// with the given tolerance (the pairwise rationality test).
LatticeResult lattice_test(const coding::AugmentedShift& shift, const coding::ComponentGraph& cg,
                           int component, int depth, const RoofFn& roof, int max_period = 10,
                           double tol = 1e-9);

// Number of rotation classes of closed paths (periodic orbits, powers counted
// separately) with Birkhoff sum <= T. Throws errc::budget past orbit_budget.
long periodic_orbit_count(const coding::AugmentedShift& shift, const coding::ComponentGraph& cg,
                          int component, int depth, const RoofFn& roof, double T,
                          long orbit_budget = 10000000);

}  // namespace orbitcount::spectral
