#pragma once
// The roof function of the suspension-style counting machinery.
//
// A terminating sequence is a shift path (v_0, ..., v_l, 0, 0, ...). Its roof
// value is the displacement increment contributed by the first edge:
//   r(v_0, 0, ...)        = 0
//   r(v_0, v_1, 0, ...)   = d(g_0 . x0, x0)
//   r(v_0, ..., v_l, 0..) = d(g_0...g_{l-1} . x0, x0) - d(g_1...g_{l-1} . x0, x0)
// where g_i labels the edge (v_i, v_{i+1}). Birkhoff sums along a path from
// the start vertex telescope to the displacement of the spelled word.

#include <span>
#include <vector>

#include "orbitcount/coding.hpp"
#include "orbitcount/geometry.hpp"

namespace orbitcount::potential {

// `path` uses augmented-shift state ids and may carry a trailing run of 0s.
double roof_on_terminating(const geometry::ModelSpace& space,
                           const coding::AugmentedShift& shift, std::span<const int> path);

struct CylinderPotential {
  int depth = 0;  // number of edges per path
  // Keys are (depth+1)-state paths inside one component; sorted lexicographically.
  std::vector<std::pair<std::vector<int>, double>> values;
};

// Roof table over the depth-edge paths whose states all lie in `members`.
CylinderPotential build_cylinder_potential(const geometry::ModelSpace& space,
                                           const coding::AugmentedShift& shift,
                                           const std::vector<int>& members, int depth);

// (Birkhoff sum of the roof along the path, displacement of the spelled word).
// The two agree to 1e-9 by construction; tests assert it.
std::pair<double, double> birkhoff_displacement_check(const geometry::ModelSpace& space,
                                                      const coding::AugmentedShift& shift,
                                                      std::span<const int> path_from_start);

struct HoelderRow {
  int depth = 0;
  double max_oscillation = 0.0;
  int probe_depth = 0;   // extension depth actually explored
  long cylinders = 0;
};

// Worst oscillation of terminating roof values over all extensions of each
// depth-n cylinder. node_budget caps total explored extension nodes per row;
// the probe depth adapts downward to stay inside it (deterministically).
std::vector<HoelderRow> hoelder_audit(const geometry::ModelSpace& space,
                                      const coding::AugmentedShift& shift,
                                      const std::vector<int>& depths, int probe_depth = 6,
                                      long node_budget = 4000000);

}  // namespace orbitcount::potential
