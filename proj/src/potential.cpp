#include "orbitcount/potential.hpp"

#include <algorithm>
#include <cmath>

namespace orbitcount::potential {

using coding::AugmentedShift;
using geometry::ModelSpace;

namespace {

// Strips the trailing 0-run and validates admissibility of the remainder.
std::span<const int> strip_terminal(const AugmentedShift& shift, std::span<const int> path) {
  if (path.empty()) throw error(errc::usage, "roof: empty path");
  size_t end = path.size();
  while (end > 1 && path[end - 1] == 0) --end;
  for (size_t i = 0; i + 1 < end; ++i) {
    if (path[i] == 0 || path[i + 1] == 0)
      throw error(errc::usage, "roof: interior terminal state");
    if (!shift.has_edge(path[i], path[i + 1]))
      throw error(errc::usage, "roof: inadmissible transition");
  }
  return path.subspan(0, end);
}

group::Word spelled_word(const AugmentedShift& shift, std::span<const int> core, size_t from) {
  group::Word w;
  for (size_t i = from; i + 1 < core.size(); ++i)
    w.push_back(shift.label_of(core[i], core[i + 1]));
  return w;
}

}  // namespace

double roof_on_terminating(const ModelSpace& space, const AugmentedShift& shift,
                           std::span<const int> path) {
  std::span<const int> core = strip_terminal(shift, path);
  if (core.size() == 1) return 0.0;
  if (core[0] == 0) return 0.0;  // only the all-terminal sequence starts at 0
  double full = geometry::displacement_word(space, spelled_word(shift, core, 0));
  if (core.size() == 2) return full;
  return full - geometry::displacement_word(space, spelled_word(shift, core, 1));
}

CylinderPotential build_cylinder_potential(const ModelSpace& space, const AugmentedShift& shift,
                                           const std::vector<int>& members, int depth) {
  if (depth < 1) throw error(errc::usage, "build_cylinder_potential: depth >= 1");
  CylinderPotential table;
  table.depth = depth;
  std::vector<char> in(static_cast<size_t>(shift.num_states), 0);
  for (int v : members) in[static_cast<size_t>(v)] = 1;

  std::vector<int> path;
  auto dfs = [&](auto&& self, int v) -> void {
    path.push_back(v);
    if (static_cast<int>(path.size()) == depth + 1) {
      table.values.emplace_back(path, roof_on_terminating(space, shift, path));
    } else {
      for (const auto& [to, l] : shift.out_labels[v]) {
        (void)l;
        if (in[static_cast<size_t>(to)]) self(self, to);
      }
      if (v == 0 && in[0]) self(self, 0);  // terminal self-loop
    }
    path.pop_back();
  };
  for (int v : members) dfs(dfs, v);
  std::sort(table.values.begin(), table.values.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return table;
}

std::pair<double, double> birkhoff_displacement_check(const ModelSpace& space,
                                                      const AugmentedShift& shift,
                                                      std::span<const int> path_from_start) {
  std::span<const int> core = strip_terminal(shift, path_from_start);
  if (core[0] != shift.start)
    throw error(errc::usage, "birkhoff_displacement_check: path must begin at the start state");
  double birkhoff = 0.0;
  for (size_t k = 0; k + 1 < core.size(); ++k)
    birkhoff += roof_on_terminating(space, shift, core.subspan(k));
  double disp = geometry::displacement_word(space, spelled_word(shift, core, 0));
  return {birkhoff, disp};
}

std::vector<HoelderRow> hoelder_audit(const ModelSpace& space, const AugmentedShift& shift,
                                      const std::vector<int>& depths, int probe_depth,
                                      long node_budget) {
  std::vector<HoelderRow> rows;
  const int nauto = shift.num_states - 1;

  for (int n : depths) {
    if (n < 1) throw error(errc::usage, "hoelder_audit: depths must be >= 1");
    // Shrink the probe until states * branching^(n+probe) fits the budget.
    int probe = probe_depth;
    // Typical branching: the start state's fan-out is a one-off, so take the
    // worst degree among the recurrent part when there is one.
    double branching = 1.0;
    for (int v = 1; v < shift.num_states; ++v)
      if (v != shift.start || shift.num_states <= 2)
        branching = std::max(branching, static_cast<double>(shift.out_labels[v].size()));
    auto cost = [&](int p) {
      double c = nauto;
      for (int i = 0; i < n + p; ++i) c *= branching;
      return c;
    };
    while (probe > 2 && cost(probe) > static_cast<double>(node_budget)) --probe;

    HoelderRow row;
    row.depth = n;
    row.probe_depth = probe;

    // Dual running isometries: full product from the path head, tail product
    // skipping the first edge. The terminating roof at each node is then
    // O(1) away for matrix models.
    std::vector<geometry::Isometry> full{geometry::identity_isometry(space)};
    std::vector<geometry::Isometry> tail{geometry::identity_isometry(space)};

    double cyl_min = 0.0, cyl_max = 0.0;
    auto roof_here = [&]() -> double {
      size_t edges = full.size() - 1;
      if (edges == 0) return 0.0;
      double d_full = geometry::displacement(space, full.back());
      if (edges == 1) return d_full;
      return d_full - geometry::displacement(space, tail.back());
    };

    auto walk = [&](auto&& self, int v, int depth_edges) -> void {
      if (depth_edges >= n) {
        double r = roof_here();
        if (depth_edges == n) {
          cyl_min = cyl_max = r;
        } else {
          cyl_min = std::min(cyl_min, r);
          cyl_max = std::max(cyl_max, r);
        }
        if (depth_edges == n + probe) {
          return;
        }
      }
      if (depth_edges == n) ++row.cylinders;
      for (const auto& [to, l] : shift.out_labels[v]) {
        geometry::Isometry step = geometry::isometry_of_letter(space, l);
        full.push_back(geometry::compose(space, full.back(), step));
        tail.push_back(full.size() == 2 ? geometry::identity_isometry(space)
                                        : geometry::compose(space, tail.back(), step));
        self(self, to, depth_edges + 1);
        full.pop_back();
        tail.pop_back();
      }
      if (depth_edges == n)
        row.max_oscillation = std::max(row.max_oscillation, cyl_max - cyl_min);
    };

    // Cylinders must stay inside the automaton part; a cylinder containing the
    // terminal state has zero oscillation by construction.
    for (int v = 1; v < shift.num_states; ++v) walk(walk, v, 0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace orbitcount::potential
