#pragma once
// Flat INI-style run configuration: [section] headers, key = value lines,
// '#' comments. Unknown keys are config errors so typos cannot silently fall
// back to defaults. Numeric values accept p/q rational literals.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "orbitcount/geometry.hpp"
#include "orbitcount/group.hpp"

namespace orbitcount::config {

struct Config {
  // [group]
  int rank = 2;
  std::vector<int> involution;  // optional override; letters
  std::vector<int> order;       // optional shortlex letter order

  // [space]
  std::string kind = "tree";             // "tree" or "half_plane"
  std::vector<double> weights;           // per generator pair (trees)
  std::vector<Eigen::Matrix2d> matrices; // per generator pair (half-plane)
  double basepoint_x = 0.0;
  double basepoint_y = 1.0;

  // [conjugacy]
  std::string g = "a";
  std::string cylinder_prefix;  // optional; default: least accepted first letter

  // [coding]
  int signature_radius = -1;  // -1: automatic
  int verify_len = 8;
  int state_budget = 100000;

  // [potential]
  int depth = -1;  // cylinder depth; -1: 2 on trees, 6 on the half-plane
  std::vector<int> hoelder_depths = {1, 2, 3};

  // [spectral]
  long orbit_budget = 10000000;
  double curve_lo = 0.0, curve_hi = 2.0, curve_step = 0.1;
  int lattice_max_period = 8;

  // [counting]
  double t_max_full = 12.0;
  double t_max_conj = 21.0;
  double grid_step = 1.0;
  double fit_lo = 7.0, fit_hi = 21.0;
  int cyl_prefix_len = 1;
  long word_budget = 20000000;
  int envelope_sample_depth = 6;

  int resolved_depth() const { return depth >= 0 ? depth : (kind == "tree" ? 2 : 6); }

  group::GeneratorSet make_gens() const;
  geometry::ModelSpace make_space() const;
  group::Word g_word() const;

  uint64_t hash() const;  // stable digest of the parsed values
};

Config parse_config(std::istream& in);
Config load_config(const std::string& path);

}  // namespace orbitcount::config
