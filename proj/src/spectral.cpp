#include "orbitcount/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "orbitcount/errors.hpp"
#include "orbitcount/group.hpp"

namespace orbitcount::spectral {

namespace {

[[noreturn]] void fail(const char* what) { throw error(errc::spectral, what); }

// All depth-edge paths whose states lie inside the component, in lexicographic
// order (members are sorted and successor lists are sorted).
std::vector<std::vector<int>> component_paths(const coding::AugmentedShift& shift,
                                              const std::vector<int>& members, int depth) {
  std::vector<char> in_comp(shift.num_states, 0);
  for (int v : members) in_comp[v] = 1;
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  auto dfs = [&](auto&& self, int v) -> void {
    path.push_back(v);
    if (static_cast<int>(path.size()) == depth + 1) {
      out.push_back(path);
    } else {
      for (int w : shift.succ[v])
        if (in_comp[w]) self(self, w);
    }
    path.pop_back();
  };
  for (int v : members) dfs(dfs, v);
  return out;
}

using WindowCache = std::unordered_map<std::vector<int>, double, group::WordHash>;

double window_roof(WindowCache& cache, const RoofFn& roof, const std::vector<int>& window) {
  auto it = cache.find(window);
  if (it != cache.end()) return it->second;
  double r = roof(window);
  cache.emplace(window, r);
  return r;
}

// Closed paths of length len inside the component whose minimal state starts
// the path; visit() sees the state sequence (v0..v_{len-1}) with the wrap edge
// v_{len-1} -> v0 already checked. Each rotation class is visited at least
// once (once per occurrence of its minimal state), so callers dedup.
template <typename Visit>
void for_each_closed_path(const coding::AugmentedShift& shift, const std::vector<char>& in_comp,
                          const std::vector<int>& members, int len, Visit&& visit) {
  std::vector<int> path;
  for (int v0 : members) {
    auto dfs = [&](auto&& self, int v) -> void {
      path.push_back(v);
      if (static_cast<int>(path.size()) == len) {
        if (shift.has_edge(v, v0)) visit(path);
      } else {
        for (int w : shift.succ[v])
          if (in_comp[w] && w >= v0) self(self, w);
      }
      path.pop_back();
    };
    dfs(dfs, v0);
  }
}

std::vector<int> canonical_rotation(const std::vector<int>& cycle) {
  const int l = static_cast<int>(cycle.size());
  std::vector<int> best = cycle, cand(l);
  for (int s = 1; s < l; ++s) {
    for (int k = 0; k < l; ++k) cand[k] = cycle[(s + k) % l];
    if (cand < best) best = cand;
  }
  return best;
}

// Birkhoff sum of the depth-approximated roof around a cycle: sum over all
// cyclic windows of depth edges.
double cycle_birkhoff(WindowCache& cache, const RoofFn& roof, const std::vector<int>& cycle,
                      int depth) {
  const int l = static_cast<int>(cycle.size());
  std::vector<int> window(depth + 1);
  double sum = 0.0;
  for (int k = 0; k < l; ++k) {
    for (int j = 0; j <= depth; ++j) window[j] = cycle[(k + j) % l];
    sum += window_roof(cache, roof, window);
  }
  return sum;
}

// Nearest-integer real Euclid step; robust to values just below a multiple.
double real_gcd(double a, double b, double tol) {
  a = std::abs(a);
  b = std::abs(b);
  if (a < b) std::swap(a, b);
  while (b > tol) {
    double r = std::abs(a - std::round(a / b) * b);
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

RoofFn roof_from_space(const geometry::ModelSpace& space, const coding::AugmentedShift& shift) {
  return [&space, &shift](std::span<const int> path) {
    return potential::roof_on_terminating(space, shift, path);
  };
}

TransferStructure build_transfer_structure(const coding::AugmentedShift& shift,
                                           const coding::ComponentGraph& cg, int component,
                                           int depth, const RoofFn& roof) {
  if (component < 0 || component >= cg.num_components)
    throw error(errc::usage, "component index out of range");
  if (depth < 0) throw error(errc::usage, "transfer depth must be nonnegative");
  if (!cg.has_cycle[component]) fail("transfer operator needs a recurrent component");

  TransferStructure ts;
  ts.component = component;
  ts.depth = depth;
  auto period = coding::component_period(shift, cg, component);
  ts.period = period ? *period : 1;
  ts.paths = component_paths(shift, cg.members[component], depth);
  ts.dim = static_cast<int>(ts.paths.size());
  if (ts.dim == 0) fail("no cylinder paths in component");

  std::map<std::vector<int>, int> index_of;
  for (int i = 0; i < ts.dim; ++i) index_of.emplace(ts.paths[i], i);

  std::vector<char> in_comp(shift.num_states, 0);
  for (int v : cg.members[component]) in_comp[v] = 1;

  std::vector<int> combined(depth + 2), shifted(depth + 1);
  for (int c = 0; c < ts.dim; ++c) {
    const auto& p = ts.paths[c];
    std::copy(p.begin(), p.end(), combined.begin());
    for (int w : shift.succ[p.back()]) {
      if (!in_comp[w]) continue;
      combined[depth + 1] = w;
      std::copy(combined.begin() + 1, combined.end(), shifted.begin());
      auto it = index_of.find(shifted);
      if (it == index_of.end()) fail("shifted cylinder path missing from component");
      ts.row.push_back(it->second);
      ts.col.push_back(c);
      ts.rval.push_back(roof(combined));
    }
  }
  if (ts.row.empty()) fail("transfer matrix has no entries");
  return ts;
}

double pressure(const TransferStructure& ts, double t, double rel_tol) {
  // Factor out the extremal weight so every matrix entry lies in (0, 1]; the
  // factored log-eigenvalue is added back at the end.
  const auto [mn, mx] = std::minmax_element(ts.rval.begin(), ts.rval.end());
  const double rref = t >= 0.0 ? *mn : *mx;
  const size_t nnz = ts.rval.size();
  std::vector<double> w(nnz);
  for (size_t i = 0; i < nnz; ++i) w[i] = std::exp(-t * (ts.rval[i] - rref));

  std::vector<double> x(ts.dim, 1.0 / ts.dim), y(ts.dim);
  double prev = std::numeric_limits<double>::quiet_NaN();
  const int max_blocks = 100000;
  for (int block = 0; block < max_blocks; ++block) {
    // One block = period steps, so the ratio averages out cyclic classes.
    for (int step = 0; step < ts.period; ++step) {
      std::fill(y.begin(), y.end(), 0.0);
      for (size_t i = 0; i < nnz; ++i) y[ts.row[i]] += w[i] * x[ts.col[i]];
      x.swap(y);
    }
    double after = 0.0;
    for (double v : x) after += v;
    if (!(after > 0.0) || !std::isfinite(after)) fail("transfer iterate degenerated");
    for (double& v : x) v /= after;
    double p = -t * rref + std::log(after) / ts.period;
    if (block > 0 && std::abs(p - prev) <= rel_tol * std::max(1.0, std::abs(p))) return p;
    prev = p;
  }
  fail("power iteration did not converge");
}

double critical_exponent(const TransferStructure& ts, double tol) {
  double p0 = pressure(ts, 0.0);
  if (p0 == 0.0) return 0.0;
  double lo, hi;  // invariant: pressure(lo) >= 0 > pressure(hi)
  if (p0 > 0.0) {
    lo = 0.0;
    hi = 1.0;
    int k = 0;
    while (pressure(ts, hi) >= 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++k > 60) fail("pressure never becomes negative");
    }
  } else {
    hi = 0.0;
    lo = -1.0;
    int k = 0;
    while (pressure(ts, lo) < 0.0) {
      hi = lo;
      lo *= 2.0;
      if (++k > 60) fail("pressure never becomes positive");
    }
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (pressure(ts, mid) >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double root = 0.5 * (lo + hi);
  const double h = 1e-5;
  double slope = (pressure(ts, root + h) - pressure(ts, root - h)) / (2.0 * h);
  if (!(slope < 0.0)) fail("pressure is not strictly decreasing at its root");
  return root;
}

std::vector<PressureSample> pressure_curve(const TransferStructure& ts, double lo, double hi,
                                           double step) {
  if (!(step > 0.0) || hi < lo) throw error(errc::usage, "bad pressure curve grid");
  if ((hi - lo) / step > 100000.0) throw error(errc::usage, "pressure curve grid too fine");
  std::vector<PressureSample> out;
  const double h = 1e-5;
  for (double t = lo; t <= hi + 0.5 * step; t += step) {
    PressureSample s;
    s.t = t;
    s.value = pressure(ts, t);
    s.derivative = (pressure(ts, t + h) - pressure(ts, t - h)) / (2.0 * h);
    out.push_back(s);
  }
  return out;
}

SystemDelta system_delta(const coding::AugmentedShift& shift, const coding::ComponentGraph& cg,
                         int depth, const RoofFn& roof) {
  SystemDelta sd;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  sd.exponents.assign(cg.num_components, nan);
  sd.maximal.assign(cg.num_components, false);
  sd.structures.resize(cg.num_components);

  const int terminal = cg.component_of[0];
  bool any = false;
  for (int c = 0; c < cg.num_components; ++c) {
    if (c == terminal || !cg.has_cycle[c]) continue;
    sd.structures[c] = build_transfer_structure(shift, cg, c, depth, roof);
    sd.exponents[c] = critical_exponent(sd.structures[c]);
    any = true;
  }
  if (!any) fail("no recurrent component besides the terminal block");

  sd.delta = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < cg.num_components; ++c)
    if (std::isfinite(sd.exponents[c])) sd.delta = std::max(sd.delta, sd.exponents[c]);

  for (int c = 0; c < cg.num_components; ++c) {
    if (!std::isfinite(sd.exponents[c])) continue;
    sd.maximal[c] = std::abs(pressure(sd.structures[c], sd.delta)) <= 1e-8;
  }
  sd.multiplicity = coding::maximal_path_multiplicity(cg, sd.maximal);
  return sd;
}

LatticeResult lattice_test(const coding::AugmentedShift& shift, const coding::ComponentGraph& cg,
                           int component, int depth, const RoofFn& roof, int max_period,
                           double tol) {
  if (component < 0 || component >= cg.num_components)
    throw error(errc::usage, "component index out of range");
  LatticeResult res;
  if (!cg.has_cycle[component]) return res;  // inconclusive: nothing recurrent

  std::vector<char> in_comp(shift.num_states, 0);
  for (int v : cg.members[component]) in_comp[v] = 1;

  WindowCache cache;
  std::set<long long> seen;
  std::vector<double> sums;
  for (int len = 1; len <= max_period; ++len) {
    for_each_closed_path(shift, in_comp, cg.members[component], len,
                         [&](const std::vector<int>& cycle) {
                           double s = cycle_birkhoff(cache, roof, cycle, depth);
                           if (seen.insert(std::llround(s * 1e12)).second) sums.push_back(s);
                         });
  }
  res.sums_used = static_cast<long>(sums.size());
  res.distinct_lengths = static_cast<int>(sums.size());
  if (res.distinct_lengths < 3) return res;  // too little spectrum to decide

  std::sort(sums.begin(), sums.end());
  double g = sums[0];
  for (double s : sums) g = real_gcd(g, s, tol);
  if (g <= 1000.0 * tol) {
    res.verdict = LatticeVerdict::non_arithmetic;
    res.span = 0.0;
  } else {
    res.verdict = LatticeVerdict::arithmetic;
    res.span = g;
  }
  return res;
}

long periodic_orbit_count(const coding::AugmentedShift& shift, const coding::ComponentGraph& cg,
                          int component, int depth, const RoofFn& roof, double T,
                          long orbit_budget) {
  if (component < 0 || component >= cg.num_components)
    throw error(errc::usage, "component index out of range");
  if (!cg.has_cycle[component]) return 0;
  if (T < 0.0) return 0;

  const auto& members = cg.members[component];
  std::vector<char> in_comp(shift.num_states, 0);
  for (int v : members) in_comp[v] = 1;

  // Minimal roof value over cylinder windows bounds the orbit length that can
  // still fit under T.
  WindowCache cache;
  double min_r = std::numeric_limits<double>::infinity();
  for (const auto& p : component_paths(shift, members, depth))
    min_r = std::min(min_r, window_roof(cache, roof, p));
  if (!(min_r > 0.0)) fail("roof is not positive on the recurrent component");
  const int l_max = static_cast<int>(std::floor(T / min_r + 1e-12));

  long count = 0;
  long enumerated = 0;
  for (int len = 1; len <= l_max; ++len) {
    std::unordered_set<std::vector<int>, group::WordHash> classes;
    for_each_closed_path(shift, in_comp, members, len, [&](const std::vector<int>& cycle) {
      if (++enumerated > orbit_budget)
        throw error(errc::budget, "periodic orbit enumeration exceeded its budget");
      auto canon = canonical_rotation(cycle);
      if (!classes.insert(std::move(canon)).second) return;
      if (cycle_birkhoff(cache, roof, cycle, depth) <= T + 1e-12) ++count;
    });
  }
  return count;
}

}  // namespace orbitcount::spectral
