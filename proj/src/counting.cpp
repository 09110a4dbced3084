#include "orbitcount/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_set>

#include "orbitcount/errors.hpp"

namespace orbitcount::counting {

namespace {

constexpr double kEps = 1e-9;

struct KeyHash {
  size_t operator()(const std::array<int64_t, 4>& k) const {
    uint64_t h = 1469598103934665603ull;
    for (int64_t v : k) {
      h ^= static_cast<uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw error(errc::usage, "empty radius grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw error(errc::usage, "radius grid must be ascending");
}

// First grid index whose radius covers displacement d; grid.size() if none.
size_t grid_index(const std::vector<double>& grid, double d) {
  return std::lower_bound(grid.begin(), grid.end(), d - kEps) - grid.begin();
}

CountSeries make_series(std::string kind, const std::vector<double>& grid,
                        std::vector<long> tallies, long enumerated) {
  CountSeries s;
  s.kind = std::move(kind);
  s.grid = grid;
  s.increments = std::move(tallies);
  s.counts.resize(s.increments.size());
  long run = 0;
  for (size_t i = 0; i < s.increments.size(); ++i) {
    run += s.increments[i];
    s.counts[i] = run;
  }
  s.enumerated = enumerated;
  return s;
}

PruningEnvelope envelope_from_profile(const std::vector<double>& m) {
  if (m.size() < 2) throw error(errc::usage, "envelope needs sample depth >= 1");
  PruningEnvelope env;
  env.sample_depth = static_cast<int>(m.size()) - 1;
  // Secant over the tail half of the profile. Short conjugators can rotate a
  // cyclic word without stretching it, so the profile may start flat; the
  // asymptotic slope is approached from above by corrections that only grow,
  // which makes the tail secant an under-estimate, i.e. a safe lower slope.
  const int hi = env.sample_depth;
  const int lo = hi / 2;
  env.inv_lambda = (m[hi] - m[lo]) / static_cast<double>(hi - lo);
  if (!(env.inv_lambda > 1e-9))
    throw error(errc::audit,
                "pruning envelope collapsed: sampled displacement is not growing; raise the "
                "envelope sample depth");
  env.c = 0.0;
  for (size_t n = 0; n < m.size(); ++n)
    env.c = std::max(env.c, env.inv_lambda * static_cast<double>(n) - m[n]);
  env.c += 0.5;  // slack for dips past the sampled depth; audited, not assumed
  return env;
}

void audit_envelope(const PruningEnvelope& env, size_t len, double d) {
  if (d < env.inv_lambda * static_cast<double>(len) - env.c - kEps)
    throw error(errc::audit, "enumerated word violates the pruning envelope");
}

int depth_cap_for(const PruningEnvelope& env, double t_max) {
  double cap = (t_max + env.c) / env.inv_lambda + kEps;
  if (cap > 1e7) throw error(errc::budget, "pruning depth cap is unreasonably large");
  return std::max(0, static_cast<int>(std::floor(cap)));
}

// Counting trusts acceptor words only as deep as the oracle checked them.
void require_verified(const coding::LabeledAutomaton& acceptor, int needed_depth) {
  if (needed_depth > acceptor.verified_len)
    throw error(errc::coding_unverified,
                "scan needs acceptor words of length " + std::to_string(needed_depth) +
                    " but the acceptor is verified to length " +
                    std::to_string(acceptor.verified_len) +
                    "; rebuild it with verify_len >= " + std::to_string(needed_depth));
}

// Inverse up to the determinant. Products built from it are fed to routines
// that divide the determinant back out, so no rescaling is needed (and none
// would be reliable once entries grow past the range where det is computable).
Eigen::Matrix2d adjugate(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d adj;
  adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return adj;
}

struct LanguageNode {
  const group::Word& word;
  double word_displacement = 0.0;
  const Eigen::Matrix2d* mat = nullptr;  // half-plane prefix isometry
  const Eigen::Matrix2d* inv = nullptr;  // its inverse
};

// Depth-first scan of the acceptor language (including the empty word) in
// letter order, maintaining displacement incrementally. Children are cut at
// depth_cap; on trees subtrees past monotone_cut are cut as well, which is
// sound because tree displacement only grows along reduced extensions.
// forced_prefix pins the first letters. Every visited node costs budget.
template <typename Visit>
long scan_acceptor_language(const geometry::ModelSpace& space,
                            const coding::LabeledAutomaton& a, const group::Word& forced_prefix,
                            int depth_cap, double monotone_cut, long budget, Visit&& visit) {
  const bool tree = space.is_tree();
  const int alpha = space.gens.alphabet_size();
  group::Word word;
  std::vector<Eigen::Matrix2d> mats, invs;
  std::vector<double> wlens;
  if (!tree) {
    mats.push_back(Eigen::Matrix2d::Identity());
    invs.push_back(Eigen::Matrix2d::Identity());
  }
  wlens.push_back(0.0);
  long visited = 0;

  auto displacement_here = [&]() -> double {
    if (tree) return wlens.back();
    return geometry::displacement(space, geometry::Isometry{mats.back()});
  };

  auto step_in = [&](group::Letter l) {
    word.push_back(l);
    if (tree) {
      wlens.push_back(wlens.back() + space.weights[l]);
    } else {
      mats.push_back(geometry::scale_clamp(mats.back() * space.generator_mat[l]));
      invs.push_back(adjugate(mats.back()));
      wlens.push_back(0.0);
    }
  };
  auto step_out = [&]() {
    word.pop_back();
    wlens.pop_back();
    if (!tree) {
      mats.pop_back();
      invs.pop_back();
    }
  };

  auto dfs = [&](auto&& self, int state) -> void {
    if (++visited > budget) throw error(errc::budget, "word enumeration exceeded its budget");
    double d = displacement_here();
    LanguageNode node{word, d, tree ? nullptr : &mats.back(), tree ? nullptr : &invs.back()};
    visit(node);
    if (static_cast<int>(word.size()) >= depth_cap) return;
    if (tree && d > monotone_cut) return;
    if (word.size() < forced_prefix.size()) {
      group::Letter l = forced_prefix[word.size()];
      int t = a.next[state][l];
      if (t < 0) throw error(errc::usage, "cylinder prefix is not accepted by the automaton");
      step_in(l);
      self(self, t);
      step_out();
      return;
    }
    for (group::Letter l = 0; l < alpha; ++l) {
      int t = a.next[state][l];
      if (t < 0) continue;
      step_in(l);
      self(self, t);
      step_out();
    }
  };
  dfs(dfs, 0);
  return visited;
}

// Same scan over all reduced words (the full group) instead of an acceptor.
template <typename Visit>
long scan_reduced_words(const geometry::ModelSpace& space, int depth_cap, double monotone_cut,
                        long budget, Visit&& visit) {
  const bool tree = space.is_tree();
  const int alpha = space.gens.alphabet_size();
  group::Word word;
  std::vector<Eigen::Matrix2d> mats;
  std::vector<double> wlens;
  if (!tree) mats.push_back(Eigen::Matrix2d::Identity());
  wlens.push_back(0.0);
  long visited = 0;

  auto dfs = [&](auto&& self) -> void {
    if (++visited > budget) throw error(errc::budget, "word enumeration exceeded its budget");
    double d = tree ? wlens.back()
                    : geometry::displacement(space, geometry::Isometry{mats.back()});
    LanguageNode node{word, d, tree ? nullptr : &mats.back(), nullptr};
    visit(node);
    if (static_cast<int>(word.size()) >= depth_cap) return;
    if (tree && d > monotone_cut) return;
    for (group::Letter l = 0; l < alpha; ++l) {
      if (!word.empty() && l == space.gens.inverse(word.back())) continue;
      word.push_back(l);
      if (tree)
        wlens.push_back(wlens.back() + space.weights[l]);
      else
        mats.push_back(geometry::scale_clamp(mats.back() * space.generator_mat[l]));
      self(self);
      word.pop_back();
      wlens.pop_back();
      if (!tree) mats.pop_back();
    }
  };
  dfs(dfs);
  return visited;
}

// Minimal displacement per word length, sampled to estimate the envelope.
template <typename Scan>
std::vector<double> displacement_profile(int sample_depth, Scan&& scan) {
  std::vector<double> m(sample_depth + 1, std::numeric_limits<double>::infinity());
  scan(sample_depth, [&](size_t len, double d) {
    if (len < m.size()) m[len] = std::min(m[len], d);
  });
  // Branches can die out early (finite languages); drop unreached tail.
  while (!m.empty() && !std::isfinite(m.back())) m.pop_back();
  if (m.size() < 2)
    throw error(errc::audit, "envelope sampling found no words beyond the root");
  return m;
}

int clamp_sample_depth(const geometry::ModelSpace& space, int requested) {
  // Keep the sampling scan around a million nodes.
  double branching = std::max(2, space.gens.alphabet_size() - 1);
  int depth = std::max(1, requested);
  double nodes = std::pow(branching, depth);
  while (depth > 1 && nodes > 1e6) {
    nodes /= branching;
    --depth;
  }
  return depth;
}

double conjugate_displacement(const geometry::ModelSpace& space, const group::Word& g_word,
                              const Eigen::Matrix2d& g_mat, const LanguageNode& node,
                              group::Word* reduced_out) {
  group::Word conj = group::conjugate(space.gens, node.word, g_word);
  if (reduced_out) *reduced_out = conj;
  if (space.is_tree()) return geometry::displacement_word(space, conj);
  // plain product: displacement divides the determinant out, and normalizing
  // here would throw once the factors outgrow reliable determinants
  Eigen::Matrix2d m = (*node.inv * g_mat) * *node.mat;
  return geometry::displacement(space, geometry::Isometry{m});
}

Eigen::Matrix2d word_matrix(const geometry::ModelSpace& space, const group::Word& w) {
  if (space.is_tree()) return Eigen::Matrix2d::Identity();
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (group::Letter l : w) m = geometry::scale_clamp(m * space.generator_mat[l]);
  return m;
}

PruningEnvelope conjugacy_envelope(const geometry::ModelSpace& space, const group::Word& g,
                                   const coding::LabeledAutomaton& acceptor,
                                   const CountOptions& opts) {
  const Eigen::Matrix2d g_mat = word_matrix(space, g);
  int depth = clamp_sample_depth(space, opts.envelope_sample_depth);
  require_verified(acceptor, depth);
  auto profile = displacement_profile(depth, [&](int d, auto&& record) {
    scan_acceptor_language(space, acceptor, {}, d, std::numeric_limits<double>::infinity(),
                           opts.word_budget, [&](const LanguageNode& node) {
                             record(node.word.size(),
                                    conjugate_displacement(space, g, g_mat, node, nullptr));
                           });
  });
  return envelope_from_profile(profile);
}

PruningEnvelope coset_envelope(const geometry::ModelSpace& space,
                               const coding::LabeledAutomaton& acceptor,
                               const CountOptions& opts) {
  int depth = clamp_sample_depth(space, opts.envelope_sample_depth);
  require_verified(acceptor, depth);
  auto profile = displacement_profile(depth, [&](int d, auto&& record) {
    scan_acceptor_language(space, acceptor, {}, d, std::numeric_limits<double>::infinity(),
                           opts.word_budget, [&](const LanguageNode& node) {
                             record(node.word.size(), node.word_displacement);
                           });
  });
  return envelope_from_profile(profile);
}

}  // namespace

std::vector<double> uniform_grid(double t_max, double step) {
  if (!(step > 0.0) || t_max < 0.0) throw error(errc::usage, "bad radius grid parameters");
  if (t_max / step > 1e6) throw error(errc::usage, "radius grid too fine");
  std::vector<double> grid;
  for (double t = 0.0; t <= t_max + kEps; t += step) grid.push_back(t);
  return grid;
}

CountSeries count_full_orbit(const geometry::ModelSpace& space, const std::vector<double>& grid,
                             const CountOptions& opts) {
  check_grid(grid);
  const double t_max = grid.back();

  int depth = clamp_sample_depth(space, opts.envelope_sample_depth);
  auto profile = displacement_profile(depth, [&](int d, auto&& record) {
    scan_reduced_words(space, d, std::numeric_limits<double>::infinity(), opts.word_budget,
                       [&](const LanguageNode& node) {
                         record(node.word.size(), node.word_displacement);
                       });
  });
  PruningEnvelope env = envelope_from_profile(profile);

  std::vector<long> tallies(grid.size(), 0);
  std::unordered_set<std::array<int64_t, 4>, KeyHash> keys;
  long visited = scan_reduced_words(
      space, depth_cap_for(env, t_max), t_max, opts.word_budget, [&](const LanguageNode& node) {
        audit_envelope(env, node.word.size(), node.word_displacement);
        size_t idx = grid_index(grid, node.word_displacement);
        if (idx >= grid.size()) return;
        if (node.mat && !keys.insert(geometry::matrix_key(*node.mat)).second)
          throw error(errc::audit, "two reduced words realized the same isometry");
        ++tallies[idx];
      });
  return make_series("full", grid, std::move(tallies), visited);
}

CountSeries count_coset_orbit(const geometry::ModelSpace& space,
                              const coding::LabeledAutomaton& coset_acceptor,
                              const std::vector<double>& grid, const CountOptions& opts) {
  check_grid(grid);
  const double t_max = grid.back();

  PruningEnvelope env = coset_envelope(space, coset_acceptor, opts);
  require_verified(coset_acceptor, depth_cap_for(env, t_max));

  std::vector<long> tallies(grid.size(), 0);
  std::unordered_set<std::array<int64_t, 4>, KeyHash> keys;
  long visited = scan_acceptor_language(
      space, coset_acceptor, {}, depth_cap_for(env, t_max), t_max, opts.word_budget,
      [&](const LanguageNode& node) {
        audit_envelope(env, node.word.size(), node.word_displacement);
        size_t idx = grid_index(grid, node.word_displacement);
        if (idx >= grid.size()) return;
        if (node.mat && !keys.insert(geometry::matrix_key(*node.mat)).second)
          throw error(errc::audit, "two coset representatives realized the same isometry");
        ++tallies[idx];
      });
  return make_series("coset", grid, std::move(tallies), visited);
}

namespace {

CountSeries count_conjugates(const geometry::ModelSpace& space, const group::Word& g,
                             const coding::LabeledAutomaton& acceptor, const group::Word& prefix,
                             const std::vector<double>& grid, const CountOptions& opts,
                             std::string kind) {
  check_grid(grid);
  group::Word g_reduced = group::reduce(space.gens, g);
  if (g_reduced.empty()) throw error(errc::usage, "cannot count the conjugacy class of 1");
  const double t_max = grid.back();
  const Eigen::Matrix2d g_mat = word_matrix(space, g_reduced);

  PruningEnvelope env = conjugacy_envelope(space, g_reduced, acceptor, opts);
  require_verified(acceptor, depth_cap_for(env, t_max));

  std::vector<long> tallies(grid.size(), 0);
  std::unordered_set<group::Word, group::WordHash> seen;
  std::unordered_set<std::array<int64_t, 4>, KeyHash> keys;
  group::Word conj;
  long visited = scan_acceptor_language(
      space, acceptor, prefix, depth_cap_for(env, t_max),
      std::numeric_limits<double>::infinity(), opts.word_budget, [&](const LanguageNode& node) {
        double d = conjugate_displacement(space, g_reduced, g_mat, node, &conj);
        audit_envelope(env, node.word.size(), d);
        if (node.word.size() < prefix.size()) return;  // walking into the cylinder
        size_t idx = grid_index(grid, d);
        if (idx >= grid.size()) return;
        if (!seen.insert(conj).second)
          throw error(errc::audit, "duplicate conjugate: coset representatives are not distinct");
        if (!space.is_tree()) {
          Eigen::Matrix2d m = (*node.inv * g_mat) * *node.mat;
          if (!keys.insert(geometry::matrix_key(m)).second)
            throw error(errc::audit, "two conjugates realized the same isometry");
        }
        ++tallies[idx];
      });
  return make_series(std::move(kind), grid, std::move(tallies), visited);
}

}  // namespace

CountSeries count_conjugacy_class(const geometry::ModelSpace& space, const group::Word& g,
                                  const coding::LabeledAutomaton& coset_acceptor,
                                  const std::vector<double>& grid, const CountOptions& opts) {
  return count_conjugates(space, g, coset_acceptor, {}, grid, opts, "conjugacy");
}

CountSeries count_cylinder_restricted(const geometry::ModelSpace& space, const group::Word& g,
                                      const coding::LabeledAutomaton& coset_acceptor,
                                      const group::Word& u, const std::vector<double>& grid,
                                      const CountOptions& opts) {
  return count_conjugates(space, g, coset_acceptor, group::reduce(space.gens, u), grid, opts, "cylinder");
}

PruningEnvelope conjugacy_pruning_envelope(const geometry::ModelSpace& space, const group::Word& g,
                                           const coding::LabeledAutomaton& coset_acceptor,
                                           const CountOptions& opts) {
  group::Word g_reduced = group::reduce(space.gens, g);
  if (g_reduced.empty()) throw error(errc::usage, "cannot count the conjugacy class of 1");
  return conjugacy_envelope(space, g_reduced, coset_acceptor, opts);
}

PruningEnvelope coset_pruning_envelope(const geometry::ModelSpace& space,
                                       const coding::LabeledAutomaton& coset_acceptor,
                                       const CountOptions& opts) {
  return coset_envelope(space, coset_acceptor, opts);
}

int envelope_depth_cap(const PruningEnvelope& env, double t_max) {
  return depth_cap_for(env, t_max);
}

double tau(const geometry::ModelSpace& space, const group::Word& g, const group::Word& u) {
  const geometry::Point& x0 = space.basepoint;
  geometry::Isometry ig = geometry::isometry_of_word(space, g);
  geometry::Isometry iu = geometry::isometry_of_word(space, u);
  geometry::Point gx = geometry::apply(space, ig, x0);
  geometry::Point ux = geometry::apply(space, iu, x0);
  geometry::Point gux = geometry::apply(space, ig, ux);
  double base = geometry::distance(space, gx, x0);
  double at_g = geometry::gromov_product(space, gx, ux, gux);
  double at_x0 = geometry::gromov_product(space, x0, gx, ux);
  return base - 2.0 * at_g - 2.0 * at_x0;
}

std::vector<LengthAuditRow> length_comparison_audit(const geometry::ModelSpace& space,
                                                    const group::Word& g,
                                                    const coding::LabeledAutomaton& coset_acceptor,
                                                    int prefix_len, int max_depth,
                                                    long sample_budget) {
  if (prefix_len < 1 || max_depth < prefix_len)
    throw error(errc::usage, "bad audit depth range");
  group::Word g_reduced = group::reduce(space.gens, g);
  if (g_reduced.empty()) throw error(errc::usage, "cannot audit the conjugacy class of 1");
  require_verified(coset_acceptor, max_depth);
  const Eigen::Matrix2d g_mat = word_matrix(space, g_reduced);

  const int rows = max_depth - prefix_len + 1;
  const long per_depth = std::max<long>(1, sample_budget / rows);
  std::vector<LengthAuditRow> out(rows);
  for (int i = 0; i < rows; ++i) out[i].depth = prefix_len + i;

  std::map<group::Word, double> tau_cache;
  scan_acceptor_language(
      space, coset_acceptor, {}, max_depth, std::numeric_limits<double>::infinity(),
      std::numeric_limits<long>::max(), [&](const LanguageNode& node) {
        int n = static_cast<int>(node.word.size());
        if (n < prefix_len) return;
        LengthAuditRow& row = out[n - prefix_len];
        if (row.samples >= per_depth) return;
        group::Word u(node.word.begin(), node.word.begin() + prefix_len);
        auto it = tau_cache.find(u);
        if (it == tau_cache.end()) it = tau_cache.emplace(u, tau(space, g_reduced, u)).first;
        double d_conj = conjugate_displacement(space, g_reduced, g_mat, node, nullptr);
        double err = std::abs(d_conj - 2.0 * node.word_displacement - it->second);
        row.max_error = std::max(row.max_error, err);
        ++row.samples;
      });
  return out;
}

ConstantEstimate estimate_C(const geometry::ModelSpace& space, const group::Word& g,
                            const coding::LabeledAutomaton& coset_acceptor, int prefix_len,
                            double delta, const std::vector<double>& grid,
                            const CountOptions& opts) {
  check_grid(grid);
  if (prefix_len < 1) throw error(errc::usage, "cylinder prefix length must be positive");
  group::Word g_reduced = group::reduce(space.gens, g);
  if (g_reduced.empty()) throw error(errc::usage, "cannot estimate the class of 1");
  const double t_ref = grid.back();
  const Eigen::Matrix2d g_mat = word_matrix(space, g_reduced);

  PruningEnvelope env = conjugacy_envelope(space, g_reduced, coset_acceptor, opts);
  require_verified(coset_acceptor, depth_cap_for(env, t_ref));

  std::map<group::Word, long> per_prefix;
  scan_acceptor_language(
      space, coset_acceptor, {}, depth_cap_for(env, t_ref),
      std::numeric_limits<double>::infinity(), opts.word_budget, [&](const LanguageNode& node) {
        if (static_cast<int>(node.word.size()) < prefix_len) return;
        double d = conjugate_displacement(space, g_reduced, g_mat, node, nullptr);
        audit_envelope(env, node.word.size(), d);
        if (d > t_ref + kEps) return;
        group::Word u(node.word.begin(), node.word.begin() + prefix_len);
        ++per_prefix[u];
      });

  ConstantEstimate est;
  est.t_ref = t_ref;
  est.delta = delta;
  if (per_prefix.empty()) {
    est.low_confidence = true;
    return est;
  }
  for (const auto& [u, count] : per_prefix) {
    CylinderEstimate row;
    row.prefix = u;
    row.count = count;
    row.tau = tau(space, g_reduced, u);
    row.c_u = static_cast<double>(count) * std::exp(-delta * (t_ref - row.tau) / 2.0);
    est.c += row.c_u * std::exp(-delta * row.tau / 2.0);
    if (count < 50) est.low_confidence = true;
    est.rows.push_back(std::move(row));
  }
  return est;
}

PoincareValue poincare_partial(const CountSeries& series, double s, double rate) {
  PoincareValue out;
  out.s = s;
  for (size_t i = 0; i < series.grid.size(); ++i)
    if (series.increments[i] > 0)
      out.partial += static_cast<double>(series.increments[i]) * std::exp(-s * series.grid[i]);
  out.divergent = s <= rate + 1e-12;

  // Geometric tail from the last two realized increments.
  int b = -1, a = -1;
  for (int i = static_cast<int>(series.grid.size()) - 1; i >= 0; --i) {
    if (series.increments[i] <= 0) continue;
    if (b < 0) {
      b = i;
    } else {
      a = i;
      break;
    }
  }
  if (a >= 0 && b >= 0) {
    double gap = series.grid[b] - series.grid[a];
    double growth = std::log(static_cast<double>(series.increments[b]) /
                             static_cast<double>(series.increments[a])) /
                    gap;
    double rho = std::exp((growth - s) * gap);
    if (rho >= 1.0 - 1e-12)
      out.divergent = true;
    else
      out.tail = static_cast<double>(series.increments[b]) * std::exp(-s * series.grid[b]) * rho /
                 (1.0 - rho);
  }
  return out;
}

RateFit fit_rate(const CountSeries& series, double t_lo, double t_hi, bool lattice_mode) {
  RateFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  std::vector<double> ts, ys;
  for (size_t i = 0; i < series.grid.size(); ++i) {
    if (series.grid[i] < t_lo - kEps || series.grid[i] > t_hi + kEps) continue;
    if (series.counts[i] <= 0) continue;
    if (lattice_mode && series.increments[i] <= 0) continue;
    ts.push_back(series.grid[i]);
    ys.push_back(std::log(static_cast<double>(series.counts[i])));
  }
  fit.points = static_cast<int>(ts.size());
  if (fit.points < 2) throw error(errc::usage, "rate fit needs at least two realized points");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < fit.points; ++i) {
    sx += ts[i];
    sy += ys[i];
    sxx += ts[i] * ts[i];
    sxy += ts[i] * ys[i];
  }
  double n = fit.points;
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw error(errc::usage, "degenerate rate fit grid");
  fit.rate = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.rate * sx) / n;
  for (int i = 0; i < fit.points; ++i)
    fit.residual = std::max(fit.residual, std::abs(ys[i] - fit.intercept - fit.rate * ts[i]));

  // Spacing of the realized radii (the observable lattice span).
  double span = 0.0;
  for (int i = 1; i < fit.points; ++i) {
    double gap = ts[i] - ts[i - 1];
    if (span == 0.0) {
      span = gap;
    } else {
      double x = std::max(span, gap), y = std::min(span, gap);
      while (y > 1e-9) {
        double r = std::abs(x - std::round(x / y) * y);
        x = y;
        y = r;
      }
      span = x;
    }
  }
  fit.lattice_span = span;
  return fit;
}

}  // namespace orbitcount::counting
