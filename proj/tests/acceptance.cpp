// End-to-end acceptance checks: eight criteria covering counting, exponents,
// codings, block structure, length comparison, lattice classification, the
// Poincare pole, and the randomized property suites. One PASS/FAIL line per
// criterion; exit 0 iff all pass. argv[1] is the directory with the shipped
// configs.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "orbitcount/coding.hpp"
#include "orbitcount/config.hpp"
#include "orbitcount/counting.hpp"
#include "orbitcount/errors.hpp"
#include "orbitcount/geometry.hpp"
#include "orbitcount/pipeline.hpp"
#include "orbitcount/potential.hpp"
#include "orbitcount/spectral.hpp"

using namespace orbitcount;
using coding::AugmentedShift;
using coding::LabeledAutomaton;
using geometry::ModelSpace;
using group::GeneratorSet;
using group::Word;

namespace {

const GeneratorSet F2 = GeneratorSet::free_group(2);
const double kLog3 = std::log(3.0);
std::string g_config_dir;

Word W(const std::string& s) { return group::parse_word(s, F2); }
ModelSpace unit_tree() { return geometry::make_tree_space(F2, {1.0, 1.0}); }
ModelSpace weighted_tree() { return geometry::make_tree_space(F2, {1.0, std::sqrt(2.0)}); }

ModelSpace schottky() {
  Eigen::Matrix2d a, b;
  a << 5.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0;
  b << 25.0 / 3.0, -32.0, 4.0 / 3.0, -5.0;
  return geometry::make_half_plane_space(F2, {a, b});
}

struct Check {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

bool g_all_pass = true;

void run_criterion(int n, const std::string& name, double budget_s,
                   const std::function<void(Check&)>& fn) {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    fn(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0 && secs > budget_s)
    c.expect(false, "runtime " + std::to_string(secs) + "s over the " +
                        std::to_string(budget_s) + "s budget");
  if (!c.ok) g_all_pass = false;
  std::printf("%s criterion %d: %s [%.1fs]%s%s\n", c.ok ? "PASS" : "FAIL", n, name.c_str(), secs,
              c.ok ? "" : " -- ", c.ok ? "" : c.why.c_str());
  std::fflush(stdout);
}

LabeledAutomaton coset_acceptor(const Word& g, int verify_len) {
  coding::CosetAcceptorOptions opts;
  opts.verify_len = verify_len;
  return coding::build_coset_acceptor(F2, g, opts);
}

struct System {
  AugmentedShift shift;
  coding::ComponentGraph cg;
};

System coset_system(const Word& g, int verify_len = 8) {
  System s;
  s.shift = coding::augment(coset_acceptor(g, verify_len));
  s.cg = coding::scc_decompose(s.shift);
  return s;
}

int top_maximal(const spectral::SystemDelta& sd) {
  for (size_t c = 0; c < sd.maximal.size(); ++c)
    if (sd.maximal[c]) return static_cast<int>(c);
  return -1;
}

// --- criterion 1: unit-tree conjugacy counts, rates, and the 1/2 ratio ------

void criterion1(Check& c) {
  ModelSpace space = unit_tree();
  LabeledAutomaton acc = coset_acceptor(W("a"), 10);

  counting::CountSeries conj =
      counting::count_conjugacy_class(space, W("a"), acc, counting::uniform_grid(21.0));
  const long want[] = {1, 3, 9, 27, 81};
  for (int i = 0; i < 5; ++i) {
    long got = conj.counts[static_cast<size_t>(2 * i + 1)];
    c.expect(got == want[i], "conjugacy count at radius " + std::to_string(2 * i + 1) + " is " +
                                 std::to_string(got) + ", want " + std::to_string(want[i]));
  }

  counting::RateFit cf = counting::fit_rate(conj, 7.0, 21.0, true);
  c.expect(std::abs(cf.rate / (kLog3 / 2.0) - 1.0) <= 0.05,
           "conjugacy rate " + std::to_string(cf.rate) + " not within 5% of (log 3)/2");

  counting::CountSeries full = counting::count_full_orbit(space, counting::uniform_grid(12.0));
  counting::RateFit ff = counting::fit_rate(full, 6.0, 12.0, true);
  c.expect(std::abs(ff.rate / kLog3 - 1.0) <= 0.01,
           "full-orbit rate " + std::to_string(ff.rate) + " not within 1% of log 3");

  System sys = coset_system(W("a"), 10);
  spectral::SystemDelta sd =
      spectral::system_delta(sys.shift, sys.cg, 2, spectral::roof_from_space(space, sys.shift));
  double ratio = cf.rate / sd.delta;
  c.expect(ratio >= 0.475 && ratio <= 0.525,
           "conjugacy rate / delta = " + std::to_string(ratio) + " outside [0.475, 0.525]");
}

// --- criterion 2: critical exponents from pressure vs counting --------------

void criterion2(Check& c) {
  LabeledAutomaton geo = coding::build_geodesic_acceptor(F2);
  AugmentedShift shift = coding::augment(geo);
  coding::ComponentGraph cg = coding::scc_decompose(shift);

  ModelSpace tree = unit_tree();
  spectral::RoofFn tree_roof = spectral::roof_from_space(tree, shift);
  for (int depth : {1, 2, 3}) {
    double d = spectral::system_delta(shift, cg, depth, tree_roof).delta;
    c.expect(std::abs(d - kLog3) <= 1e-9, "unit-tree exponent at depth " + std::to_string(depth) +
                                              " is " + std::to_string(d) + ", want log 3");
  }

  ModelSpace hp = schottky();
  spectral::RoofFn hp_roof = spectral::roof_from_space(hp, shift);
  double d4 = spectral::system_delta(shift, cg, 4, hp_roof).delta;
  double d5 = spectral::system_delta(shift, cg, 5, hp_roof).delta;
  double d6 = spectral::system_delta(shift, cg, 6, hp_roof).delta;
  double g45 = std::abs(d5 - d4), g56 = std::abs(d6 - d5);
  c.expect(g45 > 0.0 && g56 > 0.0, "half-plane exponent sequence stalled");
  c.expect(2.0 * g56 <= g45, "half-plane exponent gaps " + std::to_string(g45) + " -> " +
                                 std::to_string(g56) + " are not halving");

  counting::CountSeries full = counting::count_full_orbit(hp, counting::uniform_grid(16.0));
  counting::RateFit fit = counting::fit_rate(full, 8.0, 16.0, true);
  c.expect(std::abs(fit.rate - d6) <= 0.05 * d6,
           "half-plane counting rate " + std::to_string(fit.rate) +
               " not within 5% of the pressure exponent " + std::to_string(d6));
}

// --- criterion 3: coset acceptors against the brute-force oracle ------------

void criterion3(Check& c) {
  for (const std::string& gs : {"a", "ab", "abAB"}) {
    LabeledAutomaton acc = coset_acceptor(W(gs), 8);
    std::vector<Word> lang = coding::language(acc, F2, 8);
    std::vector<Word> want = oracles::coset_minima(F2, W(gs), 8);
    std::sort(lang.begin(), lang.end());
    std::sort(want.begin(), want.end());
    c.expect(lang == want, "g=" + gs + ": accepted language differs from the oracle (" +
                               std::to_string(lang.size()) + " vs " + std::to_string(want.size()) +
                               " words)");

    std::set<Word> members(lang.begin(), lang.end());
    for (const Word& w : lang) {
      c.expect(oracles::slow_reduce(F2, w) == w, "g=" + gs + ": accepted word is not geodesic");
      if (!w.empty())
        c.expect(members.count(Word(w.begin(), w.end() - 1)) == 1,
                 "g=" + gs + ": language is not prefix-closed");
    }
  }
}

// --- criterion 4: block triangular structure, one maximal component ---------

void criterion4(Check& c) {
  for (const std::string& name : {"f2_unit_tree_g_a", "f2_unit_tree_g_ab", "f2_weighted_sqrt2",
                                  "schottky_pair"}) {
    config::Config cfg = config::load_config(g_config_dir + "/" + name + ".cfg");
    ModelSpace space = cfg.make_space();
    coding::CosetAcceptorOptions copts;
    copts.signature_radius = cfg.signature_radius;
    copts.verify_len = cfg.verify_len;
    copts.state_budget = cfg.state_budget;
    LabeledAutomaton acc = coding::build_coset_acceptor(space.gens, cfg.g_word(), copts);
    AugmentedShift shift = coding::augment(acc);
    coding::ComponentGraph cg = coding::scc_decompose(shift);

    std::vector<int> perm = cg.block_permutation();
    std::vector<bool> seen(static_cast<size_t>(shift.num_states), false);
    bool valid = static_cast<int>(perm.size()) == shift.num_states;
    for (int v : perm) {
      if (v < 0 || v >= shift.num_states || seen[static_cast<size_t>(v)]) valid = false;
      else seen[static_cast<size_t>(v)] = true;
    }
    c.expect(valid, name + ": block_permutation is not a permutation of the states");
    bool triangular = true;
    for (int u = 0; u < shift.num_states; ++u)
      for (int v : shift.succ[static_cast<size_t>(u)])
        if (cg.component_of[static_cast<size_t>(u)] < cg.component_of[static_cast<size_t>(v)])
          triangular = false;
    c.expect(triangular, name + ": an edge climbs the block order");

    spectral::SystemDelta sd = spectral::system_delta(
        shift, cg, cfg.resolved_depth(), spectral::roof_from_space(space, shift));
    int n_max = static_cast<int>(std::count(sd.maximal.begin(), sd.maximal.end(), true));
    c.expect(n_max == 1, name + ": " + std::to_string(n_max) + " maximal components, want 1");
    c.expect(sd.multiplicity == 1,
             name + ": multiplicity " + std::to_string(sd.multiplicity) + ", want 1");
  }

  // negative control: two equal maximal blocks on one condensation path
  AugmentedShift s;
  s.num_states = 8;
  s.start = 7;
  s.succ.assign(8, {});
  s.out_labels.assign(8, {});
  auto add = [&](int u, int v) {
    s.succ[static_cast<size_t>(u)].push_back(v);
    s.out_labels[static_cast<size_t>(u)].push_back({v, 0});
  };
  for (int u = 1; u <= 3; ++u)
    for (int v = 1; v <= 3; ++v) add(u, v);
  for (int u = 4; u <= 6; ++u)
    for (int v = 4; v <= 6; ++v) add(u, v);
  add(1, 4);  // chains the two blocks
  add(7, 1);
  for (int u = 0; u < 8; ++u) {
    s.succ[static_cast<size_t>(u)].push_back(0);
    std::sort(s.succ[static_cast<size_t>(u)].begin(), s.succ[static_cast<size_t>(u)].end());
    s.succ[static_cast<size_t>(u)].erase(
        std::unique(s.succ[static_cast<size_t>(u)].begin(), s.succ[static_cast<size_t>(u)].end()),
        s.succ[static_cast<size_t>(u)].end());
  }
  coding::ComponentGraph cg2 = coding::scc_decompose(s);
  spectral::SystemDelta sd2 =
      spectral::system_delta(s, cg2, 1, [](std::span<const int>) { return 1.0; });
  c.expect(sd2.multiplicity == 2, "synthetic chained blocks give multiplicity " +
                                      std::to_string(sd2.multiplicity) + ", want 2");
}

// --- criterion 5: conjugate length vs 2 d(h) + tau(u) ------------------------

void criterion5(Check& c) {
  LabeledAutomaton acc = coset_acceptor(W("a"), 8);

  auto tree_rows = counting::length_comparison_audit(unit_tree(), W("a"), acc, 1, 8);
  for (const auto& r : tree_rows)
    c.expect(r.max_error <= 1e-12, "unit-tree audit error " + std::to_string(r.max_error) +
                                       " at depth " + std::to_string(r.depth));

  auto hp_rows = counting::length_comparison_audit(schottky(), W("a"), acc, 2, 8);
  c.expect(hp_rows.size() == 7, "half-plane audit row count");
  c.expect(hp_rows.front().max_error > 0.0, "half-plane audit error vanished suspiciously");
  for (size_t i = 1; i < hp_rows.size(); ++i)
    c.expect(hp_rows[i].max_error <= hp_rows[i - 1].max_error * (1.0 + 1e-9),
             "half-plane audit errors are not nonincreasing at depth " +
                 std::to_string(hp_rows[i].depth));
  double rho = std::pow(hp_rows.back().max_error / hp_rows.front().max_error,
                        1.0 / static_cast<double>(hp_rows.size() - 1));
  c.expect(rho < 1.0, "fitted audit decay rate " + std::to_string(rho) + " is not below 1");
}

// --- criterion 6: arithmetic vs non-arithmetic length spectra ----------------

void criterion6(Check& c) {
  namespace fs = std::filesystem;
  fs::path out = fs::temp_directory_path() / "orbitcount_acceptance_c6";
  fs::remove_all(out);

  config::Config cfg = config::load_config(g_config_dir + "/f2_unit_tree_g_a.cfg");
  pipeline::RunResult res = pipeline::run(cfg, out.string());
  c.expect(res.lattice_verdict == "arithmetic",
           "unit-tree verdict is '" + res.lattice_verdict + "', want arithmetic");
  c.expect(std::abs(res.lattice_span - 1.0) <= 1e-6,
           "unit-tree lattice span " + std::to_string(res.lattice_span) + ", want 1");
  c.expect(!res.mixing, "unit-tree run should not claim the mixing hypothesis");

  std::ifstream in(out / "summary.json");
  c.expect(static_cast<bool>(in), "summary.json missing");
  if (in) {
    nlohmann::json j;
    in >> j;
    c.expect(j.contains("lattice") && j["lattice"].contains("mixing"),
             "summary.json does not carry the mixing flag");
    if (j.contains("lattice") && j["lattice"].contains("mixing"))
      c.expect(j["lattice"]["mixing"].get<bool>() == false,
               "summary.json mixing flag should be false for the arithmetic system");
  }

  ModelSpace wt = weighted_tree();
  System sys = coset_system(W("a"));
  spectral::RoofFn roof = spectral::roof_from_space(wt, sys.shift);
  spectral::SystemDelta sd = spectral::system_delta(sys.shift, sys.cg, 2, roof);
  int top = top_maximal(sd);
  c.expect(top >= 0, "weighted tree has no maximal component");
  if (top >= 0) {
    spectral::LatticeResult lat = spectral::lattice_test(sys.shift, sys.cg, top, 2, roof);
    c.expect(lat.verdict == spectral::LatticeVerdict::non_arithmetic,
             "incommensurable weights should give a non-arithmetic verdict");
  }
}

// --- criterion 7: the Poincare series has a simple pole at delta -------------

void criterion7(Check& c) {
  counting::CountSeries full =
      counting::count_full_orbit(unit_tree(), counting::uniform_grid(12.0));
  double lo = 1e300, hi = 0.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    counting::PoincareValue pv = counting::poincare_partial(full, kLog3 + eps, kLog3);
    c.expect(!pv.divergent, "series at delta + " + std::to_string(eps) + " reported divergent");
    double v = eps * (pv.partial + pv.tail);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  c.expect(hi / lo <= 1.2, "scaled series values spread by " + std::to_string(hi / lo) +
                               ", want a 1/(s - delta) pole within 20%");
  c.expect(counting::poincare_partial(full, kLog3, kLog3).divergent,
           "series at s = delta should be flagged divergent");
}

// --- criterion 8: randomized property suites ---------------------------------

void criterion8(Check& c) {
  const int kCases = 10000;
  oracles::Rng rng(20260822u);

  {  // isometric action on the half-plane
    ModelSpace hp = schottky();
    double worst = 0.0;
    for (int i = 0; i < kCases; ++i) {
      Word u = oracles::random_reduced(rng, F2, 1 + static_cast<int>(rng.below(5)));
      Word v = oracles::random_reduced(rng, F2, 1 + static_cast<int>(rng.below(5)));
      Word g = oracles::random_reduced(rng, F2, 1 + static_cast<int>(rng.below(4)));
      geometry::Point x = geometry::apply(hp, geometry::isometry_of_word(hp, u), hp.basepoint);
      geometry::Point y = geometry::apply(hp, geometry::isometry_of_word(hp, v), hp.basepoint);
      geometry::Isometry ig = geometry::isometry_of_word(hp, g);
      double before = geometry::distance(hp, x, y);
      double after =
          geometry::distance(hp, geometry::apply(hp, ig, x), geometry::apply(hp, ig, y));
      worst = std::max(worst, std::abs(after - before));
    }
    c.expect(worst <= 1e-7, "isometry invariance drifted by " + std::to_string(worst));
  }

  {  // Gromov product identities on both model spaces
    ModelSpace spaces[2] = {unit_tree(), schottky()};
    double worst = 0.0;
    for (int i = 0; i < kCases; ++i) {
      const ModelSpace& sp = spaces[i % 2];
      auto pt = [&](int max_len) {
        Word w = oracles::random_reduced(rng, F2, 1 + static_cast<int>(rng.below(max_len)));
        return geometry::apply(sp, geometry::isometry_of_word(sp, w), sp.basepoint);
      };
      geometry::Point x = pt(5), y = pt(5), z = pt(5);
      double pyz = geometry::gromov_product(sp, x, y, z);
      worst = std::max(worst, std::abs(pyz - geometry::gromov_product(sp, x, z, y)));
      double pxz = geometry::gromov_product(sp, y, x, z);
      worst = std::max(worst, std::abs(pyz + pxz - geometry::distance(sp, x, y)));
      double d_min = std::min(geometry::distance(sp, x, y), geometry::distance(sp, x, z));
      if (pyz < -1e-9 || pyz > d_min + 1e-7) worst = 1.0;
    }
    c.expect(worst <= 1e-7, "Gromov product identities drifted by " + std::to_string(worst));
  }

  {  // word algebra laws
    bool ok = true;
    for (int i = 0; i < kCases && ok; ++i) {
      Word u = oracles::random_raw_word(rng, F2, static_cast<int>(rng.below(12)));
      Word v = oracles::random_raw_word(rng, F2, static_cast<int>(rng.below(12)));
      Word w = oracles::random_raw_word(rng, F2, static_cast<int>(rng.below(12)));
      ok = ok && group::multiply(F2, group::multiply(F2, u, v), w) ==
                     group::multiply(F2, u, group::multiply(F2, v, w));
      ok = ok && group::multiply(F2, w, group::invert(F2, w)).empty();
      ok = ok && group::invert(F2, group::invert(F2, w)) == group::reduce(F2, w);
      Word hk = group::multiply(F2, u, v);
      ok = ok && group::conjugate(F2, hk, w) ==
                     group::conjugate(F2, v, group::conjugate(F2, u, w));
    }
    c.expect(ok, "a word algebra law failed");
  }

  {  // Birkhoff sums along shift paths reproduce displacements
    ModelSpace spaces[2] = {unit_tree(), schottky()};
    AugmentedShift shift = coding::augment(coset_acceptor(W("a"), 8));
    double worst = 0.0;
    for (int i = 0; i < kCases; ++i) {
      const ModelSpace& sp = spaces[i % 2];
      std::vector<int> path{shift.start};
      int len = 1 + static_cast<int>(rng.below(10));
      for (int k = 0; k < len; ++k) {
        const auto& outs = shift.out_labels[static_cast<size_t>(path.back())];
        if (outs.empty()) break;
        path.push_back(outs[rng.below(static_cast<int>(outs.size()))].first);
      }
      auto [sum, disp] = potential::birkhoff_displacement_check(sp, shift, path);
      worst = std::max(worst, std::abs(sum - disp));
    }
    c.expect(worst <= 1e-9, "Birkhoff telescoping drifted by " + std::to_string(worst));
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <config-dir>\n", argv[0]);
    return 2;
  }
  g_config_dir = argv[1];

  run_criterion(1, "unit-tree conjugacy counting and growth rates", 10.0, criterion1);
  run_criterion(2, "critical exponents from pressure match counting", 60.0, criterion2);
  run_criterion(3, "coset acceptors equal the brute-force minima", 30.0, criterion3);
  run_criterion(4, "block structure and maximal-component multiplicity", 0.0, criterion4);
  run_criterion(5, "conjugate length comparison audit", 0.0, criterion5);
  run_criterion(6, "lattice classification and the mixing flag", 0.0, criterion6);
  run_criterion(7, "Poincare series has a simple pole at delta", 0.0, criterion7);
  run_criterion(8, "randomized geometry, algebra, and cocycle suites", 30.0, criterion8);

  std::printf("acceptance: %s\n", g_all_pass ? "all criteria passed" : "FAILURES above");
  return g_all_pass ? 0 : 1;
}
