#include "orbitcount/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "orbitcount/errors.hpp"
#include "orbitcount/potential.hpp"
#include "orbitcount/spectral.hpp"

namespace orbitcount::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex_hash(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string join_path(const std::vector<int>& p) {
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(p[i]);
  }
  return s;
}

const char* verdict_name(spectral::LatticeVerdict v) {
  switch (v) {
    case spectral::LatticeVerdict::arithmetic: return "arithmetic";
    case spectral::LatticeVerdict::non_arithmetic: return "non_arithmetic";
    default: return "inconclusive";
  }
}

group::Word default_cylinder_prefix(const coding::LabeledAutomaton& coset,
                                    const group::GeneratorSet& gens) {
  // Least accepted first letter under the configured letter order.
  group::Letter best = -1;
  for (group::Letter l = 0; l < coset.alphabet_size(); ++l) {
    if (coset.next[0][l] < 0) continue;
    if (best < 0 || gens.order[l] < gens.order[best]) best = l;
  }
  if (best < 0) throw error(errc::coding_unstable, "coset acceptor accepts nothing");
  return {best};
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io, "cannot write " + path);
  out << content;
  if (!out.flush()) throw error(errc::io, "failed writing " + path);
}

std::string format_series_csv(const counting::CountSeries& series, uint64_t config_hash) {
  std::string s = "# kind=" + series.kind + " config=" + hex_hash(config_hash) +
                  " enumerated=" + std::to_string(series.enumerated) + "\n";
  s += "radius,count,increment\n";
  for (size_t i = 0; i < series.grid.size(); ++i)
    s += fmt(series.grid[i]) + "," + std::to_string(series.counts[i]) + "," +
         std::to_string(series.increments[i]) + "\n";
  return s;
}

std::string format_automaton(const coding::LabeledAutomaton& a) {
  std::ostringstream os;
  coding::save_automaton(os, a);
  return os.str();
}

RunResult run(const config::Config& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
  try {
    RunResult res;
    res.config_hash = cfg.hash();
    const group::GeneratorSet gens = cfg.make_gens();
    const geometry::ModelSpace space = cfg.make_space();
    const group::Word g = cfg.g_word();

    coding::LabeledAutomaton geodesic = coding::build_geodesic_acceptor(gens);
    write_text_file(path("acceptor.txt"), format_automaton(geodesic));

    coding::CosetAcceptorOptions copts;
    copts.signature_radius = cfg.signature_radius;
    copts.verify_len = cfg.verify_len;
    copts.state_budget = cfg.state_budget;
    coding::LabeledAutomaton coset = coding::build_coset_acceptor(gens, g, copts);

    // The scans walk the acceptor language as deep as their pruning envelopes
    // allow, so its verified range must cover the deeper of the two caps.
    counting::CountOptions count_opts;
    count_opts.word_budget = cfg.word_budget;
    count_opts.envelope_sample_depth = cfg.envelope_sample_depth;
    int needed = std::max(
        counting::envelope_depth_cap(
            counting::conjugacy_pruning_envelope(space, g, coset, count_opts), cfg.t_max_conj),
        counting::envelope_depth_cap(counting::coset_pruning_envelope(space, coset, count_opts),
                                     cfg.t_max_full));
    if (needed > coset.verified_len) {
      copts.verify_len = needed;
      coset = coding::build_coset_acceptor(gens, g, copts);
    }
    write_text_file(path("coset_acceptor.txt"), format_automaton(coset));

    coding::AugmentedShift shift = coding::augment(coset);
    coding::ComponentGraph cg = coding::scc_decompose(shift);
    spectral::RoofFn roof = spectral::roof_from_space(space, shift);
    const int depth = cfg.resolved_depth();

    spectral::SystemDelta sd = spectral::system_delta(shift, cg, depth, roof);
    res.delta_pressure = sd.delta;
    res.multiplicity = sd.multiplicity;

    int top = -1;
    for (int c = 0; c < cg.num_components; ++c)
      if (sd.maximal[c]) {
        top = c;
        break;
      }
    if (top < 0) throw error(errc::spectral, "no maximal component");

    for (int c = 0; c < cg.num_components; ++c) {
      if (!std::isfinite(sd.exponents[c])) continue;
      potential::CylinderPotential pot =
          potential::build_cylinder_potential(space, shift, cg.members[c], depth);
      std::string csv = "# component=" + std::to_string(c) + " depth=" +
                        std::to_string(pot.depth) + "\npath,roof\n";
      for (const auto& [p, v] : pot.values) csv += join_path(p) + "," + fmt(v) + "\n";
      write_text_file(path("potential_c" + std::to_string(c) + ".csv"), csv);
    }

    {
      auto rows = potential::hoelder_audit(space, shift, cfg.hoelder_depths);
      std::string csv = "depth,max_oscillation,probe_depth,cylinders\n";
      for (const auto& r : rows)
        csv += std::to_string(r.depth) + "," + fmt(r.max_oscillation) + "," +
               std::to_string(r.probe_depth) + "," + std::to_string(r.cylinders) + "\n";
      write_text_file(path("hoelder.csv"), csv);
    }

    {
      auto samples = spectral::pressure_curve(sd.structures[top], cfg.curve_lo, cfg.curve_hi,
                                              cfg.curve_step);
      std::string csv = "t,pressure,derivative\n";
      for (const auto& s : samples)
        csv += fmt(s.t) + "," + fmt(s.value) + "," + fmt(s.derivative) + "\n";
      write_text_file(path("pressure_curve.csv"), csv);
    }

    spectral::LatticeResult lat =
        spectral::lattice_test(shift, cg, top, depth, roof, cfg.lattice_max_period);
    res.lattice_verdict = verdict_name(lat.verdict);
    res.lattice_span = lat.span;
    res.mixing = lat.verdict == spectral::LatticeVerdict::non_arithmetic;

    auto grid_full = counting::uniform_grid(cfg.t_max_full, cfg.grid_step);
    auto grid_conj = counting::uniform_grid(cfg.t_max_conj, cfg.grid_step);

    counting::CountSeries full = counting::count_full_orbit(space, grid_full, count_opts);
    write_text_file(path("counts_full.csv"), format_series_csv(full, res.config_hash));
    counting::CountSeries coset_series =
        counting::count_coset_orbit(space, coset, grid_full, count_opts);
    write_text_file(path("counts_coset.csv"), format_series_csv(coset_series, res.config_hash));
    counting::CountSeries conj =
        counting::count_conjugacy_class(space, g, coset, grid_conj, count_opts);
    write_text_file(path("counts_conjugacy.csv"), format_series_csv(conj, res.config_hash));

    group::Word u = cfg.cylinder_prefix.empty() ? default_cylinder_prefix(coset, gens)
                                                : group::parse_word(cfg.cylinder_prefix, gens);
    counting::CountSeries cyl =
        counting::count_cylinder_restricted(space, g, coset, u, grid_conj, count_opts);
    write_text_file(path("counts_cylinder.csv"), format_series_csv(cyl, res.config_hash));

    counting::RateFit fit_full =
        counting::fit_rate(full, cfg.t_max_full / 2.0, cfg.t_max_full, true);
    counting::RateFit fit_conj = counting::fit_rate(conj, cfg.fit_lo, cfg.fit_hi, true);
    res.delta_fit = fit_full.rate;
    res.conj_rate = fit_conj.rate;
    res.rate_ratio = fit_conj.rate / fit_full.rate;

    const int audit_hi = std::max(cfg.cyl_prefix_len + 2, std::min(needed, 10));
    auto audit_rows =
        counting::length_comparison_audit(space, g, coset, cfg.cyl_prefix_len, audit_hi);
    {
      std::string csv = "depth,max_error,samples\n";
      for (const auto& r : audit_rows)
        csv += std::to_string(r.depth) + "," + fmt(r.max_error) + "," +
               std::to_string(r.samples) + "\n";
      write_text_file(path("length_audit.csv"), csv);
    }

    counting::ConstantEstimate est = counting::estimate_C(space, g, coset, cfg.cyl_prefix_len,
                                                          sd.delta, grid_conj, count_opts);
    res.c_estimate = est.c;
    res.c_low_confidence = est.low_confidence;

    json j;
    j["config_hash"] = hex_hash(res.config_hash);
    j["space"] = cfg.kind;
    j["g"] = group::to_string(g);
    j["coding"] = {{"states", coset.num_vertices},
                   {"edges", coset.edges().size()},
                   {"verified_len", coset.verified_len},
                   {"needed_len", needed}};
    j["delta"] = {{"pressure", res.delta_pressure},
                  {"fit_full", res.delta_fit},
                  {"gap", std::abs(res.delta_pressure - res.delta_fit)}};
    j["conjugacy"] = {{"rate", res.conj_rate},
                      {"expected", res.delta_pressure / 2.0},
                      {"ratio_to_full", res.rate_ratio}};
    j["multiplicity"] = res.multiplicity;
    json comps = json::array();
    for (int c = 0; c < cg.num_components; ++c) {
      if (!std::isfinite(sd.exponents[c])) continue;
      comps.push_back({{"component", c},
                       {"states", cg.members[c].size()},
                       {"exponent", sd.exponents[c]},
                       {"maximal", static_cast<bool>(sd.maximal[c])}});
    }
    j["components"] = comps;
    j["lattice"] = {{"verdict", res.lattice_verdict},
                    {"span", res.lattice_span},
                    {"sums_used", lat.sums_used},
                    {"mixing", res.mixing}};
    json audit = json::array();
    for (const auto& r : audit_rows)
      audit.push_back({{"depth", r.depth}, {"max_error", r.max_error}, {"samples", r.samples}});
    j["length_audit"] = audit;
    json rows = json::array();
    for (const auto& r : est.rows)
      rows.push_back({{"prefix", group::to_string(r.prefix)},
                      {"count", r.count},
                      {"tau", r.tau},
                      {"c_u", r.c_u}});
    j["constant"] = {{"estimate", est.c},
                     {"t_ref", est.t_ref},
                     {"low_confidence", est.low_confidence},
                     {"cylinders", rows}};
    j["series"] = {{"full_total", full.counts.back()},
                   {"coset_total", coset_series.counts.back()},
                   {"conjugacy_total", conj.counts.back()},
                   {"cylinder_total", cyl.counts.back()},
                   {"cylinder_prefix", group::to_string(u)}};

    res.summary_path = path("summary.json");
    write_text_file(res.summary_path, j.dump(2) + "\n");
    fs::remove(path("summary.partial.json"));
    return res;
  } catch (const error& e) {
    json j = {{"error", e.what()}, {"code", static_cast<int>(e.code())}};
    write_text_file(path("summary.partial.json"), j.dump(2) + "\n");
    fs::remove(path("summary.json"));
    throw;
  }
}

std::string report(const std::string& out_dir) {
  std::ifstream in(fs::path(out_dir) / "summary.json");
  if (!in) {
    std::ifstream partial(fs::path(out_dir) / "summary.partial.json");
    if (partial) {
      json j = json::parse(partial);
      return "run failed (exit code " + std::to_string(j.value("code", 0)) +
             "): " + j.value("error", std::string("unknown")) + "\n";
    }
    throw error(errc::io, "no summary.json in " + out_dir);
  }
  json j = json::parse(in);
  std::ostringstream os;
  os << "space " << j.value("space", std::string()) << ", class of " << j.value("g", std::string())
     << " (config " << j.value("config_hash", std::string()) << ")\n";
  const auto& coding = j["coding"];
  os << "coset acceptor: " << coding.value("states", 0) << " states, " << coding.value("edges", 0)
     << " edges, language verified to length " << coding.value("verified_len", 0) << "\n";
  const auto& delta = j["delta"];
  os << "critical exponent: pressure root " << fmt(delta.value("pressure", 0.0)) << ", orbit fit "
     << fmt(delta.value("fit_full", 0.0)) << " (gap " << fmt(delta.value("gap", 0.0)) << ")\n";
  const auto& conj = j["conjugacy"];
  os << "conjugacy growth: " << fmt(conj.value("rate", 0.0)) << " vs expected "
     << fmt(conj.value("expected", 0.0)) << " (ratio to full " << fmt(conj.value("ratio_to_full", 0.0))
     << ")\n";
  const auto& lat = j["lattice"];
  os << "length spectrum: " << lat.value("verdict", std::string()) << " (span "
     << fmt(lat.value("span", 0.0)) << "), multiplicity " << j.value("multiplicity", 0) << "\n";
  const auto& c = j["constant"];
  os << "leading constant: " << fmt(c.value("estimate", 0.0))
     << (c.value("low_confidence", false) ? " (low confidence)" : "") << "\n";
  return os.str();
}

}  // namespace orbitcount::pipeline
