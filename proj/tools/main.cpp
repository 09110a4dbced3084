// Command line front end. Every subcommand loads the same config format; see
// configs/ for examples. Exit codes mirror orbitcount::errc (2 usage,
// 3 config, 4/5 coding, 6 budget, 7 audit, 8 spectral, 9 io).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "orbitcount/config.hpp"
#include "orbitcount/counting.hpp"
#include "orbitcount/errors.hpp"
#include "orbitcount/pipeline.hpp"
#include "orbitcount/potential.hpp"
#include "orbitcount/spectral.hpp"

namespace oc = orbitcount;

namespace {

std::string default_out() {
  if (const char* env = std::getenv("ORBITCOUNT_OUT")) return env;
  return "out";
}

oc::config::Config load(const std::string& path) {
  if (path.empty()) throw oc::error(oc::errc::usage, "--config is required");
  return oc::config::load_config(path);
}

std::string out_file(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

struct SpectralSetup {
  oc::geometry::ModelSpace space;
  oc::coding::LabeledAutomaton coset;
  oc::coding::AugmentedShift shift;
  oc::coding::ComponentGraph cg;
  int depth = 0;
};

SpectralSetup spectral_setup(const oc::config::Config& cfg) {
  SpectralSetup s{cfg.make_space(), {}, {}, {}, cfg.resolved_depth()};
  oc::coding::CosetAcceptorOptions copts;
  copts.signature_radius = cfg.signature_radius;
  copts.verify_len = cfg.verify_len;
  copts.state_budget = cfg.state_budget;
  s.coset = oc::coding::build_coset_acceptor(s.space.gens, cfg.g_word(), copts);
  s.shift = oc::coding::augment(s.coset);
  s.cg = oc::coding::scc_decompose(s.shift);
  return s;
}

int top_maximal(const oc::spectral::SystemDelta& sd) {
  for (size_t c = 0; c < sd.maximal.size(); ++c)
    if (sd.maximal[c]) return static_cast<int>(c);
  throw oc::error(oc::errc::spectral, "no maximal component");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conjugacy-restricted orbit counting on negatively curved spaces"};
  app.require_subcommand(1);

  std::string config_path, out_dir = default_out(), count_kind, prefix_str;
  int depth_override = -1, verify_len = -1;
  double tmax_override = -1.0;

  auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--config", config_path, "config file");
    if (with_out) cmd->add_option("--out", out_dir, "artifact directory");
    return cmd;
  };

  auto* cmd_acceptor = add_common(app.add_subcommand("acceptor", "build the reduced-word acceptor"), true);
  auto* cmd_coset = add_common(app.add_subcommand("coset-acceptor", "build and verify the coset acceptor"), true);
  auto* cmd_pressure = add_common(app.add_subcommand("pressure", "pressure curve of the top component"), true);
  cmd_pressure->add_option("--depth", depth_override, "cylinder depth");
  auto* cmd_delta = add_common(app.add_subcommand("delta", "critical exponents per component"), false);
  cmd_delta->add_option("--depth", depth_override, "cylinder depth");
  auto* cmd_count = add_common(app.add_subcommand("count", "count orbit points"), true);
  cmd_count->add_option("kind", count_kind, "full | coset | conjugacy | cylinder")->required();
  cmd_count->add_option("--tmax", tmax_override, "largest radius");
  cmd_count->add_option("--prefix", prefix_str, "cylinder prefix word");
  auto* cmd_fit = add_common(app.add_subcommand("fit", "fit a growth rate"), true);
  cmd_fit->add_option("kind", count_kind, "full | coset | conjugacy | cylinder")->required();
  cmd_fit->add_option("--tmax", tmax_override, "largest radius");
  cmd_fit->add_option("--prefix", prefix_str, "cylinder prefix word");
  auto* cmd_verify = add_common(app.add_subcommand("verify", "re-verify the coset acceptor"), false);
  cmd_verify->add_option("--len", verify_len, "verification length");
  auto* cmd_run = add_common(app.add_subcommand("run", "full pipeline"), true);
  auto* cmd_report = add_common(app.add_subcommand("report", "render summary.json"), true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_acceptor->parsed()) {
      oc::config::Config cfg = config_path.empty() ? oc::config::Config{} : load(config_path);
      auto a = oc::coding::build_geodesic_acceptor(cfg.make_gens());
      oc::pipeline::write_text_file(out_file(out_dir, "acceptor.txt"),
                                    oc::pipeline::format_automaton(a));
      auto counts = oc::coding::path_counts(a, 8);
      std::printf("%d vertices, %zu edges\n", a.num_vertices, a.edges().size());
      for (size_t n = 0; n < counts.size(); ++n)
        std::printf("words of length %zu: %.0f\n", n, counts[n]);
    } else if (cmd_coset->parsed()) {
      oc::config::Config cfg = load(config_path);
      oc::coding::CosetAcceptorOptions copts;
      copts.signature_radius = cfg.signature_radius;
      copts.verify_len = cfg.verify_len;
      copts.state_budget = cfg.state_budget;
      auto a = oc::coding::build_coset_acceptor(cfg.make_gens(), cfg.g_word(), copts);
      oc::pipeline::write_text_file(out_file(out_dir, "coset_acceptor.txt"),
                                    oc::pipeline::format_automaton(a));
      std::printf("%d states, %zu edges, language verified to length %d\n", a.num_vertices,
                  a.edges().size(), a.verified_len);
    } else if (cmd_pressure->parsed()) {
      oc::config::Config cfg = load(config_path);
      if (depth_override >= 0) cfg.depth = depth_override;
      SpectralSetup s = spectral_setup(cfg);
      auto roof = oc::spectral::roof_from_space(s.space, s.shift);
      auto sd = oc::spectral::system_delta(s.shift, s.cg, s.depth, roof);
      auto samples = oc::spectral::pressure_curve(sd.structures[top_maximal(sd)], cfg.curve_lo,
                                                  cfg.curve_hi, cfg.curve_step);
      std::string csv = "t,pressure,derivative\n";
      char buf[128];
      for (const auto& smp : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", smp.t, smp.value, smp.derivative);
        csv += buf;
      }
      oc::pipeline::write_text_file(out_file(out_dir, "pressure_curve.csv"), csv);
      std::printf("critical exponent %.12f (%zu samples written)\n", sd.delta, samples.size());
    } else if (cmd_delta->parsed()) {
      oc::config::Config cfg = load(config_path);
      if (depth_override >= 0) cfg.depth = depth_override;
      SpectralSetup s = spectral_setup(cfg);
      auto roof = oc::spectral::roof_from_space(s.space, s.shift);
      auto sd = oc::spectral::system_delta(s.shift, s.cg, s.depth, roof);
      for (size_t c = 0; c < sd.exponents.size(); ++c) {
        if (!std::isfinite(sd.exponents[c])) continue;
        std::printf("component %zu (%zu states): exponent %.12f%s\n", c, s.cg.members[c].size(),
                    sd.exponents[c], sd.maximal[c] ? " (maximal)" : "");
      }
      std::printf("system: delta %.12f, multiplicity %d\n", sd.delta, sd.multiplicity);
    } else if (cmd_count->parsed() || cmd_fit->parsed()) {
      oc::config::Config cfg = load(config_path);
      oc::counting::CountOptions opts;
      opts.word_budget = cfg.word_budget;
      opts.envelope_sample_depth = cfg.envelope_sample_depth;
      bool conj_like = count_kind == "conjugacy" || count_kind == "cylinder";
      double tmax = tmax_override > 0 ? tmax_override
                                      : (conj_like ? cfg.t_max_conj : cfg.t_max_full);
      auto grid = oc::counting::uniform_grid(tmax, cfg.grid_step);
      oc::geometry::ModelSpace space = cfg.make_space();
      oc::counting::CountSeries series;
      if (count_kind == "full") {
        series = oc::counting::count_full_orbit(space, grid, opts);
      } else {
        if (count_kind != "coset" && count_kind != "conjugacy" && count_kind != "cylinder")
          throw oc::error(oc::errc::usage, "unknown count kind '" + count_kind + "'");
        SpectralSetup s = spectral_setup(cfg);
        // The scan walks the acceptor language to its envelope's depth cap,
        // which can pass the configured verify_len; deepen first if so.
        oc::counting::PruningEnvelope env =
            count_kind == "coset"
                ? oc::counting::coset_pruning_envelope(space, s.coset, opts)
                : oc::counting::conjugacy_pruning_envelope(space, cfg.g_word(), s.coset, opts);
        int needed = oc::counting::envelope_depth_cap(env, tmax);
        if (needed > s.coset.verified_len) {
          oc::coding::CosetAcceptorOptions copts;
          copts.signature_radius = cfg.signature_radius;
          copts.verify_len = needed;
          copts.state_budget = cfg.state_budget;
          s.coset = oc::coding::build_coset_acceptor(space.gens, cfg.g_word(), copts);
        }
        if (count_kind == "coset") {
          series = oc::counting::count_coset_orbit(space, s.coset, grid, opts);
        } else if (count_kind == "conjugacy") {
          series = oc::counting::count_conjugacy_class(space, cfg.g_word(), s.coset, grid, opts);
        } else {
          std::string p = prefix_str.empty() ? cfg.cylinder_prefix : prefix_str;
          if (p.empty()) throw oc::error(oc::errc::usage, "cylinder counting needs --prefix");
          series = oc::counting::count_cylinder_restricted(
              space, cfg.g_word(), s.coset, oc::group::parse_word(p, space.gens), grid, opts);
        }
      }
      if (cmd_count->parsed()) {
        oc::pipeline::write_text_file(out_file(out_dir, "counts_" + count_kind + ".csv"),
                                      oc::pipeline::format_series_csv(series, cfg.hash()));
        std::printf("%s count at radius %.17g: %ld (%ld words scanned)\n", series.kind.c_str(),
                    series.grid.back(), series.counts.back(), series.enumerated);
      } else {
        double lo = conj_like ? cfg.fit_lo : cfg.t_max_full / 2.0;
        double hi = conj_like ? cfg.fit_hi : cfg.t_max_full;
        auto fit = oc::counting::fit_rate(series, lo, std::min(hi, tmax), true);
        std::printf("%s growth rate %.12f (intercept %.6f, residual %.3g, %d points)\n",
                    series.kind.c_str(), fit.rate, fit.intercept, fit.residual, fit.points);
      }
    } else if (cmd_verify->parsed()) {
      oc::config::Config cfg = load(config_path);
      oc::coding::CosetAcceptorOptions copts;
      copts.signature_radius = cfg.signature_radius;
      copts.verify_len = verify_len > 0 ? verify_len : cfg.verify_len;
      copts.state_budget = cfg.state_budget;
      auto a = oc::coding::build_coset_acceptor(cfg.make_gens(), cfg.g_word(), copts);
      std::printf("coset acceptor verified to length %d (%d states)\n", a.verified_len,
                  a.num_vertices);
    } else if (cmd_run->parsed()) {
      oc::config::Config cfg = load(config_path);
      oc::pipeline::run(cfg, out_dir);
      std::fputs(oc::pipeline::report(out_dir).c_str(), stdout);
      std::printf("artifacts in %s\n", out_dir.c_str());
    } else if (cmd_report->parsed()) {
      std::fputs(oc::pipeline::report(out_dir).c_str(), stdout);
    }
  } catch (const oc::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
