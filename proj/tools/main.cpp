// Command-line front end: analysis subcommands, figure recipes, and a
// `check` mode that revalidates stored outputs. All randomness comes from
// --seed (or COMPDIST_SEED); identical configs reproduce identical bytes.

#include <CLI11.hpp>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "compdist/version.hpp"
#include "output.hpp"

namespace {

using compdist_cli::json;
using compdist_cli::TableDoc;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("COMPDIST_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: COMPDIST_SEED is not a valid integer; using "
                << kDefaultSeed << "\n";
    }
  }
  return kDefaultSeed;
}

struct CommonFlags {
  std::string format = "csv";
  std::string out;
  std::string svg;
};

void add_common(CLI::App* cmd, CommonFlags& flags,
                const std::string& default_format = "csv",
                bool with_svg = true) {
  flags.format = default_format;
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember(cmd->get_name() == "simulate"
                                ? std::vector<std::string>{"csv", "json", "jsonl"}
                                : std::vector<std::string>{"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out, "output path (default stdout)");
  if (with_svg) {
    cmd->add_option("--svg", flags.svg, "also render an SVG plot to this path");
  }
}

void emit(const TableDoc& doc, const CommonFlags& flags,
          const std::vector<json>* stream_records = nullptr) {
  if (flags.format == "jsonl") {
    std::string payload;
    json header;
    header["schema"] = "compdist-jsonl v" + std::to_string(compdist::kSchemaVersion);
    header["tool"] = {{"name", compdist::kToolName},
                      {"version", compdist::kToolVersion}};
    header["command"] = doc.command;
    header["config"] = doc.config;
    header["columns"] = doc.columns;
    payload += header.dump() + "\n";
    if (stream_records) {
      for (const json& rec : *stream_records) payload += rec.dump() + "\n";
    }
    compdist_cli::write_text(flags.out, payload);
    return;
  }
  compdist_cli::write_text(flags.out, flags.format == "json"
                                          ? compdist_cli::to_json_doc(doc)
                                          : compdist_cli::to_csv(doc));
}

void run_and_emit(const std::string& command, const json& config,
                  const CommonFlags& flags) {
  std::string svg;
  std::vector<json> stream;
  const bool want_stream = flags.format == "jsonl";
  const TableDoc doc = compdist_cli::run_command(
      command, config, nullptr, flags.svg.empty() ? nullptr : &svg,
      want_stream ? &stream : nullptr);
  emit(doc, flags, want_stream ? &stream : nullptr);
  if (!flags.svg.empty()) compdist_cli::write_text(flags.svg, svg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressibility analysis of iid high-dimensional data"};
  app.set_version_flag("--version", std::string(compdist::kToolName) + " " +
                                        std::string(compdist::kToolVersion));
  app.require_subcommand(1);

  const std::uint64_t seed_default = env_default_seed();

  // gfun ------------------------------------------------------------------
  std::string gfun_dist;
  double gfun_q = 2.0;
  std::string gfun_grid = "0:1:101";
  CommonFlags gfun_flags;
  auto* gfun = app.add_subcommand("gfun", "relative k-term error limit G_q(kappa)");
  gfun->add_option("dist", gfun_dist, "distribution spec")->required();
  gfun->add_option("--q", gfun_q, "error norm exponent")->capture_default_str();
  gfun->add_option("--grid", gfun_grid, "kappa grid lo:hi:count")
      ->capture_default_str();
  add_common(gfun, gfun_flags);

  // hfun ------------------------------------------------------------------
  std::string hfun_dist;
  std::string hfun_grid = "0.05:0.95:19";
  CommonFlags hfun_flags;
  auto* hfun = app.add_subcommand("hfun", "oracle tradeoff H(delta) with argmin rho");
  hfun->add_option("dist", hfun_dist, "distribution spec")->required();
  hfun->add_option("--grid", hfun_grid, "delta grid lo:hi:count")
      ->capture_default_str();
  add_common(hfun, hfun_flags);

  // delta0 ----------------------------------------------------------------
  std::string d0_dist;
  CommonFlags d0_flags;
  auto* d0 = app.add_subcommand("delta0", "critical undersampling ratio");
  d0->add_option("dist", d0_dist, "distribution spec")->required();
  add_common(d0, d0_flags, "csv", false);

  // report ----------------------------------------------------------------
  std::string report_dist;
  std::string report_grid = "0.05:0.95:19";
  CommonFlags report_flags;
  auto* report = app.add_subcommand("report", "compressibility report with verdict");
  report->add_option("dist", report_dist, "distribution spec")->required();
  report->add_option("--grid", report_grid, "delta grid lo:hi:count")
      ->capture_default_str();
  add_common(report, report_flags);

  // simulate ---------------------------------------------------------------
  std::string sim_dist = "laplace";
  std::size_t sim_n = 256;
  std::string sim_deltas = "0.1:0.9:9";
  std::vector<std::string> sim_decoders = {"ls"};
  std::string sim_krule = "fixed:0.25";
  std::size_t sim_trials = 500;
  std::uint64_t sim_seed = seed_default;
  double sim_l1_tol = 1e-7;
  int sim_l1_iters = 50000;
  std::string sim_config_path;
  CommonFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo decoder trials");
  sim->add_option("--config", sim_config_path,
                  "JSON experiment config (flags override its fields)");
  sim->add_option("--dist", sim_dist, "distribution spec")->capture_default_str();
  sim->add_option("--N", sim_n, "signal dimension")->capture_default_str();
  sim->add_option("--deltas", sim_deltas, "delta grid lo:hi:count")
      ->capture_default_str();
  sim->add_option("--decoders", sim_decoders,
                  "decoders to run (trivial, ls, oracle, l1)")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--k-rule", sim_krule, "oracle support rule: fixed:RHO | best | k:K")
      ->capture_default_str();
  sim->add_option("--trials", sim_trials, "trials per delta")->capture_default_str();
  sim->add_option("--seed", sim_seed, "master seed")->capture_default_str();
  sim->add_option("--l1-tol", sim_l1_tol, "l1 decoder tolerance")
      ->capture_default_str();
  sim->add_option("--l1-max-iters", sim_l1_iters, "l1 iteration cap")
      ->capture_default_str();
  add_common(sim, sim_flags);

  // iocheck -----------------------------------------------------------------
  std::string io_dist;
  CommonFlags io_flags;
  auto* iocheck =
      app.add_subcommand("iocheck", "instance-optimality triviality assessment");
  iocheck->add_option("dist", io_dist, "distribution spec")->required();
  add_common(iocheck, io_flags, "json", false);

  // nspfuzz -----------------------------------------------------------------
  std::size_t nsp_m = 64, nsp_n = 128, nsp_k = 8, nsp_dirs = 200;
  double nsp_eta = 1.0;
  std::uint64_t nsp_seed = seed_default;
  CommonFlags nsp_flags;
  auto* nsp = app.add_subcommand("nspfuzz",
                                 "randomized falsifier for the robust null "
                                 "space property (one-sided)");
  nsp->add_option("--m", nsp_m, "rows")->capture_default_str();
  nsp->add_option("--N", nsp_n, "columns")->capture_default_str();
  nsp->add_option("--k", nsp_k, "support order")->capture_default_str();
  nsp->add_option("--eta", nsp_eta, "NSP constant")->capture_default_str();
  nsp->add_option("--directions", nsp_dirs, "random kernel directions")
      ->capture_default_str();
  nsp->add_option("--seed", nsp_seed, "seed")->capture_default_str();
  add_common(nsp, nsp_flags, "json", false);

  // imgstats ----------------------------------------------------------------
  std::string img_dir;
  std::size_t img_size = 32, img_count = 100;
  std::string img_transform = "dct";
  std::vector<std::string> img_overlays;
  std::uint64_t img_seed = seed_default;
  CommonFlags img_flags;
  auto* img = app.add_subcommand("imgstats",
                                 "transform-domain order statistics of image patches");
  img->add_option("--dir", img_dir, "directory of grayscale P5 .pgm images")
      ->required();
  img->add_option("--size", img_size, "patch side (power of two)")
      ->capture_default_str();
  img->add_option("--count", img_count, "number of patches")->capture_default_str();
  img->add_option("--transform", img_transform, "dct or db4")
      ->check(CLI::IsMember({"dct", "db4"}))
      ->capture_default_str();
  img->add_option("--overlay", img_overlays,
                  "model curve to add as a column (distribution spec; repeatable)");
  img->add_option("--seed", img_seed, "patch sampling seed")->capture_default_str();
  add_common(img, img_flags);

  // fig2 ---------------------------------------------------------------------
  std::size_t fig2_trials = 500, fig2_n = 256;
  std::string fig2_deltas = "0:0.95:20";
  std::uint64_t fig2_seed = seed_default;
  CommonFlags fig2_flags;
  auto* fig2 = app.add_subcommand(
      "fig2", "decoder error vs undersampling for Laplace data");
  fig2->add_option("--trials", fig2_trials, "Monte Carlo trials per delta")
      ->capture_default_str();
  fig2->add_option("--N", fig2_n, "signal dimension")->capture_default_str();
  fig2->add_option("--deltas", fig2_deltas, "delta grid lo:hi:count")
      ->capture_default_str();
  fig2->add_option("--seed", fig2_seed, "master seed")->capture_default_str();
  add_common(fig2, fig2_flags);

  // fig4 ---------------------------------------------------------------------
  std::string fig4_grid = "0:1:101";
  CommonFlags fig4_flags;
  auto* fig4 = app.add_subcommand(
      "fig4", "Laplace G_1 against the step bound on instance optimality");
  fig4->add_option("--grid", fig4_grid, "kappa grid lo:hi:count")
      ->capture_default_str();
  add_common(fig4, fig4_flags);

  // fig5 ---------------------------------------------------------------------
  std::string fig5_grid = "0.3:4:12";
  CommonFlags fig5_flags;
  auto* fig5 = app.add_subcommand(
      "fig5", "critical undersampling of the generalized Gaussian vs tau");
  fig5->add_option("--grid", fig5_grid, "tau grid lo:hi:count")
      ->capture_default_str();
  add_common(fig5, fig5_flags);

  // check ----------------------------------------------------------------------
  std::string check_path;
  auto* check = app.add_subcommand(
      "check", "revalidate a stored output against recomputed rows");
  check->add_option("file", check_path, "CSV/JSON/JSONL file produced by this tool")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gfun->parsed()) {
      const json cfg = {{"command", "gfun"},
                        {"dist", gfun_dist},
                        {"q", gfun_q},
                        {"grid", compdist_cli::parse_grid(gfun_grid)}};
      run_and_emit("gfun", cfg, gfun_flags);
    } else if (hfun->parsed()) {
      const json cfg = {{"command", "hfun"},
                        {"dist", hfun_dist},
                        {"grid", compdist_cli::parse_grid(hfun_grid)}};
      run_and_emit("hfun", cfg, hfun_flags);
    } else if (d0->parsed()) {
      const json cfg = {{"command", "delta0"}, {"dist", d0_dist}};
      run_and_emit("delta0", cfg, d0_flags);
    } else if (report->parsed()) {
      const json cfg = {{"command", "report"},
                        {"dist", report_dist},
                        {"grid", compdist_cli::parse_grid(report_grid)}};
      run_and_emit("report", cfg, report_flags);
    } else if (sim->parsed()) {
      json cfg;
      if (!sim_config_path.empty()) {
        std::ifstream in(sim_config_path);
        if (!in) throw std::runtime_error("cannot open " + sim_config_path);
        in >> cfg;
      } else {
        cfg = json::object();
      }
      const auto override_if = [&](const char* key, const json& v, bool passed) {
        if (passed || !cfg.contains(key)) cfg[key] = v;
      };
      override_if("dist", sim_dist, sim->count("--dist") > 0);
      override_if("N", sim_n, sim->count("--N") > 0);
      override_if("deltas", compdist_cli::parse_grid(sim_deltas),
                  sim->count("--deltas") > 0);
      override_if("decoders", sim_decoders, sim->count("--decoders") > 0);
      override_if("k_rule", sim_krule, sim->count("--k-rule") > 0);
      override_if("trials", sim_trials, sim->count("--trials") > 0);
      override_if("master_seed", sim_seed, sim->count("--seed") > 0);
      override_if("l1_tol", sim_l1_tol, sim->count("--l1-tol") > 0);
      override_if("l1_max_iters", sim_l1_iters, sim->count("--l1-max-iters") > 0);
      run_and_emit("simulate", cfg, sim_flags);
    } else if (iocheck->parsed()) {
      const json cfg = {{"command", "iocheck"}, {"dist", io_dist}};
      run_and_emit("iocheck", cfg, io_flags);
    } else if (nsp->parsed()) {
      const json cfg = {{"command", "nspfuzz"}, {"m", nsp_m},
                        {"N", nsp_n},           {"k", nsp_k},
                        {"eta", nsp_eta},       {"directions", nsp_dirs},
                        {"seed", nsp_seed}};
      run_and_emit("nspfuzz", cfg, nsp_flags);
    } else if (img->parsed()) {
      const json cfg = {{"command", "imgstats"},
                        {"dir", img_dir},
                        {"size", img_size},
                        {"count", img_count},
                        {"transform", img_transform},
                        {"overlays", img_overlays},
                        {"seed", img_seed}};
      run_and_emit("imgstats", cfg, img_flags);
    } else if (fig2->parsed()) {
      const json cfg = {{"command", "fig2"},
                        {"trials", fig2_trials},
                        {"N", fig2_n},
                        {"deltas", compdist_cli::parse_grid(fig2_deltas)},
                        {"seed", fig2_seed}};
      run_and_emit("fig2", cfg, fig2_flags);
    } else if (fig4->parsed()) {
      const json cfg = {{"command", "fig4"},
                        {"grid", compdist_cli::parse_grid(fig4_grid)}};
      run_and_emit("fig4", cfg, fig4_flags);
    } else if (fig5->parsed()) {
      const json cfg = {{"command", "fig5"},
                        {"grid", compdist_cli::parse_grid(fig5_grid)}};
      run_and_emit("fig5", cfg, fig5_flags);
    } else if (check->parsed()) {
      const std::string mismatch = compdist_cli::check_stored_doc(check_path);
      if (!mismatch.empty()) {
        std::cerr << "check failed: " << mismatch << "\n";
        return 1;
      }
      std::cout << "check ok: 3 sampled rows reproduce\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
