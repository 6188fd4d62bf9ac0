#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "compdist/distribution.hpp"
#include "compdist/experiment.hpp"
#include "compdist/instance_opt.hpp"
#include "compdist/metrics.hpp"
#include "compdist/patches.hpp"
#include "compdist/svg.hpp"
#include "compdist/theory.hpp"

namespace compdist_cli {

using namespace compdist;

std::vector<double> parse_grid(const std::string& spec) {
  const auto fail = [&spec]() {
    throw std::invalid_argument("bad grid spec '" + spec + "' (want lo:hi:count)");
  };
  double lo = 0.0, hi = 0.0;
  long count = 0;
  char extra = 0;
  const int got =
      std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &count, &extra);
  if (got != 3 || count < 1 || !(std::isfinite(lo) && std::isfinite(hi))) fail();
  if (count == 1) return {lo};
  if (!(hi > lo)) fail();
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

std::vector<std::size_t> effective_rows(const std::vector<std::size_t>* filter,
                                        std::size_t n) {
  if (!filter) return all_indices(n);
  for (std::size_t i : *filter) {
    if (i >= n) throw std::runtime_error("row index out of range for recompute");
  }
  return *filter;
}

const char* to_string(GMethod m) {
  return m == GMethod::closed_form ? "closed_form" : "quadrature";
}

const char* to_string(Delta0Marker m) {
  switch (m) {
    case Delta0Marker::found:
      return "found";
    case Delta0Marker::not_found:
      return "not_found";
    case Delta0Marker::always_compressible:
      return "always_compressible";
    case Delta0Marker::degenerate_boundary:
      return "degenerate_boundary";
  }
  return "?";
}

// ---------------------------------------------------------------- gfun --

TableDoc run_gfun(const json& cfg, const std::vector<std::size_t>* filter,
                  std::string* svg_out) {
  const Distribution dist = Distribution::parse(cfg.at("dist").get<std::string>());
  const double q = cfg.at("q").get<double>();
  const std::vector<double> grid = cfg.at("grid").get<std::vector<double>>();
  TableDoc doc;
  doc.command = "gfun";
  doc.config = cfg;
  doc.columns = {"kappa", "G", "method"};
  doc.summary = {{"unbounded_moment", !dist.finite_moment(q)}};
  SvgSeries series;
  series.label = "G_" + format_double(q) + "[" + dist.spec_string() + "]";
  for (std::size_t i : effective_rows(filter, grid.size())) {
    const double kappa = grid[i];
    std::string value = "nan";
    std::string method = "unbounded_moment";
    try {
      const GValue g = g_fun(dist, q, kappa);
      value = format_double(g.value);
      method = g.unbounded_moment ? "unbounded_moment" : to_string(g.method);
      series.points.emplace_back(kappa, g.value);
    } catch (const std::domain_error&) {
      // kappa = 0 with an unbounded moment has no defined value.
    }
    doc.rows.push_back({format_double(kappa), value, method});
  }
  if (svg_out) {
    SvgOptions opt;
    opt.title = "relative k-term error limit";
    opt.xlabel = "kappa";
    opt.ylabel = "G";
    *svg_out = render_line_plot({series}, opt);
  }
  return doc;
}

// ---------------------------------------------------------------- hfun --

TableDoc run_hfun(const json& cfg, const std::vector<std::size_t>* filter,
                  std::string* svg_out) {
  const Distribution dist = Distribution::parse(cfg.at("dist").get<std::string>());
  const std::vector<double> grid = cfg.at("grid").get<std::vector<double>>();
  TableDoc doc;
  doc.command = "hfun";
  doc.config = cfg;
  doc.columns = {"delta", "H", "rho_star"};
  SvgSeries hs, ls;
  hs.label = "H[" + dist.spec_string() + "]";
  ls.label = "1 - delta";
  ls.color = "#b23a1f";
  ls.dashed = true;
  for (std::size_t i : effective_rows(filter, grid.size())) {
    const HValue h = h_fun(dist, grid[i]);
    doc.rows.push_back({format_double(grid[i]), format_double(h.value),
                        format_double(h.rho_star)});
    hs.points.emplace_back(grid[i], h.value);
    ls.points.emplace_back(grid[i], 1.0 - grid[i]);
  }
  if (svg_out) {
    SvgOptions opt;
    opt.title = "oracle tradeoff functional";
    opt.xlabel = "delta";
    opt.ylabel = "H";
    *svg_out = render_line_plot({hs, ls}, opt);
  }
  return doc;
}

// -------------------------------------------------------------- delta0 --

TableDoc run_delta0(const json& cfg, const std::vector<std::size_t>* filter) {
  const Distribution dist = Distribution::parse(cfg.at("dist").get<std::string>());
  const Delta0Result res = critical_undersampling(dist);
  TableDoc doc;
  doc.command = "delta0";
  doc.config = cfg;
  doc.columns = {"delta0", "marker", "crossings"};
  doc.summary = {{"marker", to_string(res.marker)}};
  for (std::size_t i : effective_rows(filter, 1)) {
    (void)i;
    doc.rows.push_back(
        {res.delta0 ? format_double(*res.delta0) : "nan",
         to_string(res.marker), format_count(res.crossings.size())});
  }
  return doc;
}

// -------------------------------------------------------------- report --

TableDoc run_report(const json& cfg, const std::vector<std::size_t>* filter,
                    std::string* svg_out) {
  const Distribution dist = Distribution::parse(cfg.at("dist").get<std::string>());
  const std::vector<double> grid = cfg.at("grid").get<std::vector<double>>();
  const CompressibilityReport rep = build_report(dist, grid);
  TableDoc doc;
  doc.command = "report";
  doc.config = cfg;
  doc.columns = {"delta", "H", "rho_star"};
  doc.summary = {{"verdict", compdist::to_string(rep.verdict)},
                 {"finite_second_moment", rep.finite_second},
                 {"finite_fourth_moment", rep.finite_fourth},
                 {"delta0", rep.delta0 ? json(*rep.delta0) : json()},
                 {"delta0_marker", to_string(rep.delta0_marker)},
                 {"delta0_crossings", rep.delta0_crossings}};
  for (std::size_t i : effective_rows(filter, rep.h_samples.size())) {
    const HSample& s = rep.h_samples[i];
    doc.rows.push_back({format_double(s.delta), format_double(s.h),
                        format_double(s.rho_star)});
  }
  if (svg_out) {
    SvgSeries hs, ls;
    hs.label = "H";
    ls.label = "1 - delta";
    ls.color = "#b23a1f";
    ls.dashed = true;
    for (const HSample& s : rep.h_samples) {
      hs.points.emplace_back(s.delta, s.h);
      ls.points.emplace_back(s.delta, 1.0 - s.delta);
    }
    SvgOptions opt;
    opt.title = "compressibility report: " + dist.spec_string();
    opt.xlabel = "delta";
    opt.ylabel = "relative squared error";
    *svg_out = render_line_plot({hs, ls}, opt);
  }
  return doc;
}

// ------------------------------------------------------------ simulate --

ExperimentConfig experiment_from_json(const json& cfg) {
  ExperimentConfig ec;
  from_json(cfg, ec);
  return ec;
}

std::string format_trial_cell_k(const TrialRecord& r) {
  return r.k ? format_count(*r.k) : "";
}

std::vector<std::string> trial_row(const TrialRecord& r) {
  return {compdist::to_string(r.decoder),
          format_double(r.delta),
          format_double(r.rho),
          format_trial_cell_k(r),
          format_count(r.trial),
          format_double(r.rel_sq_error),
          r.iters ? std::to_string(*r.iters) : "",
          r.residual ? format_double(*r.residual) : ""};
}

json trial_json(const TrialRecord& r) {
  json j;
  j["decoder"] = compdist::to_string(r.decoder);
  j["delta"] = format_double(r.delta);
  j["rho"] = format_double(r.rho);
  j["k"] = format_trial_cell_k(r);
  j["trial"] = format_count(r.trial);
  j["rel_sq_error"] = format_double(r.rel_sq_error);
  j["iters"] = r.iters ? std::to_string(*r.iters) : "";
  j["residual"] = r.residual ? format_double(*r.residual) : "";
  j["converged"] = r.converged;
  j["failed"] = r.failed;
  if (r.failed) j["error"] = r.error;
  j["trial_index"] = r.trial_index;
  return j;
}

TableDoc run_simulate(const json& cfg, const std::vector<std::size_t>* filter,
                      std::string* svg_out, std::vector<json>* stream_records) {
  const ExperimentConfig ec = experiment_from_json(cfg);
  TableDoc doc;
  doc.command = "simulate";
  doc.config = ec;  // normalized via to_json
  doc.config["command"] = "simulate";
  doc.columns = {"decoder", "delta", "rho", "k",
                 "trial",   "rel_sq_error", "iters", "residual"};

  const std::size_t rows_total = ec.deltas.size() * ec.trials * ec.decoders.size();
  if (filter) {
    // Row-local recompute: each row maps to (delta index, trial, decoder).
    const Distribution dist = Distribution::parse(ec.dist);
    for (std::size_t r : effective_rows(filter, rows_total)) {
      const std::size_t per_delta = ec.trials * ec.decoders.size();
      const std::size_t di = r / per_delta;
      const std::size_t trial = (r % per_delta) / ec.decoders.size();
      const std::size_t dpos = r % ec.decoders.size();
      const double delta = ec.deltas[di];
      const auto m = static_cast<std::size_t>(
          std::llround(delta * static_cast<double>(ec.N)));
      std::size_t k = 0;
      for (DecoderKind d : ec.decoders) {
        if (d == DecoderKind::oracle) k = resolve_k(ec.k_rule, dist, delta, m);
      }
      const auto records = run_single_trial(ec, dist, di, delta, m, k, trial);
      doc.rows.push_back(trial_row(records[dpos]));
    }
    return doc;
  }

  std::map<std::pair<std::string, double>, std::pair<double, std::size_t>> means;
  run_experiment(ec, [&](const TrialRecord& r) {
    doc.rows.push_back(trial_row(r));
    if (stream_records) stream_records->push_back(trial_json(r));
    if (!r.failed) {
      auto& slot = means[{compdist::to_string(r.decoder), r.delta}];
      slot.first += r.rel_sq_error;
      slot.second += 1;
    }
  });
  if (svg_out) {
    std::map<std::string, SvgSeries> series;
    const char* palette[] = {"#1f6fb2", "#b23a1f", "#3a7d2c", "#7d3a96"};
    int color = 0;
    for (const auto& [key, acc] : means) {
      auto& s = series[key.first];
      if (s.label.empty()) {
        s.label = key.first;
        s.color = palette[color++ % 4];
      }
      s.points.emplace_back(key.second, acc.first / static_cast<double>(acc.second));
    }
    std::vector<SvgSeries> list;
    for (auto& [name, s] : series) list.push_back(s);
    SvgOptions opt;
    opt.title = "mean relative squared error: " + ec.dist;
    opt.xlabel = "delta";
    opt.ylabel = "mean rel. sq. error";
    *svg_out = render_line_plot(list, opt);
  }
  return doc;
}

// ------------------------------------------------------------- iocheck --

TableDoc run_iocheck(const json& cfg, const std::vector<std::size_t>* filter) {
  const Distribution dist = Distribution::parse(cfg.at("dist").get<std::string>());
  const IOAssessment a = trivial_guarantee_test(dist);
  TableDoc doc;
  doc.command = "iocheck";
  doc.config = cfg;
  doc.columns = {"kappa0", "g1_at_kappa0", "trivial_at_kappa0",
                 "weak_boundary_delta0", "unbounded_first_moment"};
  doc.summary = {{"dist", a.dist},
                 {"trivial_at_kappa0", a.trivial_at_kappa0},
                 {"unbounded_first_moment", a.unbounded_first_moment}};
  for (std::size_t i : effective_rows(filter, 1)) {
    (void)i;
    doc.rows.push_back({format_double(a.kappa0), format_double(a.g1_at_kappa0),
                        a.trivial_at_kappa0 ? "true" : "false",
                        a.weak_boundary_delta0 ? format_double(*a.weak_boundary_delta0)
                                               : "nan",
                        a.unbounded_first_moment ? "true" : "false"});
  }
  return doc;
}

// ------------------------------------------------------------- nspfuzz --

TableDoc run_nspfuzz(const json& cfg, const std::vector<std::size_t>* filter) {
  const auto m = cfg.at("m").get<std::size_t>();
  const auto n = cfg.at("N").get<std::size_t>();
  const auto k = cfg.at("k").get<std::size_t>();
  const double eta = cfg.at("eta").get<double>();
  const auto directions = cfg.at("directions").get<std::size_t>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const EncoderInstance enc =
      gaussian_encoder(m, n, derive_seed(seed, 0, seed_role::encoder));
  const NspCheckResult res = robust_nsp_check(enc, eta, k, directions, seed);
  TableDoc doc;
  doc.command = "nspfuzz";
  doc.config = cfg;
  doc.columns = {"falsified", "worst_ratio", "violations", "directions"};
  doc.summary = {{"one_sided", "a clean run is evidence, not a certificate"}};
  for (std::size_t i : effective_rows(filter, 1)) {
    (void)i;
    doc.rows.push_back({res.falsified ? "true" : "false",
                        format_double(res.worst_ratio),
                        format_count(res.violations),
                        format_count(res.directions)});
  }
  return doc;
}

// ------------------------------------------------------------ imgstats --

TableDoc run_imgstats(const json& cfg, const std::vector<std::size_t>* filter,
                      std::string* svg_out) {
  namespace fs = std::filesystem;
  const std::string dir = cfg.at("dir").get<std::string>();
  const auto side = cfg.at("size").get<std::size_t>();
  const auto count = cfg.at("count").get<std::size_t>();
  const std::string transform_name = cfg.at("transform").get<std::string>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const std::vector<std::string> overlays =
      cfg.value("overlays", std::vector<std::string>{});

  const TransformKind transform =
      transform_name == "dct" ? TransformKind::dct : TransformKind::db4;
  if (transform_name != "dct" && transform_name != "db4") {
    throw std::invalid_argument("imgstats: transform must be dct or db4");
  }
  if (side < 4 || (side & (side - 1)) != 0) {
    throw std::invalid_argument("imgstats: size must be a power of two >= 4");
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("imgstats: no .pgm files in " + dir);
  }
  std::vector<Image> images;
  images.reserve(files.size());
  for (const auto& f : files) images.push_back(read_pgm(f));

  const PatchSet set = sample_patches(images, side, count, seed, dir);
  const OrderStatCurve curve = average_sorted_magnitudes(set, transform);

  TableDoc doc;
  doc.command = "imgstats";
  doc.config = cfg;
  doc.columns = {"rank", "value"};
  std::vector<OrderStatCurve> models;
  for (const std::string& spec : overlays) {
    models.push_back(
        expected_order_statistics(Distribution::parse(spec), curve.values.size()));
    // The quantile rule stands in for exact expected order statistics.
    doc.columns.push_back("model_" + models.back().tag);
  }
  doc.summary = {{"patches", set.patches.size()},
                 {"transform", transform_name},
                 {"order_stat_model", "quantile rule F^-1(1 - n/(N+1))"}};

  for (std::size_t i : effective_rows(filter, curve.values.size())) {
    std::vector<std::string> row = {format_count(i + 1),
                                    format_double(curve.values[i])};
    for (const OrderStatCurve& m : models) {
      row.push_back(format_double(m.values[i]));
    }
    doc.rows.push_back(row);
  }

  if (svg_out) {
    std::vector<SvgSeries> list;
    SvgSeries emp;
    emp.label = transform_name;
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      emp.points.emplace_back(static_cast<double>(i + 1), curve.values[i]);
    }
    list.push_back(emp);
    const char* palette[] = {"#b23a1f", "#3a7d2c", "#7d3a96"};
    for (std::size_t m = 0; m < models.size(); ++m) {
      SvgSeries s;
      s.label = models[m].tag;
      s.color = palette[m % 3];
      s.dashed = true;
      for (std::size_t i = 0; i < models[m].values.size(); ++i) {
        s.points.emplace_back(static_cast<double>(i + 1), models[m].values[i]);
      }
      list.push_back(s);
    }
    SvgOptions opt;
    opt.title = "average order statistics";
    opt.xlabel = "rank";
    opt.ylabel = "magnitude";
    opt.logx = opt.logy = true;
    *svg_out = render_line_plot(list, opt);
  }
  return doc;
}

// ---------------------------------------------------------------- fig2 --

TableDoc run_fig2(const json& cfg, const std::vector<std::size_t>* filter,
                  std::string* svg_out) {
  const auto trials = cfg.at("trials").get<std::size_t>();
  const auto n = cfg.at("N").get<std::size_t>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const std::vector<double> deltas = cfg.at("deltas").get<std::vector<double>>();
  const Distribution lap = Distribution::laplace();

  ExperimentConfig ec;
  ec.dist = "laplace";
  ec.N = n;
  ec.deltas = deltas;
  ec.decoders = {DecoderKind::oracle, DecoderKind::l1};
  ec.k_rule = KRule::parse("best");
  ec.trials = trials;
  ec.master_seed = seed;
  if (cfg.contains("l1_tol")) ec.l1.tol = cfg.at("l1_tol").get<double>();
  if (cfg.contains("l1_max_iters")) ec.l1.max_iters = cfg.at("l1_max_iters").get<int>();

  TableDoc doc;
  doc.command = "fig2";
  doc.config = cfg;
  doc.columns = {"delta",     "ls_analytic", "oracle_analytic",
                 "oracle_mc", "l1_mc",       "l1_nonconverged"};

  SvgSeries s_ls, s_orc, s_orc_mc, s_l1;
  s_ls.label = "least squares (1 - delta)";
  s_ls.color = "#b23a1f";
  s_orc.label = "oracle limit H(delta)";
  s_orc.color = "#3a7d2c";
  s_orc.dashed = true;
  s_orc_mc.label = "oracle Monte Carlo";
  s_orc_mc.color = "#3a7d2c";
  s_l1.label = "l1 Monte Carlo";
  s_l1.color = "#1f6fb2";

  for (std::size_t i : effective_rows(filter, deltas.size())) {
    const double delta = deltas[i];
    std::vector<std::string> row(6, "");
    row[0] = format_double(delta);
    row[1] = format_double(ls_expected_rel_error(delta));
    s_ls.points.emplace_back(delta, ls_expected_rel_error(delta));
    const auto m = static_cast<std::size_t>(
        std::llround(delta * static_cast<double>(n)));
    if (m >= 1 && m < n) {
      const HValue h = h_fun(lap, delta);
      row[2] = format_double(h.value);
      s_orc.points.emplace_back(delta, h.value);
      const std::size_t k = resolve_k(ec.k_rule, lap, delta, m);
      double oracle_sum = 0.0, l1_sum = 0.0;
      std::size_t oracle_n = 0, l1_n = 0, nonconv = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const auto records = run_single_trial(ec, lap, i, delta, m, k, t);
        for (const TrialRecord& r : records) {
          if (r.failed) continue;
          if (r.decoder == DecoderKind::oracle) {
            oracle_sum += r.rel_sq_error;
            ++oracle_n;
          } else if (r.decoder == DecoderKind::l1) {
            l1_sum += r.rel_sq_error;
            ++l1_n;
            if (!r.converged) ++nonconv;
          }
        }
      }
      if (oracle_n > 0) {
        row[3] = format_double(oracle_sum / static_cast<double>(oracle_n));
        s_orc_mc.points.emplace_back(delta, oracle_sum / static_cast<double>(oracle_n));
      }
      if (l1_n > 0) {
        row[4] = format_double(l1_sum / static_cast<double>(l1_n));
        s_l1.points.emplace_back(delta, l1_sum / static_cast<double>(l1_n));
      }
      row[5] = format_count(nonconv);
    }
    doc.rows.push_back(row);
  }

  if (svg_out) {
    SvgOptions opt;
    opt.title = "decoder performance for Laplace data";
    opt.xlabel = "delta = m/N";
    opt.ylabel = "relative squared error";
    // Reference distortion levels: 3 dB, 10 dB, 20 dB.
    opt.hlines = {{0.5, "3 dB"}, {0.1, "10 dB"}, {0.01, "20 dB"}};
    *svg_out = render_line_plot({s_ls, s_orc, s_orc_mc, s_l1}, opt);
  }
  return doc;
}

// ---------------------------------------------------------------- fig4 --

TableDoc run_fig4(const json& cfg, const std::vector<std::size_t>* filter,
                  std::string* svg_out) {
  const std::vector<double> grid = cfg.at("grid").get<std::vector<double>>();
  const Distribution lap = Distribution::laplace();
  TableDoc doc;
  doc.command = "fig4";
  doc.config = cfg;
  doc.columns = {"kappa", "G1_laplace", "step_bound"};
  SvgSeries g1, step;
  g1.label = "G_1 (Laplace)";
  step.label = "step bound";
  step.color = "#b23a1f";
  step.dashed = true;
  for (std::size_t i : effective_rows(filter, grid.size())) {
    const double kappa = grid[i];
    const double g = g_fun(lap, 1.0, kappa).value;
    const double bound = kappa <= kKappa0 ? 0.5 : 0.0;
    doc.rows.push_back(
        {format_double(kappa), format_double(g), format_double(bound)});
    g1.points.emplace_back(kappa, g);
    step.points.emplace_back(kappa, bound);
  }
  if (svg_out) {
    SvgOptions opt;
    opt.title = "instance-optimality triviality for Laplace data";
    opt.xlabel = "kappa = k/N";
    opt.ylabel = "relative l1 error";
    *svg_out = render_line_plot({g1, step}, opt);
  }
  return doc;
}

// ---------------------------------------------------------------- fig5 --

TableDoc run_fig5(const json& cfg, const std::vector<std::size_t>* filter,
                  std::string* svg_out) {
  const std::vector<double> grid = cfg.at("grid").get<std::vector<double>>();
  TableDoc doc;
  doc.command = "fig5";
  doc.config = cfg;
  doc.columns = {"tau", "delta0", "status"};
  SvgSeries curve;
  curve.label = "delta0(tau)";
  for (std::size_t i : effective_rows(filter, grid.size())) {
    const double tau = grid[i];
    std::string value = "nan";
    std::string status;
    try {
      const Delta0Result res =
          critical_undersampling(Distribution::generalized_gaussian(tau));
      status = to_string(res.marker);
      if (res.delta0) {
        value = format_double(*res.delta0);
        curve.points.emplace_back(tau, *res.delta0);
      }
    } catch (const std::exception& e) {
      // Per-point failures are recorded; the sweep continues.
      status = std::string("error: ") + e.what();
    }
    doc.rows.push_back({format_double(tau), value, status});
  }
  if (svg_out) {
    SvgOptions opt;
    opt.title = "critical undersampling of the generalized Gaussian";
    opt.xlabel = "tau";
    opt.ylabel = "delta0";
    *svg_out = render_line_plot({curve}, opt);
  }
  return doc;
}

}  // namespace

TableDoc run_command(const std::string& command, const json& config,
                     const std::vector<std::size_t>* row_filter,
                     std::string* svg_out, std::vector<json>* stream_records) {
  if (command == "gfun") return run_gfun(config, row_filter, svg_out);
  if (command == "hfun") return run_hfun(config, row_filter, svg_out);
  if (command == "delta0") return run_delta0(config, row_filter);
  if (command == "report") return run_report(config, row_filter, svg_out);
  if (command == "simulate")
    return run_simulate(config, row_filter, svg_out, stream_records);
  if (command == "iocheck") return run_iocheck(config, row_filter);
  if (command == "nspfuzz") return run_nspfuzz(config, row_filter);
  if (command == "imgstats") return run_imgstats(config, row_filter, svg_out);
  if (command == "fig2") return run_fig2(config, row_filter, svg_out);
  if (command == "fig4") return run_fig4(config, row_filter, svg_out);
  if (command == "fig5") return run_fig5(config, row_filter, svg_out);
  throw std::invalid_argument("unknown command in stored document: " + command);
}

std::string check_stored_doc(const std::string& path) {
  const StoredDoc stored = read_stored_doc(path);
  if (stored.rows.empty()) return "document has no data rows";
  std::vector<std::size_t> sample = {0, stored.rows.size() / 2,
                                     stored.rows.size() - 1};
  sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
  const TableDoc fresh = run_command(stored.command, stored.config, &sample);
  if (fresh.columns != stored.columns) {
    return "column set differs from a fresh run";
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& got = fresh.rows[i];
    const auto& want = stored.rows[sample[i]];
    if (got != want) {
      std::string msg = "row " + std::to_string(sample[i]) + " mismatch:";
      for (std::size_t c = 0; c < got.size() && c < want.size(); ++c) {
        if (got[c] != want[c]) {
          msg += " " + fresh.columns[c] + " stored=" + want[c] + " fresh=" + got[c];
        }
      }
      return msg;
    }
  }
  return {};
}

}  // namespace compdist_cli
