#ifndef COMPDIST_EXPERIMENT_HPP
#define COMPDIST_EXPERIMENT_HPP

// Seeded Monte Carlo harness: draw x ~ p and Phi, run the requested
// decoders, and stream one TrialRecord per (decoder, trial). Child seeds
// are hashed from (master_seed, global trial index, role) so trials are
// independent, order-insensitive, and individually recomputable.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compdist/decoders.hpp"
#include "compdist/distribution.hpp"
#include "compdist/encoder.hpp"
#include "compdist/metrics.hpp"
#include "compdist/parallel.hpp"

namespace compdist {

enum class DecoderKind { trivial, ls, oracle, l1 };

inline const char* to_string(DecoderKind d) {
  switch (d) {
    case DecoderKind::trivial:
      return "trivial";
    case DecoderKind::ls:
      return "ls";
    case DecoderKind::oracle:
      return "oracle";
    case DecoderKind::l1:
      return "l1";
  }
  return "?";
}

inline DecoderKind decoder_from_string(const std::string& s) {
  if (s == "trivial") return DecoderKind::trivial;
  if (s == "ls") return DecoderKind::ls;
  if (s == "oracle") return DecoderKind::oracle;
  if (s == "l1") return DecoderKind::l1;
  throw std::invalid_argument("unknown decoder: " + s);
}

// How the oracle support size k is chosen at a given delta: a fixed
// fraction of m, the minimizer of the predicted error G_2(rho delta)/(1-rho),
// or an explicit count.
struct KRule {
  enum class Kind { fixed_rho, best_rho, explicit_k };
  Kind kind = Kind::fixed_rho;
  double rho = 0.25;
  std::size_t k = 0;

  std::string to_string() const {
    switch (kind) {
      case Kind::fixed_rho: {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "fixed:%.12g", rho);
        return buf;
      }
      case Kind::best_rho:
        return "best";
      case Kind::explicit_k:
        return "k:" + std::to_string(k);
    }
    return "?";
  }

  static KRule parse(const std::string& s) {
    KRule rule;
    if (s == "best") {
      rule.kind = Kind::best_rho;
      return rule;
    }
    if (s.rfind("fixed:", 0) == 0) {
      rule.kind = Kind::fixed_rho;
      rule.rho = std::stod(s.substr(6));
      if (!(rule.rho > 0.0) || rule.rho >= 1.0) {
        throw std::invalid_argument("k rule: fixed rho must lie in (0,1)");
      }
      return rule;
    }
    if (s.rfind("k:", 0) == 0) {
      rule.kind = Kind::explicit_k;
      rule.k = static_cast<std::size_t>(std::stoul(s.substr(2)));
      return rule;
    }
    throw std::invalid_argument("bad k rule: " + s);
  }
};

struct ExperimentConfig {
  std::string dist = "laplace";
  std::size_t N = 256;
  std::vector<double> deltas;
  std::vector<DecoderKind> decoders;
  KRule k_rule;
  std::size_t trials = 500;
  std::uint64_t master_seed = 12345;
  L1Options l1;
};

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  std::vector<std::string> decs;
  for (DecoderKind d : c.decoders) decs.emplace_back(to_string(d));
  j = nlohmann::json{{"dist", c.dist},
                     {"N", c.N},
                     {"deltas", c.deltas},
                     {"decoders", decs},
                     {"k_rule", c.k_rule.to_string()},
                     {"trials", c.trials},
                     {"master_seed", c.master_seed},
                     {"l1_tol", c.l1.tol},
                     {"l1_max_iters", c.l1.max_iters}};
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  c.dist = j.at("dist").get<std::string>();
  c.N = j.at("N").get<std::size_t>();
  c.deltas = j.at("deltas").get<std::vector<double>>();
  c.decoders.clear();
  for (const auto& s : j.at("decoders")) {
    c.decoders.push_back(decoder_from_string(s.get<std::string>()));
  }
  c.k_rule = KRule::parse(j.at("k_rule").get<std::string>());
  c.trials = j.at("trials").get<std::size_t>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.l1.tol = j.at("l1_tol").get<double>();
  c.l1.max_iters = j.at("l1_max_iters").get<int>();
}

struct TrialRecord {
  DecoderKind decoder = DecoderKind::trivial;
  double delta = 0.0;
  double rho = 0.0;  // k/m actually used (0 when no support is involved)
  std::optional<std::size_t> k;       // oracle only
  std::size_t trial = 0;              // index within the delta point
  double rel_sq_error = 0.0;          // ||xhat - x||^2 / ||x||^2
  std::optional<int> iters;           // l1 only
  std::optional<double> residual;     // l1 only
  bool converged = true;
  bool failed = false;
  std::string error;
  std::uint64_t master_seed = 0;
  std::size_t trial_index = 0;  // global index: delta_index * trials + trial
};

inline std::size_t resolve_k(const KRule& rule, const Distribution& dist,
                             double delta, std::size_t m) {
  double rho = rule.rho;
  switch (rule.kind) {
    case KRule::Kind::explicit_k:
      return std::min<std::size_t>(rule.k, m > 2 ? m - 2 : 0);
    case KRule::Kind::best_rho: {
      const HValue h = h_fun(dist, delta);
      // With infinite variance every rho predicts vanishing error; fall
      // back to the rho = delta probe.
      rho = h.degenerate ? delta : h.rho_star;
      break;
    }
    case KRule::Kind::fixed_rho:
      break;
  }
  const auto k = static_cast<std::size_t>(
      std::llround(rho * static_cast<double>(m)));
  return std::min<std::size_t>(k, m > 2 ? m - 2 : 0);
}

inline std::vector<TrialRecord> run_single_trial(const ExperimentConfig& cfg,
                                                 const Distribution& dist,
                                                 std::size_t delta_index,
                                                 double delta, std::size_t m,
                                                 std::size_t k, std::size_t t);

// Runs every (delta, trial) cell and hands records to `sink` in a fixed
// order (delta-major, then trial, then decoder). Trials within one delta
// point execute in parallel; emission is single-threaded. Decoder-level
// failures are recorded and never abort the sweep.
inline void run_experiment(const ExperimentConfig& cfg,
                           const std::function<void(const TrialRecord&)>& sink) {
  if (cfg.deltas.empty()) throw std::invalid_argument("run_experiment: empty delta grid");
  if (cfg.decoders.empty()) throw std::invalid_argument("run_experiment: no decoders");
  if (cfg.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  const Distribution dist = Distribution::parse(cfg.dist);

  for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
    const double delta = cfg.deltas[di];
    const auto m = static_cast<std::size_t>(
        std::llround(delta * static_cast<double>(cfg.N)));
    if (m < 1 || m >= cfg.N) {
      throw std::invalid_argument("run_experiment: delta " + std::to_string(delta) +
                                  " gives m outside [1, N)");
    }
    std::size_t k = 0;
    bool needs_oracle = false;
    for (DecoderKind d : cfg.decoders) needs_oracle |= d == DecoderKind::oracle;
    if (needs_oracle) k = resolve_k(cfg.k_rule, dist, delta, m);

    std::vector<std::vector<TrialRecord>> batch(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t t) {
      batch[t] = run_single_trial(cfg, dist, di, delta, m, k, t);
    });
    for (const auto& records : batch) {
      for (const TrialRecord& rec : records) sink(rec);
    }
  }
}

inline std::vector<TrialRecord> run_single_trial(const ExperimentConfig& cfg,
                                                 const Distribution& dist,
                                                 std::size_t delta_index,
                                                 double delta, std::size_t m,
                                                 std::size_t k, std::size_t t) {
  const std::size_t global = delta_index * cfg.trials + t;
  std::vector<TrialRecord> records;
  records.reserve(cfg.decoders.size());

  TrialRecord base;
  base.delta = delta;
  base.trial = t;
  base.trial_index = global;
  base.master_seed = cfg.master_seed;

  Eigen::VectorXd x(static_cast<Eigen::Index>(cfg.N));
  {
    const std::vector<double> draws =
        dist.sample(cfg.N, derive_seed(cfg.master_seed, global, seed_role::signal));
    for (std::size_t i = 0; i < cfg.N; ++i) x[static_cast<Eigen::Index>(i)] = draws[i];
  }
  const double xnorm2 = x.squaredNorm();
  const EncoderInstance enc = gaussian_encoder(
      m, cfg.N, derive_seed(cfg.master_seed, global, seed_role::encoder));
  const Eigen::VectorXd y = enc.entries * x;

  for (DecoderKind d : cfg.decoders) {
    TrialRecord rec = base;
    rec.decoder = d;
    if (xnorm2 == 0.0) {
      // Probability-zero draw; relative error is undefined.
      rec.failed = true;
      rec.error = "zero signal";
      rec.rel_sq_error = std::numeric_limits<double>::quiet_NaN();
      records.push_back(rec);
      continue;
    }
    try {
      Eigen::VectorXd xhat;
      switch (d) {
        case DecoderKind::trivial:
          xhat = decode_trivial(x.size());
          break;
        case DecoderKind::ls:
          xhat = decode_ls(enc, y);
          break;
        case DecoderKind::oracle: {
          const std::vector<Eigen::Index> support = top_k_support(x, k);
          xhat = decode_oracle(enc, y, support);
          rec.k = k;
          rec.rho = static_cast<double>(k) / static_cast<double>(m);
          break;
        }
        case DecoderKind::l1: {
          L1Diagnostics diag;
          xhat = decode_l1(enc, y, cfg.l1, &diag);
          rec.iters = diag.iterations;
          rec.residual = diag.residual;
          rec.converged = diag.converged;
          break;
        }
      }
      rec.rel_sq_error = (xhat - x).squaredNorm() / xnorm2;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
      rec.rel_sq_error = std::numeric_limits<double>::quiet_NaN();
    }
    records.push_back(rec);
  }
  return records;
}

}  // namespace compdist

#endif
