#include "lplab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lplab/constants.hpp"
#include "lplab/dvoretzky.hpp"
#include "lplab/errors.hpp"
#include "lplab/gauss.hpp"
#include "lplab/mc_lab.hpp"
#include "lplab/order_stats.hpp"
#include "lplab/output.hpp"
#include "lplab/var_theory.hpp"

#ifndef LPLAB_VERSION_STRING
#define LPLAB_VERSION_STRING "0.0.0"
#endif

namespace lplab {

const char* version() { return LPLAB_VERSION_STRING; }

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  int streams = 16;
  std::string format = "csv";
  std::string output = "-";
  std::string constants_path;
};

void add_output_options(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("-o,--output", c.output, "Output file, - for stdout");
  sub->add_option("--constants", c.constants_path, "Constants file (default: $LPLAB_CONSTANTS, else built-in)");
}

void add_rng_options(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed");
  sub->add_option("--samples", c.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  sub->add_option("--streams", c.streams, "Independent RNG streams")->check(CLI::PositiveNumber);
}

double parse_real(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

/// "auto", "lo:hi:count" (evenly spaced) or a comma list; "inf" allowed.
std::vector<double> parse_p_grid(const std::vector<std::string>& spec, std::int64_t n, const Constants& constants) {
  std::vector<double> grid;
  for (const auto& item : spec) {
    if (item == "auto") {
      const auto a = auto_p_grid(n, constants);
      grid.insert(grid.end(), a.begin(), a.end());
    } else if (std::count(item.begin(), item.end(), ':') == 2) {
      const auto c1 = item.find(':');
      const auto c2 = item.find(':', c1 + 1);
      const double lo = parse_real(item.substr(0, c1));
      const double hi = parse_real(item.substr(c1 + 1, c2 - c1 - 1));
      const auto count = static_cast<int>(parse_real(item.substr(c2 + 1)));
      if (count < 1 || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("bad p range '" + item + "'");
      for (int j = 0; j < count; ++j) grid.push_back(count == 1 ? lo : lo + (hi - lo) * j / (count - 1));
    } else {
      grid.push_back(parse_real(item));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double log10_of(const LogValue& v) { return v.log10(); }

int emit(const Common& c, const std::string& command, const Constants& constants, const Table& table,
         std::ostream& out) {
  RunConfig cfg;
  cfg.command = command;
  cfg.seed = c.seed;
  cfg.samples = c.samples;
  cfg.streams = c.streams;
  for (const auto& [k, v] : constants.values()) cfg.constants[k] = v;
  cfg.output_format = c.format;
  cfg.output_path = c.output;
  std::ofstream file;
  std::ostream* dest = &out;
  if (c.output != "-") {
    file.open(c.output);
    if (!file) throw DomainError("cannot open output file " + c.output);
    dest = &file;
  }
  if (c.format == "json") {
    write_json(*dest, cfg, table);
  } else {
    write_csv(*dest, cfg, table);
  }
  return kExitOk;
}

// quantile ------------------------------------------------------------------

struct QuantileArgs {
  std::vector<double> alpha;
  std::int64_t n = 0;
  std::int64_t i = 0;
  bool approx = false;
};

Table cmd_quantile(const QuantileArgs& a) {
  Table t{{"alpha", "xi", "xi_approx", "gap"}, {}};
  if (!a.alpha.empty()) {
    for (double alpha : a.alpha) t.add({alpha, quantile(alpha).value});
    return t;
  }
  if (a.n < 1 || a.i < 1 || a.i > a.n) throw DomainError("quantile: need --alpha, or --n and --i with 1 <= i <= n");
  const double tail = static_cast<double>(a.i) / static_cast<double>(a.n);
  const double xi = quantile_from_tail(tail);
  std::vector<Cell> row = {1 - tail, xi};
  if (a.approx) {
    const double approx = quantile_approx(a.n, a.i);
    row.push_back(approx);
    row.push_back(approx - xi);
  }
  t.add(std::move(row));
  return t;
}

// predict -------------------------------------------------------------------

Table cmd_predict(const std::vector<std::int64_t>& ns, const std::vector<std::string>& p_spec, const Constants& k) {
  Table t{{"n", "p", "regime", "predicted", "lower_env", "upper_env", "M", "p1", "p2", "log10_predicted",
           "log10_lower_env", "log10_upper_env"},
          {}};
  for (const std::int64_t n : ns) {
    for (const double p : parse_p_grid(p_spec, n, k)) {
      const Prediction pr = predict_variance(n, p, k);
      const LogValue lo = lower_envelope(n, p, k);
      const LogValue up = upper_envelope(n, p, k);
      t.add({n, p, std::string(to_string(pr.point.regime)), pr.variance.value(), lo.value(), up.value(),
             truncation_level_M(n, p, k).value(), pr.point.p1, pr.point.p2, log10_of(pr.variance), log10_of(lo),
             log10_of(up)});
    }
  }
  return t;
}

// mc ------------------------------------------------------------------------

struct McArgs {
  std::int64_t n = 0;
  std::vector<std::string> p = {"2"};
  std::string truncate;
  std::vector<double> negative;
  bool lower_identity = false;
};

double resolve_level(const std::string& spec, std::int64_t n, double p, const Constants& k) {
  if (spec == "xi") return quantile_from_tail(1.0 / static_cast<double>(n));
  if (spec == "M") return truncation_level_M(n, p, k).value();
  return parse_real(spec);
}

Table cmd_mc(const McArgs& a, const Common& c, const Constants& k) {
  if (a.n < 1) throw DomainError("mc: --n must be >= 1");
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(c.streams),
                                                    std::max(1u, std::thread::hardware_concurrency()));
  const double bytes = static_cast<double>(a.n) * 2 * sizeof(double) * static_cast<double>(workers);
  if (bytes > k.get("mc_memory_guard_bytes")) throw DomainError("mc: workspace exceeds mc_memory_guard_bytes");

  const McLayout layout{c.samples, c.seed, c.streams};
  const bool have_theory = static_cast<double>(a.n) >= k.get("n_min");
  Table t{{"n", "p", "quantity", "T", "mean", "variance", "stderr_mean", "stderr_variance", "samples", "seed",
           "streams", "regime", "reference", "ratio", "log10_mean", "log10_reference", "log10_ratio"},
          {}};
  auto add = [&](double p, const std::string& quantity, Cell T, const MCEstimate& e, double checked,
                 std::optional<LogValue> reference, std::optional<Regime> regime, double log10_mean) {
    std::vector<Cell> row = {a.n, p, quantity, T, e.mean, e.variance, e.stderr_mean, e.stderr_variance,
                             e.samples, static_cast<std::int64_t>(e.seed), static_cast<std::int64_t>(e.streams)};
    row.push_back(regime ? Cell{std::string(to_string(*regime))} : Cell{Missing{}});
    if (reference) {
      const double log10_ratio = std::log10(checked) - reference->log10();
      row.push_back(reference->value());
      row.push_back(std::pow(10.0, log10_ratio));
      row.push_back(log10_mean);
      row.push_back(reference->log10());
      row.push_back(log10_ratio);
    } else {
      row.insert(row.end(), {Missing{}, Missing{}, log10_mean, Missing{}, Missing{}});
    }
    t.add(std::move(row));
  };
  auto prediction = [&](double p) -> std::pair<std::optional<LogValue>, std::optional<Regime>> {
    if (!have_theory) return {std::nullopt, std::nullopt};
    const Prediction pr = predict_variance(a.n, p, k);
    return {pr.variance, pr.point.regime};
  };

  if (!a.negative.empty()) {
    const double q = a.negative[0];
    const double L = a.negative[1];
    const double T = a.truncate.empty() ? kInf : resolve_level(a.truncate, a.n, q, k);
    const NegativeMomentEstimate e = mc_negative_moment(a.n, q, L, T, layout, k);
    MCEstimate shown = e.scaled;
    const double s = std::exp(e.log_scale);
    shown.mean *= s;
    shown.stderr_mean *= s;
    shown.variance *= s * s;
    shown.stderr_variance *= s * s;
    std::optional<LogValue> ref;
    if (L > 0 && q >= 1) ref = negative_moment_bound(a.n, q, L, k).direct;
    add(q, "negative_moment", T, shown, std::exp(e.log_mean()), ref, std::nullopt, e.log_mean() / std::log(10.0));
    return t;
  }

  const std::vector<double> ps = parse_p_grid(a.p, a.n, k);
  if (!a.truncate.empty()) {
    for (const double p : ps) {
      const double T = resolve_level(a.truncate, a.n, p, k);
      const TruncatedStats s = mc_truncated_stats(a.n, p, T, layout);
      const auto [pred, regime] = prediction(p);
      add(p, "norm", T, s.norm, s.norm.variance, pred, regime, std::log10(s.norm.mean));
      add(p, "truncated", T, s.truncated, s.truncated.variance, pred, regime, std::log10(s.truncated.mean));
      std::optional<LogValue> tail;
      if (have_theory && T >= quantile_from_tail(1.0 / static_cast<double>(a.n))) tail = tail_term(a.n, T, k);
      add(p, "gap_sq", T, s.gap_sq, s.gap_sq.mean, tail, regime, std::log10(s.gap_sq.mean));
    }
    return t;
  }
  if (a.lower_identity) {
    for (const double p : ps) {
      const MCEstimate e = mc_lower_identity(a.n, p, layout);
      const auto [pred, regime] = prediction(p);
      add(p, "lower_identity", Missing{}, e, e.mean, pred, regime, std::log10(e.mean));
    }
    return t;
  }
  const std::vector<MCEstimate> es = mc_norm_stats_grid(a.n, ps, layout);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const auto [pred, regime] = prediction(ps[j]);
    add(ps[j], "norm", Missing{}, es[j], es[j].variance, pred, regime, std::log10(es[j].mean));
  }
  return t;
}

// orderstats ----------------------------------------------------------------

struct OrderArgs {
  std::vector<std::int64_t> n;
  std::vector<double> beta;
  std::vector<std::int64_t> i;
};

Table cmd_orderstats(const OrderArgs& a) {
  Table t{{"n", "beta", "i", "exact", "chernoff", "log10_exact", "log10_chernoff", "dominated"}, {}};
  for (const auto n : a.n) {
    for (const double beta : a.beta) {
      for (const auto i : a.i) {
        if (i < 1 || i > n) throw DomainError("orderstats: requires 1 <= i <= n");
        const double le = log_orderstat_cdf_exact(n, i, beta);
        std::vector<Cell> row = {n, beta, i, std::exp(le)};
        if (static_cast<double>(i) <= beta * static_cast<double>(n)) {
          const double lc = log_chernoff_bound(n, i, beta);
          row.insert(row.end(), {std::exp(lc), le / std::log(10.0), lc / std::log(10.0), le <= lc});
        } else {
          row.insert(row.end(), {Missing{}, le / std::log(10.0), Missing{}, Missing{}});
        }
        t.add(std::move(row));
      }
    }
  }
  return t;
}

// checks --------------------------------------------------------------------

Table cmd_checks(const std::vector<std::int64_t>& ns, const std::vector<std::string>& p_spec, const Constants& k,
                 std::size_t& failures) {
  Table t{{"check", "n", "p", "value", "lo", "hi", "pass", "detail"}, {}};
  failures = 0;
  for (const auto n : ns) {
    const std::vector<double> ps = parse_p_grid(p_spec, n, k);
    const std::int64_t one[] = {n};
    const LemmaReport r = lemma_checks(one, ps, k);
    failures += r.failures();
    for (const auto& c : r.rows) t.add({c.name, c.n, c.p, c.value, c.lo, c.hi, c.pass, c.detail});
  }
  return t;
}

// dvoretzky -----------------------------------------------------------------

struct DvoretzkyArgs {
  std::int64_t n = 10000;
  std::int64_t k = 2;
  std::vector<double> delta = {0.5};
  std::int64_t trials = 400;
  double net_resolution = 0.005;
  EpsilonRule rule;
};

Table cmd_dvoretzky(const DvoretzkyArgs& a, const Common& c) {
  const std::vector<PhaseRow> rows =
      transition_sweep(a.n, a.k, a.delta, a.rule, a.trials, a.net_resolution, c.seed);
  Table t;
  t.columns = {"n", "k"};
  for (const auto& col : phase_columns()) t.columns.push_back(col);
  t.columns.push_back("net_resolution");
  for (const auto& r : rows) {
    t.add({a.n, a.k, r.delta, r.side, r.p, r.epsilon, r.trials, r.successes, r.failures, r.ambiguous,
           r.success_wilson_lo, r.success_wilson_hi, r.failure_wilson_lo, r.failure_wilson_hi, r.median_distortion,
           r.in_window, a.net_resolution});
  }
  return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance of l_p norms of Gaussian vectors: theory, Monte Carlo and Dvoretzky sections", "lplab"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Common common;

  QuantileArgs qa;
  auto* quantile_cmd = app.add_subcommand("quantile", "Quantiles xi_alpha of |g|");
  quantile_cmd->add_option("--alpha", qa.alpha, "Levels alpha in [0, 1)")->delimiter(',');
  quantile_cmd->add_option("--n", qa.n, "With --i: alpha = 1 - i/n");
  quantile_cmd->add_option("--i", qa.i, "Order index");
  quantile_cmd->add_flag("--approx", qa.approx, "Add the asymptotic approximation");
  add_output_options(quantile_cmd, common);

  std::vector<std::int64_t> predict_n;
  std::vector<std::string> predict_p = {"auto"};
  auto* predict_cmd = app.add_subcommand("predict", "Predicted variance and envelopes");
  predict_cmd->add_option("--n", predict_n, "Dimensions")->required()->delimiter(',');
  predict_cmd->add_option("--p,--p-grid", predict_p, "auto, lo:hi:count, or a list (inf allowed)")->delimiter(',');
  add_output_options(predict_cmd, common);

  McArgs ma;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimates");
  mc_cmd->add_option("--n", ma.n, "Dimension")->required();
  mc_cmd->add_option("--p,--p-grid", ma.p, "auto, lo:hi:count, or a list (inf allowed)")->delimiter(',');
  mc_cmd->add_option("--truncate", ma.truncate, "Coordinate cap T: a number, xi, M or inf");
  mc_cmd->add_option("--negative", ma.negative, "Negative moment E(sum min(|g_i|,T)^q)^-L, args: q L")
      ->expected(2);
  mc_cmd->add_flag("--lower-identity", ma.lower_identity, "Estimate the variance lower-bound identity");
  add_rng_options(mc_cmd, common);
  add_output_options(mc_cmd, common);

  OrderArgs oa;
  auto* order_cmd = app.add_subcommand("orderstats", "Exact order statistic CDF vs the Chernoff bound");
  order_cmd->add_option("--n", oa.n, "Dimensions")->required()->delimiter(',');
  order_cmd->add_option("--beta", oa.beta, "Tail levels")->required()->delimiter(',');
  order_cmd->add_option("--i", oa.i, "Order indices")->required()->delimiter(',');
  add_output_options(order_cmd, common);

  std::vector<std::int64_t> checks_n = {1000, 10000};
  std::vector<std::string> checks_p = {"auto"};
  auto* checks_cmd = app.add_subcommand("checks", "Pointwise truncation-level checks; exit 1 on failure");
  checks_cmd->add_option("--n", checks_n, "Dimensions")->delimiter(',');
  checks_cmd->add_option("--p,--p-grid", checks_p, "auto, lo:hi:count, or a list")->delimiter(',');
  add_output_options(checks_cmd, common);

  DvoretzkyArgs da;
  auto* dv_cmd = app.add_subcommand("dvoretzky", "Sphericity of random sections across p = (2 +- delta) log n");
  dv_cmd->add_option("--n", da.n, "Dimension");
  dv_cmd->add_option("--k", da.k, "Subspace dimension");
  dv_cmd->add_option("--delta", da.delta, "Offsets delta in [0, 1)")->delimiter(',');
  dv_cmd->add_option("--trials", da.trials, "Trials per row")->check(CLI::PositiveNumber);
  dv_cmd->add_option("--net-resolution", da.net_resolution, "Net resolution in (0, 1)");
  dv_cmd->add_option("--sub-epsilon", da.rule.sub_epsilon, "epsilon for p = (2 - delta) log n");
  dv_cmd->add_option("--super-w", da.rule.super_w, "w in epsilon = w / log n for p = (2 + delta) log n");
  dv_cmd->add_option("--seed", common.seed, "RNG seed");
  add_output_options(dv_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Constants constants = Constants::resolve(common.constants_path);
    if (quantile_cmd->parsed()) {
      if (qa.alpha.empty() && (qa.n == 0 || qa.i == 0)) {
        err << "quantile: give --alpha, or --n and --i\n";
        return kExitUsage;
      }
      return emit(common, "quantile", constants, cmd_quantile(qa), out);
    }
    if (predict_cmd->parsed()) return emit(common, "predict", constants, cmd_predict(predict_n, predict_p, constants), out);
    if (mc_cmd->parsed()) return emit(common, "mc", constants, cmd_mc(ma, common, constants), out);
    if (order_cmd->parsed()) return emit(common, "orderstats", constants, cmd_orderstats(oa), out);
    if (dv_cmd->parsed()) return emit(common, "dvoretzky", constants, cmd_dvoretzky(da, common), out);
    if (checks_cmd->parsed()) {
      std::size_t failures = 0;
      const Table t = cmd_checks(checks_n, checks_p, constants, failures);
      emit(common, "checks", constants, t, out);
      if (failures == 0) return kExitOk;
      for (const auto& row : t.rows) {
        if (std::get<bool>(row[6])) continue;
        err << "check failed: " << std::get<std::string>(row[0]) << " n=" << std::get<std::int64_t>(row[1])
            << " p=" << format_real(std::get<double>(row[2])) << " value=" << format_real(std::get<double>(row[3]))
            << " range=[" << format_real(std::get<double>(row[4])) << ", "
            << format_real(std::get<double>(row[5])) << "]\n";
      }
      return kExitCheckFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lplab
