#include "lplab/dvoretzky.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "lplab/errors.hpp"
#include "lplab/gauss.hpp"

namespace lplab {

SubspaceBasis random_subspace(std::int64_t n, std::int64_t k, RngStream& rng) {
  if (!(k >= 1 && k <= n)) throw DomainError("random_subspace: requires 1 <= k <= n");
  Eigen::MatrixXd q(n, k);
  for (;;) {
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < n; ++i) q(i, j) = rng.gaussian();
    bool ok = true;
    for (Eigen::Index j = 0; j < k && ok; ++j) {
      const double before = q.col(j).norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index l = 0; l < j; ++l) q.col(j) -= q.col(l).dot(q.col(j)) * q.col(l);
      }
      const double after = q.col(j).norm();
      if (!(after > 1e-10 * before)) {
        ok = false;
        break;
      }
      q.col(j) /= after;
    }
    if (ok) return {std::move(q)};
  }
}

Eigen::MatrixXd sphere_net(std::int64_t k, double resolution) {
  if (!(resolution > 0 && resolution < 1)) throw DomainError("sphere_net: resolution must lie in (0, 1)");
  if (k == 1) return Eigen::MatrixXd::Ones(1, 1);
  if (k == 2) {
    // Adjacent angles pi/N apart leave every point within chord 2 sin(pi/4N).
    const auto count = static_cast<Eigen::Index>(std::ceil(std::numbers::pi / (4 * std::asin(resolution / 2))));
    Eigen::MatrixXd net(2, count);
    for (Eigen::Index j = 0; j < count; ++j) {
      const double t = std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
      net(0, j) = std::cos(t);
      net(1, j) = std::sin(t);
    }
    return net;
  }
  if (k > kMaxCertifiedDim) throw DomainError("sphere_net: dimension too large for an enumerable net");
  // Face cells of side h leave points within (h/2) sqrt(k-1) before the
  // (1-Lipschitz outside the ball) radial projection.
  const auto m = static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(k - 1)) / resolution));
  const double h = 2.0 / static_cast<double>(m);
  Eigen::Index per_face = 1;
  for (std::int64_t d = 0; d < k - 1; ++d) per_face *= m;
  Eigen::MatrixXd net(k, k * per_face);
  Eigen::Index col = 0;
  Eigen::VectorXd x(k);
  for (std::int64_t face = 0; face < k; ++face) {
    for (Eigen::Index cell = 0; cell < per_face; ++cell) {
      Eigen::Index rest = cell;
      for (std::int64_t d = 0; d < k; ++d) {
        if (d == face) {
          x(d) = 1;
          continue;
        }
        x(d) = -1 + h * (static_cast<double>(rest % m) + 0.5);
        rest /= m;
      }
      net.col(col++) = x.normalized();
    }
  }
  return net;
}

namespace {

struct Extremes {
  double sup = 0;
  double inf = std::numeric_limits<double>::infinity();
};

Extremes scan(const SubspaceBasis& basis, const Eigen::MatrixXd& dirs, double p) {
  Extremes e;
  Eigen::VectorXd v(basis.n());
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
    v.noalias() = basis.columns * dirs.col(j);
    const double r = lp_norm(v, p);
    e.sup = std::max(e.sup, r);
    e.inf = std::min(e.inf, r);
  }
  return e;
}

Eigen::MatrixXd random_directions(std::int64_t k, Eigen::Index count) {
  RngStream rng(0x5eedULL, static_cast<std::uint64_t>(k));
  Eigen::MatrixXd dirs(k, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) dirs(i, j) = rng.gaussian();
    dirs.col(j).normalize();
  }
  return dirs;
}

}  // namespace

DistortionResult distortion(const SubspaceBasis& basis, double p, double net_resolution, bool allow_uncertified) {
  if (!(p >= 1)) throw DomainError("distortion: p must be >= 1");
  if (!(net_resolution > 0 && net_resolution < 1)) throw DomainError("distortion: net_resolution must lie in (0, 1)");
  const std::int64_t k = basis.k();
  DistortionResult d;
  d.net_resolution = net_resolution;
  if (p == 2 || k == 1) {
    const Eigen::VectorXd v = basis.columns.col(0);
    d.sup_ratio = d.inf_ratio = p == 2 ? 1.0 : lp_norm(v, p);
    d.net_size = 1;
    return d;
  }
  if (k > kMaxCertifiedDim) {
    if (!allow_uncertified) throw DomainError("distortion: k > 4 needs the uncertified mode");
    const auto count = static_cast<Eigen::Index>(std::min(200000.0, std::ceil(std::pow(1 / net_resolution, 2.0))));
    const Extremes e = scan(basis, random_directions(k, count), p);
    d.sup_ratio = e.sup;
    d.inf_ratio = e.inf;
    d.distortion = e.sup / e.inf;
    d.certified = false;
    d.certified_rel_error = std::numeric_limits<double>::quiet_NaN();
    d.distortion_upper = std::numeric_limits<double>::infinity();
    d.net_size = count;
    return d;
  }
  const Eigen::MatrixXd net = sphere_net(k, net_resolution);
  const Extremes e = scan(basis, net, p);
  d.sup_ratio = e.sup;
  d.inf_ratio = e.inf;
  d.distortion = e.sup / e.inf;
  d.net_size = net.cols();
  const double sup_upper = e.sup / (1 - net_resolution);
  const double inf_lower = e.inf - net_resolution * sup_upper;
  d.distortion_upper = inf_lower > 0 ? sup_upper / inf_lower : std::numeric_limits<double>::infinity();
  d.certified_rel_error = d.distortion_upper / d.distortion - 1;
  return d;
}

TrialOutcome classify_trial(const DistortionResult& d, double epsilon) {
  if (d.certified && d.distortion_upper <= 1 + epsilon) return TrialOutcome::Success;
  if (d.distortion > 1 + epsilon) return TrialOutcome::Failure;
  return TrialOutcome::Ambiguous;
}

SphericityResult sphericity_experiment(std::int64_t n, std::int64_t k, double p, double epsilon, std::int64_t trials,
                                       double net_resolution, std::uint64_t seed, std::uint64_t first_stream) {
  if (trials < 1) throw DomainError("sphericity_experiment: trials must be >= 1");
  if (!(epsilon > 0)) throw DomainError("sphericity_experiment: epsilon must be > 0");
  std::vector<DistortionResult> results(static_cast<std::size_t>(trials));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::int64_t t = next++; t < trials; t = next++) {
      try {
        RngStream rng(seed, first_stream + static_cast<std::uint64_t>(t));
        const SubspaceBasis b = random_subspace(n, k, rng);
        results[static_cast<std::size_t>(t)] = distortion(b, p, net_resolution, k > kMaxCertifiedDim);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const std::int64_t workers =
      std::min<std::int64_t>(trials, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SphericityResult r;
  r.trials = trials;
  std::vector<double> ds;
  ds.reserve(results.size());
  for (const auto& d : results) {
    switch (classify_trial(d, epsilon)) {
      case TrialOutcome::Success:
        ++r.successes;
        break;
      case TrialOutcome::Failure:
        ++r.failures;
        break;
      case TrialOutcome::Ambiguous:
        ++r.ambiguous;
        break;
    }
    ds.push_back(d.distortion);
  }
  std::sort(ds.begin(), ds.end());
  const std::size_t mid = ds.size() / 2;
  r.median_distortion = ds.size() % 2 ? ds[mid] : 0.5 * (ds[mid - 1] + ds[mid]);
  r.success = wilson_interval(r.successes, trials);
  r.failure = wilson_interval(r.failures, trials);
  return r;
}

std::vector<PhaseRow> transition_sweep(std::int64_t n, std::int64_t k, std::span<const double> delta_grid,
                                       const EpsilonRule& rule, std::int64_t trials, double net_resolution,
                                       std::uint64_t seed) {
  if (n < 3) throw DomainError("transition_sweep: n must be >= 3");
  const double ln = std::log(static_cast<double>(n));
  std::vector<PhaseRow> rows;
  std::uint64_t stream = 0;
  auto run = [&](double delta, const char* side, double p, double eps) {
    const SphericityResult s = sphericity_experiment(n, k, p, eps, trials, net_resolution, seed, stream);
    stream += static_cast<std::uint64_t>(trials);
    PhaseRow row;
    row.delta = delta;
    row.side = side;
    row.p = p;
    row.epsilon = eps;
    row.trials = s.trials;
    row.successes = s.successes;
    row.failures = s.failures;
    row.ambiguous = s.ambiguous;
    row.success_wilson_lo = s.success.wilson_lo;
    row.success_wilson_hi = s.success.wilson_hi;
    row.failure_wilson_lo = s.failure.wilson_lo;
    row.failure_wilson_hi = s.failure.wilson_hi;
    row.median_distortion = s.median_distortion;
    row.in_window = delta == 0;
    rows.push_back(row);
  };
  for (const double delta : delta_grid) {
    if (!(delta >= 0 && delta < 1)) throw DomainError("transition_sweep: delta must lie in [0, 1)");
    if (delta == 0) {
      run(0, "critical", 2 * ln, rule.sub_epsilon);
    } else {
      run(delta, "sub", (2 - delta) * ln, rule.sub_epsilon);
      run(delta, "super", (2 + delta) * ln, rule.super_w / ln);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const PhaseRow& a, const PhaseRow& b) { return a.p < b.p; });
  return rows;
}

const std::vector<std::string>& phase_columns() {
  static const std::vector<std::string> cols = {
      "delta",     "side",     "p",         "epsilon",           "trials",           "successes",
      "failures",  "ambiguous", "success_wilson_lo", "success_wilson_hi", "failure_wilson_lo",
      "failure_wilson_hi", "median_distortion", "in_window"};
  return cols;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_phase_csv(std::ostream& out, const std::vector<PhaseRow>& rows) {
  const auto& cols = phase_columns();
  for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << cols[j];
  out << '\n';
  for (const auto& r : rows) {
    out << fmt(r.delta) << ',' << r.side << ',' << fmt(r.p) << ',' << fmt(r.epsilon) << ',' << r.trials << ','
        << r.successes << ',' << r.failures << ',' << r.ambiguous << ',' << fmt(r.success_wilson_lo) << ','
        << fmt(r.success_wilson_hi) << ',' << fmt(r.failure_wilson_lo) << ',' << fmt(r.failure_wilson_hi) << ','
        << fmt(r.median_distortion) << ',' << (r.in_window ? 1 : 0) << '\n';
  }
}

std::vector<PhaseRow> read_phase_csv(std::istream& in) {
  std::string line;
  std::vector<PhaseRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (header) {
      if (f != phase_columns()) throw DomainError("read_phase_csv: unexpected header");
      header = false;
      continue;
    }
    if (f.size() != phase_columns().size()) throw DomainError("read_phase_csv: wrong field count");
    PhaseRow r;
    r.delta = std::stod(f[0]);
    r.side = f[1];
    r.p = std::stod(f[2]);
    r.epsilon = std::stod(f[3]);
    r.trials = std::stoll(f[4]);
    r.successes = std::stoll(f[5]);
    r.failures = std::stoll(f[6]);
    r.ambiguous = std::stoll(f[7]);
    r.success_wilson_lo = std::stod(f[8]);
    r.success_wilson_hi = std::stod(f[9]);
    r.failure_wilson_lo = std::stod(f[10]);
    r.failure_wilson_hi = std::stod(f[11]);
    r.median_distortion = std::stod(f[12]);
    r.in_window = f[13] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace lplab
