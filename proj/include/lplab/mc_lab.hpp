#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "lplab/constants.hpp"
#include "lplab/errors.hpp"
#include "lplab/moments.hpp"
#include "lplab/rng.hpp"
#include "lplab/stats.hpp"

namespace lplab {

/// How a Monte Carlo run is split: `samples` draws spread over `streams`
/// independent RNG streams keyed by `seed`. Output depends only on these.
struct McLayout {
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  int streams = 16;
};

struct MCEstimate {
  double mean = 0;
  double variance = 0;
  double stderr_mean = 0;
  double stderr_variance = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  int streams = 0;

  static MCEstimate from(const RunningMoments<double>& acc, const McLayout& layout);
};

namespace detail {

inline void check_layout(const McLayout& layout) {
  if (layout.samples < 2) throw DomainError("Monte Carlo: samples must be >= 2");
  if (layout.streams < 1) throw DomainError("Monte Carlo: streams must be >= 1");
}

/// Runs `kernel(rng, outputs)` once per sample. Stream s owns RngStream(seed,
/// s), a contiguous share of the samples and private accumulators; results
/// are merged by a fixed tree over stream index. `make_kernel()` is called
/// once per stream to give each its own scratch state.
template <typename MakeKernel>
std::vector<RunningMoments<double>> run_streams(const McLayout& layout, std::size_t outputs,
                                                MakeKernel&& make_kernel) {
  check_layout(layout);
  const auto streams = static_cast<std::size_t>(layout.streams);
  std::vector<std::vector<RunningMoments<double>>> per_stream(streams,
                                                              std::vector<RunningMoments<double>>(outputs));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<double> values(outputs);
    for (std::size_t s = next++; s < streams; s = next++) {
      const std::int64_t base = layout.samples / layout.streams;
      const std::int64_t count = base + (static_cast<std::int64_t>(s) < layout.samples % layout.streams ? 1 : 0);
      RngStream rng(layout.seed, s);
      auto kernel = make_kernel();
      auto& acc = per_stream[s];
      for (std::int64_t k = 0; k < count; ++k) {
        kernel(rng, std::span<double>(values));
        for (std::size_t o = 0; o < outputs; ++o) acc[o].push(values[o]);
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, streams);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  std::vector<RunningMoments<double>> merged(outputs);
  std::vector<RunningMoments<double>> column(streams);
  for (std::size_t o = 0; o < outputs; ++o) {
    for (std::size_t s = 0; s < streams; ++s) column[s] = per_stream[s][o];
    merged[o] = merge_tree(std::span<const RunningMoments<double>>(column));
  }
  return merged;
}

}  // namespace detail

/// E and Var of ||G||_p for a standard Gaussian n-vector.
MCEstimate mc_norm_stats(std::int64_t n, double p, const McLayout& layout);
/// Same, for several p evaluated on shared samples.
std::vector<MCEstimate> mc_norm_stats_grid(std::int64_t n, std::span<const double> ps, const McLayout& layout);

struct TruncatedStats {
  MCEstimate norm;       ///< ||G||_p
  MCEstimate truncated;  ///< f_T(G) = (sum min(T, |g_i|)^p)^{1/p}
  MCEstimate gap_sq;     ///< (||G||_p - f_T(G))^2
};

/// Statistics of the truncated functional on shared samples. T = inf makes
/// f_T identical to the norm.
TruncatedStats mc_truncated_stats(std::int64_t n, double p, double T, const McLayout& layout);

struct NegativeMomentEstimate {
  /// Estimate of E h / exp(log_scale), h = (sum min(|g_i|, T)^q)^{-L}.
  MCEstimate scaled;
  double log_scale = 0;

  double log_mean() const;
};

/// E (sum_i min(|g_i|, T)^q)^{-L}; requires q L <= K log n and T >= xi or
/// T = inf. Per-sample values are formed in log-domain and rescaled by
/// (n E min(|g|, T)^q)^{-L}.
NegativeMomentEstimate mc_negative_moment(std::int64_t n, double q, double L, double T, const McLayout& layout,
                                          const Constants& constants = Constants::defaults());

/// (n / 2p^2) E[(|g_1|^p - |g_1'|^p)^2 (||G||_p^p + ||G'||_p^p)^{2/p-2}] for
/// independent G, G'. A lower bound for Var ||G||_p.
MCEstimate mc_lower_identity(std::int64_t n, double p, const McLayout& layout);

struct SmallBallEstimate {
  ProportionEstimate proportion;
  double log_threshold = 0;  ///< log(tau sum_i xi_{1-i/n}^q)
};

/// Frequency of {sum_i min(|g_i|, T)^q <= tau sum_i xi_{1-i/n}^q}.
SmallBallEstimate mc_small_ball(std::int64_t n, double q, double tau, double T, const McLayout& layout);

}  // namespace lplab
