#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lplab/rng.hpp"
#include "lplab/stats.hpp"

namespace lplab {

/// k orthonormal columns spanning a subspace of R^n.
struct SubspaceBasis {
  Eigen::MatrixXd columns;

  Eigen::Index n() const { return columns.rows(); }
  Eigen::Index k() const { return columns.cols(); }
};

/// Uniformly distributed k-dimensional subspace: k Gaussian vectors
/// orthonormalized by modified Gram-Schmidt with one reorthogonalization pass.
SubspaceBasis random_subspace(std::int64_t n, std::int64_t k, RngStream& rng);

/// Largest k with an enumerable certified net.
inline constexpr std::int64_t kMaxCertifiedDim = 4;

/// Unit vectors of R^k such that every point of the sphere is within
/// `resolution` (Euclidean) of a net point or its antipode.
/// k = 1: {1}; k = 2: uniform angles on [0, pi); k = 3, 4: centres of a grid
/// on the faces x_j = 1 of the cube, projected radially.
Eigen::MatrixXd sphere_net(std::int64_t k, double resolution);

struct DistortionResult {
  double sup_ratio = 1;  ///< max over the net of ||Bx||_p (||Bx||_2 = 1)
  double inf_ratio = 1;  ///< min over the net
  double distortion = 1;  ///< sup_ratio / inf_ratio, a lower bound on the true value
  double net_resolution = 0;
  /// distortion_upper / distortion - 1; NaN when uncertified.
  double certified_rel_error = 0;
  /// Certified upper bound on the true distortion; inf if the net is too coarse.
  double distortion_upper = 1;
  bool certified = true;
  std::int64_t net_size = 0;
};

/// sup/inf of ||Bx||_p over the unit sphere of R^k. With rho the net
/// resolution, S = sup <= sup_net / (1 - rho) and inf >= inf_net - rho S.
/// k > 4 requires `allow_uncertified` and uses random directions instead.
DistortionResult distortion(const SubspaceBasis& basis, double p, double net_resolution,
                            bool allow_uncertified = false);

enum class TrialOutcome { Success, Failure, Ambiguous };

/// Success when distortion_upper <= 1 + eps, failure when distortion > 1 + eps.
TrialOutcome classify_trial(const DistortionResult& d, double epsilon);

struct SphericityResult {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  std::int64_t failures = 0;
  std::int64_t ambiguous = 0;
  ProportionEstimate success;  ///< certified successes / trials
  ProportionEstimate failure;  ///< certified failures / trials
  double median_distortion = 0;
};

/// Trial t draws its subspace from RngStream(seed, first_stream + t).
SphericityResult sphericity_experiment(std::int64_t n, std::int64_t k, double p, double epsilon, std::int64_t trials,
                                       double net_resolution, std::uint64_t seed, std::uint64_t first_stream = 0);

/// Sub-critical side uses a fixed epsilon; super-critical side uses w / log n.
struct EpsilonRule {
  double sub_epsilon = 0.1;
  double super_w = 0.5;
};

struct PhaseRow {
  double delta = 0;
  std::string side;  ///< "sub", "super" or "critical"
  double p = 0;
  double epsilon = 0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  std::int64_t failures = 0;
  std::int64_t ambiguous = 0;
  double success_wilson_lo = 0;
  double success_wilson_hi = 0;
  double failure_wilson_lo = 0;
  double failure_wilson_hi = 0;
  double median_distortion = 0;
  bool in_window = false;  ///< delta = 0: inside the transition window, no claim

  friend bool operator==(const PhaseRow&, const PhaseRow&) = default;
};

/// Rows for p = (2 - delta) log n and (2 + delta) log n per delta, sorted by p.
std::vector<PhaseRow> transition_sweep(std::int64_t n, std::int64_t k, std::span<const double> delta_grid,
                                       const EpsilonRule& rule, std::int64_t trials, double net_resolution,
                                       std::uint64_t seed);

const std::vector<std::string>& phase_columns();
void write_phase_csv(std::ostream& out, const std::vector<PhaseRow>& rows);
std::vector<PhaseRow> read_phase_csv(std::istream& in);

}  // namespace lplab
