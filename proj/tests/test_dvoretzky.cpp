#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "lplab/dvoretzky.hpp"
#include "lplab/gauss.hpp"

using namespace lplab;

TEST_CASE("random subspace is orthonormal") {
  RngStream rng(1, 0);
  for (std::int64_t k : {1, 2, 4, 30}) {
    const SubspaceBasis b = random_subspace(30, k, rng);
    const Eigen::MatrixXd gram = b.columns.transpose() * b.columns;
    CHECK((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(random_subspace(5, 6, rng), DomainError);
  CHECK_THROWS_AS(random_subspace(5, 0, rng), DomainError);
}

TEST_CASE("random direction follows the |g_1| / ||G||_2 law") {
  const std::int64_t n = 20;
  std::vector<double> from_basis, reference;
  RngStream a(2, 0);
  RngStream b(2, 1);
  for (int t = 0; t < 3000; ++t) {
    from_basis.push_back(std::abs(random_subspace(n, 1, a).columns(0, 0)));
    Eigen::VectorXd g(n);
    for (auto& x : g) x = b.gaussian();
    reference.push_back(std::abs(g(0)) / g.norm());
  }
  CHECK(ks_two_sample(from_basis, reference).p_value > 1e-3);
}

TEST_CASE("sphere nets cover at the stated resolution") {
  RngStream rng(3, 0);
  for (std::int64_t k : {2, 3, 4}) {
    const double rho = 0.15;
    const Eigen::MatrixXd net = sphere_net(k, rho);
    for (Eigen::Index j = 0; j < net.cols(); ++j) CHECK(net.col(j).norm() == doctest::Approx(1).epsilon(1e-14));
    for (int t = 0; t < 500; ++t) {
      Eigen::VectorXd x(k);
      for (auto& c : x) c = rng.gaussian();
      x.normalize();
      double best = kInf;
      for (Eigen::Index j = 0; j < net.cols(); ++j) {
        best = std::min({best, (net.col(j) - x).norm(), (net.col(j) + x).norm()});
      }
      CHECK(best <= rho);
    }
  }
  CHECK_THROWS_AS(sphere_net(5, 0.1), DomainError);
  CHECK_THROWS_AS(sphere_net(2, 1.5), DomainError);
}

TEST_CASE("distortion fixtures") {
  RngStream rng(4, 0);
  const SubspaceBasis b = random_subspace(200, 3, rng);
  const DistortionResult two = distortion(b, 2, 0.05);
  CHECK(two.distortion == 1);
  CHECK(two.certified_rel_error == 0);

  const SubspaceBasis line = random_subspace(200, 1, rng);
  CHECK(distortion(line, 7, 0.05).distortion == 1);

  const SubspaceBasis id{Eigen::MatrixXd::Identity(2, 2)};
  const DistortionResult d = distortion(id, kInf, 0.001);
  CHECK(d.distortion <= std::sqrt(2.0));
  CHECK(d.distortion_upper >= std::sqrt(2.0));
  CHECK(d.distortion == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(d.certified);

  CHECK_THROWS_AS(distortion(random_subspace(50, 6, rng), 4, 0.1), DomainError);
  const DistortionResult loose = distortion(random_subspace(50, 6, rng), 4, 0.1, true);
  CHECK_FALSE(loose.certified);
  CHECK(std::isnan(loose.certified_rel_error));
}

TEST_CASE("certified error shrinks with resolution") {
  RngStream rng(5, 0);
  for (int t = 0; t < 5; ++t) {
    const SubspaceBasis b = random_subspace(500, 2, rng);
    const DistortionResult coarse = distortion(b, 6, 0.02);
    const DistortionResult fine = distortion(b, 6, 0.01);
    CHECK(coarse.certified_rel_error / fine.certified_rel_error >= 1.5);

    // Dense sampling stays within the certified bracket.
    double sup = 0, inf = kInf;
    for (int j = 0; j < 20000; ++j) {
      const double th = std::numbers::pi * j / 20000.0;
      const Eigen::VectorXd v = b.columns.col(0) * std::cos(th) + b.columns.col(1) * std::sin(th);
      const double r = lp_norm(v, 6);
      sup = std::max(sup, r);
      inf = std::min(inf, r);
    }
    CHECK(sup / inf >= fine.distortion * (1 - 1e-12));
    CHECK(sup / inf <= fine.distortion_upper);
  }
}

TEST_CASE("distortion depends on the subspace, not the basis") {
  RngStream rng(6, 0);
  const SubspaceBasis b = random_subspace(300, 2, rng);
  const double th = 0.7;
  Eigen::Matrix2d rot;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const SubspaceBasis r{b.columns * rot};
  const DistortionResult d1 = distortion(b, 5, 0.01);
  const DistortionResult d2 = distortion(r, 5, 0.01);
  CHECK(d2.distortion >= d1.distortion / (1 + d1.certified_rel_error));
  CHECK(d2.distortion <= d1.distortion_upper);
}

TEST_CASE("sphericity experiment") {
  const SphericityResult two = sphericity_experiment(100, 2, 2, 0.01, 20, 0.05, 1);
  CHECK(two.successes == 20);
  CHECK(two.success.frequency == 1);

  const SphericityResult a = sphericity_experiment(300, 2, 8, 0.2, 30, 0.02, 9);
  const SphericityResult b = sphericity_experiment(300, 2, 8, 0.2, 30, 0.02, 9);
  CHECK(a.successes == b.successes);
  CHECK(a.median_distortion == b.median_distortion);
  CHECK(a.successes + a.failures + a.ambiguous == 30);
}

TEST_CASE("transition sweep") {
  const double deltas[] = {0.0, 0.3, 0.6};
  const std::vector<PhaseRow> rows = transition_sweep(1000, 2, deltas, {0.2, 0.5}, 40, 0.02, 3);
  CHECK(rows.size() == 5);
  CHECK(std::is_sorted(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.p < y.p; }));
  int critical = 0;
  for (const auto& r : rows) {
    if (r.side == "critical") {
      ++critical;
      CHECK(r.in_window);
    }
  }
  CHECK(critical == 1);

  std::stringstream ss;
  write_phase_csv(ss, rows);
  CHECK(read_phase_csv(ss) == rows);
}

TEST_CASE("success probability falls with p at fixed epsilon") {
  const double ln = std::log(1000.0);
  double last = 1.1;
  for (double p : {0.8 * ln, 1.4 * ln, 2.0 * ln, 2.6 * ln}) {
    const SphericityResult s = sphericity_experiment(1000, 2, p, 0.15, 60, 0.01, 5);
    CHECK(s.success.frequency <= last + 0.1);
    last = s.success.frequency;
  }
}
