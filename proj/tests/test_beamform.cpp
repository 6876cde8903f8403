#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "maris/beamform.hpp"
#include "maris/channel.hpp"
#include "maris/errors.hpp"
#include "maris/rng.hpp"
#include "maris/scenario.hpp"
#include "maris/selfcheck.hpp"
#include "test_util.hpp"

using namespace maris;

namespace {

// The W-dependent part of the P2 objective plus the power regularizer,
// evaluated independently for the stationarity check.
double regularized_p2(const Eigen::MatrixXcd& h_eff,
                      const Eigen::VectorXd& alpha,
                      const Eigen::VectorXcd& beta, const Beamformer& w,
                      double lambda0) {
  const Eigen::MatrixXcd z = h_eff.adjoint() * w;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < z.rows(); ++k) {
    acc += 2.0 * std::sqrt(1.0 + alpha(k)) *
               std::real(std::conj(beta(k)) * z(k, k)) -
           std::norm(beta(k)) * z.row(k).squaredNorm();
  }
  return acc - lambda0 * w.squaredNorm();
}

}  // namespace

TEST_CASE("update_alpha is the identity on the SINRs") {
  CHECK(update_alpha(Eigen::VectorXd::Zero(4)) == Eigen::VectorXd::Zero(4));
  Eigen::VectorXd g(2);
  g << 3.0, 0.5;
  CHECK(update_alpha(g) == g);
}

TEST_CASE("update_beta closed form") {
  SECTION("zero beamformer gives zero beta") {
    const Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(3, 3);
    const Eigen::VectorXcd beta =
        update_beta(Eigen::VectorXd::Ones(3), z, 1e-13);
    CHECK(beta.norm() == 0.0);
  }

  SECTION("hand-evaluated single-user case") {
    // A = 1, sigma^2 = 1, alpha = gamma = 1 => B = 2, beta = sqrt(2)/2.
    Eigen::MatrixXcd z(1, 1);
    z(0, 0) = 1.0;
    Eigen::VectorXd alpha(1);
    alpha << 1.0;
    const Eigen::VectorXcd beta = update_beta(alpha, z, 1.0);
    CHECK(std::abs(beta(0) - std::sqrt(2.0) / 2.0) < 1e-15);
  }

  SECTION("beta maximizes the bracketed quadratic") {
    const SystemConfig cfg = testutil::reference_config();
    const Scenario sc = sample_scenario(cfg, 17);
    const SolverState st = random_state(sc, cfg, 17);
    const Eigen::MatrixXcd z = gain_matrix(
        effective_channel(sc, st.phi, st.t, cfg.wavelength()), st.w);
    const double noise = cfg.noise_w();
    const Eigen::VectorXcd beta0 = update_beta(st.alpha, z, noise);
    const double base = p2_objective_bits(st.alpha, beta0, z, noise);
    Rng rng(99);
    for (int trial = 0; trial < 16; ++trial) {
      Eigen::VectorXcd beta = beta0;
      const int k = trial % beta.size();
      beta(k) += (1e-3 + 1e-3 * std::abs(beta(k))) *
                 std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
      CHECK(p2_objective_bits(st.alpha, beta, z, noise) < base);
    }
  }
}

TEST_CASE("P2 objective is tight at the closed-form auxiliaries") {
  const SystemConfig cfg = testutil::reference_config();
  const double noise = cfg.noise_w();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Scenario sc = sample_scenario(cfg, seed);
    const SolverState st = random_state(sc, cfg, seed);
    const Eigen::MatrixXcd z = gain_matrix(
        effective_channel(sc, st.phi, st.t, cfg.wavelength()), st.w);
    const double rate = sum_rate_from_sinr(sinr_from_gains(z, noise));
    const double p2 = p2_objective_bits(st.alpha, st.beta, z, noise);
    CHECK(std::abs(p2 - rate) <= 1e-9 * std::max(1.0, std::abs(rate)));
  }
}

TEST_CASE("update_w solves the regularized system") {
  const SystemConfig cfg = testutil::reference_config();
  const double wl = cfg.wavelength();

  SECTION("zero auxiliaries give a zero beamformer") {
    const Scenario sc = sample_scenario(cfg, 3);
    const SolverState st = random_state(sc, cfg, 3);
    const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
    const Eigen::MatrixXcd w = update_w(
        h_eff, st.alpha, Eigen::VectorXcd::Zero(cfg.n_users), 1.0);
    CHECK(w.norm() == 0.0);
  }

  SECTION("finite-difference stationarity at the returned point") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Scenario sc = sample_scenario(cfg, seed);
      const SolverState st = random_state(sc, cfg, seed);
      const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
      const double lambda0 = 1.0;
      const Beamformer w0 = update_w(h_eff, st.alpha, st.beta, lambda0);

      const double f0 = regularized_p2(h_eff, st.alpha, st.beta, w0, lambda0);
      const double step = 1e-6 * std::max(w0.norm(), 1e-12);
      double fd_norm2 = 0.0;
      for (int n = 0; n < w0.rows(); ++n) {
        for (int k = 0; k < w0.cols(); ++k) {
          for (int part = 0; part < 2; ++part) {
            const std::complex<double> dir =
                part == 0 ? std::complex<double>(step, 0.0)
                          : std::complex<double>(0.0, step);
            Beamformer plus = w0, minus = w0;
            plus(n, k) += dir;
            minus(n, k) -= dir;
            const double fd =
                (regularized_p2(h_eff, st.alpha, st.beta, plus, lambda0) -
                 regularized_p2(h_eff, st.alpha, st.beta, minus, lambda0)) /
                (2.0 * step);
            fd_norm2 += fd * fd;
          }
        }
      }
      const double scale = std::abs(f0) + lambda0 * w0.squaredNorm();
      const double residual =
          std::sqrt(fd_norm2) * w0.norm() / std::max(scale, 1e-300);
      CHECK(residual < 1e-8);
    }
  }

  SECTION("singular system at zero dual is signalled") {
    SystemConfig few = cfg;
    few.n_users = 2;  // K < N makes the system rank deficient at lambda0 = 0
    const Scenario sc = sample_scenario(few, 7);
    const SolverState st = random_state(sc, few, 7);
    const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
    CHECK_THROWS_AS(update_w(h_eff, st.alpha, st.beta, 0.0), NumericalError);
  }
}

TEST_CASE("power dual bisection") {
  const SystemConfig cfg = testutil::reference_config();
  const double wl = cfg.wavelength();
  const double pmax = cfg.pmax_w();

  SECTION("single user lands on full-power MRT") {
    SystemConfig one = cfg;
    one.n_users = 1;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Scenario sc = sample_scenario(one, seed);
      const SolverState st = random_state(sc, one, seed);
      const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
      const PowerDualResult pd =
          solve_power_dual(h_eff, st.alpha, st.beta, pmax, one.bisect_tol);
      const double cosine = std::abs(h_eff.col(0).dot(pd.w.col(0))) /
                            (h_eff.col(0).norm() * pd.w.col(0).norm());
      CHECK(cosine == Catch::Approx(1.0).epsilon(1e-9));
      CHECK(total_power(pd.w) == Catch::Approx(pmax).epsilon(1e-8));
    }
  }

  SECTION("total power is monotone nonincreasing in the dual variable") {
    const Scenario sc = sample_scenario(cfg, 23);
    const SolverState st = random_state(sc, cfg, 23);
    const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
    double lambda = 0.125;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 30; ++i, lambda *= 3.0) {
      const double p = total_power(update_w(h_eff, st.alpha, st.beta, lambda));
      CHECK(p <= prev * (1.0 + 1e-12));
      prev = p;
    }
  }

  SECTION("binding case meets the budget to tolerance, feasibly") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Scenario sc = sample_scenario(cfg, seed);
      const SolverState st = random_state(sc, cfg, seed);
      const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
      const PowerDualResult pd =
          solve_power_dual(h_eff, st.alpha, st.beta, pmax, cfg.bisect_tol);
      CHECK(power_feasible(pd.w, pmax));
      if (pd.lambda0 > 1e-12) {
        CHECK(std::abs(total_power(pd.w) - pmax) <= 1e-8 * pmax);
      }
    }
  }

  SECTION("inactive constraint returns a zero dual") {
    const Scenario sc = sample_scenario(cfg, 4);
    const SolverState st = random_state(sc, cfg, 4);
    const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
    // Scaling beta up pushes the unconstrained optimum far inside the budget.
    const Eigen::VectorXcd beta_big = 1e6 * st.beta;
    const PowerDualResult pd =
        solve_power_dual(h_eff, st.alpha, beta_big, pmax, cfg.bisect_tol);
    CHECK(pd.lambda0 <= 1e-12);
    CHECK(total_power(pd.w) <= pmax);

    const PowerDualResult zero = solve_power_dual(
        h_eff, st.alpha, Eigen::VectorXcd::Zero(cfg.n_users), pmax,
        cfg.bisect_tol);
    CHECK(zero.lambda0 == 0.0);
    CHECK(zero.w.norm() == 0.0);
  }
}

TEST_CASE("beamforming block never decreases the sum rate") {
  const SystemConfig cfg = testutil::reference_config();
  const double wl = cfg.wavelength();
  const double noise = cfg.noise_w();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scenario sc = sample_scenario(cfg, seed);
    SolverState st = random_state(sc, cfg, seed);
    const Eigen::MatrixXcd h_eff = effective_channel(sc, st.phi, st.t, wl);
    const double before = sum_rate(sc, st.w, st.phi, st.t, wl, noise);

    const Eigen::MatrixXcd z = gain_matrix(h_eff, st.w);
    st.alpha = update_alpha(sinr_from_gains(z, noise));
    st.beta = update_beta(st.alpha, z, noise);
    const PowerDualResult pd =
        solve_power_dual(h_eff, st.alpha, st.beta, cfg.pmax_w(), cfg.bisect_tol);

    const double after = sum_rate(sc, pd.w, st.phi, st.t, wl, noise);
    CHECK(after >= before - 1e-9 * std::max(1.0, std::abs(before)));
    CHECK(power_feasible(pd.w, cfg.pmax_w()));
  }
}
