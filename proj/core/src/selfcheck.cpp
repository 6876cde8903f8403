#include "maris/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "maris/beamform.hpp"
#include "maris/channel.hpp"
#include "maris/errors.hpp"
#include "maris/positions.hpp"
#include "maris/rng.hpp"

namespace maris {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

AntennaPositions random_feasible_positions(const SystemConfig& config,
                                           Rng& rng) {
  const double region = config.region_m();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    AntennaPositions t(2, config.n_antennas);
    for (int n = 0; n < config.n_antennas; ++n) {
      t(0, n) = rng.uniform(0.0, region);
      t(1, n) = rng.uniform(0.0, region);
    }
    if (feasible(t, config)) return t;
  }
  return ula_positions(config.n_antennas, 0.5 * config.wavelength());
}

SystemConfig reference_config() {
  SystemConfig cfg;  // reference setup: N=K=L=4, M=16
  return cfg;
}

SystemConfig brute_config() {
  SystemConfig cfg;
  cfg.n_antennas = 2;
  cfg.n_users = 2;
  cfg.n_ris = 8;
  cfg.n_paths = 2;
  cfg.ris_mode = RisMode::Dps;
  cfg.dps_levels = 2;
  return cfg;
}

}  // namespace

SolverState random_state(const Scenario& sc, const SystemConfig& config,
                         std::uint64_t seed) {
  Rng rng(splitmix64(seed ^ 0x5354415445ULL));
  SolverState state;
  state.t = random_feasible_positions(config, rng);

  state.phi.resize(config.n_ris);
  for (int m = 0; m < config.n_ris; ++m) {
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    double mag = 1.0;
    if (config.ris_mode == RisMode::Irc) mag = std::sqrt(rng.uniform());
    state.phi(m) = std::polar(mag, ang);
  }
  if (config.ris_mode == RisMode::Dps) {
    state.phi = quantize_phases(state.phi, config.dps_levels);
  }

  state.w.resize(config.n_antennas, config.n_users);
  for (int n = 0; n < config.n_antennas; ++n) {
    for (int k = 0; k < config.n_users; ++k) {
      state.w(n, k) = rng.cnormal(1.0);
    }
  }
  state.w *= std::sqrt(config.pmax_w()) / state.w.norm();

  const Eigen::MatrixXcd z = gain_matrix(
      effective_channel(sc, state.phi, state.t, config.wavelength()), state.w);
  const double noise = config.noise_w();
  state.alpha = update_alpha(sinr_from_gains(z, noise));
  state.beta = update_beta(state.alpha, z, noise);
  state.eps = update_epsilon(state.alpha, z, noise);
  state.delta = update_delta(state.alpha, z, noise);
  return state;
}

QuadraticForm random_quadratic(int m, std::uint64_t seed) {
  Rng rng(splitmix64(seed ^ 0x51554144ULL));
  Eigen::MatrixXcd x(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      x(i, j) = rng.cnormal(1.0);
    }
  }
  QuadraticForm q;
  q.u = (x * x.adjoint()) / static_cast<double>(m);
  q.u = 0.5 * (q.u + q.u.adjoint()).eval();
  q.v.resize(m);
  for (int i = 0; i < m; ++i) {
    q.v(i) = rng.cnormal(1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q.u,
                                                      Eigen::EigenvaluesOnly);
  q.lambda_max = eig.eigenvalues().maxCoeff();
  return q;
}

Eigen::Vector2d fd_position_gradient(const AntennaPositions& t, int n,
                                     const Beamformer& w,
                                     const PositionAuxiliaries& aux,
                                     const Scenario& sc,
                                     const Eigen::VectorXd& alpha,
                                     double wavelength, double step) {
  Eigen::Vector2d g;
  for (int c = 0; c < 2; ++c) {
    AntennaPositions plus = t, minus = t;
    plus(c, n) += step;
    minus(c, n) -= step;
    g(c) = (position_objective(plus, w, aux, sc, alpha, wavelength) -
            position_objective(minus, w, aux, sc, alpha, wavelength)) /
           (2.0 * step);
  }
  return g;
}

double brute_force_dps_optimum(const QuadraticForm& q, int kappa) {
  const int m = static_cast<int>(q.v.size());
  double combos = 1.0;
  for (int i = 0; i < m; ++i) {
    combos *= kappa;
    if (combos > 1e6) {
      throw ConfigError("brute_force_dps_optimum: kappa^M too large");
    }
  }
  const long total = static_cast<long>(combos);
  std::vector<std::complex<double>> levels(kappa);
  for (int i = 0; i < kappa; ++i) {
    levels[i] = std::polar(1.0, 2.0 * M_PI * i / kappa);
  }
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXcd phi(m);
  for (long code = 0; code < total; ++code) {
    long rest = code;
    for (int i = 0; i < m; ++i) {
      phi(i) = levels[rest % kappa];
      rest /= kappa;
    }
    best = std::max(best, f2_value(q, phi));
  }
  return best;
}

std::vector<std::string> self_check_suites() {
  return {"gradients", "mm", "bisect", "tightness", "brute_dps"};
}

namespace {

CheckReport check_gradients() {
  CheckReport rep;
  rep.suite = "gradients";
  const SystemConfig cfg = reference_config();
  const double wl = cfg.wavelength();
  const double step = 1e-6 * wl;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scenario sc = sample_scenario(cfg, seed);
    const SolverState st = random_state(sc, cfg, seed);
    const PositionAuxiliaries aux =
        make_position_aux(sc, st.phi, st.w, st.delta);
    for (int n = 0; n < cfg.n_antennas; ++n) {
      const Eigen::Vector2d ga =
          position_gradient(st.t, n, st.w, aux, sc, st.alpha, wl);
      const Eigen::Vector2d gf =
          fd_position_gradient(st.t, n, st.w, aux, sc, st.alpha, wl, step);
      const double denom = std::max({gf.norm(), ga.norm(), 1e-300});
      worst = std::max(worst, (ga - gf).norm() / denom);
    }
  }
  rep.worst = worst;
  rep.pass = worst < 1e-5;
  rep.lines.push_back("max relative FD mismatch over 100 instances x " +
                      std::to_string(reference_config().n_antennas) +
                      " antennas: " + fmt(worst));
  return rep;
}

CheckReport check_mm() {
  CheckReport rep;
  rep.suite = "mm";
  double worst = 0.0;
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const QuadraticForm q = random_quadratic(16, seed);
    Rng rng(splitmix64(seed ^ 0x4D4DULL));
    Eigen::VectorXcd phi(q.v.size());
    for (Eigen::Index m = 0; m < phi.size(); ++m) {
      phi(m) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    }
    double f_prev = f2_value(q, phi);
    for (int step = 0; step < 50; ++step) {
      phi = mm_step(q, phi);
      const double f = f2_value(q, phi);
      const double drop = f_prev - f;
      worst = std::max(worst, drop);
      if (drop > 1e-10 * std::max(1.0, std::abs(f_prev))) ++violations;
      f_prev = f;
    }
  }
  rep.worst = worst;
  rep.pass = violations == 0;
  rep.lines.push_back("monotonicity violations over 100 x 50 steps: " +
                      std::to_string(violations) +
                      ", worst decrease: " + fmt(worst));
  return rep;
}

CheckReport check_bisect() {
  CheckReport rep;
  rep.suite = "bisect";
  const SystemConfig cfg = reference_config();
  const double wl = cfg.wavelength();
  const double pmax = cfg.pmax_w();
  double worst_slack = 0.0;
  double worst_monotone = 0.0;
  bool inactive_ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scenario sc = sample_scenario(cfg, seed);
    const SolverState st = random_state(sc, cfg, seed);
    const Eigen::MatrixXcd h_eff =
        effective_channel(sc, st.phi, st.t, wl);

    // Power is nonincreasing in the dual variable.
    double lambda = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 24; ++i, lambda *= 4.0) {
      const double p =
          total_power(update_w(h_eff, st.alpha, st.beta, lambda));
      worst_monotone = std::max(worst_monotone, (p - prev) / std::max(prev, 1e-300));
      prev = p;
    }

    const PowerDualResult pd =
        solve_power_dual(h_eff, st.alpha, st.beta, pmax, cfg.bisect_tol);
    if (pd.lambda0 > 1e-12) {
      worst_slack = std::max(
          worst_slack, std::abs(total_power(pd.w) - pmax) / pmax);
    }
    if (!power_feasible(pd.w, pmax)) inactive_ok = false;

    // Scaling the auxiliaries up pushes the unconstrained optimum far inside
    // the budget; the constraint must go inactive.
    const Eigen::VectorXcd beta_big = 1e6 * st.beta;
    const PowerDualResult pd0 =
        solve_power_dual(h_eff, st.alpha, beta_big, pmax, cfg.bisect_tol);
    if (pd0.lambda0 > 1e-12 || total_power(pd0.w) > pmax) inactive_ok = false;
  }
  rep.worst = std::max(worst_slack, worst_monotone);
  rep.pass = worst_slack <= 1e-8 && worst_monotone <= 1e-12 && inactive_ok;
  rep.lines.push_back("binding-case |power - pmax|/pmax worst: " +
                      fmt(worst_slack));
  rep.lines.push_back("monotonicity worst relative increase: " +
                      fmt(worst_monotone));
  rep.lines.push_back(std::string("inactive-constraint branch: ") +
                      (inactive_ok ? "ok" : "violated"));
  return rep;
}

CheckReport check_tightness() {
  CheckReport rep;
  rep.suite = "tightness";
  const SystemConfig cfg = reference_config();
  const double wl = cfg.wavelength();
  const double noise = cfg.noise_w();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario sc = sample_scenario(cfg, seed);
    const SolverState st = random_state(sc, cfg, seed);
    const Eigen::MatrixXcd z = gain_matrix(
        effective_channel(sc, st.phi, st.t, wl), st.w);
    const Eigen::VectorXd gamma = sinr_from_gains(z, noise);

    const double rate = sum_rate_from_sinr(gamma);
    const double p2 = p2_objective_bits(st.alpha, st.beta, z, noise);
    worst = std::max(worst, std::abs(p2 - rate) / std::max(1.0, std::abs(rate)));

    double r2 = 0.0;  // R'' = sum (1+alpha) gamma/(1+gamma)
    for (int k = 0; k < cfg.n_users; ++k) {
      r2 += (1.0 + st.alpha(k)) * gamma(k) / (1.0 + gamma(k));
    }
    const QuadraticForm q =
        assemble_quadratic(sc, st.t, st.w, st.alpha, st.eps, wl);
    const double f_eps = phi_transform_objective(q, st.phi, st.eps, noise);
    worst = std::max(worst, std::abs(f_eps - r2) / std::max(1.0, std::abs(r2)));

    const PositionAuxiliaries aux =
        make_position_aux(sc, st.phi, st.w, st.delta);
    const double f5 = position_objective(st.t, st.w, aux, sc, st.alpha, wl);
    const double f_delta = f5 - st.delta.squaredNorm() * noise;
    worst = std::max(worst,
                     std::abs(f_delta - r2) / std::max(1.0, std::abs(r2)));
  }
  rep.worst = worst;
  rep.pass = worst < 1e-9;
  rep.lines.push_back(
      "worst relative mismatch (P2 vs R, eps-transform vs R'', delta-transform "
      "vs R''): " +
      fmt(worst));
  return rep;
}

CheckReport check_brute_dps() {
  CheckReport rep;
  rep.suite = "brute_dps";
  const SystemConfig cfg = brute_config();
  const double wl = cfg.wavelength();
  int exact = 0;
  bool never_above = true;
  double worst_gap = 0.0;
  const int trials = 50;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const Scenario sc = sample_scenario(cfg, seed);
    const SolverState st = random_state(sc, cfg, seed);
    const QuadraticForm q =
        assemble_quadratic(sc, st.t, st.w, st.alpha, st.eps, wl);
    const Eigen::VectorXcd phi = optimize_phases(
        q, st.phi, RisMode::Dps, cfg.dps_levels, cfg.tau_max, cfg.mm_tol,
        cfg.ellipsoid_tol);
    const double f_heur = f2_value(q, phi);
    const double f_star = brute_force_dps_optimum(q, cfg.dps_levels);
    const double scale = std::max(1.0, std::abs(f_star));
    if (f_heur > f_star + 1e-9 * scale) never_above = false;
    const double gap = (f_star - f_heur) / scale;
    worst_gap = std::max(worst_gap, gap);
    if (gap <= 1e-9) ++exact;
  }
  rep.worst = worst_gap;
  rep.pass = never_above && exact >= (7 * trials) / 10;
  rep.lines.push_back("exact hits: " + std::to_string(exact) + "/" +
                      std::to_string(trials) +
                      ", worst relative gap: " + fmt(worst_gap));
  rep.lines.push_back(std::string("never above exhaustive optimum: ") +
                      (never_above ? "ok" : "VIOLATED"));
  return rep;
}

}  // namespace

CheckReport self_check(const std::string& suite) {
  if (suite == "gradients") return check_gradients();
  if (suite == "mm") return check_mm();
  if (suite == "bisect") return check_bisect();
  if (suite == "tightness") return check_tightness();
  if (suite == "brute_dps") return check_brute_dps();
  throw ConfigError("check: unknown suite '" + suite +
                    "' (expected gradients, mm, bisect, tightness or "
                    "brute_dps)");
}

}  // namespace maris
