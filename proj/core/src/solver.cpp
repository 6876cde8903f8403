#include "maris/solver.hpp"

#include <chrono>
#include <cmath>

#include "maris/beamform.hpp"
#include "maris/channel.hpp"
#include "maris/errors.hpp"
#include "maris/positions.hpp"
#include "maris/ris.hpp"
#include "maris/rng.hpp"

namespace maris {

namespace {

constexpr std::uint64_t kPhiSeedTag = 0x52495350484153ULL;

double elapsed_ms(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - from)
      .count();
}

}  // namespace

SolverState initialize(const Scenario& sc, const SystemConfig& config) {
  config.validate();
  const double wl = config.wavelength();

  SolverState state;
  state.t = ula_positions(config.n_antennas, 0.5 * wl);
  if (!feasible(state.t, config)) {
    if (config.antenna_mode == AntennaMode::Fixed) {
      throw ConfigError(
          "initialize: lambda/2 ULA does not fit the region; FPA layout "
          "infeasible for this config");
    }
    const double spacing = std::max(0.5 * wl, config.min_dist_m());
    state.t =
        packed_grid_positions(config.n_antennas, spacing, config.region_m());
    if (!feasible(state.t, config)) {
      throw ConfigError("initialize: no feasible antenna layout for region");
    }
  }

  Rng rng(splitmix64(config.seed ^ kPhiSeedTag));
  state.phi.resize(config.n_ris);
  for (int m = 0; m < config.n_ris; ++m) {
    state.phi(m) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
  }
  if (config.ris_mode == RisMode::Dps) {
    state.phi = quantize_phases(state.phi, config.dps_levels);
  }

  const Eigen::MatrixXcd h_eff = effective_channel(sc, state.phi, state.t, wl);
  state.w.resize(config.n_antennas, config.n_users);
  const double col_power = config.pmax_w() / config.n_users;
  for (int k = 0; k < config.n_users; ++k) {
    const double norm = h_eff.col(k).norm();
    if (norm > 0.0) {
      state.w.col(k) = (std::sqrt(col_power) / norm) * h_eff.col(k);
    } else {
      state.w.col(k).setZero();
    }
  }

  state.alpha = Eigen::VectorXd::Zero(config.n_users);
  state.beta = Eigen::VectorXcd::Zero(config.n_users);
  state.eps = Eigen::VectorXcd::Zero(config.n_users);
  state.delta = Eigen::VectorXcd::Zero(config.n_users);
  return state;
}

SolveResult solve(const Scenario& sc, const SystemConfig& config,
                  const IterationObserver& observer) {
  const double wl = config.wavelength();
  const double noise = config.noise_w();

  SolveResult result;
  result.state = initialize(sc, config);
  SolverState& s = result.state;
  SolverTrace& trace = result.trace;

  double rate_prev =
      sum_rate(sc, s.w, s.phi, s.t, wl, noise);

  try {
    for (int r = 1; r <= config.r_max; ++r) {
      const auto iter_start = std::chrono::steady_clock::now();
      IterationRecord rec;
      rec.iteration = r;

      Eigen::MatrixXcd h_eff = effective_channel(sc, s.phi, s.t, wl);
      Eigen::MatrixXcd z = gain_matrix(h_eff, s.w);
      s.alpha = update_alpha(sinr_from_gains(z, noise));
      s.beta = update_beta(s.alpha, z, noise);

      const auto w_start = std::chrono::steady_clock::now();
      PowerDualResult pd = solve_power_dual(h_eff, s.alpha, s.beta,
                                            config.pmax_w(), config.bisect_tol);
      s.w = std::move(pd.w);
      rec.w_block_ms = elapsed_ms(w_start);

      if (config.ris_mode != RisMode::Fixed) {
        const auto phi_start = std::chrono::steady_clock::now();
        z = gain_matrix(h_eff, s.w);
        s.eps = update_epsilon(s.alpha, z, noise);
        const QuadraticForm q =
            assemble_quadratic(sc, s.t, s.w, s.alpha, s.eps, wl);
        s.phi = optimize_phases(q, s.phi, config.ris_mode, config.dps_levels,
                                config.tau_max, config.mm_tol,
                                config.ellipsoid_tol);
        rec.phi_block_ms = elapsed_ms(phi_start);
      }

      if (config.antenna_mode == AntennaMode::Movable) {
        const auto t_start = std::chrono::steady_clock::now();
        h_eff = effective_channel(sc, s.phi, s.t, wl);
        z = gain_matrix(h_eff, s.w);
        s.delta = update_delta(s.alpha, z, noise);
        const PositionAuxiliaries aux =
            make_position_aux(sc, s.phi, s.w, s.delta);
        s.t = optimize_positions(sc, s.w, aux, s.alpha, s.t, config);
        rec.t_block_ms = elapsed_ms(t_start);
      }

      const double rate = sum_rate(sc, s.w, s.phi, s.t, wl, noise);
      rec.sum_rate_bits = rate;
      rec.wall_ms = elapsed_ms(iter_start);
      trace.iterations.push_back(rec);
      s.iteration = r;
      if (observer) observer(s, r);

      if (std::abs(rate - rate_prev) <=
          config.tol * std::max(std::abs(rate_prev), 1e-12)) {
        trace.status = SolveStatus::Converged;
        return result;
      }
      rate_prev = rate;
    }
    trace.status = SolveStatus::IterationCap;
  } catch (const NumericalError& err) {
    trace.status = SolveStatus::Failure;
    trace.message = err.what();
  }
  return result;
}

}  // namespace maris
