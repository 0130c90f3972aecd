// Copyright 2026 The vccsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vcc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vcc {

StepMatrices build_step_matrices(const GraphSnapshot& g_normalized, const Eigen::VectorXd& b,
                                 const Eigen::VectorXd& b_next, const Eigen::VectorXd& e,
                                 double T, int M, int step) {
  const int n = g_normalized.n();
  if (b.size() != n || b_next.size() != n || e.size() != n) {
    throw DimensionMismatch("gain/scaling vectors must match the agent count");
  }
  if (M < 0) throw DimensionMismatch("delay bound must be nonnegative");
  if (!(T > 0.0)) throw ValidationError("T must be positive");

  StepMatrices sm;
  sm.step = step;
  sm.n = n;
  sm.M = M;
  sm.T = T;
  sm.b = b;
  sm.b_next = b_next;
  sm.e = e;
  sm.F << 0.0, 0.0, T, 0.0;

  const int dim2 = 2 * n;
  sm.A_tilde = Eigen::MatrixXd::Zero(dim2, dim2);
  sm.B_tilde = Eigen::MatrixXd::Zero(dim2, dim2);
  sm.Q = Eigen::MatrixXd::Zero(dim2, dim2);
  sm.Q_next = Eigen::MatrixXd::Zero(dim2, dim2);
  sm.A = Eigen::MatrixXd::Zero(dim2, dim2);
  sm.B = Eigen::MatrixXd::Zero(dim2, dim2);
  for (int i = 0; i < n; ++i) {
    const int o = 2 * i;
    sm.A_tilde(o, o) = 1.0;
    sm.A_tilde(o, o + 1) = T;
    sm.A_tilde(o + 1, o + 1) = 1.0 - b[i] * T;
    sm.B_tilde.block<2, 2>(o, o) = sm.F;
    sm.Q(o, o) = 1.0;
    sm.Q(o + 1, o) = 1.0;
    sm.Q(o + 1, o + 1) = 2.0 / b[i];
    sm.Q_next(o, o) = 1.0;
    sm.Q_next(o + 1, o) = 1.0;
    sm.Q_next(o + 1, o + 1) = 2.0 / b_next[i];
    const double q = 0.5 * b[i] * T;
    sm.A(o, o) = 1.0 - q;
    sm.A(o, o + 1) = q;
    sm.A(o + 1, o) = q;
    sm.A(o + 1, o + 1) = 1.0 - q;
    sm.B(o + 1, o + 1) = 2.0 / b[i];
  }

  sm.L0 = g_normalized.weights.rowwise().sum();
  sm.Phi.assign(static_cast<std::size_t>(M + 1), Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = g_normalized.weights(i, j);
      if (a == 0.0) continue;
      const int tau = g_normalized.delays(i, j);
      if (tau < 0 || tau > M) throw DimensionMismatch("edge delay exceeds the bound M");
      sm.Phi[static_cast<std::size_t>(tau)](i, j) = a;
    }
  }

  // Psi blocks: [0][0] = A - B[E L0 (x) F] + B[E Phi_0 (x) F],
  // [0][m] = B[E Phi_m (x) F], [l][l-1] = I. The coupling B_i (e a F) has a
  // single nonzero at the local (v-row, x-col) position, value e a 2T/b_i.
  const int dim = sm.dim();
  sm.Psi = Eigen::MatrixXd::Zero(dim, dim);
  sm.Psi.topLeftCorner(dim2, dim2) = sm.A;
  for (int i = 0; i < n; ++i) {
    const double gain = sm.e[i] * 2.0 * T / b[i];
    sm.Psi(2 * i + 1, 2 * i) -= gain * sm.L0[i];
    for (int m = 0; m <= M; ++m) {
      for (int j = 0; j < n; ++j) {
        const double a = sm.Phi[static_cast<std::size_t>(m)](i, j);
        if (a != 0.0) sm.Psi(2 * i + 1, 2 * n * m + 2 * j) += gain * a;
      }
    }
  }
  for (int l = 1; l <= M; ++l) {
    sm.Psi.block(2 * n * l, 2 * n * (l - 1), dim2, dim2).setIdentity();
  }

  // step_factor = diag{Q(k+1)Q(k)^-1, I} Psi. The left factor only mixes the
  // v-row of each leading agent block with its x-row.
  sm.step_factor = sm.Psi;
  for (int i = 0; i < n; ++i) {
    const double ratio = b[i] / b_next[i];
    sm.step_factor.row(2 * i + 1) =
        (1.0 - ratio) * sm.Psi.row(2 * i) + ratio * sm.Psi.row(2 * i + 1);
  }
  return sm;
}

TransitionProduct TransitionProduct::identity(int from_step, int dim) {
  return TransitionProduct{Eigen::MatrixXd::Identity(dim, dim), from_step, from_step - 1};
}

TransitionProduct advance_transition(const TransitionProduct& tp, const StepMatrices& sm) {
  if (sm.dim() != tp.Gamma.rows()) {
    throw DimensionMismatch("step factor does not match the transition product");
  }
  if (sm.step >= 0 && sm.step != tp.to_step + 1) {
    throw ValidationError("step factor for k = " + std::to_string(sm.step) +
                          " applied to a product ending at " + std::to_string(tp.to_step));
  }
  TransitionProduct next{sm.step_factor * tp.Gamma, tp.from_step, tp.to_step + 1};
  const double row_err = (next.Gamma.rowwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_err > 1e-7) {
    throw StochasticityViolation("transition row sums drifted by " + std::to_string(row_err));
  }
  if (next.Gamma.minCoeff() < -1e-9) {
    throw StochasticityViolation("transition product has a negative entry");
  }
  return next;
}

ThetaResult auxiliary_theta(const StepMatrices& sm) {
  ThetaResult result;
  result.theta = sm.Psi;
  for (int i = 0; i < sm.n; ++i) {
    result.theta.row(2 * i + 1) *= sm.b[i] / sm.b_next[i];
  }
  result.min_nonzero = std::numeric_limits<double>::infinity();
  for (int i = 0; i < result.theta.rows(); ++i) {
    for (int j = 0; j < result.theta.cols(); ++j) {
      const double v = result.theta(i, j);
      if (v > 0.0) result.min_nonzero = std::min(result.min_nonzero, v);
    }
  }
  return result;
}

namespace {

BlockCertificate best_leading_column(const Eigen::MatrixXd& block_product, int n, int block) {
  BlockCertificate cert;
  cert.block = block;
  double best = -1.0;
  for (int h = 0; h < 2 * n; ++h) {
    const double min_entry = block_product.col(h).minCoeff();
    if (min_entry > best) {
      best = min_entry;
      cert.column = h;
      cert.min_entry = min_entry;
    }
  }
  return cert;
}

}  // namespace

PositiveColumnResult positive_column_window(const std::function<StepMatrices(int)>& factor_at,
                                            int num_steps, int window_length, int n_hat, int n,
                                            int M) {
  const int block_steps = n_hat * window_length;
  if (num_steps < block_steps) {
    throw InsufficientHorizon("need " + std::to_string(block_steps) + " steps for one block of " +
                              std::to_string(n_hat) + " windows, have " +
                              std::to_string(num_steps));
  }
  const int dim = 2 * n * (M + 1);
  PositiveColumnResult result;
  const int blocks = num_steps / block_steps;
  for (int b = 0; b < blocks; ++b) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(dim, dim);
    for (int k = b * block_steps; k < (b + 1) * block_steps; ++k) {
      P = factor_at(k).step_factor * P;
    }
    BlockCertificate cert = best_leading_column(P, n, b);
    if (cert.min_entry <= 0.0) cert.column = -1;
    result.blocks.push_back(cert);
  }
  result.found = true;
  for (const auto& cert : result.blocks) {
    result.found = result.found && cert.column >= 0;
    result.best_min_entry = std::max(result.best_min_entry, cert.min_entry);
    if (cert.min_entry > result.mu_hat) {
      result.mu_hat = cert.min_entry;
      result.column = cert.column;
    }
  }
  if (!result.found) {
    result.column = -1;
    result.mu_hat = 0.0;
  }
  return result;
}

int first_positive_block_windows(const std::function<StepMatrices(int)>& factor_at, int num_steps,
                                 int window_length, int n, int M) {
  const int dim = 2 * n * (M + 1);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(dim, dim);
  int windows = 0;
  for (int k = 0; k < num_steps; ++k) {
    P = factor_at(k).step_factor * P;
    if ((k + 1) % window_length != 0) continue;
    ++windows;
    if (best_leading_column(P, n, 0).min_entry > 0.0) return windows;
  }
  return -1;
}

std::vector<double> row_range_report(const std::vector<TransitionProduct>& checkpoints,
                                     int column) {
  std::vector<double> ranges;
  double prev_max = std::numeric_limits<double>::infinity();
  double prev_min = -std::numeric_limits<double>::infinity();
  for (const auto& tp : checkpoints) {
    const double col_max = tp.Gamma.col(column).maxCoeff();
    const double col_min = tp.Gamma.col(column).minCoeff();
    if (col_max > prev_max + 1e-12 || col_min < prev_min - 1e-12) {
      throw StochasticityViolation("column extremes are not monotone across checkpoints");
    }
    prev_max = col_max;
    prev_min = col_min;
    ranges.push_back(col_max - col_min);
  }
  return ranges;
}

RateFit fit_exponential_rate(const Trajectory& traj, double tail_fraction) {
  std::vector<int> usable;
  for (const auto& s : traj.steps) {
    if (s.diameter > 1e-12) usable.push_back(s.k);
  }
  RateFit fit;
  if (usable.empty()) {
    // Already at consensus: the zero envelope with full contraction.
    fit.degenerate = true;
    fit.C = 0.0;
    fit.mu = 1.0;
    fit.r2 = 1.0;
    fit.mu_valid = true;
    fit.envelope_dominates = true;
    return fit;
  }
  if (static_cast<int>(usable.size()) < 10) {
    throw DegenerateFit("only " + std::to_string(usable.size()) + " usable diameter samples");
  }

  const int tail = std::max(10, static_cast<int>(std::ceil(tail_fraction * usable.size())));
  const int start = static_cast<int>(usable.size()) - tail;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int idx = start; idx < static_cast<int>(usable.size()); ++idx) {
    const double x = usable[static_cast<std::size_t>(idx)];
    const double y = std::log(traj.steps[static_cast<std::size_t>(usable[idx])].diameter);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = tail;
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw DegenerateFit("degenerate abscissa in rate fit");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;

  fit.degenerate = false;
  fit.points = tail;
  fit.C = std::exp(intercept);
  fit.mu = 1.0 - std::exp(slope);
  fit.mu_valid = fit.mu > 0.0 && fit.mu <= 1.0;

  double ss_res = 0, ss_tot = 0;
  const double y_mean = sy / m;
  for (int idx = start; idx < static_cast<int>(usable.size()); ++idx) {
    const double x = usable[static_cast<std::size_t>(idx)];
    const double y = std::log(traj.steps[static_cast<std::size_t>(usable[idx])].diameter);
    const double y_hat = intercept + slope * x;
    ss_res += (y - y_hat) * (y - y_hat);
    ss_tot += (y - y_mean) * (y - y_mean);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  if (fit.mu_valid) {
    // Domination is checked on the representable part of the decay (the
    // same 1e-12 floor that delimits usable fit samples).
    fit.envelope_multiplier = 0.0;
    for (const auto& s : traj.steps) {
      if (s.diameter <= 1e-12) continue;
      const double envelope = fit.C * std::pow(1.0 - fit.mu, s.k);
      if (envelope > 0.0) {
        fit.envelope_multiplier = std::max(fit.envelope_multiplier, s.diameter / envelope);
      }
    }
    fit.envelope_dominates = fit.envelope_multiplier <= 1.05;
  }
  return fit;
}

namespace {

// Shared by dual_simulate and analyze_scenario: the per-axis stacked state
// at time 0, including the constant pre-history.
Eigen::MatrixXd initial_stack(const Trajectory& traj, int M) {
  const int n = traj.n;
  const int dim = 2 * n * (M + 1);
  Eigen::MatrixXd Z(dim, traj.r);
  const StepRecord& s0 = traj.steps.front();
  for (int c = 0; c < traj.r; ++c) {
    for (int i = 0; i < n; ++i) {
      Z(2 * i, c) = s0.x(i, c);
      Z(2 * i + 1, c) = s0.x(i, c) + 2.0 * s0.v(i, c) / s0.b[i];
      for (int m = 1; m <= M; ++m) {
        Z(2 * n * m + 2 * i, c) = s0.x(i, c);
        Z(2 * n * m + 2 * i + 1, c) = s0.x(i, c);
      }
    }
  }
  return Z;
}

StepMatrices factor_for_step(const Scenario& scenario, const Trajectory& traj, int k) {
  const GraphSnapshot g = normalize_weights(scenario.schedule.at(k), scenario.gains.d,
                                            scenario.schedule.weight_floor());
  return build_step_matrices(g, traj.steps[static_cast<std::size_t>(k)].b,
                             traj.steps[static_cast<std::size_t>(k) + 1].b,
                             traj.steps[static_cast<std::size_t>(k)].e, traj.T,
                             scenario.schedule.delay_bound(), k);
}

double stack_deviation(const Eigen::MatrixXd& Z, const StepRecord& rec, int n, int r) {
  double dev = 0.0;
  for (int c = 0; c < r; ++c) {
    for (int i = 0; i < n; ++i) {
      const double x_rec = Z(2 * i, c);
      const double v_rec = 0.5 * rec.b[i] * (Z(2 * i + 1, c) - Z(2 * i, c));
      dev = std::max(dev, std::abs(x_rec - rec.x(i, c)));
      dev = std::max(dev, std::abs(v_rec - rec.v(i, c)));
    }
  }
  return dev;
}

}  // namespace

double dual_simulate(const Scenario& scenario, const Trajectory& traj) {
  const int M = scenario.schedule.delay_bound();
  Eigen::MatrixXd Z = initial_stack(traj, M);
  double dev = 0.0;
  for (int k = 0; k < traj.horizon; ++k) {
    const StepMatrices sm = factor_for_step(scenario, traj, k);
    Z = sm.step_factor * Z;
    dev = std::max(dev, stack_deviation(Z, traj.steps[static_cast<std::size_t>(k) + 1], traj.n,
                                        traj.r));
  }
  return dev;
}

AnalysisResult analyze_scenario(const Scenario& scenario, const Trajectory& traj) {
  const AnalysisSpec& opts = scenario.cfg.analysis;
  const int n = traj.n;
  const int M = scenario.schedule.delay_bound();
  const int dim = 2 * n * (M + 1);
  const int window_length = scenario.schedule.window_length();
  const int horizon = traj.horizon;

  AnalysisResult result;
  result.n_hat = opts.n_hat > 0 ? opts.n_hat : 4 * n * (M + 1);
  const int block_steps = result.n_hat * window_length;

  TransitionProduct gamma = TransitionProduct::identity(0, dim);
  Eigen::VectorXd col_max = gamma.Gamma.colwise().maxCoeff();
  Eigen::VectorXd col_min = gamma.Gamma.colwise().minCoeff();
  Eigen::MatrixXd block_product = Eigen::MatrixXd::Identity(dim, dim);
  int block_index = 0;

  Eigen::MatrixXd Z;
  if (opts.dual_sim) Z = initial_stack(traj, M);

  result.theta_min_nonzero = std::numeric_limits<double>::infinity();
  result.theta_domination_gap = std::numeric_limits<double>::infinity();
  result.min_factor_entry = std::numeric_limits<double>::infinity();
  result.min_gamma_entry = std::numeric_limits<double>::infinity();

  for (int k = 0; k < horizon; ++k) {
    const StepMatrices sm = factor_for_step(scenario, traj, k);

    const double factor_row_err = (sm.step_factor.rowwise().sum().array() - 1.0).abs().maxCoeff();
    result.max_factor_row_sum_err = std::max(result.max_factor_row_sum_err, factor_row_err);
    result.min_factor_entry = std::min(result.min_factor_entry, sm.step_factor.minCoeff());
    result.factor_row_sum_err_log.push_back(factor_row_err);

    if (opts.certificate_checks) {
      const ThetaResult theta = auxiliary_theta(sm);
      result.theta_min_nonzero = std::min(result.theta_min_nonzero, theta.min_nonzero);
      result.theta_domination_gap =
          std::min(result.theta_domination_gap, (sm.step_factor - theta.theta).minCoeff());
    }

    gamma = advance_transition(gamma, sm);
    const double gamma_row_err = (gamma.Gamma.rowwise().sum().array() - 1.0).abs().maxCoeff();
    result.max_gamma_row_sum_err = std::max(result.max_gamma_row_sum_err, gamma_row_err);
    result.min_gamma_entry = std::min(result.min_gamma_entry, gamma.Gamma.minCoeff());
    result.gamma_row_sum_err_log.push_back(gamma_row_err);

    const Eigen::VectorXd new_max = gamma.Gamma.colwise().maxCoeff();
    const Eigen::VectorXd new_min = gamma.Gamma.colwise().minCoeff();
    const double viol = std::max((new_max - col_max).maxCoeff(), (col_min - new_min).maxCoeff());
    result.max_monotonicity_violation = std::max(result.max_monotonicity_violation, viol);
    if (viol > 1e-12) result.minmax_monotone_ok = false;
    col_max = new_max;
    col_min = new_min;

    if (opts.dual_sim) {
      Z = sm.step_factor * Z;
      const double dev =
          stack_deviation(Z, traj.steps[static_cast<std::size_t>(k) + 1], n, traj.r);
      result.dual_max_deviation = std::max(result.dual_max_deviation, dev);
      result.dual_deviation_log.push_back(dev);
    }

    block_product = sm.step_factor * block_product;
    if ((k + 1) % block_steps == 0) {
      BlockCertificate cert = best_leading_column(block_product, n, block_index);
      if (cert.min_entry <= 0.0) cert.column = -1;
      result.positive_column.blocks.push_back(cert);
      result.column_ranges.push_back(col_max - col_min);
      result.window_ranges.push_back((col_max - col_min).maxCoeff());
      block_product.setIdentity();
      ++block_index;
    }
  }
  result.dual_ran = opts.dual_sim;

  // Fold block certificates into the reported (h, mu_hat).
  if (!result.positive_column.blocks.empty()) {
    result.positive_column.found = true;
    for (const auto& cert : result.positive_column.blocks) {
      result.positive_column.found = result.positive_column.found && cert.column >= 0;
      result.positive_column.best_min_entry =
          std::max(result.positive_column.best_min_entry, cert.min_entry);
      if (cert.min_entry > result.positive_column.mu_hat) {
        result.positive_column.mu_hat = cert.min_entry;
        result.positive_column.column = cert.column;
      }
    }
    if (!result.positive_column.found) {
      result.positive_column.column = -1;
      result.positive_column.mu_hat = 0.0;
    }
  }

  // Window-to-window range contraction with the per-block certificates.
  result.range_contraction_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 1; c < result.column_ranges.size(); ++c) {
    const BlockCertificate& cert = result.positive_column.blocks[c];
    const double mu = cert.column >= 0 ? cert.min_entry : 0.0;
    const Eigen::VectorXd bound =
        (1.0 - mu) * result.column_ranges[c - 1].array() + 1e-9;
    const double slack = (result.column_ranges[c] - bound).maxCoeff();
    result.range_contraction_slack = std::max(result.range_contraction_slack, slack);
    if (slack > 0.0) result.range_contraction_ok = false;
  }

  // Truncated scaling factors are bounded below by
  // rho_under / ((1/T + 2nTd) max_j |Z_j(0)|); the stack entries stay convex
  // combinations of the initial ones.
  if (horizon > 0) {
    const Eigen::MatrixXd Z0 = initial_stack(traj, M);
    result.max_z0_norm = Z0.rowwise().norm().maxCoeff();
    result.e_lower_bound.resize(n);
    for (int i = 0; i < n; ++i) {
      const double rho_under = estimate_rho_bounds(scenario.sets[i], 360).rho_under;
      const double denom = (1.0 / traj.T + 2.0 * n * traj.T * traj.d[i]) * result.max_z0_norm;
      result.e_lower_bound[i] = denom > 0.0 ? rho_under / denom : 0.0;
    }
    for (int k = 0; k < horizon; ++k) {
      const StepRecord& rec = traj.steps[static_cast<std::size_t>(k)];
      for (int i = 0; i < n; ++i) {
        if (rec.e[i] < 1.0) {
          ++result.truncation_events;
          result.min_truncated_e = std::min(result.min_truncated_e, rec.e[i]);
          if (rec.e[i] < result.e_lower_bound[i] - 1e-12) ++result.e_bound_violations;
        }
      }
    }
  }

  if (opts.rate_fit) {
    result.fit_ran = true;
    try {
      result.fit = fit_exponential_rate(traj);
    } catch (const DegenerateFit&) {
      result.fit = RateFit{};
      result.fit.degenerate = true;
      result.fit.r2 = 0.0;
      result.fit.mu_valid = false;
    }
  }
  return result;
}

}  // namespace vcc
