#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "kode/core.hpp"

namespace kode {

// How residuals enter the training objective.
//  - velocity: plain ridge regression on velocity targets y_i = dx_i/dt_i;
//    non-uniform sampling is absorbed into the targets and the solver never
//    sees the gaps. This is the default.
//  - increment: minimize sum_i |dx_i - dt_i f(x_i)|^2 + lambda |f|^2, i.e.
//    residuals weighted by the sampling gaps themselves.
// The two coincide at lambda = 0.
enum class Weighting { velocity, increment };

struct OnlineConfig {
  int passes = 200;            // maximum full sweeps over the increments
  double learning_rate = 0.1;  // eta
  double tolerance = 0.0;      // stop once max |e_n| over a pass is <= this
};

struct FitConfig {
  // Kernel length scale; unset means the median heuristic on the
  // standardized base points.
  std::optional<double> bandwidth;
  double lambda = 1e-6;
  Weighting weighting = Weighting::velocity;
  OnlineConfig online;
};

// Closed-form kernel ridge fit. Standardizes the series, takes the N-1 base
// points as kernel centers, and solves the ridge system for the weight
// matrix. The returned model maps original data units to velocities in
// original units per original time unit.
KernelModel fit_batch(const TimeSeries& ts, const FitConfig& cfg = {});

// Iterative fit: sweep over the increments, predict one Euler step from each
// base point, and correct that point's weight row from the prediction error.
// The fixed point of the sweep is the batch solution for the same lambda.
KernelModel fit_online(const TimeSeries& ts, const FitConfig& cfg = {});

// f(x) = sum_i weights[i] K(centers[i], z(x)) evaluated in standardized space
// and mapped back to data units per time unit.
State evaluate_field(const KernelModel& model, const State& x);

// --- standardized-space building blocks -----------------------------------
// These operate directly on standardized quantities; fit_batch/fit_online are
// thin wrappers around them. Exposed so the solve and sweep can be exercised
// and cross-checked without a scaler in the way.

// Solves the ridge system for the weight matrix C (M x d).
//  - velocity: (G + lambda I) C = targets, where targets stacks the velocity
//    targets row-wise.
//  - increment: (D G D + lambda I) C' = targets with D = diag(deltas_t), then
//    C = D C'; here targets stacks the increments dz_i row-wise. This is the
//    minimizer of sum_i |dz_i - dt_i f(z_i)|^2 + lambda |f|^2.
// Throws SingularSystem when no solution reaches a 1e-8 relative residual
// (possible only at lambda = 0 with duplicate centers).
Eigen::MatrixXd solve_ridge_weights(const std::vector<State>& centers,
                                    const Eigen::MatrixXd& targets,
                                    const Eigen::VectorXd& deltas_t,
                                    double bandwidth, double lambda,
                                    Weighting weighting);

struct OnlineResult {
  Eigen::MatrixXd weights;        // M x d
  int passes_run = 0;             // sweeps actually executed
  double final_max_error = 0.0;   // max |e_n| over the last sweep
};

// The online sweep on standardized increments, starting from zero weights:
// for each n, predict z_n + dt_n f(z_n), observe z_{n+1}, and update row n by
// eta * (e_n / dt_n - lambda C[n]). Stops after a full sweep whose largest
// error norm is within tolerance.
OnlineResult online_passes(const std::vector<State>& centers,
                           const Eigen::MatrixXd& deltas,
                           const Eigen::VectorXd& deltas_t, double bandwidth,
                           double lambda, const OnlineConfig& cfg);

}  // namespace kode
