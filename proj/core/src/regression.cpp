#include "kode/regression.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "kode/kernel.hpp"

namespace kode {

namespace {

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void validate_config(const FitConfig& cfg) {
  if (cfg.bandwidth && (!(*cfg.bandwidth > 0.0) || !std::isfinite(*cfg.bandwidth))) {
    throw Error(ErrorKind::NonPositiveBandwidth,
                "explicit bandwidth must be a positive finite real");
  }
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw Error(ErrorKind::InvalidConfig, "lambda must be finite and >= 0");
  }
  if (cfg.online.passes < 1) {
    throw Error(ErrorKind::InvalidConfig, "online passes must be >= 1");
  }
  if (!(cfg.online.learning_rate > 0.0) || !std::isfinite(cfg.online.learning_rate)) {
    throw Error(ErrorKind::InvalidConfig, "learning rate must be > 0");
  }
  if (!(cfg.online.tolerance >= 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "tolerance must be >= 0");
  }
}

// Everything both fitters need, in standardized space.
struct FitData {
  StandardScaler scaler;
  std::vector<State> centers;        // standardized base points, size M
  Eigen::MatrixXd velocity_targets;  // M x d
  Eigen::MatrixXd increments;        // M x d
  Eigen::VectorXd deltas_t;          // M
  double bandwidth = 0.0;
};

FitData prepare(const TimeSeries& ts, const FitConfig& cfg) {
  validate_timeseries(ts);
  FitData data;
  data.scaler = StandardScaler::fit(ts.states);

  std::vector<State> z;
  z.reserve(ts.size());
  for (const State& x : ts.states) z.push_back(data.scaler.apply(x));

  const std::size_t m = ts.size() - 1;
  const Eigen::Index d = ts.dim();
  data.centers.assign(z.begin(), z.end() - 1);
  data.velocity_targets.resize(static_cast<Eigen::Index>(m), d);
  data.increments.resize(static_cast<Eigen::Index>(m), d);
  data.deltas_t.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double dt = ts.times[i + 1] - ts.times[i];
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    data.increments.row(row) = (z[i + 1] - z[i]).transpose();
    data.velocity_targets.row(row) = data.increments.row(row) / dt;
    data.deltas_t[row] = dt;
  }
  if (cfg.bandwidth) {
    data.bandwidth = *cfg.bandwidth;
  } else if (data.centers.size() >= 2) {
    data.bandwidth = median_heuristic_bandwidth(data.centers);
  } else {
    // Single center: the only kernel value the fit ever sees is K(c,c) = 1,
    // so any positive bandwidth gives the same weights.
    data.bandwidth = 1.0;
  }
  return data;
}

// Solve A X = B for symmetric positive semi-definite A, insisting on a 1e-8
// relative residual. Cholesky with one step of iterative refinement covers
// the well-posed cases; a complete-orthogonal (least-squares) fallback covers
// lambda = 0 systems that Cholesky rejects. Inconsistent systems (duplicate
// centers with different targets at lambda = 0) fail the residual check.
Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const double bnorm = B.norm();
  const auto rel_residual = [&](const Eigen::MatrixXd& X) {
    const double r = (A * X - B).norm();
    return bnorm > 0.0 ? r / bnorm : r;
  };

  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXd X = llt.solve(B);
    X += llt.solve(B - A * X);
    if (rel_residual(X) <= 1e-8) return X;
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  Eigen::MatrixXd X = cod.solve(B);
  X += cod.solve(B - A * X);
  const double rel = rel_residual(X);
  if (rel > 1e-8) {
    throw Error(ErrorKind::SingularSystem,
                "ridge system solved only to relative residual " +
                    short_double(rel) + " (need 1e-8); duplicate base points "
                    "with lambda = 0?");
  }
  return X;
}

}  // namespace

Eigen::MatrixXd solve_ridge_weights(const std::vector<State>& centers,
                                    const Eigen::MatrixXd& targets,
                                    const Eigen::VectorXd& deltas_t,
                                    double bandwidth, double lambda,
                                    Weighting weighting) {
  const Eigen::Index m = static_cast<Eigen::Index>(centers.size());
  if (targets.rows() != m) {
    throw Error(ErrorKind::DimensionMismatch,
                "target rows do not match the number of centers");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidConfig, "lambda must be finite and >= 0");
  }
  Eigen::MatrixXd A = gram_matrix(centers, bandwidth).entries;

  if (weighting == Weighting::velocity) {
    A.diagonal().array() += lambda;
    return solve_checked(A, targets);
  }

  // increment weighting
  if (deltas_t.size() != m) {
    throw Error(ErrorKind::DimensionMismatch,
                "deltas_t does not match the number of centers");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(deltas_t[i] > 0.0)) {
      throw Error(ErrorKind::NonMonotonicTime, "deltas_t must be positive");
    }
  }
  A = deltas_t.asDiagonal() * A * deltas_t.asDiagonal();
  A.diagonal().array() += lambda;
  Eigen::MatrixXd cprime = solve_checked(A, targets);
  return deltas_t.asDiagonal() * cprime;
}

OnlineResult online_passes(const std::vector<State>& centers,
                           const Eigen::MatrixXd& deltas,
                           const Eigen::VectorXd& deltas_t, double bandwidth,
                           double lambda, const OnlineConfig& cfg) {
  const Eigen::Index m = static_cast<Eigen::Index>(centers.size());
  const Eigen::Index d = deltas.cols();
  if (deltas.rows() != m || deltas_t.size() != m) {
    throw Error(ErrorKind::DimensionMismatch,
                "increments do not match the number of centers");
  }
  if (cfg.passes < 1 || !(cfg.learning_rate > 0.0) || !(cfg.tolerance >= 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "bad online configuration");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(deltas_t[i] > 0.0)) {
      throw Error(ErrorKind::NonMonotonicTime, "deltas_t must be positive");
    }
  }

  const Eigen::MatrixXd G = gram_matrix(centers, bandwidth).entries;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, d);

  OnlineResult result;
  for (int pass = 1; pass <= cfg.passes; ++pass) {
    double max_error = 0.0;
    for (Eigen::Index n = 0; n < m; ++n) {
      // One Euler step from z_n with the current field; e is the prediction
      // error against the observed next point, in standardized units.
      const Eigen::VectorXd field = C.transpose() * G.col(n);
      const Eigen::VectorXd e =
          deltas.row(n).transpose() - deltas_t[n] * field;
      const double err = e.norm();
      if (err > max_error) max_error = err;
      const Eigen::RowVectorXd update =
          cfg.learning_rate *
          (e.transpose() / deltas_t[n] - lambda * C.row(n));
      C.row(n) += update;
    }
    result.passes_run = pass;
    result.final_max_error = max_error;
    if (!C.allFinite()) {
      throw Error(ErrorKind::Diverged,
                  "online weights became non-finite in pass " +
                      std::to_string(pass));
    }
    if (max_error <= cfg.tolerance) break;
  }
  result.weights = std::move(C);
  return result;
}

KernelModel fit_batch(const TimeSeries& ts, const FitConfig& cfg) {
  validate_config(cfg);
  FitData data = prepare(ts, cfg);
  const Eigen::MatrixXd& targets = cfg.weighting == Weighting::velocity
                                       ? data.velocity_targets
                                       : data.increments;
  KernelModel model;
  model.bandwidth = data.bandwidth;
  model.lambda = cfg.lambda;
  model.weights = solve_ridge_weights(data.centers, targets, data.deltas_t,
                                      data.bandwidth, cfg.lambda, cfg.weighting);
  model.centers = std::move(data.centers);
  model.scaler = std::move(data.scaler);
  return model;
}

KernelModel fit_online(const TimeSeries& ts, const FitConfig& cfg) {
  validate_config(cfg);
  FitData data = prepare(ts, cfg);
  OnlineResult sweep = online_passes(data.centers, data.increments,
                                     data.deltas_t, data.bandwidth, cfg.lambda,
                                     cfg.online);
  KernelModel model;
  model.bandwidth = data.bandwidth;
  model.lambda = cfg.lambda;
  model.weights = std::move(sweep.weights);
  model.centers = std::move(data.centers);
  model.scaler = std::move(data.scaler);
  return model;
}

State evaluate_field(const KernelModel& model, const State& x) {
  if (model.centers.empty() ||
      model.weights.rows() != static_cast<Eigen::Index>(model.centers.size())) {
    throw Error(ErrorKind::DimensionMismatch,
                "model weights do not match its centers");
  }
  if (x.size() != model.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "input has dimension " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(model.dim()));
  }
  if (!x.allFinite()) {
    throw Error(ErrorKind::NonFiniteValue, "field input has a non-finite entry");
  }
  const State z = model.scaler.apply(x);
  const Eigen::VectorXd k = kernel_row(z, model.centers, model.bandwidth);
  const State v = model.weights.transpose() * k;
  return model.scaler.unscale_velocity(v);
}

}  // namespace kode
