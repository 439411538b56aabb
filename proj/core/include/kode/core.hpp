#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "kode/errors.hpp"

namespace kode {

// A state is a point in R^d. Everything downstream (kernels, regression,
// integration) works on these.
using State = Eigen::VectorXd;

// Observations of a trajectory: strictly increasing time stamps paired with
// states of a common dimension. The sole training input.
struct TimeSeries {
  std::vector<double> times;
  std::vector<State> states;

  std::size_t size() const { return times.size(); }
  Eigen::Index dim() const {
    return states.empty() ? 0 : states.front().size();
  }
};

// First differences of a time series: for each of the N-1 consecutive pairs,
// the base point x_i, the increment dx_i = x_{i+1} - x_i, the gap
// dt_i = t_{i+1} - t_i, and the velocity target y_i = dx_i / dt_i.
struct IncrementSet {
  std::vector<State> base_points;
  std::vector<State> deltas_x;
  std::vector<double> deltas_t;
  std::vector<State> velocity_targets;

  std::size_t size() const { return deltas_t.size(); }
};

// Per-dimension affine normalization z = (x - mean) / std with exact inverse.
// Statistics are population statistics (divide by N). Construction fails on a
// zero-variance dimension: a constant coordinate carries no dynamics.
class StandardScaler {
 public:
  StandardScaler() = default;
  StandardScaler(Eigen::VectorXd means, Eigen::VectorXd stds);

  static StandardScaler fit(const std::vector<State>& states);

  State apply(const State& x) const;
  State invert(const State& z) const;
  // Chain rule for derivatives: dz/dt = (dx/dt) / std, so a velocity in
  // standardized space maps back by multiplying with std. No mean shift.
  State unscale_velocity(const State& v) const;

  const Eigen::VectorXd& means() const { return means_; }
  const Eigen::VectorXd& stds() const { return stds_; }
  Eigen::Index dim() const { return means_.size(); }

 private:
  Eigen::VectorXd means_;
  Eigen::VectorXd stds_;
};

// A fitted model of the vector field: f(x) = sum_i weights[i] * K(centers[i], z)
// evaluated in standardized coordinates z, with the scaler that maps between
// data units and standardized space. Immutable after fitting.
struct KernelModel {
  double bandwidth = 1.0;  // Gaussian kernel length scale (standardized units)
  double lambda = 0.0;     // ridge strength used at fit time
  std::vector<State> centers;  // standardized base points, M >= 1
  Eigen::MatrixXd weights;     // M x d
  StandardScaler scaler;

  Eigen::Index dim() const { return weights.cols(); }
  std::size_t center_count() const { return centers.size(); }
};

// Checks every TimeSeries invariant (lengths match, N >= 2, strictly
// increasing finite times, common dimension >= 1, finite states) and returns
// the series unchanged if they all hold.
const TimeSeries& validate_timeseries(const TimeSeries& ts);

// Validates, then extracts the N-1 increments used as regression data.
IncrementSet extract_increments(const TimeSeries& ts);

}  // namespace kode
