#include "kode/core.hpp"

#include <cmath>
#include <string>

namespace kode {

namespace {

bool all_finite(const State& x) { return x.allFinite(); }

}  // namespace

const TimeSeries& validate_timeseries(const TimeSeries& ts) {
  if (ts.times.size() != ts.states.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "times has " + std::to_string(ts.times.size()) +
                    " entries but states has " +
                    std::to_string(ts.states.size()));
  }
  if (ts.size() < 2) {
    throw Error(ErrorKind::TooShort,
                "need at least 2 samples, got " + std::to_string(ts.size()));
  }
  const Eigen::Index d = ts.states.front().size();
  if (d < 1) {
    throw Error(ErrorKind::DimensionMismatch, "state dimension must be >= 1");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!std::isfinite(ts.times[i])) {
      throw Error(ErrorKind::NonFiniteValue,
                  "time stamp " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(ts.times[i] > ts.times[i - 1])) {
      throw Error(ErrorKind::NonMonotonicTime,
                  "times[" + std::to_string(i) + "] = " +
                      std::to_string(ts.times[i]) + " does not increase");
    }
    if (ts.states[i].size() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  "state " + std::to_string(i) + " has dimension " +
                      std::to_string(ts.states[i].size()) + ", expected " +
                      std::to_string(d));
    }
    if (!all_finite(ts.states[i])) {
      throw Error(ErrorKind::NonFiniteValue,
                  "state " + std::to_string(i) + " has a non-finite entry");
    }
  }
  return ts;
}

IncrementSet extract_increments(const TimeSeries& ts) {
  validate_timeseries(ts);
  const std::size_t m = ts.size() - 1;
  IncrementSet inc;
  inc.base_points.reserve(m);
  inc.deltas_x.reserve(m);
  inc.deltas_t.reserve(m);
  inc.velocity_targets.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double dt = ts.times[i + 1] - ts.times[i];
    inc.base_points.push_back(ts.states[i]);
    inc.deltas_x.push_back(ts.states[i + 1] - ts.states[i]);
    inc.deltas_t.push_back(dt);
    inc.velocity_targets.push_back(inc.deltas_x.back() / dt);
  }
  return inc;
}

StandardScaler::StandardScaler(Eigen::VectorXd means, Eigen::VectorXd stds)
    : means_(std::move(means)), stds_(std::move(stds)) {
  if (means_.size() != stds_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "means and stds have different sizes");
  }
  if (!means_.allFinite() || !stds_.allFinite()) {
    throw Error(ErrorKind::NonFiniteValue, "scaler statistics must be finite");
  }
  for (Eigen::Index k = 0; k < stds_.size(); ++k) {
    if (!(stds_[k] > 0.0)) {
      throw Error(ErrorKind::ZeroVariance,
                  "dimension " + std::to_string(k) +
                      " has non-positive standard deviation");
    }
  }
}

StandardScaler StandardScaler::fit(const std::vector<State>& states) {
  if (states.empty()) {
    throw Error(ErrorKind::TooShort, "cannot fit a scaler on no states");
  }
  const Eigen::Index d = states.front().size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const State& x : states) {
    if (x.size() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  "states passed to the scaler have mixed dimensions");
    }
    mean += x;
  }
  mean /= static_cast<double>(states.size());

  Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
  for (const State& x : states) {
    var += (x - mean).cwiseAbs2();
  }
  var /= static_cast<double>(states.size());  // population statistics

  Eigen::VectorXd std = var.cwiseSqrt();
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(std[k] > 0.0)) {
      throw Error(ErrorKind::ZeroVariance,
                  "dimension " + std::to_string(k) +
                      " is constant; cannot standardize");
    }
  }
  return StandardScaler(std::move(mean), std::move(std));
}

State StandardScaler::apply(const State& x) const {
  if (x.size() != means_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "scaler expects dimension " + std::to_string(means_.size()) +
                    ", got " + std::to_string(x.size()));
  }
  return (x - means_).cwiseQuotient(stds_);
}

State StandardScaler::invert(const State& z) const {
  if (z.size() != means_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "scaler expects dimension " + std::to_string(means_.size()) +
                    ", got " + std::to_string(z.size()));
  }
  return z.cwiseProduct(stds_) + means_;
}

State StandardScaler::unscale_velocity(const State& v) const {
  if (v.size() != stds_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "scaler expects dimension " + std::to_string(stds_.size()) +
                    ", got " + std::to_string(v.size()));
  }
  return v.cwiseProduct(stds_);
}

}  // namespace kode
