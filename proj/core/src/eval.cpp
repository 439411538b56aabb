#include "kode/eval.hpp"

#include <cmath>
#include <string>

#include "kode/regression.hpp"

namespace kode {

namespace {

void check_dims(const KernelModel& model, const TimeSeries& ts) {
  if (ts.dim() != model.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "series has dimension " + std::to_string(ts.dim()) +
                    ", model expects " + std::to_string(model.dim()));
  }
}

}  // namespace

VectorField model_field(const KernelModel& model) {
  return [model](const State& x, double) { return evaluate_field(model, x); };
}

EvalReport one_step_errors(const KernelModel& model, const TimeSeries& ts) {
  validate_timeseries(ts);
  check_dims(model, ts);
  const IncrementSet inc = extract_increments(ts);
  const Eigen::VectorXd& stds = model.scaler.stds();

  double sum_sq = 0.0;
  double max_err = 0.0;
  for (std::size_t i = 0; i < inc.size(); ++i) {
    const State f = evaluate_field(model, inc.base_points[i]);
    const State pred = inc.base_points[i] + inc.deltas_t[i] * f;
    const double err =
        (ts.states[i + 1] - pred).cwiseQuotient(stds).norm();
    sum_sq += err * err;
    if (err > max_err) max_err = err;
  }

  EvalReport report;
  report.one_step_rmse = std::sqrt(sum_sq / static_cast<double>(inc.size()));
  report.one_step_max = max_err;
  report.horizon = ts.times.back() - ts.times.front();
  report.n_points = ts.size();
  return report;
}

double trajectory_rmse(const KernelModel& model, const TimeSeries& ts,
                       Solver solver, double dt_int) {
  validate_timeseries(ts);
  check_dims(model, ts);
  if (!(dt_int > 0.0) || !std::isfinite(dt_int)) {
    throw Error(ErrorKind::InvalidConfig, "integration step must be positive");
  }
  const VectorField field = model_field(model);
  const Eigen::VectorXd& stds = model.scaler.stds();

  // Integrate segment by segment between observation times; each segment's
  // final (shortened) step lands exactly on the next observation, so the
  // metric never interpolates.
  State x = ts.states.front();
  double sum_sq = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const Trajectory seg =
        integrate(field, x, ts.times[i - 1], ts.times[i], dt_int, solver);
    x = seg.states.back();
    const double dist = (x - ts.states[i]).cwiseQuotient(stds).norm();
    sum_sq += dist * dist;
  }
  return std::sqrt(sum_sq / static_cast<double>(ts.size() - 1));
}

EvalReport evaluate(const KernelModel& model, const TimeSeries& ts,
                    Solver solver, double dt_int) {
  EvalReport report = one_step_errors(model, ts);
  report.trajectory_rmse = trajectory_rmse(model, ts, solver, dt_int);
  return report;
}

std::vector<Trajectory> phase_portrait(const KernelModel& model,
                                       const PortraitBounds& bounds, int grid,
                                       double horizon, double dt,
                                       Solver solver) {
  if (model.dim() != 2) {
    throw Error(ErrorKind::UnsupportedDimension,
                "phase portraits are 2-d; model has dimension " +
                    std::to_string(model.dim()));
  }
  if (grid < 2) {
    throw Error(ErrorKind::BadCount, "grid must be at least 2 per dimension");
  }
  const bool bounds_ok = std::isfinite(bounds.xmin) && std::isfinite(bounds.xmax) &&
                         std::isfinite(bounds.ymin) && std::isfinite(bounds.ymax) &&
                         bounds.xmax > bounds.xmin && bounds.ymax > bounds.ymin;
  if (!bounds_ok) {
    throw Error(ErrorKind::InvalidConfig, "need finite bounds with max > min");
  }
  if (!(horizon > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "need positive horizon and step");
  }

  const VectorField field = model_field(model);
  IntegrateOptions opts;
  opts.truncate_on_divergence = true;

  const auto lattice = [grid](double lo, double hi, int i) {
    // Endpoints are the exact bounds, not lo + (grid-1) * step.
    if (i == 0) return lo;
    if (i == grid - 1) return hi;
    return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(grid - 1);
  };

  std::vector<Trajectory> portrait;
  portrait.reserve(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
  for (int ix = 0; ix < grid; ++ix) {
    for (int iy = 0; iy < grid; ++iy) {
      State x0(2);
      x0[0] = lattice(bounds.xmin, bounds.xmax, ix);
      x0[1] = lattice(bounds.ymin, bounds.ymax, iy);
      portrait.push_back(integrate(field, x0, 0.0, horizon, dt, solver, opts));
    }
  }
  return portrait;
}

}  // namespace kode
