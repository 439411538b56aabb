#pragma once

#include <vector>

#include "kode/core.hpp"
#include "kode/dynamics.hpp"

namespace kode {

// Quantitative assessment of a fitted model against a series. All error
// metrics are computed in the model's standardized units, so numbers are
// comparable across systems with very different scales.
struct EvalReport {
  double one_step_rmse = 0.0;
  double one_step_max = 0.0;
  double trajectory_rmse = 0.0;
  double horizon = 0.0;      // observation window t_{N-1} - t_0
  std::size_t n_points = 0;  // observations evaluated
};

// Euler one-step residuals e_i = x_{i+1} - (x_i + dt_i f(x_i)) over all
// increments; fills the one_step_* fields plus horizon/n_points.
EvalReport one_step_errors(const KernelModel& model, const TimeSeries& ts);

// Integrates the model from ts.states[0] across the whole observation
// window with internal step dt_int, splitting steps so the trajectory lands
// exactly on every observation time, and returns the RMSE of the
// standardized distances at those times.
double trajectory_rmse(const KernelModel& model, const TimeSeries& ts,
                       Solver solver, double dt_int);

// One-step and trajectory metrics in a single report.
EvalReport evaluate(const KernelModel& model, const TimeSeries& ts,
                    Solver solver, double dt_int);

struct PortraitBounds {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;
};

// Integrates the learned field from a grid x grid lattice of initial
// conditions over [0, horizon]. The lattice covers the bounds exactly
// (corners included); output is ordered by lattice index, first coordinate
// major. Divergent trajectories are truncated at the guard and flagged, not
// dropped. Defined for 2-d models only, like the figures it feeds.
std::vector<Trajectory> phase_portrait(const KernelModel& model,
                                       const PortraitBounds& bounds, int grid,
                                       double horizon, double dt,
                                       Solver solver = Solver::rk4);

// The learned field wrapped for the integrators. Captures the model by
// value, so the closure stays valid on its own.
VectorField model_field(const KernelModel& model);

}  // namespace kode
