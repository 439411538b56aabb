#include "kode/dynamics.hpp"

#include <cmath>
#include <string>

namespace kode {

namespace {

void check_step_inputs(const State& x, double t, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::InvalidConfig, "step size must be positive and finite");
  }
  if (!std::isfinite(t)) {
    throw Error(ErrorKind::NonFiniteValue, "time stamp is not finite");
  }
  if (!x.allFinite()) {
    throw Error(ErrorKind::NonFiniteValue, "state has a non-finite entry");
  }
}

State checked_result(State x) {
  if (!x.allFinite()) {
    throw Error(ErrorKind::NonFiniteValue,
                "vector field produced a non-finite value");
  }
  return x;
}

void check_planar(const State& x) {
  if (x.size() != 2) {
    throw Error(ErrorKind::DimensionMismatch,
                "system expects dimension 2, got " + std::to_string(x.size()));
  }
}

void check_triple(const State& x) {
  if (x.size() != 3) {
    throw Error(ErrorKind::DimensionMismatch,
                "system expects dimension 3, got " + std::to_string(x.size()));
  }
}

}  // namespace

State euler_step(const VectorField& field, const State& x, double t, double dt) {
  check_step_inputs(x, t, dt);
  return checked_result(x + dt * field(x, t));
}

State rk4_step(const VectorField& field, const State& x, double t, double dt) {
  check_step_inputs(x, t, dt);
  const State k1 = field(x, t);
  const State k2 = field(x + 0.5 * dt * k1, t + 0.5 * dt);
  const State k3 = field(x + 0.5 * dt * k2, t + 0.5 * dt);
  const State k4 = field(x + dt * k3, t + dt);
  return checked_result(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

Trajectory integrate(const VectorField& field, const State& x0, double t0,
                     double t1, double dt, Solver solver,
                     const IntegrateOptions& opts) {
  if (!(t1 > t0)) {
    throw Error(ErrorKind::InvalidConfig, "need t1 > t0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::InvalidConfig, "step size must be positive and finite");
  }
  if (!x0.allFinite()) {
    throw Error(ErrorKind::NonFiniteValue, "initial state has a non-finite entry");
  }

  // Number of steps: one per full dt, plus a shortened final step onto t1.
  // The small slack keeps an exactly-divisible span from picking up a
  // spurious ~0-length extra step through floating-point noise.
  const double ratio = (t1 - t0) / dt;
  long n_steps = static_cast<long>(std::ceil(ratio - 1e-9));
  if (n_steps < 1) n_steps = 1;

  Trajectory traj;
  traj.solver = solver;
  traj.step = dt;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.times.push_back(t0);
  traj.states.push_back(x0);

  State x = x0;
  double t = t0;
  for (long k = 0; k < n_steps; ++k) {
    const double t_next = (k == n_steps - 1) ? t1 : t0 + static_cast<double>(k + 1) * dt;
    const double h = t_next - t;
    x = (solver == Solver::euler) ? euler_step(field, x, t, h)
                                  : rk4_step(field, x, t, h);
    if (!x.allFinite() || x.norm() > opts.divergence_bound) {
      if (opts.truncate_on_divergence) {
        traj.diverged = true;
        return traj;
      }
      throw Error(ErrorKind::Diverged,
                  "state norm exceeded " + std::to_string(opts.divergence_bound) +
                      " at t = " + std::to_string(t_next));
    }
    t = t_next;
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

Eigen::Index system_dim(const SystemParams& system) {
  return std::holds_alternative<SirParams>(system) ||
                 std::holds_alternative<ChuaParams>(system)
             ? 3
             : 2;
}

double chua_nonlinearity(double x, double m0, double m1) {
  return 0.5 * (std::abs(x + 1.0) - std::abs(x - 1.0)) * (m0 - m1) + m1 * x;
}

VectorField reference_field(const SystemParams& system) {
  if (const auto* p = std::get_if<PlanarLinearParams>(&system)) {
    const PlanarLinearParams q = *p;
    return [q](const State& x, double) -> State {
      check_planar(x);
      State dx(2);
      dx[0] = q.alpha * x[0] + q.beta * x[1];
      dx[1] = q.gamma * x[0] + q.delta * x[1];
      return dx;
    };
  }
  if (const auto* p = std::get_if<LotkaVolterraParams>(&system)) {
    const LotkaVolterraParams q = *p;
    return [q](const State& x, double) -> State {
      check_planar(x);
      State dx(2);
      dx[0] = q.alpha * x[0] - q.beta * x[0] * x[1];
      dx[1] = q.delta * x[0] * x[1] - q.gamma * x[1];
      return dx;
    };
  }
  if (const auto* p = std::get_if<SirParams>(&system)) {
    const SirParams q = *p;
    return [q](const State& x, double) -> State {
      check_triple(x);
      State dx(3);
      dx[0] = -q.alpha * x[0] * x[1];
      dx[1] = q.alpha * x[0] * x[1] - q.beta * x[1];
      dx[2] = q.beta * x[1] - q.gamma * x[1];
      return dx;
    };
  }
  const ChuaParams q = std::get<ChuaParams>(system);
  return [q](const State& x, double) -> State {
    check_triple(x);
    State dx(3);
    dx[0] = q.alpha * (x[1] - x[0] - chua_nonlinearity(x[0], q.m0, q.m1));
    dx[1] = x[0] - x[1] + x[2];
    dx[2] = -q.beta * x[1] - q.gamma * x[2];
    return dx;
  };
}

TimeSeries simulate(const SystemParams& system, const State& x0, double t0,
                    int samples, double dt) {
  if (samples < 2) {
    throw Error(ErrorKind::TooShort,
                "need at least 2 samples, got " + std::to_string(samples));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::InvalidConfig, "sampling step must be positive");
  }
  if (x0.size() != system_dim(system)) {
    throw Error(ErrorKind::DimensionMismatch,
                "initial state has dimension " + std::to_string(x0.size()) +
                    ", system expects " + std::to_string(system_dim(system)));
  }

  const VectorField field = reference_field(system);
  TimeSeries ts;
  ts.times.reserve(static_cast<std::size_t>(samples));
  ts.states.reserve(static_cast<std::size_t>(samples));

  State x = x0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    if (i > 0) {
      x = rk4_step(field, x, t0 + static_cast<double>(i - 1) * dt, dt);
      if (x.norm() > 1e12) {
        throw Error(ErrorKind::Diverged,
                    "simulation diverged at sample " + std::to_string(i));
      }
    }
    ts.times.push_back(t);
    ts.states.push_back(x);
  }
  return ts;
}

}  // namespace kode
