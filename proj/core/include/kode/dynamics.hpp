#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "kode/core.hpp"

namespace kode {

// Right-hand side of dx/dt = f(x, t). All built-in systems are autonomous and
// ignore t; learned fields wrap evaluate_field the same way.
using VectorField = std::function<State(const State&, double)>;

enum class Solver { euler, rk4 };

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  Solver solver = Solver::rk4;
  double step = 0.0;      // requested step size
  bool diverged = false;  // hit the divergence guard and was truncated

  std::size_t size() const { return times.size(); }
};

struct IntegrateOptions {
  // Abort once |x| exceeds this; learned fields integrated outside the data
  // region can blow up.
  double divergence_bound = 1e12;
  // When true, a divergent trajectory is truncated and flagged instead of
  // throwing. Used by phase portraits and forecast output.
  bool truncate_on_divergence = false;
};

// x + dt f(x, t): one explicit Euler step.
State euler_step(const VectorField& field, const State& x, double t, double dt);

// One classical 4th-order Runge-Kutta step (weights 1/6, 1/3, 1/3, 1/6).
State rk4_step(const VectorField& field, const State& x, double t, double dt);

// Fixed-step integration from t0 to t1. Interior steps have size dt; the
// final step is shortened to land exactly on t1, so the trajectory has
// ceil((t1-t0)/dt) + 1 states including both endpoints.
Trajectory integrate(const VectorField& field, const State& x0, double t0,
                     double t1, double dt, Solver solver,
                     const IntegrateOptions& opts = {});

// --- reference systems ------------------------------------------------------

// dx = alpha x + beta y, dy = gamma x + delta y.
struct PlanarLinearParams {
  double alpha = 1.0;
  double beta = 4.0;
  double gamma = -2.0;
  double delta = 2.0;
};

// Predator-prey: dx = alpha x - beta x y, dy = delta x y - gamma y.
// Coexistence fixed point at (gamma/delta, alpha/beta).
struct LotkaVolterraParams {
  double alpha = 0.1;
  double beta = 0.02;
  double delta = 0.01;
  double gamma = 0.3;
};

// Compartmental epidemic model on (S, I, R):
// dS = -alpha S I, dI = alpha S I - beta I, dR = beta I - gamma I.
// gamma defaults to 0, which recovers the standard SIR model and makes
// S + I + R a conserved quantity.
struct SirParams {
  double alpha = 0.3;
  double beta = 0.1;
  double gamma = 0.0;
};

// Chua's circuit in dimensionless form:
// dx = alpha (y - x - f(x)), dy = x - y + z, dz = -beta y - gamma z,
// with the piecewise-linear diode f(x) = 0.5 (|x+1| - |x-1|)(m0 - m1) + m1 x.
// Defaults are a classic double-scroll parameter set.
struct ChuaParams {
  double alpha = 9.35159085;
  double beta = 14.790319805;
  double gamma = 0.016073965;
  double m0 = -1.138411196;
  double m1 = -0.722451121;
};

using SystemParams = std::variant<PlanarLinearParams, LotkaVolterraParams,
                                  SirParams, ChuaParams>;

// State dimension the system expects (2 for linear/predator-prey, 3 for
// SIR/Chua).
Eigen::Index system_dim(const SystemParams& system);

// Chua's diode nonlinearity; continuous and piecewise linear.
double chua_nonlinearity(double x, double m0, double m1);

// The exact right-hand side of the chosen system as a reusable closure.
VectorField reference_field(const SystemParams& system);

// Generates training data: RK4 integration sampled at a uniform dt,
// M points starting at (t0, x0). Throws Diverged rather than returning a
// partial series.
TimeSeries simulate(const SystemParams& system, const State& x0, double t0,
                    int samples, double dt);

}  // namespace kode
