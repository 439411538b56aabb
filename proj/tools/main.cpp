// kode: learn a vector field from a sampled trajectory, then integrate it.
//
// Subcommands: simulate (reference systems), fit (batch/online kernel ridge),
// forecast (integrate a fitted model), eval (one-step + trajectory metrics),
// portrait (lattice of initial conditions), covid (cumulative counts to
// S/I/R compartments). Exit codes: 0 success, 2 usage/validation, 3
// divergence, 4 fit failure.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "format.hpp"
#include "kode/data.hpp"
#include "kode/dynamics.hpp"
#include "kode/eval.hpp"
#include "kode/regression.hpp"
#include "output.hpp"

namespace {

using namespace kode;

struct GlobalOpts {
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string output;
};

std::filesystem::path required_output(const GlobalOpts& g) {
  if (g.output.empty()) {
    throw Error(ErrorKind::InvalidConfig, "--output is required for this command");
  }
  return g.output;
}

State to_state(const std::vector<double>& values) {
  State x(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = values[i];
  }
  return x;
}

double parse_real_token(const std::string& tok, const std::string& flag) {
  std::string s = tok;
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() ||
      !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidConfig,
                flag + ": '" + tok + "' is not a finite real");
  }
  return v;
}

State parse_state_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    values.push_back(parse_real_token(tok, flag));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return to_state(values);
}

Solver parse_solver(const std::string& name) {
  return name == "euler" ? Solver::euler : Solver::rk4;
}

// Maps library errors to the contract's exit codes. Divergence during a fit
// is a fit failure (4), not a forecasting divergence (3).
int guarded(bool fitting, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "kode: error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::SingularSystem) return 4;
    if (e.kind() == ErrorKind::Diverged) return fitting ? 4 : 3;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kode: error: Internal: " << e.what() << '\n';
    return 1;
  }
}

// ---- simulate ---------------------------------------------------------------

struct SimOpts {
  int samples = 0;
  double dt = 0.0;
  std::vector<double> x0;
  double t0 = 0.0;
  int subsample = 0;
};

void add_sim_flags(CLI::App* sub, SimOpts& o) {
  sub->add_option("--samples", o.samples, "number of samples to generate")
      ->required()
      ->check(CLI::Range(2, 1 << 26));
  sub->add_option("--dt", o.dt, "sampling step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--x0", o.x0, "initial state, comma-separated")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--t0", o.t0, "start time")->capture_default_str();
  sub->add_option("--subsample", o.subsample,
                  "keep only this many samples, drawn without replacement "
                  "using --seed; the first sample is always kept");
}

int run_simulate(const SystemParams& params, const SimOpts& o,
                 const std::vector<std::string>& names, const GlobalOpts& g) {
  TimeSeries ts = simulate(params, to_state(o.x0), o.t0, o.samples, o.dt);
  if (o.subsample != 0) {
    if (o.subsample < 0) {
      throw Error(ErrorKind::BadCount, "--subsample must be positive");
    }
    ts = subsample_nonuniform(ts, static_cast<std::size_t>(o.subsample), g.seed);
  }
  cli::write_series(ts.times, ts.states, names, cli::parse_format(g.format),
                    required_output(g));
  return 0;
}

// ---- fit --------------------------------------------------------------------

struct FitOpts {
  std::string input;
  std::string model_out;
  std::string bandwidth = "auto";
  double lambda = 1e-6;
  std::string mode = "batch";
  std::string weighting = "velocity";
  int passes = 200;
  double eta = 0.1;
  double tolerance = 0.0;
};

int run_fit(const FitOpts& o) {
  TimeSeries ts = load_timeseries_csv(o.input);
  FitConfig cfg;
  if (o.bandwidth != "auto") {
    cfg.bandwidth = parse_real_token(o.bandwidth, "--bandwidth");
  }
  cfg.lambda = o.lambda;
  cfg.weighting =
      o.weighting == "increment" ? Weighting::increment : Weighting::velocity;
  cfg.online.passes = o.passes;
  cfg.online.learning_rate = o.eta;
  cfg.online.tolerance = o.tolerance;

  const KernelModel model =
      o.mode == "online" ? fit_online(ts, cfg) : fit_batch(ts, cfg);
  save_model(model, o.model_out);

  const EvalReport report = one_step_errors(model, ts);
  std::cout << "n=" << ts.size() << " dim=" << model.dim()
            << " bandwidth=" << cli::format_double(model.bandwidth)
            << " lambda=" << cli::format_double(model.lambda)
            << " mode=" << o.mode << " weighting=" << o.weighting
            << " one_step_rmse=" << cli::format_double(report.one_step_rmse)
            << '\n';
  return 0;
}

// ---- forecast ---------------------------------------------------------------

struct ForecastOpts {
  std::string model;
  std::string data;
  std::string x0 = "first";
  std::string solver = "rk4";
  double dt = 0.0;
  std::optional<double> t0;
  std::optional<double> t1;
};

int run_forecast(const ForecastOpts& o, const GlobalOpts& g) {
  const KernelModel model = load_model(o.model);
  std::vector<std::string> names = cli::numbered_names(model.dim());

  std::optional<TimeSeries> data;
  if (!o.data.empty()) {
    std::vector<std::string> loaded;
    data = load_timeseries_csv(o.data, &loaded);
    if (data->dim() == model.dim()) names = loaded;
  }

  State x0;
  if (o.x0 == "first") {
    if (!data) {
      throw Error(ErrorKind::InvalidConfig,
                  "--x0 first requires --data to read the first element from");
    }
    x0 = data->states.front();
  } else {
    x0 = parse_state_list(o.x0, "--x0");
  }

  const double t0 = o.t0 ? *o.t0 : (data ? data->times.front() : 0.0);
  if (!o.t1 && !data) {
    throw Error(ErrorKind::InvalidConfig, "need --t1 (or --data for its window)");
  }
  const double t1 = o.t1 ? *o.t1 : data->times.back();

  IntegrateOptions opts;
  opts.truncate_on_divergence = true;
  const Trajectory traj = integrate(model_field(model), x0, t0, t1, o.dt,
                                    parse_solver(o.solver), opts);
  cli::write_series(traj.times, traj.states, names, cli::parse_format(g.format),
                    required_output(g));
  if (traj.diverged) {
    std::cerr << "kode: error: Diverged: forecast truncated at t = "
              << cli::format_double(traj.times.back())
              << "; partial trajectory written\n";
    return 3;
  }
  return 0;
}

// ---- eval -------------------------------------------------------------------

struct EvalOpts {
  std::string model;
  std::string data;
  std::string solver = "rk4";
  double dt = 0.0;
};

int run_eval(const EvalOpts& o, const GlobalOpts& g) {
  const KernelModel model = load_model(o.model);
  const TimeSeries ts = load_timeseries_csv(o.data);
  const EvalReport report = evaluate(model, ts, parse_solver(o.solver), o.dt);
  std::cout << cli::report_line(report) << '\n';
  if (!g.output.empty()) {
    cli::write_report(report, cli::parse_format(g.format), g.output);
  }
  return 0;
}

// ---- portrait ---------------------------------------------------------------

struct PortraitOpts {
  std::string model;
  std::string solver = "rk4";
  std::vector<double> bounds;
  int grid = 0;
  double horizon = 0.0;
  double dt = 0.0;
};

int run_portrait(const PortraitOpts& o, const GlobalOpts& g) {
  const KernelModel model = load_model(o.model);
  const PortraitBounds bounds{o.bounds[0], o.bounds[1], o.bounds[2], o.bounds[3]};
  const std::vector<Trajectory> portrait = phase_portrait(
      model, bounds, o.grid, o.horizon, o.dt, parse_solver(o.solver));
  cli::write_portrait(portrait, cli::parse_format(g.format), required_output(g));
  return 0;
}

// ---- covid ------------------------------------------------------------------

struct CovidOpts {
  std::string input;
  long long population = 0;
};

int run_covid(const CovidOpts& o, const GlobalOpts& g) {
  const std::vector<EpidemicRecord> records = load_epidemic_csv(o.input);
  const TimeSeries ts = transform_covid(records, o.population);
  cli::write_series(ts.times, ts.states, {"S", "I", "R"},
                    cli::parse_format(g.format), required_output(g));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn a dynamical system from a sampled trajectory via kernel "
               "ridge regression on increments, then integrate the learned "
               "field to forecast and draw phase portraits."};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for the subsampling RNG")
      ->capture_default_str();
  app.add_option("--format", g.format, "output file format")
      ->check(CLI::IsMember({"csv", "json-lines"}))
      ->capture_default_str();
  app.add_option("--output", g.output, "output file path");

  // simulate: one nested subcommand per reference system so each can carry
  // its own parameter flags and defaults (visible in --help).
  auto* sim = app.add_subcommand("simulate", "generate training data from a reference system");
  sim->require_subcommand(1);
  sim->fallthrough();

  PlanarLinearParams lin_params;
  SimOpts lin_opts{/*samples=*/0, /*dt=*/0.01, /*x0=*/{2.0, 0.0}};
  auto* lin = sim->add_subcommand("linear", "planar linear system: dx = alpha x + beta y, dy = gamma x + delta y");
  lin->fallthrough();
  lin->add_option("--alpha", lin_params.alpha)->capture_default_str();
  lin->add_option("--beta", lin_params.beta)->capture_default_str();
  lin->add_option("--gamma", lin_params.gamma)->capture_default_str();
  lin->add_option("--delta", lin_params.delta)->capture_default_str();
  add_sim_flags(lin, lin_opts);

  LotkaVolterraParams lv_params;
  SimOpts lv_opts{0, 0.5, {20.0, 10.0}};
  auto* lv = sim->add_subcommand("lotka", "predator-prey: dx = alpha x - beta x y, dy = delta x y - gamma y");
  lv->fallthrough();
  lv->add_option("--alpha", lv_params.alpha)->capture_default_str();
  lv->add_option("--beta", lv_params.beta)->capture_default_str();
  lv->add_option("--delta", lv_params.delta)->capture_default_str();
  lv->add_option("--gamma", lv_params.gamma)->capture_default_str();
  add_sim_flags(lv, lv_opts);

  SirParams sir_params;
  SimOpts sir_opts{0, 0.5, {0.99, 0.01, 0.0}};
  auto* sir = sim->add_subcommand("sir", "epidemic compartments: dS = -alpha S I, dI = alpha S I - beta I, dR = beta I - gamma I");
  sir->fallthrough();
  sir->add_option("--alpha", sir_params.alpha)->capture_default_str();
  sir->add_option("--beta", sir_params.beta)->capture_default_str();
  sir->add_option("--gamma", sir_params.gamma)->capture_default_str();
  add_sim_flags(sir, sir_opts);

  ChuaParams chua_params;
  SimOpts chua_opts{0, 0.01, {0.1, 0.0, 0.0}};
  auto* chua = sim->add_subcommand("chua", "Chua's circuit (double-scroll chaotic attractor)");
  chua->fallthrough();
  chua->add_option("--alpha", chua_params.alpha)->capture_default_str();
  chua->add_option("--beta", chua_params.beta)->capture_default_str();
  chua->add_option("--gamma", chua_params.gamma)->capture_default_str();
  chua->add_option("--m0", chua_params.m0)->capture_default_str();
  chua->add_option("--m1", chua_params.m1)->capture_default_str();
  add_sim_flags(chua, chua_opts);

  FitOpts fit_opts;
  auto* fit = app.add_subcommand("fit", "fit a kernel model to a time-series file");
  fit->fallthrough();
  fit->add_option("--input", fit_opts.input, "training time-series CSV")->required();
  fit->add_option("--bandwidth", fit_opts.bandwidth,
                  "kernel bandwidth: 'auto' (median heuristic) or a positive real")
      ->capture_default_str();
  fit->add_option("--lambda", fit_opts.lambda, "ridge strength")->capture_default_str();
  fit->add_option("--mode", fit_opts.mode, "solver: closed-form or iterative sweeps")
      ->check(CLI::IsMember({"batch", "online"}))
      ->capture_default_str();
  fit->add_option("--weighting", fit_opts.weighting,
                  "residual weighting in the objective")
      ->check(CLI::IsMember({"velocity", "increment"}))
      ->capture_default_str();
  fit->add_option("--passes", fit_opts.passes, "online: maximum sweeps")
      ->capture_default_str();
  fit->add_option("--eta", fit_opts.eta, "online: learning rate")
      ->capture_default_str();
  fit->add_option("--tolerance", fit_opts.tolerance,
                  "online: stop once the worst one-step error in a sweep is below this")
      ->capture_default_str();
  fit->add_option("--model-out", fit_opts.model_out, "where to write the model file")
      ->required();

  ForecastOpts fc_opts;
  auto* fc = app.add_subcommand("forecast", "integrate a fitted model over a time window");
  fc->fallthrough();
  fc->add_option("--model", fc_opts.model, "model file from fit")->required();
  fc->add_option("--data", fc_opts.data,
                 "time-series file supplying the initial condition and default window");
  fc->add_option("--x0", fc_opts.x0,
                 "'first' (first element of --data) or a comma-separated state")
      ->capture_default_str();
  fc->add_option("--t0", fc_opts.t0, "start time (default: first time in --data, else 0)");
  fc->add_option("--t1", fc_opts.t1, "end time (default: last time in --data)");
  fc->add_option("--dt", fc_opts.dt, "integration step")
      ->required()
      ->check(CLI::PositiveNumber);
  fc->add_option("--solver", fc_opts.solver)
      ->check(CLI::IsMember({"euler", "rk4"}))
      ->capture_default_str();

  EvalOpts eval_opts;
  auto* ev = app.add_subcommand("eval", "one-step and trajectory errors of a model on a data file");
  ev->fallthrough();
  ev->add_option("--model", eval_opts.model)->required();
  ev->add_option("--data", eval_opts.data)->required();
  ev->add_option("--solver", eval_opts.solver)
      ->check(CLI::IsMember({"euler", "rk4"}))
      ->capture_default_str();
  ev->add_option("--dt", eval_opts.dt, "integration step for the trajectory metric")
      ->required()
      ->check(CLI::PositiveNumber);

  PortraitOpts po_opts;
  auto* po = app.add_subcommand("portrait", "integrate a lattice of initial conditions (2-d models)");
  po->fallthrough();
  po->add_option("--model", po_opts.model)->required();
  po->add_option("--bounds", po_opts.bounds, "lattice bounds: xmin,xmax,ymin,ymax")
      ->required()
      ->delimiter(',')
      ->expected(4);
  po->add_option("--grid", po_opts.grid, "lattice points per dimension")->required();
  po->add_option("--horizon", po_opts.horizon, "integration horizon")
      ->required()
      ->check(CLI::PositiveNumber);
  po->add_option("--dt", po_opts.dt, "integration step")
      ->required()
      ->check(CLI::PositiveNumber);
  po->add_option("--solver", po_opts.solver)
      ->check(CLI::IsMember({"euler", "rk4"}))
      ->capture_default_str();

  CovidOpts covid_opts;
  auto* cv = app.add_subcommand("covid", "turn cumulative epidemic counts into an S,I,R series");
  cv->fallthrough();
  cv->add_option("--input", covid_opts.input, "CSV: date,confirmed,recovered,deaths")
      ->required();
  cv->add_option("--population", covid_opts.population, "total population Np")
      ->required()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (lin->parsed()) {
    return guarded(false, [&] { return run_simulate(lin_params, lin_opts, {"x", "y"}, g); });
  }
  if (lv->parsed()) {
    return guarded(false, [&] { return run_simulate(lv_params, lv_opts, {"x", "y"}, g); });
  }
  if (sir->parsed()) {
    return guarded(false, [&] { return run_simulate(sir_params, sir_opts, {"S", "I", "R"}, g); });
  }
  if (chua->parsed()) {
    return guarded(false, [&] { return run_simulate(chua_params, chua_opts, {"x", "y", "z"}, g); });
  }
  if (fit->parsed()) {
    return guarded(true, [&] { return run_fit(fit_opts); });
  }
  if (fc->parsed()) {
    return guarded(false, [&] { return run_forecast(fc_opts, g); });
  }
  if (ev->parsed()) {
    return guarded(false, [&] { return run_eval(eval_opts, g); });
  }
  if (po->parsed()) {
    return guarded(false, [&] { return run_portrait(po_opts, g); });
  }
  if (cv->parsed()) {
    return guarded(false, [&] { return run_covid(covid_opts, g); });
  }
  return 0;
}
