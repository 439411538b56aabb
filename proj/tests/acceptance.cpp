// Acceptance gate: each criterion prints exactly one PASS/FAIL line with the
// measured quantities, and the process exits with the number of failures.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <kode/data.hpp>
#include <kode/dynamics.hpp>
#include <kode/eval.hpp>
#include <kode/kernel.hpp>
#include <kode/regression.hpp>

#include "oracles.hpp"

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL")
            << " — " << detail << '\n';
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

kode::State vec2(double a, double b) {
  kode::State v(2);
  v << a, b;
  return v;
}

kode::State vec3(double a, double b, double c) {
  kode::State v(3);
  v << a, b, c;
  return v;
}

// --- 1: closed-form solve against an independent inverse --------------------
void criterion_1() {
  const auto start = Clock::now();
  std::mt19937_64 rng(12345);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);            // 3..10 samples
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 3);  // 1..3
    kode::TimeSeries ts;
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
      ts.times.push_back(t);
      ts.states.push_back(oracle::random_vector(rng, d, -2.0, 2.0));
      t += oracle::uniform(rng, 0.2, 0.5);
    }
    // Moderate ridge strengths keep the weight vector itself well
    // determined, which an entry-wise comparison of two solvers requires;
    // a wrong solve would still miss by many orders of magnitude.
    const double lambdas[3] = {1e-2, 0.1, 1.0};
    kode::FitConfig cfg;
    cfg.lambda = lambdas[trial % 3];
    kode::KernelModel model;
    try {
      model = kode::fit_batch(ts, cfg);
    } catch (const kode::Error&) {
      --trial;  // rare degenerate draw (identical points); redraw
      continue;
    }

    // independent scaler, targets, and inverse
    const oracle::Moments m = oracle::population_moments(ts.states);
    Eigen::MatrixXd targets(n - 1, d);
    for (int i = 0; i + 1 < n; ++i) {
      const Eigen::VectorXd zi = (ts.states[static_cast<std::size_t>(i)] - m.means)
                                     .cwiseQuotient(m.stds);
      const Eigen::VectorXd zn =
          (ts.states[static_cast<std::size_t>(i) + 1] - m.means)
              .cwiseQuotient(m.stds);
      targets.row(i) = ((zn - zi) / (ts.times[static_cast<std::size_t>(i) + 1] -
                                     ts.times[static_cast<std::size_t>(i)]))
                           .transpose();
    }
    const Eigen::MatrixXd want = oracle::ridge_weights(
        model.centers, targets, model.bandwidth, model.lambda);
    worst = std::max(worst, (model.weights - want).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(start);
  report(1, worst <= 1e-8 && elapsed < 1.0,
         "20 random fits vs Gauss-Jordan inverse: max |dC| = " + fmt(worst) +
             " (limit 1e-8), " + fmt(elapsed) + " s (limit 1 s)");
}

// --- 2: near-interpolation at vanishing ridge --------------------------------
void criterion_2() {
  const kode::TimeSeries ts = kode::simulate(kode::PlanarLinearParams{},
                                             vec2(2.0, 0.0), 0.0, 50, 0.02);
  kode::FitConfig cfg;
  cfg.lambda = 1e-12;
  const kode::KernelModel model = kode::fit_batch(ts, cfg);
  const double max_err = kode::one_step_errors(model, ts).one_step_max;
  report(2, max_err <= 1e-5,
         "lambda 1e-12 on 50 distinct samples: max one-step error = " +
             fmt(max_err) + " (limit 1e-5)");
}

// --- 3: solver convergence orders --------------------------------------------
void criterion_3() {
  const auto start = Clock::now();
  const kode::VectorField exp_field = [](const kode::State& x, double) {
    return x;
  };
  kode::State one(1);
  one << 1.0;
  const double exact = std::exp(1.0);

  std::vector<double> euler_err;
  std::vector<double> rk4_err;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    euler_err.push_back(std::abs(kode::integrate(exp_field, one, 0.0, 1.0, dt,
                                                 kode::Solver::euler)
                                     .states.back()(0) -
                                 exact));
    rk4_err.push_back(std::abs(kode::integrate(exp_field, one, 0.0, 1.0, dt,
                                               kode::Solver::rk4)
                                   .states.back()(0) -
                               exact));
  }
  double euler_order = 0.0;
  double rk4_order = 0.0;
  for (std::size_t i = 0; i + 1 < euler_err.size(); ++i) {
    euler_order += std::log2(euler_err[i] / euler_err[i + 1]);
    rk4_order += std::log2(rk4_err[i] / rk4_err[i + 1]);
  }
  euler_order /= 3.0;
  rk4_order /= 3.0;
  const double elapsed = seconds_since(start);
  const bool ok = std::abs(euler_order - 1.0) <= 0.3 &&
                  std::abs(rk4_order - 4.0) <= 0.5 && elapsed < 1.0;
  report(3, ok,
         "observed orders on dx = x: euler " + fmt(euler_order) +
             " (want 1.0±0.3), rk4 " + fmt(rk4_order) + " (want 4.0±0.5), " +
             fmt(elapsed) + " s (limit 1 s)");
}

// --- 4: planar linear benchmark with subsampling robustness ------------------
void criterion_4() {
  const auto start = Clock::now();
  const kode::TimeSeries ts = kode::simulate(kode::PlanarLinearParams{},
                                             vec2(2.0, 0.0), 0.0, 100, 0.01);
  kode::FitConfig cfg;
  cfg.lambda = 1e-3;
  const kode::KernelModel model = kode::fit_batch(ts, cfg);
  const double uniform_rmse =
      kode::trajectory_rmse(model, ts, kode::Solver::rk4, 0.01);

  const kode::TimeSeries sub = kode::subsample_nonuniform(ts, 60, 42);
  const kode::KernelModel sub_model = kode::fit_batch(sub, cfg);
  const double sub_rmse =
      kode::trajectory_rmse(sub_model, sub, kode::Solver::rk4, 0.01);

  const double elapsed = seconds_since(start);
  const bool ok =
      uniform_rmse <= 0.20 && sub_rmse <= 3.0 * uniform_rmse && elapsed < 5.0;
  report(4, ok,
         "linear benchmark: trajectory RMSE " + fmt(uniform_rmse) +
             " (limit 0.20), non-uniform 60/100 RMSE " + fmt(sub_rmse) +
             " (limit 3x = " + fmt(3.0 * uniform_rmse) + "), " + fmt(elapsed) +
             " s (limit 5 s)");
}

// --- 5: predator-prey benchmark and its fixed point --------------------------
void criterion_5() {
  const auto start = Clock::now();
  const kode::TimeSeries ts = kode::simulate(kode::LotkaVolterraParams{},
                                             vec2(20.0, 10.0), 0.0, 500, 0.5);
  const kode::KernelModel model = kode::fit_batch(ts);
  const double rmse = kode::trajectory_rmse(model, ts, kode::Solver::rk4, 0.5);

  // the learned field must be near zero at the coexistence point (30, 5),
  // relative to its typical magnitude along the data
  const double at_fp = kode::evaluate_field(model, vec2(30.0, 5.0)).norm();
  double mean_mag = 0.0;
  for (const kode::State& s : ts.states) {
    mean_mag += kode::evaluate_field(model, s).norm();
  }
  mean_mag /= static_cast<double>(ts.size());
  const double ratio = at_fp / mean_mag;

  const double elapsed = seconds_since(start);
  const bool ok = rmse <= 1.8 && ratio <= 0.10 && elapsed < 30.0;
  report(5, ok,
         "predator-prey 500 samples: trajectory RMSE " + fmt(rmse) +
             " (limit 1.8), |f| at fixed point / mean |f| = " + fmt(ratio) +
             " (limit 0.10), " + fmt(elapsed) + " s (limit 30 s)");
}

// --- 6: epidemic forecast conserves total mass -------------------------------
void criterion_6() {
  const kode::TimeSeries ts = kode::simulate(
      kode::SirParams{}, vec3(0.99, 0.01, 0.0), 0.0, 200, 0.5);
  const kode::KernelModel model = kode::fit_batch(ts);

  const kode::Trajectory fc =
      kode::integrate(kode::model_field(model), ts.states.front(),
                      ts.times.front(), ts.times.back(), 0.5,
                      kode::Solver::rk4);
  const double total0 = fc.states.front().sum();
  double worst = 0.0;
  for (const kode::State& s : fc.states) {
    worst = std::max(worst, std::abs(s.sum() - total0) / total0);
  }
  report(6, worst <= 0.02,
         "SIR forecast over the training window: max relative drift of "
         "S+I+R = " +
             fmt(worst) + " (limit 0.02)");
}

// --- 7: chaotic circuit: tight one-step fit, bounded forecast ----------------
void criterion_7() {
  const kode::TimeSeries ts = kode::simulate(kode::ChuaParams{},
                                             vec3(0.1, 0.0, 0.0), 0.0, 2500,
                                             0.02);
  const kode::KernelModel model = kode::fit_batch(ts);
  const double rmse = kode::one_step_errors(model, ts).one_step_rmse;

  kode::IntegrateOptions opts;
  opts.truncate_on_divergence = true;
  const kode::Trajectory fc =
      kode::integrate(kode::model_field(model), ts.states.front(),
                      ts.times.front(), ts.times.back(), 0.02,
                      kode::Solver::rk4, opts);
  double max_norm = 0.0;
  for (const kode::State& s : fc.states) {
    max_norm = std::max(max_norm, s.norm());
  }
  const bool ok = rmse <= 1.5e-3 && !fc.diverged && max_norm < 20.0;
  report(7, ok,
         "chaotic circuit: one-step RMSE " + fmt(rmse) +
             " (limit 1.5e-3), forecast max |x| = " + fmt(max_norm) +
             " (limit 20, diverged=" + (fc.diverged ? "yes" : "no") + ")");
}

// --- 8: epidemic ledger transform keeps the population identity --------------
void criterion_8() {
  // synthetic 100-day cumulative ledger written to a real file
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("kode_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::filesystem::path csv = dir / "epidemic.csv";

  {
    std::ofstream out(csv, std::ios::binary);
    out << "date,confirmed,recovered,deaths\n";
    int year = 2020;
    int month = 3;
    int day = 1;
    long long confirmed = 10;
    long long recovered = 0;
    long long deaths = 0;
    const auto days_in = [](int y, int m) {
      static const int table[12] = {31, 28, 31, 30, 31, 30,
                                    31, 31, 30, 31, 30, 31};
      if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) return 29;
      return table[m - 1];
    };
    for (int i = 0; i < 100; ++i) {
      confirmed += 1 + (i * 7) % 23;
      recovered += (i * 3) % 11;
      deaths += i % 2;
      if (recovered + deaths > confirmed) recovered = confirmed - deaths;
      char date[48];
      std::snprintf(date, sizeof date, "%04d-%02d-%02d", year, month, day);
      out << date << ',' << confirmed << ',' << recovered << ',' << deaths
          << '\n';
      if (++day > days_in(year, month)) {
        day = 1;
        if (++month > 12) {
          month = 1;
          ++year;
        }
      }
    }
  }

  const long long population = 100000;
  bool ok = true;
  std::string detail;
  try {
    const std::vector<kode::EpidemicRecord> records =
        kode::load_epidemic_csv(csv);
    const kode::TimeSeries ts = kode::transform_covid(records, population);
    ok = ts.size() == 100;
    double worst = 0.0;
    for (const kode::State& s : ts.states) {
      worst = std::max(worst,
                       std::abs(s.sum() - static_cast<double>(population)));
      if (s.sum() != static_cast<double>(population)) ok = false;
    }
    detail = "100-row synthetic ledger: max |S+I+R - N| = " + fmt(worst) +
             " (must be exactly 0)";
  } catch (const kode::Error& e) {
    ok = false;
    detail = std::string("unexpected error: ") + e.what();
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  report(8, ok, detail);
}

// --- 9: the command-line pipeline is deterministic ---------------------------
void criterion_9() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("kode_acceptance9_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);

  const auto run = [&](const std::string& args) {
    const std::string cmd = std::string(KODE_CLI_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool ok = true;
  for (const std::string tag : {"a", "b"}) {
    const std::string data = (dir / (tag + ".csv")).string();
    const std::string model = (dir / (tag + ".json")).string();
    const std::string fc = (dir / (tag + "_fc.csv")).string();
    ok = ok &&
         run("simulate lotka --samples 150 --subsample 50 --seed 7 --output " +
             data) == 0;
    ok = ok && run("fit --input " + data + " --model-out " + model) == 0;
    ok = ok && run("forecast --model " + model + " --data " + data +
                   " --dt 0.5 --output " + fc) == 0;
  }
  const bool same_data = slurp(dir / "a.csv") == slurp(dir / "b.csv");
  const bool same_model = slurp(dir / "a.json") == slurp(dir / "b.json");
  const bool same_fc = slurp(dir / "a_fc.csv") == slurp(dir / "b_fc.csv");
  const bool nonempty = !slurp(dir / "a.json").empty();
  ok = ok && same_data && same_model && same_fc && nonempty;

  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  report(9, ok,
         std::string("two seed-7 simulate/fit/forecast pipelines: data ") +
             (same_data ? "identical" : "DIFFER") + ", model " +
             (same_model ? "identical" : "DIFFER") + ", forecast " +
             (same_fc ? "identical" : "DIFFER"));
}

// --- 10: online refinement approaches the batch solution ---------------------
void criterion_10() {
  const kode::TimeSeries ts = kode::simulate(kode::PlanarLinearParams{},
                                             vec2(2.0, 0.0), 0.0, 100, 0.01);
  kode::FitConfig cfg;
  cfg.lambda = 1e-3;  // online defaults: 200 passes at learning rate 0.1
  const kode::KernelModel batch = kode::fit_batch(ts, cfg);
  const kode::KernelModel online = kode::fit_online(ts, cfg);

  const double batch_max = kode::one_step_errors(batch, ts).one_step_max;
  const double online_max = kode::one_step_errors(online, ts).one_step_max;
  const double ratio = online_max / batch_max;
  report(10, ratio <= 10.0,
         "online vs batch at identical lambda: max one-step error ratio = " +
             fmt(ratio) + " (limit 10)");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << '\n';
  return failures;
}
