#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "test_support.hpp"

using kode::ErrorKind;
using kode::StandardScaler;
using kode::State;
using kode::TimeSeries;

TEST_CASE("validate accepts a well-formed series and returns it unchanged") {
  const TimeSeries ts = series({0.0, 1.0, 2.0}, {{0.0}, {1.0}, {2.0}});
  const TimeSeries& ret = kode::validate_timeseries(ts);
  CHECK(&ret == &ts);
  CHECK(ts.size() == 3);
  CHECK(ts.dim() == 1);
}

TEST_CASE("validate rejects repeated and decreasing time stamps") {
  const TimeSeries repeated = series({0.0, 1.0, 1.0}, {{0.0}, {1.0}, {2.0}});
  CHECK(thrown_kind([&] { kode::validate_timeseries(repeated); }) ==
        ErrorKind::NonMonotonicTime);

  const TimeSeries decreasing = series({0.0, 2.0, 1.0}, {{0.0}, {1.0}, {2.0}});
  CHECK(thrown_kind([&] { kode::validate_timeseries(decreasing); }) ==
        ErrorKind::NonMonotonicTime);
}

TEST_CASE("validate rejects mixed state dimensions") {
  TimeSeries ts;
  ts.times = {0.0, 1.0};
  ts.states = {vec({1.0, 2.0}), vec({1.0})};
  CHECK(thrown_kind([&] { kode::validate_timeseries(ts); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("validate rejects times/states length mismatch") {
  TimeSeries ts;
  ts.times = {0.0, 1.0, 2.0};
  ts.states = {vec({1.0}), vec({2.0})};
  CHECK(thrown_kind([&] { kode::validate_timeseries(ts); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("validate rejects series with fewer than two samples") {
  const TimeSeries one = series({0.0}, {{1.0}});
  CHECK(thrown_kind([&] { kode::validate_timeseries(one); }) ==
        ErrorKind::TooShort);

  const TimeSeries empty;
  CHECK(thrown_kind([&] { kode::validate_timeseries(empty); }) ==
        ErrorKind::TooShort);
}

TEST_CASE("validate rejects non-finite entries") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();

  const TimeSeries bad_time = series({0.0, nan}, {{1.0}, {2.0}});
  CHECK(thrown_kind([&] { kode::validate_timeseries(bad_time); }) ==
        ErrorKind::NonFiniteValue);

  const TimeSeries bad_state = series({0.0, 1.0}, {{1.0}, {inf}});
  CHECK(thrown_kind([&] { kode::validate_timeseries(bad_state); }) ==
        ErrorKind::NonFiniteValue);
}

TEST_CASE("increments of a single step") {
  const TimeSeries ts = series({0.0, 0.5}, {{1.0}, {2.0}});
  const kode::IncrementSet inc = kode::extract_increments(ts);
  REQUIRE(inc.size() == 1);
  CHECK(inc.base_points[0](0) == 1.0);
  CHECK(inc.deltas_x[0](0) == 1.0);
  CHECK(inc.deltas_t[0] == 0.5);
  CHECK(inc.velocity_targets[0](0) == 2.0);
}

TEST_CASE("increments honor non-uniform time gaps") {
  const TimeSeries ts = series({0.0, 1.0, 3.0}, {{0.0}, {1.0}, {5.0}});
  const kode::IncrementSet inc = kode::extract_increments(ts);
  REQUIRE(inc.size() == 2);
  CHECK(inc.deltas_t[0] == 1.0);
  CHECK(inc.deltas_t[1] == 2.0);
  CHECK(inc.deltas_x[0](0) == 1.0);
  CHECK(inc.deltas_x[1](0) == 4.0);
  CHECK(inc.velocity_targets[0](0) == 1.0);
  CHECK(inc.velocity_targets[1](0) == 2.0);
}

TEST_CASE("increments of a constant series are all zero") {
  const TimeSeries ts =
      series({0.0, 1.0, 2.0}, {{3.0, -1.0}, {3.0, -1.0}, {3.0, -1.0}});
  const kode::IncrementSet inc = kode::extract_increments(ts);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    CHECK(inc.deltas_x[i].norm() == 0.0);
    CHECK(inc.velocity_targets[i].norm() == 0.0);
  }
}

TEST_CASE("states can be reconstructed by accumulating increments") {
  std::mt19937_64 rng(7);
  TimeSeries ts;
  double t = 0.0;
  State x = oracle::random_vector(rng, 3, -2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    ts.times.push_back(t);
    ts.states.push_back(x);
    t += oracle::uniform(rng, 0.05, 0.3);
    x += oracle::random_vector(rng, 3, -0.1, 0.1);
  }
  const kode::IncrementSet inc = kode::extract_increments(ts);
  State acc = ts.states.front();
  for (std::size_t i = 0; i < inc.size(); ++i) {
    acc += inc.deltas_x[i];
    CHECK((acc - ts.states[i + 1]).norm() < 1e-12);
  }
}

TEST_CASE("increments are invariant under a constant time offset") {
  const TimeSeries base =
      series({0.0, 1.0, 3.0, 4.0}, {{0.0}, {2.0}, {1.0}, {5.0}});
  TimeSeries shifted = base;
  for (double& t : shifted.times) t += 1000.0;  // exactly representable shift

  const kode::IncrementSet a = kode::extract_increments(base);
  const kode::IncrementSet b = kode::extract_increments(shifted);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.deltas_t[i] == b.deltas_t[i]);
    CHECK((a.deltas_x[i] - b.deltas_x[i]).norm() == 0.0);
    CHECK((a.velocity_targets[i] - b.velocity_targets[i]).norm() == 0.0);
  }
}

TEST_CASE("scaler uses population statistics") {
  SUBCASE("two points") {
    const StandardScaler sc = StandardScaler::fit({vec({0.0}), vec({2.0})});
    CHECK(sc.means()(0) == 1.0);
    CHECK(sc.stds()(0) == 1.0);  // population: sqrt((1 + 1) / 2)
  }
  SUBCASE("three points") {
    const StandardScaler sc =
        StandardScaler::fit({vec({0.0}), vec({1.0}), vec({2.0})});
    CHECK(sc.means()(0) == doctest::Approx(1.0).epsilon(1e-15));
    // population sqrt(2/3), not the sample value 1.0
    CHECK(sc.stds()(0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  }
}

TEST_CASE("scaler matches independently computed moments") {
  std::mt19937_64 rng(11);
  std::vector<State> states;
  for (int i = 0; i < 40; ++i)
    states.push_back(oracle::random_vector(rng, 4, -5.0, 9.0));
  const StandardScaler sc = StandardScaler::fit(states);
  const oracle::Moments m = oracle::population_moments(states);
  CHECK((sc.means() - m.means).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sc.stds() - m.stds).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scaler apply/invert round-trips") {
  std::mt19937_64 rng(13);
  std::vector<State> states;
  for (int i = 0; i < 25; ++i)
    states.push_back(oracle::random_vector(rng, 3, -10.0, 10.0));
  const StandardScaler sc = StandardScaler::fit(states);
  for (const State& x : states) {
    const State back = sc.invert(sc.apply(x));
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
  }
  // standardized data has zero mean and unit variance (population)
  std::vector<State> z;
  for (const State& x : states) z.push_back(sc.apply(x));
  const oracle::Moments m = oracle::population_moments(z);
  CHECK(m.means.cwiseAbs().maxCoeff() < 1e-12);
  CHECK((m.stds - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scaler rejects constant dimensions") {
  CHECK(thrown_kind([] {
          StandardScaler::fit({vec({1.0, 5.0}), vec({2.0, 5.0})});
        }) == ErrorKind::ZeroVariance);
  CHECK(thrown_kind([] { StandardScaler(vec({0.0}), vec({0.0})); }) ==
        ErrorKind::ZeroVariance);
  CHECK(thrown_kind([] { StandardScaler(vec({0.0}), vec({-1.0})); }) ==
        ErrorKind::ZeroVariance);
}

TEST_CASE("scaler rejects mismatched dimensions") {
  const StandardScaler sc = StandardScaler::fit({vec({0.0}), vec({2.0})});
  CHECK(thrown_kind([&] { sc.apply(vec({1.0, 2.0})); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(thrown_kind([&] { sc.invert(vec({1.0, 2.0})); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(thrown_kind([] { StandardScaler(vec({0.0, 1.0}), vec({1.0})); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("velocities unscale by the standard deviation only") {
  const StandardScaler sc(vec({10.0, -4.0}), vec({2.0, 3.0}));
  const State v = sc.unscale_velocity(vec({1.0, 1.0}));
  CHECK(v(0) == 2.0);
  CHECK(v(1) == 3.0);
  // consistency with apply: velocities transform without the mean shift
  const State z1 = sc.apply(vec({0.0, 0.0}));
  const State z2 = sc.apply(vec({2.0, 3.0}));
  CHECK((sc.unscale_velocity(z2 - z1) - vec({2.0, 3.0})).norm() < 1e-12);
}
