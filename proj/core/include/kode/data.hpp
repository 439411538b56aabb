#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kode/core.hpp"

namespace kode {

// One tidy row of an epidemic CSV: cumulative counts on a calendar date.
struct EpidemicRecord {
  std::string date;      // ISO-8601, as read
  long day = 0;          // days since 1970-01-01, for gap arithmetic
  long long confirmed = 0;
  long long recovered = 0;
  long long deaths = 0;
};

// Reads "t,<name1>,...,<named>" CSV into a validated series. Column order is
// preserved as state dimensions; names are reported through the optional out
// parameter. NaN/Inf tokens are rejected.
TimeSeries load_timeseries_csv(const std::filesystem::path& path,
                               std::vector<std::string>* names = nullptr);

// Reads "date,confirmed,recovered,deaths" CSV with strictly increasing
// ISO-8601 dates and nonnegative integer counts.
std::vector<EpidemicRecord> load_epidemic_csv(const std::filesystem::path& path);

// Cumulative counts to compartments:
//   S = Np - confirmed, I = confirmed - recovered - deaths,
//   R = recovered + deaths,
// so S + I + R = Np holds exactly on every row. Times are days since the
// first record. Inconsistent counts (I < 0) are reported, not clamped.
TimeSeries transform_covid(const std::vector<EpidemicRecord>& records,
                           long long population);

// Reads "year,hare,lynx" CSV of annual counts into a 2-d series.
TimeSeries load_harelynx_csv(const std::filesystem::path& path);

// Keeps n of the N samples: index 0 always (so models and data share the
// initial condition), plus n-1 more drawn uniformly without replacement,
// returned in time order. Deterministic for a fixed seed, independent of
// platform.
TimeSeries subsample_nonuniform(const TimeSeries& ts, std::size_t n,
                                std::uint64_t seed);

// Versioned JSON model file (format_version 1). Reals are written with 17
// significant digits, so load(save(m)) reproduces every number exactly.
// Unknown fields are rejected on load.
void save_model(const KernelModel& model, const std::filesystem::path& path);
KernelModel load_model(const std::filesystem::path& path);

}  // namespace kode
