#include "kode/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <utility>

namespace kode {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::IoError, "cannot read " + path.string());
  }
  return std::move(buf).str();
}

// Non-empty lines with their 1-based file line numbers. CRLF and LF both work.
std::vector<std::pair<std::size_t, std::string>> split_lines(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++lineno;
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.emplace_back(lineno, std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_real(const std::string& cell, std::size_t lineno, std::size_t column) {
  const std::string where =
      "line " + std::to_string(lineno) + ", column " + std::to_string(column);
  std::string tok = cell;
  if (!tok.empty() && tok.front() == '+') tok.erase(tok.begin());
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || tok.empty()) {
    throw Error(ErrorKind::ParseError, where + ": '" + cell + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::ParseError, where + ": non-finite value '" + cell + "'");
  }
  return value;
}

long long parse_count(const std::string& cell, std::size_t lineno, std::size_t column) {
  const std::string where =
      "line " + std::to_string(lineno) + ", column " + std::to_string(column);
  long long value = 0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw Error(ErrorKind::ParseError,
                where + ": '" + cell + "' is not an integer count");
  }
  if (value < 0) {
    throw Error(ErrorKind::ParseError, where + ": counts must be nonnegative");
  }
  return value;
}

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
long days_from_civil(long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

bool is_leap(long y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(long y, unsigned m) {
  static const unsigned lengths[12] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

long parse_iso_date(const std::string& cell, std::size_t lineno) {
  const std::string where = "line " + std::to_string(lineno);
  const bool shape_ok =
      cell.size() == 10 && cell[4] == '-' && cell[7] == '-' &&
      std::all_of(cell.begin(), cell.end(), [](char c) {
        return c == '-' || (c >= '0' && c <= '9');
      });
  if (!shape_ok) {
    throw Error(ErrorKind::ParseError,
                where + ": '" + cell + "' is not an ISO-8601 date (YYYY-MM-DD)");
  }
  const long y = std::stol(cell.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoul(cell.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(std::stoul(cell.substr(8, 2)));
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) {
    throw Error(ErrorKind::ParseError,
                where + ": '" + cell + "' is not a valid calendar date");
  }
  return days_from_civil(y, m, d);
}

void check_header(const std::vector<std::string>& cells,
                  const std::vector<std::string>& expected,
                  const std::filesystem::path& path) {
  if (cells != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    throw Error(ErrorKind::ParseError,
                path.string() + ": expected header '" + want + "'");
  }
}

}  // namespace

TimeSeries load_timeseries_csv(const std::filesystem::path& path,
                               std::vector<std::string>* names) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) {
    throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  }
  const auto header = split_cells(lines.front().second);
  if (header.size() < 2 || header.front() != "t") {
    throw Error(ErrorKind::ParseError,
                path.string() +
                    ": header must be 't,<name1>,...' with at least one state column");
  }
  const std::size_t ncols = header.size();

  TimeSeries ts;
  ts.times.reserve(lines.size() - 1);
  ts.states.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& [lineno, line] = lines[r];
    const auto cells = split_cells(line);
    if (cells.size() != ncols) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(lineno) + ": expected " +
                      std::to_string(ncols) + " columns, got " +
                      std::to_string(cells.size()));
    }
    ts.times.push_back(parse_real(cells[0], lineno, 1));
    State x(static_cast<Eigen::Index>(ncols - 1));
    for (std::size_t c = 1; c < ncols; ++c) {
      x[static_cast<Eigen::Index>(c - 1)] = parse_real(cells[c], lineno, c + 1);
    }
    ts.states.push_back(std::move(x));
  }
  validate_timeseries(ts);
  if (names) names->assign(header.begin() + 1, header.end());
  return ts;
}

std::vector<EpidemicRecord> load_epidemic_csv(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) {
    throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  }
  check_header(split_cells(lines.front().second),
               {"date", "confirmed", "recovered", "deaths"}, path);

  std::vector<EpidemicRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& [lineno, line] = lines[r];
    const auto cells = split_cells(line);
    if (cells.size() != 4) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(lineno) + ": expected 4 columns, got " +
                      std::to_string(cells.size()));
    }
    EpidemicRecord rec;
    rec.date = cells[0];
    rec.day = parse_iso_date(cells[0], lineno);
    rec.confirmed = parse_count(cells[1], lineno, 2);
    rec.recovered = parse_count(cells[2], lineno, 3);
    rec.deaths = parse_count(cells[3], lineno, 4);
    if (!records.empty() && rec.day <= records.back().day) {
      throw Error(ErrorKind::NonMonotonicTime,
                  "line " + std::to_string(lineno) +
                      ": dates must be strictly increasing");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

TimeSeries transform_covid(const std::vector<EpidemicRecord>& records,
                           long long population) {
  if (records.empty()) {
    throw Error(ErrorKind::TooShort, "no epidemic records");
  }
  if (population < 1) {
    throw Error(ErrorKind::PopulationTooSmall, "population must be positive");
  }
  TimeSeries ts;
  ts.times.reserve(records.size());
  ts.states.reserve(records.size());
  const long day0 = records.front().day;
  long prev_day = day0 - 1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EpidemicRecord& rec = records[i];
    const std::string where = "record " + std::to_string(i) + " (" + rec.date + ")";
    if (rec.day <= prev_day) {
      throw Error(ErrorKind::NonMonotonicTime,
                  where + ": dates must be strictly increasing");
    }
    prev_day = rec.day;
    if (rec.confirmed > population) {
      throw Error(ErrorKind::PopulationTooSmall,
                  where + ": confirmed " + std::to_string(rec.confirmed) +
                      " exceeds population " + std::to_string(population));
    }
    const long long infected = rec.confirmed - rec.recovered - rec.deaths;
    if (infected < 0) {
      throw Error(ErrorKind::NegativeCompartment,
                  where + ": confirmed - recovered - deaths = " +
                      std::to_string(infected));
    }
    State x(3);
    x[0] = static_cast<double>(population - rec.confirmed);
    x[1] = static_cast<double>(infected);
    x[2] = static_cast<double>(rec.recovered + rec.deaths);
    ts.times.push_back(static_cast<double>(rec.day - day0));
    ts.states.push_back(std::move(x));
  }
  return ts;
}

TimeSeries load_harelynx_csv(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) {
    throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  }
  check_header(split_cells(lines.front().second), {"year", "hare", "lynx"}, path);

  TimeSeries ts;
  ts.times.reserve(lines.size() - 1);
  ts.states.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& [lineno, line] = lines[r];
    const auto cells = split_cells(line);
    if (cells.size() != 3) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(lineno) + ": expected 3 columns, got " +
                      std::to_string(cells.size()));
    }
    ts.times.push_back(parse_real(cells[0], lineno, 1));
    State x(2);
    x[0] = parse_real(cells[1], lineno, 2);
    x[1] = parse_real(cells[2], lineno, 3);
    ts.states.push_back(std::move(x));
  }
  validate_timeseries(ts);
  return ts;
}

namespace {

// Uniform integer in [0, k) by masked rejection. Hand-rolled because the
// standard distributions are not specified bit-for-bit across library
// implementations, and subsampling must be reproducible everywhere.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t k) {
  std::uint64_t mask = k - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t v = rng() & mask;
    if (v < k) return v;
  }
}

}  // namespace

TimeSeries subsample_nonuniform(const TimeSeries& ts, std::size_t n,
                                std::uint64_t seed) {
  validate_timeseries(ts);
  const std::size_t total = ts.size();
  if (n < 2 || n > total) {
    throw Error(ErrorKind::BadCount,
                "subsample size must be in [2, " + std::to_string(total) +
                    "], got " + std::to_string(n));
  }
  if (n == total) return ts;

  // Partial Fisher-Yates over indices 1..N-1; index 0 is always kept.
  std::vector<std::size_t> pool(total - 1);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i + 1;
  std::mt19937_64 rng(seed);
  const std::size_t draws = n - 1;
  for (std::size_t i = 0; i < draws; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> keep(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(draws));
  keep.push_back(0);
  std::sort(keep.begin(), keep.end());

  TimeSeries out;
  out.times.reserve(n);
  out.states.reserve(n);
  for (std::size_t idx : keep) {
    out.times.push_back(ts.times[idx]);
    out.states.push_back(ts.states[idx]);
  }
  return out;
}

namespace {

std::string full_precision(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  out << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ", ";
    out << full_precision(v[i]);
  }
  out << ']';
}

void write_row(std::ostream& out, const Eigen::MatrixXd& m, Eigen::Index row) {
  out << '[';
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) out << ", ";
    out << full_precision(m(row, j));
  }
  out << ']';
}

constexpr int kModelFormatVersion = 1;

}  // namespace

void save_model(const KernelModel& model, const std::filesystem::path& path) {
  const Eigen::Index m = static_cast<Eigen::Index>(model.centers.size());
  const Eigen::Index d = model.dim();
  if (m < 1 || model.weights.rows() != m || d < 1 || model.scaler.dim() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "model is inconsistent; refusing to write it");
  }
  if (!(model.bandwidth > 0.0) || !(model.lambda >= 0.0)) {
    throw Error(ErrorKind::InvalidConfig,
                "model has invalid bandwidth or lambda; refusing to write it");
  }
  for (const State& c : model.centers) {
    if (c.size() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  "model centers have mixed dimensions");
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  }
  out << "{\n";
  out << "  \"format_version\": " << kModelFormatVersion << ",\n";
  out << "  \"bandwidth\": " << full_precision(model.bandwidth) << ",\n";
  out << "  \"lambda\": " << full_precision(model.lambda) << ",\n";
  out << "  \"dim\": " << d << ",\n";
  out << "  \"scaler\": {\n";
  out << "    \"means\": ";
  write_vector(out, model.scaler.means());
  out << ",\n    \"stds\": ";
  write_vector(out, model.scaler.stds());
  out << "\n  },\n";
  out << "  \"centers\": [\n";
  for (Eigen::Index i = 0; i < m; ++i) {
    out << "    ";
    write_vector(out, model.centers[static_cast<std::size_t>(i)]);
    out << (i + 1 < m ? ",\n" : "\n");
  }
  out << "  ],\n";
  out << "  \"weights\": [\n";
  for (Eigen::Index i = 0; i < m; ++i) {
    out << "    ";
    write_row(out, model.weights, i);
    out << (i + 1 < m ? ",\n" : "\n");
  }
  out << "  ]\n";
  out << "}\n";
  out.flush();
  if (!out) {
    throw Error(ErrorKind::IoError, "failed writing " + path.string());
  }
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw Error(ErrorKind::ParseError,
                  where + ": unknown field '" + it.key() + "'");
    }
  }
}

double finite_number(const json& j, const std::string& name) {
  if (!j.is_number()) {
    throw Error(ErrorKind::ParseError, name + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::ParseError, name + " must be finite");
  }
  return v;
}

Eigen::VectorXd number_array(const json& j, Eigen::Index expected,
                             const std::string& name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expected) {
    throw Error(ErrorKind::ParseError,
                name + " must be an array of " + std::to_string(expected) +
                    " numbers");
  }
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    v[i] = finite_number(j[static_cast<std::size_t>(i)],
                         name + "[" + std::to_string(i) + "]");
  }
  return v;
}

}  // namespace

KernelModel load_model(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorKind::ParseError, path.string() + ": expected a JSON object");
  }
  reject_unknown_keys(j, {"format_version", "bandwidth", "lambda", "dim",
                          "scaler", "centers", "weights"},
                      path.string());
  if (!j.contains("format_version")) {
    throw Error(ErrorKind::ParseError, path.string() + ": missing format_version");
  }
  if (!j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != kModelFormatVersion) {
    throw Error(ErrorKind::FormatVersionMismatch,
                path.string() + ": this reader understands format_version " +
                    std::to_string(kModelFormatVersion));
  }
  for (const char* field : {"bandwidth", "lambda", "dim", "scaler", "centers", "weights"}) {
    if (!j.contains(field)) {
      throw Error(ErrorKind::ParseError,
                  path.string() + ": missing field '" + std::string(field) + "'");
    }
  }

  KernelModel model;
  model.bandwidth = finite_number(j["bandwidth"], "bandwidth");
  if (!(model.bandwidth > 0.0)) {
    throw Error(ErrorKind::ParseError, "bandwidth must be positive");
  }
  model.lambda = finite_number(j["lambda"], "lambda");
  if (!(model.lambda >= 0.0)) {
    throw Error(ErrorKind::ParseError, "lambda must be nonnegative");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1) {
    throw Error(ErrorKind::ParseError, "dim must be a positive integer");
  }
  const Eigen::Index d = j["dim"].get<Eigen::Index>();

  const json& scaler = j["scaler"];
  if (!scaler.is_object()) {
    throw Error(ErrorKind::ParseError, "scaler must be an object");
  }
  reject_unknown_keys(scaler, {"means", "stds"}, "scaler");
  if (!scaler.contains("means") || !scaler.contains("stds")) {
    throw Error(ErrorKind::ParseError, "scaler needs 'means' and 'stds'");
  }
  model.scaler = StandardScaler(number_array(scaler["means"], d, "scaler.means"),
                                number_array(scaler["stds"], d, "scaler.stds"));

  const json& centers = j["centers"];
  if (!centers.is_array() || centers.empty()) {
    throw Error(ErrorKind::ParseError, "centers must be a non-empty array");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(centers.size());
  model.centers.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    model.centers.push_back(number_array(centers[static_cast<std::size_t>(i)], d,
                                         "centers[" + std::to_string(i) + "]"));
  }

  const json& weights = j["weights"];
  if (!weights.is_array() || static_cast<Eigen::Index>(weights.size()) != m) {
    throw Error(ErrorKind::ParseError,
                "weights must have one row per center");
  }
  model.weights.resize(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    model.weights.row(i) =
        number_array(weights[static_cast<std::size_t>(i)], d,
                     "weights[" + std::to_string(i) + "]")
            .transpose();
  }
  return model;
}

}  // namespace kode
