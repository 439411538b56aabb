#include "output.hpp"

#include <fstream>

#include "format.hpp"

namespace kode::cli {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  }
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw Error(ErrorKind::IoError, "failed writing " + path.string());
  }
}

void write_state_array(std::ostream& out, const State& x) {
  out << '[';
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (k) out << ", ";
    out << format_double(x[k]);
  }
  out << ']';
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json-lines") return OutputFormat::json_lines;
  throw Error(ErrorKind::InvalidConfig,
              "unknown format '" + name + "' (expected csv or json-lines)");
}

std::vector<std::string> numbered_names(Eigen::Index dim) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 1; k <= dim; ++k) {
    names.push_back("x" + std::to_string(k));
  }
  return names;
}

void write_series(const std::vector<double>& times,
                  const std::vector<State>& states,
                  const std::vector<std::string>& names, OutputFormat format,
                  const std::filesystem::path& path) {
  if (!states.empty() &&
      static_cast<Eigen::Index>(names.size()) != states.front().size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "column names do not match the state dimension");
  }
  std::ofstream out = open_out(path);
  if (format == OutputFormat::csv) {
    out << 't';
    for (const std::string& name : names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
      out << format_double(times[i]);
      for (Eigen::Index k = 0; k < states[i].size(); ++k) {
        out << ',' << format_double(states[i][k]);
      }
      out << '\n';
    }
  } else {
    for (std::size_t i = 0; i < times.size(); ++i) {
      out << "{\"t\": " << format_double(times[i]) << ", \"x\": ";
      write_state_array(out, states[i]);
      out << "}\n";
    }
  }
  finish(out, path);
}

void write_portrait(const std::vector<Trajectory>& portrait, OutputFormat format,
                    const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  if (format == OutputFormat::csv) {
    out << "trajectory,t,x1,x2,diverged\n";
    for (std::size_t id = 0; id < portrait.size(); ++id) {
      const Trajectory& traj = portrait[id];
      for (std::size_t i = 0; i < traj.size(); ++i) {
        out << id << ',' << format_double(traj.times[i]) << ','
            << format_double(traj.states[i][0]) << ','
            << format_double(traj.states[i][1]) << ','
            << (traj.diverged ? 1 : 0) << '\n';
      }
    }
  } else {
    for (std::size_t id = 0; id < portrait.size(); ++id) {
      const Trajectory& traj = portrait[id];
      for (std::size_t i = 0; i < traj.size(); ++i) {
        out << "{\"trajectory\": " << id
            << ", \"t\": " << format_double(traj.times[i]) << ", \"x\": ";
        write_state_array(out, traj.states[i]);
        out << ", \"diverged\": " << (traj.diverged ? "true" : "false") << "}\n";
      }
    }
  }
  finish(out, path);
}

std::string report_line(const EvalReport& report) {
  return "one_step_rmse=" + format_double(report.one_step_rmse) +
         " one_step_max=" + format_double(report.one_step_max) +
         " trajectory_rmse=" + format_double(report.trajectory_rmse) +
         " horizon=" + format_double(report.horizon) +
         " n_points=" + std::to_string(report.n_points);
}

void write_report(const EvalReport& report, OutputFormat format,
                  const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  if (format == OutputFormat::csv) {
    out << "one_step_rmse,one_step_max,trajectory_rmse,horizon,n_points\n"
        << format_double(report.one_step_rmse) << ','
        << format_double(report.one_step_max) << ','
        << format_double(report.trajectory_rmse) << ','
        << format_double(report.horizon) << ',' << report.n_points << '\n';
  } else {
    out << "{\"one_step_rmse\": " << format_double(report.one_step_rmse)
        << ", \"one_step_max\": " << format_double(report.one_step_max)
        << ", \"trajectory_rmse\": " << format_double(report.trajectory_rmse)
        << ", \"horizon\": " << format_double(report.horizon)
        << ", \"n_points\": " << report.n_points << "}\n";
  }
  finish(out, path);
}

}  // namespace kode::cli
