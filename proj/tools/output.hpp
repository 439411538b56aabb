#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kode/core.hpp"
#include "kode/dynamics.hpp"
#include "kode/eval.hpp"

// File emission for the CLI: CSV or json-lines, chosen by --format. Plain
// data files meant for external plotting tools; no rendering here.
namespace kode::cli {

enum class OutputFormat { csv, json_lines };

OutputFormat parse_format(const std::string& name);

// Time series / single trajectory: "t,<names...>" rows, or one
// {"t": ..., "x": [...]} object per line.
void write_series(const std::vector<double>& times,
                  const std::vector<State>& states,
                  const std::vector<std::string>& names, OutputFormat format,
                  const std::filesystem::path& path);

// Portrait: every row carries its trajectory id and divergence flag.
void write_portrait(const std::vector<Trajectory>& portrait,
                    OutputFormat format, const std::filesystem::path& path);

void write_report(const EvalReport& report, OutputFormat format,
                  const std::filesystem::path& path);

// The single stdout line for cmd_eval and the tail of cmd_fit's summary.
std::string report_line(const EvalReport& report);

// Column names x1..xd for models without a source data file.
std::vector<std::string> numbered_names(Eigen::Index dim);

}  // namespace kode::cli
