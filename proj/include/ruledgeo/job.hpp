#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "ruledgeo/mesh_io.hpp"

namespace ruledgeo {

struct Tolerances {
  double tol_dev = 1e-7;
  double tol_inv = 1e-9;
  double tol_K = 1e-5;
};

/// Optional expected theorem flags, checked by `verify`.
struct Expectations {
  std::optional<bool> geodesic;
  std::optional<bool> asymptotic;
  std::optional<bool> line_of_curvature_paper;
  std::optional<bool> line_of_curvature_standard;
  std::optional<bool> developable;
};

struct JobConfig {
  RuledSurfaceDef surface;
  int n_s = 101;
  int n_v = 11;
  Tolerances tolerances;
  std::optional<std::string> mesh_path;
  std::optional<std::string> report_path;
  ReportFormat format = ReportFormat::Json;
  Expectations expect;
};

/// Throws ConfigError for structural problems and ParseError for bad DSL.
JobConfig parse_config(std::string_view json_text);
JobConfig load_config(const std::string& path);

/// Writes through a sibling temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

struct Overrides {
  std::optional<std::string> out;
  std::optional<int> samples;
  std::optional<ReportFormat> format;
  std::optional<double> tol_dev;
};

void apply(JobConfig& config, const Overrides& overrides);

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitConfig = 2, kExitGeometry = 3 };

// Commands write their artifact to the configured path, or to `out` when
// none is configured (except `surface`, which requires a path). Errors are
// reported on `err` as one line: "ERROR <CODE>: message".
int cmd_frames(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_surface(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_classify(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Full front end: argv parsing, config loading, dispatch, error mapping.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ruledgeo
