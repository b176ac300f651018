#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "radxray/body.hpp"

namespace radxray::cli {

enum ExitCode : int {
  kEllipse = 0,
  kUsage = 1,
  kInputValidation = 2,
  kNotEllipse = 3,
  kInconclusive = 4,
  kNumericalFailure = 5,
};

struct RunConfig {
  std::string command;
  std::string body = "disk";
  double a = 1.0;
  double b = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double angle = 0.0;
  std::optional<std::filesystem::path> body_file;
  int dirs = 64;
  int samples = 64;
  double margin = 0.01;
  int m_max = 8;
  int k_max = 4;
  double fit_tol = 1e-6;
  double range_tol = 1e-6;
  double track_tol = 1e-9;
  std::filesystem::path out = ".";
  unsigned long long seed = 0;
  double jitter = 0.0;
  double theta = 1.5707963267948966;
  double t0 = 0.0;
  double delta = 0.2;
  /// 0 selects 100 (1 + max |zero of D|).
  double radius = 0.0;
};

/// Throws InvalidArgument for counts below the module minimums or
/// nonpositive tolerances.
void validate(const RunConfig& cfg);

/// Applies the keys of a JSON object (flag names, '-' or '_') on top of cfg.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

AlgebraicBody make_body(const RunConfig& cfg);

/// Each command writes its files under cfg.out and returns an exit code.
int cmd_sinogram(const RunConfig& cfg, std::ostream& log);
int cmd_analyze(const RunConfig& cfg, std::ostream& log);
int cmd_track(const RunConfig& cfg, std::ostream& log);
int cmd_moments(const RunConfig& cfg, std::ostream& log);
int cmd_discriminant(const RunConfig& cfg, std::ostream& log);

/// Full command line entry point; errors are reported on err.
int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

}  // namespace radxray::cli
