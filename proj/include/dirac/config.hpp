#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac/boundary.hpp"
#include "dirac/grid.hpp"
#include "dirac/spectrum.hpp"
#include "dirac/system.hpp"

namespace dirac {

inline constexpr int kConfigVersion = 1;

enum class Task { CheckConditions, Spectrum, Eigenfunctions, ValidateAsymptotics, RieszReport };

/// "check-conditions", "spectrum", "eigenfunctions", "validate-asymptotics", "riesz-report".
std::string task_name(Task t);
std::optional<Task> parse_task(const std::string& name);

/// A schema violation. `field` is a JSON pointer ("/boundary/p11/0");
/// `line` is set for syntax errors.
class ConfigError : public SpecError {
 public:
  ConfigError(const std::string& message, std::string field, int line = 0);

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

struct SpectrumRegion {
  /// Strip range (separated conditions).
  int n_min = -10;
  int n_max = 10;
  /// Search rectangle (required for linear and quadratic conditions).
  std::optional<Rect> rect;
  std::optional<double> im_band;
};

struct RunConfig {
  SystemSpec system;
  BoundarySpec boundary = LinearBC{};
  GridConfig grid;
  std::vector<Task> tasks;
  std::string output_dir = "out";
  SpectrumRegion spectrum;
  /// |n| range for the asymptotics and Riesz diagnostics.
  int asymptotics_n_min = 5;
  int asymptotics_n_max = 30;
  std::vector<int> riesz_K{5, 10, 20};
  /// Exclusion size for the Riesz report; default N0 + N1.
  std::optional<int> exclusion_size;
};

/// Parses and validates a config document. `source` names it in messages.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

}  // namespace dirac
