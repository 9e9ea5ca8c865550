#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac/config.hpp"
#include "dirac/riesz.hpp"

namespace dirac {

struct RieszDiagnostics {
  TailReport tail;
  std::vector<std::pair<int, GramReport>> gram;
  std::vector<CompletenessRow> completeness;
  ExclusionSet exclusion;
  std::vector<SpectralPoint> exclusion_points;
  /// Gram condition of the system with the exclusion set removed.
  std::vector<std::pair<int, GramReport>> gram_excluded;
  /// Strips left out because they do not hold exactly one simple eigenvalue.
  std::vector<int> skipped_strips;
};

struct RunReport {
  std::string family;
  std::optional<ConditionReport> conditions;
  std::optional<SpectrumResult> spectrum;
  std::vector<RootFunction> root_functions;
  std::optional<AsymptoticsReport> asymptotics;
  std::vector<GrowthReport> growth;
  std::optional<RieszDiagnostics> riesz;
};

struct RunResult {
  /// 0 success, 2 condition check failed. Numerical aborts propagate as
  /// NumericalError, configuration errors as SpecError.
  int exit_code = 0;
  RunReport report;
  std::vector<std::string> files;
};

/// Executes the configured tasks in dependency order and writes the
/// artifacts under config.output_dir.
RunResult run(const RunConfig& config);
RunResult run(const std::string& config_path);

/// Two-column (or indexed) CSV for plotting: kinds "spectrum" (n, re, im),
/// "asymptotics" (n, e_n), "riesz-tail" (K, S_K), "gram" (K, condition).
/// Throws SpecError for an unknown kind or a report without that data.
std::string emit_plotdata(const RunReport& report, const std::string& kind);

/// Serializes with sorted keys and every number printed with %.17g.
void write_json(std::ostream& out, const nlohmann::json& value);

nlohmann::json to_json(const ConditionReport& r, const std::string& family);
nlohmann::json to_json(const AsymptoticsReport& r, const std::vector<GrowthReport>& growth);
nlohmann::json to_json(const RieszDiagnostics& r);

}  // namespace dirac
