#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "opdyn/analysis.hpp"
#include "opdyn/dynamics.hpp"
#include "opdyn/error.hpp"
#include "opdyn/graph.hpp"

namespace opdyn {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// A graph plus its initial opinions, as stored in scenario files.
struct Scenario {
  std::string name;
  SignedMultigraph graph;
  OpinionVector initial;  ///< may be empty
};

/// Raised when a scenario parses but describes an invalid graph.
class InvalidScenario : public InputError {
 public:
  explicit InvalidScenario(ValidationReport report)
      : InputError("scenario is invalid:\n" + report.summary()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct LoadOptions {
  /// Reject rows that do not sum to one within 1e-12 instead of accepting
  /// 1e-9 and renormalizing.
  bool strict = false;
};

json spectrum_to_json(const OpinionSpectrum& s);
OpinionSpectrum spectrum_from_json(const json& j);

json deviation_to_json(const DeviationSpec& spec);
DeviationSpec deviation_from_json(const json& j, const OpinionSpectrum& s);

/// Numbers on interval spectra, label strings on discrete ones.
json opinion_to_json(const OpinionSpectrum& s, Opinion x);
Opinion opinion_from_json(const OpinionSpectrum& s, const json& j);
json opinions_to_json(const OpinionSpectrum& s, const OpinionVector& b);
OpinionVector opinions_from_json(const OpinionSpectrum& s, const json& j);

json scenario_to_json(const Scenario& sc);
/// Throws InputError on malformed documents and InvalidScenario when the
/// graph fails validation.
Scenario scenario_from_json(const json& j, const LoadOptions& options = {});

Scenario load_scenario(const std::filesystem::path& path, const LoadOptions& options = {});
void save_scenario(const std::filesystem::path& path, const Scenario& sc);

/// $OPDYN_PRESET_DIR if set, else the directory configured at build time.
std::filesystem::path preset_dir();
std::vector<std::string> preset_names();
Scenario load_preset(const std::string& name);

/// Header "t,b_1,...,b_n", one row per step.
std::string trajectory_csv(const OpinionSpectrum& s, const Trajectory& traj);

json limit_report_to_json(const OpinionSpectrum& s, const LimitReport& report);
json certificate_to_json(const BipartitionCertificate& cert);
json classification_to_json(const ClassificationResult& result);

/// 1-based agent numbers.
json agents_to_json(const AgentSet& agents);
AgentSet agents_from_json(const json& j, int n);

}  // namespace opdyn
