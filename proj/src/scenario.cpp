#include "opdyn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace opdyn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

int label_index(const OpinionSpectrum& s, const json& j) {
  if (!j.is_string()) throw InputError("discrete opinions must be label strings");
  const int k = s.index_of(j.get<std::string>());
  if (k < 0) throw InputError("unknown label '" + j.get<std::string>() + "'");
  return k;
}

}  // namespace

json spectrum_to_json(const OpinionSpectrum& s) {
  if (s.is_discrete()) return {{"type", "discrete"}, {"labels", s.labels()}};
  if (!s.is_bounded()) return {{"type", "real"}};
  return {{"type", "interval"}, {"lo", s.lo()}, {"hi", s.hi()}};
}

OpinionSpectrum spectrum_from_json(const json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "interval") return OpinionSpectrum::interval(number(field(j, "lo"), "lo"), number(field(j, "hi"), "hi"));
  if (type == "real") return OpinionSpectrum::real_line();
  if (type == "discrete") return OpinionSpectrum::discrete(field(j, "labels").get<std::vector<std::string>>());
  throw InputError("unknown spectrum type '" + type + "'");
}

json opinion_to_json(const OpinionSpectrum& s, Opinion x) {
  if (s.is_discrete()) return s.label(static_cast<int>(x));
  return x;
}

Opinion opinion_from_json(const OpinionSpectrum& s, const json& j) {
  if (s.is_discrete()) return label_index(s, j);
  const double x = number(j, "opinion");
  if (!s.contains(x)) throw InputError("opinion " + s.format(x) + " lies outside the spectrum");
  return x;
}

json opinions_to_json(const OpinionSpectrum& s, const OpinionVector& b) {
  json out = json::array();
  for (Opinion x : b) out.push_back(opinion_to_json(s, x));
  return out;
}

OpinionVector opinions_from_json(const OpinionSpectrum& s, const json& j) {
  if (!j.is_array()) throw InputError("opinion vector must be an array");
  OpinionVector b;
  for (const auto& x : j) b.push_back(opinion_from_json(s, x));
  return b;
}

json deviation_to_json(const DeviationSpec& spec) {
  const OpinionSpectrum& s = spec.spectrum();
  json out{{"kind", std::string(to_string(spec.kind()))}};
  switch (spec.kind()) {
    case DeviationKind::Hard: out["midpoint_to_upper"] = spec.midpoint_to_upper(); break;
    case DeviationKind::Affine:
      out["a"] = spec.a();
      out["b"] = spec.b();
      break;
    case DeviationKind::Constant: out["target"] = opinion_to_json(s, spec.target()); break;
    case DeviationKind::SignedPower: out["p"] = spec.p(); break;
    case DeviationKind::Table: {
      json map = json::object();
      for (int k = 0; k < s.size(); ++k) map[s.label(k)] = s.label(spec.map()[at(k)]);
      out["map"] = map;
      break;
    }
    default: break;
  }
  return out;
}

DeviationSpec deviation_from_json(const json& j, const OpinionSpectrum& s) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "identity") return DeviationSpec::identity(s);
  if (kind == "soft") return DeviationSpec::soft(s);
  if (kind == "hard") return DeviationSpec::hard(s, j.value("midpoint_to_upper", true));
  if (kind == "affine") return DeviationSpec::affine(s, number(field(j, "a"), "a"), number(field(j, "b"), "b"));
  if (kind == "constant") return DeviationSpec::constant(s, opinion_from_json(s, field(j, "target")));
  if (kind == "signed_power") return DeviationSpec::signed_power(s, number(field(j, "p"), "p"));
  if (kind == "table") {
    if (!s.is_discrete()) throw InputError("table deviation needs a discrete spectrum");
    const json& m = field(j, "map");
    std::vector<int> map(at(s.size()), -1);
    if (m.is_array()) {
      if (static_cast<int>(m.size()) != s.size()) throw InputError("table deviation must map every label");
      for (std::size_t k = 0; k < m.size(); ++k) map[k] = label_index(s, m[k]);
    } else if (m.is_object()) {
      for (const auto& [from, to] : m.items()) map[at(label_index(s, from))] = label_index(s, to);
    } else {
      throw InputError("table map must be an object or an array");
    }
    if (std::find(map.begin(), map.end(), -1) != map.end()) throw InputError("table deviation must map every label");
    return DeviationSpec::table(s, std::move(map));
  }
  throw InputError("unknown deviation kind '" + kind + "'");
}

json scenario_to_json(const Scenario& sc) {
  const SignedMultigraph& g = sc.graph;
  const int n = g.size();
  json weights = json::array();
  json relations = json::array();
  for (int i = 0; i < n; ++i) {
    json wrow = json::array();
    json rrow = json::array();
    for (int j = 0; j < n; ++j) {
      wrow.push_back(g.weight(i, j));
      const Relation& r = g.relation(i, j);
      rrow.push_back(r.follows() ? std::string("F") : r.spec_id());
    }
    weights.push_back(std::move(wrow));
    relations.push_back(std::move(rrow));
  }
  json deviations = json::object();
  for (const auto& [id, spec] : g.deviations()) deviations[id] = deviation_to_json(spec);

  json out{{"schema_version", kSchemaVersion},
           {"name", sc.name},
           {"n", n},
           {"spectrum", spectrum_to_json(g.spectrum())},
           {"weights", std::move(weights)},
           {"relations", std::move(relations)},
           {"deviations", std::move(deviations)}};
  if (!sc.initial.empty()) out["initial_opinions"] = opinions_to_json(g.spectrum(), sc.initial);
  return out;
}

Scenario scenario_from_json(const json& j, const LoadOptions& options) {
  try {
    if (!j.is_object()) throw InputError("scenario must be a JSON object");
    if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
      throw InputError("unsupported schema_version " + j.at("schema_version").dump());
    }
    const int n = field(j, "n").get<int>();
    if (n < 1) throw InputError("n must be positive");
    const OpinionSpectrum s = spectrum_from_json(field(j, "spectrum"));

    const json& wj = field(j, "weights");
    const json& rj = field(j, "relations");
    if (!wj.is_array() || static_cast<int>(wj.size()) != n) throw InputError("weights must have n rows");
    if (!rj.is_array() || static_cast<int>(rj.size()) != n) throw InputError("relations must have n rows");
    Eigen::MatrixXd w(n, n);
    RelationMatrix rel(at(n), std::vector<Relation>(at(n), Relation::follow()));
    for (int r = 0; r < n; ++r) {
      if (!wj[at(r)].is_array() || static_cast<int>(wj[at(r)].size()) != n) {
        throw InputError("weights row " + std::to_string(r + 1) + " must have n entries");
      }
      if (!rj[at(r)].is_array() || static_cast<int>(rj[at(r)].size()) != n) {
        throw InputError("relations row " + std::to_string(r + 1) + " must have n entries");
      }
      for (int c = 0; c < n; ++c) {
        const json& x = wj[at(r)][at(c)];
        // JSON has no NaN/inf; null stands in for a non-finite weight
        w(r, c) = x.is_null() ? std::nan("") : number(x, "weight");
        const std::string id = rj[at(r)][at(c)].get<std::string>();
        if (id.empty()) throw InputError("relation entries must be \"F\" or a deviation spec id");
        if (id != "F") rel[at(r)][at(c)] = Relation::deviate(id);
      }
    }

    std::map<std::string, DeviationSpec> deviations;
    if (j.contains("deviations")) {
      for (const auto& [id, spec] : j.at("deviations").items()) {
        if (id == "F") throw InputError("\"F\" is reserved for follow relations");
        try {
          deviations.emplace(id, deviation_from_json(spec, s));
        } catch (const InputError& e) {
          throw InputError("deviation spec '" + id + "': " + e.what());
        }
      }
    }

    const double tol = options.strict ? kRowSumTolerance : 1e-9;
    ValidationReport report = validate(SignedMultigraph(s, w, rel, deviations), tol);
    if (!report.ok()) throw InvalidScenario(std::move(report));
    if (!options.strict) {
      for (int r = 0; r < n; ++r) {
        const double sum = w.row(r).sum();
        if (std::abs(sum - 1.0) > kRowSumTolerance) w.row(r) /= sum;
      }
    }

    Scenario sc{j.value("name", std::string{}), SignedMultigraph(s, std::move(w), std::move(rel), std::move(deviations)),
                {}};
    if (j.contains("initial_opinions")) {
      sc.initial = opinions_from_json(s, j.at("initial_opinions"));
      if (static_cast<int>(sc.initial.size()) != n) throw InputError("initial_opinions must have n entries");
    }
    return sc;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j, options);
}

void save_scenario(const std::filesystem::path& path, const Scenario& sc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << scenario_to_json(sc).dump(2) << '\n';
}

std::filesystem::path preset_dir() {
  if (const char* env = std::getenv("OPDYN_PRESET_DIR"); env != nullptr && *env != '\0') return env;
  return OPDYN_PRESET_DIR;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(preset_dir(), ec)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

Scenario load_preset(const std::string& name) {
  const auto path = preset_dir() / (name + ".json");
  if (!std::filesystem::exists(path)) throw InputError("unknown preset '" + name + "'");
  return load_scenario(path);
}

std::string trajectory_csv(const OpinionSpectrum& s, const Trajectory& traj) {
  std::ostringstream out;
  out << 't';
  const std::size_t n = traj.steps.empty() ? 0 : traj.steps.front().size();
  for (std::size_t i = 0; i < n; ++i) out << ",b_" << i + 1;
  out << '\n';
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    out << t;
    for (Opinion x : traj.steps[t]) out << ',' << s.format(x);
    out << '\n';
  }
  return out.str();
}

json limit_report_to_json(const OpinionSpectrum& s, const LimitReport& report) {
  json out{{"schema_version", kSchemaVersion},
           {"status", std::string(report.status_name())},
           {"tolerances",
            {{"tol", report.tol}, {"confirm_window", report.confirm_window}, {"cycle_buffer", report.cycle_buffer}}}};
  if (const auto* c = std::get_if<Converged>(&report.status)) {
    out["t_star"] = c->t_star;
    out["limit"] = opinions_to_json(s, c->limit);
  } else if (const auto* o = std::get_if<Oscillating>(&report.status)) {
    out["period"] = o->period;
    json orbit = json::array();
    for (const auto& b : o->orbit) orbit.push_back(opinions_to_json(s, b));
    out["orbit"] = std::move(orbit);
  } else if (const auto* u = std::get_if<Undetermined>(&report.status)) {
    out["t_max"] = u->t_max;
  }
  return out;
}

json agents_to_json(const AgentSet& agents) {
  json out = json::array();
  for (int a : agents) out.push_back(a + 1);
  return out;
}

AgentSet agents_from_json(const json& j, int n) {
  if (!j.is_array()) throw InputError("agent list must be an array");
  AgentSet out;
  for (const auto& x : j) {
    const int a = x.get<int>();
    if (a < 1 || a > n) throw InputError("agent " + std::to_string(a) + " does not exist");
    out.push_back(a - 1);
  }
  return out;
}

json certificate_to_json(const BipartitionCertificate& cert) {
  return {{"kind", std::string(to_string(cert.kind))},
          {"side1", agents_to_json(cert.side1())},
          {"side2", agents_to_json(cert.side2())}};
}

json classification_to_json(const ClassificationResult& result) {
  json groups = json::array();
  for (const auto& gc : result.groups) {
    json entry{{"members", agents_to_json(gc.members)}, {"period", gc.period}, {"out_of_theory", gc.out_of_theory}};
    entry["verdict"] = gc.verdict ? json(std::string(to_string(*gc.verdict))) : json(nullptr);
    // the certificate backing the verdict; the opposition one otherwise
    const BipartitionCertificate* cert = nullptr;
    if (gc.verdict == Verdict::Diverges) {
      cert = &*gc.reverse;
    } else if (gc.opposition) {
      cert = &*gc.opposition;
    } else if (gc.reverse) {
      cert = &*gc.reverse;
    }
    entry["certificate"] = cert != nullptr ? certificate_to_json(*cert) : json(nullptr);
    entry["opposition_bipartite"] = gc.opposition.has_value();
    entry["reverse_opposition_bipartite"] = gc.reverse.has_value();
    if (!gc.notes.empty()) entry["notes"] = gc.notes;
    groups.push_back(std::move(entry));
  }
  json out{{"schema_version", kSchemaVersion}, {"groups", std::move(groups)}, {"rest", agents_to_json(result.rest)}};
  out["overall_converges"] = result.overall_converges ? json(*result.overall_converges) : json(nullptr);
  return out;
}

}  // namespace opdyn
