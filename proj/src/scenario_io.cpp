#include "teamnego/scenario_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "teamnego/errors.hpp"

namespace teamnego {

namespace {

const nlohmann::json& need(const nlohmann::json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(what) + ": missing key '" + key + "'");
  return *it;
}

void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
               const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string(what) + ": unknown key '" + it.key() + "'");
  }
}

// shape check against the domain; value-level validation stays with the
// code that consumes the profile
void check_shape(const NegotiationDomain& d, const AgentProfile& a, const char* what) {
  if (a.weights.size() != d.size() || a.valuations.size() != d.size())
    throw ConfigError(std::string(what) + ": profile does not cover every issue");
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Issue& is = d.issues()[j];
    if (is.is_real()) {
      if (!a.valuations[j].is_linear())
        throw ConfigError(std::string(what) + ": issue '" + is.name + "' needs linear anchors");
    } else {
      if (a.valuations[j].is_linear() || a.valuations[j].table().size() != is.label_count())
        throw ConfigError(std::string(what) + ": issue '" + is.name +
                          "' needs one table entry per label");
    }
  }
}

nlohmann::ordered_json valuation_to_json(const ValuationFunction& v) {
  nlohmann::ordered_json j;
  if (v.is_linear())
    j["anchors"] = {v.anchors().at_lo, v.anchors().at_hi};
  else
    j["table"] = v.table();
  return j;
}

ValuationFunction valuation_from_json(const nlohmann::json& j) {
  only_keys(j, {"anchors", "table"}, "valuation");
  if (j.contains("anchors") == j.contains("table"))
    throw ConfigError("valuation: need exactly one of 'anchors' and 'table'");
  ValuationFunction v;
  if (j.contains("anchors")) {
    const nlohmann::json& a = j["anchors"];
    if (!a.is_array() || a.size() != 2)
      throw ConfigError("valuation: 'anchors' must be [at_lo, at_hi]");
    v.fn = LinearAnchors{a[0].get<double>(), a[1].get<double>()};
  } else {
    v.fn = j["table"].get<std::vector<double>>();
    if (v.table().empty()) throw ConfigError("valuation: empty table");
  }
  return v;
}

}  // namespace

std::string to_string(RiskAttitude r) {
  switch (r) {
    case RiskAttitude::Neutral: return "neutral";
    case RiskAttitude::Averse: return "averse";
    case RiskAttitude::Seeking: return "seeking";
  }
  throw ConfigError("unknown risk attitude");
}

RiskAttitude risk_attitude_from(const std::string& name) {
  if (name == "neutral") return RiskAttitude::Neutral;
  if (name == "averse") return RiskAttitude::Averse;
  if (name == "seeking") return RiskAttitude::Seeking;
  throw ConfigError("unknown risk attitude '" + name + "'");
}

SimilarityClass similarity_class_from(const std::string& name) {
  if (name == "similar") return SimilarityClass::Similar;
  if (name == "average") return SimilarityClass::Average;
  if (name == "dissimilar") return SimilarityClass::Dissimilar;
  throw ConfigError("unknown similarity class '" + name + "'");
}

nlohmann::ordered_json issue_to_json(const Issue& is) {
  nlohmann::ordered_json j;
  j["name"] = is.name;
  j["kind"] = is.kind == IssueKind::PredictableCompatible ? "predictable-compatible"
                                                          : "unpredictable";
  if (is.is_real())
    j["interval"] = {is.interval().lo, is.interval().hi};
  else
    j["labels"] = is.labels();
  return j;
}

Issue issue_from_json(const nlohmann::json& j) {
  try {
    only_keys(j, {"name", "kind", "interval", "labels"}, "issue");
    Issue is;
    is.name = need(j, "name", "issue").get<std::string>();
    std::string kind = need(j, "kind", "issue").get<std::string>();
    if (kind == "predictable-compatible")
      is.kind = IssueKind::PredictableCompatible;
    else if (kind == "unpredictable")
      is.kind = IssueKind::Unpredictable;
    else
      throw ConfigError("issue '" + is.name + "': unknown kind '" + kind + "'");
    if (j.contains("interval") == j.contains("labels"))
      throw ConfigError("issue '" + is.name + "': need exactly one of 'interval' and 'labels'");
    if (j.contains("interval")) {
      const nlohmann::json& iv = j["interval"];
      if (!iv.is_array() || iv.size() != 2)
        throw ConfigError("issue '" + is.name + "': 'interval' must be [lo, hi]");
      is.values = RealInterval{iv[0].get<double>(), iv[1].get<double>()};
    } else {
      is.values = j["labels"].get<std::vector<std::string>>();
    }
    return is;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("issue: ") + e.what());
  }
}

nlohmann::ordered_json domain_to_json(const NegotiationDomain& d) {
  nlohmann::ordered_json j;
  j["issues"] = nlohmann::ordered_json::array();
  for (const Issue& is : d.issues()) j["issues"].push_back(issue_to_json(is));
  return j;
}

NegotiationDomain domain_from_json(const nlohmann::json& j) {
  try {
    only_keys(j, {"issues"}, "domain");
    const nlohmann::json& arr = need(j, "issues", "domain");
    if (!arr.is_array()) throw ConfigError("domain: 'issues' must be an array");
    std::vector<Issue> issues;
    for (const nlohmann::json& ij : arr) issues.push_back(issue_from_json(ij));
    return NegotiationDomain(std::move(issues));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

nlohmann::ordered_json profile_to_json(const AgentProfile& a) {
  nlohmann::ordered_json j;
  j["weights"] = a.weights;
  j["valuations"] = nlohmann::ordered_json::array();
  for (const ValuationFunction& v : a.valuations) j["valuations"].push_back(valuation_to_json(v));
  j["ru"] = a.ru;
  j["beta"] = a.beta;
  nlohmann::ordered_json s;
  s["t_exp"] = a.strategy.t_exp;
  s["p_esc"] = a.strategy.p_esc;
  s["w_team"] = a.strategy.w_team;
  s["w_opp"] = a.strategy.w_opp;
  s["risk"] = to_string(a.strategy.risk);
  j["strategy"] = s;
  return j;
}

AgentProfile profile_from_json(const nlohmann::json& j) {
  try {
    only_keys(j, {"weights", "valuations", "ru", "beta", "strategy"}, "profile");
    AgentProfile a;
    a.weights = need(j, "weights", "profile").get<std::vector<double>>();
    const nlohmann::json& vals = need(j, "valuations", "profile");
    if (!vals.is_array()) throw ConfigError("profile: 'valuations' must be an array");
    for (const nlohmann::json& vj : vals) a.valuations.push_back(valuation_from_json(vj));
    if (a.weights.empty() || a.weights.size() != a.valuations.size())
      throw ConfigError("profile: need one weight per valuation");
    a.ru = need(j, "ru", "profile").get<double>();
    a.beta = need(j, "beta", "profile").get<double>();
    if (!(a.ru >= 0.0 && a.ru <= 1.0)) throw ConfigError("profile: ru outside [0,1]");
    if (!(a.beta > 0.0)) throw ConfigError("profile: beta must be positive");
    if (j.contains("strategy")) {
      const nlohmann::json& s = j["strategy"];
      only_keys(s, {"t_exp", "p_esc", "w_team", "w_opp", "risk"}, "strategy");
      if (s.contains("t_exp")) a.strategy.t_exp = s["t_exp"].get<double>();
      if (s.contains("p_esc")) a.strategy.p_esc = s["p_esc"].get<double>();
      if (s.contains("w_team")) a.strategy.w_team = s["w_team"].get<double>();
      if (s.contains("w_opp")) a.strategy.w_opp = s["w_opp"].get<double>();
      if (s.contains("risk")) a.strategy.risk = risk_attitude_from(s["risk"].get<std::string>());
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["class"] = to_string(s.similarity_class);
  j["seed"] = s.seed;
  j["team_dissimilarity"] = s.team_dissimilarity;
  j["domain"] = domain_to_json(s.domain);
  j["team"] = nlohmann::ordered_json::array();
  for (const AgentProfile& m : s.team) j["team"].push_back(profile_to_json(m));
  j["opponent"] = profile_to_json(s.opponent);
  if (!s.team_b.empty()) {
    j["team_b"] = nlohmann::ordered_json::array();
    for (const AgentProfile& m : s.team_b) j["team_b"].push_back(profile_to_json(m));
  }
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  try {
    only_keys(j, {"id", "class", "seed", "team_dissimilarity", "domain", "team", "opponent",
                  "team_b"},
              "scenario");
    Scenario s(domain_from_json(need(j, "domain", "scenario")));
    s.id = need(j, "id", "scenario").get<std::string>();
    s.similarity_class = similarity_class_from(need(j, "class", "scenario").get<std::string>());
    s.seed = need(j, "seed", "scenario").get<std::uint64_t>();
    s.team_dissimilarity = need(j, "team_dissimilarity", "scenario").get<double>();
    const nlohmann::json& team = need(j, "team", "scenario");
    if (!team.is_array() || team.empty())
      throw ConfigError("scenario: 'team' must be a non-empty array");
    for (const nlohmann::json& mj : team) {
      s.team.push_back(profile_from_json(mj));
      check_shape(s.domain, s.team.back(), "scenario team");
    }
    s.opponent = profile_from_json(need(j, "opponent", "scenario"));
    check_shape(s.domain, s.opponent, "scenario opponent");
    if (j.contains("team_b")) {
      const nlohmann::json& tb = j["team_b"];
      if (!tb.is_array() || tb.empty())
        throw ConfigError("scenario: 'team_b' must be a non-empty array when present");
      for (const nlohmann::json& mj : tb) {
        s.team_b.push_back(profile_from_json(mj));
        check_shape(s.domain, s.team_b.back(), "scenario team_b");
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw ConfigError("cannot read scenario file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const std::string& path, const Scenario& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw ConfigError("cannot write scenario file '" + path + "'");
  out << scenario_to_json(s).dump(2) << '\n';
  if (!out.good()) throw ConfigError("failed writing scenario file '" + path + "'");
}

}  // namespace teamnego
