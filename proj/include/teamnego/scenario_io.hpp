#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamnego/domain.hpp"

namespace teamnego {

// One fully specified negotiation instance: the table plus everyone at it.
// team_b stays empty except in team-vs-team experiments, where it replaces
// the solo opponent.
struct Scenario {
  explicit Scenario(NegotiationDomain d) : domain(std::move(d)) {}

  std::string id;
  SimilarityClass similarity_class = SimilarityClass::Average;
  std::uint64_t seed = 0;  // generator seed that produced the profiles
  double team_dissimilarity = 0.0;
  NegotiationDomain domain;
  std::vector<AgentProfile> team;
  AgentProfile opponent;
  std::vector<AgentProfile> team_b;
};

std::string to_string(RiskAttitude r);
RiskAttitude risk_attitude_from(const std::string& name);
SimilarityClass similarity_class_from(const std::string& name);

// JSON mappings. Parsers reject unknown keys and malformed shapes with
// ConfigError; doubles survive a dump/parse cycle bit for bit.
nlohmann::ordered_json issue_to_json(const Issue& is);
Issue issue_from_json(const nlohmann::json& j);

nlohmann::ordered_json domain_to_json(const NegotiationDomain& d);
NegotiationDomain domain_from_json(const nlohmann::json& j);

nlohmann::ordered_json profile_to_json(const AgentProfile& a);
AgentProfile profile_from_json(const nlohmann::json& j);

nlohmann::ordered_json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::string& path);
void save_scenario(const std::string& path, const Scenario& s);

}  // namespace teamnego
