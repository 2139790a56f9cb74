#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teamnego/analysis.hpp"
#include "teamnego/opponents.hpp"
#include "teamnego/protocol.hpp"
#include "teamnego/scenario_io.hpp"

namespace teamnego {

enum class ExperimentTemplate {
  SingleOpponent,     // team vs one scripted opponent family at a time
  TeamVsTeam,         // two teams, second one on the reversed direction
  BayesWeights,       // mixed teams, k of M members with the learning layer
  ReservationSweep,   // regenerate teams per reservation level
  RiskAttitudes,      // risk-averse vs risk-seeking proposal styles
};

std::string to_string(ExperimentTemplate k);
ExperimentTemplate experiment_template_from(const std::string& name);

struct ExperimentSpec {
  ExperimentTemplate kind = ExperimentTemplate::SingleOpponent;
  std::vector<SimilarityClass> classes = {SimilarityClass::Similar, SimilarityClass::Average,
                                          SimilarityClass::Dissimilar};
  int scenarios_per_class = 3;
  int members = 4;
  std::vector<OpponentFamily> opponents = {OpponentFamily::Conceder, OpponentFamily::Boulware,
                                           OpponentFamily::Competitor, OpponentFamily::Matcher};
  std::vector<std::string> team_configs;  // empty picks the template default
  int repetitions = 5;
  std::uint64_t base_seed = 1;
  int deadline_rounds = 1000;
  double team_ru = 0.5;
  double opponent_ru = 0.0;
  std::vector<double> ru_sweep = {0.35, 0.5, 0.65};  // reservation-sweep only
  std::string out_dir = "out";
  bool write_transcripts = false;
  int parallel = 1;
  bool compute_pareto = true;
  int pr_grid = 11;  // frontier lattice used for distances
  std::uint64_t frontier_budget = 2'000'000;
};

void validate(const ExperimentSpec& spec);

nlohmann::ordered_json experiment_spec_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);
ExperimentSpec load_experiment_spec(const std::string& path);

// Config names accepted in team_configs: "basic", "bayesian", "bayesian-<k>"
// (first k members learn, the rest stay basic), "risk-averse", "risk-seeking",
// "similarity-voting". Team-vs-team uses "<ka>-<kb>" pairs of learner counts.
std::vector<std::string> default_team_configs(const ExperimentSpec& spec);
TeamConfig resolve_team_config(const std::string& name, int members);
std::pair<TeamConfig, TeamConfig> resolve_team_pair(const std::string& name, int members);

// Mirror of a profile across the predictable issues: linear anchors swap, so
// the copy prefers the opposite extreme. Unpredictable valuations stay put.
AgentProfile reversed_pr(const NegotiationDomain& d, AgentProfile a);

// Deterministic scenario batch for the spec: scenarios_per_class instances
// per similarity class (per reservation level for the sweep template), with
// a reversed-direction second team when the template needs one.
std::vector<Scenario> make_scenarios(const ExperimentSpec& spec);

struct ExperimentReport {
  std::vector<RunResult> runs;           // grid order, one row per run
  std::vector<SummaryRow> summary;
  std::vector<std::string> violations;   // diagnostic transcript paths
  std::string results_path;
  std::string summary_path;
};

// Runs the full scenario x opponent x config x repetition grid and writes
// results.tsv, summary.tsv and the plot exports under spec.out_dir. Every
// agreement by a mediated team is checked against the member floors; a
// violation lands in report.violations with its transcript.
ExperimentReport run_experiment(const ExperimentSpec& spec);

void write_results_tsv(std::ostream& os, std::span<const RunResult> runs);

// Per-figure delimited exports from the aggregate summary. The scatter file
// carries sqrt(mean_joint); everything else stays on the raw scale.
void emit_plot_data(const std::string& out_dir, std::span<const SummaryRow> rows);

}  // namespace teamnego
