#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teamnego/domain.hpp"
#include "teamnego/transcript.hpp"

namespace teamnego {

// Scored record of one negotiation run. Failures keep utility fields at 0 so
// they drag utility averages down, but carry no Pareto distance.
struct RunResult {
  std::string run_id;
  std::string scenario_id;
  std::string scenario_class;
  std::string opponent;
  std::string team_config;
  double team_ru = 0.0;
  int repetition = 0;
  std::uint64_t seed = 0;
  OutcomeKind outcome = OutcomeKind::DeadlineFailure;
  std::vector<double> member_utilities;  // filled on agreement only
  double opponent_utility = 0.0;
  double team_joint = 0.0;
  int rounds = 0;
  double pruning_ratio = 0.0;
  std::optional<double> pareto_distance;  // agreements only

  bool agreed() const { return outcome == OutcomeKind::Agreement; }
};

// Product of the member utilities.
double joint_utility(std::span<const double> member_utilities);

struct ParetoPoint {
  double team_joint = 0.0;
  double opponent = 0.0;
};

// Nondominated (team joint, opponent utility) points, ascending in the first
// coordinate and therefore strictly descending in the second.
class ParetoFrontier {
 public:
  explicit ParetoFrontier(std::vector<ParetoPoint> raw);

  const std::vector<ParetoPoint>& points() const { return pts_; }
  double distance(const ParetoPoint& p) const;

 private:
  std::vector<ParetoPoint> pts_;
};

struct FrontierOptions {
  int pr_grid = 11;                   // lattice points per real predictable issue
  std::uint64_t budget = 2'000'000;   // hard cap on enumerated offers
};

// Exact frontier by full enumeration of the discretized offer space: every
// unpredictable combination crossed with the predictable lattice.
ParetoFrontier pareto_frontier(const NegotiationDomain& d, std::span<const AgentProfile> team,
                               const AgentProfile& opponent, const FrontierOptions& opt = {});

// Minimal Euclidean distance from the agreement point to the frontier, in the
// raw (team joint, opponent) plane.
double pareto_distance(const ParetoPoint& agreement, const ParetoFrontier& frontier);

// Utilities, joint utility and optional frontier distance for one outcome.
// Identity tags (ids, seed, pruning ratio) stay with the caller.
RunResult score_outcome(const NegotiationDomain& d, std::span<const AgentProfile> team,
                        const AgentProfile& opponent, const NegotiationOutcome& out,
                        const ParetoFrontier* frontier = nullptr);

struct SummaryRow {
  std::string scenario_class;
  std::string opponent;
  std::string team_config;
  double mean_joint = 0.0;
  double std_joint = 0.0;
  double mean_opp = 0.0;
  double mean_pareto_dist = 0.0;  // NaN when the cell closed no agreement
  double agreement_rate = 0.0;
  double mean_rounds = 0.0;
  std::size_t n = 0;
};

// Per (scenario class, opponent, team config) cell, rows sorted by that key.
// Failures enter the utility means as zeros and are skipped by the distance
// mean; the standard deviation is the population form so a single run reads
// as zero spread.
std::vector<SummaryRow> aggregate(std::span<const RunResult> results);

void write_summary_tsv(std::ostream& os, std::span<const SummaryRow> rows);

struct SignTestResult {
  int n_pairs = 0;     // pairs left after dropping ties
  int n_positive = 0;  // pairs where the first sample is strictly larger
  double p_value = 1.0;  // exact one-sided binomial tail, H1: first larger
};

SignTestResult paired_sign_test(std::span<const double> first, std::span<const double> second);

// Pairs two run lists on their shared seeds and sign-tests the joint
// utilities. Duplicate seeds inside one list are a configuration error.
SignTestResult paired_sign_test_by_seed(std::span<const RunResult> first,
                                        std::span<const RunResult> second);

}  // namespace teamnego
