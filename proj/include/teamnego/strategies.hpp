#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "teamnego/bayes.hpp"
#include "teamnego/domain.hpp"
#include "teamnego/rng.hpp"

namespace teamnego {

// Time-dependent demand level: 1 at the start, ru at the deadline.
double aspiration(double ru, double beta, double t);
double aspiration(const AgentProfile& a, double t);

// One team member inside a single run: the profile plus the precomputed
// partial-utility table the candidate filters scan every round.
struct MemberContext {
  const NegotiationDomain* domain = nullptr;
  const AgentProfile* profile = nullptr;
  std::vector<double> pu;  // partial utility by rank
  double max_pr_mass = 0.0;

  MemberContext() = default;
  MemberContext(const NegotiationDomain& d, const AgentProfile& a);

  double aspiration_at(double t) const;
};

// Acceptance vote on a full offer.
bool vote_on_offer(const MemberContext& m, const Offer& x, double t);

// Ranks of the unpredictable partials the member is willing to put forward:
// outside the forbidden set and potentially acceptable once the predictable
// issues are granted at their best. Ascending rank order.
std::vector<std::uint64_t> candidate_pool(const MemberContext& m,
                                          const ForbiddenPartialSet& forbidden,
                                          double t);

// Uniform draw from the pool; nullopt when the pool is empty and the engine
// has to fall back.
std::optional<std::uint64_t> propose_candidate_basic(
    const MemberContext& m, const ForbiddenPartialSet& forbidden, double t,
    Rng& rng);

// Scores aligned with `candidates`: |C|-1 for the member's favourite down to
// 0, ties broken towards the lower rank.
std::vector<int> borda_rank(const MemberContext& m,
                            std::span<const std::uint64_t> candidates);

// Cheapest value of issue_j that lifts the running utility to the member's
// aspiration; the best value when even that cannot, the worst when nothing
// more is needed.
IssueValue demand_pr_value(const MemberContext& m, int issue_j,
                           double current_utility, double t);

bool is_satisfied(const MemberContext& m, double current_utility, double t);

struct AcceptanceModels {
  const BayesianAcceptanceModel* team = nullptr;
  const BayesianAcceptanceModel* opponent = nullptr;
};

// Like the basic rule before t_exp or on an escape draw, otherwise the pool
// candidate with the best mixed acceptance estimate.
std::optional<std::uint64_t> propose_candidate_bayesian(
    const MemberContext& m, const ForbiddenPartialSet& forbidden, double t,
    Rng& rng, const AcceptanceModels& models);

// Risk-seeking members always chase their own best candidate; risk-averse
// members explore before t_exp and then chase opponent acceptance.
std::optional<std::uint64_t> propose_candidate_risk(
    const MemberContext& m, const ForbiddenPartialSet& forbidden, double t,
    Rng& rng, RiskAttitude attitude, const AcceptanceModels& models);

}  // namespace teamnego