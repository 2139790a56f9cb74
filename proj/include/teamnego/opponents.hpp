#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teamnego/bayes.hpp"
#include "teamnego/domain.hpp"
#include "teamnego/rng.hpp"

namespace teamnego {

enum class OpponentFamily { Conceder, Boulware, Competitor, Matcher };

std::string to_string(OpponentFamily f);
OpponentFamily opponent_family_from(const std::string& name);

// Concession exponent conventionally paired with each family; only the
// time-based families actually read it.
double default_opponent_beta(OpponentFamily f);

struct OpponentConfig {
  OpponentFamily family = OpponentFamily::Conceder;
  int search_budget = 5000;
  double accept_window = 0.05;  // preferred utility band above the target when proposing
  double z_score = 1.96;        // optimism of the competitive ceiling estimate
  double endgame_t = 0.95;      // matcher late-acceptance threshold
};

// Single negotiating agent on the other side of the table. All families
// decide on a received offer before folding it into their adaptive state.
class OpponentAgent {
 public:
  OpponentAgent(const NegotiationDomain& d, AgentProfile profile, OpponentConfig cfg,
                std::uint64_t seed);

  // demanded utility level given everything received so far
  double target(double t) const;
  bool decide(const Offer& x, double t);
  Offer propose(double t);

  const OpponentConfig& config() const { return cfg_; }
  const AgentProfile& profile() const { return profile_; }
  std::size_t received_count() const { return received_.size(); }

  // mean plus z_score standard deviations of the received utilities,
  // clamped into [0,1]; 1 while nothing was received
  double competitive_ceiling() const;
  // fraction of the distance from the first received utility to 1 that the
  // other side has conceded so far
  double reciprocity() const;
  // matcher only: the naive Bayes model trained on received offers
  const BayesianAcceptanceModel& acceptance_model() const;

 private:
  Offer window_search(double tgt);
  Offer posterior_search(double tgt);
  Offer own_optimum() const;
  void observe(const Offer& x);

  const NegotiationDomain* domain_;
  AgentProfile profile_;
  OpponentConfig cfg_;
  Rng rng_;
  std::vector<double> received_;  // own utility of every received offer, in order
  std::optional<BayesianAcceptanceModel> model_;
};

}  // namespace teamnego