#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teamnego/bayes.hpp"
#include "teamnego/domain.hpp"
#include "teamnego/opponents.hpp"
#include "teamnego/rng.hpp"
#include "teamnego/strategies.hpp"
#include "teamnego/transcript.hpp"

namespace teamnego {

// Normalized negotiation time. Offers only happen strictly before the
// deadline, so t stays below 1 while the run is alive.
struct VirtualClock {
  int round = 0;
  int deadline_rounds = 1000;

  double t() const {
    if (deadline_rounds <= 0) return 1.0;
    return static_cast<double>(round) / static_cast<double>(deadline_rounds);
  }
};

// Partial offers no member can ever accept, per member and pooled.
struct TeamForbiddenSet {
  std::vector<ForbiddenPartialSet> per_member;
  ForbiddenPartialSet pooled;
};

TeamForbiddenSet prenegotiate(const NegotiationDomain& d, std::span<const AgentProfile> team);

// Predictable issues ordered by how much ground the other side has already
// given on each one, most movement first, ties by ascending issue id.
struct ConcessionOrder {
  std::vector<int> order;     // predictable issue ids, a permutation
  std::vector<double> score;  // concession score aligned with order
};

ConcessionOrder build_predictable_order(const NegotiationDomain& d,
                                        std::span<const Offer> opponent_offers);

enum class MemberStrategy { Basic, Bayesian, RiskAverse, RiskSeeking };
std::string to_string(MemberStrategy s);
MemberStrategy member_strategy_from(const std::string& name);

enum class TeamMechanism { Mediated, SimilarityVoting };
std::string to_string(TeamMechanism m);
TeamMechanism team_mechanism_from(const std::string& name);

struct TeamConfig {
  TeamMechanism mechanism = TeamMechanism::Mediated;
  std::vector<MemberStrategy> strategies;  // one per member, mediated only
  int similarity_budget = 5000;
};

// One side of the table.
class Party {
 public:
  virtual ~Party() = default;
  Party() = default;
  Party(const Party&) = delete;
  Party& operator=(const Party&) = delete;

  virtual const NegotiationDomain& domain() const = 0;
  virtual std::string name() const = 0;

  // prenegotiation hook, runs once before round 0
  virtual void begin(NegotiationTranscript& tr) { (void)tr; }
  // true when the party already knows it can never close a deal
  virtual bool abandoned() const { return false; }
  virtual Offer propose(const VirtualClock& clock, NegotiationTranscript& tr) = 0;
  virtual bool evaluate(const Offer& x, const VirtualClock& clock,
                        NegotiationTranscript& tr) = 0;
  // the other side answered the party's own offer with a counter
  virtual void offer_rejected(const Offer& own) { (void)own; }
  // runtime guarantee hook, throws ProtocolError on violation
  virtual void check_agreement(const Offer& contract, const VirtualClock& clock) const {
    (void)contract;
    (void)clock;
  }
};

// Negotiation team behind a mediator, or the similarity-voting variant.
class TeamParty : public Party {
 public:
  TeamParty(const NegotiationDomain& d, std::vector<AgentProfile> members, TeamConfig cfg,
            std::uint64_t seed, std::string name = "team");

  const NegotiationDomain& domain() const override { return *domain_; }
  std::string name() const override { return name_; }
  void begin(NegotiationTranscript& tr) override;
  bool abandoned() const override { return abandoned_; }
  Offer propose(const VirtualClock& clock, NegotiationTranscript& tr) override;
  bool evaluate(const Offer& x, const VirtualClock& clock, NegotiationTranscript& tr) override;
  void offer_rejected(const Offer& own) override;
  void check_agreement(const Offer& contract, const VirtualClock& clock) const override;

  std::size_t size() const { return members_.size(); }
  const std::vector<AgentProfile>& members() const { return members_; }
  const TeamConfig& config() const { return cfg_; }
  // mediated only, populated by begin()
  const TeamForbiddenSet& forbidden() const;
  double pruning_ratio() const;
  bool has_models() const { return team_model_.has_value(); }
  const BayesianAcceptanceModel& team_model() const;
  const BayesianAcceptanceModel& opponent_model() const;
  const std::vector<Offer>& received_offers() const { return received_; }

 private:
  Offer propose_mediated(double t, int round, NegotiationTranscript& tr);
  Offer propose_similarity(double t, int round, NegotiationTranscript& tr);
  std::optional<std::uint64_t> member_candidate(std::size_t i, double t);

  const NegotiationDomain* domain_;
  std::vector<AgentProfile> members_;
  TeamConfig cfg_;
  std::string name_;
  Rng mediator_rng_;
  std::vector<Rng> member_rngs_;
  std::vector<MemberContext> contexts_;
  TeamForbiddenSet forbidden_;
  std::vector<std::int64_t> fallback_;  // best own partial outside the pool, -1 if none
  std::optional<BayesianAcceptanceModel> team_model_, opponent_model_;
  std::vector<Offer> received_;
  bool started_ = false;
  bool abandoned_ = false;
};

// Single agent on the other side of the table.
class SoloParty : public Party {
 public:
  SoloParty(const NegotiationDomain& d, AgentProfile profile, OpponentConfig cfg,
            std::uint64_t seed, std::string name = "opponent");

  const NegotiationDomain& domain() const override { return *domain_; }
  std::string name() const override { return name_; }
  Offer propose(const VirtualClock& clock, NegotiationTranscript& tr) override;
  bool evaluate(const Offer& x, const VirtualClock& clock, NegotiationTranscript& tr) override;

  OpponentAgent& agent() { return agent_; }
  const OpponentAgent& agent() const { return agent_; }

 private:
  const NegotiationDomain* domain_;
  std::string name_;
  OpponentAgent agent_;
};

// Alternating offers from round 0 to deadline_rounds - 1, initiator first.
// The outcome is returned and recorded on the transcript.
NegotiationOutcome run_negotiation(Party& initiator, Party& responder, int deadline_rounds,
                                   NegotiationTranscript& tr);

}  // namespace teamnego