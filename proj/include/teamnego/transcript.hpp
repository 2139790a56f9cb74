#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamnego/domain.hpp"

namespace teamnego {

enum class EventKind {
  OfferMade,
  Vote,
  CandidateProposal,
  BordaScores,
  Demand,
  Satisfied,
  Outcome,
};

std::string to_string(EventKind k);

enum class OutcomeKind { Agreement, DeadlineFailure, ProtocolFailure };

std::string to_string(OutcomeKind k);

struct NegotiationOutcome {
  OutcomeKind kind = OutcomeKind::DeadlineFailure;
  std::optional<Offer> contract;
  int round = 0;  // round the agreement landed on, or where the run died
};

struct TranscriptEvent {
  int round = 0;
  EventKind kind = EventKind::OfferMade;
  std::string actor;
  nlohmann::ordered_json payload;
};

// Chronological record of one negotiation run. Events keep insertion order,
// so two runs are identical exactly when their serialized forms are.
class NegotiationTranscript {
 public:
  explicit NegotiationTranscript(std::string run_id) : run_id_(std::move(run_id)) {}

  const std::string& run_id() const { return run_id_; }
  const std::vector<TranscriptEvent>& events() const { return events_; }

  void add(int round, EventKind kind, std::string actor, nlohmann::ordered_json payload);

  void set_outcome(NegotiationOutcome o);
  bool has_outcome() const { return outcome_.has_value(); }
  const NegotiationOutcome& outcome() const;

  // one JSON object per line: run_id, round, event, actor, payload
  void write_jsonl(std::ostream& os) const;

 private:
  std::string run_id_;
  std::vector<TranscriptEvent> events_;
  std::optional<NegotiationOutcome> outcome_;
};

// Offers serialize as plain value arrays; real issues stay JSON floats and
// discrete issues stay JSON integers, so the mapping inverts losslessly.
nlohmann::ordered_json offer_to_json(const Offer& x);
Offer offer_from_json(const nlohmann::json& j);
nlohmann::ordered_json partial_to_json(const UnpredictablePartialOffer& p);
UnpredictablePartialOffer partial_from_json(const nlohmann::json& j);

}  // namespace teamnego