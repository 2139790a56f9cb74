#include "teamnego/transcript.hpp"

#include <ostream>

#include "teamnego/errors.hpp"

namespace teamnego {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::OfferMade:
      return "offer";
    case EventKind::Vote:
      return "vote";
    case EventKind::CandidateProposal:
      return "candidate-proposal";
    case EventKind::BordaScores:
      return "borda-scores";
    case EventKind::Demand:
      return "demand";
    case EventKind::Satisfied:
      return "satisfied";
    case EventKind::Outcome:
      return "outcome";
  }
  throw ConfigError("unknown event kind");
}

std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Agreement:
      return "agreement";
    case OutcomeKind::DeadlineFailure:
      return "deadline-failure";
    case OutcomeKind::ProtocolFailure:
      return "protocol-failure";
  }
  throw ConfigError("unknown outcome kind");
}

void NegotiationTranscript::add(int round, EventKind kind, std::string actor,
                                nlohmann::ordered_json payload) {
  if (!events_.empty() && events_.back().round > round)
    throw ProtocolError("transcript rounds must not decrease");
  if (outcome_.has_value()) throw ProtocolError("transcript already closed by an outcome");
  events_.push_back(TranscriptEvent{round, kind, std::move(actor), std::move(payload)});
}

void NegotiationTranscript::set_outcome(NegotiationOutcome o) {
  nlohmann::ordered_json payload;
  payload["kind"] = to_string(o.kind);
  payload["round"] = o.round;
  if (o.contract)
    payload["contract"] = offer_to_json(*o.contract);
  else
    payload["contract"] = nullptr;
  add(o.round, EventKind::Outcome, "protocol", std::move(payload));
  outcome_ = std::move(o);
}

const NegotiationOutcome& NegotiationTranscript::outcome() const {
  if (!outcome_) throw ProtocolError("transcript has no outcome yet");
  return *outcome_;
}

void NegotiationTranscript::write_jsonl(std::ostream& os) const {
  for (const auto& e : events_) {
    nlohmann::ordered_json line;
    line["run_id"] = run_id_;
    line["round"] = e.round;
    line["event_kind"] = to_string(e.kind);
    line["actor"] = e.actor;
    line["payload"] = e.payload;
    os << line.dump() << '\n';
  }
}

nlohmann::ordered_json offer_to_json(const Offer& x) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& v : x.values) {
    if (std::holds_alternative<double>(v))
      arr.push_back(real_of(v));
    else
      arr.push_back(label_of(v));
  }
  return arr;
}

Offer offer_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("offer payload must be an array");
  Offer x;
  x.values.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_number_float())
      x.values.emplace_back(v.get<double>());
    else if (v.is_number_integer())
      x.values.emplace_back(v.get<std::int32_t>());
    else
      throw ConfigError("offer values must be numbers");
  }
  return x;
}

nlohmann::ordered_json partial_to_json(const UnpredictablePartialOffer& p) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (auto l : p.labels) arr.push_back(l);
  return arr;
}

UnpredictablePartialOffer partial_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("partial payload must be an array");
  UnpredictablePartialOffer p;
  p.labels.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ConfigError("partial labels must be integers");
    p.labels.push_back(v.get<std::int32_t>());
  }
  return p;
}

}  // namespace teamnego