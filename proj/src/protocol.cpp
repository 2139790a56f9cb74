#include "teamnego/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "teamnego/errors.hpp"
#include "teamnego/similarity.hpp"

namespace teamnego {

namespace {

// slack for the unanimity guard, well above accumulated rounding noise but
// far below any real utility gap
constexpr double kFloorSlack = 1e-9;

bool same_structure(const NegotiationDomain& a, const NegotiationDomain& b) {
  if (&a == &b) return true;
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Issue& x = a.issues()[j];
    const Issue& y = b.issues()[j];
    if (x.name != y.name || x.kind != y.kind || x.is_real() != y.is_real()) return false;
    if (x.is_real()) {
      if (x.interval().lo != y.interval().lo || x.interval().hi != y.interval().hi)
        return false;
    } else if (x.labels() != y.labels()) {
      return false;
    }
  }
  return true;
}

nlohmann::ordered_json value_to_json(const IssueValue& v) {
  if (std::holds_alternative<double>(v)) return real_of(v);
  return label_of(v);
}

// Of two demanded values, the one the team likes better. All members share
// the direction on predictable issues, so any member's valuation can arbitrate;
// exact score ties resolve to the smaller raw value.
IssueValue team_preferred(const Issue& is, const ValuationFunction& vf, const IssueValue& a,
                          const IssueValue& b) {
  double sa = vf.score(is, a);
  double sb = vf.score(is, b);
  if (sa != sb) return sa > sb ? a : b;
  if (is.is_real()) return real_of(a) <= real_of(b) ? a : b;
  return label_of(a) <= label_of(b) ? a : b;
}

std::size_t pick_winner(const std::vector<long long>& totals, Rng& rng) {
  std::vector<std::size_t> best{0};
  for (std::size_t k = 1; k < totals.size(); ++k) {
    if (totals[k] > totals[best.front()])
      best.assign(1, k);
    else if (totals[k] == totals[best.front()])
      best.push_back(k);
  }
  if (best.size() == 1) return best.front();
  return best[rng.index(best.size())];
}

}  // namespace

TeamForbiddenSet prenegotiate(const NegotiationDomain& d, std::span<const AgentProfile> team) {
  if (team.empty()) throw ConfigError("prenegotiation needs at least one member");
  TeamForbiddenSet out;
  out.pooled = ForbiddenPartialSet(d.un_combo_count());
  out.per_member.reserve(team.size());
  for (const auto& a : team) {
    auto f = forbidden_set(d, a);
    out.pooled.merge(f);
    out.per_member.push_back(std::move(f));
  }
  return out;
}

ConcessionOrder build_predictable_order(const NegotiationDomain& d,
                                        std::span<const Offer> opponent_offers) {
  for (const auto& x : opponent_offers) d.check_offer(x);
  const auto& pr = d.pr_issues();
  std::vector<std::pair<double, int>> scored;
  scored.reserve(pr.size());
  for (int j : pr) {
    const Issue& is = d.issue(j);
    double dev = 0.0;
    if (opponent_offers.size() >= 2) {
      const IssueValue& first = opponent_offers.front().values[static_cast<std::size_t>(j)];
      for (std::size_t k = 1; k < opponent_offers.size(); ++k) {
        const IssueValue& cur = opponent_offers[k].values[static_cast<std::size_t>(j)];
        double step = 0.0;
        if (is.is_real()) {
          double span = is.span();
          if (span > 0.0) step = std::abs(real_of(cur) - real_of(first)) / span;
        } else {
          auto levels = static_cast<double>(is.label_count());
          if (levels > 1.0)
            step = std::abs(static_cast<double>(label_of(cur) - label_of(first))) /
                   (levels - 1.0);
        }
        dev = std::max(dev, step);
      }
    }
    scored.emplace_back(dev, j);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  ConcessionOrder co;
  co.order.reserve(scored.size());
  co.score.reserve(scored.size());
  for (const auto& [s, j] : scored) {
    co.order.push_back(j);
    co.score.push_back(s);
  }
  return co;
}

std::string to_string(MemberStrategy s) {
  switch (s) {
    case MemberStrategy::Basic:
      return "basic";
    case MemberStrategy::Bayesian:
      return "bayesian";
    case MemberStrategy::RiskAverse:
      return "risk-averse";
    case MemberStrategy::RiskSeeking:
      return "risk-seeking";
  }
  throw ConfigError("unknown member strategy");
}

MemberStrategy member_strategy_from(const std::string& name) {
  if (name == "basic") return MemberStrategy::Basic;
  if (name == "bayesian") return MemberStrategy::Bayesian;
  if (name == "risk-averse") return MemberStrategy::RiskAverse;
  if (name == "risk-seeking") return MemberStrategy::RiskSeeking;
  throw ConfigError("unknown member strategy: " + name);
}

std::string to_string(TeamMechanism m) {
  switch (m) {
    case TeamMechanism::Mediated:
      return "mediated";
    case TeamMechanism::SimilarityVoting:
      return "similarity-voting";
  }
  throw ConfigError("unknown team mechanism");
}

TeamMechanism team_mechanism_from(const std::string& name) {
  if (name == "mediated") return TeamMechanism::Mediated;
  if (name == "similarity-voting") return TeamMechanism::SimilarityVoting;
  throw ConfigError("unknown team mechanism: " + name);
}

TeamParty::TeamParty(const NegotiationDomain& d, std::vector<AgentProfile> members,
                     TeamConfig cfg, std::uint64_t seed, std::string name)
    : domain_(&d),
      members_(std::move(members)),
      cfg_(std::move(cfg)),
      name_(std::move(name)),
      mediator_rng_(derive_seed(seed, {0})) {
  if (members_.empty()) throw ConfigError("a team needs at least one member");
  if (cfg_.mechanism == TeamMechanism::Mediated) {
    if (cfg_.strategies.empty())
      cfg_.strategies.assign(members_.size(), MemberStrategy::Basic);
    if (cfg_.strategies.size() != members_.size())
      throw ConfigError("one strategy per team member");
  } else if (cfg_.similarity_budget <= 0) {
    throw ConfigError("similarity search budget must be positive");
  }
  member_rngs_.reserve(members_.size());
  contexts_.reserve(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    member_rngs_.emplace_back(derive_seed(seed, {1, i}));
    contexts_.emplace_back(d, members_[i]);
  }
}

void TeamParty::begin(NegotiationTranscript& tr) {
  (void)tr;
  if (started_) throw ProtocolError("a party only plays one run");
  started_ = true;
  if (cfg_.mechanism != TeamMechanism::Mediated) return;

  forbidden_ = prenegotiate(*domain_, members_);
  abandoned_ = forbidden_.pooled.count() == forbidden_.pooled.universe();
  fallback_.assign(members_.size(), -1);
  if (!abandoned_) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const auto& pu = contexts_[i].pu;
      std::int64_t best = -1;
      for (std::uint64_t r = 0; r < pu.size(); ++r) {
        if (forbidden_.pooled.contains(r)) continue;
        if (best < 0 || pu[r] > pu[static_cast<std::size_t>(best)])
          best = static_cast<std::int64_t>(r);
      }
      fallback_[i] = best;
    }
  }

  bool wants_models = false;
  for (auto s : cfg_.strategies)
    wants_models =
        wants_models || s == MemberStrategy::Bayesian || s == MemberStrategy::RiskAverse;
  if (wants_models) {
    team_model_.emplace(*domain_);
    opponent_model_.emplace(*domain_);
    // everything pruned away is a known team rejection from the start
    for (auto r : forbidden_.pooled.ranks())
      team_model_->update(domain_->partial_at(r), AcceptanceLabel::Rejected);
  }
}

std::optional<std::uint64_t> TeamParty::member_candidate(std::size_t i, double t) {
  switch (cfg_.strategies[i]) {
    case MemberStrategy::Basic:
      return propose_candidate_basic(contexts_[i], forbidden_.pooled, t, member_rngs_[i]);
    case MemberStrategy::Bayesian: {
      AcceptanceModels models{&*team_model_, &*opponent_model_};
      return propose_candidate_bayesian(contexts_[i], forbidden_.pooled, t, member_rngs_[i],
                                        models);
    }
    case MemberStrategy::RiskAverse: {
      AcceptanceModels models{&*team_model_, &*opponent_model_};
      return propose_candidate_risk(contexts_[i], forbidden_.pooled, t, member_rngs_[i],
                                    RiskAttitude::Averse, models);
    }
    case MemberStrategy::RiskSeeking:
      return propose_candidate_risk(contexts_[i], forbidden_.pooled, t, member_rngs_[i],
                                    RiskAttitude::Seeking, AcceptanceModels{});
  }
  throw ConfigError("unknown member strategy");
}

Offer TeamParty::propose(const VirtualClock& clock, NegotiationTranscript& tr) {
  if (!started_) throw ProtocolError("propose before begin");
  if (abandoned_) throw ProtocolError("the team already abandoned the negotiation");
  if (cfg_.mechanism == TeamMechanism::Mediated)
    return propose_mediated(clock.t(), clock.round, tr);
  return propose_similarity(clock.t(), clock.round, tr);
}

Offer TeamParty::propose_mediated(double t, int round, NegotiationTranscript& tr) {
  const std::size_t n = members_.size();

  std::vector<std::uint64_t> cands;
  cands.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = member_candidate(i, t);
    bool fell_back = !c.has_value();
    if (fell_back) {
      if (fallback_[i] < 0) throw ProtocolError("member has no partial offer left to propose");
      c = static_cast<std::uint64_t>(fallback_[i]);
    }
    tr.add(round, EventKind::CandidateProposal, name_,
           {{"member", i},
            {"partial", partial_to_json(domain_->partial_at(*c))},
            {"fallback", fell_back}});
    cands.push_back(*c);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::vector<long long> totals(cands.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto scores = borda_rank(contexts_[i], cands);
    tr.add(round, EventKind::BordaScores, name_,
           {{"member", i}, {"candidates", cands}, {"scores", scores}});
    for (std::size_t k = 0; k < cands.size(); ++k) totals[k] += scores[k];
  }
  std::uint64_t winner = cands[pick_winner(totals, mediator_rng_)];
  auto part = domain_->partial_at(winner);

  std::vector<IssueValue> values(domain_->size());
  const auto& un = domain_->un_issues();
  for (std::size_t k = 0; k < un.size(); ++k)
    values[static_cast<std::size_t>(un[k])] = part.labels[k];

  auto co = build_predictable_order(*domain_, received_);
  std::vector<double> run_u(n);
  for (std::size_t i = 0; i < n; ++i) run_u[i] = contexts_[i].pu[winner];
  std::vector<char> active(n, 1);
  std::size_t active_count = n;

  for (int j : co.order) {
    const Issue& is = domain_->issue(j);
    IssueValue v;
    if (active_count == 0) {
      // everyone is served, the rest goes to the opponent's end
      v = members_[0].valuations[static_cast<std::size_t>(j)].worst_value(is);
    } else {
      bool have = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        IssueValue dv = demand_pr_value(contexts_[i], j, run_u[i], t);
        tr.add(round, EventKind::Demand, name_,
               {{"member", i}, {"issue", j}, {"value", value_to_json(dv)}});
        if (!have) {
          v = dv;
          have = true;
        } else {
          v = team_preferred(is, members_[0].valuations[static_cast<std::size_t>(j)], v, dv);
        }
      }
    }
    values[static_cast<std::size_t>(j)] = v;
    for (std::size_t i = 0; i < n; ++i)
      run_u[i] += members_[i].weights[static_cast<std::size_t>(j)] *
                  members_[i].valuations[static_cast<std::size_t>(j)].score(is, v);
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (is_satisfied(contexts_[i], run_u[i], t)) {
        active[i] = 0;
        --active_count;
        tr.add(round, EventKind::Satisfied, name_, {{"member", i}, {"satisfied", true}});
      }
    }
  }

  if (team_model_) team_model_->update(part, AcceptanceLabel::Accepted);
  return Offer{std::move(values)};
}

Offer TeamParty::propose_similarity(double t, int round, NegotiationTranscript& tr) {
  const std::size_t n = members_.size();
  std::optional<Offer> last;
  if (!received_.empty()) last = received_.back();

  std::vector<Offer> uniq;
  uniq.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Offer o =
        similarity_member_propose(contexts_[i], last, t, member_rngs_[i], cfg_.similarity_budget);
    tr.add(round, EventKind::CandidateProposal, name_,
           {{"member", i}, {"offer", offer_to_json(o)}});
    if (std::find(uniq.begin(), uniq.end(), o) == uniq.end()) uniq.push_back(o);
  }

  std::vector<long long> totals(uniq.size(), 0);
  std::vector<double> u(uniq.size());
  std::vector<std::size_t> order(uniq.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < uniq.size(); ++k) u[k] = utility(*domain_, members_[i], uniq[k]);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });
    std::vector<int> scores(uniq.size(), 0);
    for (std::size_t pos = 0; pos < order.size(); ++pos)
      scores[order[pos]] = static_cast<int>(order.size() - 1 - pos);
    tr.add(round, EventKind::BordaScores, name_, {{"member", i}, {"scores", scores}});
    for (std::size_t k = 0; k < uniq.size(); ++k) totals[k] += scores[k];
  }
  return uniq[pick_winner(totals, mediator_rng_)];
}

bool TeamParty::evaluate(const Offer& x, const VirtualClock& clock, NegotiationTranscript& tr) {
  if (!started_) throw ProtocolError("evaluate before begin");
  domain_->check_offer(x);
  const double t = clock.t();
  auto proj = domain_->project_unpredictable(x);
  received_.push_back(x);

  if (cfg_.mechanism == TeamMechanism::Mediated) {
    if (opponent_model_) opponent_model_->update(proj, AcceptanceLabel::Accepted);
    if (forbidden_.pooled.contains(domain_->rank_of(proj))) {
      // no vote on a pooled partial, but the learner still hears about it
      if (team_model_) team_model_->update(proj, AcceptanceLabel::Rejected);
      return false;
    }
  }

  bool all = true;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    bool v = vote_on_offer(contexts_[i], x, t);
    tr.add(clock.round, EventKind::Vote, name_, {{"member", i}, {"accept", v}});
    all = all && v;
  }
  if (!all && team_model_) team_model_->update(proj, AcceptanceLabel::Rejected);
  return all;
}

void TeamParty::offer_rejected(const Offer& own) {
  if (cfg_.mechanism == TeamMechanism::Mediated && opponent_model_)
    opponent_model_->update(domain_->project_unpredictable(own), AcceptanceLabel::Rejected);
}

void TeamParty::check_agreement(const Offer& contract, const VirtualClock& clock) const {
  (void)clock;
  if (cfg_.mechanism != TeamMechanism::Mediated) return;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    double u = utility(*domain_, members_[i], contract);
    if (u < members_[i].ru - kFloorSlack)
      throw ProtocolError("member " + std::to_string(i) + " lands at " + std::to_string(u) +
                          " below its floor " + std::to_string(members_[i].ru));
  }
}

const TeamForbiddenSet& TeamParty::forbidden() const {
  if (cfg_.mechanism != TeamMechanism::Mediated)
    throw ConfigError("only mediated teams keep forbidden sets");
  return forbidden_;
}

double TeamParty::pruning_ratio() const {
  return cfg_.mechanism == TeamMechanism::Mediated ? forbidden_.pooled.ratio() : 0.0;
}

const BayesianAcceptanceModel& TeamParty::team_model() const {
  if (!team_model_) throw ConfigError("this team keeps no acceptance models");
  return *team_model_;
}

const BayesianAcceptanceModel& TeamParty::opponent_model() const {
  if (!opponent_model_) throw ConfigError("this team keeps no acceptance models");
  return *opponent_model_;
}

SoloParty::SoloParty(const NegotiationDomain& d, AgentProfile profile, OpponentConfig cfg,
                     std::uint64_t seed, std::string name)
    : domain_(&d), name_(std::move(name)), agent_(d, std::move(profile), cfg, seed) {}

Offer SoloParty::propose(const VirtualClock& clock, NegotiationTranscript& tr) {
  (void)tr;
  return agent_.propose(clock.t());
}

bool SoloParty::evaluate(const Offer& x, const VirtualClock& clock, NegotiationTranscript& tr) {
  (void)tr;
  return agent_.decide(x, clock.t());
}

NegotiationOutcome run_negotiation(Party& initiator, Party& responder, int deadline_rounds,
                                   NegotiationTranscript& tr) {
  if (deadline_rounds < 0) throw ConfigError("deadline_rounds must be nonnegative");
  if (!same_structure(initiator.domain(), responder.domain()))
    throw ConfigError("parties negotiate over different domains");

  initiator.begin(tr);
  responder.begin(tr);

  NegotiationOutcome out;
  if (deadline_rounds == 0) {
    out = NegotiationOutcome{OutcomeKind::DeadlineFailure, std::nullopt, 0};
    tr.set_outcome(out);
    return out;
  }
  if (initiator.abandoned() || responder.abandoned()) {
    out = NegotiationOutcome{OutcomeKind::ProtocolFailure, std::nullopt, 0};
    tr.set_outcome(out);
    return out;
  }

  VirtualClock clock{0, deadline_rounds};
  for (clock.round = 0; clock.round < deadline_rounds; ++clock.round) {
    Party& active = clock.round % 2 == 0 ? initiator : responder;
    Party& passive = clock.round % 2 == 0 ? responder : initiator;
    Offer x = active.propose(clock, tr);
    tr.add(clock.round, EventKind::OfferMade, active.name(), {{"offer", offer_to_json(x)}});
    if (passive.evaluate(x, clock, tr)) {
      active.check_agreement(x, clock);
      passive.check_agreement(x, clock);
      out = NegotiationOutcome{OutcomeKind::Agreement, std::move(x), clock.round};
      tr.set_outcome(out);
      return out;
    }
    active.offer_rejected(x);
  }
  out = NegotiationOutcome{OutcomeKind::DeadlineFailure, std::nullopt, deadline_rounds};
  tr.set_outcome(out);
  return out;
}

}  // namespace teamnego
