#include "teamnego/opponents.hpp"

#include <algorithm>
#include <cmath>

#include "teamnego/errors.hpp"
#include "teamnego/strategies.hpp"

namespace teamnego {

std::string to_string(OpponentFamily f) {
  switch (f) {
    case OpponentFamily::Conceder:
      return "conceder";
    case OpponentFamily::Boulware:
      return "boulware";
    case OpponentFamily::Competitor:
      return "competitor";
    case OpponentFamily::Matcher:
      return "matcher";
  }
  throw ConfigError("unknown opponent family");
}

OpponentFamily opponent_family_from(const std::string& name) {
  if (name == "conceder") return OpponentFamily::Conceder;
  if (name == "boulware") return OpponentFamily::Boulware;
  if (name == "competitor") return OpponentFamily::Competitor;
  if (name == "matcher") return OpponentFamily::Matcher;
  throw ConfigError("unknown opponent family: " + name);
}

double default_opponent_beta(OpponentFamily f) {
  switch (f) {
    case OpponentFamily::Conceder:
      return 2.0;
    case OpponentFamily::Boulware:
      return 0.2;
    default:
      return 1.0;
  }
}

OpponentAgent::OpponentAgent(const NegotiationDomain& d, AgentProfile profile,
                             OpponentConfig cfg, std::uint64_t seed)
    : domain_(&d), profile_(std::move(profile)), cfg_(cfg), rng_(seed) {
  if (cfg_.search_budget <= 0) throw ConfigError("opponent needs a positive search budget");
  if (!(cfg_.accept_window >= 0.0)) throw ConfigError("opponent needs a nonnegative window");
  (void)max_pr(d, profile_);  // shape check up front
  // the concession exponent belongs to the family, not to the scenario profile
  profile_.beta = default_opponent_beta(cfg_.family);
  if (cfg_.family == OpponentFamily::Matcher) model_.emplace(d);
}

double OpponentAgent::competitive_ceiling() const {
  if (received_.empty()) return 1.0;
  double mu = 0.0;
  for (double u : received_) mu += u;
  mu /= static_cast<double>(received_.size());
  double var = 0.0;
  for (double u : received_) var += (u - mu) * (u - mu);
  var /= static_cast<double>(received_.size());
  return std::clamp(mu + cfg_.z_score * std::sqrt(var), 0.0, 1.0);
}

double OpponentAgent::reciprocity() const {
  if (received_.empty()) return 0.0;
  double first = received_.front();
  double best = *std::max_element(received_.begin(), received_.end());
  double headroom = 1.0 - first;
  if (headroom <= 0.0) return 1.0;
  return std::clamp((best - first) / headroom, 0.0, 1.0);
}

double OpponentAgent::target(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("target needs t in [0,1]");
  switch (cfg_.family) {
    case OpponentFamily::Conceder:
    case OpponentFamily::Boulware:
      return aspiration(profile_, t);
    case OpponentFamily::Competitor:
      return std::max(profile_.ru,
                      1.0 - (1.0 - competitive_ceiling()) * std::pow(t, 5.0));
    case OpponentFamily::Matcher:
      return 1.0 - reciprocity() * (1.0 - profile_.ru);
  }
  throw ConfigError("unknown opponent family");
}

bool OpponentAgent::decide(const Offer& x, double t) {
  double tgt = target(t);
  double u = utility(*domain_, profile_, x);
  bool accept = u >= tgt;
  if (!accept && cfg_.family == OpponentFamily::Matcher && t >= cfg_.endgame_t &&
      !received_.empty())
    accept = u >= *std::max_element(received_.begin(), received_.end());
  received_.push_back(std::clamp(u, 0.0, 1.0));
  if (model_) model_->update(domain_->project_unpredictable(x), AcceptanceLabel::Accepted);
  return accept;
}

Offer OpponentAgent::propose(double t) {
  double tgt = target(t);
  if (cfg_.family == OpponentFamily::Matcher) return posterior_search(tgt);
  return window_search(tgt);
}

Offer OpponentAgent::window_search(double tgt) {
  const NegotiationDomain& d = *domain_;
  std::vector<IssueValue> cur(d.size());
  std::vector<IssueValue> best;
  double best_u = -1.0;
  for (int i = 0; i < cfg_.search_budget; ++i) {
    double u = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const Issue& is = d.issues()[j];
      if (is.is_real())
        cur[j] = rng_.uniform(is.interval().lo, is.interval().hi);
      else
        cur[j] = static_cast<std::int32_t>(rng_.index(is.label_count()));
      u += profile_.weights[j] * profile_.valuations[j].score(is, cur[j]);
    }
    if (u >= tgt && u <= tgt + cfg_.accept_window) return Offer{std::move(cur)};
    if (u > best_u) {
      best_u = u;
      best = cur;
    }
  }
  if (best_u >= tgt) return Offer{std::move(best)};
  return own_optimum();
}

Offer OpponentAgent::posterior_search(double tgt) {
  const NegotiationDomain& d = *domain_;
  const auto& un = d.un_issues();
  std::vector<IssueValue> cur(d.size());
  std::vector<IssueValue> best_any, best_fit;
  UnpredictablePartialOffer proj;
  proj.labels.resize(un.size());
  double best_u = -1.0, best_post = -1.0;
  for (int i = 0; i < cfg_.search_budget; ++i) {
    double u = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const Issue& is = d.issues()[j];
      if (is.is_real())
        cur[j] = rng_.uniform(is.interval().lo, is.interval().hi);
      else
        cur[j] = static_cast<std::int32_t>(rng_.index(is.label_count()));
      u += profile_.weights[j] * profile_.valuations[j].score(is, cur[j]);
    }
    if (u > best_u) {
      best_u = u;
      best_any = cur;
    }
    if (u >= tgt) {
      for (std::size_t k = 0; k < un.size(); ++k)
        proj.labels[k] = label_of(cur[static_cast<std::size_t>(un[k])]);
      double post = model_->posterior_accept(proj);
      if (post > best_post) {
        best_post = post;
        best_fit = cur;
      }
    }
  }
  return Offer{best_post >= 0.0 ? std::move(best_fit) : std::move(best_any)};
}

Offer OpponentAgent::own_optimum() const {
  Offer x;
  x.values.reserve(domain_->size());
  for (std::size_t j = 0; j < domain_->size(); ++j)
    x.values.push_back(profile_.valuations[j].best_value(domain_->issues()[j]));
  return x;
}

const BayesianAcceptanceModel& OpponentAgent::acceptance_model() const {
  if (!model_) throw ConfigError("only the matcher keeps an acceptance model");
  return *model_;
}

}  // namespace teamnego