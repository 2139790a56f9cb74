#include "teamnego/similarity.hpp"

#include <cmath>

#include "teamnego/errors.hpp"

namespace teamnego {

namespace {

double similarity_unchecked(const NegotiationDomain& d, const std::vector<IssueValue>& a,
                            const std::vector<IssueValue>& b) {
  double total = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Issue& is = d.issues()[j];
    if (is.is_real())
      total += -std::abs(real_of(a[j]) - real_of(b[j])) / is.span();
    else
      total += label_of(a[j]) == label_of(b[j]) ? 1.0 : 0.0;
  }
  return total / static_cast<double>(d.size());
}

}  // namespace

double offer_similarity(const NegotiationDomain& d, const Offer& a, const Offer& b) {
  d.check_offer(a);
  d.check_offer(b);
  return similarity_unchecked(d, a.values, b.values);
}

Offer random_offer(const NegotiationDomain& d, Rng& rng) {
  Offer x;
  x.values.reserve(d.size());
  for (const Issue& is : d.issues()) {
    if (is.is_real())
      x.values.emplace_back(rng.uniform(is.interval().lo, is.interval().hi));
    else
      x.values.emplace_back(static_cast<std::int32_t>(rng.index(is.label_count())));
  }
  return x;
}

Offer similarity_member_propose(const MemberContext& m, const std::optional<Offer>& opponent_last,
                         double t, Rng& rng, int budget) {
  if (budget <= 0) throw ConfigError("offer search needs a positive budget");
  const NegotiationDomain& d = *m.domain;
  const AgentProfile& a = *m.profile;
  if (opponent_last) d.check_offer(*opponent_last);
  double s = m.aspiration_at(t);
  std::vector<IssueValue> cur(d.size());
  std::vector<IssueValue> best_any, best_feasible;
  double best_u = -1.0;
  double best_sim = 0.0;
  bool have_feasible = false;
  for (int i = 0; i < budget; ++i) {
    double u = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const Issue& is = d.issues()[j];
      if (is.is_real())
        cur[j] = rng.uniform(is.interval().lo, is.interval().hi);
      else
        cur[j] = static_cast<std::int32_t>(rng.index(is.label_count()));
      u += a.weights[j] * a.valuations[j].score(is, cur[j]);
    }
    if (u > best_u) {
      best_u = u;
      best_any = cur;
    }
    if (opponent_last && u >= s) {
      double sim = similarity_unchecked(d, cur, opponent_last->values);
      if (!have_feasible || sim > best_sim) {
        have_feasible = true;
        best_sim = sim;
        best_feasible = cur;
      }
    }
  }
  // without a reference the top-utility sample already maximizes utility
  // among the feasible ones whenever any sample is feasible
  return Offer{have_feasible ? std::move(best_feasible) : std::move(best_any)};
}

}  // namespace teamnego