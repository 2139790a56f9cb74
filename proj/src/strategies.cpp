#include "teamnego/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "teamnego/errors.hpp"

namespace teamnego {

double aspiration(double ru, double beta, double t) {
  if (!(ru >= 0.0 && ru <= 1.0)) throw ConfigError("aspiration needs ru in [0,1]");
  if (!(beta > 0.0)) throw ConfigError("aspiration needs beta > 0");
  if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("aspiration needs t in [0,1]");
  // the exact value never drops below ru; clamp so rounding cannot either
  return std::max(ru, 1.0 - (1.0 - ru) * std::pow(t, 1.0 / beta));
}

double aspiration(const AgentProfile& a, double t) { return aspiration(a.ru, a.beta, t); }

MemberContext::MemberContext(const NegotiationDomain& d, const AgentProfile& a)
    : domain(&d), profile(&a), pu(all_partial_utilities(d, a)), max_pr_mass(max_pr(d, a)) {}

double MemberContext::aspiration_at(double t) const { return aspiration(*profile, t); }

bool vote_on_offer(const MemberContext& m, const Offer& x, double t) {
  return utility(*m.domain, *m.profile, x) >= m.aspiration_at(t);
}

std::vector<std::uint64_t> candidate_pool(const MemberContext& m,
                                          const ForbiddenPartialSet& forbidden, double t) {
  if (forbidden.universe() != m.pu.size())
    throw DomainMismatchError("forbidden set sized for a different domain");
  double s = m.aspiration_at(t);
  std::vector<std::uint64_t> pool;
  for (std::uint64_t r = 0; r < m.pu.size(); ++r)
    if (!forbidden.contains(r) && m.pu[r] + m.max_pr_mass >= s) pool.push_back(r);
  return pool;
}

std::optional<std::uint64_t> propose_candidate_basic(const MemberContext& m,
                                                     const ForbiddenPartialSet& forbidden,
                                                     double t, Rng& rng) {
  auto pool = candidate_pool(m, forbidden, t);
  if (pool.empty()) return std::nullopt;
  return pool[rng.index(pool.size())];
}

std::vector<int> borda_rank(const MemberContext& m, std::span<const std::uint64_t> candidates) {
  for (auto r : candidates)
    if (r >= m.pu.size()) throw DomainMismatchError("borda candidate outside the domain");
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    double ui = m.pu[candidates[i]], uj = m.pu[candidates[j]];
    if (ui != uj) return ui > uj;
    return candidates[i] < candidates[j];
  });
  std::vector<int> scores(candidates.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    scores[order[pos]] = static_cast<int>(order.size() - 1 - pos);
  return scores;
}

IssueValue demand_pr_value(const MemberContext& m, int issue_j, double current_utility,
                           double t) {
  const NegotiationDomain& d = *m.domain;
  if (issue_j < 0 || static_cast<std::size_t>(issue_j) >= d.size())
    throw ConfigError("demand on an unknown issue");
  const Issue& is = d.issue(issue_j);
  if (is.kind != IssueKind::PredictableCompatible)
    throw ConfigError("demand only applies to predictable issues");
  const auto j = static_cast<std::size_t>(issue_j);
  const ValuationFunction& vf = m.profile->valuations[j];
  double w = m.profile->weights[j];
  double deficit = m.aspiration_at(t) - current_utility;
  if (deficit <= 0.0) return vf.worst_value(is);
  if (w <= 0.0 || w * vf.max_score(is) < deficit) return vf.best_value(is);
  if (is.is_real()) {
    const auto& an = vf.anchors();
    double target = deficit / w;
    if (target <= std::min(an.at_lo, an.at_hi)) return vf.worst_value(is);
    // at_lo != at_hi here, the flat case is swallowed by the branches above
    double z = (target - an.at_lo) / (an.at_hi - an.at_lo);
    return IssueValue{is.interval().lo + z * is.span()};
  }
  const auto& table = vf.table();
  std::int32_t pick = -1;
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(table.size()); ++v) {
    if (w * table[static_cast<std::size_t>(v)] < deficit) continue;
    if (pick < 0 || table[static_cast<std::size_t>(v)] < table[static_cast<std::size_t>(pick)])
      pick = v;
  }
  if (pick < 0) return vf.best_value(is);
  return IssueValue{pick};
}

bool is_satisfied(const MemberContext& m, double current_utility, double t) {
  return current_utility >= m.aspiration_at(t);
}

namespace {

std::optional<std::uint64_t> best_by(const MemberContext& m,
                                     const std::vector<std::uint64_t>& pool,
                                     const std::function<double(std::uint64_t)>& score) {
  if (pool.empty()) return std::nullopt;
  std::uint64_t best = pool[0];
  double best_score = score(pool[0]);
  for (std::size_t i = 1; i < pool.size(); ++i) {
    double s = score(pool[i]);
    if (s > best_score || (s == best_score && m.pu[pool[i]] > m.pu[best])) {
      best = pool[i];
      best_score = s;
    }
  }
  return best;
}

}  // namespace

std::optional<std::uint64_t> propose_candidate_bayesian(const MemberContext& m,
                                                        const ForbiddenPartialSet& forbidden,
                                                        double t, Rng& rng,
                                                        const AcceptanceModels& models) {
  if (!models.team || !models.opponent)
    throw ConfigError("bayesian proposal needs both acceptance models");
  auto pool = candidate_pool(m, forbidden, t);
  if (pool.empty()) return std::nullopt;
  const StrategyParams& sp = m.profile->strategy;
  // keep the draw order aligned with the basic rule during exploration
  if (t < sp.t_exp || rng.uniform01() < sp.p_esc) return pool[rng.index(pool.size())];
  const NegotiationDomain& d = *m.domain;
  return best_by(m, pool, [&](std::uint64_t r) {
    auto p = d.partial_at(r);
    return sp.w_team * models.team->posterior_accept(p) +
           sp.w_opp * models.opponent->posterior_accept(p);
  });
}

std::optional<std::uint64_t> propose_candidate_risk(const MemberContext& m,
                                                    const ForbiddenPartialSet& forbidden,
                                                    double t, Rng& rng, RiskAttitude attitude,
                                                    const AcceptanceModels& models) {
  auto pool = candidate_pool(m, forbidden, t);
  if (pool.empty()) return std::nullopt;
  if (attitude == RiskAttitude::Seeking) {
    std::uint64_t best = pool[0];
    for (auto r : pool)
      if (m.pu[r] > m.pu[best]) best = r;
    return best;
  }
  if (attitude != RiskAttitude::Averse) throw ConfigError("risk proposal needs a risk attitude");
  if (!models.opponent) throw ConfigError("risk averse proposal needs an opponent model");
  if (t < m.profile->strategy.t_exp) return pool[rng.index(pool.size())];
  const NegotiationDomain& d = *m.domain;
  std::uint64_t best = pool[0];
  double best_score = models.opponent->posterior_accept(d.partial_at(pool[0]));
  for (std::size_t i = 1; i < pool.size(); ++i) {
    double s = models.opponent->posterior_accept(d.partial_at(pool[i]));
    if (s > best_score) {
      best = pool[i];
      best_score = s;
    }
  }
  return best;
}

}  // namespace teamnego