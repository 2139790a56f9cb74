#include "teamnego/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace teamnego {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainMismatchError(what);
}

}  // namespace

NegotiationDomain::NegotiationDomain(std::vector<Issue> issues)
    : issues_(std::move(issues)) {
  if (issues_.empty()) throw ConfigError("domain needs at least one issue");
  for (std::size_t j = 0; j < issues_.size(); ++j) {
    const Issue& is = issues_[j];
    if (is.is_real()) {
      if (!(is.interval().lo < is.interval().hi))
        throw ConfigError("issue '" + is.name + "': empty interval");
    } else if (is.labels().empty()) {
      throw ConfigError("issue '" + is.name + "': no labels");
    }
    if (is.kind == IssueKind::PredictableCompatible)
      pr_.push_back(static_cast<int>(j));
    else
      un_.push_back(static_cast<int>(j));
  }
  // mixed-radix place values over the unpredictable issues, last one least
  // significant
  un_place_.assign(un_.size(), 1);
  for (std::size_t k = un_.size(); k-- > 0;) {
    const Issue& is = issues_[static_cast<std::size_t>(un_[k])];
    if (is.is_real()) {
      un_discrete_ = false;
      continue;
    }
    if (k + 1 < un_.size()) {
      const Issue& next = issues_[static_cast<std::size_t>(un_[k + 1])];
      un_place_[k] = un_place_[k + 1] * (next.is_real() ? 1 : next.label_count());
    }
  }
  if (un_discrete_) {
    un_count_ = 1;
    for (int id : un_) un_count_ *= issues_[static_cast<std::size_t>(id)].label_count();
  }
}

bool NegotiationDomain::un_all_discrete() const { return un_discrete_; }

std::uint64_t NegotiationDomain::un_combo_count() const {
  if (!un_discrete_)
    throw UnsupportedDomainError("unpredictable issues must be discrete to enumerate");
  return un_count_;
}

std::uint64_t NegotiationDomain::rank_of(const UnpredictablePartialOffer& p) const {
  check_partial(p);
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < un_.size(); ++k)
    r += static_cast<std::uint64_t>(p.labels[k]) * un_place_[k];
  return r;
}

UnpredictablePartialOffer NegotiationDomain::partial_at(std::uint64_t rank) const {
  if (rank >= un_combo_count()) throw Error("partial offer rank out of range");
  UnpredictablePartialOffer p;
  p.labels.resize(un_.size());
  for (std::size_t k = 0; k < un_.size(); ++k) {
    p.labels[k] = static_cast<std::int32_t>(rank / un_place_[k]);
    rank %= un_place_[k];
  }
  return p;
}

UnpredictablePartialOffer NegotiationDomain::project_unpredictable(const Offer& offer) const {
  check_offer(offer);
  if (!un_discrete_)
    throw UnsupportedDomainError("cannot project onto continuous unpredictable issues");
  UnpredictablePartialOffer p;
  p.labels.reserve(un_.size());
  for (int id : un_) p.labels.push_back(label_of(offer.values[static_cast<std::size_t>(id)]));
  return p;
}

void NegotiationDomain::check_offer(const Offer& offer) const {
  require(offer.values.size() == issues_.size(), "offer does not cover the domain");
  for (std::size_t j = 0; j < issues_.size(); ++j) {
    const Issue& is = issues_[j];
    if (is.is_real()) {
      require(std::holds_alternative<double>(offer.values[j]),
              "expected a real value");
      double x = real_of(offer.values[j]);
      double eps = 1e-9 * std::max(1.0, std::abs(is.span()));
      require(x >= is.interval().lo - eps && x <= is.interval().hi + eps,
              "real value out of range");
    } else {
      require(std::holds_alternative<std::int32_t>(offer.values[j]),
              "expected a label index");
      std::int32_t v = label_of(offer.values[j]);
      require(v >= 0 && static_cast<std::size_t>(v) < is.label_count(),
              "label index out of range");
    }
  }
}

void NegotiationDomain::check_partial(const UnpredictablePartialOffer& p) const {
  require(p.labels.size() == un_.size(),
          "partial offer must cover exactly the unpredictable issues");
  for (std::size_t k = 0; k < un_.size(); ++k) {
    const Issue& is = issues_[static_cast<std::size_t>(un_[k])];
    if (is.is_real())
      throw UnsupportedDomainError("partial offers need discrete unpredictable issues");
    require(p.labels[k] >= 0 && static_cast<std::size_t>(p.labels[k]) < is.label_count(),
            "label index out of range");
  }
}

double ValuationFunction::score_real(const RealInterval& iv, double x) const {
  const auto& a = anchors();
  double z = (x - iv.lo) / (iv.hi - iv.lo);
  return a.at_lo + (a.at_hi - a.at_lo) * z;
}

double ValuationFunction::score_label(std::int32_t idx) const {
  return table()[static_cast<std::size_t>(idx)];
}

double ValuationFunction::score(const Issue& issue, const IssueValue& v) const {
  if (issue.is_real()) return score_real(issue.interval(), real_of(v));
  return score_label(label_of(v));
}

IssueValue ValuationFunction::best_value(const Issue& issue) const {
  if (issue.is_real()) {
    const auto& a = anchors();
    return a.at_hi > a.at_lo ? issue.interval().hi : issue.interval().lo;
  }
  const auto& t = table();
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] > t[best]) best = i;
  return static_cast<std::int32_t>(best);
}

IssueValue ValuationFunction::worst_value(const Issue& issue) const {
  if (issue.is_real()) {
    const auto& a = anchors();
    return a.at_hi < a.at_lo ? issue.interval().hi : issue.interval().lo;
  }
  const auto& t = table();
  std::size_t worst = 0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] < t[worst]) worst = i;
  return static_cast<std::int32_t>(worst);
}

double ValuationFunction::max_score(const Issue& issue) const {
  return score(issue, best_value(issue));
}

double ValuationFunction::min_score(const Issue& issue) const {
  return score(issue, worst_value(issue));
}

void ForbiddenPartialSet::merge(const ForbiddenPartialSet& other) {
  if (bits_.size() != other.bits_.size())
    throw DomainMismatchError("forbidden sets over different spaces");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (other.bits_[i] && !bits_[i]) {
      bits_[i] = true;
      ++count_;
    }
}

std::vector<std::uint64_t> ForbiddenPartialSet::ranks() const {
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

namespace {

void check_profile(const NegotiationDomain& d, const AgentProfile& a) {
  require(a.weights.size() == d.size() && a.valuations.size() == d.size(),
          "profile does not cover the domain");
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Issue& is = d.issues()[j];
    if (is.is_real())
      require(a.valuations[j].is_linear(), "real issue needs linear anchors");
    else
      require(!a.valuations[j].is_linear() &&
                  a.valuations[j].table().size() == is.label_count(),
              "discrete issue needs a full score table");
  }
}

}  // namespace

double utility(const NegotiationDomain& d, const AgentProfile& a, const Offer& x) {
  check_profile(d, a);
  d.check_offer(x);
  double u = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j)
    u += a.weights[j] * a.valuations[j].score(d.issues()[j], x.values[j]);
  return u;
}

double partial_utility(const NegotiationDomain& d, const AgentProfile& a,
                       const UnpredictablePartialOffer& p) {
  check_profile(d, a);
  d.check_partial(p);
  double u = 0.0;
  const auto& un = d.un_issues();
  for (std::size_t k = 0; k < un.size(); ++k) {
    std::size_t j = static_cast<std::size_t>(un[k]);
    u += a.weights[j] * a.valuations[j].score_label(p.labels[k]);
  }
  return u;
}

double max_pr(const NegotiationDomain& d, const AgentProfile& a) {
  check_profile(d, a);
  double m = 0.0;
  for (int id : d.pr_issues()) {
    std::size_t j = static_cast<std::size_t>(id);
    m += a.weights[j] * a.valuations[j].max_score(d.issues()[j]);
  }
  return m;
}

bool is_forbidden(const NegotiationDomain& d, const AgentProfile& a,
                  const UnpredictablePartialOffer& p) {
  return partial_utility(d, a, p) + max_pr(d, a) < a.ru;
}

std::vector<double> all_partial_utilities(const NegotiationDomain& d,
                                          const AgentProfile& a) {
  check_profile(d, a);
  const std::uint64_t n = d.un_combo_count();
  const auto& un = d.un_issues();
  const std::size_t k = un.size();

  std::vector<std::vector<double>> term(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = static_cast<std::size_t>(un[i]);
    const auto& t = a.valuations[j].table();
    term[i].resize(t.size());
    for (std::size_t v = 0; v < t.size(); ++v) term[i][v] = a.weights[j] * t[v];
  }

  std::vector<double> out(n);
  std::vector<std::size_t> digit(k, 0);
  std::vector<double> prefix(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + term[i][0];
  for (std::uint64_t r = 0;;) {
    out[r] = prefix[k];
    if (++r == n) break;
    // advance the odometer, least significant digit last
    std::size_t i = k;
    while (i-- > 0) {
      if (++digit[i] < term[i].size()) break;
      digit[i] = 0;
    }
    for (std::size_t l = i; l < k; ++l) prefix[l + 1] = prefix[l] + term[l][digit[l]];
  }
  return out;
}

ForbiddenPartialSet forbidden_set(const NegotiationDomain& d, const AgentProfile& a) {
  auto pu = all_partial_utilities(d, a);
  double headroom = max_pr(d, a);
  ForbiddenPartialSet fs(pu.size());
  for (std::uint64_t r = 0; r < pu.size(); ++r)
    if (pu[r] + headroom < a.ru) fs.insert(r);
  return fs;
}

bool is_unanimously_acceptable(const NegotiationDomain& d,
                               std::span<const AgentProfile> team, const Offer& x) {
  if (team.empty()) throw ConfigError("empty team");
  for (const auto& a : team)
    if (utility(d, a, x) < a.ru) return false;
  return true;
}

bool check_pr_compatibility(const NegotiationDomain& d,
                            std::span<const AgentProfile> agents) {
  for (const auto& a : agents) check_profile(d, a);
  for (int id : d.pr_issues()) {
    std::size_t j = static_cast<std::size_t>(id);
    const Issue& is = d.issues()[j];
    if (is.is_real()) {
      bool up = false, down = false;
      for (const auto& a : agents) {
        const auto& an = a.valuations[j].anchors();
        if (an.at_hi > an.at_lo) up = true;
        if (an.at_hi < an.at_lo) down = true;
      }
      if (up && down) return false;
    } else {
      const std::size_t L = is.label_count();
      for (std::size_t a = 0; a < agents.size(); ++a)
        for (std::size_t b = 0; b < agents.size(); ++b) {
          if (a == b) continue;
          const auto& ta = agents[a].valuations[j].table();
          const auto& tb = agents[b].valuations[j].table();
          for (std::size_t v1 = 0; v1 < L; ++v1)
            for (std::size_t v2 = 0; v2 < L; ++v2)
              if (ta[v2] > ta[v1] && tb[v2] < tb[v1]) return false;
        }
    }
  }
  return true;
}

namespace {

// per-issue grid of weighted score differences between two agents
std::vector<std::vector<double>> delta_grids(const NegotiationDomain& d,
                                             const AgentProfile& a,
                                             const AgentProfile& b, int pr_grid,
                                             const std::vector<int>& ids) {
  std::vector<std::vector<double>> out;
  out.reserve(ids.size());
  for (int id : ids) {
    std::size_t j = static_cast<std::size_t>(id);
    const Issue& is = d.issues()[j];
    std::vector<double> g;
    if (is.is_real()) {
      g.resize(static_cast<std::size_t>(pr_grid));
      for (int k = 0; k < pr_grid; ++k) {
        double x = is.interval().lo +
                   is.span() * static_cast<double>(k) / static_cast<double>(pr_grid - 1);
        g[static_cast<std::size_t>(k)] =
            a.weights[j] * a.valuations[j].score_real(is.interval(), x) -
            b.weights[j] * b.valuations[j].score_real(is.interval(), x);
      }
    } else {
      g.resize(is.label_count());
      for (std::size_t v = 0; v < is.label_count(); ++v)
        g[v] = a.weights[j] * a.valuations[j].score_label(static_cast<std::int32_t>(v)) -
               b.weights[j] * b.valuations[j].score_label(static_cast<std::int32_t>(v));
    }
    out.push_back(std::move(g));
  }
  return out;
}

// all sums over the cartesian product of the given per-issue grids
std::vector<double> enumerate_sums(const std::vector<std::vector<double>>& grids,
                                   std::uint64_t budget) {
  std::uint64_t n = 1;
  for (const auto& g : grids) {
    n *= g.size();
    if (n > budget) throw BudgetError("offer space too large to enumerate");
  }
  std::vector<double> out;
  out.reserve(n);
  const std::size_t k = grids.size();
  std::vector<std::size_t> digit(k, 0);
  std::vector<double> prefix(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + grids[i][0];
  for (std::uint64_t r = 0;;) {
    out.push_back(prefix[k]);
    if (++r == n) break;
    std::size_t i = k;
    while (i-- > 0) {
      if (++digit[i] < grids[i].size()) break;
      digit[i] = 0;
    }
    for (std::size_t l = i; l < k; ++l) prefix[l + 1] = prefix[l] + grids[l][digit[l]];
  }
  return out;
}

}  // namespace

double dissimilarity(const NegotiationDomain& d, const AgentProfile& a,
                     const AgentProfile& b, int pr_grid) {
  if (pr_grid < 2) throw ConfigError("pr_grid must be at least 2");
  check_profile(d, a);
  check_profile(d, b);

  auto un_deltas = enumerate_sums(delta_grids(d, a, b, pr_grid, d.un_issues()), 1u << 26);
  auto pr_deltas = enumerate_sums(delta_grids(d, a, b, pr_grid, d.pr_issues()), 1u << 26);

  // mean over all (un, pr) pairs of |un_delta + pr_delta|, computed with the
  // pr part sorted so each un combo costs a binary search instead of a scan
  std::sort(pr_deltas.begin(), pr_deltas.end());
  std::vector<double> pfx(pr_deltas.size() + 1, 0.0);
  for (std::size_t i = 0; i < pr_deltas.size(); ++i) pfx[i + 1] = pfx[i] + pr_deltas[i];

  const double g = static_cast<double>(pr_deltas.size());
  double total = 0.0;
  for (double u : un_deltas) {
    auto it = std::lower_bound(pr_deltas.begin(), pr_deltas.end(), -u);
    std::size_t idx = static_cast<std::size_t>(it - pr_deltas.begin());
    double below = -u * static_cast<double>(idx) - pfx[idx];
    double above = u * (g - static_cast<double>(idx)) + (pfx.back() - pfx[idx]);
    total += below + above;
  }
  return total / (static_cast<double>(un_deltas.size()) * g);
}

double team_dissimilarity(const NegotiationDomain& d,
                          std::span<const AgentProfile> team, int pr_grid) {
  if (team.size() < 2) throw ConfigError("team dissimilarity needs at least two members");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < team.size(); ++i)
    for (std::size_t j = i + 1; j < team.size(); ++j) {
      sum += dissimilarity(d, team[i], team[j], pr_grid);
      ++pairs;
    }
  return sum / static_cast<double>(pairs);
}

double unpredictable_importance(const NegotiationDomain& d, const AgentProfile& a) {
  check_profile(d, a);
  double m = 0.0;
  for (int id : d.un_issues()) m += a.weights[static_cast<std::size_t>(id)];
  return m;
}

ImportanceBand importance_band(double importance) {
  if (importance < 0.33) return ImportanceBand::Low;
  if (importance < 0.66) return ImportanceBand::Average;
  return ImportanceBand::High;
}

NegotiationDomain build_case_study_domain() {
  std::vector<Issue> issues;
  issues.push_back(Issue{"price", IssueKind::PredictableCompatible, RealInterval{200, 400}});
  issues.push_back(Issue{"cancellation_fee", IssueKind::PredictableCompatible, RealInterval{0, 50}});
  issues.push_back(Issue{"arranged_foods", IssueKind::Unpredictable,
                         std::vector<std::string>{"none", "breakfast", "breakfast_lunch",
                                                  "breakfast_dinner", "lunch_dinner",
                                                  "full_board"}});
  issues.push_back(Issue{"room_type", IssueKind::Unpredictable,
                         std::vector<std::string>{"four_single", "two_twin",
                                                  "triple_plus_single", "apartment"}});
  issues.push_back(Issue{"payment_method", IssueKind::Unpredictable,
                         std::vector<std::string>{"cash", "credit_card", "bank_transfer",
                                                  "deferred_3mo", "deferred_6mo"}});
  issues.push_back(Issue{"room_orientation", IssueKind::Unpredictable,
                         std::vector<std::string>{"inner_garden", "main_street", "pool",
                                                  "sea_view", "outer_garden"}});
  issues.push_back(Issue{"free_amenity", IssueKind::Unpredictable,
                         std::vector<std::string>{"gym", "wifi", "drink", "spa",
                                                  "pool_service", "cable_tv",
                                                  "guided_tour"}});
  return NegotiationDomain(std::move(issues));
}

const char* to_string(SimilarityClass c) {
  switch (c) {
    case SimilarityClass::Similar: return "similar";
    case SimilarityClass::Average: return "average";
    case SimilarityClass::Dissimilar: return "dissimilar";
  }
  return "?";
}

const char* to_string(ImportanceBand b) {
  switch (b) {
    case ImportanceBand::Low: return "low";
    case ImportanceBand::Average: return "average";
    case ImportanceBand::High: return "high";
  }
  return "?";
}

}  // namespace teamnego
