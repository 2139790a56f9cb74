#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "teamnego/errors.hpp"
#include "teamnego/rng.hpp"

namespace teamnego {

// Issues are either predictable-compatible (all team members want the same
// direction, e.g. a buyer team on price) or unpredictable (members may rank
// the options arbitrarily).
enum class IssueKind { PredictableCompatible, Unpredictable };

struct RealInterval {
  double lo = 0.0;
  double hi = 1.0;
};

struct Issue {
  std::string name;
  IssueKind kind = IssueKind::Unpredictable;
  std::variant<RealInterval, std::vector<std::string>> values;

  bool is_real() const { return std::holds_alternative<RealInterval>(values); }
  const RealInterval& interval() const { return std::get<RealInterval>(values); }
  const std::vector<std::string>& labels() const {
    return std::get<std::vector<std::string>>(values);
  }
  std::size_t label_count() const { return labels().size(); }
  double span() const { return interval().hi - interval().lo; }
};

// A value for one issue: a real number for interval issues, a label index
// for discrete ones.
using IssueValue = std::variant<double, std::int32_t>;

inline double real_of(const IssueValue& v) { return std::get<double>(v); }
inline std::int32_t label_of(const IssueValue& v) { return std::get<std::int32_t>(v); }

// Full contract covering every issue of a domain, indexed by issue id.
struct Offer {
  std::vector<IssueValue> values;
  bool operator==(const Offer&) const = default;
};

// Assignment restricted to the unpredictable issues, stored as label indices
// in ascending issue-id order. Equality and hashing are therefore canonical.
struct UnpredictablePartialOffer {
  std::vector<std::int32_t> labels;
  bool operator==(const UnpredictablePartialOffer&) const = default;
};

class NegotiationDomain {
 public:
  explicit NegotiationDomain(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const { return issues_; }
  const Issue& issue(int id) const { return issues_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return issues_.size(); }
  const std::vector<int>& pr_issues() const { return pr_; }
  const std::vector<int>& un_issues() const { return un_; }

  bool un_all_discrete() const;

  // Number of distinct unpredictable partial offers. Requires all
  // unpredictable issues discrete.
  std::uint64_t un_combo_count() const;

  // Mixed-radix rank of a partial offer, the canonical encoding used for
  // deterministic tie breaks. Inverse of partial_at.
  std::uint64_t rank_of(const UnpredictablePartialOffer& p) const;
  UnpredictablePartialOffer partial_at(std::uint64_t rank) const;

  // Restriction of a full offer to the unpredictable issues.
  UnpredictablePartialOffer project_unpredictable(const Offer& offer) const;

  void check_offer(const Offer& offer) const;
  void check_partial(const UnpredictablePartialOffer& p) const;

 private:
  std::vector<Issue> issues_;
  std::vector<int> pr_, un_;
  std::vector<std::uint64_t> un_place_;  // place value per un position
  std::uint64_t un_count_ = 1;
  bool un_discrete_ = true;
};

// Per-issue scoring into [0,1]. Real issues use an anchored linear form, so
// monotone direction is just the sign of (at_hi - at_lo).
struct LinearAnchors {
  double at_lo = 0.0;
  double at_hi = 1.0;
};

struct ValuationFunction {
  std::variant<LinearAnchors, std::vector<double>> fn;

  bool is_linear() const { return std::holds_alternative<LinearAnchors>(fn); }
  const LinearAnchors& anchors() const { return std::get<LinearAnchors>(fn); }
  const std::vector<double>& table() const { return std::get<std::vector<double>>(fn); }

  double score_real(const RealInterval& iv, double x) const;
  double score_label(std::int32_t idx) const;
  double score(const Issue& issue, const IssueValue& v) const;

  // Raw issue value with the highest (lowest) score. Ties on discrete issues
  // resolve to the lowest label index; a flat linear form resolves to lo.
  IssueValue best_value(const Issue& issue) const;
  IssueValue worst_value(const Issue& issue) const;

  double max_score(const Issue& issue) const;
  double min_score(const Issue& issue) const;
};

enum class RiskAttitude { Neutral, Averse, Seeking };

struct StrategyParams {
  double t_exp = 0.7;   // fraction of the deadline spent exploring
  double p_esc = 0.3;   // probability of skipping the learned model afterwards
  double w_team = 0.5;  // weight of the team acceptance estimate
  double w_opp = 0.5;   // weight of the opponent acceptance estimate
  RiskAttitude risk = RiskAttitude::Neutral;
};

struct AgentProfile {
  std::vector<double> weights;               // one per issue, sums to 1
  std::vector<ValuationFunction> valuations; // one per issue
  double ru = 0.5;                           // reservation utility
  double beta = 1.0;                         // concession exponent
  StrategyParams strategy;
};

// Set of unpredictable partial offers, stored as a bitset over ranks.
class ForbiddenPartialSet {
 public:
  ForbiddenPartialSet() = default;
  explicit ForbiddenPartialSet(std::uint64_t universe)
      : bits_(universe, false) {}

  std::uint64_t universe() const { return bits_.size(); }
  std::uint64_t count() const { return count_; }
  double ratio() const { return bits_.empty() ? 0.0 : static_cast<double>(count_) / static_cast<double>(bits_.size()); }

  bool contains(std::uint64_t rank) const { return bits_[rank]; }
  void insert(std::uint64_t rank) {
    if (!bits_[rank]) {
      bits_[rank] = true;
      ++count_;
    }
  }
  void merge(const ForbiddenPartialSet& other);

  std::vector<std::uint64_t> ranks() const;

 private:
  std::vector<bool> bits_;
  std::uint64_t count_ = 0;
};

// Additive utility of a full offer.
double utility(const NegotiationDomain& d, const AgentProfile& a, const Offer& x);

// Utility mass collected on the unpredictable issues alone.
double partial_utility(const NegotiationDomain& d, const AgentProfile& a,
                       const UnpredictablePartialOffer& p);

// Largest utility the predictable issues can still add.
double max_pr(const NegotiationDomain& d, const AgentProfile& a);

// True when no completion of p can reach the agent's reservation utility.
bool is_forbidden(const NegotiationDomain& d, const AgentProfile& a,
                  const UnpredictablePartialOffer& p);

ForbiddenPartialSet forbidden_set(const NegotiationDomain& d, const AgentProfile& a);

// partial_utility for every rank in order, the workhorse behind forbidden_set
// and the candidate filters
std::vector<double> all_partial_utilities(const NegotiationDomain& d,
                                          const AgentProfile& a);

bool is_unanimously_acceptable(const NegotiationDomain& d,
                               std::span<const AgentProfile> team, const Offer& x);

// Weak joint monotonicity of every predictable issue across the given agents.
bool check_pr_compatibility(const NegotiationDomain& d,
                            std::span<const AgentProfile> agents);

// Mean absolute utility difference over the full discretized offer space.
// Real issues are sampled on a pr_grid-point lattice.
double dissimilarity(const NegotiationDomain& d, const AgentProfile& a,
                     const AgentProfile& b, int pr_grid = 11);

double team_dissimilarity(const NegotiationDomain& d,
                          std::span<const AgentProfile> team, int pr_grid = 11);

// Weight mass on the unpredictable issues.
double unpredictable_importance(const NegotiationDomain& d, const AgentProfile& a);

enum class ImportanceBand { Low, Average, High };
ImportanceBand importance_band(double importance);

// Hotel booking domain used throughout the experiments: two predictable real
// issues (price, cancellation fee) and five discrete unpredictable issues
// with 6*4*5*5*7 = 4200 combinations.
NegotiationDomain build_case_study_domain();

enum class SimilarityClass { Similar, Average, Dissimilar };

const char* to_string(SimilarityClass c);
const char* to_string(ImportanceBand b);

// Team dissimilarity thresholds bounding the similarity classes.
struct SimilarityBands {
  double lower = 0.0;  // similar at or below
  double upper = 1.0;  // dissimilar at or above
};

// Thresholds for 4-member teams on the case study domain, the 25th and 75th
// percentiles of team_dissimilarity over 1000 unconstrained random teams
// (see calibrate_similarity_bands and docs/calibration.md).
SimilarityBands case_study_similarity_bands();

struct GenerationOptions {
  SimilarityBands bands = case_study_similarity_bands();
  int pr_grid = 11;
  int max_attempts = 10000;
  double team_ru = 0.5;
  double opponent_ru = 0.0;
  // optional unpredictable-importance constraints, pairs of (lo, hi)
  bool constrain_importance = false;
  double team_importance_lo = 0.0, team_importance_hi = 1.0;
  double opp_importance_lo = 0.0, opp_importance_hi = 1.0;
};

struct GeneratedProfiles {
  std::vector<AgentProfile> team;
  AgentProfile opponent;
  double team_dissimilarity = 0.0;
  int attempts = 0;
};

// Random profiles with normalized weights and rescaled valuation tables.
// Team members share the predictable-issue direction (price down, fee down on
// the case study), the opponent gets the reversed direction. Rejection
// sampling keeps team_dissimilarity inside the class band.
GeneratedProfiles generate_profiles(const NegotiationDomain& d, int n_members,
                                    SimilarityClass cls, std::uint64_t seed,
                                    const GenerationOptions& opt = {});

// Percentile calibration backing case_study_similarity_bands.
SimilarityBands calibrate_similarity_bands(const NegotiationDomain& d, int n_members,
                                           int n_samples, std::uint64_t seed,
                                           int pr_grid = 11);

}  // namespace teamnego
