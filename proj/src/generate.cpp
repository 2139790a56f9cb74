#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "teamnego/domain.hpp"
#include "teamnego/errors.hpp"

namespace teamnego {
namespace {

// Discrete valuation draws are skewed low (u^1.8) so that most alternatives
// score poorly and a few score well; flat uniform tables make every agent's
// utility distribution too symmetric and the pruning stages downstream never
// reach the rates observed on hotel-style domains.
constexpr double kTableSkew = 1.8;

// Team homogeneity trait. Each team draws theta in [0,1); low theta blends
// members toward a shared prototype (similar teams), high theta makes the
// weight draws concentrated and independent (dissimilar teams). The blend
// exponent and the quadratic concentration ramp were tuned against the
// pruning-rate table in docs/calibration.md.
constexpr double kBlendExponent = 0.6;
constexpr double kMaxConcentration = 4.0;

std::vector<double> raw_weights(std::size_t n, Rng& rng, double concentration) {
  std::vector<double> w(n);
  for (auto& v : w) v = std::pow(rng.uniform01(), concentration);
  return w;
}

std::vector<double> raw_table(std::size_t n, Rng& rng) {
  std::vector<double> t(n);
  for (auto& v : t) v = std::pow(rng.uniform01(), kTableSkew);
  return t;
}

std::vector<double> normalized(std::vector<double> w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  if (sum <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
    return w;
  }
  for (auto& v : w) v /= sum;
  return w;
}

// Rescale a raw table so the best alternative scores 1 and the worst 0.
std::vector<double> rescaled(std::vector<double> t, Rng& rng) {
  auto span = [](const std::vector<double>& x) {
    auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    return std::pair<double, double>(*mn, *mx - *mn);
  };
  auto [lo, width] = span(t);
  while (width < 1e-12) {
    t = raw_table(t.size(), rng);
    std::tie(lo, width) = span(t);
  }
  for (auto& v : t) v = (v - lo) / width;
  return t;
}

std::vector<double> blended(const std::vector<double>& own,
                            const std::vector<double>& proto, double lambda) {
  std::vector<double> out(own.size());
  for (std::size_t i = 0; i < own.size(); ++i)
    out[i] = (1.0 - lambda) * own[i] + lambda * proto[i];
  return out;
}

// Rescale the unpredictable share of the weight mass to a target importance
// while keeping relative weights inside each group.
void force_importance(const NegotiationDomain& d, AgentProfile& p, double target) {
  double un_mass = 0.0;
  for (int j : d.un_issues()) un_mass += p.weights[static_cast<std::size_t>(j)];
  double pr_mass = 1.0 - un_mass;
  if (un_mass <= 0.0 || pr_mass <= 0.0) return;
  for (int j : d.un_issues()) p.weights[static_cast<std::size_t>(j)] *= target / un_mass;
  for (int j : d.pr_issues())
    p.weights[static_cast<std::size_t>(j)] *= (1.0 - target) / pr_mass;
}

struct TeamSketch {
  double lambda = 0.0;
  double concentration = 1.0;
  std::vector<double> proto_weights;
  std::vector<std::vector<double>> proto_tables;   // per UN issue, raw
  std::vector<std::vector<double>> shared_pr;      // per discrete PR issue, rescaled
};

TeamSketch draw_sketch(const NegotiationDomain& d, Rng& rng) {
  TeamSketch s;
  double theta = rng.uniform01();
  s.lambda = std::pow(1.0 - theta, kBlendExponent);
  s.concentration = kMaxConcentration * theta * theta;
  s.proto_weights = raw_weights(d.size(), rng, s.concentration);
  for (int j : d.un_issues())
    s.proto_tables.push_back(raw_table(d.issues()[static_cast<std::size_t>(j)].label_count(), rng));
  for (int j : d.pr_issues()) {
    const Issue& is = d.issues()[static_cast<std::size_t>(j)];
    if (!is.is_real())
      s.shared_pr.push_back(rescaled(raw_table(is.label_count(), rng), rng));
    else
      s.shared_pr.emplace_back();
  }
  return s;
}

// One team member. Weights and unpredictable tables blend an independent draw
// with the team prototype; predictable issues take the shared team-side
// valuation so the compatibility requirement holds by construction.
AgentProfile draw_member(const NegotiationDomain& d, Rng& rng, const TeamSketch& s,
                         double ru) {
  AgentProfile p;
  p.weights = normalized(blended(raw_weights(d.size(), rng, s.concentration),
                                 s.proto_weights, s.lambda));
  p.valuations.resize(d.size());
  std::size_t un_at = 0, pr_at = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Issue& is = d.issues()[j];
    if (is.kind == IssueKind::PredictableCompatible) {
      if (!is.is_real())
        p.valuations[j].fn = s.shared_pr[pr_at];
      else
        p.valuations[j].fn = LinearAnchors{1.0, 0.0};
      ++pr_at;
    } else {
      auto own = raw_table(is.label_count(), rng);
      p.valuations[j].fn = rescaled(blended(own, s.proto_tables[un_at], s.lambda), rng);
      ++un_at;
    }
  }
  p.ru = ru;
  p.beta = rng.uniform(0.5, 1.0);
  return p;
}

// The opponent is independent of the team trait: plain normalized-uniform
// weights, fresh unpredictable tables, reversed predictable valuations.
AgentProfile draw_opponent(const NegotiationDomain& d, Rng& rng, const TeamSketch& s,
                           double ru) {
  AgentProfile p;
  p.weights = normalized(raw_weights(d.size(), rng, 1.0));
  p.valuations.resize(d.size());
  std::size_t pr_at = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Issue& is = d.issues()[j];
    if (is.kind == IssueKind::PredictableCompatible) {
      if (!is.is_real()) {
        std::vector<double> rev = s.shared_pr[pr_at];
        for (auto& v : rev) v = 1.0 - v;
        p.valuations[j].fn = std::move(rev);
      } else {
        p.valuations[j].fn = LinearAnchors{0.0, 1.0};
      }
      ++pr_at;
    } else {
      p.valuations[j].fn = rescaled(raw_table(is.label_count(), rng), rng);
    }
  }
  p.ru = ru;
  p.beta = 1.0;
  return p;
}

bool matches_class(double dis, SimilarityClass cls, const SimilarityBands& b) {
  switch (cls) {
    case SimilarityClass::Similar: return dis <= b.lower;
    case SimilarityClass::Dissimilar: return dis >= b.upper;
    case SimilarityClass::Average: return dis > b.lower && dis < b.upper;
  }
  return false;
}

std::vector<AgentProfile> draw_team(const NegotiationDomain& d, Rng& rng, int n_members,
                                    const GenerationOptions& opt, const TeamSketch& s) {
  std::vector<AgentProfile> team;
  team.reserve(static_cast<std::size_t>(n_members));
  for (int m = 0; m < n_members; ++m) {
    AgentProfile p = draw_member(d, rng, s, opt.team_ru);
    if (opt.constrain_importance)
      force_importance(d, p, rng.uniform(opt.team_importance_lo, opt.team_importance_hi));
    team.push_back(std::move(p));
  }
  return team;
}

}  // namespace

GeneratedProfiles generate_profiles(const NegotiationDomain& d, int n_members,
                                    SimilarityClass cls, std::uint64_t seed,
                                    const GenerationOptions& opt) {
  if (n_members < 2) throw GenerationError("team needs at least two members");
  if (d.pr_issues().empty() || d.un_issues().empty())
    throw GenerationError("domain needs both predictable and unpredictable issues");
  Rng rng(derive_seed(seed, {0x67656e70726f66ULL, static_cast<std::uint64_t>(n_members),
                             static_cast<std::uint64_t>(cls)}));
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    TeamSketch sketch = draw_sketch(d, rng);
    GeneratedProfiles out;
    out.team = draw_team(d, rng, n_members, opt, sketch);
    out.opponent = draw_opponent(d, rng, sketch, opt.opponent_ru);
    if (opt.constrain_importance)
      force_importance(d, out.opponent,
                       rng.uniform(opt.opp_importance_lo, opt.opp_importance_hi));
    out.team_dissimilarity = team_dissimilarity(d, out.team, opt.pr_grid);
    out.attempts = attempt;
    if (matches_class(out.team_dissimilarity, cls, opt.bands)) return out;
  }
  throw GenerationError("could not hit the requested similarity class within budget");
}

SimilarityBands calibrate_similarity_bands(const NegotiationDomain& d, int n_members,
                                           int n_samples, std::uint64_t seed,
                                           int pr_grid) {
  if (n_members < 2) throw GenerationError("team needs at least two members");
  if (n_samples < 4) throw GenerationError("calibration needs at least four samples");
  GenerationOptions opt;
  std::vector<double> dis;
  dis.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(derive_seed(seed, {0x63616c6962ULL, static_cast<std::uint64_t>(i)}));
    TeamSketch sketch = draw_sketch(d, rng);
    auto team = draw_team(d, rng, n_members, opt, sketch);
    dis.push_back(team_dissimilarity(d, team, pr_grid));
  }
  std::sort(dis.begin(), dis.end());
  auto quantile = [&](double q) {
    double pos = q * static_cast<double>(dis.size() - 1);
    auto idx = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(idx);
    if (idx + 1 >= dis.size()) return dis.back();
    return dis[idx] * (1.0 - frac) + dis[idx + 1] * frac;
  };
  return SimilarityBands{quantile(0.25), quantile(0.75)};
}

SimilarityBands case_study_similarity_bands() {
  // calibrate_similarity_bands(case study, 4 members, 1000 samples, seed 42),
  // see docs/calibration.md.
  return SimilarityBands{0.033089703292517057, 0.14776636633302737};
}

}  // namespace teamnego