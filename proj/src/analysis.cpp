#include "teamnego/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <tuple>

#include "teamnego/errors.hpp"

namespace teamnego {

double joint_utility(std::span<const double> member_utilities) {
  if (member_utilities.empty()) throw ConfigError("joint utility needs at least one member");
  double prod = 1.0;
  for (double u : member_utilities) {
    if (!(u >= -1e-9 && u <= 1.0 + 1e-9))
      throw ConfigError("member utility outside the unit interval");
    prod *= std::clamp(u, 0.0, 1.0);
  }
  return prod;
}

ParetoFrontier::ParetoFrontier(std::vector<ParetoPoint> raw) {
  if (raw.empty()) throw ConfigError("a frontier needs at least one point");
  std::sort(raw.begin(), raw.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.team_joint != b.team_joint) return a.team_joint > b.team_joint;
    return a.opponent > b.opponent;
  });
  // right-to-left sweep: a point survives exactly when nothing with at least
  // its team joint offers the opponent as much
  double best_opp = -std::numeric_limits<double>::infinity();
  for (const auto& p : raw) {
    if (p.opponent > best_opp) {
      pts_.push_back(p);
      best_opp = p.opponent;
    }
  }
  std::reverse(pts_.begin(), pts_.end());
}

double ParetoFrontier::distance(const ParetoPoint& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : pts_)
    best = std::min(best, std::hypot(p.team_joint - q.team_joint, p.opponent - q.opponent));
  return best;
}

ParetoFrontier pareto_frontier(const NegotiationDomain& d, std::span<const AgentProfile> team,
                               const AgentProfile& opponent, const FrontierOptions& opt) {
  if (team.empty()) throw ConfigError("frontier needs at least one team member");
  bool any_real = false;
  for (const auto& is : d.issues()) any_real = any_real || is.is_real();
  if (any_real && opt.pr_grid < 2) throw ConfigError("pr_grid must be at least 2");

  std::uint64_t total = 1;
  std::vector<std::size_t> sizes;
  sizes.reserve(d.size());
  for (const auto& is : d.issues()) {
    std::uint64_t k = is.is_real() ? static_cast<std::uint64_t>(opt.pr_grid) : is.label_count();
    auto wide = static_cast<unsigned __int128>(total) * k;
    if (wide > opt.budget)
      throw ConfigError("discretized offer space exceeds the enumeration budget, "
                        "use a coarser pr_grid");
    total = static_cast<std::uint64_t>(wide);
    sizes.push_back(static_cast<std::size_t>(k));
  }

  std::vector<const AgentProfile*> parties;
  parties.reserve(team.size() + 1);
  for (const auto& a : team) parties.push_back(&a);
  parties.push_back(&opponent);

  // weighted per-issue scores per lattice step, summed in issue order so the
  // result is bit-identical to utility() on the same offer
  const std::size_t n_parties = parties.size();
  const std::size_t n_issues = d.size();
  std::vector<std::vector<std::vector<double>>> contrib(
      n_parties, std::vector<std::vector<double>>(n_issues));
  for (std::size_t p = 0; p < n_parties; ++p) {
    const AgentProfile& a = *parties[p];
    (void)max_pr(d, a);  // shape check
    for (std::size_t j = 0; j < n_issues; ++j) {
      const Issue& is = d.issues()[j];
      auto& col = contrib[p][j];
      col.resize(sizes[j]);
      for (std::size_t k = 0; k < sizes[j]; ++k) {
        double s;
        if (is.is_real()) {
          double x = is.interval().lo + is.span() * static_cast<double>(k) /
                                            static_cast<double>(opt.pr_grid - 1);
          s = a.valuations[j].score_real(is.interval(), x);
        } else {
          s = a.valuations[j].score_label(static_cast<std::int32_t>(k));
        }
        col[k] = a.weights[j] * s;
      }
    }
  }

  std::vector<ParetoPoint> pts;
  pts.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> digit(n_issues, 0);
  for (std::uint64_t step = 0; step < total; ++step) {
    double joint = 1.0;
    for (std::size_t p = 0; p + 1 < n_parties; ++p) {
      double u = 0.0;
      for (std::size_t j = 0; j < n_issues; ++j) u += contrib[p][j][digit[j]];
      joint *= u;
    }
    double opp_u = 0.0;
    for (std::size_t j = 0; j < n_issues; ++j) opp_u += contrib[n_parties - 1][j][digit[j]];
    pts.push_back({joint, opp_u});
    for (std::size_t j = n_issues; j-- > 0;) {
      if (++digit[j] < sizes[j]) break;
      digit[j] = 0;
    }
  }
  return ParetoFrontier(std::move(pts));
}

double pareto_distance(const ParetoPoint& agreement, const ParetoFrontier& frontier) {
  return frontier.distance(agreement);
}

RunResult score_outcome(const NegotiationDomain& d, std::span<const AgentProfile> team,
                        const AgentProfile& opponent, const NegotiationOutcome& out,
                        const ParetoFrontier* frontier) {
  if (team.empty()) throw ConfigError("scoring needs at least one team member");
  RunResult r;
  r.outcome = out.kind;
  r.rounds = out.round;
  if (out.kind == OutcomeKind::Agreement) {
    if (!out.contract) throw ProtocolError("agreement outcome without a contract");
    r.member_utilities.reserve(team.size());
    for (const auto& a : team) r.member_utilities.push_back(utility(d, a, *out.contract));
    r.team_joint = joint_utility(r.member_utilities);
    r.opponent_utility = utility(d, opponent, *out.contract);
    if (frontier) r.pareto_distance = frontier->distance({r.team_joint, r.opponent_utility});
  }
  return r;
}

namespace {

struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d1 = x - mean;
    mean += d1 / static_cast<double>(n);
    m2 += d1 * (x - mean);
  }
  double stddev() const {
    return n == 0 ? 0.0 : std::sqrt(std::max(0.0, m2 / static_cast<double>(n)));
  }
};

struct Cell {
  Welford joint;
  double sum_opp = 0.0;
  double sum_rounds = 0.0;
  double sum_dist = 0.0;
  std::size_t n = 0, n_agree = 0, n_dist = 0;
};

}  // namespace

std::vector<SummaryRow> aggregate(std::span<const RunResult> results) {
  if (results.empty()) throw ConfigError("nothing to aggregate");
  std::map<std::tuple<std::string, std::string, std::string>, Cell> cells;
  for (const auto& r : results) {
    auto& c = cells[{r.scenario_class, r.opponent, r.team_config}];
    ++c.n;
    c.joint.add(r.agreed() ? r.team_joint : 0.0);
    c.sum_opp += r.agreed() ? r.opponent_utility : 0.0;
    c.sum_rounds += r.rounds;
    if (r.agreed()) {
      ++c.n_agree;
      if (r.pareto_distance) {
        c.sum_dist += *r.pareto_distance;
        ++c.n_dist;
      }
    }
  }
  std::vector<SummaryRow> rows;
  rows.reserve(cells.size());
  for (const auto& [key, c] : cells) {
    SummaryRow row;
    std::tie(row.scenario_class, row.opponent, row.team_config) = key;
    double n = static_cast<double>(c.n);
    row.mean_joint = c.joint.mean;
    row.std_joint = c.joint.stddev();
    row.mean_opp = c.sum_opp / n;
    row.mean_pareto_dist = c.n_dist > 0 ? c.sum_dist / static_cast<double>(c.n_dist)
                                        : std::numeric_limits<double>::quiet_NaN();
    row.agreement_rate = static_cast<double>(c.n_agree) / n;
    row.mean_rounds = c.sum_rounds / n;
    row.n = c.n;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_tsv(std::ostream& os, std::span<const SummaryRow> rows) {
  os << "scenario_class\topponent\tteam_config\tmean_joint\tstd_joint\tmean_opp\t"
        "mean_pareto_dist\tagreement_rate\tmean_rounds\tn\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    os << r.scenario_class << '\t' << r.opponent << '\t' << r.team_config << '\t'
       << num(r.mean_joint) << '\t' << num(r.std_joint) << '\t' << num(r.mean_opp) << '\t'
       << num(r.mean_pareto_dist) << '\t' << num(r.agreement_rate) << '\t'
       << num(r.mean_rounds) << '\t' << r.n << '\n';
  }
}

SignTestResult paired_sign_test(std::span<const double> first, std::span<const double> second) {
  if (first.size() != second.size()) throw ConfigError("sign test needs matched pairs");
  SignTestResult r;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i] > second[i]) {
      ++r.n_positive;
      ++r.n_pairs;
    } else if (first[i] < second[i]) {
      ++r.n_pairs;
    }
  }
  if (r.n_pairs == 0) return r;
  // exact upper binomial tail at p = 1/2
  double n = r.n_pairs;
  double sum = 0.0;
  for (int k = r.n_positive; k <= r.n_pairs; ++k)
    sum += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                    n * std::numbers::ln2);
  r.p_value = std::clamp(sum, 0.0, 1.0);
  return r;
}

SignTestResult paired_sign_test_by_seed(std::span<const RunResult> first,
                                        std::span<const RunResult> second) {
  std::map<std::uint64_t, double> a, b;
  for (const auto& r : first)
    if (!a.emplace(r.seed, r.agreed() ? r.team_joint : 0.0).second)
      throw ConfigError("duplicate seed in the first run list");
  for (const auto& r : second)
    if (!b.emplace(r.seed, r.agreed() ? r.team_joint : 0.0).second)
      throw ConfigError("duplicate seed in the second run list");
  std::vector<double> x, y;
  for (const auto& [seed, v] : a) {
    auto it = b.find(seed);
    if (it != b.end()) {
      x.push_back(v);
      y.push_back(it->second);
    }
  }
  return paired_sign_test(x, y);
}

}  // namespace teamnego
