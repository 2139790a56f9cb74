#include "teamnego/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <thread>

#include "teamnego/errors.hpp"
#include "teamnego/rng.hpp"
#include "teamnego/transcript.hpp"

namespace fs = std::filesystem;

namespace teamnego {

namespace {

// disjoint stream labels under the base seed
constexpr std::uint64_t kScenarioStream = 7;
constexpr std::uint64_t kRunStream = 11;

// shortest decimal form that parses back to the same double
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string two_digits(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

const nlohmann::json& need(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("experiment: missing key '") + key + "'");
  return *it;
}

void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("experiment: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("experiment: unknown key '" + it.key() + "'");
  }
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& into) {
  if (j.contains(key)) into = j[key].get<T>();
}

int parse_count(const std::string& digits, const std::string& whole) {
  int v = 0;
  const char* end = digits.data() + digits.size();
  auto [p, ec] = std::from_chars(digits.data(), end, v);
  if (ec != std::errc{} || p != end || v < 0)
    throw ConfigError("bad member count in team config '" + whole + "'");
  return v;
}

}  // namespace

std::string to_string(ExperimentTemplate k) {
  switch (k) {
    case ExperimentTemplate::SingleOpponent: return "single-opponent";
    case ExperimentTemplate::TeamVsTeam: return "team-vs-team";
    case ExperimentTemplate::BayesWeights: return "bayes-weights";
    case ExperimentTemplate::ReservationSweep: return "reservation-sweep";
    case ExperimentTemplate::RiskAttitudes: return "risk-attitudes";
  }
  throw ConfigError("unknown experiment template");
}

ExperimentTemplate experiment_template_from(const std::string& name) {
  if (name == "single-opponent") return ExperimentTemplate::SingleOpponent;
  if (name == "team-vs-team") return ExperimentTemplate::TeamVsTeam;
  if (name == "bayes-weights") return ExperimentTemplate::BayesWeights;
  if (name == "reservation-sweep") return ExperimentTemplate::ReservationSweep;
  if (name == "risk-attitudes") return ExperimentTemplate::RiskAttitudes;
  throw ConfigError("unknown experiment template '" + name + "'");
}

void validate(const ExperimentSpec& spec) {
  if (spec.classes.empty()) throw ConfigError("experiment: no similarity classes");
  if (spec.scenarios_per_class < 1)
    throw ConfigError("experiment: scenarios_per_class must be at least 1");
  if (spec.members < 1) throw ConfigError("experiment: members must be at least 1");
  if (spec.opponents.empty()) throw ConfigError("experiment: no opponents");
  if (spec.repetitions < 1) throw ConfigError("experiment: repetitions must be at least 1");
  if (spec.deadline_rounds < 0) throw ConfigError("experiment: negative deadline");
  if (!(spec.team_ru >= 0.0 && spec.team_ru <= 1.0))
    throw ConfigError("experiment: team_ru outside [0,1]");
  if (!(spec.opponent_ru >= 0.0 && spec.opponent_ru <= 1.0))
    throw ConfigError("experiment: opponent_ru outside [0,1]");
  if (spec.kind == ExperimentTemplate::ReservationSweep) {
    if (spec.ru_sweep.empty()) throw ConfigError("experiment: empty ru_sweep");
    for (double r : spec.ru_sweep)
      if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("experiment: ru_sweep value outside [0,1]");
  }
  if (spec.out_dir.empty()) throw ConfigError("experiment: empty out_dir");
  if (spec.parallel < 1) throw ConfigError("experiment: parallel must be at least 1");
  if (spec.pr_grid < 2) throw ConfigError("experiment: pr_grid must be at least 2");
  if (spec.frontier_budget < 1) throw ConfigError("experiment: frontier_budget must be at least 1");
  const std::vector<std::string> configs =
      spec.team_configs.empty() ? default_team_configs(spec) : spec.team_configs;
  for (const std::string& c : configs) {
    if (spec.kind == ExperimentTemplate::TeamVsTeam)
      (void)resolve_team_pair(c, spec.members);
    else
      (void)resolve_team_config(c, spec.members);
  }
}

nlohmann::ordered_json experiment_spec_to_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["template"] = to_string(spec.kind);
  j["classes"] = nlohmann::ordered_json::array();
  for (SimilarityClass c : spec.classes) j["classes"].push_back(to_string(c));
  j["scenarios_per_class"] = spec.scenarios_per_class;
  j["members"] = spec.members;
  j["opponents"] = nlohmann::ordered_json::array();
  for (OpponentFamily f : spec.opponents) j["opponents"].push_back(to_string(f));
  j["team_configs"] = spec.team_configs;
  j["repetitions"] = spec.repetitions;
  j["base_seed"] = spec.base_seed;
  j["deadline_rounds"] = spec.deadline_rounds;
  j["team_ru"] = spec.team_ru;
  j["opponent_ru"] = spec.opponent_ru;
  j["ru_sweep"] = spec.ru_sweep;
  j["out_dir"] = spec.out_dir;
  j["write_transcripts"] = spec.write_transcripts;
  j["parallel"] = spec.parallel;
  j["compute_pareto"] = spec.compute_pareto;
  j["pr_grid"] = spec.pr_grid;
  j["frontier_budget"] = spec.frontier_budget;
  return j;
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
  try {
    only_keys(j, {"template", "classes", "scenarios_per_class", "members", "opponents",
                  "team_configs", "repetitions", "base_seed", "deadline_rounds", "team_ru",
                  "opponent_ru", "ru_sweep", "out_dir", "write_transcripts", "parallel",
                  "compute_pareto", "pr_grid", "frontier_budget"});
    ExperimentSpec spec;
    spec.kind = experiment_template_from(need(j, "template").get<std::string>());
    if (j.contains("classes")) {
      spec.classes.clear();
      for (const auto& c : j["classes"])
        spec.classes.push_back(similarity_class_from(c.get<std::string>()));
    }
    read_if(j, "scenarios_per_class", spec.scenarios_per_class);
    read_if(j, "members", spec.members);
    if (j.contains("opponents")) {
      spec.opponents.clear();
      for (const auto& o : j["opponents"])
        spec.opponents.push_back(opponent_family_from(o.get<std::string>()));
    }
    read_if(j, "team_configs", spec.team_configs);
    read_if(j, "repetitions", spec.repetitions);
    read_if(j, "base_seed", spec.base_seed);
    read_if(j, "deadline_rounds", spec.deadline_rounds);
    read_if(j, "team_ru", spec.team_ru);
    read_if(j, "opponent_ru", spec.opponent_ru);
    read_if(j, "ru_sweep", spec.ru_sweep);
    read_if(j, "out_dir", spec.out_dir);
    read_if(j, "write_transcripts", spec.write_transcripts);
    read_if(j, "parallel", spec.parallel);
    read_if(j, "compute_pareto", spec.compute_pareto);
    read_if(j, "pr_grid", spec.pr_grid);
    read_if(j, "frontier_budget", spec.frontier_budget);
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment: ") + e.what());
  }
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw ConfigError("cannot read experiment spec '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("experiment spec '" + path + "': " + e.what());
  }
  return experiment_spec_from_json(j);
}

std::vector<std::string> default_team_configs(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentTemplate::SingleOpponent:
      return {"basic", "bayesian"};
    case ExperimentTemplate::BayesWeights: {
      std::vector<std::string> out;
      for (int k = 0; k <= spec.members; ++k) out.push_back("bayesian-" + std::to_string(k));
      return out;
    }
    case ExperimentTemplate::RiskAttitudes:
      return {"risk-averse", "risk-seeking"};
    case ExperimentTemplate::ReservationSweep:
      return {"basic"};
    case ExperimentTemplate::TeamVsTeam: {
      const std::string m = std::to_string(spec.members);
      return {"0-0", m + "-0", m + "-" + m};
    }
  }
  throw ConfigError("unknown experiment template");
}

TeamConfig resolve_team_config(const std::string& name, int members) {
  if (members < 1) throw ConfigError("team config needs at least one member");
  TeamConfig cfg;
  auto fill = [&](MemberStrategy s) {
    cfg.strategies.assign(static_cast<std::size_t>(members), s);
  };
  if (name == "basic") {
    fill(MemberStrategy::Basic);
  } else if (name == "bayesian") {
    fill(MemberStrategy::Bayesian);
  } else if (name == "risk-averse") {
    fill(MemberStrategy::RiskAverse);
  } else if (name == "risk-seeking") {
    fill(MemberStrategy::RiskSeeking);
  } else if (name == "similarity-voting") {
    cfg.mechanism = TeamMechanism::SimilarityVoting;
  } else if (name.rfind("bayesian-", 0) == 0) {
    int k = parse_count(name.substr(9), name);
    if (k > members)
      throw ConfigError("team config '" + name + "' exceeds the team size");
    fill(MemberStrategy::Basic);
    for (int i = 0; i < k; ++i) cfg.strategies[static_cast<std::size_t>(i)] = MemberStrategy::Bayesian;
  } else {
    throw ConfigError("unknown team config '" + name + "'");
  }
  return cfg;
}

std::pair<TeamConfig, TeamConfig> resolve_team_pair(const std::string& name, int members) {
  auto dash = name.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= name.size())
    throw ConfigError("team pair '" + name + "' must look like '<ka>-<kb>'");
  int ka = parse_count(name.substr(0, dash), name);
  int kb = parse_count(name.substr(dash + 1), name);
  if (ka > members || kb > members)
    throw ConfigError("team pair '" + name + "' exceeds the team size");
  return {resolve_team_config("bayesian-" + std::to_string(ka), members),
          resolve_team_config("bayesian-" + std::to_string(kb), members)};
}

AgentProfile reversed_pr(const NegotiationDomain& d, AgentProfile a) {
  for (int id : d.pr_issues()) {
    ValuationFunction& v = a.valuations[static_cast<std::size_t>(id)];
    if (v.is_linear()) {
      LinearAnchors an = v.anchors();
      v.fn = LinearAnchors{an.at_hi, an.at_lo};
    } else {
      std::vector<double> t = v.table();
      std::reverse(t.begin(), t.end());
      v.fn = std::move(t);
    }
  }
  return a;
}

std::vector<Scenario> make_scenarios(const ExperimentSpec& spec) {
  validate(spec);
  NegotiationDomain d = build_case_study_domain();
  const bool sweep = spec.kind == ExperimentTemplate::ReservationSweep;
  const std::vector<double> levels = sweep ? spec.ru_sweep : std::vector<double>{spec.team_ru};

  std::vector<Scenario> out;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    for (std::size_t ci = 0; ci < spec.classes.size(); ++ci) {
      for (int i = 0; i < spec.scenarios_per_class; ++i) {
        GenerationOptions opt;
        opt.team_ru = levels[li];
        opt.opponent_ru = spec.opponent_ru;
        std::uint64_t seed = derive_seed(
            spec.base_seed,
            {kScenarioStream, static_cast<std::uint64_t>(li), static_cast<std::uint64_t>(ci),
             static_cast<std::uint64_t>(i), 0});
        GeneratedProfiles g = generate_profiles(d, spec.members, spec.classes[ci], seed, opt);

        Scenario s(d);
        s.id = std::string(to_string(spec.classes[ci])) +
               (sweep ? "-ru" + fmt(levels[li]) : "") + "-" + two_digits(i);
        s.similarity_class = spec.classes[ci];
        s.seed = seed;
        s.team_dissimilarity = g.team_dissimilarity;
        s.team = std::move(g.team);
        s.opponent = std::move(g.opponent);
        if (spec.kind == ExperimentTemplate::TeamVsTeam) {
          std::uint64_t seed_b = derive_seed(
              spec.base_seed,
              {kScenarioStream, static_cast<std::uint64_t>(li), static_cast<std::uint64_t>(ci),
               static_cast<std::uint64_t>(i), 1});
          GeneratedProfiles gb = generate_profiles(d, spec.members, spec.classes[ci], seed_b, opt);
          for (AgentProfile& m : gb.team) s.team_b.push_back(reversed_pr(d, std::move(m)));
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

void write_results_tsv(std::ostream& os, std::span<const RunResult> runs) {
  os << "run_id\tscenario_id\tscenario_class\topponent\tteam_config\tteam_ru\trepetition\t"
        "seed\toutcome\trounds\tteam_joint\topponent_utility\tpareto_distance\tpruning_ratio\n";
  for (const RunResult& r : runs) {
    os << r.run_id << '\t' << r.scenario_id << '\t' << r.scenario_class << '\t' << r.opponent
       << '\t' << r.team_config << '\t' << fmt(r.team_ru) << '\t' << r.repetition << '\t'
       << r.seed << '\t' << to_string(r.outcome) << '\t' << r.rounds << '\t' << fmt(r.team_joint)
       << '\t' << fmt(r.opponent_utility) << '\t'
       << (r.pareto_distance ? fmt(*r.pareto_distance) : "nan") << '\t' << fmt(r.pruning_ratio)
       << '\n';
  }
}

void emit_plot_data(const std::string& out_dir, std::span<const SummaryRow> rows) {
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "plot_joint.tsv", std::ios::binary);
    if (!f.good()) throw ConfigError("cannot write plot_joint.tsv under '" + out_dir + "'");
    f << "scenario_class\topponent\tteam_config\tmean_joint\tagreement_rate\tn\n";
    for (const SummaryRow& r : rows)
      f << r.scenario_class << '\t' << r.opponent << '\t' << r.team_config << '\t'
        << fmt(r.mean_joint) << '\t' << fmt(r.agreement_rate) << '\t' << r.n << '\n';
  }
  {
    std::ofstream f(fs::path(out_dir) / "plot_pareto.tsv", std::ios::binary);
    if (!f.good()) throw ConfigError("cannot write plot_pareto.tsv under '" + out_dir + "'");
    f << "scenario_class\topponent\tteam_config\tsqrt_mean_joint\tmean_opp\tmean_pareto_dist\tn\n";
    for (const SummaryRow& r : rows)
      f << r.scenario_class << '\t' << r.opponent << '\t' << r.team_config << '\t'
        << fmt(std::sqrt(std::max(0.0, r.mean_joint))) << '\t' << fmt(r.mean_opp) << '\t'
        << fmt(r.mean_pareto_dist) << '\t' << r.n << '\n';
  }
}

namespace {

struct Job {
  std::size_t scenario = 0, opp = 0, cfg = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string run_id;
  std::string config_label;
};

struct Slot {
  RunResult result;
  std::string transcript;  // serialized when it may be written out
  bool violated = false;
  std::string error;  // unexpected failure, rethrown after the pool joins
};

Slot run_one(const ExperimentSpec& spec, const std::vector<Scenario>& scenarios,
             const std::vector<TeamConfig>& solo_cfgs,
             const std::vector<std::pair<TeamConfig, TeamConfig>>& pair_cfgs,
             const std::vector<std::optional<ParetoFrontier>>& frontiers, const Job& job) {
  const bool tvt = spec.kind == ExperimentTemplate::TeamVsTeam;
  const Scenario& sc = scenarios[job.scenario];
  Slot slot;
  RunResult& rr = slot.result;
  NegotiationTranscript tr(job.run_id);
  const std::uint64_t team_seed = derive_seed(job.seed, {0});
  const std::uint64_t other_seed = derive_seed(job.seed, {1});

  try {
    if (tvt) {
      const auto& pair = pair_cfgs[job.cfg];
      TeamParty a(sc.domain, sc.team, pair.first, team_seed, "team");
      TeamParty b(sc.domain, sc.team_b, pair.second, other_seed, "team-b");
      NegotiationOutcome out = run_negotiation(a, b, spec.deadline_rounds, tr);
      rr.outcome = out.kind;
      rr.rounds = out.round;
      rr.pruning_ratio = a.pruning_ratio();
      if (out.kind == OutcomeKind::Agreement) {
        const Offer& x = *out.contract;
        for (const AgentProfile& m : sc.team)
          rr.member_utilities.push_back(utility(sc.domain, m, x));
        rr.team_joint = joint_utility(rr.member_utilities);
        std::vector<double> ub;
        for (const AgentProfile& m : sc.team_b) ub.push_back(utility(sc.domain, m, x));
        rr.opponent_utility = joint_utility(ub);
        for (std::size_t i = 0; i < sc.team.size(); ++i)
          if (rr.member_utilities[i] < sc.team[i].ru) slot.violated = true;
        for (std::size_t i = 0; i < sc.team_b.size(); ++i)
          if (ub[i] < sc.team_b[i].ru) slot.violated = true;
      }
    } else {
      const TeamConfig& cfg = solo_cfgs[job.cfg];
      TeamParty team(sc.domain, sc.team, cfg, team_seed, "team");
      OpponentConfig ocfg;
      ocfg.family = spec.opponents[job.opp];
      SoloParty opp(sc.domain, sc.opponent, ocfg, other_seed, to_string(ocfg.family));
      NegotiationOutcome out = run_negotiation(team, opp, spec.deadline_rounds, tr);
      const ParetoFrontier* front =
          frontiers[job.scenario] ? &*frontiers[job.scenario] : nullptr;
      rr = score_outcome(sc.domain, sc.team, sc.opponent, out, front);
      rr.pruning_ratio = team.pruning_ratio();
      // every mediated agreement must leave each member at or above its floor
      if (out.kind == OutcomeKind::Agreement && cfg.mechanism == TeamMechanism::Mediated)
        for (std::size_t i = 0; i < sc.team.size(); ++i)
          if (rr.member_utilities[i] < sc.team[i].ru) slot.violated = true;
    }
  } catch (const ProtocolError&) {
    // the engine refused an agreement below a member floor mid-run
    slot.violated = true;
    rr.outcome = OutcomeKind::ProtocolFailure;
    rr.rounds = tr.events().empty() ? 0 : tr.events().back().round;
    rr.member_utilities.clear();
    rr.team_joint = 0.0;
    rr.opponent_utility = 0.0;
    rr.pareto_distance.reset();
  } catch (const std::exception& e) {
    slot.error = std::string(e.what());
    return slot;
  }

  rr.run_id = job.run_id;
  rr.scenario_id = sc.id;
  rr.scenario_class = to_string(sc.similarity_class);
  rr.opponent = tvt ? "team" : to_string(spec.opponents[job.opp]);
  rr.team_config = job.config_label;
  rr.team_ru = sc.team[0].ru;
  rr.repetition = job.rep;
  rr.seed = job.seed;
  if (spec.write_transcripts || slot.violated) {
    std::ostringstream ss;
    tr.write_jsonl(ss);
    slot.transcript = ss.str();
  }
  return slot;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const bool tvt = spec.kind == ExperimentTemplate::TeamVsTeam;
  std::vector<Scenario> scenarios = make_scenarios(spec);
  const std::vector<std::string> config_names =
      spec.team_configs.empty() ? default_team_configs(spec) : spec.team_configs;

  std::vector<TeamConfig> solo_cfgs;
  std::vector<std::pair<TeamConfig, TeamConfig>> pair_cfgs;
  for (const std::string& c : config_names) {
    if (tvt)
      pair_cfgs.push_back(resolve_team_pair(c, spec.members));
    else
      solo_cfgs.push_back(resolve_team_config(c, spec.members));
  }

  // one frontier per scenario, shared across configs and repetitions
  std::vector<std::optional<ParetoFrontier>> frontiers(scenarios.size());
  if (spec.compute_pareto && !tvt) {
    FrontierOptions fo;
    fo.pr_grid = spec.pr_grid;
    fo.budget = spec.frontier_budget;
    for (std::size_t s = 0; s < scenarios.size(); ++s)
      frontiers[s].emplace(
          pareto_frontier(scenarios[s].domain, scenarios[s].team, scenarios[s].opponent, fo));
  }

  const std::size_t n_opp = tvt ? 1 : spec.opponents.size();
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < scenarios.size(); ++s)
    for (std::size_t o = 0; o < n_opp; ++o)
      for (std::size_t c = 0; c < config_names.size(); ++c)
        for (int rep = 0; rep < spec.repetitions; ++rep) {
          Job job;
          job.scenario = s;
          job.opp = o;
          job.cfg = c;
          job.rep = rep;
          job.seed = derive_seed(spec.base_seed,
                                 {kRunStream, static_cast<std::uint64_t>(s),
                                  static_cast<std::uint64_t>(o), static_cast<std::uint64_t>(c),
                                  static_cast<std::uint64_t>(rep)});
          job.config_label = config_names[c];
          if (spec.kind == ExperimentTemplate::ReservationSweep)
            job.config_label += "-ru" + fmt(scenarios[s].team[0].ru);
          job.run_id = scenarios[s].id + "_" +
                       (tvt ? std::string("team") : to_string(spec.opponents[o])) + "_" +
                       config_names[c] + "_r" + two_digits(rep);
          jobs.push_back(std::move(job));
        }

  std::vector<Slot> slots(jobs.size());
  auto work = [&](std::size_t i) {
    slots[i] = run_one(spec, scenarios, solo_cfgs, pair_cfgs, frontiers, jobs[i]);
  };
  if (spec.parallel <= 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t n_workers =
        std::min(static_cast<std::size_t>(spec.parallel), jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) work(i);
      });
    for (std::thread& th : pool) th.join();
  }
  for (const Slot& slot : slots)
    if (!slot.error.empty()) throw Error("run '" + slot.result.run_id + "': " + slot.error);

  const fs::path out(spec.out_dir);
  fs::create_directories(out);
  if (spec.write_transcripts) fs::create_directories(out / "transcripts");

  ExperimentReport report;
  report.runs.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (spec.write_transcripts) {
      std::ofstream f(out / "transcripts" / (jobs[i].run_id + ".jsonl"), std::ios::binary);
      if (!f.good()) throw ConfigError("cannot write transcripts under '" + spec.out_dir + "'");
      f << slots[i].transcript;
    }
    if (slots[i].violated) {
      fs::create_directories(out / "violations");
      fs::path vp = out / "violations" / (jobs[i].run_id + ".jsonl");
      std::ofstream f(vp, std::ios::binary);
      if (!f.good()) throw ConfigError("cannot write violations under '" + spec.out_dir + "'");
      f << slots[i].transcript;
      report.violations.push_back(vp.string());
    }
    report.runs.push_back(std::move(slots[i].result));
  }

  report.summary = aggregate(report.runs);

  fs::path results_path = out / "results.tsv";
  {
    std::ofstream f(results_path, std::ios::binary);
    if (!f.good()) throw ConfigError("cannot write results under '" + spec.out_dir + "'");
    write_results_tsv(f, report.runs);
  }
  fs::path summary_path = out / "summary.tsv";
  {
    std::ofstream f(summary_path, std::ios::binary);
    if (!f.good()) throw ConfigError("cannot write summary under '" + spec.out_dir + "'");
    write_summary_tsv(f, report.summary);
  }
  emit_plot_data(spec.out_dir, report.summary);

  report.results_path = results_path.string();
  report.summary_path = summary_path.string();
  return report;
}

}  // namespace teamnego
