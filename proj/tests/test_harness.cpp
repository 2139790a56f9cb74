#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "teamnego/cli.hpp"
#include "teamnego/experiment.hpp"
#include "teamnego/scenario_io.hpp"

using namespace teamnego;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "teamnego_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << body;
}

std::vector<std::string> lines_of(const std::string& body) {
  std::vector<std::string> out;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, '\t')) out.push_back(f);
  return out;
}

int cli(std::vector<std::string> args) {
  std::vector<const char*> argv;
  argv.push_back("negsim");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

ExperimentSpec tiny_spec(const fs::path& out) {
  ExperimentSpec spec;
  spec.kind = ExperimentTemplate::SingleOpponent;
  spec.classes = {SimilarityClass::Average};
  spec.scenarios_per_class = 1;
  spec.members = 3;
  spec.opponents = {OpponentFamily::Conceder, OpponentFamily::Boulware};
  spec.team_configs = {"basic"};
  spec.repetitions = 2;
  spec.base_seed = 77;
  spec.deadline_rounds = 60;
  spec.out_dir = out.string();
  return spec;
}

// sign of the direction a linear valuation prefers on a real issue
double pr_direction(const AgentProfile& a, int issue_id) {
  const LinearAnchors& an = a.valuations[static_cast<std::size_t>(issue_id)].anchors();
  return an.at_hi - an.at_lo;
}

}  // namespace

TEST_CASE("enum names round trip") {
  CHECK(to_string(RiskAttitude::Neutral) == "neutral");
  CHECK(to_string(RiskAttitude::Averse) == "averse");
  CHECK(to_string(RiskAttitude::Seeking) == "seeking");
  CHECK(risk_attitude_from("averse") == RiskAttitude::Averse);
  CHECK_THROWS_AS(risk_attitude_from("bold"), ConfigError);

  CHECK(similarity_class_from("similar") == SimilarityClass::Similar);
  CHECK(similarity_class_from("average") == SimilarityClass::Average);
  CHECK(similarity_class_from("dissimilar") == SimilarityClass::Dissimilar);
  CHECK_THROWS_AS(similarity_class_from("identical"), ConfigError);

  CHECK(to_string(ExperimentTemplate::SingleOpponent) == "single-opponent");
  CHECK(to_string(ExperimentTemplate::TeamVsTeam) == "team-vs-team");
  CHECK(to_string(ExperimentTemplate::BayesWeights) == "bayes-weights");
  CHECK(to_string(ExperimentTemplate::ReservationSweep) == "reservation-sweep");
  CHECK(to_string(ExperimentTemplate::RiskAttitudes) == "risk-attitudes");
  for (auto k : {ExperimentTemplate::SingleOpponent, ExperimentTemplate::TeamVsTeam,
                 ExperimentTemplate::BayesWeights, ExperimentTemplate::ReservationSweep,
                 ExperimentTemplate::RiskAttitudes})
    CHECK(experiment_template_from(to_string(k)) == k);
  CHECK_THROWS_AS(experiment_template_from("two-towers"), ConfigError);
}

TEST_CASE("domain json round trip") {
  NegotiationDomain d = build_case_study_domain();
  nlohmann::ordered_json j = domain_to_json(d);
  NegotiationDomain back = domain_from_json(j);

  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Issue& a = d.issues()[i];
    const Issue& b = back.issues()[i];
    CHECK(a.name == b.name);
    CHECK(a.kind == b.kind);
    REQUIRE(a.is_real() == b.is_real());
    if (a.is_real()) {
      CHECK(a.interval().lo == b.interval().lo);
      CHECK(a.interval().hi == b.interval().hi);
    } else {
      CHECK(a.labels() == b.labels());
    }
  }
  CHECK(domain_to_json(back).dump() == j.dump());

  CHECK_THROWS_AS(issue_from_json(nlohmann::json{{"name", "x"}, {"kind", "weird"},
                                                 {"interval", {0.0, 1.0}}}),
                  ConfigError);
  CHECK_THROWS_AS(issue_from_json(nlohmann::json{{"kind", "unpredictable"},
                                                 {"labels", {"a", "b"}}}),
                  ConfigError);
  // an issue needs exactly one of interval and labels
  CHECK_THROWS_AS(issue_from_json(nlohmann::json{{"name", "x"},
                                                 {"kind", "unpredictable"},
                                                 {"interval", {0.0, 1.0}},
                                                 {"labels", {"a", "b"}}}),
                  ConfigError);
  CHECK_THROWS_AS(issue_from_json(nlohmann::json{{"name", "x"}, {"kind", "unpredictable"}}),
                  ConfigError);
  CHECK_THROWS_AS(issue_from_json(nlohmann::json{{"name", "x"},
                                                 {"kind", "unpredictable"},
                                                 {"labels", {"a", "b"}},
                                                 {"color", "red"}}),
                  ConfigError);
  // structural validation stays with the domain constructor
  CHECK_THROWS_AS(domain_from_json(nlohmann::json{{"issues", nlohmann::json::array()}}),
                  ConfigError);
}

TEST_CASE("profile json keeps every bit") {
  NegotiationDomain d = build_case_study_domain();
  GeneratedProfiles g = generate_profiles(d, 4, SimilarityClass::Average, 9);

  std::vector<AgentProfile> all = g.team;
  all.push_back(g.opponent);
  all[0].strategy.risk = RiskAttitude::Averse;
  all[1].strategy.t_exp = 1.0 / 3.0;

  for (const AgentProfile& a : all) {
    nlohmann::ordered_json j = profile_to_json(a);
    AgentProfile back = profile_from_json(j);

    REQUIRE(back.weights.size() == a.weights.size());
    for (std::size_t i = 0; i < a.weights.size(); ++i) CHECK(back.weights[i] == a.weights[i]);
    REQUIRE(back.valuations.size() == a.valuations.size());
    for (std::size_t i = 0; i < a.valuations.size(); ++i) {
      REQUIRE(back.valuations[i].is_linear() == a.valuations[i].is_linear());
      if (a.valuations[i].is_linear()) {
        CHECK(back.valuations[i].anchors().at_lo == a.valuations[i].anchors().at_lo);
        CHECK(back.valuations[i].anchors().at_hi == a.valuations[i].anchors().at_hi);
      } else {
        CHECK(back.valuations[i].table() == a.valuations[i].table());
      }
    }
    CHECK(back.ru == a.ru);
    CHECK(back.beta == a.beta);
    CHECK(back.strategy.t_exp == a.strategy.t_exp);
    CHECK(back.strategy.p_esc == a.strategy.p_esc);
    CHECK(back.strategy.w_team == a.strategy.w_team);
    CHECK(back.strategy.w_opp == a.strategy.w_opp);
    CHECK(back.strategy.risk == a.strategy.risk);
    CHECK(profile_to_json(back).dump() == j.dump());
  }

  CHECK(profile_to_json(all[0])["strategy"]["risk"] == "averse");

  nlohmann::ordered_json bad = profile_to_json(all[0]);
  bad["weights"].erase(0);
  CHECK_THROWS_AS(profile_from_json(bad), ConfigError);
  nlohmann::ordered_json bad2 = profile_to_json(all[0]);
  bad2["strategy"]["risk"] = "brave";
  CHECK_THROWS_AS(profile_from_json(bad2), ConfigError);
  nlohmann::ordered_json bad3 = profile_to_json(all[0]);
  bad3["hat"] = 1;
  CHECK_THROWS_AS(profile_from_json(bad3), ConfigError);
}

TEST_CASE("scenario json and file round trip") {
  NegotiationDomain d = build_case_study_domain();
  GeneratedProfiles g = generate_profiles(d, 3, SimilarityClass::Dissimilar, 21);

  Scenario s(d);
  s.id = "dissimilar-00";
  s.similarity_class = SimilarityClass::Dissimilar;
  s.seed = 21;
  s.team_dissimilarity = g.team_dissimilarity;
  s.team = g.team;
  s.opponent = g.opponent;

  nlohmann::ordered_json j = scenario_to_json(s);
  CHECK(!j.contains("team_b"));
  Scenario back = scenario_from_json(j);
  CHECK(back.id == s.id);
  CHECK(back.similarity_class == s.similarity_class);
  CHECK(back.seed == s.seed);
  CHECK(back.team_dissimilarity == s.team_dissimilarity);
  CHECK(back.team.size() == 3);
  CHECK(back.team_b.empty());
  CHECK(scenario_to_json(back).dump() == j.dump());

  // second team present exactly when non-empty
  s.team_b = g.team;
  for (auto& m : s.team_b) m = reversed_pr(d, m);
  nlohmann::ordered_json j2 = scenario_to_json(s);
  REQUIRE(j2.contains("team_b"));
  Scenario back2 = scenario_from_json(j2);
  CHECK(back2.team_b.size() == 3);
  CHECK(scenario_to_json(back2).dump() == j2.dump());

  fs::path dir = temp_dir("scenario_io");
  fs::path file = dir / "s.json";
  save_scenario(file.string(), s);
  Scenario loaded = load_scenario(file.string());
  CHECK(scenario_to_json(loaded).dump() == j2.dump());
  // file is valid pretty-printed json
  nlohmann::json reparsed = nlohmann::json::parse(slurp(file));
  CHECK(reparsed.at("id") == "dissimilar-00");

  // profiles must fit the domain
  nlohmann::ordered_json bad = j;
  bad["team"][0]["weights"].erase(0);
  bad["team"][0]["valuations"].erase(0);
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
  nlohmann::ordered_json bad2 = j;
  bad2["flavor"] = "salt";
  CHECK_THROWS_AS(scenario_from_json(bad2), ConfigError);
  CHECK_THROWS_AS(load_scenario((dir / "missing.json").string()), ConfigError);
}

TEST_CASE("experiment spec json defaults and validation") {
  ExperimentSpec min = experiment_spec_from_json(nlohmann::json{{"template", "single-opponent"}});
  CHECK(min.kind == ExperimentTemplate::SingleOpponent);
  CHECK(min.classes.size() == 3);
  CHECK(min.scenarios_per_class == 3);
  CHECK(min.members == 4);
  CHECK(min.opponents.size() == 4);
  CHECK(min.team_configs.empty());
  CHECK(min.repetitions == 5);
  CHECK(min.base_seed == 1);
  CHECK(min.deadline_rounds == 1000);
  CHECK(min.team_ru == 0.5);
  CHECK(min.opponent_ru == 0.0);
  CHECK(min.parallel == 1);
  CHECK(min.compute_pareto);
  CHECK(min.pr_grid == 11);

  ExperimentSpec full;
  full.kind = ExperimentTemplate::ReservationSweep;
  full.classes = {SimilarityClass::Dissimilar};
  full.scenarios_per_class = 2;
  full.members = 3;
  full.opponents = {OpponentFamily::Matcher};
  full.team_configs = {"bayesian-1"};
  full.repetitions = 7;
  full.base_seed = 42;
  full.deadline_rounds = 500;
  full.team_ru = 0.6;
  full.opponent_ru = 0.1;
  full.ru_sweep = {0.3, 0.7};
  full.out_dir = "elsewhere";
  full.write_transcripts = true;
  full.parallel = 2;
  full.compute_pareto = false;
  full.pr_grid = 5;
  full.frontier_budget = 1000000;
  nlohmann::ordered_json j = experiment_spec_to_json(full);
  ExperimentSpec back = experiment_spec_from_json(j);
  CHECK(experiment_spec_to_json(back).dump() == j.dump());
  CHECK(back.ru_sweep == full.ru_sweep);
  CHECK(back.write_transcripts);
  CHECK(back.opponents == full.opponents);

  auto reject = [](nlohmann::json j2) {
    CHECK_THROWS_AS(experiment_spec_from_json(j2), ConfigError);
  };
  reject({{"template", "frisbee"}});
  reject({{"template", "single-opponent"}, {"repetitions", 0}});
  reject({{"template", "single-opponent"}, {"members", 0}});
  reject({{"template", "single-opponent"}, {"scenarios_per_class", 0}});
  reject({{"template", "single-opponent"}, {"parallel", 0}});
  reject({{"template", "single-opponent"}, {"deadline_rounds", -1}});
  reject({{"template", "single-opponent"}, {"opponents", nlohmann::json::array()}});
  reject({{"template", "single-opponent"}, {"classes", nlohmann::json::array()}});
  reject({{"template", "reservation-sweep"}, {"ru_sweep", nlohmann::json::array()}});
  reject({{"template", "single-opponent"}, {"pr_grid", 1}});
  reject({{"template", "single-opponent"}, {"typo_field", 3}});
  reject({{"template", "single-opponent"}, {"team_ru", 1.5}});
}

TEST_CASE("team config names resolve") {
  TeamConfig basic = resolve_team_config("basic", 4);
  CHECK(basic.mechanism == TeamMechanism::Mediated);
  REQUIRE(basic.strategies.size() == 4);
  for (auto s : basic.strategies) CHECK(s == MemberStrategy::Basic);

  TeamConfig bayes = resolve_team_config("bayesian", 3);
  REQUIRE(bayes.strategies.size() == 3);
  for (auto s : bayes.strategies) CHECK(s == MemberStrategy::Bayesian);

  TeamConfig mixed = resolve_team_config("bayesian-2", 4);
  REQUIRE(mixed.strategies.size() == 4);
  CHECK(mixed.strategies[0] == MemberStrategy::Bayesian);
  CHECK(mixed.strategies[1] == MemberStrategy::Bayesian);
  CHECK(mixed.strategies[2] == MemberStrategy::Basic);
  CHECK(mixed.strategies[3] == MemberStrategy::Basic);
  CHECK(resolve_team_config("bayesian-0", 4).strategies ==
        std::vector<MemberStrategy>(4, MemberStrategy::Basic));
  CHECK(resolve_team_config("bayesian-4", 4).strategies ==
        std::vector<MemberStrategy>(4, MemberStrategy::Bayesian));

  TeamConfig averse = resolve_team_config("risk-averse", 2);
  for (auto s : averse.strategies) CHECK(s == MemberStrategy::RiskAverse);
  TeamConfig seeking = resolve_team_config("risk-seeking", 2);
  for (auto s : seeking.strategies) CHECK(s == MemberStrategy::RiskSeeking);

  TeamConfig sim = resolve_team_config("similarity-voting", 4);
  CHECK(sim.mechanism == TeamMechanism::SimilarityVoting);
  CHECK(sim.strategies.empty());

  CHECK_THROWS_AS(resolve_team_config("bayesian-5", 4), ConfigError);
  CHECK_THROWS_AS(resolve_team_config("bayesian-x", 4), ConfigError);
  CHECK_THROWS_AS(resolve_team_config("junk", 4), ConfigError);
  CHECK_THROWS_AS(resolve_team_config("", 4), ConfigError);

  auto pair = resolve_team_pair("2-0", 4);
  CHECK(pair.first.strategies == resolve_team_config("bayesian-2", 4).strategies);
  CHECK(pair.second.strategies == resolve_team_config("bayesian-0", 4).strategies);
  CHECK_THROWS_AS(resolve_team_pair("5-0", 4), ConfigError);
  CHECK_THROWS_AS(resolve_team_pair("2", 4), ConfigError);
  CHECK_THROWS_AS(resolve_team_pair("a-b", 4), ConfigError);

  ExperimentSpec spec;
  spec.members = 4;
  spec.kind = ExperimentTemplate::SingleOpponent;
  CHECK(default_team_configs(spec) == std::vector<std::string>{"basic", "bayesian"});
  spec.kind = ExperimentTemplate::BayesWeights;
  CHECK(default_team_configs(spec) ==
        std::vector<std::string>{"bayesian-0", "bayesian-1", "bayesian-2", "bayesian-3",
                                 "bayesian-4"});
  spec.kind = ExperimentTemplate::RiskAttitudes;
  CHECK(default_team_configs(spec) == std::vector<std::string>{"risk-averse", "risk-seeking"});
  spec.kind = ExperimentTemplate::ReservationSweep;
  CHECK(default_team_configs(spec) == std::vector<std::string>{"basic"});
  spec.kind = ExperimentTemplate::TeamVsTeam;
  CHECK(default_team_configs(spec) == std::vector<std::string>{"0-0", "4-0", "4-4"});
}

TEST_CASE("reversed pr profiles mirror the predictable issues") {
  NegotiationDomain d = build_case_study_domain();
  GeneratedProfiles g = generate_profiles(d, 4, SimilarityClass::Similar, 3);
  const AgentProfile& a = g.team[0];
  AgentProfile r = reversed_pr(d, a);

  CHECK(r.weights == a.weights);
  CHECK(r.ru == a.ru);
  CHECK(r.beta == a.beta);
  for (int id : d.pr_issues()) {
    auto idx = static_cast<std::size_t>(id);
    CHECK(r.valuations[idx].anchors().at_lo == a.valuations[idx].anchors().at_hi);
    CHECK(r.valuations[idx].anchors().at_hi == a.valuations[idx].anchors().at_lo);
  }
  for (int id : d.un_issues()) {
    auto idx = static_cast<std::size_t>(id);
    CHECK(r.valuations[idx].table() == a.valuations[idx].table());
  }

  AgentProfile rr = reversed_pr(d, r);
  CHECK(profile_to_json(rr).dump() == profile_to_json(a).dump());

  std::vector<AgentProfile> flipped;
  for (const auto& m : g.team) flipped.push_back(reversed_pr(d, m));
  CHECK(check_pr_compatibility(d, flipped));
}

TEST_CASE("scenario batches are deterministic and class banded") {
  ExperimentSpec spec;
  spec.kind = ExperimentTemplate::SingleOpponent;
  spec.scenarios_per_class = 2;
  spec.members = 4;
  spec.base_seed = 5;

  std::vector<Scenario> batch = make_scenarios(spec);
  REQUIRE(batch.size() == 6);
  CHECK(batch[0].id == "similar-00");
  CHECK(batch[1].id == "similar-01");
  CHECK(batch[2].id == "average-00");
  CHECK(batch[4].id == "dissimilar-00");

  std::set<std::string> ids;
  std::set<std::uint64_t> seeds;
  SimilarityBands bands = case_study_similarity_bands();
  for (const Scenario& s : batch) {
    ids.insert(s.id);
    seeds.insert(s.seed);
    REQUIRE(s.team.size() == 4);
    CHECK(s.team_b.empty());
    double dis = team_dissimilarity(s.domain, s.team);
    CHECK(dis == s.team_dissimilarity);
    if (s.similarity_class == SimilarityClass::Similar) CHECK(dis <= bands.lower);
    if (s.similarity_class == SimilarityClass::Average) {
      CHECK(dis > bands.lower);
      CHECK(dis < bands.upper);
    }
    if (s.similarity_class == SimilarityClass::Dissimilar) CHECK(dis >= bands.upper);
    // opposite direction on every predictable issue
    for (int id : s.domain.pr_issues()) {
      CHECK(pr_direction(s.team[0], id) * pr_direction(s.opponent, id) < 0.0);
    }
    for (const AgentProfile& m : s.team) CHECK(m.ru == 0.5);
    CHECK(s.opponent.ru == 0.0);
  }
  CHECK(ids.size() == 6);
  CHECK(seeds.size() == 6);

  std::vector<Scenario> again = make_scenarios(spec);
  REQUIRE(again.size() == batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    CHECK(scenario_to_json(again[i]).dump() == scenario_to_json(batch[i]).dump());

  ExperimentSpec tvt = spec;
  tvt.kind = ExperimentTemplate::TeamVsTeam;
  tvt.classes = {SimilarityClass::Average};
  tvt.scenarios_per_class = 1;
  std::vector<Scenario> duo = make_scenarios(tvt);
  REQUIRE(duo.size() == 1);
  REQUIRE(duo[0].team_b.size() == 4);
  CHECK(check_pr_compatibility(duo[0].domain, duo[0].team_b));
  for (int id : duo[0].domain.pr_issues())
    CHECK(pr_direction(duo[0].team[0], id) * pr_direction(duo[0].team_b[0], id) < 0.0);
  double dis_b = team_dissimilarity(duo[0].domain, duo[0].team_b);
  CHECK(dis_b > bands.lower);
  CHECK(dis_b < bands.upper);
}

TEST_CASE("tiny experiment grid end to end") {
  fs::path out_a = temp_dir("exp_a");
  ExperimentSpec spec = tiny_spec(out_a);
  ExperimentReport report = run_experiment(spec);

  REQUIRE(report.runs.size() == 4);
  CHECK(report.violations.empty());
  CHECK(report.runs[0].run_id == "average-00_conceder_basic_r00");
  CHECK(report.runs[1].run_id == "average-00_conceder_basic_r01");
  CHECK(report.runs[2].run_id == "average-00_boulware_basic_r00");
  CHECK(report.runs[3].run_id == "average-00_boulware_basic_r01");

  std::set<std::string> ids;
  std::set<std::uint64_t> seeds;
  for (const RunResult& r : report.runs) {
    ids.insert(r.run_id);
    seeds.insert(r.seed);
    CHECK(r.scenario_id == "average-00");
    CHECK(r.scenario_class == "average");
    CHECK(r.team_config == "basic");
    CHECK(r.team_ru == 0.5);
    CHECK(r.pruning_ratio >= 0.0);
    CHECK(r.pruning_ratio <= 1.0);
    if (r.agreed()) {
      REQUIRE(r.member_utilities.size() == 3);
      CHECK(r.team_joint > 0.0);
      REQUIRE(r.pareto_distance.has_value());
      CHECK(*r.pareto_distance >= 0.0);
      for (double u : r.member_utilities) CHECK(u >= 0.5);
    } else {
      CHECK(r.team_joint == 0.0);
      CHECK(!r.pareto_distance.has_value());
    }
  }
  CHECK(ids.size() == 4);
  CHECK(seeds.size() == 4);
  CHECK(report.runs[0].repetition == 0);
  CHECK(report.runs[1].repetition == 1);

  // summary has one cell per opponent family
  REQUIRE(report.summary.size() == 2);
  CHECK(report.summary[0].opponent == "boulware");
  CHECK(report.summary[1].opponent == "conceder");

  REQUIRE(fs::exists(out_a / "results.tsv"));
  REQUIRE(fs::exists(out_a / "summary.tsv"));
  REQUIRE(fs::exists(out_a / "plot_joint.tsv"));
  REQUIRE(fs::exists(out_a / "plot_pareto.tsv"));
  CHECK(!fs::exists(out_a / "transcripts"));

  std::string results = slurp(out_a / "results.tsv");
  std::vector<std::string> rl = lines_of(results);
  REQUIRE(rl.size() == 5);
  CHECK(rl[0] ==
        "run_id\tscenario_id\tscenario_class\topponent\tteam_config\tteam_ru\trepetition\t"
        "seed\toutcome\trounds\tteam_joint\topponent_utility\tpareto_distance\tpruning_ratio");
  for (std::size_t i = 1; i < rl.size(); ++i) {
    std::vector<std::string> f = fields_of(rl[i]);
    REQUIRE(f.size() == 14);
    CHECK(f[0] == report.runs[i - 1].run_id);
    CHECK(f[8] == to_string(report.runs[i - 1].outcome));
    CHECK(f[7] == std::to_string(report.runs[i - 1].seed));
  }

  // byte-identical on a second run of the same spec
  fs::path out_b = temp_dir("exp_b");
  ExperimentSpec spec_b = tiny_spec(out_b);
  run_experiment(spec_b);
  CHECK(slurp(out_b / "results.tsv") == results);
  CHECK(slurp(out_b / "summary.tsv") == slurp(out_a / "summary.tsv"));
  CHECK(slurp(out_b / "plot_pareto.tsv") == slurp(out_a / "plot_pareto.tsv"));

  // a worker pool changes nothing about the output
  fs::path out_c = temp_dir("exp_c");
  ExperimentSpec spec_c = tiny_spec(out_c);
  spec_c.parallel = 2;
  ExperimentReport par = run_experiment(spec_c);
  CHECK(slurp(out_c / "results.tsv") == results);
  REQUIRE(par.runs.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(par.runs[i].run_id == report.runs[i].run_id);

  // transcripts appear per run and replay byte for byte
  fs::path out_d = temp_dir("exp_d");
  ExperimentSpec spec_d = tiny_spec(out_d);
  spec_d.write_transcripts = true;
  run_experiment(spec_d);
  for (const RunResult& r : report.runs) {
    fs::path t = out_d / "transcripts" / (r.run_id + ".jsonl");
    REQUIRE(fs::exists(t));
    std::vector<std::string> tl = lines_of(slurp(t));
    REQUIRE(!tl.empty());
    nlohmann::json first = nlohmann::json::parse(tl.front());
    CHECK(first.at("run_id") == r.run_id);
    nlohmann::json last = nlohmann::json::parse(tl.back());
    CHECK(last.at("event_kind") == "outcome");
  }
  fs::path out_e = temp_dir("exp_e");
  ExperimentSpec spec_e = tiny_spec(out_e);
  spec_e.write_transcripts = true;
  run_experiment(spec_e);
  for (const RunResult& r : report.runs) {
    CHECK(slurp(out_e / "transcripts" / (r.run_id + ".jsonl")) ==
          slurp(out_d / "transcripts" / (r.run_id + ".jsonl")));
  }
}

TEST_CASE("reservation sweep regenerates teams per level") {
  fs::path out = temp_dir("exp_sweep");
  ExperimentSpec spec;
  spec.kind = ExperimentTemplate::ReservationSweep;
  spec.classes = {SimilarityClass::Average};
  spec.scenarios_per_class = 1;
  spec.members = 3;
  spec.opponents = {OpponentFamily::Conceder};
  spec.repetitions = 1;
  spec.base_seed = 13;
  spec.deadline_rounds = 40;
  spec.ru_sweep = {0.35, 0.65};
  spec.compute_pareto = false;
  spec.out_dir = out.string();

  std::vector<Scenario> batch = make_scenarios(spec);
  REQUIRE(batch.size() == 2);
  CHECK(batch[0].id == "average-ru0.35-00");
  CHECK(batch[1].id == "average-ru0.65-00");
  for (const AgentProfile& m : batch[0].team) CHECK(m.ru == 0.35);
  for (const AgentProfile& m : batch[1].team) CHECK(m.ru == 0.65);

  ExperimentReport report = run_experiment(spec);
  REQUIRE(report.runs.size() == 2);
  CHECK(report.runs[0].team_config == "basic-ru0.35");
  CHECK(report.runs[1].team_config == "basic-ru0.65");
  CHECK(report.runs[0].team_ru == 0.35);
  CHECK(report.runs[1].team_ru == 0.65);
  CHECK(report.runs[0].seed != report.runs[1].seed);
  CHECK(!report.runs[0].pareto_distance.has_value());
}

TEST_CASE("risk attitude template uses both styles") {
  fs::path out = temp_dir("exp_risk");
  ExperimentSpec spec;
  spec.kind = ExperimentTemplate::RiskAttitudes;
  spec.classes = {SimilarityClass::Average};
  spec.scenarios_per_class = 1;
  spec.members = 2;
  spec.opponents = {OpponentFamily::Conceder};
  spec.repetitions = 1;
  spec.base_seed = 19;
  spec.deadline_rounds = 40;
  spec.compute_pareto = false;
  spec.out_dir = out.string();

  ExperimentReport report = run_experiment(spec);
  REQUIRE(report.runs.size() == 2);
  CHECK(report.runs[0].team_config == "risk-averse");
  CHECK(report.runs[1].team_config == "risk-seeking");
}

TEST_CASE("team vs team pairs share the table") {
  fs::path out = temp_dir("exp_tvt");
  ExperimentSpec spec;
  spec.kind = ExperimentTemplate::TeamVsTeam;
  spec.classes = {SimilarityClass::Average};
  spec.scenarios_per_class = 1;
  spec.members = 2;
  spec.repetitions = 1;
  spec.base_seed = 23;
  spec.deadline_rounds = 40;
  spec.out_dir = out.string();

  ExperimentReport report = run_experiment(spec);
  REQUIRE(report.runs.size() == 3);
  CHECK(report.runs[0].team_config == "0-0");
  CHECK(report.runs[1].team_config == "2-0");
  CHECK(report.runs[2].team_config == "2-2");

  std::vector<Scenario> batch = make_scenarios(spec);
  REQUIRE(batch.size() == 1);
  for (const RunResult& r : report.runs) {
    CHECK(r.opponent == "team");
    CHECK(!r.pareto_distance.has_value());
    if (r.agreed()) {
      CHECK(r.team_joint > 0.0);
      CHECK(r.opponent_utility > 0.0);
    } else {
      CHECK(r.opponent_utility == 0.0);
    }
  }
}

TEST_CASE("plot exports") {
  fs::path dir = temp_dir("plots_empty");
  emit_plot_data(dir.string(), {});
  std::vector<std::string> jl = lines_of(slurp(dir / "plot_joint.tsv"));
  REQUIRE(jl.size() == 1);
  CHECK(jl[0] == "scenario_class\topponent\tteam_config\tmean_joint\tagreement_rate\tn");
  std::vector<std::string> pl = lines_of(slurp(dir / "plot_pareto.tsv"));
  REQUIRE(pl.size() == 1);
  CHECK(pl[0] ==
        "scenario_class\topponent\tteam_config\tsqrt_mean_joint\tmean_opp\tmean_pareto_dist\tn");

  std::vector<SummaryRow> rows(3);
  rows[0].scenario_class = "average";
  rows[0].opponent = "conceder";
  rows[0].team_config = "basic";
  rows[0].mean_joint = 0.49;
  rows[0].mean_opp = 0.25;
  rows[0].mean_pareto_dist = 0.125;
  rows[0].agreement_rate = 1.0;
  rows[0].n = 4;
  rows[1] = rows[0];
  rows[1].team_config = "bayesian";
  rows[1].mean_joint = 0.0;
  rows[2] = rows[0];
  rows[2].team_config = "similarity-voting";
  rows[2].mean_joint = 1.0;

  fs::path dir2 = temp_dir("plots_rows");
  emit_plot_data(dir2.string(), rows);
  std::vector<std::string> pl2 = lines_of(slurp(dir2 / "plot_pareto.tsv"));
  REQUIRE(pl2.size() == 4);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<std::string> f = fields_of(pl2[i + 1]);
    REQUIRE(f.size() == 7);
    double got = std::stod(f[3]);
    CHECK(std::abs(got - std::sqrt(rows[i].mean_joint)) <= 1e-12);
  }
  std::vector<std::string> jl2 = lines_of(slurp(dir2 / "plot_joint.tsv"));
  REQUIRE(jl2.size() == 4);
  CHECK(std::stod(fields_of(jl2[1])[3]) == 0.49);

  // mixed-team sweep lands one summary row per learner count
  fs::path out = temp_dir("exp_bayesk");
  ExperimentSpec spec;
  spec.kind = ExperimentTemplate::BayesWeights;
  spec.classes = {SimilarityClass::Average};
  spec.scenarios_per_class = 1;
  spec.members = 2;
  spec.opponents = {OpponentFamily::Conceder};
  spec.repetitions = 1;
  spec.base_seed = 29;
  spec.deadline_rounds = 40;
  spec.compute_pareto = false;
  spec.out_dir = out.string();
  ExperimentReport report = run_experiment(spec);
  REQUIRE(report.runs.size() == 3);
  std::vector<std::string> kl = lines_of(slurp(out / "plot_joint.tsv"));
  REQUIRE(kl.size() == 4);
  CHECK(fields_of(kl[1])[2] == "bayesian-0");
  CHECK(fields_of(kl[2])[2] == "bayesian-1");
  CHECK(fields_of(kl[3])[2] == "bayesian-2");
}

TEST_CASE("cli subcommands") {
  fs::path dir = temp_dir("cli");

  // gen-scenarios writes one json per scenario
  fs::path sdir = dir / "scenarios";
  CHECK(cli({"gen-scenarios", "--out", sdir.string(), "--seed", "31", "--per-class", "1",
             "--members", "3", "--classes", "dissimilar"}) == 0);
  fs::path sfile = sdir / "dissimilar-00.json";
  REQUIRE(fs::exists(sfile));
  Scenario s = load_scenario(sfile.string());
  CHECK(s.team.size() == 3);
  CHECK(s.similarity_class == SimilarityClass::Dissimilar);

  // frontier export is strictly monotone in both columns
  fs::path ffile = dir / "frontier.tsv";
  CHECK(cli({"frontier", "--scenario", sfile.string(), "--grid", "7", "--out",
             ffile.string()}) == 0);
  std::vector<std::string> fl = lines_of(slurp(ffile));
  REQUIRE(fl.size() >= 2);
  CHECK(fl[0] == "team_joint\topponent_utility");
  double prev_j = -1.0, prev_o = 2.0;
  for (std::size_t i = 1; i < fl.size(); ++i) {
    std::vector<std::string> f = fields_of(fl[i]);
    REQUIRE(f.size() == 2);
    double j = std::stod(f[0]), o = std::stod(f[1]);
    CHECK(j > prev_j);
    CHECK(o < prev_o);
    prev_j = j;
    prev_o = o;
  }

  // replay writes a deterministic transcript
  fs::path t1 = dir / "t1.jsonl";
  fs::path t2 = dir / "t2.jsonl";
  CHECK(cli({"replay", "--scenario", sfile.string(), "--opponent", "conceder", "--config",
             "basic", "--seed", "7", "--deadline", "50", "--out", t1.string()}) == 0);
  CHECK(cli({"replay", "--scenario", sfile.string(), "--opponent", "conceder", "--config",
             "basic", "--seed", "7", "--deadline", "50", "--out", t2.string()}) == 0);
  REQUIRE(fs::exists(t1));
  CHECK(slurp(t1) == slurp(t2));
  nlohmann::json last = nlohmann::json::parse(lines_of(slurp(t1)).back());
  CHECK(last.at("event_kind") == "outcome");

  // run executes a spec file and leaves it untouched
  fs::path spec_file = dir / "spec.json";
  ExperimentSpec spec = tiny_spec(dir / "run_out");
  spec.repetitions = 1;
  spec.opponents = {OpponentFamily::Conceder};
  spec.compute_pareto = false;
  spit(spec_file, experiment_spec_to_json(spec).dump(2) + "\n");
  std::string before = slurp(spec_file);
  CHECK(cli({"run", "--spec", spec_file.string()}) == 0);
  CHECK(slurp(spec_file) == before);
  CHECK(fs::exists(dir / "run_out" / "results.tsv"));
  CHECK(fs::exists(dir / "run_out" / "summary.tsv"));

  // --out overrides the spec's output directory
  fs::path other = dir / "other_out";
  CHECK(cli({"run", "--spec", spec_file.string(), "--out", other.string()}) == 0);
  CHECK(fs::exists(other / "results.tsv"));
  CHECK(slurp(other / "results.tsv") == slurp(dir / "run_out" / "results.tsv"));

  CHECK(cli({"run"}) != 0);
  CHECK(cli({"no-such-command"}) != 0);
  CHECK(cli({"run", "--spec", (dir / "missing.json").string()}) == 2);
  CHECK(cli({"--help"}) == 0);
}
