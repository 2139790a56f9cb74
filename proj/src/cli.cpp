#include "teamnego/cli.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teamnego/experiment.hpp"
#include "teamnego/rng.hpp"

namespace fs = std::filesystem;

namespace teamnego {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int do_run(const std::string& spec_path, const CLI::App* cmd, std::uint64_t seed, int reps,
           const std::string& out, int parallel, bool transcripts, int grid) {
  ExperimentSpec spec = load_experiment_spec(spec_path);
  if (cmd->count("--seed")) spec.base_seed = seed;
  if (cmd->count("--reps")) spec.repetitions = reps;
  if (cmd->count("--out")) spec.out_dir = out;
  if (cmd->count("--parallel")) spec.parallel = parallel;
  if (cmd->count("--grid")) spec.pr_grid = grid;
  if (transcripts) spec.write_transcripts = true;

  ExperimentReport report = run_experiment(spec);
  std::size_t agreements = 0;
  for (const RunResult& r : report.runs)
    if (r.agreed()) ++agreements;
  std::cout << "runs: " << report.runs.size() << '\n'
            << "agreements: " << agreements << '\n'
            << "results: " << report.results_path << '\n'
            << "summary: " << report.summary_path << '\n';
  for (const std::string& v : report.violations)
    std::cerr << "invariant violation, transcript at " << v << '\n';
  return report.violations.empty() ? 0 : 1;
}

int do_gen(const std::string& out, const std::string& template_name,
           const std::vector<std::string>& classes, int per_class, int members,
           std::uint64_t seed, double team_ru, double opponent_ru) {
  ExperimentSpec spec;
  spec.kind = experiment_template_from(template_name);
  spec.classes.clear();
  for (const std::string& c : classes) spec.classes.push_back(similarity_class_from(c));
  spec.scenarios_per_class = per_class;
  spec.members = members;
  spec.base_seed = seed;
  spec.team_ru = team_ru;
  spec.opponent_ru = opponent_ru;

  std::vector<Scenario> scenarios = make_scenarios(spec);
  fs::create_directories(out);
  for (const Scenario& s : scenarios)
    save_scenario((fs::path(out) / (s.id + ".json")).string(), s);
  std::cout << "wrote " << scenarios.size() << " scenarios under " << out << '\n';
  return 0;
}

int do_frontier(const std::string& scenario_path, int grid, std::uint64_t budget,
                const std::string& out) {
  Scenario s = load_scenario(scenario_path);
  FrontierOptions fo;
  fo.pr_grid = grid;
  fo.budget = budget;
  ParetoFrontier front = pareto_frontier(s.domain, s.team, s.opponent, fo);
  std::ofstream f(out, std::ios::binary);
  if (!f.good()) throw ConfigError("cannot write '" + out + "'");
  f << "team_joint\topponent_utility\n";
  for (const ParetoPoint& p : front.points()) f << fmt(p.team_joint) << '\t' << fmt(p.opponent) << '\n';
  std::cout << "frontier points: " << front.points().size() << '\n';
  return 0;
}

int do_replay(const std::string& scenario_path, const std::string& opponent,
              const std::string& config, std::uint64_t seed, int deadline, bool against_team_b,
              const std::string& out) {
  Scenario s = load_scenario(scenario_path);
  NegotiationTranscript tr(s.id + "_replay");
  TeamParty team(s.domain, s.team, resolve_team_config(config, static_cast<int>(s.team.size())),
                 derive_seed(seed, {0}), "team");
  NegotiationOutcome outcome;
  if (against_team_b) {
    if (s.team_b.empty()) throw ConfigError("scenario has no second team");
    TeamParty b(s.domain, s.team_b,
                resolve_team_config(config, static_cast<int>(s.team_b.size())),
                derive_seed(seed, {1}), "team-b");
    outcome = run_negotiation(team, b, deadline, tr);
  } else {
    OpponentConfig ocfg;
    ocfg.family = opponent_family_from(opponent);
    SoloParty opp(s.domain, s.opponent, ocfg, derive_seed(seed, {1}), to_string(ocfg.family));
    outcome = run_negotiation(team, opp, deadline, tr);
  }
  std::ofstream f(out, std::ios::binary);
  if (!f.good()) throw ConfigError("cannot write '" + out + "'");
  tr.write_jsonl(f);
  std::cout << "outcome=" << to_string(outcome.kind) << " round=" << outcome.round << '\n';
  return 0;
}

int do_calibrate(int samples, int members, std::uint64_t seed, int grid) {
  NegotiationDomain d = build_case_study_domain();
  SimilarityBands b = calibrate_similarity_bands(d, members, samples, seed, grid);
  std::cout << "lower=" << fmt(b.lower) << " upper=" << fmt(b.upper) << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"mediated negotiation team simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment spec end to end");
  std::string run_spec, run_out;
  std::uint64_t run_seed = 0;
  int run_reps = 0, run_parallel = 0, run_grid = 0;
  bool run_transcripts = false;
  run->add_option("--spec", run_spec, "experiment spec file")->required();
  run->add_option("--seed", run_seed, "override the base seed");
  run->add_option("--reps", run_reps, "override repetitions");
  run->add_option("--out", run_out, "override the output directory");
  run->add_option("--parallel", run_parallel, "worker threads");
  run->add_flag("--transcripts", run_transcripts, "write one transcript per run");
  run->add_option("--grid", run_grid, "frontier lattice points per real issue");

  auto* gen = app.add_subcommand("gen-scenarios", "generate scenario files");
  std::string gen_out, gen_template = "single-opponent";
  std::vector<std::string> gen_classes = {"similar", "average", "dissimilar"};
  std::uint64_t gen_seed = 1;
  int gen_per_class = 3, gen_members = 4;
  double gen_team_ru = 0.5, gen_opp_ru = 0.0;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--seed", gen_seed, "generator base seed");
  gen->add_option("--per-class", gen_per_class, "scenarios per similarity class");
  gen->add_option("--members", gen_members, "team size");
  gen->add_option("--classes", gen_classes, "similarity classes to generate");
  gen->add_option("--template", gen_template, "experiment template the scenarios target");
  gen->add_option("--team-ru", gen_team_ru, "member reservation utility");
  gen->add_option("--opponent-ru", gen_opp_ru, "opponent reservation utility");

  auto* fr = app.add_subcommand("frontier", "exact pareto frontier of a scenario");
  std::string fr_scenario, fr_out;
  int fr_grid = 11;
  std::uint64_t fr_budget = 2'000'000;
  fr->add_option("--scenario", fr_scenario, "scenario file")->required();
  fr->add_option("--grid", fr_grid, "lattice points per real issue");
  fr->add_option("--budget", fr_budget, "maximum enumerated contracts");
  fr->add_option("--out", fr_out, "output file")->required();

  auto* rp = app.add_subcommand("replay", "re-run one negotiation and dump its transcript");
  std::string rp_scenario, rp_opponent = "conceder", rp_config = "basic", rp_out;
  std::uint64_t rp_seed = 1;
  int rp_deadline = 1000;
  bool rp_team_b = false;
  rp->add_option("--scenario", rp_scenario, "scenario file")->required();
  rp->add_option("--opponent", rp_opponent, "opponent family");
  rp->add_option("--config", rp_config, "team config name");
  rp->add_option("--seed", rp_seed, "run seed");
  rp->add_option("--deadline", rp_deadline, "deadline in rounds");
  rp->add_flag("--team-b", rp_team_b, "negotiate against the scenario's second team");
  rp->add_option("--out", rp_out, "transcript file")->required();

  auto* cal = app.add_subcommand("calibrate", "recompute the similarity class bands");
  int cal_samples = 1000, cal_members = 4, cal_grid = 11;
  std::uint64_t cal_seed = 42;
  cal->add_option("--samples", cal_samples, "random teams to draw");
  cal->add_option("--members", cal_members, "team size");
  cal->add_option("--seed", cal_seed, "sampling seed");
  cal->add_option("--grid", cal_grid, "lattice points per real issue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed())
      return do_run(run_spec, run, run_seed, run_reps, run_out, run_parallel, run_transcripts,
                    run_grid);
    if (gen->parsed())
      return do_gen(gen_out, gen_template, gen_classes, gen_per_class, gen_members, gen_seed,
                    gen_team_ru, gen_opp_ru);
    if (fr->parsed()) return do_frontier(fr_scenario, fr_grid, fr_budget, fr_out);
    if (rp->parsed())
      return do_replay(rp_scenario, rp_opponent, rp_config, rp_seed, rp_deadline, rp_team_b,
                       rp_out);
    if (cal->parsed()) return do_calibrate(cal_samples, cal_members, cal_seed, cal_grid);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace teamnego
