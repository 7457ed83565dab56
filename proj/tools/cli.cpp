#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdbench/bench/experiment.hpp"
#include "mdbench/problems/instance_io.hpp"

namespace mdbench {
namespace {

// Raised for bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem = "best-approx";
  std::size_t n = 50;
  std::size_t t = 10;
  std::size_t p = 0;
  std::vector<double> m{0.0};
  std::vector<std::string> schedules;
  std::size_t iters = 1000;
  std::vector<double> epsilon;
  std::uint64_t seed = 0;
  std::string prox = "euclidean";
  std::string dist;
  std::string algorithm;
  std::optional<double> theta;
  std::string out;
  std::string plan;
};

std::vector<std::string> schedule_names() {
  std::vector<std::string> v;
  for (auto t : kAllScheduleTags) v.emplace_back(to_string(t));
  return v;
}

void add_instance_flags(CLI::App* cmd, Options& o, bool with_m = true) {
  cmd->add_option("--problem", o.problem, "best-approx | fts | covering-ball | max-linear")
      ->check(CLI::IsMember({"best-approx", "fts", "covering-ball", "max-linear"}));
  cmd->add_option("--n", o.n, "dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--t", o.t, "number of points / linear pieces")->check(CLI::PositiveNumber);
  cmd->add_option("--p", o.p, "number of affine constraints");
  cmd->add_option("--seed", o.seed, "instance seed");
  cmd->add_option("--dist", o.dist, "constraint data: uniform | normal")
      ->check(CLI::IsMember({"uniform", "normal"}));
  if (with_m) {
    cmd->add_option("--m", o.m, "weighting exponent(s), comma separated")->delimiter(',');
  }
}

void add_run_flags(CLI::App* cmd, Options& o) {
  add_instance_flags(cmd, o);
  cmd->add_option("--schedule", o.schedules, "step-size rule(s), comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember(schedule_names()));
  cmd->add_option("--iters", o.iters, "iteration count")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", o.epsilon, "accuracy for constrained runs")->delimiter(',');
  cmd->add_option("--prox", o.prox, "euclidean | entropy")
      ->check(CLI::IsMember({"euclidean", "entropy"}));
  cmd->add_option("--algorithm", o.algorithm, "constrained | constrained-multi (when p > 0)")
      ->check(CLI::IsMember({"constrained", "constrained-multi"}));
  cmd->add_option("--theta", o.theta, "bound on V(x*, x1)");
  cmd->add_option("--plan", o.plan, "experiment plan JSON (overrides instance flags)");
}

ExperimentPlan plan_from_options(const Options& o) {
  if (!o.plan.empty()) return plan_from_json(nlohmann::json::parse(read_text_file(o.plan)));
  ExperimentPlan plan;
  plan.instance.kind = *parse_problem_kind(o.problem);
  plan.instance.n = o.n;
  plan.instance.terms = o.t;
  plan.instance.constraints = o.p;
  plan.instance.distribution =
      o.dist.empty() ? Distribution::Uniform01 : *parse_distribution(o.dist);
  plan.seed = o.seed;
  plan.instance.seed = o.seed;
  plan.m_values = o.m;
  plan.iters = o.iters;
  plan.prox = *parse_prox(o.prox);
  plan.theta = o.theta;
  if (o.epsilon.size() > 1) throw UsageError("--epsilon takes one value here");
  if (!o.epsilon.empty()) plan.epsilon = o.epsilon.front();
  plan.schedules.clear();
  for (const auto& s : o.schedules) plan.schedules.push_back(*parse_schedule_tag(s));
  if (o.p > 0) {
    plan.algorithm = o.algorithm == "constrained-multi" ? Algorithm::ConstrainedMulti
                                                        : Algorithm::Constrained;
  } else if (!o.algorithm.empty()) {
    throw UsageError("--algorithm needs --p > 0");
  }
  return plan;
}

void check_plan(const ExperimentPlan& plan) {
  try {
    validate_plan(plan);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_run(const Options& o, std::ostream& out) {
  ExperimentPlan plan = plan_from_options(o);
  if (plan.schedules.empty()) plan.schedules = {ScheduleTag::TimeVarying};
  if (plan.algorithm != Algorithm::ConstrainedMulti && plan.schedules.size() != 1) {
    throw UsageError("run takes a single --schedule (use compare for several)");
  }
  if (plan.m_values.size() != 1) throw UsageError("run takes a single --m (use sweep-m for several)");
  check_plan(plan);
  const PreparedExperiment prep = prepare_experiment(plan);
  CellSpec cell{plan.algorithm == Algorithm::ConstrainedMulti
                    ? std::nullopt
                    : std::optional<ScheduleTag>(plan.schedules.front()),
                plan.m_values.front()};
  const SolveResult res = run_cell(plan, prep, cell);
  const std::string text = to_csv(trace_table(res, prep.reference, plan.algorithm));
  if (!o.out.empty()) write_text_file(o.out, text);
  nlohmann::json doc = summarize_cell(parse_csv(text), cell, plan.algorithm, to_string(res.stop_reason));
  doc["reference"] = {{"f_min", prep.reference.f_min},
                      {"method", std::string(to_string(prep.reference.method))},
                      {"tolerance", prep.reference.tolerance}};
  out << doc.dump(2) << "\n";
  return 0;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  ExperimentPlan plan = plan_from_options(o);
  if (o.plan.empty()) {
    if (plan.schedules.empty()) plan.schedules.assign(std::begin(kAllScheduleTags), std::end(kAllScheduleTags));
    plan.output_dir = o.out.empty() ? "compare_out" : o.out;
  } else if (!o.out.empty()) {
    plan.output_dir = o.out;
  }
  check_plan(plan);
  // Polyak needs f*; skip it rather than fail the whole comparison.
  InstanceSpec spec = plan.instance;
  spec.seed = plan.seed;
  const bool has_fstar = plan.prox == PsiKind::EuclideanHalfSq && make_objective(spec).known_fstar();
  if (!has_fstar) {
    std::erase(plan.schedules, ScheduleTag::Polyak);
    err << "note: polyak skipped (no known f*)\n";
  }
  const ExperimentOutput res = run_experiment(plan);
  out << res.summary.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.m.size() < 2) throw UsageError("sweep-m needs at least two --m values");
  ExperimentPlan plan = plan_from_options(o);
  if (plan.schedules.empty()) plan.schedules = {ScheduleTag::TimeVarying};
  check_plan(plan);
  const std::string text = to_csv(sweep_m(plan));
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
  return 0;
}

int cmd_constrained(const Options& o, std::ostream& out) {
  if (o.p == 0) throw UsageError("constrained needs --p >= 1");
  InstanceSpec spec;
  spec.kind = *parse_problem_kind(o.problem);
  spec.n = o.n;
  spec.terms = o.t;
  spec.constraints = o.p;
  spec.seed = o.seed;
  spec.distribution = o.dist.empty() ? Distribution::StandardNormal : *parse_distribution(o.dist);
  for (double e : o.epsilon) {
    if (!(e > 0.0)) throw UsageError("--epsilon must be positive");
  }
  for (double m : o.m) {
    if (!(m >= -1.0)) throw UsageError("--m must be >= -1");
  }
  const std::vector<double> eps =
      o.epsilon.empty() ? std::vector<double>{0.5, 0.25, 0.125, 0.0625, 0.03125} : o.epsilon;
  const Instance inst = make_instance(spec);
  const double theta = o.theta ? *o.theta : 2.0;
  const auto rows = compare_constrained(inst, eps, o.m, theta);
  out << to_csv(comparison_table(rows, true));
  if (!o.out.empty()) write_text_file(o.out, to_csv(comparison_table(rows, false)));
  return 0;
}

int cmd_gen(const Options& o, std::ostream& out) {
  InstanceSpec spec;
  spec.kind = *parse_problem_kind(o.problem);
  spec.n = o.n;
  spec.terms = o.t;
  spec.constraints = o.p;
  spec.seed = o.seed;
  spec.distribution = o.dist.empty() ? Distribution::Uniform01 : *parse_distribution(o.dist);
  const Instance inst = make_instance(spec);
  if (o.out.empty()) {
    out << instance_to_json(inst).dump(2) << "\n";
  } else {
    write_instance(inst, o.out);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mirror descent benchmark"};
  app.require_subcommand(1);
  Options run_o, cmp_o, sweep_o, con_o, gen_o;

  auto* run = app.add_subcommand("run", "single experiment, one CSV");
  add_run_flags(run, run_o);
  run->add_option("--out", run_o.out, "CSV path");

  auto* compare = app.add_subcommand("compare", "all step-size rules on one instance");
  add_run_flags(compare, cmp_o);
  compare->add_option("--out", cmp_o.out, "output directory");

  auto* sweep = app.add_subcommand("sweep-m", "gap curves over several m");
  sweep_o.m = {-1.0, 0.0, 1.0, 2.0, 5.0};
  add_run_flags(sweep, sweep_o);
  sweep->add_option("--out", sweep_o.out, "CSV path (stdout when absent)");

  auto* con = app.add_subcommand("constrained", "switching vs first-violator method table");
  con_o.problem = "max-linear";
  con_o.p = 50;
  con_o.m = {2.0};
  add_instance_flags(con, con_o);
  con->add_option("--epsilon", con_o.epsilon, "accuracies, comma separated")->delimiter(',');
  con->add_option("--theta", con_o.theta, "bound on V(x*, x1)");
  con->add_option("--out", con_o.out, "CSV path (no timing columns)");

  auto* gen = app.add_subcommand("gen", "emit instance JSON");
  add_instance_flags(gen, gen_o, false);
  gen->add_option("--out", gen_o.out, "JSON path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_o, out);
    if (compare->parsed()) return cmd_compare(cmp_o, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_o, out);
    if (con->parsed()) return cmd_constrained(con_o, out);
    if (gen->parsed()) return cmd_gen(gen_o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mdbench
