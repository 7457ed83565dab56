#include "mdbench/bench/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "mdbench/bench/parallel.hpp"
#include "mdbench/problems/instance_io.hpp"

namespace mdbench {

using nlohmann::json;

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::MirrorDescent: return "mirror-descent";
    case Algorithm::Constrained: return "constrained";
    case Algorithm::ConstrainedMulti: return "constrained-multi";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (auto a : {Algorithm::MirrorDescent, Algorithm::Constrained, Algorithm::ConstrainedMulti}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view to_string(PsiKind k) noexcept {
  return k == PsiKind::EuclideanHalfSq ? "euclidean" : "entropy";
}

std::optional<PsiKind> parse_prox(std::string_view name) noexcept {
  if (name == "euclidean") return PsiKind::EuclideanHalfSq;
  if (name == "entropy") return PsiKind::NegEntropy;
  return std::nullopt;
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.instance.n == 0) throw std::invalid_argument("plan: n must be at least 1");
  if (plan.instance.kind != ProblemKind::BestApprox && plan.instance.terms == 0) {
    throw std::invalid_argument("plan: T must be at least 1");
  }
  if (plan.iters == 0) throw std::invalid_argument("plan: iters must be at least 1");
  if (plan.m_values.empty()) throw std::invalid_argument("plan: at least one m value is required");
  for (double m : plan.m_values) {
    if (!(m >= -1.0) || !std::isfinite(m)) throw std::invalid_argument("plan: every m must be >= -1");
  }
  if (plan.algorithm != Algorithm::ConstrainedMulti && plan.schedules.empty()) {
    throw std::invalid_argument("plan: at least one schedule is required");
  }
  if (plan.theta && !(*plan.theta > 0.0)) throw std::invalid_argument("plan: theta must be positive");
  const bool constrained = plan.algorithm != Algorithm::MirrorDescent;
  if (constrained) {
    if (plan.instance.constraints == 0) {
      throw std::invalid_argument("plan: constrained algorithms need p >= 1");
    }
    if (!plan.epsilon || !(*plan.epsilon > 0.0)) {
      throw std::invalid_argument("plan: constrained algorithms need epsilon > 0");
    }
    if (plan.prox != PsiKind::EuclideanHalfSq) {
      throw std::invalid_argument("plan: constrained runs use the Euclidean setup on the unit ball");
    }
  } else if (plan.instance.constraints != 0) {
    throw std::invalid_argument("plan: p > 0 needs a constrained algorithm");
  }
}

json plan_to_json(const ExperimentPlan& plan) {
  json tags = json::array();
  for (auto t : plan.schedules) tags.push_back(std::string(to_string(t)));
  json doc{{"instance", spec_to_json(plan.instance)},
           {"schedules", tags},
           {"m_values", plan.m_values},
           {"iters", plan.iters},
           {"epsilon", plan.epsilon ? json(*plan.epsilon) : json(nullptr)},
           {"output_dir", plan.output_dir},
           {"seed", plan.seed},
           {"prox", std::string(to_string(plan.prox))},
           {"theta", plan.theta ? json(*plan.theta) : json(nullptr)},
           {"algorithm", std::string(to_string(plan.algorithm))}};
  return doc;
}

ExperimentPlan plan_from_json(const json& doc) {
  ExperimentPlan plan;
  plan.instance = spec_from_json(doc.at("instance"));
  plan.schedules.clear();
  for (const auto& t : doc.at("schedules")) {
    const auto tag = parse_schedule_tag(t.get<std::string>());
    if (!tag) throw std::invalid_argument("plan: unknown schedule " + t.get<std::string>());
    plan.schedules.push_back(*tag);
  }
  plan.m_values = doc.at("m_values").get<std::vector<double>>();
  plan.iters = doc.at("iters").get<std::size_t>();
  if (doc.contains("epsilon") && !doc.at("epsilon").is_null()) {
    plan.epsilon = doc.at("epsilon").get<double>();
  }
  plan.output_dir = doc.value("output_dir", std::string("."));
  plan.seed = doc.value("seed", plan.instance.seed);
  const auto prox = parse_prox(doc.value("prox", std::string("euclidean")));
  if (!prox) throw std::invalid_argument("plan: unknown prox");
  plan.prox = *prox;
  if (doc.contains("theta") && !doc.at("theta").is_null()) plan.theta = doc.at("theta").get<double>();
  const auto alg = parse_algorithm(doc.value("algorithm", std::string("mirror-descent")));
  if (!alg) throw std::invalid_argument("plan: unknown algorithm");
  plan.algorithm = *alg;
  return plan;
}

PreparedExperiment prepare_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);
  InstanceSpec spec = plan.instance;
  spec.seed = plan.seed;
  Instance inst = make_instance(spec);
  const std::size_t n = spec.n;
  const bool simplex = plan.prox == PsiKind::NegEntropy;
  if (simplex && inst.objective.kind() == ProblemKind::BestApprox) {
    // The known optimal value belongs to the unit ball.
    inst.objective = Objective::best_approx(inst.objective.points().front());
  }
  FeasibleSet set = simplex ? FeasibleSet::simplex(n) : FeasibleSet::unit_ball(n);
  const ProxSetup setup = simplex ? ProxSetup::entropy() : ProxSetup::euclidean();
  const bool constrained = plan.algorithm != Algorithm::MirrorDescent;
  Point x1 = constrained ? Point::zeros(n) : default_start(set);
  const double theta = plan.theta ? *plan.theta : default_theta(set, setup);
  ReferenceSolution ref =
      constrained ? reference_solution_constrained(inst.objective, *inst.constraints, set, plan.iters)
                  : reference_solution(inst.objective, set, setup, plan.iters);
  return {std::move(inst), std::move(set), setup, std::move(x1), theta, ref};
}

CsvTable trace_table(const SolveResult& result, const ReferenceSolution& ref, Algorithm algorithm) {
  CsvTable t;
  for (auto c : kTraceColumns) t.header.emplace_back(c);
  const bool constrained = algorithm != Algorithm::MirrorDescent;
  std::optional<double> best;
  for (const auto& r : result.trace) {
    if (!constrained || r.productive.value_or(false)) {
      best = best ? std::min(*best, r.f_iterate) : r.f_iterate;
    }
    std::optional<double> gap_avg;
    if (r.f_avg) gap_avg = *r.f_avg - ref.f_min;
    std::optional<double> gap_best;
    if (best) gap_best = *best - ref.f_min;
    t.rows.push_back({std::to_string(r.k), format_double(r.gamma), format_double(r.f_iterate),
                      format_optional(r.f_avg), format_optional(best), format_optional(gap_avg),
                      format_optional(gap_best), format_optional(r.bound),
                      constrained ? std::string(*r.productive ? "1" : "0") : std::string(),
                      algorithm == Algorithm::ConstrainedMulti ? std::to_string(r.constraint_evals)
                                                               : std::string()});
  }
  return t;
}

std::string cell_file_name(const CellSpec& cell, Algorithm algorithm) {
  const std::string prefix = cell.schedule ? std::string(to_string(*cell.schedule))
                                           : std::string(to_string(algorithm));
  return prefix + "_m" + format_double(cell.m) + ".csv";
}

SolveResult run_cell(const ExperimentPlan& plan, const PreparedExperiment& prep,
                     const CellSpec& cell) {
  RunConfig cfg;
  cfg.m = cell.m;
  cfg.iters = plan.iters;
  cfg.theta = prep.theta;
  cfg.record_trace = true;
  const Objective& f = prep.instance.objective;
  const NormKind dual = prep.setup.dual_norm();
  switch (plan.algorithm) {
    case Algorithm::MirrorDescent:
      return mirror_descent(f, prep.setup, prep.set,
                            ScheduleKind::defaults(*cell.schedule, f.lipschitz(dual)), cfg, prep.x1);
    case Algorithm::Constrained: {
      const ConstraintBlock& g = *prep.instance.constraints;
      cfg.epsilon = plan.epsilon;
      return constrained_md(f, g, prep.setup, prep.set,
                            ScheduleKind::defaults(*cell.schedule, f.lipschitz(dual)),
                            ScheduleKind::defaults(*cell.schedule, g.lipschitz(dual)), cfg, prep.x1);
    }
    case Algorithm::ConstrainedMulti:
      cfg.epsilon = plan.epsilon;
      return constrained_md_multi(f, *prep.instance.constraints, prep.setup, prep.set, cfg, prep.x1);
  }
  throw std::logic_error("run_cell: unknown algorithm");
}

json summarize_cell(const CsvTable& table, const CellSpec& cell, Algorithm algorithm,
                    std::string_view stop_reason) {
  auto num = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json s;
  s["schedule"] = cell.schedule ? json(std::string(to_string(*cell.schedule))) : json(nullptr);
  s["m"] = cell.m;
  s["file"] = cell_file_name(cell, algorithm);
  s["stop_reason"] = std::string(stop_reason);
  s["rows"] = table.rows.size();
  if (table.rows.empty()) return s;
  const std::size_t last = table.rows.size() - 1;
  s["final_k"] = std::stoull(table.rows[last][table.column("k")]);
  s["final_f_avg"] = num(table.number(last, table.column("f_avg")));
  s["final_gap_avg"] = num(table.number(last, table.column("gap_avg")));
  s["final_gap_best"] = num(table.number(last, table.column("gap_best")));
  s["final_bound"] = num(table.number(last, table.column("bound")));
  std::optional<double> min_gap;
  const std::size_t gap_col = table.column("gap_avg");
  const std::size_t prod_col = table.column("productive");
  const std::size_t evals_col = table.column("constraint_evals");
  std::size_t productive = 0;
  std::size_t evals = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (auto g = table.number(r, gap_col)) min_gap = min_gap ? std::min(*min_gap, *g) : *g;
    if (table.rows[r][prod_col] == "1") ++productive;
    if (!table.rows[r][evals_col].empty()) evals += std::stoull(table.rows[r][evals_col]);
  }
  s["min_gap_avg"] = num(min_gap);
  if (algorithm != Algorithm::MirrorDescent) s["productive_count"] = productive;
  if (algorithm == Algorithm::ConstrainedMulti) s["constraint_evals"] = evals;
  return s;
}

namespace {

std::vector<CellSpec> plan_cells(const ExperimentPlan& plan) {
  std::vector<CellSpec> cells;
  if (plan.algorithm == Algorithm::ConstrainedMulti) {
    for (double m : plan.m_values) cells.push_back({std::nullopt, m});
    return cells;
  }
  for (auto tag : plan.schedules) {
    for (double m : plan.m_values) cells.push_back({tag, m});
  }
  return cells;
}

json reference_json(const ReferenceSolution& r) {
  return json{{"f_min", r.f_min},
              {"method", std::string(to_string(r.method))},
              {"tolerance", r.tolerance}};
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentPlan& plan) {
  const PreparedExperiment prep = prepare_experiment(plan);
  const auto cells = plan_cells(plan);
  std::filesystem::create_directories(plan.output_dir);

  std::vector<CsvTable> tables(cells.size());
  std::vector<std::string> stops(cells.size());
  parallel_for(cells.size(), worker_count(), [&](std::size_t i) {
    const SolveResult res = run_cell(plan, prep, cells[i]);
    tables[i] = trace_table(res, prep.reference, plan.algorithm);
    stops[i] = std::string(to_string(res.stop_reason));
  });

  ExperimentOutput out;
  json cell_docs = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string text = to_csv(tables[i]);
    const std::string path =
        (std::filesystem::path(plan.output_dir) / cell_file_name(cells[i], plan.algorithm)).string();
    write_text_file(path, text);
    out.files.push_back(path);
    // Summaries are always computed from the text that was written.
    cell_docs.push_back(summarize_cell(parse_csv(text), cells[i], plan.algorithm, stops[i]));
  }
  out.summary = json{{"plan", plan_to_json(plan)},
                     {"reference", reference_json(prep.reference)},
                     {"cells", cell_docs}};
  out.summary_path = (std::filesystem::path(plan.output_dir) / "summary.json").string();
  write_text_file(out.summary_path, out.summary.dump(2) + "\n");
  return out;
}

json resummarize(const json& summary, const std::string& dir) {
  const ExperimentPlan plan = plan_from_json(summary.at("plan"));
  json out = summary;
  json cells = json::array();
  for (const auto& c : summary.at("cells")) {
    CellSpec cell;
    if (!c.at("schedule").is_null()) {
      cell.schedule = parse_schedule_tag(c.at("schedule").get<std::string>());
      if (!cell.schedule) throw std::runtime_error("summary: unknown schedule");
    }
    cell.m = c.at("m").get<double>();
    const std::string path =
        (std::filesystem::path(dir) / c.at("file").get<std::string>()).string();
    cells.push_back(summarize_cell(parse_csv(read_text_file(path)), cell, plan.algorithm,
                                   c.at("stop_reason").get<std::string>()));
  }
  out["cells"] = cells;
  return out;
}

CsvTable sweep_m(const ExperimentPlan& plan) {
  if (plan.m_values.size() < 2) throw std::invalid_argument("sweep_m: need at least two m values");
  const PreparedExperiment prep = prepare_experiment(plan);
  std::vector<CellSpec> cells;
  for (double m : plan.m_values) {
    cells.push_back({plan.algorithm == Algorithm::ConstrainedMulti
                         ? std::nullopt
                         : std::optional<ScheduleTag>(plan.schedules.front()),
                     m});
  }
  std::vector<CsvTable> tables(cells.size());
  parallel_for(cells.size(), worker_count(), [&](std::size_t i) {
    tables[i] = trace_table(run_cell(plan, prep, cells[i]), prep.reference, plan.algorithm);
  });
  CsvTable out;
  out.header = {"m", "k", "gap_avg"};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t kc = tables[i].column("k");
    const std::size_t gc = tables[i].column("gap_avg");
    for (const auto& row : tables[i].rows) out.rows.push_back({format_double(cells[i].m), row[kc], row[gc]});
  }
  return out;
}

namespace {

template <class F>
ConstrainedRun timed(F&& run) {
  ConstrainedRun out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out.result = run();
  } catch (const NoProductiveSteps&) {
    out.error = "no-productive-steps";
  } catch (const std::exception&) {
    out.error = "error";
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

std::vector<ConstrainedComparison> compare_constrained(const Instance& instance,
                                                       const std::vector<double>& epsilons,
                                                       const std::vector<double>& m_values,
                                                       double theta) {
  if (!instance.constraints) throw std::invalid_argument("compare_constrained: instance has no constraints");
  const std::size_t n = instance.spec.n;
  const FeasibleSet set = FeasibleSet::unit_ball(n);
  const ProxSetup setup = ProxSetup::euclidean();
  const Point x1 = Point::zeros(n);
  std::vector<ConstrainedComparison> rows;
  for (double m : m_values) {
    for (double eps : epsilons) {
      RunConfig cfg;
      cfg.m = m;
      cfg.epsilon = eps;
      cfg.theta = theta;
      cfg.record_trace = false;
      ConstrainedComparison row{eps, m, {}, {}};
      row.alg3 = timed([&] {
        return constrained_md(instance.objective, *instance.constraints, setup, set,
                              ScheduleKind::adaptive_time_varying(),
                              ScheduleKind::adaptive_time_varying(), cfg, x1);
      });
      row.alg4 = timed([&] {
        return constrained_md_multi(instance.objective, *instance.constraints, setup, set, cfg, x1);
      });
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CsvTable comparison_table(const std::vector<ConstrainedComparison>& rows, bool with_seconds) {
  CsvTable t;
  t.header = {"epsilon", "m"};
  for (const char* alg : {"alg3", "alg4"}) {
    for (const char* col : {"iterations", "productive", "constraint_evals", "f_hat", "g_hat", "stop"}) {
      t.header.push_back(std::string(alg) + "_" + col);
    }
    if (with_seconds) t.header.push_back(std::string(alg) + "_seconds");
  }
  t.header.push_back("evals_ratio");
  for (const auto& r : rows) {
    std::vector<std::string> line{format_double(r.epsilon), format_double(r.m)};
    for (const ConstrainedRun* run : {&r.alg3, &r.alg4}) {
      if (run->result) {
        const SolveResult& s = *run->result;
        line.insert(line.end(), {std::to_string(s.iterations), std::to_string(s.productive_count),
                                 std::to_string(s.constraint_evals), format_double(s.f_hat),
                                 format_optional(s.g_hat), std::string(to_string(s.stop_reason))});
      } else {
        line.insert(line.end(), {"", "", "", "", "", run->error});
      }
      if (with_seconds) line.push_back(format_double(run->seconds));
    }
    if (r.alg3.result && r.alg4.result && r.alg3.result->constraint_evals > 0) {
      line.push_back(format_double(static_cast<double>(r.alg4.result->constraint_evals) /
                                   static_cast<double>(r.alg3.result->constraint_evals)));
    } else {
      line.emplace_back();
    }
    t.rows.push_back(std::move(line));
  }
  return t;
}

}  // namespace mdbench
