#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mdbench/bench/csv.hpp"
#include "mdbench/bench/reference.hpp"
#include "mdbench/problems/problems.hpp"
#include "mdbench/prox/geometry.hpp"
#include "mdbench/schedules/schedule.hpp"
#include "mdbench/solvers/solve.hpp"

namespace mdbench {

enum class Algorithm { MirrorDescent, Constrained, ConstrainedMulti };
std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

std::string_view to_string(PsiKind k) noexcept;  // euclidean, entropy
std::optional<PsiKind> parse_prox(std::string_view name) noexcept;

struct ExperimentPlan {
  InstanceSpec instance;  // instance.seed is replaced by `seed`
  std::vector<ScheduleTag> schedules{ScheduleTag::TimeVarying};
  std::vector<double> m_values{0.0};
  std::size_t iters = 1000;
  std::optional<double> epsilon;  // constrained algorithms
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  PsiKind prox = PsiKind::EuclideanHalfSq;
  std::optional<double> theta;  // default_theta when absent
  Algorithm algorithm = Algorithm::MirrorDescent;

  friend bool operator==(const ExperimentPlan&, const ExperimentPlan&) = default;
};

/// Throws std::invalid_argument describing the first problem found.
void validate_plan(const ExperimentPlan& plan);

nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& doc);

/// Everything a plan's cells share.
struct PreparedExperiment {
  Instance instance;
  FeasibleSet set;
  ProxSetup setup;
  Point x1;
  double theta;
  ReferenceSolution reference;
};

/// Unit ball with the Euclidean setup (x1 = 1/sqrt n, or 0 for constrained
/// runs), or the simplex with the entropy setup (x1 = barycenter).
PreparedExperiment prepare_experiment(const ExperimentPlan& plan);

/// Column layout shared by every per-cell CSV.
inline constexpr std::string_view kTraceColumns[] = {
    "k",        "gamma",   "f_iterate", "f_avg",      "f_best_so_far",
    "gap_avg",  "gap_best", "bound",    "productive", "constraint_evals"};

/// One CSV row per trace record. f_best_so_far runs over productive
/// iterates for constrained algorithms.
CsvTable trace_table(const SolveResult& result, const ReferenceSolution& ref, Algorithm algorithm);

struct CellSpec {
  std::optional<ScheduleTag> schedule;  // absent for the multi-constraint method
  double m = 0.0;
};

std::string cell_file_name(const CellSpec& cell, Algorithm algorithm);

/// Runs one cell and returns its result; trace always recorded.
SolveResult run_cell(const ExperimentPlan& plan, const PreparedExperiment& prep,
                     const CellSpec& cell);

/// Summary fields computed from a cell's CSV alone, plus the metadata the
/// CSV does not carry (schedule, m, file, stop reason).
nlohmann::json summarize_cell(const CsvTable& table, const CellSpec& cell, Algorithm algorithm,
                              std::string_view stop_reason);

struct ExperimentOutput {
  nlohmann::json summary;
  std::vector<std::string> files;  // CSV paths, cell order
  std::string summary_path;
};

/// Writes one CSV per (schedule, m) cell and summary.json into output_dir.
/// Cells run in parallel (worker_count()); outputs do not depend on the
/// worker count.
ExperimentOutput run_experiment(const ExperimentPlan& plan);

/// Rebuilds the summary from the CSV files it names, read from `dir`.
nlohmann::json resummarize(const nlohmann::json& summary, const std::string& dir);

/// Long-format table (m, k, gap_avg) over plan.m_values for the first
/// schedule. Needs at least two m values.
CsvTable sweep_m(const ExperimentPlan& plan);

/// One epsilon / m row of the head-to-head between the two constrained
/// methods. The switching method uses the adaptive time-varying rule for
/// both step kinds.
struct ConstrainedRun {
  std::optional<SolveResult> result;  // trace not recorded
  std::string error;                  // set when the run threw
  double seconds = 0.0;
};
struct ConstrainedComparison {
  double epsilon = 0.0;
  double m = 0.0;
  ConstrainedRun alg3;
  ConstrainedRun alg4;
};

std::vector<ConstrainedComparison> compare_constrained(const Instance& instance,
                                                       const std::vector<double>& epsilons,
                                                       const std::vector<double>& m_values,
                                                       double theta);

/// Table of the comparison; wall-clock columns only when `with_seconds`.
CsvTable comparison_table(const std::vector<ConstrainedComparison>& rows, bool with_seconds);

}  // namespace mdbench
