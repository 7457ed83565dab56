#include "mdbench/problems/instance_io.hpp"

#include <fstream>
#include <stdexcept>

namespace mdbench {
namespace {

using nlohmann::json;

json point_array(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(p.vector());
  return arr;
}

std::vector<Point> read_points(const json& arr) {
  std::vector<Point> out;
  for (const auto& row : arr) out.emplace_back(row.get<std::vector<double>>());
  return out;
}

}  // namespace

json spec_to_json(const InstanceSpec& spec) {
  return json{{"kind", std::string(to_string(spec.kind))},
              {"n", spec.n},
              {"T", spec.terms},
              {"p", spec.constraints},
              {"seed", spec.seed},
              {"distribution", std::string(to_string(spec.distribution))}};
}

InstanceSpec spec_from_json(const json& doc) {
  InstanceSpec spec;
  const auto kind = parse_problem_kind(doc.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("instance JSON: unknown kind");
  spec.kind = *kind;
  spec.n = doc.at("n").get<std::size_t>();
  spec.terms = doc.at("T").get<std::size_t>();
  spec.constraints = doc.at("p").get<std::size_t>();
  spec.seed = doc.at("seed").get<std::uint64_t>();
  const auto dist = parse_distribution(doc.at("distribution").get<std::string>());
  if (!dist) throw std::invalid_argument("instance JSON: unknown distribution");
  spec.distribution = *dist;
  return spec;
}

json instance_to_json(const Instance& inst) {
  json doc = spec_to_json(inst.spec);
  const auto& f = inst.objective;
  doc["known_fstar"] = f.known_fstar() ? json(*f.known_fstar()) : json(nullptr);
  switch (f.kind()) {
    case ProblemKind::BestApprox: doc["A"] = f.points().front().vector(); break;
    case ProblemKind::FTS:
    case ProblemKind::CoveringBall: doc["points"] = point_array(f.points()); break;
    case ProblemKind::MaxLinear:
      doc["a"] = point_array(f.points());
      doc["b"] = f.offsets();
      break;
  }
  if (inst.constraints) {
    doc["alpha"] = point_array(inst.constraints->alphas());
    doc["beta"] = inst.constraints->betas();
  }
  return doc;
}

Instance instance_from_json(const json& doc) {
  const InstanceSpec spec = spec_from_json(doc);
  std::optional<double> fstar;
  if (doc.contains("known_fstar") && !doc.at("known_fstar").is_null()) {
    fstar = doc.at("known_fstar").get<double>();
  }
  auto objective = [&]() {
    switch (spec.kind) {
      case ProblemKind::BestApprox:
        return Objective::best_approx(Point(doc.at("A").get<std::vector<double>>()), fstar);
      case ProblemKind::FTS: return Objective::fts(read_points(doc.at("points")));
      case ProblemKind::CoveringBall: return Objective::covering_ball(read_points(doc.at("points")));
      case ProblemKind::MaxLinear:
        return Objective::max_linear(read_points(doc.at("a")), doc.at("b").get<std::vector<double>>());
    }
    throw std::invalid_argument("instance JSON: unknown kind");
  }();
  if (objective.dimension() != spec.n) {
    throw std::invalid_argument("instance JSON: data dimension does not match n");
  }
  Instance inst{spec, std::move(objective), std::nullopt};
  if (doc.contains("alpha")) {
    inst.constraints.emplace(read_points(doc.at("alpha")), doc.at("beta").get<std::vector<double>>());
  }
  return inst;
}

void write_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << instance_to_json(inst).dump(1) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return instance_from_json(json::parse(in));
}

}  // namespace mdbench
