#pragma once

#include <string>

#include <json.hpp>

#include "mdbench/problems/problems.hpp"

namespace mdbench {

// Instance document:
//   { "kind", "n", "T", "p", "seed", "distribution", "known_fstar" (or null),
//     "A" | "points" | ("a", "b"),            realized objective data
//     "alpha", "beta" }                       present when p > 0
// Doubles are written with round-trip precision, so a reloaded instance
// reproduces every run bit-exactly.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& doc);

nlohmann::json spec_to_json(const InstanceSpec& spec);
InstanceSpec spec_from_json(const nlohmann::json& doc);

void write_instance(const Instance& inst, const std::string& path);
Instance read_instance(const std::string& path);

}  // namespace mdbench
