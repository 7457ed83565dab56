#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

#include "mdbench/kernels/kernels.hpp"

namespace mdbench::kernels {
namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& resolve() {
  if (const char* env = std::getenv("MDBENCH_KERNELS"); env != nullptr && *env != '\0') {
    const std::string_view name(env);
    if (name != "auto") {
      const auto isa = parse_isa(name);
      if (isa && supported(*isa)) return table(*isa);
      std::cerr << "mdbench: MDBENCH_KERNELS=" << name
                << " is not available on this machine; using auto selection\n";
    }
  }
  if (supported(Isa::Avx2)) return table(Isa::Avx2);
  if (supported(Isa::Neon)) return table(Isa::Neon);
  return scalar_table();
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "neon") return Isa::Neon;
  return std::nullopt;
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return detail::avx2_table() != nullptr && cpu_has_avx2_fma();
    case Isa::Neon: return detail::neon_table() != nullptr;
  }
  return false;
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::Scalar};
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (supported(isa)) out.push_back(isa);
  }
  return out;
}

const Table& table(Isa isa) {
  if (!supported(isa)) {
    throw std::runtime_error("kernel table '" + std::string(to_string(isa)) +
                             "' is not supported on this machine");
  }
  switch (isa) {
    case Isa::Avx2: return *detail::avx2_table();
    case Isa::Neon: return *detail::neon_table();
    case Isa::Scalar: break;
  }
  return scalar_table();
}

const Table& active() {
  static const Table& t = resolve();
  return t;
}

}  // namespace mdbench::kernels
