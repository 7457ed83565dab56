#pragma once

// Dense double-precision kernels behind every inner loop of the library.
//
// Each instruction set provides the same table of functions. The scalar table
// is the reference; SIMD tables must agree with it up to reassociation of the
// reductions (see tests/unit/kernels_test.cpp). The active table is chosen
// once per process: MDBENCH_KERNELS={scalar,avx2,neon,auto} overrides the
// default of "best supported by this CPU".

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace mdbench::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct Table {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  double (*sum_abs)(const double* a, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
  double (*dist_sq)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = alpha * x + beta * y
  void (*axpby)(double alpha, const double* x, double beta, double* y, std::size_t n);
};

std::string_view to_string(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

const Table& scalar_table() noexcept;

/// True when the table for `isa` was compiled in and the CPU can run it.
bool supported(Isa isa) noexcept;

/// Every Isa usable on this machine, scalar first.
std::vector<Isa> available();

/// Table for `isa`; throws std::runtime_error when unsupported.
const Table& table(Isa isa);

/// Process-wide table, resolved on first use.
const Table& active();

namespace detail {
const Table* avx2_table() noexcept;
const Table* neon_table() noexcept;
}  // namespace detail

}  // namespace mdbench::kernels
