#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mdbench {

/// Raised when two points (or a point and a problem) disagree on dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an argument lies outside the domain of a prox-function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class NormKind { L1, L2, Linf };

/// Dual pairing: L1 <-> Linf, L2 self-dual.
NormKind dual_norm_kind(NormKind kind) noexcept;
std::string_view to_string(NormKind kind) noexcept;

/// Dense real vector with finite coordinates.
///
/// Construction from external data validates finiteness and a nonzero
/// length. Mutable access is provided for solver buffers; callers that write
/// coordinates directly are responsible for keeping them finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t n, double fill = 0.0);
  Point(std::initializer_list<double> coords);
  explicit Point(std::vector<double> coords);

  static Point zeros(std::size_t n) { return Point(n, 0.0); }

  std::size_t size() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }

  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }

  const double* data() const noexcept { return coords_.data(); }
  double* data() noexcept { return coords_.data(); }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }
  const std::vector<double>& vector() const noexcept { return coords_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Throws DimensionError unless a and b have the same length.
void require_same_size(const Point& a, const Point& b, std::string_view where);

double norm(const Point& p, NormKind kind);
double inner(const Point& a, const Point& b);

/// ||a - b|| under `kind`.
double distance(const Point& a, const Point& b, NormKind kind);

/// y += alpha * x
void axpy(double alpha, const Point& x, Point& y);
/// y = alpha * x + beta * y
void axpby(double alpha, const Point& x, double beta, Point& y);

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);

std::string to_string(const Point& p);

}  // namespace mdbench
