#include "mdbench/core/point.hpp"

#include <cmath>
#include <sstream>

#include "mdbench/kernels/kernels.hpp"

namespace mdbench {

NormKind dual_norm_kind(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::L1: return NormKind::Linf;
    case NormKind::L2: return NormKind::L2;
    case NormKind::Linf: return NormKind::L1;
  }
  return NormKind::L2;
}

std::string_view to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::L1: return "L1";
    case NormKind::L2: return "L2";
    case NormKind::Linf: return "Linf";
  }
  return "?";
}

Point::Point(std::size_t n, double fill) : coords_(n, fill) {
  if (n == 0) throw DimensionError("Point: dimension must be at least 1");
  if (!std::isfinite(fill)) throw std::invalid_argument("Point: fill value must be finite");
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DimensionError("Point: dimension must be at least 1");
  if (!all_finite()) throw std::invalid_argument("Point: coordinates must be finite");
}

bool Point::all_finite() const noexcept {
  for (double v : coords_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_same_size(const Point& a, const Point& b, std::string_view where) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
    throw DimensionError(msg.str());
  }
}

double norm(const Point& p, NormKind kind) {
  const auto& k = kernels::active();
  switch (kind) {
    case NormKind::L1: return k.sum_abs(p.data(), p.size());
    case NormKind::L2: return std::sqrt(k.sum_sq(p.data(), p.size()));
    case NormKind::Linf: return k.max_abs(p.data(), p.size());
  }
  return 0.0;
}

double inner(const Point& a, const Point& b) {
  require_same_size(a, b, "inner");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double distance(const Point& a, const Point& b, NormKind kind) {
  require_same_size(a, b, "distance");
  if (kind == NormKind::L2) return std::sqrt(kernels::active().dist_sq(a.data(), b.data(), a.size()));
  return norm(a - b, kind);
}

void axpy(double alpha, const Point& x, Point& y) {
  require_same_size(x, y, "axpy");
  kernels::active().axpy(alpha, x.data(), y.data(), x.size());
}

void axpby(double alpha, const Point& x, double beta, Point& y) {
  require_same_size(x, y, "axpby");
  kernels::active().axpby(alpha, x.data(), beta, y.data(), x.size());
}

Point operator+(const Point& a, const Point& b) {
  Point out = b;
  axpy(1.0, a, out);
  return out;
}

Point operator-(const Point& a, const Point& b) {
  Point out = b;
  axpby(1.0, a, -1.0, out);
  return out;
}

Point operator*(double s, const Point& a) {
  Point out = a;
  for (double& v : out.coords()) v *= s;
  return out;
}

std::string to_string(const Point& p) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out << ", ";
    out << p[i];
  }
  out << ')';
  return out.str();
}

}  // namespace mdbench
