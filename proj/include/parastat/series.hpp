#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parastat {

// Integer-coefficient polynomial, coefficients in ascending powers of x.
using IntPoly = std::vector<std::int64_t>;

IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_pow(const IntPoly& a, int k);
// p(x) -> p(-x)
IntPoly poly_reflect(const IntPoly& a);
void poly_trim(IntPoly& a);
std::string poly_to_string(const IntPoly& a);

// Generating function num(x) / den(x) with den(0) = 1, used for the closed forms
// of single-mode Hilbert series.
struct RationalSeries {
  IntPoly num{1};
  IntPoly den{1};

  bool is_polynomial() const { return den.size() == 1; }
  // Degree of the polynomial; -1 when the series does not terminate.
  int degree() const;
  // First `count` power-series coefficients (exact integer recurrence).
  IntPoly coefficients(int count) const;
  // Radius of convergence, +inf for polynomials.
  double radius() const;
  std::string to_string() const;

  RationalSeries reflected_inverse() const;  // z(x) -> 1 / z(-x)
  RationalSeries power(int k) const;         // z(x) -> z(x)^k
};

// Truncated product of two power series, first `count` coefficients.
IntPoly series_product(const IntPoly& a, const IntPoly& b, int count);

}  // namespace parastat
