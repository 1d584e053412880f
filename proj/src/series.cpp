#include "parastat/series.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

#include "parastat/errors.hpp"

namespace parastat {
namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("series coefficient overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw DomainError("series coefficient overflow");
  return out;
}

}  // namespace

void poly_trim(IntPoly& a) {
  while (a.size() > 1 && a.back() == 0) a.pop_back();
  if (a.empty()) a.push_back(0);
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {0};
  IntPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
  poly_trim(out);
  return out;
}

IntPoly poly_pow(const IntPoly& a, int k) {
  if (k < 0) throw DomainError("negative polynomial power");
  IntPoly out{1};
  for (int i = 0; i < k; ++i) out = poly_mul(out, a);
  return out;
}

IntPoly poly_reflect(const IntPoly& a) {
  IntPoly out = a;
  for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
  return out;
}

std::string poly_to_string(const IntPoly& a) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t c = a[i];
    if (c == 0) continue;
    const std::int64_t mag = c < 0 ? -c : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    if (i == 0 || mag != 1) os << mag;
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

int RationalSeries::degree() const {
  if (!is_polynomial()) return -1;
  IntPoly n = num;
  poly_trim(n);
  return static_cast<int>(n.size()) - 1;
}

IntPoly RationalSeries::coefficients(int count) const {
  if (den.empty() || den[0] != 1) throw DomainError("series denominator must start with 1");
  IntPoly out(static_cast<std::size_t>(std::max(count, 0)), 0);
  for (int n = 0; n < count; ++n) {
    std::int64_t c = n < static_cast<int>(num.size()) ? num[n] : 0;
    for (std::size_t k = 1; k < den.size() && static_cast<int>(k) <= n; ++k)
      c = checked_add(c, -checked_mul(den[k], out[n - k]));
    out[n] = c;
  }
  return out;
}

double RationalSeries::radius() const {
  IntPoly d = den;
  poly_trim(d);
  if (d.size() <= 1) return std::numeric_limits<double>::infinity();
  const int deg = static_cast<int>(d.size()) - 1;
  // Companion matrix of the monic polynomial d / d_deg.
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i)
    comp(i, deg - 1) = -static_cast<double>(d[i]) / static_cast<double>(d[deg]);
  const Eigen::VectorXcd roots = comp.eigenvalues();
  double r = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < roots.size(); ++i) r = std::min(r, std::abs(roots(i)));
  return r;
}

std::string RationalSeries::to_string() const {
  if (is_polynomial()) return poly_to_string(num);
  std::string top = poly_to_string(num);
  if (num.size() > 1) top = "(" + top + ")";
  return top + " / (" + poly_to_string(den) + ")";
}

RationalSeries RationalSeries::reflected_inverse() const {
  return RationalSeries{poly_reflect(den), poly_reflect(num)};
}

RationalSeries RationalSeries::power(int k) const {
  return RationalSeries{poly_pow(num, k), poly_pow(den, k)};
}

IntPoly series_product(const IntPoly& a, const IntPoly& b, int count) {
  IntPoly out(static_cast<std::size_t>(std::max(count, 0)), 0);
  for (int n = 0; n < count; ++n)
    for (int i = 0; i <= n; ++i) {
      if (i >= static_cast<int>(a.size()) || n - i >= static_cast<int>(b.size())) continue;
      out[n] = checked_add(out[n], checked_mul(a[i], b[n - i]));
    }
  return out;
}

}  // namespace parastat
