#include <doctest.h>

#include "oracle.hpp"
#include "parastat/fockspace.hpp"
#include "parastat/freegas.hpp"
#include "parastat/series.hpp"

using namespace parastat;

TEST_CASE("closed forms of the table") {
  for (Builtin b : {Builtin::ex1, Builtin::ex2, Builtin::ex3, Builtin::ex4, Builtin::fermion, Builtin::boson})
    for (int m : {1, 2, 3, 4}) {
      if (b == Builtin::ex4 && m == 1) continue;
      const RMatrix r = builtin(b, m);
      CAPTURE(r.label());
      CHECK(r.hilbert_closed_form()->coefficients(7) == oracle::table_coefficients(b, m, 7));
    }
}

TEST_CASE("exclusion statistics from the symmetric subspaces") {
  CHECK(exclusion_statistics(builtin(Builtin::ex4, 3), 4) == std::vector<int>{1, 3, 1, 0, 0});
  CHECK(exclusion_statistics(builtin(Builtin::ex1, 4), 4) == std::vector<int>{1, 4, 6, 4, 1});
  CHECK(exclusion_statistics(builtin(Builtin::boson, 1), 3) == std::vector<int>{1, 1, 1, 1});
  for (const RMatrix& r : {builtin(Builtin::ex2, 3), negate(builtin(Builtin::ex3, 2)), negate(builtin(Builtin::ex4, 2))}) {
    const auto d = exclusion_statistics(r, 4);
    for (int n = 0; n <= 4; ++n) CHECK(d[n] == oracle::symmetric_dimension(r, n));
  }
}

TEST_CASE("negated families and reciprocity") {
  const RMatrix r = negate(builtin(Builtin::ex3, 3));
  // 1 / z_R(-x) = 1/(1 - 3x)
  CHECK(r.hilbert_closed_form()->coefficients(5) == IntPoly{1, 3, 9, 27, 81});
  CHECK(exclusion_statistics(r, 4) == std::vector<int>{1, 3, 9, 27, 81});
  for (int m : {2, 3}) CHECK(series_reciprocity_check(builtin(Builtin::ex4, m), 5).max_coeff_error == 0);
}

TEST_CASE("polynomial helpers") {
  CHECK(poly_mul({1, 1}, {1, -1}) == IntPoly{1, 0, -1});
  CHECK(poly_pow({1, 1}, 3) == IntPoly{1, 3, 3, 1});
  CHECK(poly_reflect({1, 2, 3}) == IntPoly{1, -2, 3});
  CHECK(series_product({1, 1}, {1, 1, 1, 1}, 3) == IntPoly{1, 2, 2});
  const RationalSeries geo{{1}, {1, -1}};
  CHECK(geo.degree() == -1);
  CHECK(geo.radius() == doctest::Approx(1.0));
  CHECK(RationalSeries{{1, 3, 1}, {1}}.degree() == 2);
  CHECK(oracle::truncated_power({1, 2, 1}, 2, 5) == oracle::Poly{1, 4, 6, 4, 1});
}
