#include <doctest.h>

#include "oracle.hpp"
#include "parastat/bilinears.hpp"
#include "parastat/errors.hpp"

using namespace parastat;

TEST_CASE("gl_N and ladder commutators") {
  struct Case {
    RMatrix r;
    int modes;
  };
  for (const Case& c : {Case{builtin(Builtin::ex3, 2), 3}, Case{builtin(Builtin::ex4, 3), 2},
                        Case{builtin(Builtin::fermion, 1), 3}}) {
    CAPTURE(c.r.label());
    const FockBasis basis = build_basis(c.r, *natural_nmax(c.r, c.modes), c.modes);
    const LadderSet ops = ladder_operators(basis);
    const BilinearSet bil = build_bilinears(basis, ops);
    const auto e = oracle::bilinears(c.modes, c.r.m(), ops.plus, ops.minus);
    for (int a = 0; a < c.modes; ++a)
      for (int b = 0; b < c.modes; ++b) CHECK(oracle::max_abs(bil.e(a, b) - e[a * c.modes + b]) < 1e-13);
    CHECK(oracle::gl_residual(c.modes, e) < 1e-10);
    CHECK(verify_glN(bil).passed);
    CHECK(oracle::bilinear_ladder_residual(c.modes, c.r.m(), e, ops.plus, ops.minus) < 1e-10);
    CHECK(verify_ladder_commutators(basis, ops, bil).max_residual() < 1e-10);
  }
}

TEST_CASE("number operator counts particles") {
  const FockBasis basis = build_basis(builtin(Builtin::ex4, 3), 4, 2);
  const BilinearSet bil = build_bilinears(basis, ladder_operators(basis));
  for (int n = 0; n <= 4; ++n) {
    const int off = basis.offset(n), dim = basis.sector(n).dim();
    const CMatrix block = bil.total_number().block(off, off, dim, dim);
    CHECK(oracle::max_abs(block - double(n) * CMatrix::Identity(dim, dim)) < 1e-12);
  }
}

TEST_CASE("locality") {
  const FockBasis basis = build_basis(builtin(Builtin::ex3, 2), 3, 3);
  const BilinearSet bil = build_bilinears(basis, ladder_operators(basis));
  const LocalityReport rep = locality_check(bil, {0}, {1, 2}, 3, 99);
  CHECK(rep.max_residual < 1e-10);
  CHECK(rep.seed == 99u);
  CHECK_THROWS_AS(locality_check(bil, {0, 1}, {1}), ConstraintError);
}
