#include <doctest.h>

#include "oracle.hpp"
#include "parastat/errors.hpp"
#include "parastat/fockspace.hpp"

using namespace parastat;

namespace {

struct Case {
  RMatrix r;
  int modes;
  int nmax;
};

std::vector<Case> cases() {
  return {{builtin(Builtin::fermion, 1), 3, 3}, {builtin(Builtin::ex2, 2), 2, 4},
          {builtin(Builtin::ex3, 2), 2, 2},     {builtin(Builtin::ex4, 3), 2, 4},
          {builtin(Builtin::boson, 1), 2, 3},   {negate(builtin(Builtin::ex4, 2)), 1, 3}};
}

}  // namespace

TEST_CASE("ladder operators match the tensor construction") {
  for (const auto& c : cases()) {
    CAPTURE(c.r.label());
    const FockBasis basis = build_basis(c.r, c.nmax, c.modes);
    CHECK(oracle::ladder_tensor_mismatch(basis, ladder_operators(basis)) < 1e-12);
  }
}

TEST_CASE("relations on untruncated spaces") {
  for (const auto& c : cases()) {
    const auto nat = natural_nmax(c.r, c.modes);
    if (!nat) continue;
    CAPTURE(c.r.label());
    const FockBasis basis = build_basis(c.r, *nat, c.modes);
    CHECK_FALSE(basis.truncated());
    const LadderSet ops = ladder_operators(basis);
    CHECK(oracle::paraparticle_relations(c.r, c.modes, ops.plus, ops.minus).max() < 1e-10);
    CHECK(verify_crs(basis, ops).max_residual() < 1e-10);
  }
}

TEST_CASE("truncated spaces exclude the top sector") {
  const FockBasis basis = build_basis(builtin(Builtin::boson, 1), 3, 2);
  CHECK(basis.truncated());
  const CrReport rep = verify_crs(basis, ladder_operators(basis));
  CHECK(rep.truncated);
  CHECK(rep.sectors_checked == 3);
  CHECK(rep.max_residual() < 1e-10);
}

TEST_CASE("sector dimensions") {
  const FockBasis basis = build_basis(builtin(Builtin::ex4, 3), 4, 2);
  CHECK(basis.sector_dims() == std::vector<int>{1, 6, 11, 6, 1});
  CHECK(basis.total_dim() == 25);
  CHECK(basis.labels().size() == 25u);
}

TEST_CASE("dual pairing of one-particle states") {
  const FockBasis basis = build_basis(builtin(Builtin::ex4, 3), 2, 1);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(dual_pairing(basis, {b}, {a}) - cplx(a == b, 0)) < 1e-12);
  CHECK(std::abs(dual_pairing(basis, {0}, {0, 1})) == 0.0);
}

TEST_CASE("first quantization exchange rule") {
  const RMatrix r = builtin(Builtin::ex2, 2);
  // Ψ = P(e_0 ⊗ e_3) over (x, i) with 2 positions: symmetric by construction.
  CMatrix raw = CMatrix::Zero(16, 1);
  raw(0 * 4 + 3, 0) = 1.0;
  const CVector psi = oracle::symmetrize(oracle::collective(r, 2), 2, raw).col(0);
  const auto good = first_quantization_check(r, 2, 2, psi);
  CHECK(good.exchange_consistent);
  CHECK(good.state.norm() > 0.1);
  CVector bad = CVector::Zero(16);
  bad(1) = 1.0;
  CHECK_FALSE(first_quantization_check(r, 2, 2, bad).exchange_consistent);
}

TEST_CASE("budget") {
  CHECK_THROWS_AS(build_basis(builtin(Builtin::ex1, 5), 7, 3), ResourceError);
}
