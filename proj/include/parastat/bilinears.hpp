#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "parastat/fockspace.hpp"

namespace parastat {

// ê_ab = Σ_i ψ^+_{a,i} ψ^-_{b,i} for all modes a, b.
class BilinearSet {
 public:
  BilinearSet(int modes, std::vector<CMatrix> e);

  int modes() const { return modes_; }
  const CMatrix& e(int a, int b) const { return e_[a * modes_ + b]; }
  const CMatrix& number(int a) const { return e(a, a); }
  const CMatrix& total_number() const { return total_; }
  int dim() const { return static_cast<int>(total_.rows()); }

 private:
  int modes_;
  std::vector<CMatrix> e_;
  CMatrix total_;
};

BilinearSet build_bilinears(const FockBasis& basis, const LadderSet& ops);

struct GlnReport {
  double max_residual = 0.0;
  bool passed = false;
};

// [ê_ab, ê_cd] = δ_bc ê_ad - δ_ad ê_cb for all N^4 index combinations.
GlnReport verify_glN(const BilinearSet& bil, double tol = 1e-10);

struct LadderReport {
  double e_plus = 0.0;   // [ê_ab, ψ^+_{c,j}] - δ_bc ψ^+_{a,j}
  double e_minus = 0.0;  // [ê_ab, ψ^-_{c,j}] + δ_ac ψ^-_{b,j}
  double n_plus = 0.0;   // [n̂, ψ^+] - ψ^+
  double n_minus = 0.0;  // [n̂, ψ^-] + ψ^-
  double max_residual() const;
};

// Commutators of bilinears with ladder operators. Bilinears commute with the
// truncation projector, so these hold on every sector.
LadderReport verify_ladder_commutators(const FockBasis& basis, const LadderSet& ops,
                                       const BilinearSet& bil);

struct LocalityReport {
  double max_residual = 0.0;
  std::uint64_t seed = 0;
  int degree = 0;
  int samples = 0;
};

// Commutators of random polynomials in {ê_ab : a, b ∈ s1} with random
// polynomials in {ê_ab : a, b ∈ s2}. Throws ConstraintError when s1 ∩ s2 ≠ ∅.
LocalityReport locality_check(const BilinearSet& bil, const std::set<int>& s1,
                              const std::set<int>& s2, int degree = 2,
                              std::uint64_t seed = 20240611, int samples = 4);

}  // namespace parastat
