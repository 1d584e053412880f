#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parastat/linalg.hpp"
#include "parastat/series.hpp"

namespace parastat {

// Rank-4 tensor R^{ab}_{cd} stored as the m^2 x m^2 matrix
//   matrix()(a * m + b, c * m + d) = R^{ab}_{cd},   0 <= a, b, c, d < m,
// so that R (v_c ⊗ v_d) = sum_{ab} R^{ab}_{cd} v_a ⊗ v_b. Every file format
// and API in the project uses this flattening.
//
// An RMatrix built from a named family remembers the closed form of its
// single-mode Hilbert series; negate() and direct_product() transform it.
class RMatrix {
 public:
  RMatrix(int m, CMatrix matrix, std::string label = "custom",
          std::optional<RationalSeries> hilbert = std::nullopt);

  int m() const { return m_; }
  const CMatrix& matrix() const { return matrix_; }
  cplx operator()(int a, int b, int c, int d) const { return matrix_(a * m_ + b, c * m_ + d); }

  const std::string& label() const { return label_; }
  const std::optional<RationalSeries>& hilbert_closed_form() const { return hilbert_; }
  bool is_hermitian(double tol = 1e-12) const;

  // FNV-1a over the IEEE bytes of (m, entries); stable across runs and platforms
  // with the same endianness.
  std::uint64_t fingerprint() const;

 private:
  int m_;
  CMatrix matrix_;
  std::string label_;
  std::optional<RationalSeries> hilbert_;
};

struct YbeReport {
  bool involutive = false;
  bool braid = false;
  double involution_residual = 0.0;
  double braid_residual = 0.0;
  double max_residual = 0.0;
};

// Checks R^2 = 1 and (R⊗1)(1⊗R)(R⊗1) = (1⊗R)(R⊗1)(1⊗R) entrywise.
YbeReport ybe_check(const RMatrix& r, double tol = 1e-12);

// Validates the shape of a raw m^2 x m^2 matrix; throws ShapeError.
void require_rmatrix_shape(int m, const CMatrix& matrix);

struct LambdaC {
  CMatrix lambda;
  CMatrix c;
};

struct LambdaCResiduals {
  double product = 0.0;  // max |λ c λ^T c^T - 1|
  double trace = 0.0;    // |Tr(λ c^T) - 2|
  double pt = 0.0;       // max(|λ* - λ^T|, |c* - c^T|); informational only
};

LambdaCResiduals lambda_c_residuals(const LambdaC& lc);

// Anti-diagonal solution λ_{a,m-1-a} = 1, c_{a,m-1-a} = t_a with t_a t_{m-1-a} = 1
// and sum_a t_a = 2. Pairs share t + 1/t = s; for odd m the middle entry is +1.
LambdaC make_lambda_c(int m);

enum class Builtin { ex1, ex2, ex3, ex4, fermion, boson };

Builtin parse_builtin(const std::string& name);
std::string to_string(Builtin b);

// Table families. fermion/boson with m > 1 are ∓SWAP (flavoured fermions/bosons).
// ex4 uses make_lambda_c(m) unless `params` is given; params are validated and a
// ConstraintError carrying the residuals is thrown when they fail.
RMatrix builtin(Builtin name, int m, const std::optional<LambdaC>& params = std::nullopt);

RMatrix negate(const RMatrix& r);

// (Π ⊠ R)^{AB}_{CD} = δ_ad δ_bc R^{ij}_{kl}, collective index A = a * m + i.
RMatrix direct_product(const RMatrix& r, int modes);

// The representation of S_n on (C^m)^{⊗n} generated by R_{j,j+1}.
class SnRep {
 public:
  SnRep(RMatrix r, int n);

  int n() const { return n_; }
  int m() const { return r_.m(); }
  std::size_t dim() const { return dim_; }
  const RMatrix& rmatrix() const { return r_; }

  // 1^{⊗j} ⊗ R ⊗ 1^{⊗(n-j-2)}, 0-based j in [0, n-2].
  SparseOp generator(int j) const;
  // Applies generator j to every column of `tensors`.
  CMatrix apply(int j, const CMatrix& tensors) const;
  // ρ(σ) for σ given in one-line notation (a permutation of 0..n-1),
  // through its bubble-sort reduced word.
  CMatrix rho(const std::vector<int>& perm) const;
  // Product R_{w0} R_{w1} ... for an arbitrary word of generator indices.
  CMatrix word_product(const std::vector<int>& word) const;

 private:
  RMatrix r_;
  int n_;
  std::size_t dim_;
};

SnRep sn_generators(const RMatrix& r, int n);

// Reduced word of σ = s_{w0} s_{w1} ... obtained from bubble sort; s_j swaps
// positions j and j+1.
std::vector<int> bubble_sort_word(const std::vector<int>& perm);

// P_n = (1/n!) sum_σ ρ(σ) as a dense m^n x m^n matrix.
CMatrix symmetrizer(const SnRep& rep);

}  // namespace parastat
