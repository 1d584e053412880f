#pragma once

#include <map>
#include <optional>
#include <vector>

#include "parastat/linalg.hpp"
#include "parastat/rmatrix.hpp"

namespace parastat {

// Label of a Fock basis state |n1 α1, n2 α2, ...>: occupation and degeneracy
// index per mode. For a single mode both vectors have length one.
struct BasisLabel {
  int n = 0;
  std::vector<int> occupation;
  std::vector<int> alpha;

  bool operator==(const BasisLabel&) const = default;
};

// One particle-number sector of the state space, with all tensors living in
// (C^M)^{⊗n}, M = modes * m.
struct Sector {
  int n = 0;
  // Orthonormal basis of the common +1 eigenspace of every R_{j,j+1}.
  CMatrix right;
  // Orthonormal basis of the common +1 eigenspace of every R_{j,j+1}^†.
  CMatrix left;
  // (left^† right)^{-1}; the symmetrizer is right * core * left^†.
  CMatrix core;
  // Representatives of the labelled basis states (columns).
  CMatrix states;
  // Coordinates of a representative in the labelled basis: coord_map * v.
  CMatrix coord_map;
  std::vector<BasisLabel> labels;

  int dim() const { return static_cast<int>(states.cols()); }
};

// The paraparticle state space up to n_max particles for `modes` modes of the
// exchange matrix `single` (the multi-mode algebra uses direct_product(single, modes)).
class FockBasis {
 public:
  FockBasis(RMatrix single, int modes, int n_max, std::vector<Sector> sectors, bool truncated);

  const RMatrix& single_mode() const { return single_; }
  const RMatrix& collective() const { return collective_; }
  int modes() const { return modes_; }
  int m() const { return single_.m(); }
  int collective_dim() const { return collective_.m(); }
  int n_max() const { return n_max_; }
  // True when states above n_max exist, so relations touching the top sector
  // are not represented faithfully.
  bool truncated() const { return truncated_; }

  const Sector& sector(int n) const { return sectors_.at(n); }
  const std::vector<Sector>& sectors() const { return sectors_; }
  // Total number of n-particle states (summed over occupation patterns).
  std::vector<int> sector_dims() const;
  int total_dim() const { return total_dim_; }
  int offset(int n) const { return offsets_.at(n); }
  std::vector<BasisLabel> labels() const;

  // Group-averaged projection of an arbitrary n-particle tensor.
  CVector project(int n, const CVector& tensor) const;
  CMatrix project(int n, const CMatrix& tensors) const;
  // Coordinates of an arbitrary n-particle tensor (projected first).
  CVector coordinates(int n, const CVector& tensor) const;

 private:
  RMatrix single_;
  RMatrix collective_;
  int modes_;
  int n_max_;
  std::vector<Sector> sectors_;
  bool truncated_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

// Basis tensors of the R-symmetric subspace for n = 0..n_max:
//   V_2 = ker(R - 1),  V_n = (V_{n-1} ⊗ C^m) ∩ (C^m ⊗ V_{n-1}).
// Returns orthonormal bases; `adjoint` uses R^† instead (the left eigenspaces).
std::vector<CMatrix> symmetric_subspaces(const RMatrix& r, int n_max, bool adjoint = false);

// Default truncation: degree of the closed-form Hilbert series when it is a
// polynomial, otherwise nullopt.
std::optional<int> natural_nmax(const RMatrix& r, int modes = 1);

FockBasis build_basis(const RMatrix& r, int n_max, int modes = 1);

std::vector<int> exclusion_statistics(const RMatrix& r, int n_max);

// Matrix of an operator on the truncated Fock space, block-ordered by n.
struct OperatorMatrix {
  CMatrix entries;
  std::vector<BasisLabel> labels;
  // Set when the operator maps some basis state out of the truncated space.
  bool truncation_dropped = false;
};

// All ψ^+_A and ψ^-_A, A = mode * m + internal.
struct LadderSet {
  std::vector<CMatrix> plus;
  std::vector<CMatrix> minus;
  bool truncation_dropped = false;
};

LadderSet ladder_operators(const FockBasis& basis);
OperatorMatrix creation_matrix(const FockBasis& basis, int mode, int internal);
OperatorMatrix annihilation_matrix(const FockBasis& basis, int mode, int internal);

// Annihilation map on raw tensors: a_n = 1 + R12 + R12 R23 + ... + R12...R_{n-1,n}.
// Slot 0 of the result carries the annihilated index.
CMatrix annihilation_tensor(const RMatrix& r, int n, const CMatrix& tensors);

struct CrReport {
  double annihilate_create = 0.0;  // ψ-ψ+ = Σ R ψ+ψ- + δ
  double create_create = 0.0;      // ψ+ψ+ = Σ R ψ+ψ+
  double annihilate_annihilate = 0.0;
  int sectors_checked = 0;         // sectors n = 0 .. sectors_checked-1 enter the residuals
  bool truncated = false;

  double max_residual() const;
};

// Residuals of the three ladder relations for all index pairs. On a truncated
// space the top sector is excluded.
CrReport verify_crs(const FockBasis& basis, const LadderSet& ops);

// Shared residual kernel for the three relations, applied to arbitrary
// operator families indexed A = mode * m + i. `columns` restricts the check to
// the leading columns (sectors not touched by truncation).
CrReport cr_residuals(const RMatrix& single, int modes, const std::vector<CMatrix>& plus,
                      const std::vector<CMatrix>& minus, int columns);

// ⟨0| ψ^-_{b_n} ... ψ^-_{b_1} ψ^+_{k_1} ... ψ^+_{k_n} |0⟩ for collective indices.
// Words of different length pair to zero.
cplx dual_pairing(const FockBasis& basis, const std::vector<int>& bra_word,
                  const std::vector<int>& ket_word);

// Gram matrix of the labelled basis of sector n: G_{αβ} = Σ conj(F_α) F_β pairing.
CMatrix gram_matrix(const FockBasis& basis, int n);

// Block-diagonal Gram matrix over all sectors.
CMatrix full_gram_matrix(const FockBasis& basis);

// Canonical representative of an element of the state space: a group-averaged
// tensor per particle number.
struct FockState {
  std::map<int, CVector> components;

  static FockState vacuum();
  bool approx_equal(const FockState& other, double tol) const;
  double norm() const;
};

struct FirstQuantizationReport {
  bool exchange_consistent = false;
  double exchange_residual = 0.0;
  FockState state;
};

// Checks a first-quantized wavefunction Ψ^{i_1..i_n}(x_1..x_n), given as a
// tensor over the combined index (x, i) -> x * m + i, against the exchange rule
// and maps it to the corresponding second-quantized state.
FirstQuantizationReport first_quantization_check(const RMatrix& r, int n, int modes,
                                                 const CVector& wavefunction,
                                                 double tol = 1e-10);

}  // namespace parastat
