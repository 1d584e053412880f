#pragma once

// Data-parallel inner loops shared by the tensor and spin-chain code.
//
// Every kernel exists twice: `serial::` is the straightforward reference used by
// the tests and the benchmark baseline, the unqualified version is the OpenMP one
// the library calls. Parallel loops only partition independent output entries,
// so results are bit-identical to the serial versions for any thread count.

#include <span>

#include "parastat/linalg.hpp"

namespace parastat::kernels {

// Applies a two-slot operator `op` (d^2 x d^2) to slots (slot, slot + 1) of
// every column of `in`. Columns are rank-n tensors over C^d stored with slot 0
// as the most significant index. 0 <= slot < n - 1.
CMatrix apply_two_slot(const CMatrix& op, int d, int n, int slot, const CMatrix& in);

// Kronecker product of sparse operators, a ⊗ b.
SparseOp sparse_kron(const SparseOp& a, const SparseOp& b);

// Kronecker product of a list of site operators, ops[0] ⊗ ops[1] ⊗ ...
SparseOp sparse_kron_chain(std::span<const SparseOp> ops);

namespace serial {
CMatrix apply_two_slot(const CMatrix& op, int d, int n, int slot, const CMatrix& in);
SparseOp sparse_kron(const SparseOp& a, const SparseOp& b);
SparseOp sparse_kron_chain(std::span<const SparseOp> ops);
}  // namespace serial

// Number of OpenMP threads used by the parallel kernels (1 when OpenMP is off).
int thread_count();
void set_thread_count(int n);

}  // namespace parastat::kernels
