#include "parastat/kernels.hpp"

#include <omp.h>

#include <cstdint>
#include <vector>

#include "parastat/errors.hpp"

namespace parastat::kernels {
namespace {

struct SlotLayout {
  Eigen::Index left = 1;   // d^slot
  Eigen::Index pair = 1;   // d^2
  Eigen::Index right = 1;  // d^(n - slot - 2)
  Eigen::Index total = 1;
};

SlotLayout slot_layout(const CMatrix& op, int d, int n, int slot, const CMatrix& in) {
  if (n < 2 || slot < 0 || slot > n - 2)
    throw ShapeError("two-slot operator needs 0 <= slot < n - 1");
  SlotLayout s;
  for (int k = 0; k < slot; ++k) s.left *= d;
  s.pair = static_cast<Eigen::Index>(d) * d;
  for (int k = slot + 2; k < n; ++k) s.right *= d;
  s.total = s.left * s.pair * s.right;
  if (op.rows() != s.pair || op.cols() != s.pair)
    throw ShapeError("two-slot operator must be d^2 x d^2");
  if (in.rows() != s.total) throw ShapeError("tensor length does not match d^n");
  return s;
}

// Row layout of the sparse Kronecker product: nonzeros per output row.
std::vector<Eigen::Index> kron_row_starts(const SparseOp& a, const SparseOp& b) {
  const Eigen::Index br = b.rows();
  std::vector<Eigen::Index> starts(static_cast<std::size_t>(a.rows() * br) + 1, 0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::Index na = a.outerIndexPtr()[i + 1] - a.outerIndexPtr()[i];
    for (Eigen::Index k = 0; k < br; ++k) {
      const Eigen::Index nb = b.outerIndexPtr()[k + 1] - b.outerIndexPtr()[k];
      starts[i * br + k + 1] = starts[i * br + k] + na * nb;
    }
  }
  return starts;
}

void kron_fill_row(const SparseOp& a, const SparseOp& b, Eigen::Index row,
                   const std::vector<Eigen::Index>& starts, SparseOp& out) {
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  const Eigen::Index i = row / br;
  const Eigen::Index k = row % br;
  Eigen::Index pos = starts[row];
  for (Eigen::Index pa = a.outerIndexPtr()[i]; pa < a.outerIndexPtr()[i + 1]; ++pa) {
    const Eigen::Index j = a.innerIndexPtr()[pa];
    const cplx va = a.valuePtr()[pa];
    for (Eigen::Index pb = b.outerIndexPtr()[k]; pb < b.outerIndexPtr()[k + 1]; ++pb) {
      out.innerIndexPtr()[pos] = static_cast<int>(j * bc + b.innerIndexPtr()[pb]);
      out.valuePtr()[pos] = va * b.valuePtr()[pb];
      ++pos;
    }
  }
}

SparseOp kron_shell(const SparseOp& a, const SparseOp& b,
                    const std::vector<Eigen::Index>& starts) {
  SparseOp out(a.rows() * b.rows(), a.cols() * b.cols());
  out.resizeNonZeros(starts.back());
  for (std::size_t r = 0; r < starts.size(); ++r)
    out.outerIndexPtr()[r] = static_cast<int>(starts[r]);
  return out;
}

SparseOp compressed(const SparseOp& a) {
  SparseOp c = a;
  c.makeCompressed();
  return c;
}

}  // namespace

namespace serial {

CMatrix apply_two_slot(const CMatrix& op, int d, int n, int slot, const CMatrix& in) {
  const SlotLayout s = slot_layout(op, d, n, slot, in);
  CMatrix out(in.rows(), in.cols());
  CVector buf(s.pair);
  for (Eigen::Index col = 0; col < in.cols(); ++col)
    for (Eigen::Index l = 0; l < s.left; ++l)
      for (Eigen::Index r = 0; r < s.right; ++r) {
        const Eigen::Index base = l * s.pair * s.right + r;
        for (Eigen::Index p = 0; p < s.pair; ++p) buf(p) = in(base + p * s.right, col);
        for (Eigen::Index q = 0; q < s.pair; ++q) {
          cplx acc = 0.0;
          for (Eigen::Index p = 0; p < s.pair; ++p) acc += op(q, p) * buf(p);
          out(base + q * s.right, col) = acc;
        }
      }
  return out;
}

SparseOp sparse_kron(const SparseOp& a_in, const SparseOp& b_in) {
  const SparseOp a = compressed(a_in);
  const SparseOp b = compressed(b_in);
  const auto starts = kron_row_starts(a, b);
  SparseOp out = kron_shell(a, b, starts);
  for (Eigen::Index row = 0; row < out.rows(); ++row) kron_fill_row(a, b, row, starts, out);
  return out;
}

SparseOp sparse_kron_chain(std::span<const SparseOp> ops) {
  if (ops.empty()) {
    SparseOp one(1, 1);
    one.insert(0, 0) = 1.0;
    one.makeCompressed();
    return one;
  }
  SparseOp acc = compressed(ops[0]);
  for (std::size_t k = 1; k < ops.size(); ++k) acc = serial::sparse_kron(acc, ops[k]);
  return acc;
}

}  // namespace serial

CMatrix apply_two_slot(const CMatrix& op, int d, int n, int slot, const CMatrix& in) {
  const SlotLayout s = slot_layout(op, d, n, slot, in);
  CMatrix out(in.rows(), in.cols());
  const Eigen::Index blocks = in.cols() * s.left;
  // Same per-entry summation order as serial::apply_two_slot.
#pragma omp parallel for schedule(static)
  for (Eigen::Index blk = 0; blk < blocks; ++blk) {
    const Eigen::Index col = blk / s.left;
    const Eigen::Index l = blk % s.left;
    CVector buf(s.pair);
    for (Eigen::Index r = 0; r < s.right; ++r) {
      const Eigen::Index base = l * s.pair * s.right + r;
      for (Eigen::Index p = 0; p < s.pair; ++p) buf(p) = in(base + p * s.right, col);
      for (Eigen::Index q = 0; q < s.pair; ++q) {
        cplx acc = 0.0;
        for (Eigen::Index p = 0; p < s.pair; ++p) acc += op(q, p) * buf(p);
        out(base + q * s.right, col) = acc;
      }
    }
  }
  return out;
}

SparseOp sparse_kron(const SparseOp& a_in, const SparseOp& b_in) {
  const SparseOp a = compressed(a_in);
  const SparseOp b = compressed(b_in);
  const auto starts = kron_row_starts(a, b);
  SparseOp out = kron_shell(a, b, starts);
  const Eigen::Index rows = out.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index row = 0; row < rows; ++row) kron_fill_row(a, b, row, starts, out);
  return out;
}

SparseOp sparse_kron_chain(std::span<const SparseOp> ops) {
  if (ops.empty()) return serial::sparse_kron_chain(ops);
  SparseOp acc = compressed(ops[0]);
  for (std::size_t k = 1; k < ops.size(); ++k) acc = kernels::sparse_kron(acc, ops[k]);
  return acc;
}

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace parastat::kernels
