#include "oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

namespace {

Eigen::Index ipow(Eigen::Index a, int p) {
  Eigen::Index v = 1;
  while (p-- > 0) v *= a;
  return v;
}

}  // namespace

CMatrix exchange_matrix(const RMatrix& r, int n, int j) {
  const Eigen::Index m = r.m();
  const CMatrix left = CMatrix::Identity(ipow(m, j), ipow(m, j));
  const CMatrix right = CMatrix::Identity(ipow(m, n - j - 2), ipow(m, n - j - 2));
  return kron(kron(left, r.matrix()), right);
}

double ybe_residual(const RMatrix& r) {
  const Eigen::Index d = r.matrix().rows();
  const double inv = max_abs(r.matrix() * r.matrix() - CMatrix::Identity(d, d));
  const CMatrix r12 = exchange_matrix(r, 3, 0), r23 = exchange_matrix(r, 3, 1);
  return std::max(inv, max_abs(r12 * r23 * r12 - r23 * r12 * r23));
}

CMatrix apply_exchange(const RMatrix& r, int n, int j, const CMatrix& x) {
  const Eigen::Index m = r.m();
  const Eigen::Index outer = ipow(m, j), inner = ipow(m, n - j - 2);
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (Eigen::Index col = 0; col < x.cols(); ++col)
    for (Eigen::Index p = 0; p < outer; ++p)
      for (Eigen::Index q = 0; q < inner; ++q)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b) {
            cplx acc = 0.0;
            for (int c = 0; c < m; ++c)
              for (int d = 0; d < m; ++d)
                acc += r(a, b, c, d) * x(((p * m + c) * m + d) * inner + q, col);
            out(((p * m + a) * m + b) * inner + q, col) = acc;
          }
  return out;
}

CMatrix symmetrize(const RMatrix& r, int n, const CMatrix& x) {
  if (n < 2) return x;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  CMatrix sum = CMatrix::Zero(x.rows(), x.cols());
  double count = 0;
  do {
    // Sort a copy of perm by adjacent swaps; the swaps, read backwards, spell σ.
    std::vector<int> p = perm, word;
    for (int pass = 0; pass < n; ++pass)
      for (int k = 0; k + 1 < n; ++k)
        if (p[k] > p[k + 1]) {
          std::swap(p[k], p[k + 1]);
          word.push_back(k);
        }
    CMatrix y = x;
    for (int k : word) y = apply_exchange(r, n, k, y);
    sum += y;
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / count;
}

int symmetric_dimension(const RMatrix& r, int n) {
  if (n == 0) return 1;
  const Eigen::Index dim = ipow(r.m(), n);
  const CMatrix p = symmetrize(r, n, CMatrix::Identity(dim, dim));
  return static_cast<int>(std::lround(p.trace().real()));
}

RMatrix collective(const RMatrix& r, int modes) {
  const int m = r.m(), big = m * modes;
  CMatrix mat = CMatrix::Zero(big * big, big * big);
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              const int A = a * m + i, B = b * m + j, C = b * m + k, D = a * m + l;
              mat(A * big + B, C * big + D) = r(i, j, k, l);
            }
  return RMatrix(big, mat);
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

Poly table_coefficients(parastat::Builtin b, int m, int count) {
  using parastat::Builtin;
  Poly d(count, 0);
  for (int n = 0; n < count; ++n) {
    switch (b) {
      case Builtin::ex1:
      case Builtin::ex2: d[n] = binomial(m, n); break;
      case Builtin::ex3: d[n] = n == 0 ? 1 : n == 1 ? m : 0; break;
      case Builtin::ex4: d[n] = n == 0 ? 1 : n == 1 ? m : n == 2 ? 1 : 0; break;
      case Builtin::fermion: d[n] = binomial(m, n); break;   // (1+x)^m
      case Builtin::boson: d[n] = binomial(m + n - 1, n); break;  // (1-x)^-m
    }
  }
  return d;
}

Poly truncated_product(const Poly& a, const Poly& b, int count) {
  Poly out(count, 0);
  for (int i = 0; i < count && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j < count && j < static_cast<int>(b.size()); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly truncated_power(const Poly& a, int k, int count) {
  Poly out(count, 0);
  out[0] = 1;
  while (k-- > 0) out = truncated_product(out, a, count);
  return out;
}

double ladder_tensor_mismatch(const parastat::FockBasis& basis, const parastat::LadderSet& ops) {
  const RMatrix big = collective(basis.single_mode(), basis.modes());
  const int m_big = big.m();
  const int top = basis.n_max();
  double worst = 0.0;
  for (int n = 0; n <= top; ++n) {
    const auto& here = basis.sector(n);
    for (int alpha = 0; alpha < here.dim(); ++alpha) {
      const CMatrix v = symmetrize(big, n, here.states.col(alpha));
      const Eigen::Index len = v.rows();
      for (int a = 0; a < m_big; ++a) {
        if (n < top) {
          const auto& up = basis.sector(n + 1);
          const CMatrix coords =
              ops.plus[a].block(basis.offset(n + 1), basis.offset(n) + alpha, up.dim(), 1);
          CMatrix raw = CMatrix::Zero(len * m_big, 1);
          raw.block(a * len, 0, len, 1) = v;
          worst = std::max(worst, max_abs(symmetrize(big, n + 1, up.states * coords) -
                                          symmetrize(big, n + 1, raw)));
        }
        if (n > 0) {
          const auto& down = basis.sector(n - 1);
          const CMatrix coords =
              ops.minus[a].block(basis.offset(n - 1), basis.offset(n) + alpha, down.dim(), 1);
          const Eigen::Index rest = len / m_big;
          const CMatrix raw = static_cast<double>(n) * v.block(a * rest, 0, rest, 1);
          worst = std::max(worst, max_abs(symmetrize(big, n - 1, down.states * coords) -
                                          symmetrize(big, n - 1, raw)));
        }
      }
    }
  }
  return worst;
}

double Relations::max() const { return std::max({mixed, plus, minus}); }

Relations paraparticle_relations(const RMatrix& r, int modes, const std::vector<CMatrix>& plus,
                                 const std::vector<CMatrix>& minus) {
  const int m = r.m();
  const Eigen::Index dim = plus.at(0).rows();
  const CMatrix id = CMatrix::Identity(dim, dim);
  Relations out;
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const int ai = a * m + i, bj = b * m + j;
          CMatrix mixed = minus[ai] * plus[bj] - ((i == j && a == b) ? id : CMatrix::Zero(dim, dim));
          CMatrix pp = plus[ai] * plus[bj];
          CMatrix mm = minus[ai] * minus[bj];
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              const int bk = b * m + k, al = a * m + l;
              mixed -= r(i, k, j, l) * (plus[bk] * minus[al]);
              pp -= r(k, l, i, j) * (plus[bk] * plus[al]);
              mm -= r(j, i, l, k) * (minus[bk] * minus[al]);
            }
          out.mixed = std::max(out.mixed, max_abs(mixed));
          out.plus = std::max(out.plus, max_abs(pp));
          out.minus = std::max(out.minus, max_abs(mm));
        }
  return out;
}

std::vector<CMatrix> bilinears(int modes, int m, const std::vector<CMatrix>& plus,
                               const std::vector<CMatrix>& minus) {
  std::vector<CMatrix> e;
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b) {
      CMatrix acc = CMatrix::Zero(plus[0].rows(), plus[0].cols());
      for (int i = 0; i < m; ++i) acc += plus[a * m + i] * minus[b * m + i];
      e.push_back(acc);
    }
  return e;
}

double bilinear_ladder_residual(int modes, int m, const std::vector<CMatrix>& e,
                                const std::vector<CMatrix>& plus, const std::vector<CMatrix>& minus) {
  double worst = 0.0;
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      for (int c = 0; c < modes; ++c)
        for (int j = 0; j < m; ++j) {
          const CMatrix& eab = e[a * modes + b];
          CMatrix up = eab * plus[c * m + j] - plus[c * m + j] * eab;
          if (b == c) up -= plus[a * m + j];
          CMatrix down = eab * minus[c * m + j] - minus[c * m + j] * eab;
          if (a == c) down += minus[b * m + j];
          worst = std::max({worst, max_abs(up), max_abs(down)});
        }
  return worst;
}

double gl_residual(int modes, const std::vector<CMatrix>& e) {
  double worst = 0.0;
  auto at = [&](int a, int b) -> const CMatrix& { return e[a * modes + b]; };
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      for (int c = 0; c < modes; ++c)
        for (int d = 0; d < modes; ++d) {
          CMatrix res = at(a, b) * at(c, d) - at(c, d) * at(a, b);
          if (b == c) res -= at(a, d);
          if (a == d) res += at(c, b);
          worst = std::max(worst, max_abs(res));
        }
  return worst;
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

std::vector<cplx> eigenvalues(const CMatrix& h) {
  std::vector<cplx> ev;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < h.rows(); ++k) ev.emplace_back(es.eigenvalues()(k), 0.0);
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(h, false);
    for (Eigen::Index k = 0; k < h.rows(); ++k) ev.push_back(es.eigenvalues()(k));
  }
  std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return ev;
}

std::vector<double> free_levels(const std::vector<double>& eps, const Poly& d) {
  std::vector<double> levels = {0.0};
  for (double e : eps) {
    std::vector<double> next;
    for (double base : levels)
      for (std::size_t n = 0; n < d.size(); ++n)
        for (std::int64_t k = 0; k < d[n]; ++k) next.push_back(base + static_cast<double>(n) * e);
    levels = std::move(next);
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

}  // namespace oracle
