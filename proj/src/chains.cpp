#include "lorentz_ops/chains.hpp"

#include <utility>

namespace lorentz_ops {

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> eliminate(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t p = row;
    while (p < m.rows && m(p, col).is_zero()) ++p;
    if (p == m.rows) continue;
    if (p != row) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(row, j));
    }
    ComplexRational inv = ComplexRational(1) / m(row, col);
    for (std::size_t j = col; j < m.cols; ++j) m(row, j) *= inv;
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      ComplexRational f = m(r, col);
      for (std::size_t j = col; j < m.cols; ++j) m(r, j) = m(r, j) - f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Matrix& m) {
  Matrix w = m;
  return eliminate(w).size();
}

std::vector<std::vector<ComplexRational>> null_space(const Matrix& m) {
  Matrix w = m;
  std::vector<std::size_t> pivots = eliminate(w);
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<ComplexRational>> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<ComplexRational> v(m.cols);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -w(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols; ++j) out(i, a.cols + j) = b(i, j);
  }
  return out;
}

bool is_zero_vector(const std::vector<ComplexRational>& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

RankChain rank_chain(const Matrix& m) {
  RankChain out;
  Matrix p = Matrix::identity(m.rows);
  out.ranks.push_back(m.rows);
  for (unsigned k = 0; k <= m.rows + 1; ++k) {
    p = p * m;
    out.ranks.push_back(rank(p));
    std::size_t n = out.ranks.size();
    if (out.ranks[n - 1] == out.ranks[n - 2]) {
      out.stabilization = static_cast<unsigned>(n - 2);
      p = p * m;
      out.ranks.push_back(rank(p));
      out.verified_permanent = out.ranks.back() == out.ranks[n - 1];
      return out;
    }
  }
  return out;
}

unsigned kernel_basis_ascent(const Matrix& m) {
  Matrix pk = Matrix::identity(m.rows);
  for (unsigned k = 0;; ++k) {
    Matrix pk1 = pk * m;
    // N(M^k) is always inside N(M^{k+1}); equality when each basis vector of
    // the larger kernel is killed by M^k as well.
    bool up = true;
    for (const auto& v : null_space(pk)) up = up && is_zero_vector(pk1 * v);
    bool down = true;
    for (const auto& v : null_space(pk1)) down = down && is_zero_vector(pk * v);
    if (up && down) return k;
    pk = std::move(pk1);
  }
}

unsigned range_descent(const Matrix& m) {
  Matrix pk = Matrix::identity(m.rows);
  for (unsigned k = 0;; ++k) {
    Matrix pk1 = pk * m;
    std::size_t rk = rank(pk);
    std::size_t rk1 = rank(pk1);
    std::size_t joint = rank(hconcat(pk, pk1));
    // R(M^{k+1}) inside R(M^k) means joint == rk; equality needs joint == rk1 too.
    if (joint == rk && joint == rk1) return k;
    pk = std::move(pk1);
  }
}

FiniteChainResult finite_ascent_descent(const Matrix& m) {
  FiniteChainResult out;
  out.chain = rank_chain(m);
  out.kernel_basis_ascent = kernel_basis_ascent(m);
  out.range_descent = range_descent(m);
  out.ascent = Verdict::exact(out.chain.stabilization);
  out.descent = Verdict::exact(out.range_descent);
  out.consistent = out.chain.verified_permanent && out.kernel_basis_ascent == out.chain.stabilization &&
                   out.range_descent == out.chain.stabilization;
  return out;
}

FiniteChainResult finite_ascent_descent(const OperatorSpec<FiniteSpace>& op) { return finite_ascent_descent(matrix(op)); }

}  // namespace lorentz_ops
