#include "linalg.hpp"

#include <algorithm>

namespace k3 {

void RatMatrix::append_row(const std::vector<Rat>& row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw math_error("RatMatrix: row length mismatch");
  a_.insert(a_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<Rat> RatMatrix::row(std::size_t i) const {
  std::vector<Rat> r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

namespace {

// Pivot choice: nonzero entry with the smallest numerator+denominator size,
// which keeps elimination growth in check.  Ties resolve to the lowest row.
std::size_t pick_pivot(const RatMatrix& m, const std::vector<std::vector<Rat>>& w,
                       std::size_t from, std::size_t col) {
  std::size_t best = w.size();
  std::size_t best_size = 0;
  for (std::size_t i = from; i < w.size(); ++i) {
    const Rat& v = w[i][col];
    if (v == 0) continue;
    std::size_t sz = mpz_sizeinbase(v.get_num_mpz_t(), 2) + mpz_sizeinbase(v.get_den_mpz_t(), 2);
    if (best == w.size() || sz < best_size) {
      best = i;
      best_size = sz;
    }
  }
  (void)m;
  return best;
}

}  // namespace

EchelonResult echelon_reduce(const RatMatrix& m) {
  std::vector<std::vector<Rat>> w;
  w.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) w.push_back(m.row(i));
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < m.cols() && rank < w.size(); ++col) {
    std::size_t p = pick_pivot(m, w, rank, col);
    if (p == w.size()) continue;
    std::swap(w[rank], w[p]);
    Rat inv = 1 / w[rank][col];
    for (std::size_t j = col; j < m.cols(); ++j) w[rank][j] *= inv;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i == rank) continue;
      const Rat f = w[i][col];
      if (f == 0) continue;
      for (std::size_t j = col; j < m.cols(); ++j) w[i][j] -= f * w[rank][j];
    }
    pivots.push_back(col);
    ++rank;
  }
  EchelonResult res;
  res.rank = rank;
  res.pivots = pivots;
  res.reduced = RatMatrix(0, m.cols());
  for (std::size_t i = 0; i < rank; ++i) res.reduced.append_row(w[i]);
  return res;
}

std::vector<std::vector<Rat>> nullspace(const RatMatrix& m) {
  EchelonResult e = echelon_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<Rat>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rat> x(m.cols(), Rat(0));
    x[free] = 1;
    for (std::size_t i = 0; i < e.rank; ++i) x[e.pivots[i]] = -e.reduced.at(i, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

SolveResult solve(const RatMatrix& m, const std::vector<Rat>& b) {
  if (b.size() != m.rows()) throw math_error("solve: rhs length mismatch");
  RatMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  EchelonResult e = echelon_reduce(aug);
  SolveResult r;
  for (std::size_t i = 0; i < e.rank; ++i)
    if (e.pivots[i] == m.cols()) return r;  // 0 = 1 row
  r.consistent = true;
  r.unique = (e.rank == m.cols());
  r.x.assign(m.cols(), Rat(0));
  for (std::size_t i = 0; i < e.rank; ++i) r.x[e.pivots[i]] = e.reduced.at(i, m.cols());
  return r;
}

IntMatrix int_identity(std::size_t n) {
  IntMatrix m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b) {
  std::size_t n = a.size(), k = b.size(), p = b.empty() ? 0 : b[0].size();
  IntMatrix c(n, std::vector<Int>(p, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (a[i][j] == 0) continue;
      for (std::size_t l = 0; l < p; ++l) c[i][l] += a[i][j] * b[j][l];
    }
  return c;
}

Int int_det(IntMatrix a) {
  std::size_t n = a.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

namespace {

void row_op(IntMatrix& m, std::size_t dst, std::size_t src, const Int& f) {
  for (std::size_t j = 0; j < m[dst].size(); ++j) m[dst][j] -= f * m[src][j];
}
void col_op(IntMatrix& m, std::size_t dst, std::size_t src, const Int& f) {
  for (std::size_t i = 0; i < m.size(); ++i) m[i][dst] -= f * m[i][src];
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& g) {
  std::size_t nr = g.size(), nc = nr ? g[0].size() : 0;
  SnfResult res;
  res.d = g;
  res.u = int_identity(nr);
  res.v = int_identity(nc);
  IntMatrix& d = res.d;
  std::size_t t = 0;
  while (t < nr && t < nc) {
    // locate smallest nonzero entry in the remaining block
    std::size_t pi = nr, pj = nc;
    for (std::size_t i = t; i < nr; ++i)
      for (std::size_t j = t; j < nc; ++j)
        if (d[i][j] != 0 &&
            (pi == nr || cmp(abs(d[i][j]), abs(d[pi][pj])) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi == nr) break;
    std::swap(d[t], d[pi]);
    std::swap(res.u[t], res.u[pi]);
    for (std::size_t i = 0; i < nr; ++i) std::swap(d[i][t], d[i][pj]);
    for (std::size_t i = 0; i < nc; ++i) std::swap(res.v[i][t], res.v[i][pj]);

    bool dirty = false;
    for (std::size_t i = t + 1; i < nr; ++i) {
      if (d[i][t] == 0) continue;
      Int f;
      mpz_fdiv_q(f.get_mpz_t(), d[i][t].get_mpz_t(), d[t][t].get_mpz_t());
      row_op(d, i, t, f);
      row_op(res.u, i, t, f);
      if (d[i][t] != 0) dirty = true;
    }
    for (std::size_t j = t + 1; j < nc; ++j) {
      if (d[t][j] == 0) continue;
      Int f;
      mpz_fdiv_q(f.get_mpz_t(), d[t][j].get_mpz_t(), d[t][t].get_mpz_t());
      col_op(d, j, t, f);
      col_op(res.v, j, t, f);
      if (d[t][j] != 0) dirty = true;
    }
    if (dirty) continue;  // re-pick a smaller pivot

    // enforce divisibility d_t | d[i][j] on the rest of the block
    bool fixed = true;
    for (std::size_t i = t + 1; i < nr && fixed; ++i)
      for (std::size_t j = t + 1; j < nc && fixed; ++j)
        if (d[i][j] % d[t][t] != 0) {
          // add row i to row t, then restart reduction at t
          for (std::size_t l = 0; l < nc; ++l) d[t][l] += d[i][l];
          for (std::size_t l = 0; l < nr; ++l) res.u[t][l] += res.u[i][l];
          fixed = false;
        }
    if (!fixed) continue;
    if (d[t][t] < 0) {
      for (std::size_t l = 0; l < nc; ++l) d[t][l] = -d[t][l];
      for (std::size_t l = 0; l < nr; ++l) res.u[t][l] = -res.u[t][l];
    }
    ++t;
  }
  res.diag.clear();
  for (std::size_t i = 0; i < std::min(nr, nc); ++i) res.diag.push_back(d[i][i]);
  return res;
}

IntMatrix row_hnf(const IntMatrix& g) {
  IntMatrix w = g;
  std::size_t nr = w.size(), nc = nr ? w[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t col = 0; col < nc && r < nr; ++col) {
    // gcd-reduce all rows below r on this column
    for (;;) {
      std::size_t p = nr;
      for (std::size_t i = r; i < nr; ++i)
        if (w[i][col] != 0 && (p == nr || cmp(abs(w[i][col]), abs(w[p][col])) < 0)) p = i;
      if (p == nr) break;
      std::swap(w[r], w[p]);
      bool clean = true;
      for (std::size_t i = r + 1; i < nr; ++i) {
        if (w[i][col] == 0) continue;
        Int f;
        mpz_fdiv_q(f.get_mpz_t(), w[i][col].get_mpz_t(), w[r][col].get_mpz_t());
        row_op(w, i, r, f);
        if (w[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (w[r][col] == 0) continue;
    if (w[r][col] < 0)
      for (auto& x : w[r]) x = -x;
    // reduce the rows above to put entries in [0, pivot)
    for (std::size_t i = 0; i < r; ++i) {
      Int f;
      mpz_fdiv_q(f.get_mpz_t(), w[i][col].get_mpz_t(), w[r][col].get_mpz_t());
      row_op(w, i, r, f);
    }
    ++r;
  }
  w.resize(r);
  return w;
}

}  // namespace k3
