#pragma once

#include <vector>

#include "util.hpp"

namespace k3 {

class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, Rat(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void append_row(const std::vector<Rat>& row);
  std::vector<Rat> row(std::size_t i) const;

  bool operator==(const RatMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

 private:
  std::size_t rows_, cols_;
  std::vector<Rat> a_;
};

struct EchelonResult {
  std::size_t rank = 0;
  RatMatrix reduced;               // RREF, zero rows dropped
  std::vector<std::size_t> pivots; // pivot column per kept row, strictly increasing
};

// Reduced row-echelon form over Q; row space preserved.
EchelonResult echelon_reduce(const RatMatrix& m);

// Basis of the right nullspace { x : m x = 0 }.
std::vector<std::vector<Rat>> nullspace(const RatMatrix& m);

// Solve m x = b; nullopt if inconsistent.  `unique` reports whether the
// solution is unique (full column rank).
struct SolveResult {
  bool consistent = false;
  bool unique = false;
  std::vector<Rat> x;
};
SolveResult solve(const RatMatrix& m, const std::vector<Rat>& b);

using IntMatrix = std::vector<std::vector<Int>>;

IntMatrix int_identity(std::size_t n);
IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b);
Int int_det(IntMatrix a);  // Bareiss, fraction-free

struct SnfResult {
  IntMatrix u, d, v;  // u*g*v = d, diagonal, d_i | d_{i+1}, u,v unimodular
  std::vector<Int> diag;
};
SnfResult smith_normal_form(const IntMatrix& g);

// Column-style Hermite normal form of the lattice spanned by the rows of g:
// returns a full-rank upper-staircase basis (rows).  Used for sublattice bases.
IntMatrix row_hnf(const IntMatrix& g);

}  // namespace k3
