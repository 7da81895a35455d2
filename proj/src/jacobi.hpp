#pragma once

#include <mutex>

#include "classical.hpp"
#include "qexp.hpp"
#include "util.hpp"

namespace k3 {

// Jacobi form of even weight and integer index m, stored as the finite table
// c(n, r) for 0 <= n <= prec.  The coefficient at (n, r) depends only on
// (4nm - r^2, r mod 2m); check_class_function verifies that on demand.
struct JacobiForm {
  long weight = 0;
  long index = 1;
  long prec = 0;  // complete for all n <= prec
  std::map<long, std::map<long, Rat>> c;

  Rat coeff(long n, long r) const;
  void add(long n, long r, const Rat& v);
  std::size_t term_count() const;

  JacobiForm operator*(const JacobiForm& o) const;
  JacobiForm operator+(const JacobiForm& o) const;
  JacobiForm operator*(const Rat& s) const;
  JacobiForm mul_scalar_series(const QExp& f, int f_weight) const;

  void check_class_function() const;
  // max over stored nonzero coefficients of r^2 - 4nm (weak bound <= m^2)
  Int max_negative_discriminant() const;
};

// Vector-valued form on the discriminant module Z/2mZ, components conflated
// over +-gamma (all producers here are symmetric).  Component gamma lives on
// the exponent grid sign * gamma^2/4m + Z.
struct VVForm {
  long m = 1;
  int sign = -1;
  std::map<long, QExp> comp;  // gamma rep in [0, m] -> series on denom 4m

  const QExp& component(long gamma_rep) const;
};

// The two standard weight -2 / weight 0 index 1 weak Jacobi generators,
// built from Jacobi theta quotients.
struct JacobiEngine {
  explicit JacobiEngine(Parallel par = {}, std::string cache_dir = "");

  JacobiForm phi_m2(long prec);
  JacobiForm phi_0(long prec);

  // mixed[a] = phi_{-2,1}^a * phi_{0,1}^{m-a}, a = 0..m
  const std::vector<JacobiForm>& mixed_products(long m, long prec);

  // monomial basis { f * phi_{-2}^a * phi_0^{m-a} : f in M_{k+2a} }, ordered
  // by ascending a then the mform_basis order
  std::vector<JacobiForm> weak_basis(int k, long m, long prec);

  Parallel par;

 private:
  std::string cache_dir_;
  std::mutex mu_;
  long gen_prec_ = -1;
  JacobiForm phi_m2_, phi_0_;
  long mixed_m_ = -1, mixed_prec_ = -1;
  std::vector<JacobiForm> mixed_;

  void ensure_generators(long prec);
  bool load_cached(const std::string& name, long prec, JacobiForm& out);
  void save_cached(const std::string& name, const JacobiForm& f);
};

VVForm theta_decompose(const JacobiForm& phi);

// Basis of the subspace with no negative theta-decomposition exponents,
// obtained by exact linear solving on the finitely many negative-discriminant
// slots n < r^2/4m, r in [0, m].
std::vector<JacobiForm> holomorphic_subspace(const std::vector<JacobiForm>& weak);

}  // namespace k3
