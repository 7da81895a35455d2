#pragma once

#include <map>
#include <optional>

#include "util.hpp"

namespace k3 {

// Sparse exact q-series on the exponent grid (1/denom)*Z.  Keys are exponent
// numerators; prec is an exclusive bound: coefficients are complete for all
// exponents < prec.  A missing prec means the series is exact everywhere.
class QExp {
 public:
  QExp() : denom_(1) {}
  explicit QExp(long denom) : denom_(denom) {
    if (denom < 1) throw math_error("QExp: denominator must be positive");
  }

  static QExp zero(long denom = 1) { return QExp(denom); }
  static QExp one() {
    QExp r;
    r.coeffs_[0] = 1;
    return r;
  }
  static QExp constant(const Rat& c) {
    QExp r;
    if (c != 0) r.coeffs_[0] = c;
    return r;
  }
  // q^{num/den}
  static QExp monomial(const Rat& e, const Rat& c = Rat(1));

  long denom() const { return denom_; }
  const std::map<long, Rat>& terms() const { return coeffs_; }
  const std::optional<Rat>& prec() const { return prec_; }
  bool is_zero() const { return coeffs_.empty(); }

  // Exponent of key k is k/denom.
  Rat key_exponent(long k) const { return rat(k, denom_); }

  void set_prec(const Rat& p);
  void clear_prec() { prec_.reset(); }

  // Coefficient at exponent e; throws past the precision horizon or off-grid.
  Rat coeff(const Rat& e) const;
  // Unchecked sparse read (0 when absent), still grid-checked.
  Rat coeff_raw(const Rat& e) const;

  void add_term(const Rat& e, const Rat& c);

  // Lowest stored exponent; nullopt when no terms.
  std::optional<Rat> min_exp() const;

  QExp with_denom(long d) const;  // regrid; d must be a multiple of denom
  QExp operator-() const;
  QExp operator+(const QExp& o) const;
  QExp operator-(const QExp& o) const;
  QExp operator*(const QExp& o) const;
  QExp operator*(const Rat& c) const;
  QExp shifted(const Rat& e) const;  // multiply by q^e
  QExp truncated(const Rat& p) const;

  // Multiplicative inverse of a series with invertible leading term.
  QExp inverse() const;
  QExp pow(long e) const;  // e may be negative for invertible series

  bool same_terms(const QExp& o) const;

 private:
  long denom_;
  std::map<long, Rat> coeffs_;
  std::optional<Rat> prec_;

  void drop_beyond_prec();
};

}  // namespace k3
