#include "qexp.hpp"

namespace k3 {

namespace {

// Effective minimal exponent used by the precision propagation rule: for a
// series with no visible terms the first possibly-nonzero exponent is prec.
std::optional<Rat> eff_min_exp(const QExp& a) {
  if (auto m = a.min_exp()) return m;
  return a.prec();  // nullopt for an exact zero
}

std::optional<Rat> add_opt(const std::optional<Rat>& a, const std::optional<Rat>& b) {
  if (!a || !b) return std::nullopt;
  return *a + *b;
}

std::optional<Rat> min_opt(const std::optional<Rat>& a, const std::optional<Rat>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

QExp QExp::monomial(const Rat& e, const Rat& c) {
  long d = static_cast<long>(e.get_den().get_si());
  QExp r(d);
  if (c != 0) r.coeffs_[e.get_num().get_si()] = c;
  return r;
}

void QExp::set_prec(const Rat& p) {
  prec_ = p;
  drop_beyond_prec();
}

void QExp::drop_beyond_prec() {
  if (!prec_) return;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (key_exponent(it->first) >= *prec_)
      it = coeffs_.erase(it);
    else
      ++it;
  }
}

Rat QExp::coeff(const Rat& e) const {
  if (prec_ && e >= *prec_)
    throw math_error("QExp: coefficient read at exponent " + rat_str(e) +
                     " beyond precision " + rat_str(*prec_));
  return coeff_raw(e);
}

Rat QExp::coeff_raw(const Rat& e) const {
  Rat k = e * denom_;
  if (!is_integer(k)) return 0;
  auto it = coeffs_.find(static_cast<long>(k.get_num().get_si()));
  return it == coeffs_.end() ? Rat(0) : it->second;
}

void QExp::add_term(const Rat& e, const Rat& c) {
  if (c == 0) return;
  Rat k = e * denom_;
  if (!is_integer(k)) throw math_error("QExp: exponent off grid");
  if (prec_ && e >= *prec_) return;
  long key = static_cast<long>(k.get_num().get_si());
  Rat& slot = coeffs_[key];
  slot += c;
  if (slot == 0) coeffs_.erase(key);
}

std::optional<Rat> QExp::min_exp() const {
  if (coeffs_.empty()) return std::nullopt;
  return key_exponent(coeffs_.begin()->first);
}

QExp QExp::with_denom(long d) const {
  if (d == denom_) return *this;
  if (d % denom_ != 0) throw math_error("QExp: regrid denominator incompatible");
  long f = d / denom_;
  QExp r(d);
  r.prec_ = prec_;
  for (auto& [k, c] : coeffs_) r.coeffs_[k * f] = c;
  return r;
}

QExp QExp::operator-() const {
  QExp r(*this);
  for (auto& [k, c] : r.coeffs_) c = -c;
  return r;
}

QExp QExp::operator+(const QExp& o) const {
  long d = lcm_long(denom_, o.denom_);
  QExp a = with_denom(d), b = o.with_denom(d);
  QExp r(d);
  r.prec_ = min_opt(a.prec_, b.prec_);
  r.coeffs_ = std::move(a.coeffs_);
  for (auto& [k, c] : b.coeffs_) {
    Rat& slot = r.coeffs_[k];
    slot += c;
    if (slot == 0) r.coeffs_.erase(k);
  }
  r.drop_beyond_prec();
  return r;
}

QExp QExp::operator-(const QExp& o) const { return *this + (-o); }

QExp QExp::operator*(const QExp& o) const {
  long d = lcm_long(denom_, o.denom_);
  QExp a = with_denom(d), b = o.with_denom(d);
  QExp r(d);
  // prec(ab) = min(prec(a)+minexp(b), prec(b)+minexp(a))
  r.prec_ = min_opt(add_opt(a.prec_, eff_min_exp(b)), add_opt(b.prec_, eff_min_exp(a)));
  for (auto& [ka, ca] : a.coeffs_)
    for (auto& [kb, cb] : b.coeffs_) {
      long k = ka + kb;
      if (r.prec_ && rat(k, d) >= *r.prec_) continue;
      Rat& slot = r.coeffs_[k];
      slot += ca * cb;
      if (slot == 0) r.coeffs_.erase(k);
    }
  return r;
}

QExp QExp::operator*(const Rat& c) const {
  QExp r(denom_);
  r.prec_ = prec_;
  if (c == 0) return r;
  r.coeffs_ = coeffs_;
  for (auto& [k, v] : r.coeffs_) v *= c;
  return r;
}

QExp QExp::shifted(const Rat& e) const {
  Rat k = e * denom_;
  long d = denom_;
  long num;
  if (is_integer(k)) {
    num = static_cast<long>(k.get_num().get_si());
  } else {
    d = lcm_long(denom_, static_cast<long>(e.get_den().get_si()));
    return with_denom(d).shifted(e);
  }
  QExp r(d);
  if (prec_) r.prec_ = *prec_ + e;
  for (auto& [kk, c] : coeffs_) r.coeffs_[kk + num] = c;
  return r;
}

QExp QExp::truncated(const Rat& p) const {
  QExp r(*this);
  Rat q = prec_ ? std::min(*prec_, p) : p;
  r.set_prec(q);
  return r;
}

QExp QExp::inverse() const {
  auto m = min_exp();
  if (!m) throw math_error("QExp: inverse of zero series");
  Rat lead = coeff_raw(*m);
  // u = unit part, invert by the convolution recursion, then shift back.
  QExp u = shifted(-*m);
  Rat horizon_rel;
  if (prec_)
    horizon_rel = *prec_ - *m;  // u is complete below this
  else
    horizon_rel = Rat(0);  // exact data: invert up to the largest stored key
  long d = denom_;
  long maxk;
  if (prec_) {
    maxk = static_cast<long>(ceil_int(horizon_rel * d).get_si());
  } else {
    maxk = u.coeffs_.empty() ? 0 : u.coeffs_.rbegin()->first;
    maxk += 1;
  }
  QExp w(d);
  std::map<long, Rat> wc;
  wc[0] = 1 / lead;
  for (long k = 1; k < maxk; ++k) {
    Rat s = 0;
    // w_k = -(1/u0) * sum_{0<j<=k} u_j w_{k-j}
    for (auto& [j, uj] : u.coeffs_) {
      if (j <= 0 || j > k) continue;
      auto it = wc.find(k - j);
      if (it != wc.end()) s += uj * it->second;
    }
    if (s != 0) wc[k] = -s / lead;
  }
  w.coeffs_ = std::move(wc);
  if (prec_) w.prec_ = horizon_rel;
  return w.shifted(-*m);
}

QExp QExp::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  if (e == 0) return QExp::one();
  QExp acc = *this;
  QExp base = *this;
  e -= 1;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = e > 1 ? base * base : base;
    e >>= 1;
  }
  return acc;
}

bool QExp::same_terms(const QExp& o) const {
  long d = lcm_long(denom_, o.denom_);
  return with_denom(d).coeffs_ == o.with_denom(d).coeffs_;
}

}  // namespace k3
