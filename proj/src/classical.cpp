#include "classical.hpp"

#include <map>

namespace k3 {

QExp eisenstein_qexp(int k, long prec) {
  if (prec < 1) throw math_error("eisenstein_qexp: prec must be >= 1");
  long factor;
  switch (k) {
    case 2: factor = -24; break;
    case 4: factor = 240; break;
    case 6: factor = -504; break;
    default: throw math_error("eisenstein_qexp: unsupported weight");
  }
  QExp e;
  e.add_term(rat(0), 1);
  for (long n = 1; n < prec; ++n) {
    Int s = 0;
    for (long d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      Int p;
      mpz_ui_pow_ui(p.get_mpz_t(), d, k - 1);
      s += p;
    }
    e.add_term(rat(n), Rat(s * factor));
  }
  e.set_prec(rat(prec));
  return e;
}

QExp euler_product(long prec) {
  QExp e;
  for (long j = 0;; ++j) {
    long g1 = j * (3 * j - 1) / 2;
    long g2 = j * (3 * j + 1) / 2;
    if (g1 >= prec && g2 >= prec) break;
    Rat sign = (j % 2 == 0) ? 1 : -1;
    if (g1 < prec) e.add_term(rat(g1), sign);
    if (j > 0 && g2 < prec) e.add_term(rat(g2), sign);
  }
  e.set_prec(rat(prec));
  return e;
}

QExp delta_qexp(long prec) {
  if (prec < 2) throw math_error("delta_qexp: prec must be >= 2");
  QExp eta24 = euler_product(prec).pow(24);
  QExp delta = eta24.shifted(rat(1)).truncated(rat(prec));
  // second route, kept as a construction-time consistency gate
  QExp e4 = eisenstein_qexp(4, prec), e6 = eisenstein_qexp(6, prec);
  QExp alt = (e4.pow(3) - e6.pow(2)) * rat(1, 1728);
  if (!delta.same_terms(alt.truncated(rat(prec))))
    throw math_error("delta_qexp: eta product disagrees with (E4^3-E6^2)/1728");
  return delta;
}

std::vector<ClassicalForm> mform_basis(int k, long prec) {
  if (k < 0 || k % 2 != 0) throw math_error("mform_basis: weight must be even and nonnegative");
  QExp e4 = eisenstein_qexp(4, prec), e6 = eisenstein_qexp(6, prec);
  std::vector<ClassicalForm> basis;
  for (int a = k / 4; a >= 0; --a) {
    int rem = k - 4 * a;
    if (rem % 6 != 0) continue;
    int b = rem / 6;
    QExp f = QExp::one().truncated(rat(prec));
    if (a > 0) f = f * e4.pow(a);
    if (b > 0) f = f * e6.pow(b);
    basis.push_back({k, f.truncated(rat(prec))});
  }
  return basis;
}

long mform_dim(int k) {
  if (k < 0 || k % 2 != 0) return 0;
  long d = k / 12;
  if (k % 12 != 2) d += 1;
  return d;
}

}  // namespace k3
