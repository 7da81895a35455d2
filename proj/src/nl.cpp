#include "nl.hpp"

namespace k3 {

bool class_exists(long d, long disc, long coset) {
  if (disc <= 0) throw math_error("class_exists: Delta must be positive");
  return mod_pos(disc, 4 * d) == mod_pos(coset * coset, 4 * d);
}

RankTwoGram gram_model(const RankTwoClass& cls) {
  if (!class_exists(cls.d, cls.delta_disc, cls.delta_coset))
    throw math_error("gram_model: no lattice with these invariants");
  RankTwoGram g;
  g.d = cls.d;
  g.y = cls.delta_coset;
  g.x2 = Int(cls.delta_coset) * cls.delta_coset - cls.delta_disc;
  g.x2 /= 2 * cls.d;  // (y^2 - Delta)/4d, doubled
  return g;
}

long count_vectors(const RankTwoClass& cls, long h, long a) {
  long d = cls.d;
  // beta = sH + t*Gamma forces t^2 * Delta = a^2 - 4d(h-1)
  Int num = Int(a) * a - Int(4) * d * (h - 1);
  if (num < 0) return 0;
  Int t2q, rem;
  mpz_fdiv_qr(t2q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), Int(cls.delta_disc).get_mpz_t());
  if (rem != 0) return 0;
  if (t2q == 0) return 0;  // t = 0 excluded
  Int f;
  mpz_sqrt(f.get_mpz_t(), t2q.get_mpz_t());
  if (f * f != t2q) return 0;
  long fl = static_cast<long>(f.get_si());
  long count = 0;
  long y = cls.delta_coset;
  if (mod_pos(a - fl * y, 2 * d) == 0) ++count;  // t = +f, s = (a - ty)/2d
  if (mod_pos(a + fl * y, 2 * d) == 0) ++count;  // t = -f
  return count;
}

std::map<RankTwoClass, long> decompose_D(long d, long h, long a) {
  Int disc = Int(a) * a - Int(4) * d * (h - 1);
  if (disc <= 0) throw math_error("decompose_D: a^2 - 4d(h-1) must be positive");
  long D = static_cast<long>(disc.get_si());
  std::map<RankTwoClass, long> out;
  for (long f = 1; f * f <= D; ++f) {
    if (D % (f * f) != 0) continue;
    long Dp = D / (f * f);
    for (long coset = 0; coset <= d; ++coset) {
      if (!class_exists(d, Dp, coset)) continue;
      RankTwoClass cls{d, Dp, coset};
      long c = count_vectors(cls, h, a);
      if (c > 0) out[cls] = c;
    }
  }
  return out;
}

DivisorClass p_in_terms_of_H(long d, long disc, long coset, long window) {
  if (!class_exists(d, disc, coset))
    throw math_error("p_in_terms_of_H: no lattice with these invariants");
  if (rat(disc, 4 * d) > rat(window))
    throw math_error("p_in_terms_of_H: window too small for Delta=" + std::to_string(disc));
  // D_{h,a} with a = coset, h = 1 + (a^2 - Delta)/4d has index n = -Delta/4d
  long a = coset;
  Int hh = (Int(a) * a - disc);
  hh /= 4 * d;
  long h = static_cast<long>(hh.get_si()) + 1;
  auto parts = decompose_D(d, h, a);
  RankTwoClass self{d, disc, coset};
  auto self_it = parts.find(self);
  if (self_it == parts.end())
    throw math_error("p_in_terms_of_H: class does not occur in its own D (internal)");
  long self_mult = self_it->second;
  DivisorClass out;
  out.d = d;
  out.add(heegner_of(d, h, a), 1);
  for (auto& [cls, mult] : parts) {
    if (cls == self) continue;
    out = out + p_in_terms_of_H(d, cls.delta_disc, cls.delta_coset, window) * rat(-mult);
  }
  return out * rat(1, self_mult);
}

}  // namespace k3
