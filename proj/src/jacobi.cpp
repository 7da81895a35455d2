#include "jacobi.hpp"

#include "linalg.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace k3 {

Rat JacobiForm::coeff(long n, long r) const {
  if (n > prec) throw math_error("JacobiForm: coefficient read beyond precision");
  auto it = c.find(n);
  if (it == c.end()) return 0;
  auto jt = it->second.find(r);
  return jt == it->second.end() ? Rat(0) : jt->second;
}

void JacobiForm::add(long n, long r, const Rat& v) {
  if (v == 0) return;
  if (n > prec) return;
  Rat& slot = c[n][r];
  slot += v;
  if (slot == 0) {
    c[n].erase(r);
    if (c[n].empty()) c.erase(n);
  }
}

std::size_t JacobiForm::term_count() const {
  std::size_t t = 0;
  for (auto& [n, row] : c) t += row.size();
  return t;
}

JacobiForm JacobiForm::operator*(const JacobiForm& o) const {
  JacobiForm out;
  out.weight = weight + o.weight;
  out.index = index + o.index;
  out.prec = std::min(prec, o.prec);
  for (auto& [n1, row1] : c) {
    if (n1 > out.prec) break;
    for (auto& [n2, row2] : o.c) {
      long n = n1 + n2;
      if (n > out.prec) break;
      auto& dst = out.c[n];
      for (auto& [r1, a] : row1)
        for (auto& [r2, b] : row2) {
          Rat& slot = dst[r1 + r2];
          slot += a * b;
        }
    }
  }
  // sweep zeros produced by cancellation
  for (auto it = out.c.begin(); it != out.c.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();)
      jt = (jt->second == 0) ? it->second.erase(jt) : std::next(jt);
    it = it->second.empty() ? out.c.erase(it) : std::next(it);
  }
  return out;
}

JacobiForm JacobiForm::operator+(const JacobiForm& o) const {
  if (index != o.index || weight != o.weight)
    throw math_error("JacobiForm: sum of incompatible forms");
  JacobiForm out = *this;
  out.prec = std::min(prec, o.prec);
  for (auto& [n, row] : o.c)
    for (auto& [r, v] : row) out.add(n, r, v);
  for (auto it = out.c.begin(); it != out.c.end();)
    it = (it->first > out.prec) ? out.c.erase(it) : std::next(it);
  return out;
}

JacobiForm JacobiForm::operator*(const Rat& s) const {
  JacobiForm out;
  out.weight = weight;
  out.index = index;
  out.prec = prec;
  if (s == 0) return out;
  out.c = c;
  for (auto& [n, row] : out.c)
    for (auto& [r, v] : row) v *= s;
  return out;
}

JacobiForm JacobiForm::mul_scalar_series(const QExp& f, int f_weight) const {
  if (f.denom() != 1) throw math_error("JacobiForm: scalar series must be on the integer grid");
  JacobiForm out;
  out.weight = weight + f_weight;
  out.index = index;
  long fprec = prec;
  if (f.prec()) fprec = std::min<long>(fprec, static_cast<long>(floor_int(*f.prec()).get_si()) - 1);
  out.prec = fprec;
  for (auto& [j, fv] : f.terms()) {
    for (auto& [n, row] : c) {
      long nn = n + j;
      if (nn > out.prec) break;
      if (nn < 0) continue;
      auto& dst = out.c[nn];
      for (auto& [r, v] : row) {
        Rat& slot = dst[r];
        slot += fv * v;
      }
    }
  }
  for (auto it = out.c.begin(); it != out.c.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();)
      jt = (jt->second == 0) ? it->second.erase(jt) : std::next(jt);
    it = it->second.empty() ? out.c.erase(it) : std::next(it);
  }
  return out;
}

void JacobiForm::check_class_function() const {
  long m = index;
  std::map<std::pair<Int, long>, Rat> seen;
  for (auto& [n, row] : c)
    for (auto& [r, v] : row) {
      // symmetry under r -> -r (even weight)
      auto it = c.find(n);
      Rat mirror = 0;
      if (it != c.end()) {
        auto jt = it->second.find(-r);
        if (jt != it->second.end()) mirror = jt->second;
      }
      if (mirror != v) throw math_error("JacobiForm: c(n,r) != c(n,-r)");
      Int disc = Int(4) * n * m - Int(r) * r;
      long cls = mod_pos(r, 2 * m);
      cls = std::min(cls, 2 * m - cls);
      auto key = std::make_pair(disc, cls);
      auto [pos, fresh] = seen.emplace(key, v);
      if (!fresh && pos->second != v)
        throw math_error("JacobiForm: c(n,r) is not a function of (4nm-r^2, r mod 2m)");
    }
}

Int JacobiForm::max_negative_discriminant() const {
  Int worst = 0;
  long m = index;
  for (auto& [n, row] : c)
    for (auto& [r, v] : row) {
      Int neg = Int(r) * r - Int(4) * n * m;
      if (neg > worst) worst = neg;
    }
  return worst;
}

const QExp& VVForm::component(long gamma_rep) const {
  auto it = comp.find(gamma_rep);
  if (it == comp.end()) throw math_error("VVForm: no such component");
  return it->second;
}

namespace {

// slices r -> q-series used while assembling the theta quotients
using Slices = std::map<long, QExp>;

QExp slices_at_one(const Slices& s, long denom) {
  QExp tot(denom);
  for (auto& [r, f] : s) tot = tot + f;
  return tot;
}

JacobiForm slices_to_jacobi(const Slices& s, int weight, long index, long prec) {
  JacobiForm out;
  out.weight = weight;
  out.index = index;
  out.prec = prec;
  for (auto& [r, f] : s)
    for (auto& [key, v] : f.terms()) {
      Rat e = f.key_exponent(key);
      if (!is_integer(e)) throw math_error("jacobi generator: non-integral exponent survived");
      long n = static_cast<long>(e.get_num().get_si());
      if (n < 0) throw math_error("jacobi generator: negative q-power survived");
      if (n <= prec) out.add(n, r, v);
    }
  return out;
}

// theta_2(z)^2 and -theta_1(z)^2 share the support (a,b) -> q^{(a^2+a+b^2+b)/2+1/4} z^{a+b+1}
Slices theta_half_squared(long n_max, bool alternating) {
  Slices s;
  long lim = static_cast<long>(std::sqrt(2.0 * n_max)) + 2;
  for (long a = -lim; a <= lim; ++a)
    for (long b = -lim; b <= lim; ++b) {
      long twice = a * a + a + b * b + b;
      if (twice % 2 != 0) continue;
      long n = twice / 2;
      if (n > n_max) continue;
      long r = a + b + 1;
      Rat sgn = 1;
      if (alternating && ((a + b) % 2 != 0)) sgn = -1;
      auto it = s.find(r);
      if (it == s.end()) it = s.emplace(r, QExp(4)).first;
      it->second.add_term(rat(4 * n + 1, 4), sgn);
    }
  Rat p = rat(n_max) + rat(5, 4);
  for (auto& [r, f] : s) f.set_prec(p);
  return s;
}

// theta_3(z)^2 (eps=+1) / theta_4(z)^2 (eps=-1): q^{(a^2+b^2)/2} z^{a+b}
Slices theta_int_squared(long n_max, int eps) {
  Slices s;
  long lim = static_cast<long>(std::sqrt(2.0 * n_max)) + 2;
  for (long a = -lim; a <= lim; ++a)
    for (long b = -lim; b <= lim; ++b) {
      long twice = a * a + b * b;
      if (rat(twice, 2) > rat(n_max)) continue;
      long r = a + b;
      Rat sgn = 1;
      if (eps < 0 && ((a + b) % 2 != 0)) sgn = -1;
      auto it = s.find(r);
      if (it == s.end()) it = s.emplace(r, QExp(2)).first;
      it->second.add_term(rat(twice, 2), sgn);
    }
  Rat p = rat(n_max) + rat(1, 2);
  for (auto& [r, f] : s) f.set_prec(p);
  return s;
}

Slices divide_slices(const Slices& s, const QExp& divisor) {
  QExp inv = divisor.inverse();
  Slices out;
  for (auto& [r, f] : s) out.emplace(r, f * inv);
  return out;
}

}  // namespace

JacobiEngine::JacobiEngine(Parallel p, std::string cache_dir)
    : par(p), cache_dir_(std::move(cache_dir)) {}

void JacobiEngine::ensure_generators(long prec) {
  if (gen_prec_ >= prec) return;
  JacobiForm m2, p0;
  bool got = load_cached("phi_m2_1", prec, m2) && load_cached("phi_0_1", prec, p0);
  if (!got) {
    long n_max = prec + 2;
    {
      // phi_{-2,1} = -theta_1^2 / eta^6
      Slices num = theta_half_squared(n_max, /*alternating=*/true);
      QExp eta6 = euler_product(n_max + 2).pow(6).shifted(rat(1, 4));
      m2 = slices_to_jacobi(divide_slices(num, eta6), -2, 1, prec);
    }
    {
      Slices t2 = theta_half_squared(n_max, false);
      Slices t3 = theta_int_squared(n_max, +1);
      Slices t4 = theta_int_squared(n_max, -1);
      Slices q2 = divide_slices(t2, slices_at_one(t2, 4));
      Slices q3 = divide_slices(t3, slices_at_one(t3, 2));
      Slices q4 = divide_slices(t4, slices_at_one(t4, 2));
      Slices sum;
      for (auto* part : {&q2, &q3, &q4})
        for (auto& [r, f] : *part) {
          auto it = sum.find(r);
          if (it == sum.end())
            sum.emplace(r, f);
          else
            it->second = it->second + f;
        }
      p0 = slices_to_jacobi(sum, 0, 1, prec) * Rat(4);
    }
    m2.check_class_function();
    p0.check_class_function();
    // pinned normalizations of the q^0 terms
    if (m2.coeff(0, 1) != 1 || m2.coeff(0, 0) != -2 || m2.coeff(0, -1) != 1)
      throw math_error("phi_{-2,1} normalization check failed");
    if (p0.coeff(0, 1) != 1 || p0.coeff(0, 0) != 10 || p0.coeff(0, -1) != 1)
      throw math_error("phi_{0,1} normalization check failed");
    save_cached("phi_m2_1", m2);
    save_cached("phi_0_1", p0);
  }
  phi_m2_ = std::move(m2);
  phi_0_ = std::move(p0);
  gen_prec_ = prec;
}

bool JacobiEngine::load_cached(const std::string& name, long prec, JacobiForm& out) {
  if (cache_dir_.empty()) return false;
  std::ifstream in(cache_dir_ + "/" + name + ".txt");
  if (!in) return false;
  std::string magic, version;
  in >> magic >> version;
  if (magic != "k3jacobi" || version != "v1") return false;
  JacobiForm f;
  long terms = 0;
  in >> f.weight >> f.index >> f.prec >> terms;
  if (!in || f.prec < prec) return false;
  for (long t = 0; t < terms; ++t) {
    long n, r;
    std::string v;
    in >> n >> r >> v;
    if (!in) return false;
    f.add(n, r, rat_parse(v));
  }
  try {
    f.check_class_function();
  } catch (const math_error&) {
    return false;
  }
  out = std::move(f);
  return true;
}

void JacobiEngine::save_cached(const std::string& name, const JacobiForm& f) {
  if (cache_dir_.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(cache_dir_, ec);
  std::ofstream out(cache_dir_ + "/" + name + ".txt");
  if (!out) return;
  out << "k3jacobi v1\n";
  out << f.weight << " " << f.index << " " << f.prec << " " << f.term_count() << "\n";
  for (auto& [n, row] : f.c)
    for (auto& [r, v] : row) out << n << " " << r << " " << rat_str(v) << "\n";
}

JacobiForm JacobiEngine::phi_m2(long prec) {
  std::lock_guard<std::mutex> lock(mu_);
  ensure_generators(prec);
  return phi_m2_;
}

JacobiForm JacobiEngine::phi_0(long prec) {
  std::lock_guard<std::mutex> lock(mu_);
  ensure_generators(prec);
  return phi_0_;
}

const std::vector<JacobiForm>& JacobiEngine::mixed_products(long m, long prec) {
  std::lock_guard<std::mutex> lock(mu_);
  if (mixed_m_ == m && mixed_prec_ >= prec) return mixed_;
  ensure_generators(prec);
  std::vector<JacobiForm> pow_m2(m + 1), pow_0(m + 1);
  JacobiForm unit;
  unit.weight = 0;
  unit.index = 0;
  unit.prec = prec;
  unit.add(0, 0, 1);
  pow_m2[0] = unit;
  pow_0[0] = unit;
  // the two power chains are independent
  Parallel two{std::min<unsigned>(par.workers, 2)};
  two.for_each(2, [&](std::size_t which) {
    auto& chain = which == 0 ? pow_m2 : pow_0;
    const JacobiForm& gen = which == 0 ? phi_m2_ : phi_0_;
    for (long a = 1; a <= m; ++a) chain[a] = chain[a - 1] * gen;
  });
  mixed_.assign(m + 1, JacobiForm{});
  par.for_each(static_cast<std::size_t>(m + 1), [&](std::size_t a) {
    if (a == 0)
      mixed_[a] = pow_0[m];
    else if (static_cast<long>(a) == m)
      mixed_[a] = pow_m2[m];
    else
      mixed_[a] = pow_m2[a] * pow_0[m - a];
  });
  mixed_m_ = m;
  mixed_prec_ = prec;
  return mixed_;
}

std::vector<JacobiForm> JacobiEngine::weak_basis(int k, long m, long prec) {
  if (k % 2 != 0) throw math_error("weak_basis: weight must be even");
  if (m < 1) throw math_error("weak_basis: index must be positive");
  const std::vector<JacobiForm>& mixed = mixed_products(m, prec);
  struct Piece {
    long a;
    ClassicalForm f;
  };
  std::vector<Piece> pieces;
  for (long a = 0; a <= m; ++a) {
    int kf = k + 2 * static_cast<int>(a);
    if (kf < 0) continue;
    for (auto& f : mform_basis(kf, prec + 1)) pieces.push_back({a, f});
  }
  std::vector<JacobiForm> basis(pieces.size());
  par.for_each(pieces.size(), [&](std::size_t i) {
    basis[i] = mixed[pieces[i].a].mul_scalar_series(pieces[i].f.expansion, pieces[i].f.weight);
  });
  return basis;
}

VVForm theta_decompose(const JacobiForm& phi) {
  long m = phi.index;
  if (m < 1) throw math_error("theta_decompose: index must be positive");
  VVForm out;
  out.m = m;
  out.sign = -1;
  std::map<long, std::map<long, Rat>> table;  // gamma -> key over 4m -> value
  bool any = false;
  for (auto& [n, row] : phi.c)
    for (auto& [r, v] : row) {
      long cls = mod_pos(r, 2 * m);
      long g = std::min(cls, 2 * m - cls);
      long key = 4 * m * n - r * r;
      auto [it, fresh] = table[g].emplace(key, v);
      if (!fresh && it->second != v)
        throw math_error("theta_decompose: coefficients inconsistent across the (4nm-r^2, class) relation");
      any = true;
    }
  if (!any && phi.prec < 0) throw math_error("theta_decompose: no coefficients within precision");
  for (long g = 0; g <= m; ++g) {
    QExp comp(4 * m);
    for (auto& [key, v] : table[g]) comp.add_term(rat(key, 4 * m), v);
    comp.set_prec(rat(phi.prec) + 1 - rat(g * g, 4 * m));
    out.comp.emplace(g, std::move(comp));
  }
  return out;
}

std::vector<JacobiForm> holomorphic_subspace(const std::vector<JacobiForm>& weak) {
  if (weak.empty()) return {};
  long m = weak.front().index;
  long prec = weak.front().prec;
  for (auto& f : weak)
    if (f.index != m || f.prec != prec || f.weight != weak.front().weight)
      throw math_error("holomorphic_subspace: basis must share (k, m, prec)");
  // constraint slots: c(n, r) = 0 whenever 4nm - r^2 < 0, one representative
  // per class, r in [0, m], n < r^2/4m
  std::vector<std::pair<long, long>> slots;
  for (long r = 0; r <= m; ++r)
    for (long n = 0; 4 * m * n < r * r; ++n) slots.emplace_back(n, r);
  for (auto& [n, r] : slots)
    if (n > prec) throw math_error("holomorphic_subspace: insufficient precision to see all constraint slots");
  RatMatrix cons(weak.size(), slots.size());
  for (std::size_t i = 0; i < weak.size(); ++i)
    for (std::size_t j = 0; j < slots.size(); ++j)
      cons.at(i, j) = weak[i].coeff(slots[j].first, slots[j].second);
  // kernel combinations x with x^T * cons = 0: nullspace of the transpose
  RatMatrix tr(slots.size(), weak.size());
  for (std::size_t i = 0; i < weak.size(); ++i)
    for (std::size_t j = 0; j < slots.size(); ++j) tr.at(j, i) = cons.at(i, j);
  auto kernel = nullspace(tr);
  std::vector<JacobiForm> holo(kernel.size());
  for (std::size_t v = 0; v < kernel.size(); ++v) {
    JacobiForm acc;
    acc.weight = weak.front().weight;
    acc.index = m;
    acc.prec = prec;
    for (std::size_t i = 0; i < weak.size(); ++i) {
      if (kernel[v][i] == 0) continue;
      acc = acc + weak[i] * kernel[v][i];
    }
    holo[v] = std::move(acc);
  }
  return holo;
}

}  // namespace k3
