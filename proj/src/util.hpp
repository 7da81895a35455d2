#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace k3 {

using Rat = mpq_class;
using Int = mpz_class;

// Error taxonomy mirrors the CLI exit codes: 1 math, 2 budget, 3 config.
struct math_error : std::runtime_error {
  explicit math_error(const std::string& w) : std::runtime_error(w) {}
};
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& w) : std::runtime_error(w) {}
};
struct config_error : std::runtime_error {
  explicit config_error(const std::string& w) : std::runtime_error(w) {}
};

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// Accepts "p" or "p/q" with q > 0 after canonicalization.
inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (s.empty() || r.set_str(s, 10) != 0)
    throw config_error("bad rational literal: '" + s + "'");
  if (r.get_den() == 0) throw config_error("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int floor_int(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}
inline Int ceil_int(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline long lcm_long(long a, long b) { return std::lcm(a, b); }

// Deterministic worker pool capability. Tasks are indexed; callers own the
// output slots, so worker count never changes results.
struct Parallel {
  unsigned workers = 1;

  template <class F>
  void for_each(std::size_t n, F&& f) const {
    if (n == 0) return;
    unsigned w = workers;
    if (w <= 1 || n == 1) {
      for (std::size_t i = 0; i < n; ++i) f(i);
      return;
    }
    if (w > n) w = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(w);
    for (unsigned t = 0; t < w; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            f(i);
          }
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }
};

}  // namespace k3
