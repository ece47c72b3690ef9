#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace dygx {

using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                           boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a returned certificate fails its own re-verification. These are
// fail-stop by design: a violated inequality means a bug, not bad input.
struct verify_error : std::runtime_error {
  explicit verify_error(const std::string& what) : std::runtime_error(what) {}
};

struct contract_error : std::runtime_error {
  explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

// x is a nonnegative integer multiple of 1/d.
inline bool is_unit_multiple(const Rat& x, const Int& d) {
  if (x < 0) return false;
  return rat_num(x * d) % rat_den(x * d) == 0;
}

inline bool is_unit_multiple(const Rat& x, const Rat& unit) {
  if (x < 0) return false;
  Rat q = x / unit;
  return rat_den(q) == 1;
}

inline bool is_integral(const Rat& x) { return rat_den(x) == 1; }

inline Int ceil_rat(const Rat& x) {
  Int n = rat_num(x), d = rat_den(x);
  Int q = n / d;
  if (n > 0 && q * d != n) ++q;
  return q;
}

inline Int floor_rat(const Rat& x) {
  Int n = rat_num(x), d = rat_den(x);
  Int q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

// Smallest k >= 0 with 2^k >= x. Used wherever the paper writes log(.); all
// inequalities are checked with this integer bound so they stay exact.
inline Int ceil_log2(const Rat& x) {
  if (x <= 1) return 0;
  Int k = 0;
  Rat p = 1;
  while (p < x) {
    p *= 2;
    ++k;
  }
  return k;
}

inline Rat pow_rat(const Rat& base, const Int& exp) {
  Rat r = 1, b = base;
  Int e = exp;
  if (e < 0) throw input_error("pow_rat: negative exponent");
  while (e > 0) {
    if (e % 2 == 1) r *= b;
    b *= b;
    e /= 2;
  }
  return r;
}

inline Int pow_int(const Int& base, const Int& exp) {
  Int r = 1, b = base, e = exp;
  while (e > 0) {
    if (e % 2 == 1) r *= b;
    b *= b;
    e /= 2;
  }
  return r;
}

// Smallest integer r >= 1 with r^L >= n^k, i.e. ceil(n^{k/L}).
inline Int ceil_pow_frac(const Int& n, const Int& k, const Int& L) {
  if (n <= 1) return 1;
  Int target = pow_int(n, k);
  Int lo = 1, hi = 1;
  while (pow_int(hi, L) < target) hi *= 2;
  while (lo < hi) {
    Int mid = (lo + hi) / 2;
    if (pow_int(mid, L) >= target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

inline long to_long(const Int& x) { return static_cast<long>(x); }

inline double to_double(const Rat& x) { return static_cast<double>(x); }

}  // namespace dygx
