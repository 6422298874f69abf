#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace fab {

using Rat = mpq_class;

inline long double to_ld(const Rat& q) {
  // mpq_get_d loses the extended mantissa; split num/den for a long double quotient.
  return static_cast<long double>(mpf_class(q.get_num(), 160).get_d()) /
         static_cast<long double>(mpf_class(q.get_den(), 160).get_d());
}

inline size_t bit_size(const Rat& q) {
  size_t n = mpz_sizeinbase(q.get_num().get_mpz_t(), 2);
  size_t d = mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
  return n > d ? n : d;
}

// Accepts "p/q", integer, or decimal literals like "-0.25" (converted exactly).
inline std::optional<Rat> parse_rat(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto digits_ok = [](const std::string& t, bool sign_ok) {
    if (t.empty()) return false;
    size_t i = 0;
    if (sign_ok && (t[0] == '+' || t[0] == '-')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) return std::nullopt;
    Rat q;
    if (q.set_str(s, 10) != 0) return std::nullopt;
    if (q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return q;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    if (!digits_ok(s, true)) return std::nullopt;
    Rat q;
    if (q.set_str(s, 10) != 0) return std::nullopt;
    return q;
  }
  std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
  bool neg = !ip.empty() && ip[0] == '-';
  if (!ip.empty() && (ip[0] == '+' || ip[0] == '-')) ip = ip.substr(1);
  if (ip.empty() && fp.empty()) return std::nullopt;
  if (!ip.empty() && !digits_ok(ip, false)) return std::nullopt;
  if (!fp.empty() && !digits_ok(fp, false)) return std::nullopt;
  mpz_class n(ip.empty() ? "0" : ip);
  for (char c : fp) {
    n *= 10;
    n += c - '0';
  }
  mpz_class d(1);
  for (size_t i = 0; i < fp.size(); ++i) d *= 10;
  Rat q(n, d);
  q.canonicalize();
  if (neg) q = -q;
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Dual scalar: exact rational by default, long double once an orbit degrades.
class Scalar {
 public:
  Scalar() : exact_(true), q_(0), d_(0) {}
  Scalar(int v) : exact_(true), q_(v), d_(0) {}
  Scalar(const Rat& q) : exact_(true), q_(q), d_(0) {}
  static Scalar fp(long double v) {
    Scalar s;
    s.exact_ = false;
    s.d_ = v;
    return s;
  }

  bool exact() const { return exact_; }
  const Rat& rat() const { return q_; }
  long double ld() const { return exact_ ? to_ld(q_) : d_; }
  size_t bits() const { return exact_ ? bit_size(q_) : 0; }
  Scalar degraded() const { return fp(ld()); }

  bool is_zero() const { return exact_ ? q_ == 0 : d_ == 0.0L; }
  int sgn() const {
    if (exact_) return ::sgn(q_);
    return d_ > 0 ? 1 : (d_ < 0 ? -1 : 0);
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return Scalar(Rat(a.q_ + b.q_));
    return fp(a.ld() + b.ld());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return Scalar(Rat(a.q_ - b.q_));
    return fp(a.ld() - b.ld());
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return Scalar(Rat(a.q_ * b.q_));
    return fp(a.ld() * b.ld());
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return Scalar(Rat(a.q_ / b.q_));
    return fp(a.ld() / b.ld());
  }
  Scalar operator-() const {
    if (exact_) return Scalar(Rat(-q_));
    return fp(-d_);
  }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return a.q_ == b.q_;
    return a.ld() == b.ld();
  }

 private:
  bool exact_;
  Rat q_;
  long double d_;
};

}  // namespace fab
