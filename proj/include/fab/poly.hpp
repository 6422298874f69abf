#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "fab/params.hpp"

namespace fab {

// Dense homogeneous ternary form of degree `deg` over Z.
// Coefficient of x^i y^j z^(deg-i-j) sits at index(i, j), i + j <= deg.
struct HomPoly {
  int deg = 0;
  std::vector<mpz_class> a;

  HomPoly() : a(1, mpz_class(0)) {}
  explicit HomPoly(int d) : deg(d), a(size_t(d + 1) * (d + 2) / 2, mpz_class(0)) {}

  size_t idx(int i, int j) const {
    return size_t(i) * (2 * deg + 3 - i) / 2 + j;
  }
  const mpz_class& at(int i, int j) const { return a[idx(i, j)]; }
  mpz_class& at(int i, int j) { return a[idx(i, j)]; }
  bool is_zero() const;
  // max total degree in (x, y) over the support; -1 for the zero form
  int xy_degree() const;
  // min z-exponent over the support (z-adic valuation); deg+1 for zero
  int z_valuation() const;
  int x_valuation() const;
  int y_valuation() const;
};

HomPoly poly_mul(const HomPoly& A, const HomPoly& B);
void poly_addmul(HomPoly& A, const HomPoly& B, const mpz_class& c);  // A += c*B, equal deg
mpz_class poly_content(const HomPoly& A);
void poly_divexact_scalar(HomPoly& A, const mpz_class& g);
// Exact division by a homogeneous divisor; nullopt when not divisible.
std::optional<HomPoly> poly_divexact(const HomPoly& A, const HomPoly& D);
// Shift out x^k, y^k or z^k factors.
HomPoly poly_shift(const HomPoly& A, int dx, int dy, int dz);
Rat poly_eval(const HomPoly& A, const Rat& x, const Rat& y, const Rat& z);

// Primitive gcd of two forms, modular (evaluation/interpolation mod 62-bit
// primes with CRT, verified by exact division).
HomPoly poly_gcd(const HomPoly& A, const HomPoly& B);

struct HomTriple {
  int deg = 1;
  HomPoly c[3];
  static HomTriple identity();
};

}  // namespace fab
