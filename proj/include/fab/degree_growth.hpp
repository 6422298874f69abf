#pragma once

#include <vector>

#include "fab/params.hpp"
#include "fab/poly.hpp"

namespace fab {

// Homogeneous degree-3 triple for f = tau.sigma, denominators of (a, b) cleared.
HomTriple f_homogeneous(const Params& prm);

// Substitute G into F and cancel the common factor of the three components
// (integer content, monomial valuations, fixed collapse forms, then a full
// bivariate gcd fallback).
HomTriple compose_reduce(const HomTriple& F, const HomTriple& G, const Params& prm);

struct DegreeReport {
  std::vector<long> degrees;  // d_0 .. d_N (or shorter when truncated)
  bool truncated = false;
};

DegreeReport degree_sequence(const Params& prm, int N, int exact_ceiling = 8);

// L^T J (f*)^n L for n = 0..N, computed from the picard module matrices.
std::vector<long> predicted_degrees(int N);

struct DropReport {
  bool dropped = false;
  int first_n = -1;
  long actual = 0, predicted = 0;
};

DropReport detect_degree_drop(const Params& prm, int N);

}  // namespace fab
