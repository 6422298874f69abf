#pragma once

#include <optional>

#include "fab/rat.hpp"

namespace fab {

struct GenericityResult {
  bool generic = true;
  std::optional<long> witness;  // smallest n hitting (n+1)(2a+1)=1 or a+1+n(a-1)=0
};

// Closed-form solve: a = -n/(2n+2) gives n = -2a/(2a+1); a = (n-1)/(n+1) gives
// n = (a+1)/(1-a). Either with integer n >= 0 makes the map non-generic.
inline GenericityResult genericity(const Rat& a) {
  GenericityResult r;
  auto consider = [&r](const Rat& n) {
    if (n.get_den() != 1 || n < 0) return;
    if (!n.get_num().fits_slong_p()) return;
    long v = n.get_num().get_si();
    if (!r.witness || v < *r.witness) {
      r.generic = false;
      r.witness = v;
    }
  };
  Rat twoa1 = 2 * a + 1;
  if (twoa1 != 0) consider(Rat(-2 * a / twoa1));
  Rat onema = 1 - a;
  if (onema != 0) consider(Rat((a + 1) / onema));
  return r;
}

// Brute-force variant used as a test oracle for the closed-form solve.
inline GenericityResult genericity_scan(const Rat& a, long n_max) {
  GenericityResult r;
  for (long n = 0; n <= n_max; ++n) {
    if ((n + 1) * (2 * a + 1) == 1 || a + 1 + n * (a - 1) == 0) {
      r.generic = false;
      r.witness = n;
      return r;
    }
  }
  return r;
}

struct Params {
  Rat a, b;
  bool generic = true;
  std::optional<long> witness;
  bool b_nonzero = true;

  Params(const Rat& a_, const Rat& b_) : a(a_), b(b_) {
    auto g = genericity(a);
    generic = g.generic;
    witness = g.witness;
    b_nonzero = (b != 0);
  }

  long double a_ld() const { return to_ld(a); }
  long double b_ld() const { return to_ld(b); }
};

}  // namespace fab
