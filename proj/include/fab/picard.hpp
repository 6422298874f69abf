#pragma once

#include <gmpxx.h>

#include <array>
#include <vector>

namespace fab {

using Vec5 = std::array<long, 5>;  // basis (V1, V2, V3, V4, V5)
using Mat5 = std::array<Vec5, 5>;
using Vec3 = std::array<long, 3>;  // basis (C0, C1, f-transform of C0)
using Mat3 = std::array<Vec3, 3>;

struct DivisorClass {
  Vec5 coords{};
};

inline const Vec5 kClassL = {1, 1, 1, 0, 0};
inline const Vec5 kClassC0p = {1, 1, 1, -1, 0};
inline const Vec5 kClassC1p = {2, 1, 0, -1, 0};
// V0 = L - V2 - V3 - V4 - V5
inline const Vec5 kClassV0 = {1, 0, 0, -1, -1};

Mat5 pullback_matrix();     // f* in the V-basis, assembled from the curve rules
Mat5 intersection_form();   // J
Mat3 restricted_action();   // A, the action on the span of C0+, C1+, f*C0+
Mat3 pairing_matrix();      // M of the plus/minus S-bases

long pair_classes(const Vec5& v, const Vec5& w);          // v^T J w
long pairing(const Vec3& s_plus, const Vec3& s_minus);    // s^T M u

Vec5 mat5_apply(const Mat5& m, const Vec5& v);
Mat5 mat5_mul(const Mat5& a, const Mat5& b);

// Exact characteristic polynomial coefficients, constant term first.
std::vector<mpz_class> charpoly5(const Mat5& m);
std::vector<mpz_class> charpoly3(const Mat3& m);

double dynamical_degree();  // largest root of x^3 - x^2 - 2x - 1, to 1e-12

}  // namespace fab
