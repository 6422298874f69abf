#include "fab/picard.hpp"

#include <cmath>

namespace fab {

Mat5 pullback_matrix() {
  // columns are images of the basis classes:
  //   f*V1 = V3 + C1+, f*V2 = V2, f*V3 = V1, f*V4 = V5, f*V5 = V4 + C0+
  Vec5 cols[5];
  Vec5 v1 = {1, 0, 0, 0, 0}, v2 = {0, 1, 0, 0, 0}, v3 = {0, 0, 1, 0, 0};
  Vec5 v4 = {0, 0, 0, 1, 0}, v5 = {0, 0, 0, 0, 1};
  auto add = [](Vec5 a, const Vec5& b) {
    for (int i = 0; i < 5; ++i) a[i] += b[i];
    return a;
  };
  cols[0] = add(v3, kClassC1p);
  cols[1] = v2;
  cols[2] = v1;
  cols[3] = v5;
  cols[4] = add(v4, kClassC0p);
  Mat5 m{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m[i][j] = cols[j][i];
  return m;
}

Mat5 intersection_form() {
  return Mat5{Vec5{0, 1, 0, 0, 0}, Vec5{1, -2, 1, 0, 0}, Vec5{0, 1, -1, 0, 0},
              Vec5{0, 0, 0, -1, 0}, Vec5{0, 0, 0, 0, -1}};
}

Mat3 restricted_action() { return Mat3{Vec3{0, 1, 1}, Vec3{0, 0, 1}, Vec3{1, 1, 1}}; }

Mat3 pairing_matrix() { return Mat3{Vec3{1, 2, 2}, Vec3{2, 2, 3}, Vec3{2, 3, 5}}; }

long pair_classes(const Vec5& v, const Vec5& w) {
  Mat5 J = intersection_form();
  long r = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) r += v[i] * J[i][j] * w[j];
  return r;
}

long pairing(const Vec3& s, const Vec3& u) {
  Mat3 M = pairing_matrix();
  long r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r += s[i] * M[i][j] * u[j];
  return r;
}

Vec5 mat5_apply(const Mat5& m, const Vec5& v) {
  Vec5 r{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) r[i] += m[i][j] * v[j];
  return r;
}

Mat5 mat5_mul(const Mat5& a, const Mat5& b) {
  Mat5 r{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

namespace {

// determinant of a matrix of univariate integer polys (coeff vectors, const first)
using UZ = std::vector<mpz_class>;

UZ uz_mul(const UZ& a, const UZ& b) {
  UZ r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

UZ uz_addscaled(UZ a, const UZ& b, int sign) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
  return a;
}

UZ det_rec(const std::vector<std::vector<UZ>>& m, std::vector<int> cols) {
  size_t row = m.size() - cols.size();
  if (cols.size() == 1) return m[row][cols[0]];
  UZ acc = {0};
  for (size_t k = 0; k < cols.size(); ++k) {
    std::vector<int> sub;
    for (size_t t = 0; t < cols.size(); ++t)
      if (t != k) sub.push_back(cols[t]);
    UZ minor = det_rec(m, sub);
    UZ term = uz_mul(m[row][cols[k]], minor);
    acc = uz_addscaled(acc, term, (k % 2 == 0) ? 1 : -1);
  }
  return acc;
}

template <size_t N, typename M>
std::vector<mpz_class> charpoly_impl(const M& mat) {
  std::vector<std::vector<UZ>> e(N, std::vector<UZ>(N));
  for (size_t i = 0; i < N; ++i)
    for (size_t j = 0; j < N; ++j) {
      UZ c = {mpz_class(-mat[i][j])};
      if (i == j) c.push_back(1);
      e[i][j] = c;
    }
  std::vector<int> cols(N);
  for (size_t i = 0; i < N; ++i) cols[i] = int(i);
  UZ d = det_rec(e, cols);
  d.resize(N + 1, 0);
  return d;
}

}  // namespace

std::vector<mpz_class> charpoly5(const Mat5& m) { return charpoly_impl<5>(m); }
std::vector<mpz_class> charpoly3(const Mat3& m) { return charpoly_impl<3>(m); }

double dynamical_degree() {
  // largest root of x^3 - x^2 - 2x - 1 by Newton from x0 = 2.2
  long double x = 2.2L;
  for (int i = 0; i < 100; ++i) {
    long double fx = ((x - 1) * x - 2) * x - 1;
    long double dfx = (3 * x - 2) * x - 2;
    long double nx = x - fx / dfx;
    if (std::fabs((double)(nx - x)) < 1e-15) {
      x = nx;
      break;
    }
    x = nx;
  }
  return (double)x;
}

}  // namespace fab
