#include "fab/degree_growth.hpp"

#include <map>

#include "fab/picard.hpp"

namespace fab {

HomTriple f_homogeneous(const Params& prm) {
  // sigma[x:y:z] = [xyz + (-y+z)x^2 : xyz + (-x+z)y^2 : xyz], tau linear in y.
  // With a = p/q, b = r/s, multiply the triple through by q*s.
  mpz_class p = prm.a.get_num(), q = prm.a.get_den();
  mpz_class r = prm.b.get_num(), s = prm.b.get_den();
  HomPoly s1(3), s2(3), s3(3);
  s1.at(1, 1) = 1;   // xyz
  s1.at(2, 1) = -1;  // -x^2 y
  s1.at(2, 0) = 1;   // x^2 z
  s2.at(1, 1) = 1;   // xyz
  s2.at(1, 2) = -1;  // -x y^2
  s2.at(0, 2) = 1;   // y^2 z
  s3.at(1, 1) = 1;   // xyz
  HomTriple f;
  f.deg = 3;
  HomPoly c0(3), c1(3), c2(3);
  mpz_class qs = q * s, rq = r * q, pqs = (p + q) * s;
  for (size_t k = 0; k < c0.a.size(); ++k) {
    c0.a[k] = qs * s1.a[k];
    c1.a[k] = rq * s1.a[k] + pqs * s3.a[k] - qs * s2.a[k];
    c2.a[k] = qs * s3.a[k];
  }
  f.c[0] = c0;
  f.c[1] = c1;
  f.c[2] = c2;
  mpz_class g = poly_content(f.c[0]);
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), poly_content(f.c[1]).get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), poly_content(f.c[2]).get_mpz_t());
  if (g > 1)
    for (int k = 0; k < 3; ++k) poly_divexact_scalar(f.c[k], g);
  return f;
}

namespace {

// the collapse-curve forms with denominators cleared (defined up to scalar)
std::vector<HomPoly> fixed_forms(const Params& prm) {
  mpz_class p = prm.a.get_num(), q = prm.a.get_den();
  mpz_class r = prm.b.get_num(), s = prm.b.get_den();
  std::vector<HomPoly> v;
  HomPoly c1(2);  // xy - xz - yz  (C1+)
  c1.at(1, 1) = 1;
  c1.at(1, 0) = -1;
  c1.at(0, 1) = -1;
  v.push_back(c1);
  HomPoly c0m(1);  // qs*y - rq*x - (p+q)s*z  (C0-)
  c0m.at(0, 1) = q * s;
  c0m.at(1, 0) = -r * q;
  c0m.at(0, 0) = -(p + q) * s;
  v.push_back(c0m);
  // C1-: (x-z)(bx - y + az) - z^2, cleared by qs: (x-z)(rq*x - qs*y + ps*z) - qs^2...
  // clear with qs: qs*[(x-z)(bx-y+az) - z^2] = (x-z)(rs^{-1}... build directly:
  // (x-z)(rq x - qs y + ps z) - qs z^2
  HomPoly c1m(2);
  c1m.at(2, 0) += r * q;        // x * rq x
  c1m.at(1, 1) += -q * s;       // x * (-qs y)
  c1m.at(1, 0) += p * s;        // x * ps z
  c1m.at(1, 0) += -r * q;       // -z * rq x
  c1m.at(0, 1) += q * s;        // -z * (-qs y)
  c1m.at(0, 0) += -p * s;       // -z * ps z
  c1m.at(0, 0) += -q * s;       // -qs z^2
  v.push_back(c1m);
  return v;
}

void reduce_triple(HomTriple& H, const Params& prm) {
  auto content3 = [&H]() {
    mpz_class g = poly_content(H.c[0]);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), poly_content(H.c[1]).get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), poly_content(H.c[2]).get_mpz_t());
    return g;
  };
  mpz_class g = content3();
  if (g > 1)
    for (int k = 0; k < 3; ++k) poly_divexact_scalar(H.c[k], g);

  // monomial factors
  int vx = H.c[0].x_valuation(), vy = H.c[0].y_valuation(), vz = H.c[0].z_valuation();
  for (int k = 1; k < 3; ++k) {
    vx = std::min(vx, H.c[k].x_valuation());
    vy = std::min(vy, H.c[k].y_valuation());
    vz = std::min(vz, H.c[k].z_valuation());
  }
  if (vx + vy + vz > 0) {
    for (int k = 0; k < 3; ++k) H.c[k] = poly_shift(H.c[k], vx, vy, vz);
    H.deg -= vx + vy + vz;
  }

  // targeted trial division by the collapse forms
  for (const HomPoly& d : fixed_forms(prm)) {
    while (true) {
      auto q0 = poly_divexact(H.c[0], d);
      if (!q0) break;
      auto q1 = poly_divexact(H.c[1], d);
      if (!q1) break;
      auto q2 = poly_divexact(H.c[2], d);
      if (!q2) break;
      H.c[0] = *q0;
      H.c[1] = *q1;
      H.c[2] = *q2;
      H.deg -= d.deg;
    }
  }

  // full gcd fallback
  while (true) {
    HomPoly g2 = poly_gcd(poly_gcd(H.c[0], H.c[1]), H.c[2]);
    if (g2.deg == 0) break;
    auto q0 = poly_divexact(H.c[0], g2);
    auto q1 = poly_divexact(H.c[1], g2);
    auto q2 = poly_divexact(H.c[2], g2);
    if (!q0 || !q1 || !q2) break;
    H.c[0] = *q0;
    H.c[1] = *q1;
    H.c[2] = *q2;
    H.deg -= g2.deg;
  }
  g = content3();
  if (g > 1)
    for (int k = 0; k < 3; ++k) poly_divexact_scalar(H.c[k], g);
}

}  // namespace

HomTriple compose_reduce(const HomTriple& F, const HomTriple& G, const Params& prm) {
  std::map<std::pair<int, int>, HomPoly> powmemo[3];
  std::function<const HomPoly&(int, int)> pw = [&](int comp, int e) -> const HomPoly& {
    auto key = std::make_pair(comp, e);
    auto it = powmemo[comp].find({comp, e});
    if (it != powmemo[comp].end()) return it->second;
    HomPoly r;
    if (e == 0) {
      r = HomPoly(0);
      r.at(0, 0) = 1;
    } else if (e == 1) {
      r = G.c[comp];
    } else {
      r = poly_mul(pw(comp, e - 1), G.c[comp]);
    }
    return powmemo[comp].emplace(key, std::move(r)).first->second;
  };
  std::map<std::pair<int, int>, HomPoly> prodmemo;
  HomTriple H;
  H.deg = F.deg * G.deg;
  for (int k = 0; k < 3; ++k) {
    HomPoly R(H.deg);
    for (int i = 0; i <= F.deg; ++i)
      for (int j = 0; i + j <= F.deg; ++j) {
        const mpz_class& c = F.c[k].at(i, j);
        if (c == 0) continue;
        auto key = std::make_pair(i, j);
        auto it = prodmemo.find(key);
        if (it == prodmemo.end()) {
          HomPoly t = poly_mul(poly_mul(pw(0, i), pw(1, j)), pw(2, F.deg - i - j));
          it = prodmemo.emplace(key, std::move(t)).first;
        }
        poly_addmul(R, it->second, c);
      }
    H.c[k] = std::move(R);
  }
  reduce_triple(H, prm);
  return H;
}

DegreeReport degree_sequence(const Params& prm, int N, int exact_ceiling) {
  DegreeReport rep;
  rep.degrees.push_back(1);
  if (N == 0) return rep;
  HomTriple f = f_homogeneous(prm);
  HomTriple g = f;
  rep.degrees.push_back(g.deg);
  for (int n = 2; n <= N; ++n) {
    if (n > exact_ceiling) {
      rep.truncated = true;
      break;
    }
    g = compose_reduce(f, g, prm);
    rep.degrees.push_back(g.deg);
  }
  return rep;
}

std::vector<long> predicted_degrees(int N) {
  std::vector<long> out;
  Mat5 fs = pullback_matrix();
  Vec5 v = kClassL;
  for (int n = 0; n <= N; ++n) {
    out.push_back(pair_classes(kClassL, v));
    v = mat5_apply(fs, v);
  }
  return out;
}

DropReport detect_degree_drop(const Params& prm, int N) {
  DropReport r;
  DegreeReport d = degree_sequence(prm, N);
  std::vector<long> pred = predicted_degrees(N);
  for (size_t n = 0; n < d.degrees.size() && n < pred.size(); ++n) {
    if (d.degrees[n] < pred[n]) {
      r.dropped = true;
      r.first_n = int(n);
      r.actual = d.degrees[n];
      r.predicted = pred[n];
      return r;
    }
  }
  return r;
}

}  // namespace fab
