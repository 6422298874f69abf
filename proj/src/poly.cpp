#include "fab/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

namespace fab {

bool HomPoly::is_zero() const {
  for (const auto& c : a)
    if (c != 0) return false;
  return true;
}

int HomPoly::xy_degree() const {
  int best = -1;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j)
      if (at(i, j) != 0 && i + j > best) best = i + j;
  return best;
}

int HomPoly::z_valuation() const {
  int d = xy_degree();
  return d < 0 ? deg + 1 : deg - d;
}

int HomPoly::x_valuation() const {
  int best = deg + 1;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j)
      if (at(i, j) != 0 && i < best) best = i;
  return best;
}

int HomPoly::y_valuation() const {
  int best = deg + 1;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j)
      if (at(i, j) != 0 && j < best) best = j;
  return best;
}

HomPoly poly_mul(const HomPoly& A, const HomPoly& B) {
  HomPoly R(A.deg + B.deg);
  struct Term {
    int i, j;
    const mpz_class* c;
  };
  std::vector<Term> tb;
  for (int i = 0; i <= B.deg; ++i)
    for (int j = 0; i + j <= B.deg; ++j)
      if (B.at(i, j) != 0) tb.push_back({i, j, &B.at(i, j)});
  for (int i = 0; i <= A.deg; ++i)
    for (int j = 0; i + j <= A.deg; ++j) {
      const mpz_class& c = A.at(i, j);
      if (c == 0) continue;
      for (const Term& t : tb)
        mpz_addmul(R.at(i + t.i, j + t.j).get_mpz_t(), c.get_mpz_t(), t.c->get_mpz_t());
    }
  return R;
}

void poly_addmul(HomPoly& A, const HomPoly& B, const mpz_class& c) {
  for (size_t k = 0; k < A.a.size(); ++k)
    mpz_addmul(A.a[k].get_mpz_t(), B.a[k].get_mpz_t(), c.get_mpz_t());
}

mpz_class poly_content(const HomPoly& A) {
  mpz_class g = 0;
  for (const auto& c : A.a) {
    if (c == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void poly_divexact_scalar(HomPoly& A, const mpz_class& g) {
  if (g == 1) return;
  for (auto& c : A.a)
    if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

HomPoly poly_shift(const HomPoly& A, int dx, int dy, int dz) {
  HomPoly R(A.deg - dx - dy - dz);
  for (int i = dx; i <= A.deg; ++i)
    for (int j = dy; i + j <= A.deg; ++j) {
      if (A.at(i, j) == 0) continue;
      if (A.deg - i - j < dz) continue;
      R.at(i - dx, j - dy) = A.at(i, j);
    }
  return R;
}

std::optional<HomPoly> poly_divexact(const HomPoly& A, const HomPoly& D) {
  if (D.is_zero() || A.deg < D.deg) return std::nullopt;
  HomPoly R = A;
  HomPoly Q(A.deg - D.deg);
  // Array index order coincides with lex order on (i, j); leading term of D:
  int ldk = -1;
  for (int k = int(D.a.size()) - 1; k >= 0; --k)
    if (D.a[k] != 0) {
      ldk = k;
      break;
    }
  int ldi = 0, ldj = 0;
  {
    int k = 0;
    for (int i = 0; i <= D.deg; ++i)
      for (int j = 0; i + j <= D.deg; ++j, ++k)
        if (k == ldk) {
          ldi = i;
          ldj = j;
        }
  }
  const mpz_class& lc = D.a[ldk];
  std::vector<std::pair<std::pair<int, int>, const mpz_class*>> dterms;
  for (int i = 0; i <= D.deg; ++i)
    for (int j = 0; i + j <= D.deg; ++j)
      if (D.at(i, j) != 0) dterms.push_back({{i, j}, &D.at(i, j)});
  // walk remainder top-down in lex order
  int cur = int(R.a.size()) - 1;
  int ri = R.deg, rj = 0;  // (i, j) of index cur (last index is i=deg, j=0)
  auto dec = [&R](int& k, int& i, int& j) {
    --k;
    if (j > 0)
      --j;
    else {
      --i;
      j = R.deg - i;
    }
  };
  mpz_class qc, tmp;
  while (cur >= 0) {
    if (R.a[cur] == 0) {
      dec(cur, ri, rj);
      continue;
    }
    int qi = ri - ldi, qj = rj - ldj;
    if (qi < 0 || qj < 0 || qi + qj > Q.deg) return std::nullopt;
    if (!mpz_divisible_p(R.a[cur].get_mpz_t(), lc.get_mpz_t())) return std::nullopt;
    mpz_divexact(qc.get_mpz_t(), R.a[cur].get_mpz_t(), lc.get_mpz_t());
    Q.at(qi, qj) = qc;
    for (const auto& t : dterms)
      mpz_submul(R.at(qi + t.first.first, qj + t.first.second).get_mpz_t(),
                 qc.get_mpz_t(), t.second->get_mpz_t());
    dec(cur, ri, rj);
  }
  return Q;
}

Rat poly_eval(const HomPoly& A, const Rat& x, const Rat& y, const Rat& z) {
  Rat r = 0;
  for (int i = 0; i <= A.deg; ++i)
    for (int j = 0; i + j <= A.deg; ++j) {
      if (A.at(i, j) == 0) continue;
      Rat t(A.at(i, j));
      for (int k = 0; k < i; ++k) t *= x;
      for (int k = 0; k < j; ++k) t *= y;
      for (int k = 0; k < A.deg - i - j; ++k) t *= z;
      r += t;
    }
  return r;
}

// ---------- modular bivariate gcd ----------

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

inline u64 mulm(u64 a, u64 b, u64 p) { return (u64)((u128)a * b % p); }
inline u64 addm(u64 a, u64 b, u64 p) {
  u64 r = a + b;
  return r >= p ? r - p : r;
}
inline u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
inline u64 powm(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulm(r, a, p);
    a = mulm(a, a, p);
    e >>= 1;
  }
  return r;
}
inline u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

using UP = std::vector<u64>;  // univariate mod p, index = degree

int udeg(const UP& u) {
  for (int i = int(u.size()) - 1; i >= 0; --i)
    if (u[i]) return i;
  return -1;
}
void utrim(UP& u) { u.resize(size_t(std::max(0, udeg(u) + 1))); }

UP ugcd_monic(UP a, UP b, u64 p) {
  utrim(a);
  utrim(b);
  int guard = 4 * int(a.size() + b.size()) + 16;
  while (udeg(b) >= 0) {
    if (--guard < 0) return {1};  // no progress: p was not prime
    int da = udeg(a), db = udeg(b);
    if (da < db) {
      std::swap(a, b);
      continue;
    }
    u64 f = mulm(a[da], invm(b[db], p), p);
    for (int i = 0; i <= db; ++i) a[da - db + i] = subm(a[da - db + i], mulm(f, b[i], p), p);
    if (udeg(a) == da) return {1};
    utrim(a);
    std::swap(a, b);
  }
  if (udeg(a) < 0) return a;
  u64 inv = invm(a[udeg(a)], p);
  for (auto& c : a) c = mulm(c, inv, p);
  return a;
}

u64 ueval(const UP& u, u64 e, u64 p) {
  u64 r = 0;
  for (int i = int(u.size()) - 1; i >= 0; --i) r = addm(mulm(r, e, p), u[i], p);
  return r;
}

u64 mpz_mod_u64(const mpz_class& z, u64 p) {
  u64 r = mpz_fdiv_ui(z.get_mpz_t(), p);
  return r;
}

// Univariate integer polys (for leading-coefficient gcds), index = degree.
using ZP = std::vector<mpz_class>;

int zdeg(const ZP& u) {
  for (int i = int(u.size()) - 1; i >= 0; --i)
    if (u[i] != 0) return i;
  return -1;
}

mpz_class zcontent(const ZP& u) {
  mpz_class g = 0;
  for (const auto& c : u) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

bool zdiv(const ZP& D, const ZP& A, ZP* Q = nullptr) {
  int dd = zdeg(D), da = zdeg(A);
  if (dd < 0) return false;
  if (da < 0) {
    if (Q) Q->clear();
    return true;
  }
  if (da < dd) return false;
  ZP r(A.begin(), A.begin() + da + 1);
  ZP quo(da - dd + 1, 0);
  mpz_class q;
  for (int k = da; k >= dd; --k) {
    if (r[k] == 0) continue;
    if (!mpz_divisible_p(r[k].get_mpz_t(), D[dd].get_mpz_t())) return false;
    mpz_divexact(q.get_mpz_t(), r[k].get_mpz_t(), D[dd].get_mpz_t());
    quo[k - dd] = q;
    for (int i = 0; i <= dd; ++i) r[k - dd + i] -= q * D[i];
  }
  for (const auto& c : r)
    if (c != 0) return false;
  if (Q) *Q = quo;
  return true;
}

bool zdivides(const ZP& D, const ZP& A) { return zdiv(D, A); }

const u64 kPrimes[] = {
    4611686018427387847ULL, 4611686018427387817ULL, 4611686018427387787ULL,
    4611686018427387761ULL, 4611686018427387751ULL, 4611686018427387737ULL,
    4611686018427387733ULL, 4611686018427387709ULL, 4611686018427387701ULL,
    4611686018427387631ULL,
};

// gcd of two univariate integer polys, primitive, via modular images + CRT.
ZP zp_gcd(const ZP& A, const ZP& B) {
  int da = zdeg(A), db = zdeg(B);
  if (da < 0 && db < 0) return {};
  if (da < 0) return B;
  if (db < 0) return A;
  mpz_class cA = zcontent(A), cB = zcontent(B), cg;
  mpz_gcd(cg.get_mpz_t(), cA.get_mpz_t(), cB.get_mpz_t());
  ZP pA(A.begin(), A.begin() + da + 1), pB(B.begin(), B.begin() + db + 1);
  for (auto& c : pA) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), cA.get_mpz_t());
  for (auto& c : pB) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), cB.get_mpz_t());
  mpz_class gamma;
  mpz_gcd(gamma.get_mpz_t(), pA[da].get_mpz_t(), pB[db].get_mpz_t());
  std::vector<mpz_class> cand;
  mpz_class modulus = 1;
  int dmin = std::min(da, db) + 1;
  for (u64 p : kPrimes) {
    UP a(da + 1), b(db + 1);
    for (int i = 0; i <= da; ++i) a[i] = mpz_mod_u64(pA[i], p);
    for (int i = 0; i <= db; ++i) b[i] = mpz_mod_u64(pB[i], p);
    if (udeg(a) != da || udeg(b) != db) continue;  // p divides a leading coeff
    UP g = ugcd_monic(a, b, p);
    int dg = udeg(g);
    if (dg == 0) {
      ZP r = {cg};
      return r;
    }
    if (dg > dmin) continue;
    u64 gm = mpz_mod_u64(gamma, p);
    for (auto& c : g) c = mulm(c, gm, p);
    if (dg < dmin) {
      dmin = dg;
      cand.assign(dg + 1, 0);
      modulus = 1;
    }
    // CRT combine
    mpz_class pz(mpz_class(p).get_str());
    std::vector<mpz_class> next(dg + 1);
    bool stable = modulus != 1;
    for (int i = 0; i <= dg; ++i) {
      mpz_class target(mpz_class(g[i]).get_str());
      mpz_class cur = cand[i];
      mpz_class diff = (target - cur) % pz;
      if (diff < 0) diff += pz;
      mpz_class minv;
      mpz_class mm = modulus % pz;
      if (mm < 0) mm += pz;
      u64 inv = invm(mpz_mod_u64(mm, p), p);
      mpz_class k = (diff * mpz_class(mpz_class(inv).get_str())) % pz;
      next[i] = cur + k * modulus;
      mpz_class half = modulus * pz / 2;
      if (next[i] > half) next[i] -= modulus * pz;
      if (next[i] < -half) next[i] += modulus * pz;
      if (next[i] != cur) stable = false;
    }
    modulus *= pz;
    cand = next;
    if (stable) {
      ZP g2 = cand;
      mpz_class c2 = zcontent(g2);
      if (c2 != 0)
        for (auto& c : g2) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), c2.get_mpz_t());
      if (zdivides(g2, pA) && zdivides(g2, pB)) {
        for (auto& c : g2) c *= cg;
        return g2;
      }
    }
  }
  ZP r = {cg};  // conservative: treat as coprime up to content
  return r;
}

// Bivariate dense over Z: coef[i] = integer poly in y, for x^i.
struct BZ {
  std::vector<ZP> cx;
  int dx() const {
    for (int i = int(cx.size()) - 1; i >= 0; --i)
      if (zdeg(cx[i]) >= 0) return i;
    return -1;
  }
  int dy() const {
    int d = -1;
    for (const auto& c : cx) d = std::max(d, zdeg(c));
    return d;
  }
};

BZ dehomogenize(const HomPoly& A) {
  BZ r;
  r.cx.assign(A.deg + 1, {});
  for (int i = 0; i <= A.deg; ++i) {
    r.cx[i].assign(A.deg - i + 1, 0);
    for (int j = 0; i + j <= A.deg; ++j) r.cx[i][j] = A.at(i, j);
  }
  return r;
}

HomPoly homogenize(const BZ& B, int target_deg) {
  HomPoly R(target_deg);
  for (int i = 0; i < int(B.cx.size()); ++i)
    for (int j = 0; j < int(B.cx[i].size()); ++j)
      if (B.cx[i][j] != 0) R.at(i, j) = B.cx[i][j];
  return R;
}

}  // namespace

HomPoly poly_gcd(const HomPoly& A0, const HomPoly& B0) {
  if (A0.is_zero()) return B0;
  if (B0.is_zero()) return A0;
  int vx = std::min(A0.x_valuation(), B0.x_valuation());
  int vy = std::min(A0.y_valuation(), B0.y_valuation());
  int vz = std::min(A0.z_valuation(), B0.z_valuation());
  HomPoly A = poly_shift(A0, vx, vy, vz);
  HomPoly B = poly_shift(B0, vx, vy, vz);

  BZ bA = dehomogenize(A), bB = dehomogenize(B);
  int dxA = bA.dx(), dxB = bB.dx();
  HomPoly mono(vx + vy + vz);
  mono.at(vx, vy) = 1;
  if (dxA < 0 || dxB < 0) return mono;

  // content in y (gcd of the coefficient polys) and primitive parts
  ZP cA = bA.cx[0], cB = bB.cx[0];
  for (int i = 1; i <= dxA; ++i) cA = zp_gcd(cA, bA.cx[i]);
  for (int i = 1; i <= dxB; ++i) cB = zp_gcd(cB, bB.cx[i]);
  ZP cont_g = zp_gcd(cA, cB);
  if (zdeg(cA) > 0 || (zdeg(cA) == 0 && cA[0] != 1))
    for (int i = 0; i <= dxA; ++i) {
      ZP q;
      if (zdiv(cA, bA.cx[i], &q)) bA.cx[i] = q;
    }
  if (zdeg(cB) > 0 || (zdeg(cB) == 0 && cB[0] != 1))
    for (int i = 0; i <= dxB; ++i) {
      ZP q;
      if (zdiv(cB, bB.cx[i], &q)) bB.cx[i] = q;
    }

  ZP gammaZ = zp_gcd(bA.cx[dxA], bB.cx[dxB]);
  int dgam = zdeg(gammaZ);
  int dy_bound = std::min(bA.dy(), bB.dy()) + std::max(0, dgam);

  // candidate primitive bivariate gcd via CRT over primes
  std::vector<ZP> cand;  // per x-degree, integer coeffs in y
  mpz_class modulus = 1;
  int best_dgx = -1;  // x-degree of the candidate collected so far
  HomPoly result_pp(0);
  result_pp.at(0, 0) = 1;
  bool coprime_pp = false;

  for (u64 p : kPrimes) {
    auto redu = [&](const BZ& z) {
      std::vector<UP> r(z.cx.size());
      for (size_t i = 0; i < z.cx.size(); ++i) {
        r[i].assign(z.cx[i].size(), 0);
        for (size_t j = 0; j < z.cx[i].size(); ++j) r[i][j] = mpz_mod_u64(z.cx[i][j], p);
      }
      return r;
    };
    std::vector<UP> mA = redu(bA), mB = redu(bB);
    UP gam(dgam + 1);
    for (int i = 0; i <= dgam; ++i) gam[i] = mpz_mod_u64(gammaZ[i], p);

    int npts = dy_bound + 2;
    std::vector<u64> xs;
    std::vector<UP> gs;  // univariate-in-x gcd images, scaled to gamma(e)
    int dgx = -1;
    std::mt19937_64 rng(0xfab0 + p % 1000);
    int guard = 0;
    while (int(xs.size()) < npts && guard++ < npts * 20 + 64) {
      u64 e = rng() % p;
      bool dup = false;
      for (u64 v : xs)
        if (v == e) dup = true;
      if (dup) continue;
      UP ua(dxA + 1), ub(dxB + 1);
      for (int i = 0; i <= dxA; ++i) ua[i] = ueval(mA[i], e, p);
      for (int i = 0; i <= dxB; ++i) ub[i] = ueval(mB[i], e, p);
      if (udeg(ua) != dxA || udeg(ub) != dxB) continue;  // bad evaluation point
      UP g = ugcd_monic(ua, ub, p);
      int dg = udeg(g);
      if (dg == 0) {
        dgx = 0;
        break;
      }
      if (dgx >= 0 && dg > dgx) continue;  // unlucky point
      if (dgx < 0 || dg < dgx) {
        dgx = dg;
        xs.clear();
        gs.clear();
      }
      u64 scale = ueval(gam, e, p);
      if (scale == 0) continue;
      for (auto& c : g) c = mulm(c, scale, p);
      xs.push_back(e);
      gs.push_back(g);
    }
    if (dgx == 0) {
      coprime_pp = true;  // primitive parts are coprime
      break;
    }
    if (dgx < 0 || int(xs.size()) < npts) continue;  // give up on this prime
    if (best_dgx >= 0 && dgx > best_dgx) continue;   // unlucky prime
    if (best_dgx < 0 || dgx < best_dgx) {
      best_dgx = dgx;
      cand.assign(dgx + 1, ZP(npts, 0));
      modulus = 1;
    }

    // Lagrange interpolation per x-degree coefficient
    std::vector<UP> gcoef(dgx + 1, UP(npts, 0));
    {
      // precompute Lagrange basis polynomials
      std::vector<UP> basis(npts);
      for (int k = 0; k < npts; ++k) {
        UP nb = {1};
        u64 den = 1;
        for (int m = 0; m < npts; ++m) {
          if (m == k) continue;
          UP nx(nb.size() + 1, 0);
          for (size_t t = 0; t < nb.size(); ++t) {
            nx[t + 1] = addm(nx[t + 1], nb[t], p);
            nx[t] = subm(nx[t], mulm(nb[t], xs[m], p), p);
          }
          nb = nx;
          den = mulm(den, subm(xs[k], xs[m], p), p);
        }
        u64 id = invm(den, p);
        for (auto& c : nb) c = mulm(c, id, p);
        basis[k] = nb;
      }
      for (int i = 0; i <= dgx; ++i) {
        UP acc(npts, 0);
        for (int k = 0; k < npts; ++k) {
          u64 v = gs[k][i];
          if (!v) continue;
          for (size_t t = 0; t < basis[k].size(); ++t)
            acc[t] = addm(acc[t], mulm(basis[k][t], v, p), p);
        }
        gcoef[i] = acc;
      }
    }

    // CRT with previous primes
    mpz_class pz(mpz_class(p).get_str());
    bool stable = modulus != 1;
    for (int i = 0; i <= dgx; ++i) {
      cand[i].resize(npts, 0);
      for (int t = 0; t < npts; ++t) {
        mpz_class target(mpz_class(gcoef[i][t]).get_str());
        mpz_class cur = cand[i][t];
        mpz_class diff = (target - cur) % pz;
        if (diff < 0) diff += pz;
        u64 inv = invm(mpz_mod_u64(modulus, p), p);
        mpz_class k = (diff * mpz_class(mpz_class(inv).get_str())) % pz;
        mpz_class nv = cur + k * modulus;
        mpz_class half = modulus * pz / 2;
        if (nv > half) nv -= modulus * pz;
        if (nv < -half) nv += modulus * pz;
        if (nv != cur) stable = false;
        cand[i][t] = nv;
      }
    }
    modulus *= pz;
    if (!stable) continue;

    // primitive part over Z and verification; interpolation leaves a spurious
    // gamma/lc factor in y that the y-content strips
    BZ G;
    G.cx = cand;
    ZP ycont = G.cx[0];
    for (size_t i = 1; i < G.cx.size(); ++i) ycont = zp_gcd(ycont, G.cx[i]);
    if (zdeg(ycont) > 0)
      for (auto& col : G.cx) {
        ZP q;
        if (!zdiv(ycont, col, &q)) {
          q = col;  // candidate corrupt; verification below will reject it
        }
        col = q;
      }
    mpz_class c = 0;
    for (const auto& col : G.cx)
      for (const auto& v : col) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), v.get_mpz_t());
    if (c == 0) continue;
    for (auto& col : G.cx)
      for (auto& v : col)
        if (v != 0) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
    int tdeg = 0;
    for (int i = 0; i < int(G.cx.size()); ++i)
      for (int j = 0; j < int(G.cx[i].size()); ++j)
        if (G.cx[i][j] != 0) tdeg = std::max(tdeg, i + j);
    HomPoly Gh = homogenize(G, tdeg);
    if (poly_divexact(A, Gh) && poly_divexact(B, Gh)) {
      result_pp = Gh;
      break;
    }
  }
  (void)coprime_pp;

  // combine: monomial part * content-in-x part * primitive bivariate part
  int dcont = std::max(0, zdeg(cont_g));
  HomPoly Ch(dcont);
  if (zdeg(cont_g) >= 0)
    for (int j = 0; j <= zdeg(cont_g); ++j) Ch.at(0, j) = cont_g[j];
  else
    Ch.at(0, 0) = 1;
  mpz_class cc = poly_content(Ch);
  if (cc != 0) poly_divexact_scalar(Ch, cc);

  HomPoly g = poly_mul(mono, poly_mul(Ch, result_pp));
  // final sanity: only return divisors
  if (!poly_divexact(A0, g) || !poly_divexact(B0, g)) return mono;
  return g;
}

HomTriple HomTriple::identity() {
  HomTriple t;
  t.deg = 1;
  for (int k = 0; k < 3; ++k) t.c[k] = HomPoly(1);
  t.c[0].at(1, 0) = 1;
  t.c[1].at(0, 1) = 1;
  t.c[2].at(0, 0) = 1;
  return t;
}

}  // namespace fab
