#include "fab/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>

#include "fab/map_core.hpp"
#include "fab/picard.hpp"

namespace fab {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

const RegionClassifier& classifier_for(const Params& prm) {
  static std::map<std::pair<std::string, std::string>, std::unique_ptr<RegionClassifier>>
      cache;
  auto key = std::make_pair(prm.a.get_str(), prm.b.get_str());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<RegionClassifier>(prm)).first;
  return *it->second;
}

std::function<std::optional<P2d>(long double)> make_eval(
    const std::function<P2d(long double)>& source, int n, const Params& prm) {
  long double a = prm.a_ld(), b = prm.b_ld();
  return [source, n, a, b](long double s) -> std::optional<P2d> {
    P2d p = source(s);
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return std::nullopt;
    for (int k = 0; k < std::abs(n); ++k) {
      bool ok = n > 0 ? f_fwd(p, a, b) : f_bwd(p, a, b);
      if (!ok || !std::isfinite(p.x) || !std::isfinite(p.y)) return std::nullopt;
    }
    return p;
  };
}

struct Seg {
  P2d a, b;
  P2d ta, tb;  // arctan-compactified endpoints, used for the pruning grid
  size_t v;    // index of the first vertex in the trace
};

// affine, finite, bounded segments of a traced polyline
std::vector<Seg> plane_segments(const TracedCurve& t, long double clip) {
  std::vector<Seg> out;
  const auto& vs = t.arc.vertices;
  for (size_t i = 0; i + 1 < vs.size(); ++i) {
    if (!vs[i].is_affine() || !vs[i + 1].is_affine()) continue;
    P2d p{vs[i].x.ld(), vs[i].y.ld()}, q{vs[i + 1].x.ld(), vs[i + 1].y.ld()};
    if (std::fabs(p.x) > clip || std::fabs(p.y) > clip || std::fabs(q.x) > clip ||
        std::fabs(q.y) > clip)
      continue;
    P2d tp{std::atan(p.x), std::atan(p.y)}, tq{std::atan(q.x), std::atan(q.y)};
    out.push_back({p, q, tp, tq, i});
  }
  return out;
}

long double cross2(long double ax, long double ay, long double bx, long double by) {
  return ax * by - ay * bx;
}

}  // namespace

CurveEval iterate_curve(const std::function<P2d(long double)>& source,
                        const std::string& source_id, int n, const Params& prm,
                        const TraceConfig& cfg) {
  CurveEval ce;
  ce.trace = trace_curve(source, n, prm, source_id, 0, 1, cfg);
  ce.eval = make_eval(source, n, prm);
  return ce;
}

IntersectionSet intersect(const CurveEval& A, const CurveEval& B) {
  IntersectionSet out;
  const long double clip = 1e6L;
  auto segA = plane_segments(A.trace, clip);
  auto segB = plane_segments(B.trace, clip);
  if (segA.empty() || segB.empty()) return out;

  // overlap bounding box in the compactified coordinates, where the tracer's
  // disk-metric refinement keeps all segments uniformly short
  auto bbox = [](const std::vector<Seg>& ss) {
    long double x0 = 1e30L, x1 = -1e30L, y0 = 1e30L, y1 = -1e30L;
    for (const auto& s : ss) {
      x0 = std::min({x0, s.ta.x, s.tb.x});
      x1 = std::max({x1, s.ta.x, s.tb.x});
      y0 = std::min({y0, s.ta.y, s.tb.y});
      y1 = std::max({y1, s.ta.y, s.tb.y});
    }
    return std::array<long double, 4>{x0, x1, y0, y1};
  };
  auto bA = bbox(segA), bB = bbox(segB);
  long double x0 = std::max(bA[0], bB[0]), x1 = std::min(bA[1], bB[1]);
  long double y0 = std::max(bA[2], bB[2]), y1 = std::min(bA[3], bB[3]);
  if (x0 > x1 || y0 > y1) return out;
  long double pad = 1e-9L * (1 + std::max(x1 - x0, y1 - y0));
  x0 -= pad, y0 -= pad, x1 += pad, y1 += pad;

  // uniform grid over the overlap, B segments bucketed
  int G = std::clamp(int(std::sqrt(double(segB.size()))) + 1, 8, 400);
  long double hx = (x1 - x0) / G, hy = (y1 - y0) / G;
  if (hx <= 0) hx = 1;
  if (hy <= 0) hy = 1;
  auto cell_range = [&](const Seg& s, int& i0, int& i1, int& j0, int& j1) {
    long double sx0 = std::min(s.ta.x, s.tb.x), sx1 = std::max(s.ta.x, s.tb.x);
    long double sy0 = std::min(s.ta.y, s.tb.y), sy1 = std::max(s.ta.y, s.tb.y);
    if (sx1 < x0 || sx0 > x1 || sy1 < y0 || sy0 > y1) return false;
    i0 = std::clamp(int((sx0 - x0) / hx), 0, G - 1);
    i1 = std::clamp(int((sx1 - x0) / hx), 0, G - 1);
    j0 = std::clamp(int((sy0 - y0) / hy), 0, G - 1);
    j1 = std::clamp(int((sy1 - y0) / hy), 0, G - 1);
    return true;
  };
  std::vector<std::vector<int>> grid(size_t(G) * G);
  for (int bi = 0; bi < int(segB.size()); ++bi) {
    int i0, i1, j0, j1;
    if (!cell_range(segB[bi], i0, i1, j0, j1)) continue;
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) grid[size_t(j) * G + i].push_back(bi);
  }

  struct Raw {
    P2d p;
    long double sA, sB, residual;
    bool transversal;
  };
  std::vector<Raw> raws;
  std::vector<int> stamp(segB.size(), -1);

  long double wA = A.trace.params.empty()
                       ? 1
                       : A.trace.params.back() - A.trace.params.front();
  long double wB = B.trace.params.empty()
                       ? 1
                       : B.trace.params.back() - B.trace.params.front();
  long double hA = std::max(std::fabs(wA), 1e-6L) * 1e-9L;
  long double hB = std::max(std::fabs(wB), 1e-6L) * 1e-9L;

  // Composed maps amplify the 64-bit rounding noise by their expansion factor,
  // so deep iterates cannot reach the 1e-13 target; accept a stalled iteration
  // at its noise floor instead, provided it is far below the strand spacing.
  auto newton = [&](long double sA, long double sB, Raw& r) {
    long double bestA = sA, bestB = sB, best_res = 1e30L, best_scale = 1;
    int stall = 0;
    for (int it = 0; it < 48 && stall < 4; ++it) {
      auto pa = A.eval(sA), pb = B.eval(sB);
      if (!pa || !pb) break;
      long double gx = pa->x - pb->x, gy = pa->y - pb->y;
      long double res = std::fabs(gx) + std::fabs(gy);
      long double scale = 1 + std::fabs(pa->x) + std::fabs(pa->y);
      if (res < best_res) {
        best_res = res;
        bestA = sA;
        bestB = sB;
        best_scale = scale;
        stall = 0;
      } else {
        ++stall;
      }
      if (res < 1e-13L * scale) break;
      auto pa2 = A.eval(sA + hA), pa1 = A.eval(sA - hA);
      auto pb2 = B.eval(sB + hB), pb1 = B.eval(sB - hB);
      if (!pa1 || !pa2 || !pb1 || !pb2) break;
      long double j11 = (pa2->x - pa1->x) / (2 * hA), j12 = -(pb2->x - pb1->x) / (2 * hB);
      long double j21 = (pa2->y - pa1->y) / (2 * hA), j22 = -(pb2->y - pb1->y) / (2 * hB);
      long double det = j11 * j22 - j12 * j21;
      if (det == 0) break;
      long double dA = (gx * j22 - gy * j12) / det;
      long double dB = (j11 * gy - j21 * gx) / det;
      long double cap = 0.05L * (std::fabs(wA) + std::fabs(wB));
      dA = std::clamp(dA, -cap, cap);
      dB = std::clamp(dB, -cap, cap);
      sA -= dA;
      sB -= dB;
    }
    if (best_res > 1e-6L * best_scale) return false;
    auto pa = A.eval(bestA);
    auto pa2 = A.eval(bestA + hA), pa1 = A.eval(bestA - hA);
    auto pb2 = B.eval(bestB + hB), pb1 = B.eval(bestB - hB);
    if (!pa || !pa1 || !pa2 || !pb1 || !pb2) return false;
    long double tax = pa2->x - pa1->x, tay = pa2->y - pa1->y;
    long double tbx = pb2->x - pb1->x, tby = pb2->y - pb1->y;
    long double na = std::hypot(tax, tay), nb = std::hypot(tbx, tby);
    if (na == 0 || nb == 0) return false;
    long double sine = std::fabs(cross2(tax, tay, tbx, tby)) / (na * nb);
    r = {*pa, bestA, bestB, best_res, sine > 1e-4L};
    return true;
  };

  for (const auto& sa : segA) {
    int i0, i1, j0, j1;
    if (!cell_range(sa, i0, i1, j0, j1)) continue;
    long double d1x = sa.b.x - sa.a.x, d1y = sa.b.y - sa.a.y;
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j)
        for (int bi : grid[size_t(j) * G + i]) {
          if (stamp[bi] == int(sa.v)) continue;
          stamp[bi] = int(sa.v);
          const Seg& sb = segB[bi];
          long double d2x = sb.b.x - sb.a.x, d2y = sb.b.y - sb.a.y;
          long double den = cross2(d1x, d1y, d2x, d2y);
          long double ex = sb.a.x - sa.a.x, ey = sb.a.y - sa.a.y;
          long double u, v;
          if (std::fabs(den) <
              1e-14L * std::hypot(d1x, d1y) * std::hypot(d2x, d2y)) {
            // near parallel: midpoint seed, and only when genuinely touching
            long double mx = sa.a.x + 0.5L * d1x - sb.a.x - 0.5L * d2x;
            long double my = sa.a.y + 0.5L * d1y - sb.a.y - 0.5L * d2y;
            if (std::hypot(mx, my) > std::hypot(d1x, d1y) + std::hypot(d2x, d2y))
              continue;
            u = 0.5L;
            v = 0.5L;
          } else {
            u = cross2(ex, ey, d2x, d2y) / den;
            v = cross2(ex, ey, d1x, d1y) / den;
            if (u < -0.02L || u > 1.02L || v < -0.02L || v > 1.02L) continue;
          }
          long double sA0 = A.trace.params[sa.v] +
                            u * (A.trace.params[sa.v + 1] - A.trace.params[sa.v]);
          long double sB0 = B.trace.params[sb.v] +
                            v * (B.trace.params[sb.v + 1] - B.trace.params[sb.v]);
          Raw r;
          if (!newton(sA0, sB0, r)) continue;
          // keep the root local to its bracketing segment pair
          long double seg_len = std::hypot(d1x, d1y) + std::hypot(d2x, d2y);
          if (std::hypot(r.p.x - (sa.a.x + u * d1x), r.p.y - (sa.a.y + u * d1y)) >
              8 * seg_len + 1e-9L) {
            continue;
          }
          raws.push_back(r);
        }
  }

  // merge points within 1e-8 of each other
  std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
    return a.p.x != b.p.x ? a.p.x < b.p.x : a.p.y < b.p.y;
  });
  std::vector<bool> used(raws.size(), false);
  for (size_t i = 0; i < raws.size(); ++i) {
    if (used[i]) continue;
    IntersectionPoint ip;
    ip.p = raws[i].p;
    ip.sA = raws[i].sA;
    ip.sB = raws[i].sB;
    ip.residual = raws[i].residual;
    ip.transversal = raws[i].transversal;
    for (size_t j = i + 1; j < raws.size(); ++j) {
      if (used[j]) continue;
      if (raws[j].p.x - raws[i].p.x > 1e-8L) break;
      if (std::hypot(raws[j].p.x - raws[i].p.x, raws[j].p.y - raws[i].p.y) <= 1e-8L) {
        used[j] = true;
        ip.merged = true;
        ip.transversal = ip.transversal && raws[j].transversal;
      }
    }
    out.points.push_back(ip);
  }
  return out;
}

CountReport count_vs_formula(int n, const Params& prm, long double s, long double t,
                             const TraceConfig& cfg) {
  CountReport rep;
  rep.n = n;
  rep.formula = mpz_class(count_admissible(2 * n + 1, 3, 3) +
                          count_admissible(2 * n + 1, 4, 3))
                    .get_si();
  rep.extended_formula = mpz_class(count_admissible(2 * n + 1, 2, 3) +
                                   count_admissible(2 * n + 1, 3, 3) +
                                   count_admissible(2 * n + 1, 4, 3))
                             .get_si();
  {
    // exact class pairing on the blown-up surface; tau* swaps V4 and V5
    Mat5 fs = pullback_matrix();
    auto tau_star = [](Vec5 v) {
      std::swap(v[3], v[4]);
      return v;
    };
    Vec5 Acl = kClassC0p, Bcl = tau_star(kClassC0p);
    for (int k = 0; k < n; ++k) Acl = mat5_apply(fs, Acl);
    for (int k = 0; k < n; ++k) Bcl = tau_star(mat5_apply(fs, tau_star(Bcl)));
    rep.picard_count = pair_classes(Acl, Bcl);
  }
  CurveEval A = iterate_curve(horizontal_line(s), "H_s", -n, prm, cfg);
  CurveEval B = iterate_curve(tau_horizontal_line(t, prm), "tau H_t", n, prm, cfg);
  rep.lower_bound_only = A.trace.stats.budget_exceeded || B.trace.stats.budget_exceeded;
  IntersectionSet X = intersect(A, B);
  rep.count = long(X.count());
  for (const auto& ip : X.points) {
    CodeResult c = code_orbit(ChartPoint::affine_ld(ip.p.x, ip.p.y), prm, n);
    if (!c.ok) {
      rep.note = "coding failed at an intersection point: " + c.reason;
      return rep;
    }
    rep.words.push_back(c.word);
  }
  // compare the coded words against the admissible words with w_n = 3 and a
  // prescribed set of start symbols, each expected exactly once
  auto expect_set = [&](std::vector<int> starts) {
    std::vector<std::vector<int>> expect;
    Mat4 F = F_matrix();
    std::vector<int> cur;
    std::function<void()> rec = [&] {
      if (int(cur.size()) == 2 * n + 1) {
        if (cur.back() == 3) expect.push_back(cur);
        return;
      }
      for (int sym = 1; sym <= 4; ++sym) {
        if (cur.empty() &&
            std::find(starts.begin(), starts.end(), sym) == starts.end())
          continue;
        if (!cur.empty() && F[cur.back() - 1][sym - 1] == 0) continue;
        cur.push_back(sym);
        rec();
        cur.pop_back();
      }
    };
    rec();
    std::sort(expect.begin(), expect.end());
    return expect;
  };
  std::vector<std::vector<int>> got;
  for (const auto& w : rep.words) got.push_back(w.symbols);
  std::sort(got.begin(), got.end());
  rep.words_ok = expect_set({3, 4}) == got;
  rep.words_ok_extended = expect_set({2, 3, 4}) == got;
  if (!rep.words_ok && rep.note.empty()) rep.note = "coded word multiset mismatch";
  return rep;
}

std::array<long double, 4> EmpiricalMeasure::depth1() const {
  std::array<long double, 4> freq{};
  for (const auto& a : atoms) {
    int sym = a.word.symbols[a.word.anchor];
    if (sym >= 1 && sym <= 4) freq[sym - 1] += a.weight;
  }
  return freq;
}

EmpiricalMeasure empirical_measure(int n, const std::vector<long double>& s_grid,
                                   const std::vector<long double>& t_grid,
                                   const Params& prm, const TraceConfig& cfg) {
  EmpiricalMeasure em;
  em.n = n;
  std::vector<CurveEval> As, Bs;
  for (long double s : s_grid)
    As.push_back(iterate_curve(horizontal_line(s), "H_s", -n, prm, cfg));
  for (long double t : t_grid)
    Bs.push_back(iterate_curve(tau_horizontal_line(t, prm), "tau H_t", n, prm, cfg));
  for (const auto& A : As)
    for (const auto& B : Bs) {
      IntersectionSet X = intersect(A, B);
      if (X.points.empty()) em.partial = true;
      for (const auto& ip : X.points) {
        CodeResult c = code_orbit(ChartPoint::affine_ld(ip.p.x, ip.p.y), prm, n);
        if (!c.ok) {
          em.partial = true;
          continue;
        }
        em.atoms.push_back({ip.p, 1.0L, c.word});
      }
    }
  if (!em.atoms.empty())
    for (auto& a : em.atoms) a.weight = 1.0L / em.atoms.size();
  return em;
}

const char* verdict_name(BasinVerdict v) {
  switch (v) {
    case BasinVerdict::Stays: return "stays-in-Omega-window";
    case BasinVerdict::EscapesForward: return "escapes-forward";
    case BasinVerdict::EscapesBackward: return "escapes-backward";
    case BasinVerdict::EscapesBoth: return "escapes-both";
    case BasinVerdict::Undecided: return "undecided";
  }
  return "?";
}

BasinVerdict basin_escape(const ChartPoint& p, const Params& prm, int maxiter,
                          long double window) {
  const RegionClassifier& rc = classifier_for(prm);
  if (p.is_affine()) {
    // float iteration drifts off a fixed point along its unstable direction,
    // so periodic points get certified directly
    P2d q{p.x.ld(), p.y.ld()};
    long double scale = 1 + std::fabs(q.x) + std::fabs(q.y);
    if (f_fwd(q, prm.a_ld(), prm.b_ld()) &&
        std::hypot(q.x - p.x.ld(), q.y - p.y.ld()) < 1e-12L * scale)
      return BasinVerdict::Stays;
  }
  bool fwd = false, bwd = false, bounded = true;
  for (int dir = 0; dir < 2; ++dir) {
    ChartPoint q = p.degraded();
    for (int i = 0; i <= maxiter; ++i) {
      if (!q.is_affine()) {
        // on some V_j at infinity: the (1.2) translations carry it out
        (dir == 0 ? fwd : bwd) = true;
        break;
      }
      long double x = q.x.ld(), y = q.y.ld();
      if (std::fabs(x) > window || std::fabs(y) > window) bounded = false;
      RegionLabel lab = rc.classify(q, Side::Plus);
      if (dir == 0 && lab.is_region(5)) {
        fwd = true;  // R5+ is forward invariant under f^2 and phi-descending
        break;
      }
      if (dir == 1 && (lab.is_region(6) || lab.is_region(7))) {
        bwd = true;  // f(R6- u R7-) in R5+, mirrored backwards
        break;
      }
      if (lab.kind == RegionKind::Region && lab.index > 4) bounded = false;
      if (i == maxiter) break;
      MapResult r =
          apply_f(q, prm, dir == 0 ? Direction::Forward : Direction::Backward);
      if (!r.point) {
        bounded = false;
        break;
      }
      q = *r.point;
    }
  }
  if (fwd && bwd) return BasinVerdict::EscapesBoth;
  if (fwd) return BasinVerdict::EscapesForward;
  if (bwd) return BasinVerdict::EscapesBackward;
  return bounded ? BasinVerdict::Stays : BasinVerdict::Undecided;
}

std::vector<FixedPointInfo> find_fixed_points(const Params& prm, long double box) {
  long double a = prm.a_ld(), b = prm.b_ld();
  // y = x/(2x-1) reduces f(p) = p to g(x) = (bx + a)(2x - 1) - 1 = 0
  auto g = [&](long double x) { return (b * x + a) * (2 * x - 1) - 1; };
  auto dg = [&](long double x) { return 4 * b * x + 2 * a - b; };
  std::vector<long double> roots;
  const int N = 400000;
  long double prev = g(-box), px = -box;
  for (int i = 1; i <= N; ++i) {
    long double x = -box + 2 * box * i / N;
    long double gx = g(x);
    if ((prev < 0) != (gx < 0) || gx == 0) {
      long double lo = px, hi = x;
      for (int k = 0; k < 80; ++k) {
        long double m = (lo + hi) / 2;
        if ((g(lo) < 0) != (g(m) < 0)) hi = m;
        else lo = m;
      }
      long double r = (lo + hi) / 2;
      for (int k = 0; k < 40; ++k) {
        long double d = dg(r);
        if (d == 0) break;
        long double nr = r - g(r) / d;
        if (nr == r) break;
        r = nr;
      }
      roots.push_back(r);
    }
    prev = gx;
    px = x;
  }
  std::vector<FixedPointInfo> out;
  for (long double x : roots) {
    if (std::fabs(x) < 1e-9L || std::fabs(2 * x - 1) < 1e-9L) continue;  // excluded loci
    long double y = x / (2 * x - 1);
    if (std::fabs(y) < 1e-9L) continue;
    FixedPointInfo fp;
    fp.p = {x, y};
    P2d q = fp.p;
    if (!f_fwd(q, a, b)) continue;
    fp.residual = std::hypot(q.x - x, q.y - y);
    // Df at (x, y): f1 = 1 - x + x/y, f2 = b f1 + (a+1) - (1 - y + y/x)
    long double j11 = -1 + 1 / y, j12 = -x / (y * y);
    long double j21 = b * j11 + y / (x * x), j22 = b * j12 + 1 - 1 / x;
    long double T = j11 + j22, D = j11 * j22 - j12 * j21;
    long double disc = T * T - 4 * D;
    if (disc >= 0) {
      long double rt = std::sqrt(disc);
      long double l1 = (T + rt) / 2, l2 = (T - rt) / 2;
      if (std::fabs(l1) < std::fabs(l2)) std::swap(l1, l2);
      fp.lam1 = l1;
      fp.lam2 = l2;
      long double m1 = std::fabs(l1), m2 = std::fabs(l2);
      if (m1 > 1 + 1e-9L && m2 < 1 - 1e-9L) fp.type = "saddle";
      else if (m1 < 1) fp.type = "attracting";
      else if (m2 > 1) fp.type = "repelling";
      else fp.type = "indifferent";
      auto eigvec = [&](long double l) -> std::array<long double, 2> {
        long double vx = j12, vy = l - j11;
        if (std::fabs(vx) + std::fabs(vy) < 1e-30L) vx = l - j22, vy = j21;
        long double nn = std::hypot(vx, vy);
        return {vx / nn, vy / nn};
      };
      fp.unstable_dir = eigvec(l1);
      fp.stable_dir = eigvec(l2);
    } else {
      long double im = std::sqrt(-disc) / 2;
      fp.lam1 = {T / 2, im};
      fp.lam2 = {T / 2, -im};
      fp.type = std::fabs(D - 1) < 1e-9L ? "elliptic" : "focus";
    }
    out.push_back(fp);
  }
  return out;
}

std::vector<FixedPointInfo> find_saddle(const Params& prm, long double box) {
  std::vector<FixedPointInfo> out;
  for (auto& fp : find_fixed_points(prm, box))
    if (fp.type == "saddle") out.push_back(fp);
  return out;
}

CurveEval trace_manifold(const FixedPointInfo& saddle, bool unstable, int iterates,
                         const Params& prm, const TraceConfig& cfg) {
  const long double eps = 1e-7L;
  P2d p = saddle.p;
  auto dir = unstable ? saddle.unstable_dir : saddle.stable_dir;
  // a crossing segment through the saddle; its iterates contain all shorter
  // iterates' images, so one trace draws the whole manifold piece
  auto seg = [p, dir, eps](long double s) {
    long double u = (2 * s - 1) * eps;
    return P2d{p.x + u * dir[0], p.y + u * dir[1]};
  };
  // the eigenvector segment is microscopic; pre-iterate it to unit scale so
  // that `iterates` counts from a macroscopic crossing arc (the figure's I)
  long double lam =
      unstable ? std::abs(saddle.lam1) : 1.0L / std::abs(saddle.lam2);
  int n0 = std::max(0, (int)std::ceil(std::log(1 / eps) / std::log(lam)));
  int n = n0 + iterates;
  if (!unstable) n = -n;
  CurveEval ce = iterate_curve(seg, unstable ? "W_u" : "W_s", n, prm, cfg);
  return ce;
}

HomoclinicReport homoclinic_check(const CurveEval& S, const CurveEval& U) {
  HomoclinicReport rep;
  rep.set = intersect(S, U);
  if (rep.set.points.empty()) return rep;
  // arclength (clipped to a bounded window) along U per vertex
  const auto& vs = U.trace.arc.vertices;
  std::vector<long double> cum(vs.size(), 0);
  for (size_t i = 1; i < vs.size(); ++i) {
    cum[i] = cum[i - 1];
    if (!vs[i - 1].is_affine() || !vs[i].is_affine()) continue;
    long double x0 = vs[i - 1].x.ld(), y0 = vs[i - 1].y.ld();
    long double x1 = vs[i].x.ld(), y1 = vs[i].y.ld();
    if (std::max({std::fabs(x0), std::fabs(y0), std::fabs(x1), std::fabs(y1)}) > 32)
      continue;
    cum[i] += std::hypot(x1 - x0, y1 - y0);
  }
  long double total = cum.back();
  long double rho2 = 4.6134703820L;  // rho^2
  std::vector<long double> budgets;
  for (int k = 4; k >= 0; --k) budgets.push_back(total / std::pow(rho2, (long double)k));
  for (long double budget : budgets) {
    long cnt = 0;
    for (const auto& ip : rep.set.points) {
      auto it = std::lower_bound(U.trace.params.begin(), U.trace.params.end(), ip.sB);
      size_t idx = std::min(size_t(it - U.trace.params.begin()), cum.size() - 1);
      if (cum[idx] <= budget) ++cnt;
    }
    rep.nested_counts.push_back(cnt);
  }
  return rep;
}

std::string curve_csv(const TracedCurve& c, const Params& prm) {
  std::string out = "chart,c1,c2,rho,theta\n";
  char buf[256];
  for (const auto& v : c.arc.vertices) {
    DiskPoint d = disk_coords(v, prm);
    long double c1 = v.x.ld(), c2 = v.is_affine() ? v.y.ld() : 0.0L;
    std::snprintf(buf, sizeof buf, "%s,%.15Lg,%.15Lg,%.15Lg,%.15Lg\n",
                  chart_name(v.chart), c1, c2, d.rho, d.theta);
    out += buf;
  }
  return out;
}

std::string curves_svg(const std::vector<const TracedCurve*>& cs, const Params& prm) {
  const int W = 800;
  const long double cx = W / 2.0L, cy = W / 2.0L, R = W / 2.0L - 10;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                W, W, W, W);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<circle cx=\"%.1Lf\" cy=\"%.1Lf\" r=\"%.1Lf\" fill=\"white\" "
                "stroke=\"black\" stroke-width=\"1\"/>\n",
                cx, cy, R);
  out += buf;
  static const char* colors[] = {"#1f4e9c", "#c03020", "#1a7a3c", "#8a30a0", "#c07818"};
  int ci = 0;
  for (const TracedCurve* c : cs) {
    const char* col = colors[ci++ % 5];
    out += "<polyline fill=\"none\" stroke=\"";
    out += col;
    out += "\" stroke-width=\"0.6\" points=\"";
    for (const auto& v : c->arc.vertices) {
      DiskPoint d = disk_coords(v, prm);
      long double px = cx + R * d.rho * std::cos(d.theta);
      long double py = cy - R * d.rho * std::sin(d.theta);
      std::snprintf(buf, sizeof buf, "%.3Lf,%.3Lf ", px, py);
      out += buf;
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fab
