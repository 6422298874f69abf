#include "fab/trace.hpp"

#include <algorithm>
#include <cmath>

namespace fab {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;
constexpr long double kFinite = 1e6L;  // beyond this a coordinate counts as infinite

struct EvalPt {
  bool valid = false;
  long double x = 0, y = 0;
};

struct DiskXY {
  long double u = 0, v = 0;
};

DiskXY to_disk(long double x, long double y) {
  long double r = std::hypot(x, y);
  if (!std::isfinite(r)) r = 1e300L;
  long double rho = (2.0L / kPi) * std::atan(r);
  if (r == 0) return {0, 0};
  return {rho * x / r, rho * y / r};
}

long double disk_dist(const EvalPt& p, const EvalPt& q) {
  if (!p.valid || !q.valid) return 1e9L;
  DiskXY a = to_disk(p.x, p.y), b = to_disk(q.x, q.y);
  return std::hypot(a.u - b.u, a.v - b.v);
}

struct Tracer {
  const std::function<P2d(long double)>& curve;
  int n;
  long double a, b;
  const TraceConfig& cfg;
  TracedCurve out;

  EvalPt eval(long double s) const {
    P2d p = curve(s);
    EvalPt e;
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return e;
    for (int k = 0; k < std::abs(n); ++k) {
      bool ok = n > 0 ? f_fwd(p, a, b) : f_bwd(p, a, b);
      if (!ok || !std::isfinite(p.x) || !std::isfinite(p.y)) return e;
    }
    e.valid = true;
    e.x = p.x;
    e.y = p.y;
    return e;
  }

  void emit(long double s, const ChartPoint& v) {
    if (!v.is_affine() && !out.arc.vertices.empty() &&
        !out.arc.vertices.back().is_affine())
      return;  // collapse duplicate chart vertices from double-triggered events
    out.arc.vertices.push_back(v);
    out.params.push_back(s);
    if (!v.is_affine()) ++out.stats.chart_switches;
  }

  // classify the limit of the image as s -> s0 from the side of s1
  std::optional<ChartPoint> classify_limit(long double s0, long double s1) const {
    long double gap = std::fabs(s1 - s0);
    long double dir = s1 > s0 ? 1.0L : -1.0L;
    auto probe = [&](long double h) -> std::optional<ChartPoint> {
      long double d = dir * h;
      if (s0 + d == s0 || s0 + d / 16.0L == s0) return std::nullopt;
      EvalPt A = eval(s0 + d), B = eval(s0 + d / 16.0L);
      if (!A.valid || !B.valid) return std::nullopt;
      return classify_pair(A, B);
    };
    for (long double h = gap * 0.25L; h > gap * 1e-14L && h > 1e-18L; h /= 16.0L)
      if (auto r = probe(h)) return r;
    // near a pole the bisection bracket can shrink to rounding scale, where the
    // inner probe lands on s0 itself; back off to wider (still tiny) offsets
    for (long double h = gap; h < gap * 1e5L; h *= 4.0L)
      if (auto r = probe(h)) return r;
    return std::nullopt;
  }

  std::optional<ChartPoint> classify_pair(const EvalPt& A, const EvalPt& B) const {
    auto converged = [](long double ta, long double tb) {
      return std::fabs(tb - ta) <= 1e-3L * (1 + std::fabs(tb));
    };
    long double ax = std::fabs(B.x), ay = std::fabs(B.y);
    if (ax <= kFinite && ay <= kFinite) {
      if (ax <= 1e-4L * (1 + ay) && converged(A.y, B.y))
        return ChartPoint(Chart::V1, Scalar::fp(B.y));
      if (converged(A.x, B.x) && converged(A.y, B.y))
        return ChartPoint::affine_ld(B.x, B.y);
      return std::nullopt;
    }
    if (ax <= kFinite) {  // y -> infinity over a finite x
      long double t3a = (A.x - 1) * (A.y - 1), t3b = (B.x - 1) * (B.y - 1);
      if (std::fabs(B.x - 1) < 1e-2L && converged(t3a, t3b))
        return ChartPoint(Chart::V3, Scalar::fp(t3b));
      if (converged(A.x, B.x)) return ChartPoint(Chart::V2, Scalar::fp(B.x));
      return std::nullopt;
    }
    if (ay <= kFinite) {  // x -> infinity, y finite
      if (converged(A.y, B.y)) return ChartPoint(Chart::V4, Scalar::fp(B.y));
      return std::nullopt;
    }
    long double t5a = A.y - b * A.x, t5b = B.y - b * B.x;
    if (std::fabs(t5b) <= kFinite && converged(t5a, t5b))
      return ChartPoint(Chart::V5, Scalar::fp(t5b));
    long double t4a = A.y, t4b = B.y;
    if (std::fabs(t4b) <= kFinite && converged(t4a, t4b))
      return ChartPoint(Chart::V4, Scalar::fp(t4b));
    if (converged(A.y / A.x, B.y / B.x))
      return ChartPoint(Chart::V0, Scalar::fp(B.y / B.x));
    return std::nullopt;
  }

  // locate and emit the V-crossing between valid points p1, p2 (coordinate
  // `use_y` flips sign across the event)
  void handle_event(long double s1, const EvalPt& p1, long double s2, const EvalPt& p2,
                    bool use_y) {
    long double lo = s1, hi = s2;
    auto val = [&](const EvalPt& e) { return use_y ? e.y : e.x; };
    long double sl = val(p1) > 0 ? 1.0L : -1.0L;
    long double peak = 0;
    for (int k = 0; k < 80 && hi - lo > 0; ++k) {
      long double mid = 0.5L * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      EvalPt m = eval(mid);
      if (!m.valid) break;
      peak = std::max(peak, std::max(std::fabs(m.x), std::fabs(m.y)));
      if ((val(m) > 0 ? 1.0L : -1.0L) == sl)
        lo = mid;
      else
        hi = mid;
    }
    long double star = 0.5L * (lo + hi);
    if (peak <= kFinite) {
      // finite crossing: x = 0 is the blown-up line V1; y = 0 is only a
      // region boundary and needs no vertex
      if (!use_y) {
        EvalPt m = eval(lo);
        if (m.valid) emit(star, ChartPoint(Chart::V1, Scalar::fp(m.y)));
      }
      return;
    }
    auto cp = classify_limit(star, s1);
    if (cp) emit(star, *cp);
  }

  void run(long double s_lo, long double s_hi) {
    long double span = s_hi - s_lo;
    long double pad = span * 1e-12L;
    // refined sample list
    std::vector<std::pair<long double, EvalPt>> pts;
    int N = cfg.initial_samples;
    for (int i = 0; i <= N; ++i) {
      long double s = s_lo + pad + (span - 2 * pad) * i / N;
      pts.push_back({s, eval(s)});
    }
    // adaptive bisection, depth-first over adjacent pairs
    std::vector<std::pair<long double, EvalPt>> final_pts;
    final_pts.push_back(pts[0]);
    struct Seg {
      std::pair<long double, EvalPt> a, b;
      int depth;
    };
    std::vector<Seg> stack;
    for (size_t i = 0; i + 1 < pts.size(); ++i) stack.push_back({pts[i], pts[i + 1], 0});
    std::reverse(stack.begin(), stack.end());
    size_t emitted = 1;
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      bool need = false;
      if (s.a.second.valid != s.b.second.valid)
        need = true;
      else if (s.a.second.valid && disk_dist(s.a.second, s.b.second) > cfg.eps_spacing)
        need = true;
      if (need && s.depth < cfg.max_depth && emitted + stack.size() < cfg.vertex_budget &&
          s.b.first - s.a.first > 1e-17L * (1 + std::fabs(s.a.first))) {
        long double mid = 0.5L * (s.a.first + s.b.first);
        auto m = std::make_pair(mid, eval(mid));
        stack.push_back({m, s.b, s.depth + 1});
        stack.push_back({s.a, m, s.depth + 1});
        continue;
      }
      if (need && s.depth >= cfg.max_depth && s.a.second.valid && s.b.second.valid) {
        // unresolvable gap that is not a sign change: likely an even pole; keep it
      }
      if (need && emitted + stack.size() >= cfg.vertex_budget)
        out.stats.budget_exceeded = true;
      if (!s.b.second.valid && !s.a.second.valid)
        out.stats.indet_params.push_back(s.a.first);
      final_pts.push_back(s.b);
      ++emitted;
    }

    // leading endpoint limit
    if (auto cp = classify_limit(s_lo, s_lo + span * 0.01L)) emit(s_lo, *cp);
    const EvalPt* prev = nullptr;
    long double prev_s = 0;
    bool in_gap = false;
    long double gap_prev_s = 0, gap_inv_lo = 0, gap_inv_hi = 0;
    for (auto& [s, e] : final_pts) {
      if (!e.valid) {
        if (prev) {
          in_gap = true;
          gap_prev_s = prev_s;
          gap_inv_lo = s;
        }
        gap_inv_hi = s;
        prev = nullptr;
        continue;
      }
      if (!prev && in_gap) {
        // the image passed through a pole or indeterminacy point; record the
        // limit vertex from each side (identical limits collapse in emit)
        if (auto cp = classify_limit(gap_inv_lo, gap_prev_s)) emit(gap_inv_lo, *cp);
        if (auto cp = classify_limit(gap_inv_hi, s)) emit(gap_inv_hi, *cp);
        in_gap = false;
      }
      if (prev) {
        bool fx = (prev->x > 0) != (e.x > 0);
        bool fy = (prev->y > 0) != (e.y > 0);
        bool big = std::max(std::fabs(prev->x), std::fabs(prev->y)) > kFinite ||
                   std::max(std::fabs(e.x), std::fabs(e.y)) > kFinite;
        if (fx) handle_event(prev_s, *prev, s, e, false);
        // finite y-crossings are region boundaries, not V-crossings
        if (fy && big && !fx) handle_event(prev_s, *prev, s, e, true);
      }
      emit(s, ChartPoint::affine_ld(e.x, e.y));
      prev = &e;
      prev_s = s;
    }
    if (auto cp = classify_limit(s_hi, s_hi - span * 0.01L)) emit(s_hi, *cp);

    out.stats.vertices = out.arc.vertices.size();
    long double mins = 1e30L;
    for (size_t i = 0; i + 1 < final_pts.size(); ++i)
      if (final_pts[i].second.valid && final_pts[i + 1].second.valid)
        mins = std::min(mins, disk_dist(final_pts[i].second, final_pts[i + 1].second));
    out.stats.min_spacing = mins == 1e30L ? 0 : mins;
  }
};

}  // namespace

DiskPoint disk_coords(const ChartPoint& p, const Params& prm) {
  if (p.is_affine()) {
    long double x = p.x.ld(), y = p.y.ld();
    long double r = std::hypot(x, y);
    DiskPoint d;
    d.rho = (2.0L / kPi) * std::atan(r);
    d.theta = r == 0 ? 0 : std::atan2(y, x);
    if (d.theta < 0) d.theta += 2 * kPi;
    return d;
  }
  // points at infinity sit on the unit circle; the direction comes from the chart
  long double t = p.x.ld();
  long double theta = 0;
  switch (p.chart) {
    case Chart::V0: theta = std::atan(t); break;              // direction y = t x
    case Chart::V2:
    case Chart::V3: theta = kPi / 2; break;                   // vertical
    case Chart::V4: theta = 0; break;                         // horizontal
    case Chart::V5: theta = std::atan(prm.b_ld()); break;     // direction y = b x
    case Chart::V1: {                                         // finite line x = 0
      DiskPoint d;
      long double r = std::fabs(t);
      d.rho = (2.0L / kPi) * std::atan(r);
      d.theta = t >= 0 ? kPi / 2 : 3 * kPi / 2;
      return d;
    }
    default: break;
  }
  if (theta < 0) theta += 2 * kPi;
  return {1.0L, theta};
}

TracedCurve trace_curve(const std::function<P2d(long double)>& curve, int n,
                        const Params& prm, const std::string& source_id,
                        long double s_lo, long double s_hi, const TraceConfig& cfg) {
  Tracer tr{curve, n, prm.a_ld(), prm.b_ld(), cfg, {}};
  tr.out.source = source_id;
  tr.out.iterate = n;
  tr.run(s_lo, s_hi);
  return tr.out;
}

std::function<P2d(long double)> horizontal_line(long double t) {
  return [t](long double s) {
    long double x = std::tan(kPi * (s - 0.5L));
    return P2d{x, t};
  };
}

std::function<P2d(long double)> tau_horizontal_line(long double t, const Params& prm) {
  long double a = prm.a_ld(), b = prm.b_ld();
  return [t, a, b](long double s) {
    long double x = std::tan(kPi * (s - 0.5L));
    return P2d{x, b * x + (a + 1) - t};
  };
}

}  // namespace fab
