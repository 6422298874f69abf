#include "fab/map_core.hpp"

#include <cmath>
#include <sstream>

namespace fab {

std::string PointStatus::str() const {
  std::string s;
  auto app = [&s](const char* t) {
    if (!s.empty()) s += "+";
    s += t;
  };
  if (indet_fwd) app("IndeterminateForward");
  if (indet_bwd) app("IndeterminateBackward");
  if (on_c0p) app("OnExceptionalPlus(C0+)");
  if (on_c1p) app("OnExceptionalPlus(C1+)");
  if (on_c0m) app("OnExceptionalMinus(C0-)");
  if (on_c1m) app("OnExceptionalMinus(C1-)");
  if (near_indet) app("NearIndeterminate");
  if (on_v >= 0) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "OnV(%d)", on_v);
    app(buf);
  }
  if (s.empty()) s = "Regular";
  return s;
}

PointStatus classify(const ChartPoint& p, const Params& prm) {
  PointStatus st;
  if (!p.is_affine()) {
    int j = p.v_index();
    st.on_v = j;
    if (j == 4 && p.x == Scalar(1)) st.indet_fwd = true;
    if (j == 5 && p.x == Scalar(prm.a)) st.indet_bwd = true;
    if (j == 1) {
      // V1 is the finite line {x=0}; exceptional incidences live there too.
      Scalar t = p.x;
      if (t.is_zero()) {
        st.indet_fwd = true;
        st.on_c0p = st.on_c1p = true;
      }
      if (t == Scalar(prm.a) + Scalar(1)) {
        st.indet_bwd = true;
        st.on_c0m = st.on_c1m = true;
      }
    }
    return st;
  }
  const Scalar& x = p.x;
  const Scalar& y = p.y;
  Scalar a(prm.a), b(prm.b), one(1);
  if (x.is_zero()) {
    st.on_v = 1;
    if (y.is_zero()) st.indet_fwd = true;
    if (y == a + one) st.indet_bwd = true;
  }
  if (y.is_zero()) st.on_c0p = true;
  if ((x - one) * (y - one) == one) st.on_c1p = true;
  if (y == b * x + a + one) st.on_c0m = true;
  if ((x - one) * (b * x + a - y) == one) st.on_c1m = true;
  if (x.is_zero() && y.is_zero()) st.on_c0p = st.on_c1p = true;
  return st;
}

MapResult sigma(const ChartPoint& p) {
  MapResult r;
  if (!p.is_affine()) return r;
  const Scalar& x = p.x;
  const Scalar& y = p.y;
  if (x.is_zero() && y.is_zero()) {
    r.status.indet_fwd = true;
    return r;
  }
  if (y.is_zero()) {
    r.status.on_c0p = true;
    return r;
  }
  if (x.is_zero()) {
    r.status.on_v = 1;
    return r;
  }
  Scalar one(1);
  r.point = ChartPoint(one - x + x / y, one - y + y / x);
  return r;
}

ChartPoint tau(const ChartPoint& p, const Params& prm) {
  Scalar a(prm.a), b(prm.b), one(1);
  return ChartPoint(p.x, b * p.x + a + one - p.y);
}

static MapResult affine_step(const ChartPoint& p, const Params& prm, Direction dir) {
  MapResult r;
  r.status = classify(p, prm);
  const Scalar& x = p.x;
  const Scalar& y = p.y;
  Scalar a(prm.a), b(prm.b), one(1);
  if (dir == Direction::Forward) {
    if (r.status.indet_fwd) return r;
    if (x.is_zero()) {  // on V1: t1 -> t3 = t1 - 1
      r.point = ChartPoint(Chart::V3, y - one);
      return r;
    }
    if (y.is_zero()) {  // C0+ collapses to t5 = a on V5
      r.point = ChartPoint(Chart::V5, a);
      return r;
    }
    Scalar s1 = one - x + x / y;
    Scalar s2 = one - y + y / x;
    r.point = ChartPoint(s1, b * s1 + a + one - s2);
    return r;
  }
  if (r.status.indet_bwd) return r;
  if (x.is_zero()) {  // f(V3 at t3 = y - a) lands here
    r.point = ChartPoint(Chart::V3, y - a);
    return r;
  }
  Scalar ty = b * x + a + one - y;
  if (ty.is_zero()) {  // on C0-: collapses to t4 = 1 on V4
    r.point = ChartPoint(Chart::V4, one);
    return r;
  }
  Scalar s1 = one - x + x / ty;
  Scalar s2 = one - ty + ty / x;
  r.point = ChartPoint(s1, s2);
  return r;
}

MapResult apply_f(const ChartPoint& p, const Params& prm, Direction dir) {
  Scalar a(prm.a), b(prm.b), one(1);
  bool fwd = (dir == Direction::Forward);
  MapResult r;
  switch (p.chart) {
    case Chart::Affine:
      return affine_step(p, prm, dir);
    case Chart::V0:
      r.status = classify(p, prm);
      r.point = ChartPoint(Chart::V0, b - p.x);
      return r;
    case Chart::V1:
      r.status = classify(p, prm);
      if (fwd) {
        if (r.status.indet_fwd) return r;
        r.point = ChartPoint(Chart::V3, p.x - one);
      } else {
        if (r.status.indet_bwd) return r;
        r.point = ChartPoint(Chart::V3, p.x - a);
      }
      return r;
    case Chart::V2:
      r.status = classify(p, prm);
      r.point = ChartPoint(Chart::V2, one - p.x);
      return r;
    case Chart::V3:
      r.status = classify(p, prm);
      r.point = ChartPoint(Chart::V1, fwd ? p.x + a : p.x + one);
      return r;
    case Chart::V4:
      r.status = classify(p, prm);
      if (fwd) {
        if (r.status.indet_fwd) return r;
        r.point = ChartPoint(Chart::V5, p.x + a);
      } else {
        r.point = ChartPoint(Chart::V5, p.x - a - one);
      }
      return r;
    case Chart::V5:
      r.status = classify(p, prm);
      if (fwd) {
        r.point = ChartPoint(Chart::V4, p.x + a + one);
      } else {
        if (r.status.indet_bwd) return r;
        r.point = ChartPoint(Chart::V4, p.x - a);
      }
      return r;
  }
  return r;
}

Scalar jacobian_det(const ChartPoint& p, const Params& prm) {
  const Scalar& x = p.x;
  const Scalar& y = p.y;
  Scalar b(prm.b), one(1);
  Scalar s1x = -one + one / y;
  Scalar s1y = -(x / (y * y));
  Scalar s2x = -(y / (x * x));
  Scalar s2y = -one + one / x;
  // Df = [[s1x, s1y], [b*s1x - s2x, b*s1y - s2y]]
  return s1x * (b * s1y - s2y) - s1y * (b * s1x - s2x);
}

static bool near_indet(const ChartPoint& p, const Params& prm, Direction dir,
                       long double eps) {
  if (p.exact()) return false;
  long double a = prm.a_ld();
  if (p.is_affine()) {
    long double x = p.x.ld(), y = p.y.ld();
    if (dir == Direction::Forward)
      return std::hypot((double)x, (double)y) < (double)eps;
    return std::hypot((double)x, (double)(y - (a + 1.0L))) < (double)eps;
  }
  if (dir == Direction::Forward && p.chart == Chart::V4)
    return std::fabs((double)(p.x.ld() - 1.0L)) < (double)eps;
  if (dir == Direction::Backward && p.chart == Chart::V5)
    return std::fabs((double)(p.x.ld() - a)) < (double)eps;
  return false;
}

Orbit orbit(const ChartPoint& p0, const Params& prm, int n_back, int n_fwd,
            const OrbitConfig& cfg) {
  Orbit o;
  o.entries.push_back({0, p0, classify(p0, prm)});
  auto walk = [&](Direction dir, int n, std::optional<int>& degrade_log) {
    ChartPoint p = p0;
    int step = (dir == Direction::Forward) ? 1 : -1;
    for (int k = 1; k <= n; ++k) {
      if (p.exact()) {
        size_t bits = p.x.bits();
        if (p.is_affine() && p.y.bits() > bits) bits = p.y.bits();
        if (bits > cfg.bit_cap) {
          p = p.degraded();
          degrade_log = step * k;
        }
      }
      if (near_indet(p, prm, dir, cfg.near_indet_radius)) {
        PointStatus st = classify(p, prm);
        st.near_indet = true;
        o.entries.push_back({step * k, p, st});
        return;
      }
      MapResult r = apply_f(p, prm, dir);
      if (!r.point) {
        return;  // indeterminacy already recorded at the previous index
      }
      p = *r.point;
      o.entries.push_back({step * k, p, classify(p, prm)});
      if ((dir == Direction::Forward && o.entries.back().status.indet_fwd) ||
          (dir == Direction::Backward && o.entries.back().status.indet_bwd))
        return;
    }
  };
  walk(Direction::Forward, n_fwd, o.degrade_fwd);
  walk(Direction::Backward, n_back, o.degrade_bwd);
  std::sort(o.entries.begin(), o.entries.end(),
            [](const OrbitEntry& a, const OrbitEntry& b) { return a.index < b.index; });
  return o;
}

std::string orbit_csv(const Orbit& o) {
  std::ostringstream out;
  out << "index,chart,coord1,coord2,status\n";
  for (const auto& e : o.entries) {
    out << e.index << "," << chart_name(e.point.chart) << ",";
    auto emit = [&out](const Scalar& s) {
      if (s.exact())
        out << s.rat().get_str();
      else {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.15Le", s.ld());
        out << buf;
      }
    };
    emit(e.point.x);
    out << ",";
    if (e.point.is_affine())
      emit(e.point.y);
    out << "," << e.status.str() << "\n";
  }
  return out.str();
}

}  // namespace fab
