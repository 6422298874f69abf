#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fab/params.hpp"
#include "fab/rat.hpp"

namespace fab {

enum class Chart { Affine, V0, V1, V2, V3, V4, V5 };

inline const char* chart_name(Chart c) {
  switch (c) {
    case Chart::Affine: return "affine";
    case Chart::V0: return "V0";
    case Chart::V1: return "V1";
    case Chart::V2: return "V2";
    case Chart::V3: return "V3";
    case Chart::V4: return "V4";
    case Chart::V5: return "V5";
  }
  return "?";
}

// Affine points carry (x, y); V_j points carry t_j in `x`.
struct ChartPoint {
  Chart chart = Chart::Affine;
  Scalar x, y;

  ChartPoint() = default;
  ChartPoint(const Scalar& x_, const Scalar& y_) : chart(Chart::Affine), x(x_), y(y_) {}
  ChartPoint(Chart c, const Scalar& t) : chart(c), x(t) {}
  static ChartPoint affine(const Rat& x, const Rat& y) { return ChartPoint(Scalar(x), Scalar(y)); }
  static ChartPoint affine_ld(long double x, long double y) {
    return ChartPoint(Scalar::fp(x), Scalar::fp(y));
  }
  static ChartPoint on_v(int j, const Scalar& t) {
    return ChartPoint(static_cast<Chart>(static_cast<int>(Chart::V0) + j), t);
  }
  bool is_affine() const { return chart == Chart::Affine; }
  int v_index() const { return is_affine() ? -1 : static_cast<int>(chart) - static_cast<int>(Chart::V0); }
  bool exact() const { return x.exact() && (!is_affine() || y.exact()); }
  ChartPoint degraded() const {
    ChartPoint p = *this;
    p.x = p.x.degraded();
    p.y = p.y.degraded();
    return p;
  }
};

// Composite status: a point may lie on several distinguished curves at once.
struct PointStatus {
  bool indet_fwd = false;
  bool indet_bwd = false;
  bool on_c0p = false, on_c1p = false;
  bool on_c0m = false, on_c1m = false;
  bool near_indet = false;
  int on_v = -1;  // 0..5 when on a V_j curve, else -1

  bool regular() const {
    return !indet_fwd && !indet_bwd && !on_c0p && !on_c1p && !on_c0m && !on_c1m &&
           !near_indet && on_v < 0;
  }
  bool any_indet() const { return indet_fwd || indet_bwd; }
  std::string str() const;
};

enum class Direction { Forward, Backward };

struct MapResult {
  std::optional<ChartPoint> point;  // empty only at indeterminacy
  PointStatus status;               // status of the *source* point
};

PointStatus classify(const ChartPoint& p, const Params& prm);

// sigma(x,y) = (1-x+x/y, 1-y+y/x); undefined on the axes.
MapResult sigma(const ChartPoint& p);
// tau(x,y) = (x, bx+a+1-y); total on affine points.
ChartPoint tau(const ChartPoint& p, const Params& prm);

// f = tau.sigma (forward), f^{-1} = sigma.tau (backward), on every chart,
// with exceptional curves collapsed to their image points.
MapResult apply_f(const ChartPoint& p, const Params& prm, Direction dir);

// det Df at an affine point off the axes, from the four partial derivatives.
Scalar jacobian_det(const ChartPoint& p, const Params& prm);

struct OrbitEntry {
  int index;
  ChartPoint point;
  PointStatus status;
};

struct Orbit {
  std::vector<OrbitEntry> entries;  // sorted by index, includes index 0
  std::optional<int> degrade_fwd;   // first forward index computed in float mode
  std::optional<int> degrade_bwd;
};

struct OrbitConfig {
  size_t bit_cap = 4096;
  long double near_indet_radius = 1e-12L;
};

Orbit orbit(const ChartPoint& p, const Params& prm, int n_back, int n_fwd,
            const OrbitConfig& cfg = {});

std::string orbit_csv(const Orbit& o);

// Fast float-only affine step used by the curve tracers. Returns false when the
// point sits on an axis / exceptional line where the affine image is undefined.
struct P2d {
  long double x = 0, y = 0;
};

inline bool f_fwd(P2d& p, long double a, long double b) {
  if (p.x == 0.0L || p.y == 0.0L) return false;
  long double s1 = 1.0L - p.x + p.x / p.y;
  long double s2 = 1.0L - p.y + p.y / p.x;
  p.x = s1;
  p.y = b * s1 + (a + 1.0L) - s2;
  return true;
}

inline bool f_bwd(P2d& p, long double a, long double b) {
  long double ty = b * p.x + a + 1.0L - p.y;
  if (p.x == 0.0L || ty == 0.0L) return false;
  long double s1 = 1.0L - p.x + p.x / ty;
  long double s2 = 1.0L - ty + ty / p.x;
  p.x = s1;
  p.y = s2;
  return true;
}

}  // namespace fab
