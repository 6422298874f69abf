#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "fab/real_dynamics.hpp"

namespace fab {

struct TraceConfig {
  long double eps_spacing = 1e-3L;  // disk-metric spacing target
  int max_depth = 42;               // bisection depth per initial segment
  size_t vertex_budget = 400000;
  int initial_samples = 64;
};

struct TraceStats {
  size_t vertices = 0;
  long double min_spacing = 0;
  int chart_switches = 0;
  bool budget_exceeded = false;
  std::vector<long double> indet_params;  // source parameters lost to indeterminacy
};

struct TracedCurve {
  std::string source;
  int iterate = 0;
  Arc arc;
  std::vector<long double> params;  // source parameter per vertex
  TraceStats stats;
};

// Compactified-disk coordinates: rho = (2/pi) atan r. Points at infinity land
// on the unit circle with theta from the direction.
struct DiskPoint {
  long double rho = 0, theta = 0;
};
DiskPoint disk_coords(const ChartPoint& p, const Params& prm);

// Traces f^n of the parametrized curve s in (s_lo, s_hi) -> R^2, with adaptive
// refinement in the disk metric and V-crossing vertices inserted by bisection.
TracedCurve trace_curve(const std::function<P2d(long double)>& curve, int n,
                        const Params& prm, const std::string& source_id,
                        long double s_lo = 0, long double s_hi = 1,
                        const TraceConfig& cfg = {});

// Standard source families.
std::function<P2d(long double)> horizontal_line(long double t);        // H_t, x over R
std::function<P2d(long double)> tau_horizontal_line(long double t, const Params& prm);

}  // namespace fab
