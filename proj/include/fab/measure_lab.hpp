#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fab/symbolic.hpp"
#include "fab/trace.hpp"

namespace fab {

// A traced curve together with an exact-parameter evaluator (source composed
// with f^n in long double), used by the Newton refinement of `intersect`.
struct CurveEval {
  TracedCurve trace;
  std::function<std::optional<P2d>(long double)> eval;  // empty at poles
  long double s_lo = 0, s_hi = 1;
};

// Applies f^n (n may be negative) to a source family and returns the refined
// polyline plus the evaluator.
CurveEval iterate_curve(const std::function<P2d(long double)>& source,
                        const std::string& source_id, int n, const Params& prm,
                        const TraceConfig& cfg = {});

struct IntersectionPoint {
  P2d p;
  long double sA = 0, sB = 0;   // source parameters on the two curves
  long double residual = 0;     // |A(sA) - B(sB)| after refinement
  bool transversal = true;      // crossing angle > 1e-4 rad
  bool merged = false;          // absorbed a duplicate within 1e-8
};

struct IntersectionSet {
  std::vector<IntersectionPoint> points;
  size_t count() const { return points.size(); }
};

// All transversal-or-flagged crossings of the two polylines, bounding-box
// pruned on a uniform grid, then polished by a 2-variable Newton iteration on
// the source parameters to residual <= 1e-12; points closer than 1e-8 merge.
IntersectionSet intersect(const CurveEval& A, const CurveEval& B);

// |f^{-n}H_s  intersect  f^n tau H_t| against F^{2n}_{3,3} + F^{2n}_{4,3},
// with the coded word of every point over the window [-n, n].
struct CountReport {
  int n = 0;
  long formula = 0;        // F^{2n}_{3,3} + F^{2n}_{4,3}, the claimed value
  long count = 0;          // numerical real count
  // independent oracles: the exact class pairing [f^{-n}H].[f^n tau H] on the
  // blown-up surface, and the word count with w_{-n} in {2,3,4} -- the two
  // agree with `count` and exceed `formula`, which omits the 2u-arc of tau H
  long picard_count = 0;
  long extended_formula = 0;
  bool lower_bound_only = false;  // refinement budget degraded the trace
  std::vector<Word> words;        // per point, anchor = n
  bool words_ok = false;           // multiset == admissible, w_n = 3, w_{-n} in {3,4}
  bool words_ok_extended = false;  // same with w_{-n} in {2,3,4}
  std::string note;
};

CountReport count_vs_formula(int n, const Params& prm, long double s, long double t,
                             const TraceConfig& cfg = {});

struct EmpiricalMeasure {
  struct Atom {
    P2d p;
    long double weight = 0;
    Word word;  // coded over [-n, n]
  };
  std::vector<Atom> atoms;
  int n = 0;
  bool partial = false;  // some grid pairs failed and were skipped
  // depth-1 cylinder frequencies (mass of symbol j at position 0), index j-1
  std::array<long double, 4> depth1() const;
};

// Uniform-weight atoms at all S_n intersection points over the (s, t) grid,
// normalized to total mass 1.
EmpiricalMeasure empirical_measure(int n, const std::vector<long double>& s_grid,
                                   const std::vector<long double>& t_grid,
                                   const Params& prm, const TraceConfig& cfg = {});

enum class BasinVerdict { Stays, EscapesForward, EscapesBackward, EscapesBoth, Undecided };
const char* verdict_name(BasinVerdict v);

// Escape certificates: forward = the orbit enters R5+ (or any V_j); backward =
// it enters R6+ u R7+ (or any V_j) under f^{-1}. `Stays` additionally demands
// that the whole inspected orbit stays in a bounded window of R1..R4.
BasinVerdict basin_escape(const ChartPoint& p, const Params& prm, int maxiter,
                          long double window = 64.0L);

struct FixedPointInfo {
  P2d p;
  long double residual = 0;            // |f(p) - p|
  std::complex<long double> lam1, lam2;  // Df eigenvalues, |lam1| >= |lam2|
  std::string type;                    // saddle / elliptic / attracting / ...
  std::array<long double, 2> unstable_dir{}, stable_dir{};  // unit eigenvectors (saddles)
};

// All real fixed points of f in |x| <= box: y = x/(2x-1) reduces f(p) = p to
// (bx + a)(2x - 1) = 1; bisection on sign changes, Newton polish to 1e-12.
// Roots on the excluded loci x = 0, 2x = 1 (and y = 0) are discarded.
std::vector<FixedPointInfo> find_fixed_points(const Params& prm, long double box = 1e3L);
// The saddles among them.
std::vector<FixedPointInfo> find_saddle(const Params& prm, long double box = 1e3L);

// Traces iterates of a fundamental eigenvector segment (offset 1e-7): f^n of
// the unstable segment, f^{-n} of the stable one. `iterates` chooses n; the
// trace stops early if the vertex budget is hit (flagged in stats).
CurveEval trace_manifold(const FixedPointInfo& saddle, bool unstable, int iterates,
                         const Params& prm, const TraceConfig& cfg = {});

struct HomoclinicReport {
  IntersectionSet set;
  // crossing counts of nested trace prefixes (fractions of the source window),
  // innermost first; the tail ratios trend like rho^2 per added iterate
  std::vector<long> nested_counts;
};

HomoclinicReport homoclinic_check(const CurveEval& S, const CurveEval& U);

// CSV (chart,c1,c2,rho,theta per vertex) and SVG (unit disk, polylines in
// (rho, theta)) emission; both byte-deterministic for a given input.
std::string curve_csv(const TracedCurve& c, const Params& prm);
std::string curves_svg(const std::vector<const TracedCurve*>& cs, const Params& prm);

}  // namespace fab
