#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fab/map_core.hpp"
#include "fab/params.hpp"

namespace fab {

// Closed interval in t_j coordinates; +-infinity endpoints allowed.
struct TInterval {
  long double lo, hi;
  bool contains(long double t) const { return t >= lo && t <= hi; }
  bool overlaps(const TInterval& o) const { return lo <= o.hi && o.lo <= hi; }
};

// The eight intervals E_j^{s/u} on V_j for j in {1,3,4,5}, indexed 0..3.
struct EIntervals {
  static constexpr std::array<int, 4> kVj = {1, 3, 4, 5};
  std::array<TInterval, 4> s, u;
  bool overlap = false;           // some E_j^s meets E_j^u (happens for a >= -1)
  std::array<bool, 4> overlap_j{};

  static int slot(int vj) {
    for (int i = 0; i < 4; ++i)
      if (kVj[i] == vj) return i;
    return -1;
  }
};

EIntervals e_intervals(const Params& prm);

enum class Side { Plus, Minus };

enum class RegionKind { Region, Boundary, OnV, Excluded };

struct RegionLabel {
  RegionKind kind = RegionKind::Region;
  int index = 0;          // 1..7 when kind == Region
  Side side = Side::Plus;
  std::string curve;      // dividing-curve id when kind == Boundary
  int v = -1;             // chart index when kind == OnV / Excluded

  bool is_region(int j) const { return kind == RegionKind::Region && index == j; }
  std::string str() const;
};

// f maps R_j^+ onto R_{perm[j]}^-.
inline constexpr std::array<int, 8> kRegionPermutation = {0, 2, 1, 3, 4, 7, 6, 5};

// Classifies points into the regions R_1..R_7 on either side. The labels are
// pinned once per parameter choice by a deterministic calibration: the
// transition table, the f^2-invariance of R_5^+, and the coding digraph leave
// a unique assignment of labels to sign cells (throws if they do not).
class RegionClassifier {
 public:
  explicit RegionClassifier(const Params& prm);

  RegionLabel classify(const ChartPoint& p, Side side) const;
  RegionLabel classify_xy(long double x, long double y, Side side) const;

  // sign-cell -> label tables, persisted with run reports
  const std::array<int, 8>& plus_cells() const { return plus_cell_; }
  const std::array<int, 8>& minus_cells() const { return minus_cell_; }
  const Params& params() const { return prm_; }

 private:
  Params prm_;
  std::array<int, 8> plus_cell_{};   // cell index -> region 1..7, 0 = empty
  std::array<int, 8> minus_cell_{};
  void calibrate();
};

struct Arc {
  std::vector<ChartPoint> vertices;  // V-chart vertices mark crossings/endpoints
  bool oriented = true;
};

struct ArcCounts {
  std::array<long, 4> svec{}, uvec{};
  bool unresolved = false;  // adjacent samples changed region with no recorded crossing
};

// A typed run of an arc: vertex range [first, last] with both ends on V-charts.
struct TypedRun {
  int type = 0;  // 1..4
  bool stable = true;
  size_t first = 0, last = 0;
};

ArcCounts arc_counts(const Arc& arc, const RegionClassifier& rc);
std::vector<TypedRun> typed_runs(const Arc& arc, const RegionClassifier& rc, bool stable);

// A canonical arc together with the data needed to iterate it further:
// the source parametrization, the iterate already applied, and the parameter window.
struct CanonicalArc {
  int type = 0;
  bool stable = true;
  std::function<P2d(long double)> source;  // parameter in (0,1)
  int iterate = 0;                         // arc = f^iterate(source)
  long double s_lo = 0, s_hi = 1;
  Arc arc;
};

std::vector<CanonicalArc> canonical_arcs(const Params& prm);

using Mat4 = std::array<std::array<long, 4>, 4>;

Mat4 F_matrix();
Mat4 Q_matrix();
long min_crossings(const std::array<long, 4>& s, const std::array<long, 4>& u);
std::vector<mpz_class> charpoly_F();  // ascending coefficients

struct DominationReport {
  struct Entry {
    int type;
    bool stable;
    std::array<long, 4> counts, required;
    bool ok;
  };
  std::vector<Entry> entries;
  bool all_ok = true;
};

DominationReport verify_pullback_domination(const Params& prm, int n);

}  // namespace fab
