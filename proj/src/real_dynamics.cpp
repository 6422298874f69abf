#include "fab/real_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fab/trace.hpp"

namespace fab {

static constexpr long double kInf = std::numeric_limits<long double>::infinity();

EIntervals e_intervals(const Params& prm) {
  long double a = prm.a_ld();
  EIntervals e;
  // slots 0..3 are V1, V3, V4, V5
  e.s[0] = {-kInf, a + 1};
  e.u[0] = {0, kInf};
  e.s[1] = {-kInf, -1};
  e.u[1] = {1, kInf};
  e.s[2] = {-kInf, 2 * a + 2};
  e.u[2] = {0, kInf};
  e.s[3] = {-kInf, a + 1};
  e.u[3] = {-1 - a, kInf};
  for (int i = 0; i < 4; ++i) {
    e.overlap_j[i] = e.s[i].overlaps(e.u[i]);
    e.overlap = e.overlap || e.overlap_j[i];
  }
  return e;
}

std::string RegionLabel::str() const {
  switch (kind) {
    case RegionKind::Region:
      return "R" + std::to_string(index) + (side == Side::Plus ? "+" : "-");
    case RegionKind::Boundary: return "boundary(" + curve + ")";
    case RegionKind::OnV: return std::string("on V") + std::to_string(v);
    case RegionKind::Excluded: return std::string("excluded V") + std::to_string(v);
  }
  return "?";
}

namespace {

// sign data of the three dividing functions; 0 marks the boundary
struct SignCell {
  int s[3];
  bool boundary() const { return !s[0] || !s[1] || !s[2]; }
  int index() const { return (s[0] > 0 ? 4 : 0) | (s[1] > 0 ? 2 : 0) | (s[2] > 0 ? 1 : 0); }
};

// relative tolerance: float points this close to a dividing curve are Boundary
SignCell plus_signs_ld(long double x, long double y, long double rel_tol = 1e-9L) {
  long double c = (x - 1) * (y - 1) - 1;
  long double scale = 1 + std::fabs(x) + std::fabs(y);
  long double t2 = rel_tol * scale * scale;
  auto sg = [](long double v, long double tol) {
    return v > tol ? 1 : (v < -tol ? -1 : 0);
  };
  return {{sg(x, rel_tol * (1 + std::fabs(x))), sg(y, rel_tol * (1 + std::fabs(y))),
           sg(c, t2)}};
}

SignCell minus_signs_ld(long double x, long double y, long double a, long double b,
                        long double rel_tol = 1e-9L) {
  long double g1 = y - b * x - (a + 1);
  long double g2 = (x - 1) * (b * x + a - y) - 1;
  long double scale = 1 + std::fabs(x) + std::fabs(y);
  long double t1 = rel_tol * scale, t2 = rel_tol * scale * scale;
  auto sg = [](long double v, long double tol) {
    return v > tol ? 1 : (v < -tol ? -1 : 0);
  };
  return {{sg(x, rel_tol * (1 + std::fabs(x))), sg(g1, t1), sg(g2, t2)}};
}

SignCell plus_signs_q(const Rat& x, const Rat& y) {
  Rat c = (x - 1) * (y - 1) - 1;
  return {{sgn(x), sgn(y), sgn(c)}};
}

SignCell minus_signs_q(const Rat& x, const Rat& y, const Params& prm) {
  Rat g1 = y - prm.b * x - (prm.a + 1);
  Rat g2 = (x - 1) * (prm.b * x + prm.a - y) - 1;
  return {{sgn(x), sgn(g1), sgn(g2)}};
}

const char* plus_curve_name(const SignCell& c) {
  if (c.s[1] == 0) return "C0+";
  return "C1+";
}

const char* minus_curve_name(const SignCell& c) {
  if (c.s[1] == 0) return "C0-";
  return "C1-";
}

// how far a point may sit from a dividing curve and still be trusted, in floats
bool sig_well_separated(long double x, long double y, const SignCell&, long double g1,
                        long double g2, long double g3) {
  long double scale = (1 + std::fabs(x) + std::fabs(y));
  scale *= scale;
  long double tol = 1e-9L * scale;
  return std::fabs(g1) > tol && std::fabs(g2) > tol && std::fabs(g3) > tol;
}

}  // namespace

RegionClassifier::RegionClassifier(const Params& prm) : prm_(prm) {
  if (prm_.b == 0) throw std::invalid_argument("region model requires b != 0");
  calibrate();
}

RegionLabel RegionClassifier::classify_xy(long double x, long double y, Side side) const {
  SignCell c = side == Side::Plus ? plus_signs_ld(x, y)
                                  : minus_signs_ld(x, y, prm_.a_ld(), prm_.b_ld());
  RegionLabel lab;
  lab.side = side;
  if (c.s[0] == 0) {
    lab.kind = RegionKind::OnV;
    lab.v = 1;
    return lab;
  }
  if (c.boundary()) {
    lab.kind = RegionKind::Boundary;
    lab.curve = side == Side::Plus ? plus_curve_name(c) : minus_curve_name(c);
    return lab;
  }
  int j = side == Side::Plus ? plus_cell_[c.index()] : minus_cell_[c.index()];
  if (j == 0) {
    // numerically in the empty cell: must be roundoff at a curve
    lab.kind = RegionKind::Boundary;
    lab.curve = "(empty-cell roundoff)";
    return lab;
  }
  lab.kind = RegionKind::Region;
  lab.index = j;
  return lab;
}

RegionLabel RegionClassifier::classify(const ChartPoint& p, Side side) const {
  if (!p.is_affine()) {
    RegionLabel lab;
    lab.side = side;
    int j = p.v_index();
    if (j == 0 || j == 2) {
      lab.kind = RegionKind::Excluded;
      lab.v = j;
    } else {
      lab.kind = RegionKind::OnV;
      lab.v = j;
    }
    return lab;
  }
  if (p.exact()) {
    SignCell c = side == Side::Plus ? plus_signs_q(p.x.rat(), p.y.rat())
                                    : minus_signs_q(p.x.rat(), p.y.rat(), prm_);
    RegionLabel lab;
    lab.side = side;
    if (c.s[0] == 0) {
      lab.kind = RegionKind::OnV;
      lab.v = 1;
      return lab;
    }
    if (c.boundary()) {
      lab.kind = RegionKind::Boundary;
      lab.curve = side == Side::Plus ? plus_curve_name(c) : minus_curve_name(c);
      return lab;
    }
    lab.kind = RegionKind::Region;
    lab.index = side == Side::Plus ? plus_cell_[c.index()] : minus_cell_[c.index()];
    if (lab.index == 0) {
      lab.kind = RegionKind::Boundary;
      lab.curve = "(empty-cell)";
    }
    return lab;
  }
  return classify_xy(p.x.ld(), p.y.ld(), side);
}

void RegionClassifier::calibrate() {
  const long double a = prm_.a_ld(), b = prm_.b_ld();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> box(-6.0, 6.0);

  // collect well-separated samples per plus sign cell
  std::array<std::vector<P2d>, 8> samples;
  const size_t per_cell = 400;
  size_t filled = 0;
  for (long draws = 0; draws < 2000000 && filled < 7; ++draws) {
    long double x = box(rng), y = box(rng);
    long double c1 = (x - 1) * (y - 1) - 1;
    SignCell c = plus_signs_ld(x, y);
    if (c.boundary() || !sig_well_separated(x, y, c, x, y, c1)) continue;
    auto& bucket = samples[c.index()];
    if (bucket.size() >= per_cell) continue;
    bucket.push_back({x, y});
    if (bucket.size() == per_cell) ++filled;
  }
  int nonempty = 0, empty_cell = -1;
  for (int c = 0; c < 8; ++c) {
    if (samples[c].size() >= 100)
      ++nonempty;
    else
      empty_cell = c;
  }
  if (nonempty != 7)
    throw std::runtime_error("region calibration: expected exactly 7 nonempty sign cells");

  auto plus_cell_of = [&](long double x, long double y) -> int {
    SignCell c = plus_signs_ld(x, y);
    long double c1 = (x - 1) * (y - 1) - 1;
    if (c.boundary() || !sig_well_separated(x, y, c, x, y, c1)) return -1;
    return c.index();
  };
  auto minus_cell_of = [&](long double x, long double y) -> int {
    SignCell c = minus_signs_ld(x, y, a, b);
    long double g1 = y - b * x - (a + 1);
    long double g2 = (x - 1) * (b * x + a - y) - 1;
    if (c.boundary() || !sig_well_separated(x, y, c, x, g1, g2)) return -1;
    return c.index();
  };

  plus_cell_.fill(0);
  minus_cell_.fill(0);

  // R3+: the spec's reference point x = 1/2, y large
  int cell3 = plus_cell_of(0.5L, 100.0L);
  if (cell3 < 0) throw std::runtime_error("region calibration: reference point on boundary");
  plus_cell_[cell3] = 3;

  // R5+: the unique essentially f^2-invariant cell
  int cell5 = -1;
  for (int c = 0; c < 8; ++c) {
    if (c == cell3 || samples[c].size() < 100) continue;
    size_t defined = 0, stay = 0;
    for (const P2d& q0 : samples[c]) {
      P2d q = q0;
      if (!f_fwd(q, a, b) || !f_fwd(q, a, b)) continue;
      int cc = plus_cell_of(q.x, q.y);
      if (cc < 0) continue;
      ++defined;
      if (cc == c) ++stay;
    }
    if (defined >= 50 && stay * 100 >= defined * 95) {
      if (cell5 >= 0) throw std::runtime_error("region calibration: R5 ambiguous");
      cell5 = c;
    }
  }
  if (cell5 < 0) throw std::runtime_error("region calibration: no f^2-invariant cell");
  plus_cell_[cell5] = 5;

  // empirical plus->plus digraph
  std::array<std::array<long, 8>, 8> edge{};
  std::array<long, 8> outcount{};
  for (int c = 0; c < 8; ++c)
    for (const P2d& q0 : samples[c]) {
      P2d q = q0;
      if (!f_fwd(q, a, b)) continue;
      int cc = plus_cell_of(q.x, q.y);
      if (cc < 0) continue;
      ++edge[c][cc];
      ++outcount[c];
    }
  auto has_edge = [&](int c, int cc) -> int {  // 1 yes, 0 no, -1 ambiguous
    long e = edge[c][cc];
    if (e >= 3) return 1;
    if (e <= 1) return 0;
    return -1;
  };

  // R7+ = tau(f(R5+)), since f(R5+) = R7- and R_j- = tau(R_j+)
  std::array<long, 8> votes{};
  for (const P2d& q0 : samples[cell5]) {
    P2d q = q0;
    if (!f_fwd(q, a, b)) continue;
    long double ty = b * q.x + (a + 1) - q.y;
    int cc = plus_cell_of(q.x, ty);
    if (cc >= 0) ++votes[cc];
  }
  int cell7 = int(std::max_element(votes.begin(), votes.end()) - votes.begin());
  if (votes[cell7] < 50 || plus_cell_[cell7] != 0)
    throw std::runtime_error("region calibration: R7 vote failed");
  plus_cell_[cell7] = 7;

  if (sgn(prm_.b) > 0) {
    // assign labels 1, 2, 4 among the remaining cells by matching the coding digraph
    Mat4 F = F_matrix();
    std::vector<int> rest;
    for (int c = 0; c < 8; ++c)
      if (plus_cell_[c] == 0 && samples[c].size() >= 100) rest.push_back(c);
    int found = 0;
    std::array<int, 5> cell_of{};  // label -> cell, labels 1..4 used
    for (int i : rest)
      for (int j : rest)
        for (int k : rest) {
          if (i == j || i == k || j == k) continue;
          std::array<int, 5> cand{};
          cand[1] = i;
          cand[2] = j;
          cand[3] = cell3;
          cand[4] = k;
          bool ok = true;
          for (int u = 1; u <= 4 && ok; ++u)
            for (int v = 1; v <= 4 && ok; ++v) {
              int e = has_edge(cand[u], cand[v]);
              if (e < 0 || e != F[u - 1][v - 1]) ok = false;
            }
          if (ok) {
            ++found;
            cell_of = cand;
          }
        }
    if (found != 1)
      throw std::runtime_error("region calibration: coding digraph match not unique (" +
                               std::to_string(found) + " candidates)");
    plus_cell_[cell_of[1]] = 1;
    plus_cell_[cell_of[2]] = 2;
    plus_cell_[cell_of[4]] = 4;
    for (int c = 0; c < 8; ++c)
      if (c != empty_cell && plus_cell_[c] == 0) plus_cell_[c] = 6;
  } else {
    // b < 0: the coding digraph connects differently through the swapped
    // V4/V5 directions, so pin the remaining labels from the cycle structure
    // of the induced cell permutation c -> tau^{-1}(f(c)), which consists of
    // the 2-cycles {R1,R2}, {R5,R7} and the fixed cells {R3,R4,R6}. Each
    // ambiguous pair is split by the sign of x, matching the b > 0 table.
    std::array<int, 8> tau_cell;  // plus cell -> minus cell under tau
    tau_cell.fill(-1);
    for (int c = 0; c < 8; ++c) {
      if (samples[c].size() < 100) continue;
      std::array<long, 8> mv{};
      for (const P2d& q : samples[c]) {
        long double ty = b * q.x + (a + 1) - q.y;
        int m = minus_cell_of(q.x, ty);
        if (m >= 0) ++mv[m];
      }
      int best = int(std::max_element(mv.begin(), mv.end()) - mv.begin());
      if (mv[best] < 50) throw std::runtime_error("region calibration: tau vote failed");
      tau_cell[c] = best;
    }
    std::array<int, 8> perm;
    perm.fill(-1);
    for (int c = 0; c < 8; ++c) {
      if (samples[c].size() < 100) continue;
      std::array<long, 8> mv{};
      long tot = 0;
      for (const P2d& q0 : samples[c]) {
        P2d q = q0;
        if (!f_fwd(q, a, b)) continue;
        int m = minus_cell_of(q.x, q.y);
        if (m < 0) continue;
        ++mv[m];
        ++tot;
      }
      int best = int(std::max_element(mv.begin(), mv.end()) - mv.begin());
      if (tot < 50 || mv[best] * 100 < tot * 99)
        throw std::runtime_error("region calibration: noisy cell transition");
      for (int d = 0; d < 8; ++d)
        if (tau_cell[d] == best) perm[c] = d;
      if (perm[c] < 0)
        throw std::runtime_error("region calibration: transition leaves the tau image");
    }
    if (perm[cell3] != cell3 || perm[cell5] != cell7 || perm[cell7] != cell5)
      throw std::runtime_error("region calibration: permutation cycle mismatch");
    for (int c = 0; c < 8; ++c) {
      if (c == empty_cell || plus_cell_[c] != 0 || samples[c].size() < 100) continue;
      int label;
      if (perm[c] == c)
        label = (c & 4) ? 4 : 6;
      else if (perm[perm[c]] == c)
        label = (c & 4) ? 2 : 1;
      else
        throw std::runtime_error("region calibration: permutation not an involution");
      if (std::count(plus_cell_.begin(), plus_cell_.end(), label) > 0)
        throw std::runtime_error("region calibration: duplicate label from permutation");
      plus_cell_[c] = label;
    }
  }
  for (int label = 1; label <= 7; ++label)
    if (std::count(plus_cell_.begin(), plus_cell_.end(), label) != 1)
      throw std::runtime_error("region calibration: label assignment incomplete");

  // minus labels: R_j- = tau(R_j+)
  for (int c = 0; c < 8; ++c) {
    if (plus_cell_[c] == 0) continue;
    std::array<long, 8> mv{};
    for (const P2d& q : samples[c]) {
      long double ty = b * q.x + (a + 1) - q.y;
      int cc = minus_cell_of(q.x, ty);
      if (cc >= 0) ++mv[cc];
    }
    int mc = int(std::max_element(mv.begin(), mv.end()) - mv.begin());
    if (mv[mc] < 50) throw std::runtime_error("region calibration: minus vote failed");
    if (minus_cell_[mc] != 0)
      throw std::runtime_error("region calibration: minus cells collide");
    minus_cell_[mc] = plus_cell_[c];
  }

  // certify against the transition permutation: zero violations allowed
  for (int c = 0; c < 8; ++c) {
    if (plus_cell_[c] == 0) continue;
    int expected = kRegionPermutation[plus_cell_[c]];
    for (const P2d& q0 : samples[c]) {
      P2d q = q0;
      if (!f_fwd(q, a, b)) continue;
      int mc = minus_cell_of(q.x, q.y);
      if (mc < 0) continue;
      if (minus_cell_[mc] != expected)
        throw std::runtime_error("region calibration: transition table violation");
    }
  }
}

namespace {

struct EndpointOption {
  int vj;       // chart index
  int slot;     // E-interval slot
};

// defining table: type js runs through R_j+ with one endpoint in set A and the
// other in set B, intervals in the u flavor (dually ju in the s flavor)
struct TypeTable {
  std::vector<EndpointOption> A, B;
};

const TypeTable& type_table(int type) {
  static const TypeTable t1{{{1, 0}, {4, 2}}, {{5, 3}}};
  static const TypeTable t2{{{3, 1}}, {{4, 2}}};
  static const TypeTable t3{{{1, 0}}, {{4, 2}}};
  static const TypeTable t4{{{1, 0}}, {{3, 1}}};
  switch (type) {
    case 1: return t1;
    case 2: return t2;
    case 3: return t3;
    default: return t4;
  }
}

// unstable types mirror the stable ones under tau, which swaps V4 and V5
TypeTable mirrored(const TypeTable& t) {
  auto swap45 = [](std::vector<EndpointOption> v) {
    for (auto& e : v) {
      if (e.vj == 4) {
        e.vj = 5;
        e.slot = 3;
      } else if (e.vj == 5) {
        e.vj = 4;
        e.slot = 2;
      }
    }
    return v;
  };
  return {swap45(t.A), swap45(t.B)};
}

bool endpoint_in(const EIntervals& e, const std::vector<EndpointOption>& opts,
                 const ChartPoint& p, bool stable) {
  int vj = p.v_index();
  if (vj < 0) return false;
  for (const auto& o : opts) {
    if (o.vj != vj) continue;
    const TInterval& iv = stable ? e.u[o.slot] : e.s[o.slot];
    // endpoint parameters come out of a float trace with ~1e-5 absolute error;
    // the interval endpoints are O(1) apart, so a 1e-4 pad is unambiguous
    long double t = p.x.ld(), tol = 1e-4L * (1 + std::fabs(t));
    if (t >= iv.lo - tol && t <= iv.hi + tol) return true;
  }
  return false;
}

bool endpoints_match(const EIntervals& e, int type, bool stable, const ChartPoint& p,
                     const ChartPoint& q) {
  TypeTable t = type_table(type);
  if (!stable) t = mirrored(t);
  return (endpoint_in(e, t.A, p, stable) && endpoint_in(e, t.B, q, stable)) ||
         (endpoint_in(e, t.A, q, stable) && endpoint_in(e, t.B, p, stable));
}

}  // namespace

std::vector<TypedRun> typed_runs(const Arc& arc, const RegionClassifier& rc, bool stable) {
  std::vector<TypedRun> out;
  const auto& v = arc.vertices;
  EIntervals e = e_intervals(rc.params());
  Side side = stable ? Side::Plus : Side::Minus;
  size_t i = 0;
  while (i < v.size()) {
    if (v[i].is_affine()) {
      ++i;
      continue;
    }
    // find the next V vertex
    size_t j = i + 1;
    while (j < v.size() && v[j].is_affine()) ++j;
    if (j >= v.size()) break;
    if (j > i + 1) {
      // interior region: constant Region label, tolerating boundary vertices
      int region = 0;
      bool mixed = false, all_boundary = true;
      for (size_t k = i + 1; k < j; ++k) {
        RegionLabel lab = rc.classify(v[k], side);
        if (lab.kind == RegionKind::Region) {
          all_boundary = false;
          if (region == 0)
            region = lab.index;
          else if (region != lab.index)
            mixed = true;
        } else if (lab.kind != RegionKind::Boundary && lab.kind != RegionKind::OnV) {
          mixed = true;
        }
      }
      std::vector<int> candidates;
      if (!mixed && region != 0) candidates.push_back(region);
      if (!mixed && all_boundary) {
        // the run lies on a dividing curve; probe its two sides at a midpoint
        const ChartPoint& m = v[i + (j - i) / 2];
        if (m.is_affine()) {
          long double x = m.x.ld(), y = m.y.ld();
          long double d = 1e-6L * (1 + std::fabs(x) + std::fabs(y));
          for (auto [dx, dy] : {std::pair<long double, long double>{d, 0},
                                {-d, 0},
                                {0, d},
                                {0, -d}}) {
            RegionLabel lab = rc.classify_xy(x + dx, y + dy, side);
            if (lab.kind == RegionKind::Region &&
                std::find(candidates.begin(), candidates.end(), lab.index) ==
                    candidates.end())
              candidates.push_back(lab.index);
          }
        }
      }
      for (int type : candidates) {
        if (type < 1 || type > 4) continue;
        if (endpoints_match(e, type, stable, v[i], v[j])) {
          out.push_back({type, stable, i, j});
          break;
        }
      }
    }
    i = j;
  }
  return out;
}

ArcCounts arc_counts(const Arc& arc, const RegionClassifier& rc) {
  ArcCounts counts;
  for (const TypedRun& r : typed_runs(arc, rc, true)) ++counts.svec[r.type - 1];
  for (const TypedRun& r : typed_runs(arc, rc, false)) ++counts.uvec[r.type - 1];
  // detect unrefined region jumps (adjacent affine vertices in different regions)
  for (size_t k = 0; k + 1 < arc.vertices.size(); ++k) {
    const ChartPoint &p = arc.vertices[k], &q = arc.vertices[k + 1];
    if (!p.is_affine() || !q.is_affine()) continue;
    RegionLabel lp = rc.classify(p, Side::Plus), lq = rc.classify(q, Side::Plus);
    if (lp.kind == RegionKind::Region && lq.kind == RegionKind::Region &&
        lp.index != lq.index) {
      long double dx = p.x.ld() - q.x.ld(), dy = p.y.ld() - q.y.ld();
      if (dx * dx + dy * dy > 1e-2L) counts.unresolved = true;
    }
  }
  return counts;
}

Mat4 F_matrix() {
  return {{{0, 1, 1, 0}, {1, 0, 0, 0}, {0, 1, 1, 1}, {0, 0, 1, 1}}};
}

Mat4 Q_matrix() {
  return {{{1, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 1, 1, 1}}};
}

long min_crossings(const std::array<long, 4>& s, const std::array<long, 4>& u) {
  Mat4 Q = Q_matrix();
  long total = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) total += s[i] * Q[i][j] * u[j];
  return total;
}

std::vector<mpz_class> charpoly_F() {
  // (x - 1)(x^3 - x^2 - 2x - 1) = x^4 - 2x^3 - x^2 + x + 1
  return {1, 1, -1, -2, 1};
}

namespace {

std::function<P2d(long double)> canonical_source(int type, bool stable, const Params& prm) {
  long double a = prm.a_ld(), b = prm.b_ld();
  if (stable) {
    switch (type) {
      case 3:  // {y = 0, x > 0}
        return [](long double s) { return P2d{s / (1 - s), 0.0L}; };
      case 2:  // branch of C1+ with x > 1
        return [](long double s) {
          long double x = 1 + s / (1 - s);
          return P2d{x, 1 + (1 - s) / s};
        };
      default:  // 4: branch of C1+ with 0 < x < 1
        return [](long double s) { return P2d{s, 1 + 1 / (s - 1)}; };
    }
  }
  switch (type) {
    case 3:  // tau{y = 0, x > 0} = {y = bx + a + 1, x > 0}
      return [a, b](long double s) {
        long double x = s / (1 - s);
        return P2d{x, b * x + a + 1};
      };
    case 2:
      return [a, b](long double s) {
        long double x = 1 + s / (1 - s);
        return P2d{x, b * x + a - (1 - s) / s};
      };
    default:  // 4
      return [a, b](long double s) { return P2d{s, b * s + a - 1 / (s - 1)}; };
  }
}

}  // namespace

std::vector<CanonicalArc> canonical_arcs(const Params& prm) {
  RegionClassifier rc(prm);
  std::vector<CanonicalArc> out;
  for (bool stable : {true, false}) {
    for (int type : {2, 3, 4}) {
      CanonicalArc c;
      c.type = type;
      c.stable = stable;
      c.source = canonical_source(type, stable, prm);
      c.iterate = 0;
      TracedCurve t = trace_curve(c.source, 0, prm,
                                  (stable ? "canonical_s" : "canonical_u") +
                                      std::to_string(type));
      c.arc = std::move(t.arc);
      auto counts = arc_counts(c.arc, rc);
      const auto& vec = stable ? counts.svec : counts.uvec;
      if (vec[type - 1] < 1)
        throw std::runtime_error("canonical arc failed to self-type");
      out.push_back(std::move(c));
    }
    // type 1 arises as a typed subarc of the once-iterated type-3 arc
    CanonicalArc c;
    c.type = 1;
    c.stable = stable;
    c.source = canonical_source(3, stable, prm);
    c.iterate = stable ? -1 : 1;
    TracedCurve t = trace_curve(c.source, c.iterate, prm,
                                stable ? "canonical_s1" : "canonical_u1");
    auto runs = typed_runs(t.arc, rc, stable);
    const TypedRun* hit = nullptr;
    for (const auto& r : runs)
      if (r.type == 1) hit = &r;
    if (!hit) throw std::runtime_error("no type-1 subarc in the iterated type-3 arc");
    c.s_lo = t.params[hit->first];
    c.s_hi = t.params[hit->last];
    c.arc.vertices.assign(t.arc.vertices.begin() + hit->first,
                          t.arc.vertices.begin() + hit->last + 1);
    out.push_back(std::move(c));
  }
  return out;
}

DominationReport verify_pullback_domination(const Params& prm, int n) {
  RegionClassifier rc(prm);
  DominationReport rep;
  Mat4 F = F_matrix();
  // F^n
  Mat4 Fn{};
  for (int i = 0; i < 4; ++i) Fn[i][i] = 1;
  for (int k = 0; k < n; ++k) {
    Mat4 t{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) t[i][j] += F[i][l] * Fn[l][j];
    Fn = t;
  }
  for (const CanonicalArc& c : canonical_arcs(prm)) {
    int iterate = c.iterate + (c.stable ? -n : n);
    TracedCurve t = trace_curve(c.source, iterate, prm,
                                "domination_" + std::to_string(c.type), c.s_lo, c.s_hi);
    ArcCounts counts = arc_counts(t.arc, rc);
    DominationReport::Entry e;
    e.type = c.type;
    e.stable = c.stable;
    e.counts = c.stable ? counts.svec : counts.uvec;
    for (int i = 0; i < 4; ++i) e.required[i] = Fn[i][c.type - 1];
    e.ok = true;
    for (int i = 0; i < 4; ++i)
      if (e.counts[i] < e.required[i]) e.ok = false;
    rep.entries.push_back(e);
    rep.all_ok = rep.all_ok && e.ok;
  }
  return rep;
}

}  // namespace fab
