#include "fab/symbolic.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "fab/map_core.hpp"
#include "fab/trace.hpp"

namespace fab {

namespace {

bool valid_symbol(int s) { return s >= 1 && s <= 4; }

using Mat4z = std::array<std::array<mpz_class, 4>, 4>;

Mat4z mat_mul(const Mat4z& A, const Mat4z& B) {
  Mat4z C{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) C[i][j] += A[i][k] * B[k][j];
  return C;
}

// F^k, memoized
const Mat4z& f_power(int k) {
  static std::vector<Mat4z> memo = [] {
    Mat4z id{};
    for (int i = 0; i < 4; ++i) id[i][i] = 1;
    return std::vector<Mat4z>{id};
  }();
  while (int(memo.size()) <= k) {
    Mat4 F = F_matrix();
    Mat4z Fz{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) Fz[i][j] = F[i][j];
    memo.push_back(mat_mul(memo.back(), Fz));
  }
  return memo[k];
}

long double perron_rho() {
  // largest root of x^3 - x^2 - 2x - 1 by Newton
  long double x = 2.2L;
  for (int i = 0; i < 64; ++i) {
    long double fx = ((x - 1) * x - 2) * x - 1;
    long double dfx = (3 * x - 2) * x - 2;
    long double nx = x - fx / dfx;
    if (nx == x) break;
    x = nx;
  }
  return x;
}

const RegionClassifier& classifier_for(const Params& prm) {
  static std::map<std::pair<std::string, std::string>, std::unique_ptr<RegionClassifier>>
      cache;
  auto key = std::make_pair(prm.a.get_str(), prm.b.get_str());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<RegionClassifier>(prm)).first;
  return *it->second;
}

}  // namespace

bool is_admissible(const Word& w) {
  Mat4 F = F_matrix();
  for (int s : w.symbols)
    if (!valid_symbol(s)) return false;
  for (size_t i = 0; i + 1 < w.symbols.size(); ++i)
    if (F[w.symbols[i] - 1][w.symbols[i + 1] - 1] != 1) return false;
  return true;
}

mpz_class count_admissible(int n, std::optional<int> first, std::optional<int> last) {
  if (n < 1) return n == 0 ? 1 : 0;
  const Mat4z& P = f_power(n - 1);
  mpz_class total = 0;
  for (int i = 0; i < 4; ++i) {
    if (first && *first != i + 1) continue;
    for (int j = 0; j < 4; ++j) {
      if (last && *last != j + 1) continue;
      total += P[i][j];
    }
  }
  return total;
}

std::array<long double, 4> ParryMeasure::stationary() const {
  std::array<long double, 4> pi{};
  for (int i = 0; i < 4; ++i) pi[i] = left[i] * right[i];
  return pi;
}

long double ParryMeasure::transition(int i, int j) const {
  Mat4 F = F_matrix();
  if (F[i][j] == 0) return 0;
  return right[j] / (rho * right[i]);
}

long double ParryMeasure::nu(const Word& w) const {
  if (w.symbols.empty()) return 1;
  if (!is_admissible(w)) return 0;
  size_t L = w.symbols.size();
  return left[w.symbols[0] - 1] * right[w.symbols[L - 1] - 1] /
         std::pow(rho, (long double)(L - 1));
}

long double ParryMeasure::entropy() const {
  long double h = 0;
  auto pi = stationary();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      long double p = transition(i, j);
      if (p > 0) h -= pi[i] * p * std::log(p);
    }
  return h;
}

ParryMeasure parry_measure() {
  ParryMeasure m;
  long double r = perron_rho();
  m.rho = r;
  // closed-form Perron vectors: F(rho,1,rho^2-1,rho+1)^t = rho * same;
  // (1,rho,rho^2-1,rho+1) F = rho * same
  m.right = {r, 1, r * r - 1, r + 1};
  m.left = {1, r, r * r - 1, r + 1};
  long double dot = 0;
  for (int i = 0; i < 4; ++i) dot += m.left[i] * m.right[i];
  for (int i = 0; i < 4; ++i) m.left[i] /= dot;
  return m;
}

long double sft_entropy() { return std::log(perron_rho()); }

bool in_Wsu2(const Word& w, bool side_s) {
  const auto& s = w.symbols;
  size_t L = s.size();
  if (L < 2) return false;
  auto partner = [](int a) { return a == 1 ? 2 : a == 2 ? 1 : a == 3 ? 4 : 3; };
  size_t run = 1;  // maximal strictly alternating 2-cycle tail
  if (side_s) {
    for (size_t i = L - 1; i-- > 0 && s[i] == partner(s[i + 1]);) ++run;
  } else {
    for (size_t i = 1; i < L && s[i] == partner(s[i - 1]); ++i) ++run;
  }
  return run >= 2;
}

CodeResult code_orbit(const ChartPoint& p, const Params& prm, int k) {
  CodeResult res;
  if (!p.is_affine()) {
    res.reason = "point not affine";
    return res;
  }
  const RegionClassifier& rc = classifier_for(prm);
  Orbit o = orbit(p, prm, k, k);
  std::map<int, const OrbitEntry*> by_index;
  for (const auto& e : o.entries) by_index[e.index] = &e;
  std::vector<int> syms;
  for (int j = -k; j <= k; ++j) {
    auto it = by_index.find(j);
    if (it == by_index.end() || it->second->status.any_indet()) {
      res.fail_index = j;
      res.reason = "orbit hits indeterminacy";
      return res;
    }
    const ChartPoint& q = it->second->point;
    if (!q.is_affine()) {
      res.fail_index = j;
      res.reason = "orbit leaves the affine plane";
      return res;
    }
    RegionLabel lab = rc.classify(q, Side::Plus);
    if (lab.kind != RegionKind::Region || lab.index > 4) {
      res.fail_index = j;
      res.reason = "orbit leaves R1..R4 (" + lab.str() + ")";
      return res;
    }
    syms.push_back(lab.index);
  }
  res.ok = true;
  res.word = {std::move(syms), k};
  return res;
}

RealizeResult realize_word(const Word& w, const Params& prm, size_t cap) {
  RealizeResult res;
  size_t L = w.size();
  if (L == 0 || L > cap) {
    res.diagnostic = "word length out of range";
    return res;
  }
  if (!is_admissible(w)) {
    res.diagnostic = "word not admissible";
    return res;
  }
  const RegionClassifier& rc = classifier_for(prm);

  // extend on the right until the final symbol is 3, so the seed arc can be
  // the open 3s-run of a horizontal line (the canonical C(f) arcs themselves
  // lie on dividing curves and would not re-code)
  std::vector<int> word = w.symbols;
  while (word.back() != 3) word.push_back(word.back() == 2 ? 1 : 3);

  auto source = horizontal_line(0.5L);
  TracedCurve seed = trace_curve(source, 0, prm, "realize_seed");
  auto seed_runs = typed_runs(seed.arc, rc, true);
  const TypedRun* seed3 = nullptr;
  for (const auto& r : seed_runs)
    if (r.type == 3) seed3 = &r;
  if (!seed3) {
    res.diagnostic = "seed 3s-run missing";
    return res;
  }
  long double lo = seed.params[seed3->first], hi = seed.params[seed3->last];
  if (lo > hi) std::swap(lo, hi);
  Arc arc;
  arc.vertices.assign(seed.arc.vertices.begin() + seed3->first,
                      seed.arc.vertices.begin() + seed3->last + 1);

  int n = 0;
  for (int j = int(word.size()) - 2; j >= 0; --j) {
    --n;
    TracedCurve t = trace_curve(source, n, prm, "realize", lo, hi);
    auto runs = typed_runs(t.arc, rc, true);
    const TypedRun* hit = nullptr;
    for (const auto& r : runs)
      if (r.type == word[j]) {
        hit = &r;
        break;
      }
    if (!hit) {
      res.fail_step = j;
      res.diagnostic = "pullback lost the typed subarc";
      return res;
    }
    long double a2 = t.params[hit->first], b2 = t.params[hit->last];
    lo = std::min(a2, b2);
    hi = std::max(a2, b2);
    arc.vertices.assign(t.arc.vertices.begin() + hit->first,
                        t.arc.vertices.begin() + hit->last + 1);
  }

  // witness: a sample of the final arc whose forward orbit codes w; place the
  // returned point in the middle of the coded segment
  long double a_ld = prm.a_ld(), b_ld = prm.b_ld();
  int mid = int(L - 1) / 2;
  for (long double frac : {0.5L, 0.375L, 0.625L, 0.25L, 0.75L}) {
    long double s = lo + (hi - lo) * frac;
    P2d p0{std::tan(3.14159265358979323846L * (s - 0.5L)), 0.5L};
    // p0 is on H_{1/2}; push down to the final arc
    bool bad = false;
    for (int k = 0; k < -n && !bad; ++k) bad = !f_bwd(p0, a_ld, b_ld);
    if (bad) continue;
    P2d q = p0;
    bool match = true;
    P2d mid_pt = p0;
    for (size_t jj = 0; jj < L && match; ++jj) {
      RegionLabel lab = rc.classify_xy(q.x, q.y, Side::Plus);
      if (lab.kind != RegionKind::Region || lab.index != w.symbols[jj]) match = false;
      if (int(jj) == mid) mid_pt = q;
      if (jj + 1 < L && !f_fwd(q, a_ld, b_ld)) match = false;
    }
    if (!match) continue;
    res.ok = true;
    res.witness = ChartPoint::affine_ld(mid_pt.x, mid_pt.y);
    res.arc = arc;
    return res;
  }
  res.fail_step = 0;
  res.diagnostic = "witness re-code mismatch";
  return res;
}

}  // namespace fab
