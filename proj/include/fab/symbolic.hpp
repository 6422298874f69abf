#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fab/real_dynamics.hpp"

namespace fab {

// A finite word over {1,2,3,4}. `anchor` is the position of symbol 0 within
// `symbols`, so the word covers indices [-anchor, symbols.size()-1-anchor].
struct Word {
  std::vector<int> symbols;
  long anchor = 0;

  static Word of(std::initializer_list<int> s) { return {std::vector<int>(s), 0}; }
  size_t size() const { return symbols.size(); }
};

// Admissibility: every adjacent pair is an allowed F-transition. Words with
// symbols outside {1,2,3,4} are rejected (false); the empty word is admissible.
bool is_admissible(const Word& w);

// Exact count of admissible words of length n, optionally pinning the first
// and/or last symbol, via integer powers of F (memoized).
mpz_class count_admissible(int n, std::optional<int> first = std::nullopt,
                           std::optional<int> last = std::nullopt);

// Parry (maximal-entropy) data of the subshift: rho and the left/right Perron
// vectors of F, scaled so that stationary()[i] = left[i]*right[i] sums to 1.
struct ParryMeasure {
  long double rho = 0;
  std::array<long double, 4> left{}, right{};

  std::array<long double, 4> stationary() const;
  // transition probability i -> j of the Parry chain
  long double transition(int i, int j) const;
  // cylinder measure; 0 for inadmissible words, 1 for the empty word
  long double nu(const Word& w) const;
  // -sum_i pi_i sum_j P_ij log P_ij
  long double entropy() const;
};

ParryMeasure parry_measure();

// log rho, the topological entropy (equal to the Parry entropy).
long double sft_entropy();

// Membership of a finite window in W^{s/u}(2): side s inspects the right tail,
// side u the left tail; true iff the tail is a strict 2-cycle alternation
// (12... or 34...) of length >= 2. Finite windows make this one-sided and
// approximate by nature; the caller chooses the window length.
bool in_Wsu2(const Word& w, bool side_s);

// Itinerary of f^j(p) for j in [-k, k] through the plus-regions R1..R4.
struct CodeResult {
  bool ok = false;
  Word word;           // anchor = k on success
  int fail_index = 0;  // first j (scanning -k..k) outside the coding regions
  std::string reason;
};

CodeResult code_orbit(const ChartPoint& p, const Params& prm, int k);

// Realizes an admissible word by iterated typed-subarc pullback (Prop-style
// suffix recursion): returns an arc every interior point of which is coded by
// w, and a witness point placed at the middle of its orbit segment.
struct RealizeResult {
  bool ok = false;
  ChartPoint witness;  // f^mid_offset of the arc sample, mid_offset = (L-1)/2
  Arc arc;
  int fail_step = -1;  // pullback step that lost the typed subarc, if any
  std::string diagnostic;
};

RealizeResult realize_word(const Word& w, const Params& prm, size_t cap = 9);

}  // namespace fab
