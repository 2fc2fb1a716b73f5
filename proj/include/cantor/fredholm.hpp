#pragma once

// Even Bellisard-Pearson modules from choice pairs (optionally restricted),
// odd cycles on l^2(Z x Y) with F = 2P_N - 1, Connes trace formulas
// evaluated exactly on their finite-rank supports, Schatten diagnostics,
// geometric summability reports, and synthesis of module descriptions
// realizing a target index homomorphism on cylinders.

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cantor/af_golden.hpp"
#include "cantor/dynamics.hpp"
#include "cantor/k_theory.hpp"
#include "cantor/words.hpp"

namespace cantor {

// Deterministic map Word -> Point with tau(mu) in C_mu: a named base rule
// plus finitely many overrides.
class ChoiceFunction {
 public:
  enum class Rule { MinTail, ConstantTail };

  ChoiceFunction(Language lang, Rule rule, Word tail = Word{});
  ChoiceFunction with_override(const Word& mu, const Point& p) const;

  const Language& language() const { return lang_; }
  Rule rule() const { return rule_; }
  const Word& tail() const { return tail_; }
  const std::map<Word, Point>& overrides() const { return overrides_; }

  Point eval(const Word& mu) const;

 private:
  Language lang_;
  Rule rule_;
  Word tail_;
  std::map<Word, Point> overrides_;
};

struct ChoicePair {
  ChoiceFunction plus;
  ChoiceFunction minus;
  std::optional<Word> restriction;

  ChoicePair(ChoiceFunction plus_, ChoiceFunction minus_,
             std::optional<Word> restriction_ = std::nullopt);
};

// #{nu in S_mu : tau+(nu) in C_mu, tau-(nu) not} - #{reverse}; with a
// restriction word every membership test intersects with its cylinder and
// nu ranges over all words shorter than max(|mu|, |restriction|).
long long even_bp_pairing(const ChoicePair& pair, const Word& mu);

// Rank difference of the two membership projections on words |nu| <= L.
long long even_rank_pairing(const ChoicePair& pair, const Word& mu, int L);

// (-1)^{n(n-1)/2} Tr(gamma rho(f) [F, rho(f)]^n) over the basis of words
// |nu| <= L, n even; exact because the commutator support is finite. The
// returned value carries the one-time calibration sign (fixed against the
// combinatorial count on the canonical example).
std::complex<double> even_trace_formula(const ChoicePair& pair, const IndicatorCombination& f,
                                        int n, int L);

// Finitely supported element sum_k a_k u^k of C_c(Z, C(X)).
struct CrossedElement {
  std::map<int, IndicatorCombination> terms;

  static CrossedElement identity();
  static CrossedElement u_power(int k);

  bool zero() const { return terms.empty(); }
  bool scalar() const;  // every coefficient is a multiple of 1_X
  int min_power() const;
  int max_power() const;
  CrossedElement adjoint(const std::optional<OdometerSpec>& dynamics) const;
};

enum class Side { Positive, Negative };

// Value of phi^{-j}(a) at x, i.e. a(phi^j x): the scalar through which
// pi^(a u^k) acts on the fiber of x at row m + k = j.
long long pi_hat_coefficient(const std::optional<OdometerSpec>& dynamics,
                             const IndicatorCombination& a, long long j, const Point& x);

struct OddCycleSpec {
  ChoiceFunction tau;
  std::vector<Word> N;  // deduplicated, admissible
  Side side = Side::Positive;
  // Needed only when crossed elements carry non-constant coefficients.
  std::optional<OdometerSpec> dynamics;
  bool had_duplicates = false;

  OddCycleSpec(ChoiceFunction tau_, std::vector<Word> N_, Side side_,
               std::optional<OdometerSpec> dynamics_ = std::nullopt);
};

// Pairing of the cycle's class with [u^k]: -k|N| (positive side), +k|N|.
long long odd_pairing(const OddCycleSpec& spec, int k);

struct BasisLabel {
  int m = 0;
  Word word;
  int spin = 0;

  bool operator<(const BasisLabel& o) const;
  bool operator==(const BasisLabel& o) const {
    return m == o.m && word == o.word && spin == o.spin;
  }
};

struct SparseOperator {
  std::vector<BasisLabel> basis;
  std::map<std::pair<int, int>, std::complex<double>> entries;

  Mat dense() const;
  long long rank(double tol = 1e-9) const;
};

// dim ker - dim coker of P_N pi^(f) P_N on the truncated basis, computed
// with genuine cuts only (the far edge of the window is padded by the
// bandwidth so no artificial kernel appears). Stabilization across window
// M and M+2 is checked; disagreement raises a window-too-small error.
long long odd_fredholm_index(const OddCycleSpec& spec, const CrossedElement& f, int M, int L);

// [2P_N - 1, pi^(g)] on the truncation; rank is at most
// (max power - min power + 1)|N|.
SparseOperator odd_commutator(const OddCycleSpec& spec, const CrossedElement& g, int M, int L);

// ((-1)^{(n-1)/2 - 1} / 2^n) Tr(rho(f*) ([F,rho(f)][F,rho(f*)])^{(n-1)/2}
// [F,rho(f)]), n odd, evaluated exactly on the finite-rank support and
// calibrated once against the Fredholm index on the canonical example.
std::complex<double> odd_trace_formula(const OddCycleSpec& spec, const CrossedElement& f, int n,
                                       int M, int L);

double schatten_norm(const SparseOperator& op, double p);

struct WeightedDirac {
  double W = 2.0;
  enum class Rule { EvenWordWeight, OddLift } rule = Rule::EvenWordWeight;
};

enum class Verdict { Summable, NotSummable, Undecided };

struct SummabilityReport {
  double partial_sum = 0;
  double tail_bound = 0;  // valid when summable
  Verdict verdict = Verdict::Undecided;
  std::vector<double> partial_by_depth;  // cumulative sums at levels 0..depth
  double growth_lo = 0, growth_hi = 0;   // observed level growth ratios
};

// Partial sum of Tr(1+D^2)^{-p/2} over the truncation with the geometric
// verdict: summable when W^p exceeds every observed growth ratio,
// not-summableved when W^p is at or below the smallest one.
SummabilityReport summability_report(const WeightedDirac& d, const std::vector<long long>& counts,
                                     double p, int depth);

// Sign pattern of the diagonal lift D (eigenvalue +W^{|m|+|mu|} exactly on
// the P_N range) reproduces 2P_N - 1 on the truncation.
bool unbounded_lift_check(const OddCycleSpec& spec, double W, int M, int L);

struct SynthesisDescription {
  std::optional<Word> base_word;  // restriction of the leading component
  std::vector<ChoicePair> components;
  std::vector<Word> overflow_words;  // |I(chi_mu)| >= |mu| diagnostics
};

// Realize a refinement-consistent index target exactly on all cylinders up
// to level L: a restricted component carries I(1_X), elementary
// point-evaluation pairs carry the rest.
SynthesisDescription synthesize_index(const IndexHom& I, int L);

long long description_pairing(const SynthesisDescription& desc, const Word& mu);
bool verify_synthesis(const SynthesisDescription& desc, const IndexHom& I, int L);

}  // namespace cantor
