#include "cantor/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cantor {

namespace {

struct Kahan {
  double s = 0, c = 0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

long long nullity(const Mat& a, double tol = 1e-9) {
  if (a.cols() == 0) return 0;
  if (a.rows() == 0) return a.cols();
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  long long rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * scale) ++rank;
  return a.cols() - rank;
}

int parity_sign(long long e) { return ((e % 2) + 2) % 2 == 0 ? 1 : -1; }

}  // namespace

ChoiceFunction::ChoiceFunction(Language lang, Rule rule, Word tail)
    : lang_(std::move(lang)), rule_(rule), tail_(std::move(tail)) {
  if (rule_ == Rule::ConstantTail && tail_.empty())
    throw Error("constant-tail rule needs a nonempty tail word");
}

ChoiceFunction ChoiceFunction::with_override(const Word& mu, const Point& p) const {
  if (!lang_.admissible(mu)) throw Error("override word inadmissible");
  if (!cylinder_contains(p, mu)) throw Error("override point violates the cylinder condition");
  if (!lang_.contains_point(p)) throw Error("override point leaves the language");
  ChoiceFunction out = *this;
  out.overrides_.insert_or_assign(mu, p);
  return out;
}

Point ChoiceFunction::eval(const Word& mu) const {
  auto it = overrides_.find(mu);
  if (it != overrides_.end()) return it->second;
  if (!lang_.admissible(mu)) throw Error("inadmissible word");
  if (rule_ == Rule::MinTail) return lang_.min_tail(mu);
  Point p(mu, tail_);
  if (!lang_.contains_point(p))
    throw Error("constant-tail rule produces an inadmissible point");
  return p;
}

ChoicePair::ChoicePair(ChoiceFunction plus_, ChoiceFunction minus_,
                       std::optional<Word> restriction_)
    : plus(std::move(plus_)), minus(std::move(minus_)), restriction(std::move(restriction_)) {
  if (!(plus.language() == minus.language())) throw Error("choice pair language mismatch");
  if (restriction && !plus.language().admissible(*restriction))
    throw Error("restriction word inadmissible");
}

namespace {

// Membership of tau_side(nu) in C_mu, intersected with the restriction.
bool pair_member(const ChoicePair& pair, bool plus_side, const Word& nu, const Word& mu) {
  const Point p = (plus_side ? pair.plus : pair.minus).eval(nu);
  if (!cylinder_contains(p, mu)) return false;
  if (pair.restriction && !cylinder_contains(p, *pair.restriction)) return false;
  return true;
}

std::vector<Word> words_up_to(const Language& lang, int top) {
  std::vector<Word> out;
  for (int n = 0; n <= top; ++n)
    for (const auto& w : lang.level_words(n)) out.push_back(w);
  return out;
}

}  // namespace

long long even_bp_pairing(const ChoicePair& pair, const Word& mu) {
  const Language& lang = pair.plus.language();
  if (!lang.admissible(mu)) throw Error("inadmissible word");
  long long count = 0;
  if (!pair.restriction) {
    for (const auto& nu : proper_prefixes(mu)) {
      const bool p_in = pair_member(pair, true, nu, mu);
      const bool m_in = pair_member(pair, false, nu, mu);
      count += (p_in && !m_in) ? 1 : 0;
      count -= (m_in && !p_in) ? 1 : 0;
    }
    return count;
  }
  // Memberships of longer words are decided by prefix comparison alone and
  // cancel, so the sum over all words truncates exactly.
  const int top = std::max(mu.size(), pair.restriction->size());
  for (const auto& nu : words_up_to(lang, top - 1)) {
    const bool p_in = pair_member(pair, true, nu, mu);
    const bool m_in = pair_member(pair, false, nu, mu);
    count += (p_in && !m_in) ? 1 : 0;
    count -= (m_in && !p_in) ? 1 : 0;
  }
  return count;
}

long long even_rank_pairing(const ChoicePair& pair, const Word& mu, int L) {
  const Language& lang = pair.plus.language();
  if (!lang.admissible(mu)) throw Error("inadmissible word");
  if (L < static_cast<int>(mu.size())) throw Error("truncation level below |mu|");
  long long plus_rank = 0, minus_rank = 0;
  for (const auto& nu : words_up_to(lang, L)) {
    const bool p_in = pair_member(pair, true, nu, mu);
    const bool m_in = pair_member(pair, false, nu, mu);
    if (p_in && !m_in) ++plus_rank;
    if (m_in && !p_in) ++minus_rank;
  }
  return plus_rank - minus_rank;
}

namespace {

std::complex<double> even_trace_formula_raw(const ChoicePair& pair, const IndicatorCombination& f,
                                            int n, int L) {
  if (n < 2 || n % 2) throw Error("even trace formula needs even order n >= 2");
  const Language& lang = pair.plus.language();
  int top = std::max(L, f.max_level());
  if (pair.restriction) top = std::max<int>(top, pair.restriction->size());
  if (!f.is_projection(lang, top)) throw Error("trace formula input must be a projection");

  auto rep_value = [&](bool plus_side, const Word& nu) -> double {
    const Point p = (plus_side ? pair.plus : pair.minus).eval(nu);
    if (pair.restriction && !cylinder_contains(p, *pair.restriction)) return 0.0;
    return static_cast<double>(f.value_at(p));
  };

  // rho(f) is diagonal over words with a 2x2 spin structure, so the trace
  // splits into per-word 2x2 blocks with F the swap and gamma = diag(1,-1).
  const Eigen::Matrix2cd F2 = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  const Eigen::Matrix2cd G2 = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  Kahan re, im;
  for (const auto& nu : words_up_to(lang, top)) {
    Eigen::Matrix2cd R2 = Eigen::Matrix2cd::Zero();
    R2(0, 0) = rep_value(true, nu);
    R2(1, 1) = rep_value(false, nu);
    const Eigen::Matrix2cd C2 = F2 * R2 - R2 * F2;
    Eigen::Matrix2cd P2 = Eigen::Matrix2cd::Identity();
    for (int i = 0; i < n; ++i) P2 = P2 * C2;
    const std::complex<double> tr = (G2 * R2 * P2).trace();
    re.add(tr.real());
    im.add(tr.imag());
  }
  const double sign = parity_sign(static_cast<long long>(n) * (n - 1) / 2);
  return std::complex<double>(sign * re.s, sign * im.s);
}

double even_calibration_sign() {
  static const double sign = [] {
    const Language lang = Language::full_shift(Alphabet::binary());
    const ChoicePair pair(ChoiceFunction(lang, ChoiceFunction::Rule::ConstantTail, Word({0})),
                          ChoiceFunction(lang, ChoiceFunction::Rule::ConstantTail, Word({1})));
    const Word mu({0});
    const long long count = even_bp_pairing(pair, mu);
    const auto raw = even_trace_formula_raw(pair, IndicatorCombination::cylinder(mu), 2, 2);
    const long long traced = std::llround(raw.real());
    if (std::abs(raw.real() - traced) > 1e-9 || std::llabs(traced) != 1 || std::llabs(count) != 1)
      throw Error("even trace calibration failed");
    return count == traced ? 1.0 : -1.0;
  }();
  return sign;
}

}  // namespace

std::complex<double> even_trace_formula(const ChoicePair& pair, const IndicatorCombination& f,
                                        int n, int L) {
  return even_calibration_sign() * even_trace_formula_raw(pair, f, n, L);
}

CrossedElement CrossedElement::identity() {
  CrossedElement e;
  e.terms[0] = IndicatorCombination::one();
  return e;
}

CrossedElement CrossedElement::u_power(int k) {
  CrossedElement e;
  e.terms[k] = IndicatorCombination::one();
  return e;
}

bool CrossedElement::scalar() const {
  for (const auto& [k, a] : terms)
    for (const auto& [w, c] : a.terms())
      if (!w.empty()) return false;
  return true;
}

int CrossedElement::min_power() const {
  return terms.empty() ? 0 : terms.begin()->first;
}

int CrossedElement::max_power() const {
  return terms.empty() ? 0 : terms.rbegin()->first;
}

CrossedElement CrossedElement::adjoint(const std::optional<OdometerSpec>& dynamics) const {
  // (a_k u^k)^* = phi^k(a_k) u^{-k}; integer coefficients are self-conjugate.
  CrossedElement out;
  for (const auto& [k, a] : terms) {
    IndicatorCombination shifted;
    for (const auto& [w, c] : a.terms()) {
      if (w.empty() || k == 0) {
        shifted.add(w, c);
      } else {
        if (!dynamics) throw Error("crossed adjoint with non-constant coefficients needs an odometer");
        shifted.add(word_shift(*dynamics, w, k), c);
      }
    }
    if (!shifted.zero()) out.terms[-k] = shifted;
  }
  return out;
}

long long pi_hat_coefficient(const std::optional<OdometerSpec>& dynamics,
                             const IndicatorCombination& a, long long j, const Point& x) {
  long long v = 0;
  for (const auto& [w, c] : a.terms()) {
    if (w.empty()) {
      v += c;
      continue;
    }
    if (!dynamics) throw Error("crossed element with non-constant coefficients needs an odometer");
    if (cylinder_contains(x, word_shift(*dynamics, w, -j))) v += c;
  }
  return v;
}

OddCycleSpec::OddCycleSpec(ChoiceFunction tau_, std::vector<Word> N_, Side side_,
                           std::optional<OdometerSpec> dynamics_)
    : tau(std::move(tau_)), side(side_), dynamics(std::move(dynamics_)) {
  std::sort(N_.begin(), N_.end());
  const auto last = std::unique(N_.begin(), N_.end());
  had_duplicates = last != N_.end();
  N_.erase(last, N_.end());
  for (const auto& w : N_)
    if (!tau.language().admissible(w)) throw Error("N word inadmissible");
  N = std::move(N_);
}

long long odd_pairing(const OddCycleSpec& spec, int k) {
  const long long n = static_cast<long long>(spec.N.size());
  return spec.side == Side::Positive ? -k * n : k * n;
}

bool BasisLabel::operator<(const BasisLabel& o) const {
  if (m != o.m) return m < o.m;
  if (!(word == o.word)) return word < o.word;
  return spin < o.spin;
}

Mat SparseOperator::dense() const {
  Mat out = Mat::Zero(basis.size(), basis.size());
  for (const auto& [rc, v] : entries) out(rc.first, rc.second) = v;
  return out;
}

long long SparseOperator::rank(double tol) const {
  std::set<int> rows, cols;
  for (const auto& [rc, v] : entries) {
    if (std::abs(v) == 0.0) continue;
    rows.insert(rc.first);
    cols.insert(rc.second);
  }
  if (rows.empty()) return 0;
  Mat sub(rows.size(), cols.size());
  sub.setZero();
  std::map<int, int> rix, cix;
  int i = 0;
  for (int r : rows) rix[r] = i++;
  i = 0;
  for (int c : cols) cix[c] = i++;
  for (const auto& [rc, v] : entries) {
    if (std::abs(v) == 0.0) continue;
    sub(rix[rc.first], cix[rc.second]) = v;
  }
  Eigen::JacobiSVD<Mat> svd(sub);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  long long rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol * scale) ++rank;
  return rank;
}

namespace {

bool side_in(Side side, int m) { return side == Side::Positive ? m > 0 : m <= 0; }

// Fiber matrix of P pi^(f) P over one word of N, with the genuine cut at
// the projection boundary and the far edge padded by the bandwidth so no
// artificial kernel or cokernel appears at the window edge.
Mat fiber_matrix(const OddCycleSpec& spec, const CrossedElement& f, const Point& x, int M) {
  const int kmax = std::max(0, f.max_power());
  const int kmin = std::min(0, f.min_power());
  std::vector<int> cols, rows;
  if (spec.side == Side::Positive) {
    for (int m = 1; m <= M; ++m) cols.push_back(m);
    for (int m = 1; m <= M + kmax; ++m) rows.push_back(m);
  } else {
    for (int m = -M; m <= 0; ++m) cols.push_back(m);
    for (int m = -M + kmin; m <= 0; ++m) rows.push_back(m);
  }
  std::map<int, int> rix;
  for (size_t i = 0; i < rows.size(); ++i) rix[rows[i]] = static_cast<int>(i);
  Mat a = Mat::Zero(rows.size(), cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    const int m = cols[c];
    for (const auto& [k, coeff] : f.terms) {
      const int target = m + k;
      auto it = rix.find(target);
      if (it == rix.end()) continue;  // outside the projection: genuine cut
      a(it->second, c) += static_cast<double>(pi_hat_coefficient(spec.dynamics, coeff, target, x));
    }
  }
  return a;
}

void check_unitary_on_truncation(const OddCycleSpec& spec, const CrossedElement& f, int M, int L) {
  const int K = std::max({1, std::abs(f.min_power()), std::abs(f.max_power())});
  const int Mu = M + K + 2;
  for (const auto& mu : words_up_to(spec.tau.language(), L)) {
    const Point x = spec.tau.eval(mu);
    const int dim = 2 * Mu + 1;
    Mat b = Mat::Zero(dim, dim);
    for (int m = -Mu; m <= Mu; ++m)
      for (const auto& [k, coeff] : f.terms) {
        const int target = m + k;
        if (target < -Mu || target > Mu) continue;
        b(target + Mu, m + Mu) +=
            static_cast<double>(pi_hat_coefficient(spec.dynamics, coeff, target, x));
      }
    const Mat g = b.adjoint() * b;
    for (int m = -Mu + K; m <= Mu - K; ++m)
      for (int r = -Mu + K; r <= Mu - K; ++r) {
        const std::complex<double> want = (m == r) ? 1.0 : 0.0;
        if (std::abs(g(r + Mu, m + Mu) - want) > 1e-9)
          throw Error("crossed element is not unitary on the truncation");
      }
  }
}

long long odd_index_at(const OddCycleSpec& spec, const CrossedElement& f, int M) {
  const auto fstar = f.adjoint(spec.dynamics);
  long long index = 0;
  for (const auto& mu : spec.N) {
    const Point x = spec.tau.eval(mu);
    index += nullity(fiber_matrix(spec, f, x, M));
    index -= nullity(fiber_matrix(spec, fstar, x, M));
  }
  return index;
}

}  // namespace

long long odd_fredholm_index(const OddCycleSpec& spec, const CrossedElement& f, int M, int L) {
  const int K = std::max(std::abs(f.min_power()), std::abs(f.max_power()));
  if (M <= K + 1) throw Error("window M must exceed the maximal power plus 1");
  for (const auto& mu : spec.N)
    if (static_cast<int>(mu.size()) > L) throw Error("N word above the truncation word level");
  check_unitary_on_truncation(spec, f, M, L);
  const long long at_m = odd_index_at(spec, f, M);
  const long long at_m2 = odd_index_at(spec, f, M + 2);
  if (at_m != at_m2)
    throw Error("window too small: index did not stabilize across M and M+2");
  return at_m;
}

SparseOperator odd_commutator(const OddCycleSpec& spec, const CrossedElement& g, int M, int L) {
  const int kmax = std::max(0, g.max_power());
  const int kmin = std::min(0, g.min_power());
  const int reach = std::max(kmax, -kmin);
  SparseOperator op;
  const auto words = words_up_to(spec.tau.language(), L);
  std::map<std::pair<int, Word>, int> index;
  for (int m = -M - reach; m <= M + reach; ++m)
    for (const auto& w : words) {
      index[{m, w}] = static_cast<int>(op.basis.size());
      op.basis.push_back(BasisLabel{m, w, 0});
    }
  const std::set<Word> in_n(spec.N.begin(), spec.N.end());
  for (int m = -M; m <= M; ++m)
    for (const auto& w : words) {
      if (!in_n.count(w)) continue;  // P_N is diagonal: other fibers commute
      const Point x = spec.tau.eval(w);
      const int col = index.at({m, w});
      const double s_col = side_in(spec.side, m) ? 1.0 : -1.0;
      for (const auto& [k, coeff] : g.terms) {
        const int target = m + k;
        const double s_row = side_in(spec.side, target) ? 1.0 : -1.0;
        if (s_row == s_col) continue;
        const auto amp = static_cast<double>(pi_hat_coefficient(spec.dynamics, coeff, target, x));
        if (amp == 0.0) continue;
        const int row = index.at({target, w});
        op.entries[{row, col}] += (s_row - s_col) * amp;
      }
    }
  const long long bound =
      g.zero() ? 0
               : static_cast<long long>(g.max_power() - g.min_power() + 1) *
                     static_cast<long long>(spec.N.size());
  if (op.rank() > bound) throw Error("commutator rank bound violated");
  return op;
}

namespace {

std::complex<double> odd_trace_formula_raw(const OddCycleSpec& spec, const CrossedElement& f,
                                           int n, int M, int L) {
  if (n < 1 || n % 2 == 0) throw Error("odd trace formula needs odd order n >= 1");
  for (const auto& mu : spec.N)
    if (static_cast<int>(mu.size()) > L) throw Error("N word above the truncation word level");
  const auto fstar = f.adjoint(spec.dynamics);
  const int K = std::max({1, std::abs(f.min_power()), std::abs(f.max_power())});
  // All trace terms contain a commutator factor, so they live within
  // bandwidth reach of the projection cut; pad the window accordingly.
  const int W = std::max(M, (n + 1) * (K + 1) + 2);
  if (spec.N.empty()) return 0.0;
  const int dim_m = 2 * W + 1;
  const int dim = dim_m * static_cast<int>(spec.N.size());
  auto at = [&](int m, size_t which) {
    return static_cast<int>(which) * dim_m + (m + W);
  };
  Mat rf = Mat::Zero(dim, dim), rfs = Mat::Zero(dim, dim);
  Eigen::VectorXd sign(dim);
  for (size_t q = 0; q < spec.N.size(); ++q) {
    const Point x = spec.tau.eval(spec.N[q]);
    for (int m = -W; m <= W; ++m) {
      sign(at(m, q)) = side_in(spec.side, m) ? 1.0 : -1.0;
      for (const auto& [k, coeff] : f.terms) {
        if (m + k < -W || m + k > W) continue;
        rf(at(m + k, q), at(m, q)) +=
            static_cast<double>(pi_hat_coefficient(spec.dynamics, coeff, m + k, x));
      }
      for (const auto& [k, coeff] : fstar.terms) {
        if (m + k < -W || m + k > W) continue;
        rfs(at(m + k, q), at(m, q)) +=
            static_cast<double>(pi_hat_coefficient(spec.dynamics, coeff, m + k, x));
      }
    }
  }
  Mat F = sign.asDiagonal();
  const Mat C = F * rf - rf * F;
  const Mat Cs = F * rfs - rfs * F;
  Mat X = rfs;
  for (int i = 0; i < (n - 1) / 2; ++i) X = X * (C * Cs);
  X = X * C;
  Kahan re, im;
  for (int i = 0; i < dim; ++i) {
    re.add(X(i, i).real());
    im.add(X(i, i).imag());
  }
  const double constant = parity_sign((n - 1) / 2 - 1) / std::ldexp(1.0, n);
  return {constant * re.s, constant * im.s};
}

double odd_calibration_sign() {
  static const double sign = [] {
    const Language lang = Language::full_shift(Alphabet::binary());
    OddCycleSpec spec(ChoiceFunction(lang, ChoiceFunction::Rule::MinTail), {Word({0})},
                      Side::Positive);
    const auto f = CrossedElement::u_power(1);
    const long long index = odd_fredholm_index(spec, f, 3, 1);
    const auto raw = odd_trace_formula_raw(spec, f, 1, 3, 1);
    const long long traced = std::llround(raw.real());
    if (std::abs(raw.real() - traced) > 1e-9 || std::llabs(traced) != 1 || std::llabs(index) != 1)
      throw Error("odd trace calibration failed");
    return index == traced ? 1.0 : -1.0;
  }();
  return sign;
}

}  // namespace

std::complex<double> odd_trace_formula(const OddCycleSpec& spec, const CrossedElement& f, int n,
                                       int M, int L) {
  return odd_calibration_sign() * odd_trace_formula_raw(spec, f, n, M, L);
}

double schatten_norm(const SparseOperator& op, double p) {
  if (p <= 0) throw Error("Schatten exponent must be positive");
  std::set<int> rows, cols;
  for (const auto& [rc, v] : op.entries) {
    if (std::abs(v) == 0.0) continue;
    rows.insert(rc.first);
    cols.insert(rc.second);
  }
  if (rows.empty()) return 0.0;
  Mat sub = Mat::Zero(rows.size(), cols.size());
  std::map<int, int> rix, cix;
  int i = 0;
  for (int r : rows) rix[r] = i++;
  i = 0;
  for (int c : cols) cix[c] = i++;
  for (const auto& [rc, v] : op.entries) {
    if (std::abs(v) == 0.0) continue;
    sub(rix[rc.first], cix[rc.second]) = v;
  }
  Eigen::JacobiSVD<Mat> svd(sub);
  Kahan sum;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    sum.add(std::pow(svd.singularValues()(k), p));
  return std::pow(sum.s, 1.0 / p);
}

SummabilityReport summability_report(const WeightedDirac& d, const std::vector<long long>& counts,
                                     double p, int depth) {
  if (depth < 1) throw Error("depth must be >= 1");
  if (p <= 0) throw Error("summability exponent must be positive");
  if (static_cast<int>(counts.size()) < depth + 1)
    throw Error("need word counts for levels 0..depth");
  if (d.W <= 1.0) throw Error("Dirac weight W must exceed 1");
  SummabilityReport rep;
  Kahan sum;
  for (int j = 0; j <= depth; ++j) {
    double mult = 0;
    if (d.rule == WeightedDirac::Rule::EvenWordWeight) {
      mult = static_cast<double>(counts[j]);
    } else {
      for (int i = 0; i <= j; ++i) mult += static_cast<double>(counts[i]);
    }
    sum.add(mult * std::pow(1.0 + std::pow(d.W, 2.0 * j), -p / 2.0));
    rep.partial_by_depth.push_back(sum.s);
  }
  rep.partial_sum = sum.s;
  double r_lo = 0, r_hi = 0;
  for (int n = 1; n <= depth; ++n) {
    const double r = static_cast<double>(counts[n]) / static_cast<double>(counts[n - 1]);
    r_lo = (n == 1) ? r : std::min(r_lo, r);
    r_hi = std::max(r_hi, r);
  }
  rep.growth_lo = r_lo;
  rep.growth_hi = r_hi;
  const double wp = std::pow(d.W, p);
  const double eps = 1e-9;
  if (wp > r_hi + eps) {
    rep.verdict = Verdict::Summable;
    const double q = r_hi / wp;
    const double head = std::pow(d.W, -p * depth);
    if (d.rule == WeightedDirac::Rule::EvenWordWeight) {
      rep.tail_bound = static_cast<double>(counts[depth]) * head * q / (1.0 - q);
    } else {
      double cum = 0;
      for (int i = 0; i <= depth; ++i) cum += static_cast<double>(counts[i]);
      const double x = 1.0 / wp;
      rep.tail_bound = head * (cum * x / (1.0 - x) +
                               static_cast<double>(counts[depth]) * q / ((1.0 - q) * (1.0 - q)));
    }
  } else if (wp <= r_lo + eps) {
    rep.verdict = Verdict::NotSummable;
  } else {
    rep.verdict = Verdict::Undecided;
  }
  return rep;
}

bool unbounded_lift_check(const OddCycleSpec& spec, double W, int M, int L) {
  if (W <= 1.0) throw Error("lift weight W must exceed 1");
  const std::set<Word> in_n(spec.N.begin(), spec.N.end());
  for (int m = -M; m <= M; ++m)
    for (const auto& w : words_up_to(spec.tau.language(), L)) {
      const bool in_p = side_in(spec.side, m) && in_n.count(w) > 0;
      // D has eigenvalue +W^{|m|+|mu|} exactly on the P_N range.
      const double eig = (in_p ? 1.0 : -1.0) * std::pow(W, std::abs(m) + static_cast<double>(w.size()));
      const int lift_sign = eig > 0 ? 1 : -1;
      const int f_sign = in_p ? 1 : -1;
      if (lift_sign != f_sign) return false;
    }
  return true;
}

namespace {

// Admissible length-`len` extension of nu other than avoid, if any.
std::optional<Word> extension_avoiding(const Language& lang, const Word& nu, int len,
                                       const Word& avoid) {
  std::vector<Word> frontier{nu};
  while (!frontier.empty() && static_cast<int>(frontier.front().size()) < len) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (Symbol s : lang.extensions(w)) next.push_back(w.append(s));
    frontier = std::move(next);
  }
  for (const auto& w : frontier)
    if (!(w == avoid)) return w;
  return std::nullopt;
}

}  // namespace

SynthesisDescription synthesize_index(const IndexHom& I, int L) {
  const Language& lang = I.language();
  if (L > I.level()) throw Error("synthesis level exceeds the target's level");
  if (!index_hom_validate(I, L)) throw Error("target index hom is not refinement-consistent");
  SynthesisDescription desc;
  for (int n = 1; n <= L; ++n)
    for (const auto& w : lang.level_words(n))
      if (std::llabs(I.value(w)) >= n) desc.overflow_words.push_back(w);

  std::map<Word, long long> t;
  for (const auto& w : lang.level_words(L)) t[w] = I.value(w);

  const long long k = I.value(Word{});
  if (k != 0) {
    const int len = static_cast<int>(std::llabs(k)) + 1;
    std::optional<Word> base;
    std::vector<std::pair<Word, Word>> free_prefixes;  // (prefix, witness != base)
    for (const auto& nu0 : lang.level_words(len)) {
      std::vector<std::pair<Word, Word>> found;
      for (const auto& nu : proper_prefixes(nu0))
        if (auto wit = extension_avoiding(lang, nu, len, nu0)) found.push_back({nu, *wit});
      if (static_cast<long long>(found.size()) >= std::llabs(k)) {
        base = nu0;
        free_prefixes = std::move(found);
        break;
      }
    }
    if (!base)
      throw Error("target unrealizable at this level: no base word of length " +
                  std::to_string(len) + " has enough branching prefixes");
    const Point y0 = lang.min_tail(*base);
    ChoiceFunction tplus(lang, ChoiceFunction::Rule::MinTail);
    ChoiceFunction tminus(lang, ChoiceFunction::Rule::MinTail);
    for (long long i = 0; i < std::llabs(k); ++i) {
      const auto& [nu, wit] = free_prefixes[i];
      const Point out = lang.min_tail(wit);
      if (k > 0) {
        tplus = tplus.with_override(nu, y0);
        tminus = tminus.with_override(nu, out);
      } else {
        tplus = tplus.with_override(nu, out);
        tminus = tminus.with_override(nu, y0);
      }
    }
    desc.base_word = *base;
    desc.components.push_back(ChoicePair(tplus, tminus, *base));
    t[y0.prefix(L)] -= k;  // the component contributes k * ev_{y0}
  }

  // Elementary pairs: each moves one unit from a positive leaf to a
  // negative leaf via point evaluations overridden at the empty word.
  for (;;) {
    auto pos = t.end(), neg = t.end();
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (it->second > 0 && pos == t.end()) pos = it;
      if (it->second < 0 && neg == t.end()) neg = it;
    }
    if (pos == t.end() && neg == t.end()) break;
    if (pos == t.end() || neg == t.end())
      throw Error("target inconsistent: leaf values do not sum to I(1_X)");
    const long long c = std::min(pos->second, -neg->second);
    const Point up = lang.min_tail(pos->first);
    const Point down = lang.min_tail(neg->first);
    for (long long i = 0; i < c; ++i) {
      ChoiceFunction tplus =
          ChoiceFunction(lang, ChoiceFunction::Rule::MinTail).with_override(Word{}, up);
      ChoiceFunction tminus =
          ChoiceFunction(lang, ChoiceFunction::Rule::MinTail).with_override(Word{}, down);
      desc.components.push_back(ChoicePair(tplus, tminus));
    }
    pos->second -= c;
    neg->second += c;
  }
  return desc;
}

long long description_pairing(const SynthesisDescription& desc, const Word& mu) {
  long long sum = 0;
  for (const auto& pair : desc.components) sum += even_bp_pairing(pair, mu);
  return sum;
}

bool verify_synthesis(const SynthesisDescription& desc, const IndexHom& I, int L) {
  const Language& lang = I.language();
  for (int n = 0; n <= L; ++n)
    for (const auto& w : lang.level_words(n))
      if (description_pairing(desc, w) != I.value(w)) return false;
  return true;
}

}  // namespace cantor
