#include "cantor/crossed.hpp"

#include <algorithm>
#include <cmath>

namespace cantor {

CovariantImage covariant_apply(const OdometerSpec& spec, const CrossedElement& g,
                               const ChoiceFunction& tau, int m, const Word& mu, int window) {
  if (std::abs(m) > window) throw Error("basis label outside the truncation window");
  if (!tau.language().admissible(mu)) throw Error("inadmissible word");
  const Point x = tau.eval(mu);
  CovariantImage out;
  for (const auto& [k, coeff] : g.terms) {
    const int target = m + k;
    const auto amp =
        static_cast<double>(pi_hat_coefficient(std::optional<OdometerSpec>(spec), coeff, target, x));
    if (amp == 0.0) continue;
    if (std::abs(target) > window) {
      out.overflow = true;
      continue;
    }
    out.components.push_back({target, amp});
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

HSWZTriple::HSWZTriple(ChoicePair pair_, double W_, double p_, OdometerSpec odometer_)
    : pair(std::move(pair_)), W(W_), p(p_), odometer(std::move(odometer_)) {
  if (W <= 1.0) throw Error("HSWZ weight W must exceed 1");
  if (p <= 0.0) throw Error("base summability order must be positive");
  if (std::pow(W, p) <= alphabet_bound())
    throw Error("declared base order needs W^p > the digit bound");
  if (!(pair.plus.language() == odometer.language()))
    throw Error("choice pair language must be the odometer digit space");
}

int HSWZTriple::alphabet_bound() const {
  int b = 2;
  for (int d : odometer.pre) b = std::max(b, d);
  for (int d : odometer.per) b = std::max(b, d);
  return b;
}

std::vector<double> hswz_spectrum(const HSWZTriple& t, int n_max, int m_max, int word_level) {
  if (n_max < 0 || m_max < 0 || word_level < 0) throw Error("bounds must be nonnegative");
  std::vector<double> eig;
  const Language lang = t.odometer.language();
  for (int level = 0; level <= word_level; ++level) {
    const long long words = lang.count_level(level);
    for (int n = 0; n <= n_max; ++n)
      for (int m = -m_max; m <= m_max; ++m) {
        const double lambda =
            std::pow(t.W, 2.0 * (n + level)) + static_cast<double>(m) * static_cast<double>(m);
        for (long long w = 0; w < words; ++w) {
          eig.push_back(lambda);
          eig.push_back(lambda);
        }
      }
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

HswzSummabilityReport hswz_summability(const HSWZTriple& t, double q, int depth) {
  if (depth < 1) throw Error("depth must be >= 1");
  if (q <= 0) throw Error("summability exponent must be positive");
  HswzSummabilityReport rep;
  const Language lang = t.odometer.language();
  double sum = 0, comp = 0;
  for (int level = 0; level <= depth; ++level) {
    const double words = static_cast<double>(lang.count_level(level));
    for (int n = 0; n <= depth; ++n) {
      const double w2 = std::pow(t.W, 2.0 * (n + level));
      for (int m = -depth; m <= depth; ++m) {
        const double term =
            2.0 * words * std::pow(1.0 + w2 + static_cast<double>(m) * m, -q / 2.0);
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
      }
    }
  }
  rep.partial_sum = sum;
  const double eps = 1e-9;
  if (std::abs(q - (t.p + 1.0)) <= eps) {
    rep.verdict = Verdict::Undecided;
    rep.boundary = true;  // the paper's bound is strict: q > p + 1
    return rep;
  }
  if (q > t.p + 1.0) {
    rep.verdict = Verdict::Summable;
    // (1+a+b)^{-q/2} <= (1+a)^{-qw/2} (1+b)^{-qm/2} for qw + qm = q, so the
    // total is at most a word/n geometric series times an m-series.
    const double delta = q - t.p - 1.0;
    const double qw = t.p + delta / 2.0;
    const double qm = 1.0 + delta / 2.0;
    const double ratio = static_cast<double>(t.alphabet_bound()) / std::pow(t.W, qw);
    double words_part = 0;
    if (ratio < 1.0)
      words_part = (1.0 / (1.0 - std::pow(t.W, -qw))) * (1.0 / (1.0 - ratio));
    const double m_part = 1.0 + 2.0 * (1.0 + 1.0 / (qm - 1.0));
    const double product_bound = 2.0 * words_part * m_part;
    rep.tail_estimate = std::max(0.0, product_bound - rep.partial_sum);
  } else {
    rep.verdict = Verdict::NotSummable;
  }
  return rep;
}

namespace {

// Membership difference of the pair on the proper prefixes of w; the
// support of the n = 0 fiber of the HSWZ commutator.
std::vector<std::pair<int, int>> prefix_differences(const ChoicePair& pair, const Word& w) {
  std::vector<std::pair<int, int>> out;  // (|nu|, delta)
  for (const auto& nu : proper_prefixes(w)) {
    const int dp = cylinder_contains(pair.plus.eval(nu), w) ? 1 : 0;
    const int dm = cylinder_contains(pair.minus.eval(nu), w) ? 1 : 0;
    if (dp != dm) out.push_back({static_cast<int>(nu.size()), dp - dm});
  }
  return out;
}

}  // namespace

DecayReport hswz_commutator_decay(const HSWZTriple& t, const Word& mu, long long m_lo,
                                  long long m_hi) {
  if (m_lo > m_hi) throw Error("empty m range");
  const Language lang = t.odometer.language();
  if (!lang.admissible(mu)) throw Error("inadmissible word");
  DecayReport rep;
  const long long period = t.odometer.level_product(static_cast<int>(mu.size()));
  double fitted = 0;
  for (long long m = 0; m < period; ++m) {
    const Word w = word_shift(t.odometer, mu, -m);
    for (const auto& [len, delta] : prefix_differences(t.pair, w))
      fitted = std::max(fitted, std::pow(t.W, len));
  }
  rep.fitted_m = fitted;
  rep.bound_holds = true;
  for (long long m = m_lo; m <= m_hi; ++m) {
    DecayRow row;
    row.m = m;
    const Word w = word_shift(t.odometer, mu, -m);
    const auto diffs = prefix_differences(t.pair, w);
    double norm = 0;
    long long rank_diff = 0;
    for (const auto& [len, delta] : diffs) {
      rank_diff += delta;
      const double w_pow = std::pow(t.W, len);
      norm = std::max(norm, w_pow / std::sqrt(1.0 + static_cast<double>(m) * m + w_pow * w_pow));
    }
    row.rank_difference = rank_diff;
    row.norm = norm;
    row.bound = fitted / std::sqrt(1.0 + static_cast<double>(m) * m);
    if (row.norm > row.bound + 1e-12) rep.bound_holds = false;
    rep.rows.push_back(row);
  }
  return rep;
}

double equicontinuity_sup_check(const ChoicePair& pair, const OdometerSpec& spec,
                                const std::vector<Word>& words, long long m_lo, long long m_hi,
                                double W) {
  if (W <= 1.0) throw Error("weight W must exceed 1");
  double sup = 0;
  for (const auto& mu : words) {
    if (!spec.language().admissible(mu)) throw Error("inadmissible word");
    for (long long m = m_lo; m <= m_hi; ++m) {
      const Word w = word_shift(spec, mu, -m);
      for (const auto& [len, delta] : prefix_differences(pair, w))
        sup = std::max(sup, std::pow(W, len));
    }
  }
  return sup;
}

}  // namespace cantor
