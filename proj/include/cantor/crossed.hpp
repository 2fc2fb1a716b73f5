#pragma once

// Covariant representations of C(X) x| Z on l^2(Z) (x) H for odometers and
// the HSWZ extension of even modules to odd triples: spectrum enumeration,
// q-summability thresholds, and commutator-decay checks.

#include <complex>
#include <optional>
#include <vector>

#include "cantor/dynamics.hpp"
#include "cantor/fredholm.hpp"
#include "cantor/words.hpp"

namespace cantor {

// pi^(g)(e_m (x) delta_mu) summed over the terms of g; the coefficients are
// diagonal in mu, so the image lies in the same word fiber.
struct CovariantImage {
  std::vector<std::pair<int, double>> components;  // (m', amplitude)
  bool overflow = false;  // some component left the truncation window
};

CovariantImage covariant_apply(const OdometerSpec& spec, const CrossedElement& g,
                               const ChoiceFunction& tau, int m, const Word& mu, int window);

struct HSWZTriple {
  ChoicePair pair;
  double W;
  double p;  // declared base summability order; requires W^p > max digit
  OdometerSpec odometer;

  HSWZTriple(ChoicePair pair_, double W_, double p_, OdometerSpec odometer_);
  int alphabet_bound() const;  // largest digit of the odometer
};

// Sorted eigenvalues of the square of the extended operator over the
// truncation: W^{2(n+|mu|)} + m^2 with multiplicity 2.
std::vector<double> hswz_spectrum(const HSWZTriple& t, int n_max, int m_max, int word_level);

struct HswzSummabilityReport {
  double partial_sum = 0;
  double tail_estimate = 0;  // only when summable
  Verdict verdict = Verdict::Undecided;
  bool boundary = false;  // q == p + 1 within tolerance, excluded by the strict bound
};

HswzSummabilityReport hswz_summability(const HSWZTriple& t, double q, int depth);

struct DecayRow {
  long long m = 0;
  long long rank_difference = 0;  // sum of the per-word membership differences
  double norm = 0;                // bounded-transform commutator norm on the m-fiber
  double bound = 0;               // M / sqrt(1 + m^2)
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double fitted_m = 0;  // fitted over one cylinder orbit period
  bool bound_holds = false;
};

DecayReport hswz_commutator_decay(const HSWZTriple& t, const Word& mu, long long m_lo,
                                  long long m_hi);

// Max over the m-range and word set of the unbounded commutator norms
// ||[D, pi(phi^{-m} chi_mu)]||; finite by orbit periodicity.
double equicontinuity_sup_check(const ChoicePair& pair, const OdometerSpec& spec,
                                const std::vector<Word>& words, long long m_lo, long long m_hi,
                                double W = 2.718281828459045);

}  // namespace cantor
