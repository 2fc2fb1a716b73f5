#pragma once

// Dimension groups of Bratteli diagrams as direct limits of integer vectors
// under the transition matrices, odometer K0 as level-denominator rationals,
// and index homomorphisms K0 -> Z on cylinder generators.

#include <map>
#include <vector>

#include "cantor/dynamics.hpp"
#include "cantor/words.hpp"

namespace cantor {

struct DimensionGroupElement {
  int level = 0;
  std::vector<long long> vec;

  bool operator==(const DimensionGroupElement& o) const {
    return level == o.level && vec == o.vec;
  }
};

DimensionGroupElement k0_telescope(const BratteliDiagram& d, const DimensionGroupElement& e,
                                   int to_level);

enum class K0Compare { Equal, Distinct, Undecided };

// Telescopes both classes to a common level. When every transition matrix in
// the stationary chain is invertible over Z the answer is exact; otherwise
// the comparison telescopes `slack` further levels and reports Undecided if
// the vectors still differ (they might merge deeper in the limit).
K0Compare k0_compare(const BratteliDiagram& d, const DimensionGroupElement& a,
                     const DimensionGroupElement& b, int slack = 3);
bool k0_equal(const BratteliDiagram& d, const DimensionGroupElement& a,
              const DimensionGroupElement& b);

// k / (d_1 ... d_m) with minimal denominator level.
struct OdometerK0Element {
  long long numerator = 0;
  int denominator_level = 0;

  bool operator==(const OdometerK0Element& o) const {
    return numerator == o.numerator && denominator_level == o.denominator_level;
  }
};

OdometerK0Element odometer_k0_class(const OdometerSpec& spec, const IndicatorCombination& f);

// Index homomorphism K0(C(X)) -> Z recorded by its values on cylinder
// generators. Values may be supplied at mixed levels; every level-`level`
// word must be derivable (a word's value is its own entry if present, else
// the sum over its children).
class IndexHom {
 public:
  IndexHom(Language lang, int level, std::map<Word, long long> values);
  static IndexHom from_pairs(const Language& lang, int level,
                             const std::vector<std::pair<Word, long long>>& pairs);

  const Language& language() const { return lang_; }
  int level() const { return level_; }
  const std::map<Word, long long>& raw_values() const { return values_; }

  long long value(const Word& w) const;  // |w| <= level
  std::map<Word, long long> table(int at_level) const;

 private:
  Language lang_;
  int level_;
  std::map<Word, long long> values_;
};

// Refinement consistency of the supplied values at every level up to depth.
bool index_hom_validate(const IndexHom& I, int depth);
long long index_hom_eval(const IndexHom& I, const IndicatorCombination& f);

}  // namespace cantor
