#include "cantor/k_theory.hpp"

#include <algorithm>

namespace cantor {

namespace {

std::vector<long long> apply_transition(const std::vector<std::vector<long long>>& S,
                                        const std::vector<long long>& v) {
  std::vector<long long> out(S.size(), 0);
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += S[i][j] * v[j];
  return out;
}

// |det| == 1 test for small integer matrices via fraction-free elimination.
bool unimodular(const std::vector<std::vector<long long>>& S) {
  const size_t n = S.size();
  if (n == 0 || S[0].size() != n) return false;
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = static_cast<double>(S[i][j]);
  double det = 1.0;
  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
    if (m[pivot][c] == 0.0) return false;
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return std::abs(std::abs(det) - 1.0) < 1e-9;
}

}  // namespace

DimensionGroupElement k0_telescope(const BratteliDiagram& d, const DimensionGroupElement& e,
                                   int to_level) {
  if (to_level < e.level || to_level > d.depth()) throw Error("telescope level out of range");
  if (static_cast<int>(e.vec.size()) != d.vertex_counts.at(e.level))
    throw Error("vector dimension does not match level");
  DimensionGroupElement out{e.level, e.vec};
  for (int n = e.level + 1; n <= to_level; ++n) {
    out.vec = apply_transition(d.transitions[n - 1], out.vec);
    out.level = n;
  }
  return out;
}

K0Compare k0_compare(const BratteliDiagram& d, const DimensionGroupElement& a,
                     const DimensionGroupElement& b, int slack) {
  const int common = std::max(a.level, b.level);
  if (common > d.depth()) throw Error("telescope level out of range");
  auto ta = k0_telescope(d, a, common);
  auto tb = k0_telescope(d, b, common);
  if (ta.vec == tb.vec) return K0Compare::Equal;
  bool all_unimodular = true;
  for (int n = std::min(a.level, b.level) + 1; n <= common; ++n)
    all_unimodular = all_unimodular && unimodular(d.transitions[n - 1]);
  if (all_unimodular) {
    // Injective telescoping beyond the common level keeps them distinct,
    // provided the remaining chain is injective too; check what is there.
    bool tail_unimodular = true;
    for (int n = common + 1; n <= d.depth(); ++n)
      tail_unimodular = tail_unimodular && unimodular(d.transitions[n - 1]);
    if (tail_unimodular) return K0Compare::Distinct;
  }
  const int top = std::min(d.depth(), common + slack);
  for (int n = common + 1; n <= top; ++n) {
    ta = k0_telescope(d, ta, n);
    tb = k0_telescope(d, tb, n);
    if (ta.vec == tb.vec) return K0Compare::Equal;
  }
  return K0Compare::Undecided;
}

bool k0_equal(const BratteliDiagram& d, const DimensionGroupElement& a,
              const DimensionGroupElement& b) {
  return k0_compare(d, a, b) == K0Compare::Equal;
}

OdometerK0Element odometer_k0_class(const OdometerSpec& spec, const IndicatorCombination& f) {
  // chi_{C_mu} has class 1/(d_1...d_|mu|); bring all terms to the max level.
  const int m = f.max_level();
  long long num = 0;
  for (const auto& [w, c] : f.terms()) {
    long long scale = 1;
    for (int i = static_cast<int>(w.size()); i < m; ++i) scale *= spec.digit(i);
    num += c * scale;
  }
  OdometerK0Element out{num, m};
  while (out.denominator_level > 0) {
    const long long d = spec.digit(out.denominator_level - 1);
    if (out.numerator % d) break;
    out.numerator /= d;
    --out.denominator_level;
  }
  return out;
}

IndexHom::IndexHom(Language lang, int level, std::map<Word, long long> values)
    : lang_(std::move(lang)), level_(level), values_(std::move(values)) {
  if (level_ < 0) throw Error("index hom level must be >= 0");
  for (const auto& [w, v] : values_) {
    if (static_cast<int>(w.size()) > level_) throw Error("index hom word above declared level");
    if (!lang_.admissible(w)) throw Error("index hom word inadmissible");
  }
  for (const auto& w : lang_.level_words(level_)) value(w);  // every generator derivable
}

IndexHom IndexHom::from_pairs(const Language& lang, int level,
                              const std::vector<std::pair<Word, long long>>& pairs) {
  std::map<Word, long long> values;
  for (const auto& [w, v] : pairs) {
    if (values.count(w)) throw Error("duplicate index hom word");
    values[w] = v;
  }
  return IndexHom(lang, level, std::move(values));
}

long long IndexHom::value(const Word& w) const {
  if (static_cast<int>(w.size()) > level_) throw Error("word above index hom level");
  auto it = values_.find(w);
  if (it != values_.end()) return it->second;
  if (static_cast<int>(w.size()) == level_)
    throw Error("index hom missing value for a level generator");
  long long sum = 0;
  for (const auto& child : lang_.refine(w)) sum += value(child);
  return sum;
}

std::map<Word, long long> IndexHom::table(int at_level) const {
  std::map<Word, long long> out;
  for (const auto& w : lang_.level_words(at_level)) out[w] = value(w);
  return out;
}

bool index_hom_validate(const IndexHom& I, int depth) {
  // A supplied value must agree with the sum over the supplied/derived
  // children whenever both sides are determined.
  for (const auto& [w, v] : I.raw_values()) {
    if (static_cast<int>(w.size()) >= std::min(depth, I.level())) continue;
    long long sum = 0;
    bool derivable = true;
    for (const auto& child : I.language().refine(w)) {
      try {
        sum += I.value(child);
      } catch (const Error&) {
        derivable = false;
        break;
      }
    }
    if (derivable && sum != v) return false;
  }
  return true;
}

long long index_hom_eval(const IndexHom& I, const IndicatorCombination& f) {
  auto normalized = f.normalized(I.language(), I.level());
  long long out = 0;
  for (const auto& [w, c] : normalized.terms()) out += c * I.value(w);
  return out;
}

}  // namespace cantor
