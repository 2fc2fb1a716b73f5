#pragma once

// Symbolic model of one-sided sequence spaces over a finite alphabet:
// words, eventually periodic points, cylinder membership, admissibility
// (full shift / forbidden factors / mixed-radix digit spaces), and integer
// combinations of cylinder indicators (the C(X,Z) picture of K0(C(X))).

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantor {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Symbol = int;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);
  static Alphabet binary() { return digits(2); }
  static Alphabet digits(int k);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  std::optional<Symbol> find(const std::string& name) const;
  bool single_char() const { return single_char_; }
  bool operator==(const Alphabet& o) const { return names_ == o.names_; }
  bool operator!=(const Alphabet& o) const { return !(*this == o); }

 private:
  std::vector<std::string> names_;
  bool single_char_ = true;
};

struct Word {
  std::vector<Symbol> symbols;

  Word() = default;
  explicit Word(std::vector<Symbol> s) : symbols(std::move(s)) {}

  size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  Symbol at(size_t i) const { return symbols.at(i); }

  bool is_prefix_of(const Word& o) const;
  Word prefix(size_t n) const;
  Word append(Symbol s) const;

  bool operator==(const Word& o) const { return symbols == o.symbols; }
  bool operator!=(const Word& o) const { return !(*this == o); }
  // (length, lexicographic) order; the canonical enumeration order everywhere.
  bool operator<(const Word& o) const;
};

std::string to_string(const Word& w, const Alphabet& a);
Word parse_word(const std::string& text, const Alphabet& a);

// Eventually periodic one-sided sequence preperiod . period^infinity, kept in
// canonical form (primitive period, no period tail absorbable into it).
class Point {
 public:
  Point(Word preperiod, Word period);

  const Word& preperiod() const { return pre_; }
  const Word& period() const { return per_; }
  Symbol at(size_t i) const;
  Word prefix(size_t n) const;

  bool operator==(const Point& o) const {
    return pre_ == o.pre_ && per_ == o.per_;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }

 private:
  Word pre_;
  Word per_;  // nonempty, primitive
};

std::string to_string(const Point& p, const Alphabet& a);
Point parse_point(const std::string& text, const Alphabet& a);

bool cylinder_contains(const Point& p, const Word& mu);

// 1-based index of the first disagreement; nullopt if equal as sequences.
std::optional<long long> first_disagreement(const Point& x, const Point& y);
// 2^{-(first disagreement)+1}, 0 if equal.
double metric(const Point& x, const Point& y);

// Admissible one-sided sequence space. Three kinds: the full shift, a
// finite-type subshift given by forbidden factors, and a mixed-radix digit
// space (position i only admits symbols < d_i; the odometer state space).
class Language {
 public:
  enum class Kind { Full, ForbiddenFactors, MixedRadix };

  static Language full_shift(Alphabet a);
  static Language forbidden_factors(Alphabet a, std::vector<Word> forbidden);
  // Binary golden-mean shift: {0,1} words with no factor "11".
  static Language golden_binary();
  // Edge-label language of the stationary golden-mean Bratteli diagram.
  static Language golden_paths();
  // digits d_1 d_2 ... given as preperiod+period lists, each d_i >= 2.
  static Language mixed_radix(std::vector<int> pre, std::vector<int> per);

  Kind kind() const { return kind_; }
  const Alphabet& alphabet() const { return alpha_; }
  const std::vector<Word>& forbidden() const { return forbidden_; }
  int radix_digit(size_t pos) const;  // mixed radix only, 0-based position
  const std::vector<int>& radix_pre() const { return radix_pre_; }
  const std::vector<int>& radix_per() const { return radix_per_; }

  bool admissible(const Word& w) const;
  // Admissible continuations of a given admissible prefix.
  std::vector<Symbol> extensions(const Word& prefix) const;
  std::vector<Word> level_words(int n) const;  // lexicographic
  long long count_level(int n) const;
  std::vector<Word> refine(const Word& mu) const;
  // Greedy minimal admissible continuation; eventually periodic.
  Point min_tail(const Word& mu) const;
  bool contains_point(const Point& p) const;

  bool operator==(const Language& o) const;

 private:
  Language(Alphabet a, Kind k) : alpha_(std::move(a)), kind_(k) {}
  bool step_ok(const std::vector<Symbol>& prefix, Symbol s) const;

  Alphabet alpha_;
  Kind kind_;
  std::vector<Word> forbidden_;
  size_t max_forbidden_ = 0;
  std::vector<int> radix_pre_, radix_per_;
};

std::vector<Word> proper_prefixes(const Word& mu);

// Finitely supported integer map Word -> Z, representing an element of
// C(X,Z) as a combination of cylinder indicators.
class IndicatorCombination {
 public:
  IndicatorCombination() = default;
  static IndicatorCombination one();  // chi_X = indicator of the empty word
  static IndicatorCombination cylinder(Word mu);

  const std::map<Word, long long>& terms() const { return terms_; }
  bool zero() const { return terms_.empty(); }
  int max_level() const;

  void add(const Word& w, long long c);
  IndicatorCombination& operator+=(const IndicatorCombination& o);
  IndicatorCombination& operator-=(const IndicatorCombination& o);
  IndicatorCombination& operator*=(long long c);
  friend IndicatorCombination operator+(IndicatorCombination a,
                                        const IndicatorCombination& b) {
    a += b;
    return a;
  }
  friend IndicatorCombination operator-(IndicatorCombination a,
                                        const IndicatorCombination& b) {
    a -= b;
    return a;
  }

  long long value_at(const Point& p) const;
  // Equal element of C(X,Z) with every word at length n. Idempotent.
  IndicatorCombination normalized(const Language& lang, int n) const;
  // True when the level-n normalization has only 0/1 coefficients.
  bool is_projection(const Language& lang, int n) const;

 private:
  std::map<Word, long long> terms_;  // nonzero coefficients only
};

}  // namespace cantor
