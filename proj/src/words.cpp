#include "cantor/words.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace cantor {

Alphabet::Alphabet(std::vector<std::string> symbols) : names_(std::move(symbols)) {
  if (names_.size() < 2) throw Error("alphabet needs size >= 2");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw Error("empty symbol identifier");
    if (!seen.insert(n).second) throw Error("duplicate symbol: " + n);
    if (n.size() != 1) single_char_ = false;
  }
}

Alphabet Alphabet::digits(int k) {
  if (k < 2) throw Error("alphabet needs size >= 2");
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back(std::to_string(i));
  return Alphabet(std::move(names));
}

std::optional<Symbol> Alphabet::find(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Symbol>(i);
  return std::nullopt;
}

bool Word::is_prefix_of(const Word& o) const {
  if (size() > o.size()) return false;
  return std::equal(symbols.begin(), symbols.end(), o.symbols.begin());
}

Word Word::prefix(size_t n) const {
  if (n > size()) throw Error("prefix length exceeds word length");
  return Word(std::vector<Symbol>(symbols.begin(), symbols.begin() + n));
}

Word Word::append(Symbol s) const {
  Word w = *this;
  w.symbols.push_back(s);
  return w;
}

bool Word::operator<(const Word& o) const {
  if (size() != o.size()) return size() < o.size();
  return symbols < o.symbols;
}

std::string to_string(const Word& w, const Alphabet& a) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i && !a.single_char()) out += '.';
    out += a.name(w.at(i));
  }
  return out;
}

Word parse_word(const std::string& text, const Alphabet& a) {
  std::vector<Symbol> syms;
  if (a.single_char()) {
    for (char c : text) {
      auto s = a.find(std::string(1, c));
      if (!s) throw Error("unknown symbol '" + std::string(1, c) + "'");
      syms.push_back(*s);
    }
  } else if (!text.empty()) {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '.')) {
      auto s = a.find(part);
      if (!s) throw Error("unknown symbol '" + part + "'");
      syms.push_back(*s);
    }
  }
  return Word(std::move(syms));
}

namespace {

Word primitive_period(const Word& w) {
  const size_t n = w.size();
  for (size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (size_t i = p; i < n && ok; ++i) ok = (w.symbols[i] == w.symbols[i % p]);
    if (ok) return w.prefix(p);
  }
  return w;
}

}  // namespace

Point::Point(Word preperiod, Word period) : pre_(std::move(preperiod)), per_(std::move(period)) {
  if (per_.empty()) throw Error("point period must be nonempty");
  per_ = primitive_period(per_);
  // Absorb a preperiod suffix that matches the rotated period end.
  while (!pre_.empty() && pre_.symbols.back() == per_.symbols.back()) {
    pre_.symbols.pop_back();
    std::rotate(per_.symbols.rbegin(), per_.symbols.rbegin() + 1, per_.symbols.rend());
  }
}

Symbol Point::at(size_t i) const {
  if (i < pre_.size()) return pre_.symbols[i];
  return per_.symbols[(i - pre_.size()) % per_.size()];
}

Word Point::prefix(size_t n) const {
  std::vector<Symbol> syms(n);
  for (size_t i = 0; i < n; ++i) syms[i] = at(i);
  return Word(std::move(syms));
}

std::string to_string(const Point& p, const Alphabet& a) {
  return to_string(p.preperiod(), a) + "(" + to_string(p.period(), a) + ")";
}

Point parse_point(const std::string& text, const Alphabet& a) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw Error("point syntax is preperiod(period): " + text);
  return Point(parse_word(text.substr(0, open), a),
               parse_word(text.substr(open + 1, close - open - 1), a));
}

bool cylinder_contains(const Point& p, const Word& mu) {
  for (size_t i = 0; i < mu.size(); ++i)
    if (p.at(i) != mu.at(i)) return false;
  return true;
}

std::optional<long long> first_disagreement(const Point& x, const Point& y) {
  const size_t bound = std::max(x.preperiod().size(), y.preperiod().size()) +
                       std::lcm(x.period().size(), y.period().size());
  for (size_t i = 0; i < bound; ++i)
    if (x.at(i) != y.at(i)) return static_cast<long long>(i) + 1;
  return std::nullopt;
}

double metric(const Point& x, const Point& y) {
  auto j = first_disagreement(x, y);
  if (!j) return 0.0;
  return std::ldexp(1.0, static_cast<int>(1 - *j));
}

Language Language::full_shift(Alphabet a) { return Language(std::move(a), Kind::Full); }

Language Language::forbidden_factors(Alphabet a, std::vector<Word> forbidden) {
  Language lang(std::move(a), Kind::ForbiddenFactors);
  for (const auto& f : forbidden) {
    if (f.empty()) throw Error("empty forbidden factor");
    for (Symbol s : f.symbols)
      if (s < 0 || s >= lang.alpha_.size()) throw Error("forbidden factor symbol out of range");
    lang.max_forbidden_ = std::max(lang.max_forbidden_, f.size());
  }
  lang.forbidden_ = std::move(forbidden);
  return lang;
}

Language Language::golden_binary() {
  Alphabet a = Alphabet::binary();
  return forbidden_factors(a, {Word({1, 1})});
}

Language Language::golden_paths() {
  // Edge labels 0,1,2 of the stationary diagram with S = [[1,1],[1,0]]:
  // after 0 or 1 the path sits at the bottom vertex (next label 0 or 2),
  // after 2 at the top vertex (next label 1).
  Alphabet a = Alphabet::digits(3);
  return forbidden_factors(a, {Word({0, 1}), Word({1, 1}), Word({2, 0}), Word({2, 2})});
}

Language Language::mixed_radix(std::vector<int> pre, std::vector<int> per) {
  if (per.empty()) throw Error("mixed radix period must be nonempty");
  int maxd = 2;
  for (int d : pre) maxd = std::max(maxd, d);
  for (int d : per) maxd = std::max(maxd, d);
  for (int d : pre)
    if (d < 2) throw Error("digit bound must be >= 2");
  for (int d : per)
    if (d < 2) throw Error("digit bound must be >= 2");
  Language lang(Alphabet::digits(maxd), Kind::MixedRadix);
  lang.radix_pre_ = std::move(pre);
  lang.radix_per_ = std::move(per);
  return lang;
}

int Language::radix_digit(size_t pos) const {
  if (kind_ != Kind::MixedRadix) throw Error("not a mixed-radix language");
  if (pos < radix_pre_.size()) return radix_pre_[pos];
  return radix_per_[(pos - radix_pre_.size()) % radix_per_.size()];
}

bool Language::step_ok(const std::vector<Symbol>& prefix, Symbol s) const {
  if (s < 0 || s >= alpha_.size()) return false;
  switch (kind_) {
    case Kind::Full:
      return true;
    case Kind::MixedRadix:
      return s < radix_digit(prefix.size());
    case Kind::ForbiddenFactors: {
      std::vector<Symbol> tail;
      const size_t keep = max_forbidden_ ? max_forbidden_ - 1 : 0;
      const size_t start = prefix.size() > keep ? prefix.size() - keep : 0;
      tail.assign(prefix.begin() + start, prefix.end());
      tail.push_back(s);
      for (const auto& f : forbidden_) {
        if (f.size() > tail.size()) continue;
        if (std::equal(f.symbols.begin(), f.symbols.end(), tail.end() - f.size())) return false;
      }
      return true;
    }
  }
  return false;
}

bool Language::admissible(const Word& w) const {
  std::vector<Symbol> prefix;
  prefix.reserve(w.size());
  for (Symbol s : w.symbols) {
    if (!step_ok(prefix, s)) return false;
    prefix.push_back(s);
  }
  return true;
}

std::vector<Symbol> Language::extensions(const Word& prefix) const {
  std::vector<Symbol> out;
  for (Symbol s = 0; s < alpha_.size(); ++s)
    if (step_ok(prefix.symbols, s)) out.push_back(s);
  return out;
}

std::vector<Word> Language::level_words(int n) const {
  if (n < 0) throw Error("level must be >= 0");
  std::vector<Word> frontier{Word{}};
  for (int i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (Symbol s : extensions(w)) next.push_back(w.append(s));
    frontier = std::move(next);
  }
  return frontier;  // DFS in symbol order gives lexicographic order
}

long long Language::count_level(int n) const {
  if (kind_ == Kind::Full) {
    long long c = 1;
    for (int i = 0; i < n; ++i) c *= alpha_.size();
    return c;
  }
  if (kind_ == Kind::MixedRadix) {
    long long c = 1;
    for (int i = 0; i < n; ++i) c *= radix_digit(i);
    return c;
  }
  return static_cast<long long>(level_words(n).size());
}

std::vector<Word> Language::refine(const Word& mu) const {
  if (!admissible(mu)) throw Error("inadmissible word");
  std::vector<Word> out;
  for (Symbol s : extensions(mu)) out.push_back(mu.append(s));
  return out;
}

Point Language::min_tail(const Word& mu) const {
  if (!admissible(mu)) throw Error("inadmissible word");
  // Continuation state: factor memory for SFTs, position for mixed radix.
  auto state_key = [&](const std::vector<Symbol>& prefix) -> std::string {
    switch (kind_) {
      case Kind::Full:
        return "";
      case Kind::MixedRadix: {
        size_t pos = prefix.size();
        if (pos < radix_pre_.size()) return "p" + std::to_string(pos);
        return "q" + std::to_string((pos - radix_pre_.size()) % radix_per_.size());
      }
      case Kind::ForbiddenFactors: {
        const size_t keep = max_forbidden_ ? max_forbidden_ - 1 : 0;
        const size_t start = prefix.size() > keep ? prefix.size() - keep : 0;
        std::string k;
        for (size_t i = start; i < prefix.size(); ++i) k += std::to_string(prefix[i]) + ",";
        return k;
      }
    }
    return "";
  };
  std::vector<Symbol> prefix = mu.symbols;
  std::vector<Symbol> tail;
  std::map<std::string, size_t> seen;  // state -> tail offset
  for (;;) {
    auto key = state_key(prefix);
    auto it = seen.find(key);
    if (it != seen.end()) {
      Word pre(std::vector<Symbol>(tail.begin(), tail.begin() + it->second));
      Word per(std::vector<Symbol>(tail.begin() + it->second, tail.end()));
      Word full = mu;
      full.symbols.insert(full.symbols.end(), pre.symbols.begin(), pre.symbols.end());
      return Point(full, per);
    }
    seen[key] = tail.size();
    auto ext = extensions(Word(prefix));
    if (ext.empty()) throw Error("dead end: word has no admissible continuation");
    prefix.push_back(ext.front());
    tail.push_back(ext.front());
  }
}

bool Language::contains_point(const Point& p) const {
  const size_t probe = p.preperiod().size() + 2 * p.period().size() + max_forbidden_ + 2;
  return admissible(p.prefix(probe));
}

bool Language::operator==(const Language& o) const {
  return kind_ == o.kind_ && alpha_ == o.alpha_ && forbidden_ == o.forbidden_ &&
         radix_pre_ == o.radix_pre_ && radix_per_ == o.radix_per_;
}

std::vector<Word> proper_prefixes(const Word& mu) {
  std::vector<Word> out;
  for (size_t k = 0; k < mu.size(); ++k) out.push_back(mu.prefix(k));
  return out;
}

IndicatorCombination IndicatorCombination::one() { return cylinder(Word{}); }

IndicatorCombination IndicatorCombination::cylinder(Word mu) {
  IndicatorCombination f;
  f.terms_[std::move(mu)] = 1;
  return f;
}

int IndicatorCombination::max_level() const {
  int m = 0;
  for (const auto& [w, c] : terms_) m = std::max<int>(m, static_cast<int>(w.size()));
  return m;
}

void IndicatorCombination::add(const Word& w, long long c) {
  if (!c) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_[w] = c;
  } else {
    it->second += c;
    if (!it->second) terms_.erase(it);
  }
}

IndicatorCombination& IndicatorCombination::operator+=(const IndicatorCombination& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

IndicatorCombination& IndicatorCombination::operator-=(const IndicatorCombination& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

IndicatorCombination& IndicatorCombination::operator*=(long long c) {
  if (!c) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

long long IndicatorCombination::value_at(const Point& p) const {
  long long v = 0;
  for (const auto& [w, c] : terms_)
    if (cylinder_contains(p, w)) v += c;
  return v;
}

IndicatorCombination IndicatorCombination::normalized(const Language& lang, int n) const {
  if (max_level() > n) throw Error("normalization level below max word length");
  IndicatorCombination out;
  for (const auto& [w, c] : terms_) {
    std::vector<Word> frontier{w};
    while (!frontier.empty() && static_cast<int>(frontier.front().size()) < n) {
      std::vector<Word> next;
      for (const auto& v : frontier)
        for (const auto& child : lang.refine(v)) next.push_back(child);
      frontier = std::move(next);
    }
    for (const auto& v : frontier) out.add(v, c);
  }
  return out;
}

bool IndicatorCombination::is_projection(const Language& lang, int n) const {
  auto f = normalized(lang, n);
  for (const auto& [w, c] : f.terms())
    if (c != 1) return false;
  return true;
}

}  // namespace cantor
