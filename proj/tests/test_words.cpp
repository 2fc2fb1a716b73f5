#include <doctest.h>

#include <random>

#include "cantor/words.hpp"

using namespace cantor;

namespace {

Word w(std::initializer_list<Symbol> s) { return Word(std::vector<Symbol>(s)); }

// Random eventually periodic point over the language, for property checks.
Point random_point(std::mt19937_64& gen, const Language& lang, int pre_len, int per_len) {
  Word base;
  for (int i = 0; i < pre_len; ++i) {
    auto ext = lang.extensions(base);
    base = base.append(ext[gen() % ext.size()]);
  }
  // extend with min tail to stay admissible, then randomize the preperiod cut
  Point mt = lang.min_tail(base);
  (void)per_len;
  return mt;
}

}  // namespace

TEST_CASE("alphabet validation") {
  CHECK_THROWS_AS(Alphabet({std::string("0")}), Error);
  CHECK_THROWS_AS(Alphabet({std::string("0"), std::string("0")}), Error);
  const Alphabet a = Alphabet::binary();
  CHECK(a.size() == 2);
  CHECK(a.find("1").value() == 1);
}

TEST_CASE("point canonical form and digits") {
  const Alphabet a = Alphabet::binary();
  // 10(0) == 1(0): the trailing 0 of the preperiod folds into the period
  const Point p = parse_point("10(0)", a);
  CHECK(to_string(p, a) == "1(0)");
  CHECK(p.at(0) == 1);
  CHECK(p.at(1) == 0);
  CHECK(p.at(100) == 0);
  // period is made primitive
  const Point q(Word{}, w({0, 1, 0, 1}));
  CHECK(q.period().size() == 2);
  CHECK(parse_point("(01)", a) == q);
}

TEST_CASE("cylinder membership") {
  const Alphabet a = Alphabet::binary();
  CHECK(cylinder_contains(parse_point("(0)", a), parse_word("00", a)));
  CHECK(cylinder_contains(parse_point("1(0)", a), parse_word("10", a)));
  CHECK_FALSE(cylinder_contains(parse_point("(10)", a), parse_word("11", a)));
  CHECK(cylinder_contains(parse_point("(10)", a), Word{}));  // C_eps = X
}

TEST_CASE("metric on eventually periodic points") {
  const Alphabet a = Alphabet::binary();
  const Point zeros = parse_point("(0)", a);
  CHECK(metric(parse_point("(01)", a), parse_point("0(10)", a)) == 0.0);
  CHECK(metric(zeros, parse_point("1(0)", a)) == 1.0);  // disagree at index 1
  // (10)^inf vs 1(0): first disagreement at index 3, metric 2^{-2}
  CHECK(first_disagreement(parse_point("(10)", a), parse_point("1(0)", a)).value() == 3);
  CHECK(metric(parse_point("(10)", a), parse_point("1(0)", a)) == 0.25);
}

TEST_CASE("metric is an ultrametric on sampled triples") {
  const Language lang = Language::golden_binary();
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Point x = random_point(gen, lang, gen() % 6, 2);
    const Point y = random_point(gen, lang, gen() % 6, 2);
    const Point z = random_point(gen, lang, gen() % 6, 2);
    CHECK(metric(x, z) <= std::max(metric(x, y), metric(y, z)) + 1e-15);
  }
}

TEST_CASE("level partitions") {
  const Language full = Language::full_shift(Alphabet::binary());
  const auto words2 = full.level_words(2);
  REQUIRE(words2.size() == 4);
  CHECK(to_string(words2[0], full.alphabet()) == "00");
  CHECK(to_string(words2[3], full.alphabet()) == "11");
  CHECK(full.level_words(0).size() == 1);
  CHECK(full.level_words(0)[0].empty());

  const Language golden = Language::golden_binary();
  CHECK(golden.level_words(3).size() == 5);  // {0,1}^3 minus words containing 11
  CHECK(golden.count_level(3) == 5);
}

TEST_CASE("partition property: prefix-incomparable and unique parent") {
  for (const Language& lang :
       {Language::golden_binary(), Language::golden_paths(),
        Language::mixed_radix({3}, {2})}) {
    for (int n = 1; n <= 4; ++n) {
      const auto words = lang.level_words(n);
      for (size_t i = 0; i < words.size(); ++i)
        for (size_t j = i + 1; j < words.size(); ++j) {
          CHECK_FALSE(words[i].is_prefix_of(words[j]));
          CHECK_FALSE(words[j].is_prefix_of(words[i]));
        }
      const auto parents = lang.level_words(n - 1);
      for (const auto& child : lang.level_words(n)) {
        int count = 0;
        for (const auto& p : parents)
          if (p.is_prefix_of(child)) ++count;
        CHECK(count == 1);
      }
    }
  }
}

TEST_CASE("refine") {
  const Language full = Language::full_shift(Alphabet::binary());
  const Alphabet& a = full.alphabet();
  CHECK(full.refine(parse_word("0", a)) ==
        std::vector<Word>{parse_word("00", a), parse_word("01", a)});
  CHECK(full.refine(Word{}) == std::vector<Word>{parse_word("0", a), parse_word("1", a)});
  const Language golden = Language::golden_binary();
  CHECK(golden.refine(parse_word("1", a)) == std::vector<Word>{parse_word("10", a)});
}

TEST_CASE("prefixes") {
  const Alphabet a = Alphabet::binary();
  const auto pre = proper_prefixes(parse_word("010", a));
  REQUIRE(pre.size() == 3);
  CHECK(pre[0].empty());
  CHECK(to_string(pre[1], a) == "0");
  CHECK(to_string(pre[2], a) == "01");
  CHECK(proper_prefixes(Word{}).empty());
  for (int len = 0; len < 8; ++len) {
    Word word(std::vector<Symbol>(len, 0));
    CHECK(proper_prefixes(word).size() == static_cast<size_t>(len));
  }
}

TEST_CASE("min tail continuations") {
  const Language golden = Language::golden_binary();
  const Alphabet& a = golden.alphabet();
  CHECK(to_string(golden.min_tail(parse_word("1", a)), a) == "1(0)");
  const Language paths = Language::golden_paths();
  // the paper's rule on the path language: ...2 continues 1 0 0 0 ...
  const Point p = paths.min_tail(parse_word("2", paths.alphabet()));
  CHECK(p.at(0) == 2);
  CHECK(p.at(1) == 1);
  CHECK(p.at(2) == 0);
  CHECK(p.at(3) == 0);
  for (const Word& mu : paths.level_words(4)) CHECK(paths.contains_point(paths.min_tail(mu)));
}

TEST_CASE("normalize to level") {
  const Language full = Language::full_shift(Alphabet::binary());
  const Alphabet& a = full.alphabet();
  auto f = IndicatorCombination::one();
  auto g = f.normalized(full, 1);
  CHECK(g.terms().size() == 2);
  CHECK(g.terms().at(parse_word("0", a)) == 1);
  CHECK(g.terms().at(parse_word("1", a)) == 1);
  CHECK(g.normalized(full, 1).terms() == g.terms());  // idempotent

  IndicatorCombination h;
  h.add(parse_word("0", a), 2);
  h.add(parse_word("01", a), -1);
  const auto h2 = h.normalized(full, 2);
  CHECK(h2.terms().at(parse_word("00", a)) == 2);
  CHECK(h2.terms().at(parse_word("01", a)) == 1);
  CHECK_THROWS_AS(h.normalized(full, 1), Error);
}

TEST_CASE("normalization preserves evaluation on sampled points") {
  const Language lang = Language::golden_binary();
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    IndicatorCombination f;
    for (int t = 0; t < 4; ++t) {
      const auto words = lang.level_words(gen() % 4);
      f.add(words[gen() % words.size()], static_cast<long long>(gen() % 7) - 3);
    }
    const auto g = f.normalized(lang, 5);
    for (int s = 0; s < 20; ++s) {
      const Point p = random_point(gen, lang, gen() % 5, 2);
      CHECK(f.value_at(p) == g.value_at(p));
    }
  }
}

TEST_CASE("mixed radix language") {
  const Language mr = Language::mixed_radix({3}, {2});
  CHECK(mr.level_words(2).size() == 6);
  CHECK(mr.count_level(2) == 6);
  CHECK(mr.admissible(parse_word("21", mr.alphabet())));
  CHECK_FALSE(mr.admissible(parse_word("12", mr.alphabet())));  // digit 2 invalid at position 2
}

TEST_CASE("word serialization round trip") {
  const Alphabet multi({"aa", "b", "c"});
  const Word word({0, 2, 1});
  CHECK(to_string(word, multi) == "aa.c.b");
  CHECK(parse_word("aa.c.b", multi) == word);
}
