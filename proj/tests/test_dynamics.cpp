#include <doctest.h>

#include <random>
#include <set>

#include "cantor/dynamics.hpp"

using namespace cantor;

namespace {

Point random_odometer_point(std::mt19937_64& gen, const OdometerSpec& spec) {
  std::vector<Symbol> pre, per;
  const int pre_len = gen() % 5;
  for (int i = 0; i < pre_len; ++i) pre.push_back(gen() % spec.digit(i));
  // keep the point valid in the periodic tail: repeat a full digit period
  const int per_len = static_cast<int>(spec.per.size());
  for (int i = 0; i < per_len; ++i) pre.push_back(gen() % spec.digit(pre_len + i));
  per.assign(spec.per.size(), 0);
  size_t offset = pre.size();
  for (size_t i = 0; i < per.size(); ++i) per[i] = gen() % spec.digit(offset + i);
  return Point(Word(pre), Word(per));
}

}  // namespace

TEST_CASE("odometer step on the binary machine") {
  const OdometerSpec spec = OdometerSpec::binary();
  const Alphabet a = spec.language().alphabet();
  // all-ones maps to all-zeros
  CHECK(odometer_step(spec, parse_point("(1)", a), 1) == parse_point("(0)", a));
  CHECK(odometer_step(spec, parse_point("10(0)", a), 1) == parse_point("01(0)", a));
  CHECK(odometer_step(spec, parse_point("01(0)", a), 1) == parse_point("11(0)", a));
  // inverse direction wraps back
  CHECK(odometer_step(spec, parse_point("(0)", a), -1) == parse_point("(1)", a));
}

TEST_CASE("odometer step with mixed digits") {
  const OdometerSpec spec({}, {3, 2});
  const Alphabet a = spec.language().alphabet();
  // first digit 2 = d1 - 1 carries into the second digit
  CHECK(odometer_step(spec, parse_point("2(0)", a), 1) == parse_point("01(0)", a));
  CHECK_THROWS_AS(odometer_step(spec, parse_point("(2)", a), 1), Error);  // digit 2 invalid at pos 2
}

TEST_CASE("odometer step bijectivity on 1000 sampled points") {
  const OdometerSpec spec({3}, {2, 3});
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point p = random_odometer_point(gen, spec);
    CHECK(odometer_step(spec, odometer_step(spec, p, 1), -1) == p);
  }
}

TEST_CASE("odometer step is an isometry") {
  const OdometerSpec spec({}, {2});
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point x = random_odometer_point(gen, spec);
    const Point y = random_odometer_point(gen, spec);
    CHECK(metric(odometer_step(spec, x, 1), odometer_step(spec, y, 1)) == metric(x, y));
  }
}

TEST_CASE("cylinder permutation cycle structure") {
  const OdometerSpec binary = OdometerSpec::binary();
  const Alphabet a = binary.language().alphabet();
  SUBCASE("binary level 1 is the swap") {
    const auto images = cylinder_permutation(binary, 1);
    CHECK(to_string(images[0], a) == "1");
    CHECK(to_string(images[1], a) == "0");
  }
  SUBCASE("binary level 2 is the 4-cycle 00 -> 10 -> 01 -> 11 -> 00") {
    Word w = parse_word("00", a);
    std::vector<std::string> orbit;
    for (int i = 0; i < 4; ++i) {
      w = word_shift(binary, w, 1);
      orbit.push_back(to_string(w, a));
    }
    CHECK(orbit == std::vector<std::string>{"10", "01", "11", "00"});
  }
  SUBCASE("single cycle of length d1...dm") {
    for (const OdometerSpec& spec :
         {OdometerSpec({}, {2}), OdometerSpec({}, {3, 2}), OdometerSpec({2, 3}, {4})}) {
      for (int m = 1; m <= 5; ++m) {
        const auto words = spec.language().level_words(m);
        Word w = words.front();
        std::set<Word> visited;
        do {
          visited.insert(w);
          w = word_shift(spec, w, 1);
        } while (!(w == words.front()));
        CHECK(static_cast<long long>(visited.size()) == spec.level_product(m));
        CHECK(visited.size() == words.size());
      }
    }
  }
}

TEST_CASE("odometer bratteli diagram and intertwining") {
  const OdometerSpec spec({}, {2});
  const BratteliDiagram d = BratteliDiagram::odometer(spec, 3);
  CHECK(d.count_paths(3) == 8);
  for (const auto& S : d.transitions) CHECK(S[0][0] == 2);
  // digit <-> edge dictionary intertwines the two successor maps
  const Language lang = spec.language();
  for (const auto& w : lang.level_words(3)) {
    const Point p(w, Word({0}));
    const OrderedPath path = odometer_point_to_path(spec, p, 3);
    const Point stepped = odometer_step(spec, p, 1);
    CHECK(path_to_word(vershik_successor(d, path)) == stepped.prefix(3));
  }
}

TEST_CASE("vershik successor on the (3,2) odometer diagram") {
  const OdometerSpec spec({}, {3, 2});
  const BratteliDiagram d = BratteliDiagram::odometer(spec, 2);
  OrderedPath p = extreme_path(d, 2, false);
  std::set<Word> visited;
  for (int i = 0; i < 6; ++i) {
    visited.insert(path_to_word(p));
    p = vershik_successor(d, p);
  }
  CHECK(visited.size() == 6);  // single Vershik cycle through all paths
  CHECK(p == extreme_path(d, 2, false));
}

TEST_CASE("extreme paths on the telescoped golden diagram") {
  const BratteliDiagram d = BratteliDiagram::golden_mean_telescoped(6);
  const OrderedPath mn = extreme_path(d, 2, false);
  for (auto [v, idx] : mn.edges) CHECK(idx == 0);
  const OrderedPath mx = extreme_path(d, 2, true);
  CHECK(mn.edges != mx.edges);
  CHECK(d.count_paths(2) == 5);
}

TEST_CASE("vershik tower structure on the telescoped golden diagram") {
  const BratteliDiagram d = BratteliDiagram::golden_mean_telescoped(6);
  // the minimal path walks its tower (all paths into its terminal vertex)
  OrderedPath p = extreme_path(d, 2, false);
  const int tower_vertex = p.edges.back().first;
  long long tower_size = 0;
  for (const auto& q : all_paths(d, 2))
    if (q.edges.back().first == tower_vertex) ++tower_size;
  std::set<OrderedPath> seen;
  for (long long i = 0; i + 1 < tower_size; ++i) {
    seen.insert(p);
    p = vershik_successor(d, p);
    CHECK(p.edges.back().first == tower_vertex);
  }
  seen.insert(p);
  CHECK(static_cast<long long>(seen.size()) == tower_size);
  // the top of this tower is not THE maximal path: deeper data is required
  CHECK_THROWS_AS(vershik_successor(d, p), Error);
  // THE maximal path wraps to THE minimal path
  CHECK(vershik_successor(d, extreme_path(d, 2, true)) == extreme_path(d, 2, false));
}

TEST_CASE("golden mean diagram from the figure") {
  const BratteliDiagram d = BratteliDiagram::golden_mean(8);
  CHECK(d.count_paths(1) == 2);
  CHECK(d.count_paths(2) == 3);
  CHECK(d.count_paths(3) == 5);
  CHECK(d.count_paths(4) == 8);
  d.validate();
  // labels-as-orders: the max source chains form a two-cycle, so THE max
  // path is not determined at truncation scale
  CHECK_THROWS_AS(extreme_path(d, 2, true), Error);
  CHECK(extreme_path(d, 2, false).edges == std::vector<std::pair<int, int>>{{0, 0}, {0, 0}});
}

TEST_CASE("diagram json round trip") {
  const BratteliDiagram d = BratteliDiagram::golden_mean_telescoped(4);
  const BratteliDiagram e = BratteliDiagram::from_json_text(d.to_json_text());
  CHECK(e.vertex_counts == d.vertex_counts);
  CHECK(e.transitions == d.transitions);
  CHECK(e.edge_orders == d.edge_orders);
}

TEST_CASE("diagram validation rejects broken data") {
  BratteliDiagram d = BratteliDiagram::odometer(OdometerSpec::binary(), 2);
  d.transitions[1][0][0] = 0;  // vertex loses all incoming edges
  CHECK_THROWS_AS(d.validate(), Error);
}
