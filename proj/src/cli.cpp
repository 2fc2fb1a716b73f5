#include "cantor/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cantor/crossed.hpp"
#include "cantor/version.hpp"

namespace cantor::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"space",     "dynamics",    "k0",
                                            "gm-demo",   "pair-even",   "pair-odd",
                                            "trace",     "summability", "synthesize",
                                            "crossed"};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

unsigned long long fnv1a(const std::string& s) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const json& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", fnv1a(cfg.dump()));
  return buf;
}

// ---- schema helpers -------------------------------------------------------

struct Checker {
  const json& cfg;
  std::vector<std::string> errors;

  bool has(const std::string& key) const { return cfg.contains(key); }
  void fail(const std::string& msg) { errors.push_back(msg); }

  const json* object(const std::string& key, bool required) {
    if (!cfg.contains(key)) {
      if (required) fail("missing field: " + key);
      return nullptr;
    }
    if (!cfg.at(key).is_object()) {
      fail("field must be an object: " + key);
      return nullptr;
    }
    return &cfg.at(key);
  }
};

Language parse_language(const json& j) {
  if (j.is_string()) {
    const std::string preset = j.get<std::string>();
    if (preset == "full-binary") return Language::full_shift(Alphabet::binary());
    if (preset == "golden-binary") return Language::golden_binary();
    if (preset == "golden-paths") return Language::golden_paths();
    throw Error("unknown language preset: " + preset);
  }
  if (j.contains("mixed_radix")) {
    const auto& mr = j.at("mixed_radix");
    return Language::mixed_radix(mr.value("pre", std::vector<int>{}),
                                 mr.at("per").get<std::vector<int>>());
  }
  Alphabet a(j.at("alphabet").get<std::vector<std::string>>());
  std::vector<Word> forbidden;
  for (const auto& f : j.value("forbidden", std::vector<std::string>{}))
    forbidden.push_back(parse_word(f, a));
  if (forbidden.empty()) return Language::full_shift(a);
  return Language::forbidden_factors(a, std::move(forbidden));
}

void check_language(Checker& c, const json* j, const std::string& where) {
  if (!j) return;
  if (j->is_string()) {
    const std::string preset = j->get<std::string>();
    if (preset != "full-binary" && preset != "golden-binary" && preset != "golden-paths")
      c.fail(where + ": unknown language preset: " + preset);
    return;
  }
  if (j->contains("mixed_radix")) {
    if (!j->at("mixed_radix").contains("per"))
      c.fail(where + ".mixed_radix: missing field: per");
    else
      for (const auto& d : j->at("mixed_radix").at("per"))
        if (!d.is_number_integer() || d.get<int>() < 2)
          c.fail(where + ".mixed_radix: digits must be integers >= 2");
    return;
  }
  if (!j->contains("alphabet")) {
    c.fail(where + ": missing field: alphabet");
    return;
  }
  if (!j->at("alphabet").is_array() || j->at("alphabet").size() < 2)
    c.fail(where + ": alphabet needs size >= 2");
}

ChoiceFunction parse_choice(const json& j, const Language& lang) {
  const std::string rule = j.at("rule").get<std::string>();
  ChoiceFunction out = [&]() {
    if (rule == "min-tail") return ChoiceFunction(lang, ChoiceFunction::Rule::MinTail);
    if (rule == "constant-tail")
      return ChoiceFunction(lang, ChoiceFunction::Rule::ConstantTail,
                            parse_word(j.at("tail").get<std::string>(), lang.alphabet()));
    throw Error("unknown choice rule: " + rule);
  }();
  if (j.contains("overrides"))
    for (const auto& [w, p] : j.at("overrides").items())
      out = out.with_override(parse_word(w, lang.alphabet()),
                              parse_point(p.get<std::string>(), lang.alphabet()));
  return out;
}

void check_choice(Checker& c, const json* j, const std::string& where) {
  if (!j) return;
  if (!j->contains("rule")) {
    c.fail(where + ": missing field: rule");
    return;
  }
  const std::string rule = j->at("rule").get<std::string>();
  if (rule != "min-tail" && rule != "constant-tail")
    c.fail(where + ": unknown choice rule: " + rule);
  if (rule == "constant-tail" && !j->contains("tail"))
    c.fail(where + ": constant-tail needs a tail word");
}

ChoicePair parse_pair(const json& j, const Language& lang) {
  std::optional<Word> restriction;
  if (j.contains("restriction"))
    restriction = parse_word(j.at("restriction").get<std::string>(), lang.alphabet());
  return ChoicePair(parse_choice(j.at("plus"), lang), parse_choice(j.at("minus"), lang),
                    restriction);
}

void check_pair(Checker& c, const json* j, const std::string& where) {
  if (!j) return;
  check_choice(c, j->contains("plus") ? &j->at("plus") : nullptr, where + ".plus");
  check_choice(c, j->contains("minus") ? &j->at("minus") : nullptr, where + ".minus");
  if (!j->contains("plus")) c.fail(where + ": missing field: plus");
  if (!j->contains("minus")) c.fail(where + ": missing field: minus");
}

OdometerSpec parse_odometer(const json& j) {
  return OdometerSpec(j.value("pre", std::vector<int>{}), j.at("per").get<std::vector<int>>());
}

void check_odometer(Checker& c, const json* j, const std::string& where) {
  if (!j) return;
  if (!j->contains("per")) {
    c.fail(where + ": missing field: per");
    return;
  }
  for (const auto& part : {"pre", "per"}) {
    if (!j->contains(part)) continue;
    for (const auto& d : j->at(part))
      if (!d.is_number_integer() || d.get<int>() < 2)
        c.fail(where + ": digits must be integers >= 2");
  }
}

CrossedElement parse_crossed(const json& j, const Language& lang) {
  if (j.contains("u_power")) return CrossedElement::u_power(j.at("u_power").get<int>());
  CrossedElement out;
  for (const auto& [kstr, comb] : j.at("terms").items()) {
    IndicatorCombination a;
    for (const auto& [w, coeff] : comb.items())
      a.add(parse_word(w, lang.alphabet()), coeff.get<long long>());
    if (!a.zero()) out.terms[std::stoi(kstr)] = a;
  }
  return out;
}

BratteliDiagram parse_diagram(const json& j) {
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    const int depth = j.at("depth").get<int>();
    if (preset == "golden-mean") return BratteliDiagram::golden_mean(depth);
    if (preset == "golden-mean-telescoped") return BratteliDiagram::golden_mean_telescoped(depth);
    if (preset == "odometer")
      return BratteliDiagram::odometer(parse_odometer(j.at("odometer")), depth);
    throw Error("unknown diagram preset: " + preset);
  }
  return BratteliDiagram::from_json_text(j.dump());
}

IndicatorCombination parse_combination(const json& j, const Language& lang) {
  IndicatorCombination f;
  for (const auto& [w, coeff] : j.items())
    f.add(parse_word(w, lang.alphabet()), coeff.get<long long>());
  return f;
}

// ---- report rendering -----------------------------------------------------

struct Report {
  json meta;
  json data = json::object();
  // rows: (table name, header, rows of strings)
  std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> tables;

  void scalar(const std::string& key, const json& v) { data[key] = v; }
  void table(const std::string& name, std::vector<std::string> header,
             std::vector<std::vector<std::string>> rows) {
    rows.insert(rows.begin(), std::move(header));
    tables.push_back({name, std::move(rows)});
  }

  std::string render(const std::string& format) const {
    if (format == "doc") {
      json out;
      out["meta"] = meta;
      out["data"] = data;
      for (const auto& [name, rows] : tables) {
        json t = json::array();
        for (const auto& row : rows) t.push_back(row);
        out["tables"][name] = t;
      }
      return out.dump(2) + "\n";
    }
    std::ostringstream os;
    for (const auto& [k, v] : meta.items())
      os << "# " << k << "\t" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    for (const auto& [k, v] : data.items())
      os << k << "\t" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    for (const auto& [name, rows] : tables) {
      os << "[" << name << "]\n";
      for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << row[i];
        os << "\n";
      }
    }
    return os.str();
  }
};

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Summable:
      return "summable";
    case Verdict::NotSummable:
      return "not-summable";
    default:
      return "undecided";
  }
}

// ---- per-command validation ----------------------------------------------

void validate_command(const std::string& command, Checker& c) {
  if (c.cfg.contains("command") && c.cfg.at("command").get<std::string>() != command)
    c.fail("config command does not match the invoked command");
  if (command == "space") {
    check_language(c, c.object("language", true), "language");
    if (!c.has("op")) c.fail("missing field: op");
  } else if (command == "dynamics") {
    if (!c.has("op")) c.fail("missing field: op");
    const std::string op = c.cfg.value("op", "");
    if (op == "odometer-step" || op == "cylinder-permutation" || op == "intertwine")
      check_odometer(c, c.object("odometer", true), "odometer");
    if (op == "cylinder-permutation" && c.cfg.value("level", 1) < 1)
      c.fail("level must be >= 1");
  } else if (command == "k0") {
    if (!c.has("op")) c.fail("missing field: op");
  } else if (command == "gm-demo") {
    if (!c.has("level"))
      c.fail("missing field: level");
    else if (!c.cfg.at("level").is_number_integer() || c.cfg.at("level").get<int>() < 1)
      c.fail("level must be an integer >= 1");
  } else if (command == "pair-even") {
    check_language(c, c.object("language", true), "language");
    if (c.has("random_cases")) {
      if (c.cfg.at("random_cases").get<long long>() < 1) c.fail("random_cases must be >= 1");
    } else {
      check_pair(c, c.object("pair", true), "pair");
      if (!c.has("words")) c.fail("missing field: words");
    }
  } else if (command == "pair-odd") {
    check_language(c, c.object("language", true), "language");
    check_choice(c, c.object("tau", true), "tau");
    if (!c.has("N")) c.fail("missing field: N");
    const std::string side = c.cfg.value("side", "positive");
    if (side != "positive" && side != "negative") c.fail("side must be positive or negative");
  } else if (command == "trace") {
    const std::string parity = c.cfg.value("parity", "");
    if (parity != "even" && parity != "odd") c.fail("parity must be even or odd");
  } else if (command == "summability") {
    if (!c.has("W")) c.fail("missing field: W");
    if (!c.has("p")) c.fail("missing field: p");
    if (c.cfg.value("depth", 1) < 1) c.fail("depth must be >= 1");
    if (!c.has("language") && !c.has("counts")) c.fail("need language or counts");
    if (c.has("language")) check_language(c, c.object("language", false), "language");
  } else if (command == "synthesize") {
    check_language(c, c.object("language", true), "language");
    if (!c.has("level")) c.fail("missing field: level");
    if (!c.has("target")) c.fail("missing field: target");
  } else if (command == "crossed") {
    if (!c.has("op")) c.fail("missing field: op");
    check_odometer(c, c.object("odometer", true), "odometer");
  } else {
    c.fail("unknown command: " + command);
  }
}

// ---- command execution ----------------------------------------------------

void run_space(const json& cfg, Report& rep) {
  const Language lang = parse_language(cfg.at("language"));
  const Alphabet& a = lang.alphabet();
  const std::string op = cfg.at("op").get<std::string>();
  if (op == "partition") {
    const int n = cfg.at("level").get<int>();
    std::vector<std::vector<std::string>> rows;
    for (const auto& w : lang.level_words(n)) rows.push_back({to_string(w, a)});
    rep.scalar("count", rows.size());
    rep.table("words", {"word"}, rows);
  } else if (op == "refine") {
    const Word mu = parse_word(cfg.at("word").get<std::string>(), a);
    std::vector<std::vector<std::string>> rows;
    for (const auto& w : lang.refine(mu)) rows.push_back({to_string(w, a)});
    rep.table("children", {"word"}, rows);
  } else if (op == "prefixes") {
    const Word mu = parse_word(cfg.at("word").get<std::string>(), a);
    std::vector<std::vector<std::string>> rows;
    for (const auto& w : proper_prefixes(mu)) rows.push_back({to_string(w, a)});
    rep.table("prefixes", {"word"}, rows);
  } else if (op == "metric") {
    const Point x = parse_point(cfg.at("x").get<std::string>(), a);
    const Point y = parse_point(cfg.at("y").get<std::string>(), a);
    rep.scalar("metric", num(metric(x, y)));
  } else if (op == "normalize") {
    const auto f = parse_combination(cfg.at("combination"), lang);
    const auto g = f.normalized(lang, cfg.at("level").get<int>());
    std::vector<std::vector<std::string>> rows;
    for (const auto& [w, coeff] : g.terms())
      rows.push_back({to_string(w, a), std::to_string(coeff)});
    rep.table("combination", {"word", "coefficient"}, rows);
  } else {
    throw Error("unknown space op: " + op);
  }
}

void run_dynamics(const json& cfg, Report& rep) {
  const std::string op = cfg.at("op").get<std::string>();
  if (op == "odometer-step") {
    const OdometerSpec spec = parse_odometer(cfg.at("odometer"));
    const Alphabet a = spec.language().alphabet();
    Point p = parse_point(cfg.at("point").get<std::string>(), a);
    const int steps = cfg.value("steps", 1);
    const int dir = steps >= 0 ? 1 : -1;
    std::vector<std::vector<std::string>> rows{{std::to_string(0), to_string(p, a)}};
    for (int i = 1; i <= std::abs(steps); ++i) {
      p = odometer_step(spec, p, dir);
      rows.push_back({std::to_string(dir * i), to_string(p, a)});
    }
    rep.table("orbit", {"step", "point"}, rows);
  } else if (op == "cylinder-permutation") {
    const OdometerSpec spec = parse_odometer(cfg.at("odometer"));
    const Alphabet a = spec.language().alphabet();
    const int m = cfg.at("level").get<int>();
    const auto words = spec.language().level_words(m);
    const auto images = cylinder_permutation(spec, m);
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < words.size(); ++i)
      rows.push_back({to_string(words[i], a), to_string(images[i], a)});
    // cycle length of the permutation starting at 0...0
    long long cycle = 1;
    Word w = word_shift(spec, words.front(), 1);
    while (!(w == words.front())) {
      w = word_shift(spec, w, 1);
      ++cycle;
    }
    rep.scalar("cycle_length", cycle);
    rep.scalar("single_cycle", cycle == static_cast<long long>(words.size()));
    rep.table("permutation", {"word", "image"}, rows);
  } else if (op == "vershik-orbit") {
    const BratteliDiagram d = parse_diagram(cfg.at("diagram"));
    const int n = cfg.at("length").get<int>();
    OrderedPath p = extreme_path(d, n, false);
    const OrderedPath start = p;
    std::vector<std::vector<std::string>> rows;
    long long count = 0;
    for (;;) {
      rows.push_back({std::to_string(count), to_string(path_to_word(p),
                                                       Alphabet::digits(16))});
      p = vershik_successor(d, p);
      ++count;
      if (p == start) break;
      if (count > d.count_paths(n) + 1) throw Error("vershik orbit failed to close");
    }
    rep.scalar("orbit_length", count);
    rep.scalar("path_count", d.count_paths(n));
    rep.table("orbit", {"step", "order_indices"}, rows);
  } else if (op == "intertwine") {
    const OdometerSpec spec = parse_odometer(cfg.at("odometer"));
    const int depth = cfg.at("depth").get<int>();
    const BratteliDiagram d = BratteliDiagram::odometer(spec, depth);
    const Language lang = spec.language();
    bool ok = true;
    for (const auto& w : lang.level_words(depth)) {
      const Point p(w, Word({0}));
      const Point q = odometer_step(spec, p, 1);
      OrderedPath path = odometer_point_to_path(spec, p, depth);
      ok = ok && (path_to_word(vershik_successor(d, path)) == q.prefix(depth));
    }
    rep.scalar("paths", lang.count_level(depth));
    rep.scalar("intertwine", ok ? "PASS" : "FAIL");
  } else {
    throw Error("unknown dynamics op: " + op);
  }
}

void run_k0(const json& cfg, Report& rep) {
  const std::string op = cfg.at("op").get<std::string>();
  if (op == "telescope" || op == "compare") {
    const BratteliDiagram d = parse_diagram(cfg.at("diagram"));
    auto parse_elem = [&](const json& j) {
      return DimensionGroupElement{j.at("level").get<int>(),
                                   j.at("vector").get<std::vector<long long>>()};
    };
    if (op == "telescope") {
      const auto e = parse_elem(cfg.at("element"));
      const auto out = k0_telescope(d, e, cfg.at("to_level").get<int>());
      rep.scalar("level", out.level);
      rep.scalar("vector", out.vec);
    } else {
      const auto verdict = k0_compare(d, parse_elem(cfg.at("a")), parse_elem(cfg.at("b")),
                                      cfg.value("slack", 3));
      rep.scalar("compare", verdict == K0Compare::Equal      ? "equal"
                            : verdict == K0Compare::Distinct ? "distinct"
                                                             : "undecided");
    }
  } else if (op == "odometer-class") {
    const OdometerSpec spec = parse_odometer(cfg.at("odometer"));
    const auto f = parse_combination(cfg.at("combination"), spec.language());
    const auto cls = odometer_k0_class(spec, f);
    rep.scalar("numerator", cls.numerator);
    rep.scalar("denominator_level", cls.denominator_level);
    rep.scalar("denominator", spec.level_product(cls.denominator_level));
  } else if (op == "hom-validate" || op == "hom-eval") {
    const Language lang = parse_language(cfg.at("language"));
    std::vector<std::pair<Word, long long>> pairs;
    for (const auto& row : cfg.at("values"))
      pairs.push_back({parse_word(row.at(0).get<std::string>(), lang.alphabet()),
                       row.at(1).get<long long>()});
    const IndexHom hom = IndexHom::from_pairs(lang, cfg.at("level").get<int>(), pairs);
    if (op == "hom-validate") {
      rep.scalar("valid", index_hom_validate(hom, cfg.value("depth", hom.level())));
      std::vector<std::vector<std::string>> rows;
      for (const auto& [w, v] : hom.table(hom.level()))
        rows.push_back({to_string(w, lang.alphabet()), std::to_string(v)});
      rep.table("generators", {"word", "value"}, rows);
    } else {
      const auto f = parse_combination(cfg.at("combination"), lang);
      rep.scalar("value", index_hom_eval(hom, f));
    }
  } else {
    throw Error("unknown k0 op: " + op);
  }
}

// Expected w_1 from the explicit matrix display: entries 0, 1, e^{+-i pi/4}/sqrt 2.
Mat expected_w1() {
  Mat w = Mat::Zero(8, 8);
  const std::complex<double> a = std::polar(1.0 / std::sqrt(2.0), 3.14159265358979323846 / 4.0);
  const std::complex<double> b = std::conj(a);
  w(0, 5) = 1;
  w(1, 1) = a;
  w(1, 6) = b;
  w(2, 2) = 1;
  w(3, 3) = 1;
  w(4, 4) = 1;
  w(5, 0) = 1;
  w(6, 1) = b;
  w(6, 6) = a;
  w(7, 7) = 1;
  return w;
}

void run_gm_demo(const json& cfg, Report& rep, double tol) {
  const int n = cfg.at("level").get<int>();
  const BlockMatrix w = gm_w(n);
  std::vector<std::vector<std::string>> rows;
  for (size_t blk = 0; blk < w.blocks.size(); ++blk)
    for (int i = 0; i < w.blocks[blk].rows(); ++i)
      for (int j = 0; j < w.blocks[blk].cols(); ++j) {
        const auto v = w.blocks[blk](i, j);
        if (std::abs(v) < 1e-14) continue;
        rows.push_back({std::to_string(blk), std::to_string(i + 1), std::to_string(j + 1),
                        num(v.real()), num(v.imag())});
      }
  rep.table("w_entries", {"block", "row", "col", "re", "im"}, rows);
  bool all_pass = true;
  std::vector<std::vector<std::string>> checks;
  auto check = [&](const std::string& name, bool ok) {
    checks.push_back({name, ok ? "PASS" : "FAIL"});
    all_pass = all_pass && ok;
  };
  if (n == 1) {
    const Mat expect = expected_w1();
    bool pattern = true, values = true;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const bool nz_have = std::abs(w.blocks[0](i, j)) > tol;
        const bool nz_want = std::abs(expect(i, j)) > 0;
        pattern = pattern && (nz_have == nz_want);
        values = values && std::abs(w.blocks[0](i, j) - expect(i, j)) <= tol;
      }
    check("w1_sparsity_pattern", pattern);
    check("w1_values", values && (w.blocks[1] - Mat::Identity(5, 5)).norm() <= tol);
  }
  check("w_unitary", w.is_unitary(tol));
  {
    const BlockMatrix z = gm_z(n);
    Mat zf = z.blocks[0];
    for (int i = 1; i < (1 << n); ++i) zf = zf * z.blocks[0];
    auto [n1, n2] = gm_level_sizes(n + 1);
    Mat expect = Mat::Identity(n1, n1);
    expect(0, 0) = 0;
    expect(n2, n2) = 0;
    expect(0, n2) = 1;
    expect(n2, 0) = 1;
    check("z_root_of_swap", (zf - expect).cwiseAbs().maxCoeff() <= tol);
  }
  for (int k = 1; k < n; ++k) {
    auto [k1, k2] = gm_level_sizes(k);
    bool commutes = true;
    for (int blk = 0; blk < 2 && commutes; ++blk) {
      const int size = blk == 0 ? k1 : k2;
      for (int i = 0; i < size && commutes; ++i) {
        std::vector<std::vector<int>> pattern{std::vector<int>(k1, 0), std::vector<int>(k2, 0)};
        pattern[blk][i] = 1;
        const BlockMatrix f = gm_include_to(gm_diagonal_projection(k, pattern), n + 1);
        commutes = (f * w - w * f).norm() <= tol;
      }
    }
    check("commutes_with_level_" + std::to_string(k) + "_units", commutes);
  }
  rep.table("checks", {"check", "status"}, checks);
  rep.scalar("status", all_pass ? "PASS" : "FAIL");
  if (!all_pass) throw Error("gm-demo checks failed");
}

void run_pair_even(const json& cfg, Report& rep, unsigned long long seed) {
  const Language lang = parse_language(cfg.at("language"));
  const Alphabet& a = lang.alphabet();
  const int order = cfg.value("trace_order", 2);
  std::vector<std::pair<ChoicePair, Word>> cases;
  if (cfg.contains("random_cases")) {
    if (lang.kind() != Language::Kind::Full)
      throw Error("random pair generation needs a full shift");
    const long long count = cfg.at("random_cases").get<long long>();
    const int max_level = cfg.value("max_word_level", 6);
    std::mt19937_64 gen(seed);
    auto random_word = [&](int max_len, int min_len) {
      const int len = min_len + static_cast<int>(gen() % (max_len - min_len + 1));
      std::vector<Symbol> syms;
      for (int i = 0; i < len; ++i)
        syms.push_back(static_cast<Symbol>(gen() % a.size()));
      return Word(syms);
    };
    for (long long i = 0; i < count; ++i) {
      ChoiceFunction plus(lang, ChoiceFunction::Rule::ConstantTail, random_word(3, 1));
      ChoiceFunction minus(lang, ChoiceFunction::Rule::ConstantTail, random_word(3, 1));
      cases.push_back({ChoicePair(plus, minus), random_word(max_level, 0)});
    }
  } else {
    const ChoicePair pair = parse_pair(cfg.at("pair"), lang);
    for (const auto& w : cfg.at("words"))
      cases.push_back({pair, parse_word(w.get<std::string>(), a)});
  }
  std::vector<std::vector<std::string>> rows;
  bool all_agree = true;
  for (const auto& [pair, mu] : cases) {
    const long long count = even_bp_pairing(pair, mu);
    const int L = std::max<int>(static_cast<int>(mu.size()),
                                pair.restriction ? static_cast<int>(pair.restriction->size()) : 0);
    const long long rank = even_rank_pairing(pair, mu, L);
    const auto tr = even_trace_formula(pair, IndicatorCombination::cylinder(mu), order, L);
    const long long traced = std::llround(tr.real());
    const bool agree = (count == rank) && (count == traced) && std::abs(tr.imag()) < 1e-9 &&
                       std::abs(tr.real() - traced) < 1e-9;
    all_agree = all_agree && agree;
    rows.push_back({to_string(mu, a), std::to_string(count), std::to_string(rank),
                    num(tr.real()), agree ? "yes" : "no"});
  }
  rep.scalar("all_agree", all_agree);
  rep.table("pairings", {"word", "combinatorial", "fredholm", "trace", "agree"}, rows);
}

void run_pair_odd(const json& cfg, Report& rep) {
  const Language lang = parse_language(cfg.at("language"));
  const Alphabet& a = lang.alphabet();
  std::optional<OdometerSpec> dyn;
  if (cfg.contains("odometer")) dyn = parse_odometer(cfg.at("odometer"));
  std::vector<Word> N;
  for (const auto& w : cfg.at("N")) N.push_back(parse_word(w.get<std::string>(), a));
  OddCycleSpec spec(parse_choice(cfg.at("tau"), lang), N,
                    cfg.value("side", "positive") == "positive" ? Side::Positive : Side::Negative,
                    dyn);
  const int k = cfg.value("power", 1);
  const int M = cfg.value("M", std::abs(k) + 2);
  const int L = cfg.value("L", 4);
  const int order = cfg.value("trace_order", 1);
  const auto f = CrossedElement::u_power(k);
  const long long combinatorial = odd_pairing(spec, k);
  const long long fredholm = odd_fredholm_index(spec, f, M, L);
  const auto tr = odd_trace_formula(spec, f, order, M, L);
  const long long traced = std::llround(tr.real());
  const bool agree = combinatorial == fredholm && combinatorial == traced &&
                     std::abs(tr.real() - traced) < 1e-9 && std::abs(tr.imag()) < 1e-9;
  std::vector<std::vector<std::string>> rows{
      {"u^" + std::to_string(k), std::to_string(combinatorial), std::to_string(fredholm),
       num(std::abs(tr.real())), agree ? "yes" : "no"}};
  rep.scalar("N_size", spec.N.size());
  if (spec.had_duplicates) rep.scalar("warning", "duplicate N words were deduplicated");
  rep.scalar("all_agree", agree);
  rep.table("pairings", {"element", "combinatorial", "fredholm", "trace_magnitude", "agree"},
            rows);
}

void run_trace(const json& cfg, Report& rep) {
  const std::string parity = cfg.at("parity").get<std::string>();
  if (parity == "even") {
    const Language lang = parse_language(cfg.at("language"));
    const ChoicePair pair = parse_pair(cfg.at("pair"), lang);
    const auto f = parse_combination(cfg.at("f"), lang);
    const auto v =
        even_trace_formula(pair, f, cfg.value("n", 2), cfg.value("L", f.max_level()));
    rep.scalar("value_re", num(v.real()));
    rep.scalar("value_im", num(v.imag()));
    rep.scalar("magnitude", num(std::abs(v)));
  } else {
    const Language lang = parse_language(cfg.at("language"));
    std::optional<OdometerSpec> dyn;
    if (cfg.contains("odometer")) dyn = parse_odometer(cfg.at("odometer"));
    std::vector<Word> N;
    for (const auto& w : cfg.at("N")) N.push_back(parse_word(w.get<std::string>(), lang.alphabet()));
    OddCycleSpec spec(parse_choice(cfg.at("tau"), lang), N,
                      cfg.value("side", "positive") == "positive" ? Side::Positive
                                                                  : Side::Negative,
                      dyn);
    const auto f = parse_crossed(cfg.at("f"), lang);
    const auto v = odd_trace_formula(spec, f, cfg.value("n", 1), cfg.value("M", 4),
                                     cfg.value("L", 4));
    rep.scalar("value_re", num(v.real()));
    rep.scalar("value_im", num(v.imag()));
    rep.scalar("magnitude", num(std::abs(v)));
  }
}

void run_summability(const json& cfg, Report& rep) {
  const double W = cfg.at("W").get<double>();
  const double p = cfg.at("p").get<double>();
  const int depth = cfg.value("depth", 30);
  WeightedDirac d{W, cfg.value("rule", std::string("even")) == "lift"
                         ? WeightedDirac::Rule::OddLift
                         : WeightedDirac::Rule::EvenWordWeight};
  std::vector<long long> counts;
  double base = 0;
  if (cfg.contains("counts")) {
    counts = cfg.at("counts").get<std::vector<long long>>();
  } else {
    const Language lang = parse_language(cfg.at("language"));
    for (int n = 0; n <= depth; ++n) counts.push_back(lang.count_level(n));
    base = static_cast<double>(lang.alphabet().size());
  }
  const auto report = summability_report(d, counts, p, depth);
  rep.scalar("partial_sum", num(report.partial_sum));
  rep.scalar("verdict", verdict_name(report.verdict));
  if (report.verdict == Verdict::Summable) rep.scalar("tail_bound", num(report.tail_bound));
  rep.scalar("growth_lo", num(report.growth_lo));
  rep.scalar("growth_hi", num(report.growth_hi));
  std::vector<std::vector<std::string>> rows;
  const double wp = std::pow(W, p);
  double geo = 0, geo_term = 2.0 - 1.0 / wp;
  for (int j = 0; j < static_cast<int>(report.partial_by_depth.size()); ++j) {
    std::vector<std::string> row{std::to_string(j), num(report.partial_by_depth[j])};
    if (base > 0) {
      geo += geo_term;
      row.push_back(num(geo));
      geo_term *= base / wp;
    }
    rows.push_back(row);
  }
  rep.table("partials",
            base > 0 ? std::vector<std::string>{"depth", "partial", "paper_bound"}
                     : std::vector<std::string>{"depth", "partial"},
            rows);
}

json choice_to_json(const ChoiceFunction& cf) {
  json out;
  out["rule"] = cf.rule() == ChoiceFunction::Rule::MinTail ? "min-tail" : "constant-tail";
  if (cf.rule() == ChoiceFunction::Rule::ConstantTail)
    out["tail"] = to_string(cf.tail(), cf.language().alphabet());
  if (!cf.overrides().empty()) {
    json o = json::object();
    for (const auto& [w, p] : cf.overrides())
      o[to_string(w, cf.language().alphabet())] = to_string(p, cf.language().alphabet());
    out["overrides"] = o;
  }
  return out;
}

void run_synthesize(const json& cfg, Report& rep) {
  const Language lang = parse_language(cfg.at("language"));
  const Alphabet& a = lang.alphabet();
  const int level = cfg.at("level").get<int>();
  std::vector<std::pair<Word, long long>> pairs;
  for (const auto& row : cfg.at("target"))
    pairs.push_back({parse_word(row.at(0).get<std::string>(), a), row.at(1).get<long long>()});
  const IndexHom target = IndexHom::from_pairs(lang, level, pairs);
  const auto desc = synthesize_index(target, level);
  rep.scalar("components", desc.components.size());
  if (desc.base_word) rep.scalar("base_word", to_string(*desc.base_word, a));
  json comps = json::array();
  for (const auto& comp : desc.components) {
    json c;
    c["plus"] = choice_to_json(comp.plus);
    c["minus"] = choice_to_json(comp.minus);
    if (comp.restriction) c["restriction"] = to_string(*comp.restriction, a);
    comps.push_back(c);
  }
  rep.scalar("description", comps);
  json overflow = json::array();
  for (const auto& w : desc.overflow_words) overflow.push_back(to_string(w, a));
  rep.scalar("overflow_words", overflow);
  const bool ok = verify_synthesis(desc, target, level);
  rep.scalar("verified", ok ? "PASS" : "FAIL");
  if (!ok) throw Error("synthesis verification failed");
}

void run_crossed(const json& cfg, Report& rep) {
  const std::string op = cfg.at("op").get<std::string>();
  const OdometerSpec spec = parse_odometer(cfg.at("odometer"));
  const Language lang = spec.language();
  const Alphabet& a = lang.alphabet();
  if (op == "apply") {
    const auto g = parse_crossed(cfg.at("g"), lang);
    const ChoiceFunction tau = parse_choice(cfg.at("tau"), lang);
    const auto image = covariant_apply(spec, g, tau, cfg.at("m").get<int>(),
                                       parse_word(cfg.at("word").get<std::string>(), a),
                                       cfg.value("window", 16));
    std::vector<std::vector<std::string>> rows;
    for (const auto& [m, amp] : image.components)
      rows.push_back({std::to_string(m), num(amp)});
    rep.scalar("overflow", image.overflow);
    rep.table("components", {"m", "amplitude"}, rows);
    return;
  }
  const ChoicePair pair = parse_pair(cfg.at("pair"), lang);
  const HSWZTriple triple(pair, cfg.at("W").get<double>(), cfg.at("p").get<double>(), spec);
  if (op == "spectrum") {
    const auto eig = hswz_spectrum(triple, cfg.value("n_max", 8), cfg.value("m_max", 8),
                                   cfg.value("word_level", 3));
    const size_t limit = cfg.value("limit", 50);
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < std::min(limit, eig.size()); ++i)
      rows.push_back({std::to_string(i), num(eig[i])});
    rep.scalar("count", eig.size());
    rep.table("eigenvalues", {"index", "lambda"}, rows);
  } else if (op == "summability") {
    const auto report = hswz_summability(triple, cfg.at("q").get<double>(), cfg.value("depth", 20));
    rep.scalar("partial_sum", num(report.partial_sum));
    rep.scalar("verdict", verdict_name(report.verdict));
    rep.scalar("boundary_excluded", report.boundary);
    if (report.verdict == Verdict::Summable) rep.scalar("tail_estimate", num(report.tail_estimate));
  } else if (op == "decay") {
    const auto report = hswz_commutator_decay(triple, parse_word(cfg.at("word").get<std::string>(), a),
                                              cfg.value("m_lo", -50), cfg.value("m_hi", 50));
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : report.rows)
      rows.push_back({std::to_string(row.m), std::to_string(row.rank_difference), num(row.norm),
                      num(row.bound)});
    rep.scalar("fitted_M", num(report.fitted_m));
    rep.scalar("bound_holds", report.bound_holds);
    rep.table("decay", {"m", "rank_difference", "norm", "bound"}, rows);
  } else if (op == "equicontinuity") {
    std::vector<Word> words;
    for (const auto& w : cfg.at("words")) words.push_back(parse_word(w.get<std::string>(), a));
    const double sup = equicontinuity_sup_check(pair, spec, words, cfg.value("m_lo", -50),
                                                cfg.value("m_hi", 50), cfg.value("W_dirac", 2.718281828459045));
    rep.scalar("sup_norm", num(sup));
  } else {
    throw Error("unknown crossed op: " + op);
  }
}

}  // namespace

std::vector<std::string> validate(const std::string& command, const std::string& config_text) {
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const std::exception& e) {
    return {std::string("malformed config document: ") + e.what()};
  }
  if (!cfg.is_object()) return {"config must be a JSON object"};
  Checker c{cfg, {}};
  bool known = false;
  for (const auto& name : kCommands) known = known || name == command;
  if (!known) return {"unknown command: " + command};
  try {
    validate_command(command, c);
  } catch (const std::exception& e) {
    c.fail(std::string("schema error: ") + e.what());
  }
  return c.errors;
}

std::string execute(const std::string& command, const std::string& config_text,
                    const std::string& format, double tolerance, unsigned long long seed) {
  const auto violations = validate(command, config_text);
  if (!violations.empty()) {
    std::string msg = "invalid config:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw Error(msg);
  }
  if (format != "dsv" && format != "doc") throw Error("format must be dsv or doc");
  const json cfg = json::parse(config_text);
  Report rep;
  rep.meta["version"] = kVersion;
  rep.meta["command"] = command;
  rep.meta["config_hash"] = config_hash(cfg);
  rep.meta["tolerance"] = num(tolerance);
  rep.meta["seed"] = seed;
  if (command == "space")
    run_space(cfg, rep);
  else if (command == "dynamics")
    run_dynamics(cfg, rep);
  else if (command == "k0")
    run_k0(cfg, rep);
  else if (command == "gm-demo")
    run_gm_demo(cfg, rep, tolerance);
  else if (command == "pair-even")
    run_pair_even(cfg, rep, seed);
  else if (command == "pair-odd")
    run_pair_odd(cfg, rep);
  else if (command == "trace")
    run_trace(cfg, rep);
  else if (command == "summability")
    run_summability(cfg, rep);
  else if (command == "synthesize")
    run_synthesize(cfg, rep);
  else if (command == "crossed")
    run_crossed(cfg, rep);
  return rep.render(format);
}

RunResult run(const std::vector<std::string>& args) {
  RunResult res;
  std::string command, config_path, out_path, format = "dsv";
  double tolerance = 1e-9;
  unsigned long long seed = 12345;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= args.size()) throw Error("missing value for " + arg);
      return args[++i];
    };
    try {
      if (arg == "--config")
        config_path = next();
      else if (arg == "--out")
        out_path = next();
      else if (arg == "--format")
        format = next();
      else if (arg == "--tolerance")
        tolerance = std::stod(next());
      else if (arg == "--seed")
        seed = std::stoull(next());
      else if (!arg.empty() && arg[0] != '-' && command.empty())
        command = arg;
      else {
        res.err = "{\"error\": \"unknown argument\", \"argument\": \"" + arg + "\"}\n";
        res.exit_code = 2;
        return res;
      }
    } catch (const std::exception& e) {
      res.err = std::string("{\"error\": \"bad argument\", \"detail\": \"") + e.what() + "\"}\n";
      res.exit_code = 2;
      return res;
    }
  }
  if (command.empty() || config_path.empty()) {
    res.err = "{\"error\": \"usage\", \"detail\": \"cantor-index <command> --config <path> "
              "[--out <path>] [--format dsv|doc] [--tolerance <float>] [--seed <int>]\"}\n";
    res.exit_code = 2;
    return res;
  }
  std::ifstream in(config_path);
  if (!in) {
    res.err = "{\"error\": \"cannot read config\", \"path\": \"" + config_path + "\"}\n";
    res.exit_code = 2;
    return res;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto violations = validate(command, buffer.str());
  if (!violations.empty()) {
    json err;
    err["error"] = "invalid config";
    err["violations"] = violations;
    res.err = err.dump() + "\n";
    res.exit_code = 2;
    return res;
  }
  try {
    res.out = execute(command, buffer.str(), format, tolerance, seed);
  } catch (const std::exception& e) {
    json err;
    err["error"] = "execution failed";
    err["detail"] = e.what();
    res.err = err.dump() + "\n";
    res.exit_code = 1;
    return res;
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      res.err = "{\"error\": \"cannot write output\", \"path\": \"" + out_path + "\"}\n";
      res.exit_code = 1;
      return res;
    }
    out << res.out;
  }
  return res;
}

}  // namespace cantor::cli
