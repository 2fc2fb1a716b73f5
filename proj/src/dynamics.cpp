#include "cantor/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cantor {

OdometerSpec::OdometerSpec(std::vector<int> pre_, std::vector<int> per_)
    : pre(std::move(pre_)), per(std::move(per_)) {
  if (per.empty()) throw Error("odometer period must be nonempty");
  for (int d : pre)
    if (d < 2) throw Error("odometer digits must be >= 2");
  for (int d : per)
    if (d < 2) throw Error("odometer digits must be >= 2");
}

int OdometerSpec::digit(size_t pos) const {
  if (pos < pre.size()) return pre[pos];
  return per[(pos - pre.size()) % per.size()];
}

Language OdometerSpec::language() const { return Language::mixed_radix(pre, per); }

long long OdometerSpec::level_product(int m) const {
  long long p = 1;
  for (int i = 0; i < m; ++i) p *= digit(i);
  return p;
}

bool OdometerSpec::valid_point(const Point& p) const {
  const size_t probe = p.preperiod().size() + pre.size() +
                       std::lcm(p.period().size(), per.size()) + 1;
  for (size_t i = 0; i < probe; ++i)
    if (p.at(i) < 0 || p.at(i) >= digit(i)) return false;
  return true;
}

namespace {

// Smallest index where the point's digit differs from the target digit
// stream (all-max for +1 carry, all-zero for -1 borrow); nullopt when the
// point equals the target stream.
std::optional<size_t> first_digit_not(const OdometerSpec& spec, const Point& p, bool max_stream) {
  const size_t bound = p.preperiod().size() + spec.pre.size() +
                       std::lcm(p.period().size(), spec.per.size());
  for (size_t i = 0; i < bound; ++i) {
    const int target = max_stream ? spec.digit(i) - 1 : 0;
    if (p.at(i) != target) return i;
  }
  return std::nullopt;
}

Point stream_point(const OdometerSpec& spec, bool max_stream) {
  auto digit_of = [&](int d) { return max_stream ? d - 1 : 0; };
  std::vector<Symbol> pre, per;
  for (int d : spec.pre) pre.push_back(digit_of(d));
  for (int d : spec.per) per.push_back(digit_of(d));
  return Point(Word(pre), Word(per));
}

}  // namespace

Point odometer_step(const OdometerSpec& spec, const Point& p, int direction) {
  if (direction != 1 && direction != -1) throw Error("direction must be +1 or -1");
  if (!spec.valid_point(p)) throw Error("digit out of range for odometer");
  const bool forward = direction == 1;
  auto k = first_digit_not(spec, p, forward);
  if (!k) return stream_point(spec, !forward);  // all-max -> all-zero and back
  // Digits before k flip to the other stream, digit k moves by one, the tail
  // is unchanged. Materialize enough to keep the point eventually periodic.
  const size_t keep = std::max(p.preperiod().size(), *k + 1) + spec.pre.size() +
                      std::lcm(p.period().size(), spec.per.size());
  std::vector<Symbol> digits(keep);
  for (size_t i = 0; i < keep; ++i) digits[i] = p.at(i);
  for (size_t i = 0; i < *k; ++i) digits[i] = forward ? 0 : spec.digit(i) - 1;
  digits[*k] += forward ? 1 : -1;
  Word head(std::vector<Symbol>(digits.begin(), digits.begin() + keep - p.period().size()));
  Word tail(std::vector<Symbol>(digits.begin() + keep - p.period().size(), digits.end()));
  return Point(head, tail);
}

Word word_shift(const OdometerSpec& spec, const Word& w, long long k) {
  const int m = static_cast<int>(w.size());
  const long long mod = spec.level_product(m);
  long long v = 0;
  long long scale = 1;
  for (int i = 0; i < m; ++i) {
    if (w.at(i) < 0 || w.at(i) >= spec.digit(i)) throw Error("digit out of range for odometer");
    v += scale * w.at(i);
    scale *= spec.digit(i);
  }
  v = ((v + k) % mod + mod) % mod;
  std::vector<Symbol> out(m);
  for (int i = 0; i < m; ++i) {
    out[i] = static_cast<Symbol>(v % spec.digit(i));
    v /= spec.digit(i);
  }
  return Word(std::move(out));
}

std::vector<Word> cylinder_permutation(const OdometerSpec& spec, int m) {
  if (m < 1) throw Error("level must be >= 1");
  std::vector<Word> out;
  for (const auto& w : spec.language().level_words(m)) out.push_back(word_shift(spec, w, 1));
  return out;
}

int BratteliDiagram::incoming_count(int level, int vertex) const {
  return static_cast<int>(edge_orders.at(level - 1).at(vertex).size());
}

void BratteliDiagram::validate() const {
  if (vertex_counts.empty() || vertex_counts[0] != 1) throw Error("V_0 must be a single vertex");
  if (transitions.size() + 1 != vertex_counts.size() || edge_orders.size() != transitions.size())
    throw Error("diagram level counts do not chain");
  for (int n = 1; n <= depth(); ++n) {
    const auto& S = transitions[n - 1];
    if (static_cast<int>(S.size()) != vertex_counts[n]) throw Error("transition row count mismatch");
    std::vector<long long> outgoing(vertex_counts[n - 1], 0);
    for (int v = 0; v < vertex_counts[n]; ++v) {
      if (static_cast<int>(S[v].size()) != vertex_counts[n - 1])
        throw Error("transition column count mismatch");
      long long incoming = 0;
      for (int u = 0; u < vertex_counts[n - 1]; ++u) {
        if (S[v][u] < 0) throw Error("negative edge count");
        incoming += S[v][u];
        outgoing[u] += S[v][u];
      }
      if (incoming == 0) throw Error("vertex with no incoming edge");
      // The order must list each parallel edge exactly once.
      const auto& ord = edge_orders[n - 1][v];
      if (static_cast<long long>(ord.size()) != incoming) throw Error("edge order incomplete");
      std::set<std::pair<int, int>> seen;
      for (auto [u, copy] : ord) {
        if (u < 0 || u >= vertex_counts[n - 1] || copy < 0 || copy >= S[v][u])
          throw Error("edge order entry out of range");
        if (!seen.insert({u, copy}).second) throw Error("duplicate edge in order");
      }
    }
    for (int u = 0; u < vertex_counts[n - 1]; ++u)
      if (outgoing[u] == 0) throw Error("vertex with no outgoing edge");
  }
}

long long BratteliDiagram::count_paths(int n) const {
  std::vector<long long> into(1, 1);
  for (int level = 1; level <= n; ++level) {
    std::vector<long long> next(vertex_counts[level], 0);
    for (int v = 0; v < vertex_counts[level]; ++v)
      for (int u = 0; u < vertex_counts[level - 1]; ++u)
        next[v] += transitions[level - 1][v][u] * into[u];
    into = std::move(next);
  }
  return std::accumulate(into.begin(), into.end(), 0LL);
}

BratteliDiagram BratteliDiagram::odometer(const OdometerSpec& spec, int depth) {
  if (depth < 1) throw Error("depth must be >= 1");
  BratteliDiagram d;
  d.vertex_counts.assign(depth + 1, 1);
  for (int n = 1; n <= depth; ++n) {
    const long long dn = spec.digit(n - 1);
    d.transitions.push_back({{dn}});
    std::vector<std::pair<int, int>> order;
    for (int c = 0; c < dn; ++c) order.push_back({0, c});
    d.edge_orders.push_back({order});
  }
  d.validate();
  return d;
}

BratteliDiagram BratteliDiagram::golden_mean(int depth) {
  if (depth < 1) throw Error("depth must be >= 1");
  BratteliDiagram d;
  d.vertex_counts.assign(depth + 1, 2);
  d.vertex_counts[0] = 1;
  d.transitions.push_back({{1}, {1}});
  d.edge_orders.push_back({{{0, 0}}, {{0, 0}}});
  for (int n = 2; n <= depth; ++n) {
    d.transitions.push_back({{1, 1}, {1, 0}});
    // Labels from the figure: into the bottom vertex 0 from bottom, 1 from
    // top; into the top vertex the single label-2 edge from bottom.
    d.edge_orders.push_back({{{0, 0}, {1, 0}}, {{0, 0}}});
  }
  d.validate();
  return d;
}

BratteliDiagram BratteliDiagram::golden_mean_telescoped(int depth) {
  if (depth < 1) throw Error("depth must be >= 1");
  BratteliDiagram d;
  d.vertex_counts.assign(depth + 1, 2);
  d.vertex_counts[0] = 1;
  d.transitions.push_back({{1}, {1}});
  d.edge_orders.push_back({{{0, 0}}, {{0, 0}}});
  for (int n = 2; n <= depth; ++n) {
    d.transitions.push_back({{2, 1}, {1, 1}});
    // Minimal edges come from vertex 0 and maximal edges from vertex 1 at
    // both range vertices, so the extreme source chains funnel.
    d.edge_orders.push_back({{{0, 0}, {0, 1}, {1, 0}}, {{0, 0}, {1, 0}}});
  }
  d.validate();
  return d;
}

BratteliDiagram BratteliDiagram::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  BratteliDiagram d;
  d.vertex_counts = j.at("vertex_counts").get<std::vector<int>>();
  for (const auto& S : j.at("transitions"))
    d.transitions.push_back(S.get<std::vector<std::vector<long long>>>());
  for (const auto& lvl : j.at("edge_orders")) {
    std::vector<std::vector<std::pair<int, int>>> per_vertex;
    for (const auto& ord : lvl) {
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : ord) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
      per_vertex.push_back(std::move(edges));
    }
    d.edge_orders.push_back(std::move(per_vertex));
  }
  d.validate();
  return d;
}

std::string BratteliDiagram::to_json_text() const {
  nlohmann::json j;
  j["vertex_counts"] = vertex_counts;
  j["transitions"] = transitions;
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& lvl : edge_orders) {
    nlohmann::json per_vertex = nlohmann::json::array();
    for (const auto& ord : lvl) {
      nlohmann::json edges = nlohmann::json::array();
      for (auto [u, c] : ord) edges.push_back({u, c});
      per_vertex.push_back(edges);
    }
    orders.push_back(per_vertex);
  }
  j["edge_orders"] = orders;
  return j.dump(2);
}

int path_source(const BratteliDiagram& d, int level, const OrderedPath& p) {
  auto [v, idx] = p.edges.at(level - 1);
  return d.edge_orders.at(level - 1).at(v).at(idx).first;
}

void validate_path(const BratteliDiagram& d, const OrderedPath& p) {
  if (p.length() < 1 || p.length() > d.depth()) throw Error("path length out of range");
  int at = 0;
  for (int level = 1; level <= p.length(); ++level) {
    auto [v, idx] = p.edges[level - 1];
    if (v < 0 || v >= d.vertex_counts[level]) throw Error("path range vertex out of range");
    if (idx < 0 || idx >= d.incoming_count(level, v)) throw Error("path order index out of range");
    if (path_source(d, level, p) != at) throw Error("path edges do not chain");
    at = v;
  }
}

std::vector<OrderedPath> all_paths(const BratteliDiagram& d, int n) {
  std::vector<OrderedPath> out{OrderedPath{}};
  for (int level = 1; level <= n; ++level) {
    std::vector<OrderedPath> next;
    for (const auto& p : out) {
      const int at = p.edges.empty() ? 0 : p.edges.back().first;
      for (int v = 0; v < d.vertex_counts[level]; ++v) {
        const auto& ord = d.edge_orders[level - 1][v];
        for (int idx = 0; idx < static_cast<int>(ord.size()); ++idx) {
          if (ord[idx].first != at) continue;
          OrderedPath q = p;
          q.edges.push_back({v, idx});
          next.push_back(q);
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

OrderedPath extreme_path_to(const BratteliDiagram& d, int n, int vertex, bool maximal) {
  OrderedPath p;
  p.edges.resize(n);
  int v = vertex;
  for (int level = n; level >= 1; --level) {
    const int idx = maximal ? d.incoming_count(level, v) - 1 : 0;
    p.edges[level - 1] = {v, idx};
    v = d.edge_orders[level - 1][v][idx].first;
  }
  if (v != 0) throw Error("extreme path does not reach the root");
  return p;
}

namespace {

// Source of the extreme edge into a vertex.
int extreme_source(const BratteliDiagram& d, int level, int vertex, bool maximal) {
  const auto& ord = d.edge_orders[level - 1][vertex];
  return (maximal ? ord.back() : ord.front()).first;
}

}  // namespace

OrderedPath extreme_path(const BratteliDiagram& d, int n, bool maximal) {
  if (n < 1 || n > d.depth()) throw Error("level out of range");
  // Follow extreme-source chains backwards from every vertex of every deeper
  // level; the canonical extreme path exists when they land on one vertex.
  std::set<int> candidates;
  for (int v = 0; v < d.vertex_counts[n]; ++v) candidates.insert(v);
  for (int start = n + 1; start <= d.depth(); ++start) {
    std::set<int> reached;
    for (int v = 0; v < d.vertex_counts[start]; ++v) {
      int u = v;
      for (int level = start; level > n; --level) u = extreme_source(d, level, u, maximal);
      reached.insert(u);
    }
    candidates = reached;
    if (candidates.size() == 1) break;
  }
  if (candidates.size() != 1)
    throw Error("diagram not properly ordered at requested level: extreme path not unique");
  return extreme_path_to(d, n, *candidates.begin(), maximal);
}

OrderedPath vershik_successor(const BratteliDiagram& d, const OrderedPath& p) {
  validate_path(d, p);
  const int n = p.length();
  for (int k = 1; k <= n; ++k) {
    auto [v, idx] = p.edges[k - 1];
    if (idx + 1 >= d.incoming_count(k, v)) continue;
    OrderedPath q = p;
    q.edges[k - 1] = {v, idx + 1};
    const int src = d.edge_orders[k - 1][v][idx + 1].first;
    OrderedPath head = extreme_path_to(d, k - 1, src, /*maximal=*/false);
    std::copy(head.edges.begin(), head.edges.end(), q.edges.begin());
    return q;
  }
  if (p == extreme_path(d, n, /*maximal=*/true)) return extreme_path(d, n, /*maximal=*/false);
  throw Error("successor undefined at this truncation level (tower top)");
}

OrderedPath odometer_point_to_path(const OdometerSpec& spec, const Point& p, int n) {
  if (!spec.valid_point(p)) throw Error("digit out of range for odometer");
  OrderedPath path;
  for (int i = 0; i < n; ++i) path.edges.push_back({0, p.at(i)});
  return path;
}

Word path_to_word(const OrderedPath& p) {
  std::vector<Symbol> syms;
  for (auto [v, idx] : p.edges) syms.push_back(idx);
  return Word(std::move(syms));
}

}  // namespace cantor
