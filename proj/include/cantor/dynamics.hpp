#pragma once

// Minimal Cantor dynamics at desk scale: odometer add-with-carry maps on
// mixed-radix digit spaces, the induced permutations of level-m cylinders,
// and Vershik successor maps on finite truncations of ordered Bratteli
// diagram path spaces.

#include <iosfwd>
#include <utility>
#include <vector>

#include "cantor/words.hpp"

namespace cantor {

struct OdometerSpec {
  std::vector<int> pre;  // digit bounds d_1..d_k before the periodic tail
  std::vector<int> per;  // periodic digit bounds, nonempty, all >= 2

  OdometerSpec(std::vector<int> pre_, std::vector<int> per_);
  static OdometerSpec binary() { return OdometerSpec({}, {2}); }

  int digit(size_t pos) const;  // 0-based position
  Language language() const;
  long long level_product(int m) const;  // d_1 * ... * d_m
  bool valid_point(const Point& p) const;
};

// phi (direction +1) or phi^{-1} (direction -1).
Point odometer_step(const OdometerSpec& spec, const Point& p, int direction);

// Word at level m read as a little-endian mixed-radix integer, shifted by k
// modulo d_1...d_m. cylinder_permutation is word_shift(.,.,+1).
Word word_shift(const OdometerSpec& spec, const Word& w, long long k);

// Images of the lexicographically ordered level-m words under phi.
std::vector<Word> cylinder_permutation(const OdometerSpec& spec, int m);

// Ordered Bratteli diagram, truncated at a finite depth. Level 0 is the
// single root vertex. Edges into a vertex are stored in order: the order
// index of an edge is its position in the incoming list of its range vertex.
struct BratteliDiagram {
  // vertex_counts[n] = |V_n|; vertex_counts[0] == 1.
  std::vector<int> vertex_counts;
  // transitions[n-1] = S_n as |V_n| x |V_{n-1}| row-major counts.
  std::vector<std::vector<std::vector<long long>>> transitions;
  // edge_orders[n-1][v] = ordered incoming edges of vertex v at level n,
  // each as (source vertex, parallel copy index).
  std::vector<std::vector<std::vector<std::pair<int, int>>>> edge_orders;

  int depth() const { return static_cast<int>(vertex_counts.size()) - 1; }
  int incoming_count(int level, int vertex) const;
  void validate() const;

  long long count_paths(int n) const;
  static BratteliDiagram odometer(const OdometerSpec& spec, int depth);
  // Stationary diagram with S = [[1,1],[1,0]], edge orders taken from the
  // figure labels. Carries the golden-mean K-theory; its truncated Vershik
  // map has two towers per level.
  static BratteliDiagram golden_mean(int depth);
  // Two-level telescope [[2,1],[1,1]] with a properly ordered edge order
  // (unique extreme paths at every level).
  static BratteliDiagram golden_mean_telescoped(int depth);

  static BratteliDiagram from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// Path e_1..e_n stored as (range vertex, order index) per level.
struct OrderedPath {
  std::vector<std::pair<int, int>> edges;

  int length() const { return static_cast<int>(edges.size()); }
  bool operator==(const OrderedPath& o) const { return edges == o.edges; }
  bool operator<(const OrderedPath& o) const { return edges < o.edges; }
};

int path_source(const BratteliDiagram& d, int level, const OrderedPath& p);
void validate_path(const BratteliDiagram& d, const OrderedPath& p);
std::vector<OrderedPath> all_paths(const BratteliDiagram& d, int n);

// All-minimal (or all-maximal) path of length n ending at the given vertex.
OrderedPath extreme_path_to(const BratteliDiagram& d, int n, int vertex, bool maximal);

// The canonical extreme path of length n: the truncation of the unique
// infinite extreme path. Throws when the diagram's min/max source chains do
// not funnel to a single level-n vertex within the available depth.
OrderedPath extreme_path(const BratteliDiagram& d, int n, bool maximal);

// Vershik successor on length-n paths. Total on paths with a non-maximal
// edge; THE maximal path wraps to THE minimal path. Other all-maximal-edge
// paths are tower tops whose successor needs deeper data: error.
OrderedPath vershik_successor(const BratteliDiagram& d, const OrderedPath& p);

// Digit/edge dictionary for odometer diagrams.
OrderedPath odometer_point_to_path(const OdometerSpec& spec, const Point& p, int n);
Word path_to_word(const OrderedPath& p);

}  // namespace cantor
