#include "cantor/af_golden.hpp"

#include <cmath>

namespace cantor {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_sizes(const BlockMatrix& t) {
  auto [n1, n2] = gm_level_sizes(t.level);
  if (t.blocks.size() != 2 || t.blocks[0].rows() != n1 || t.blocks[0].cols() != n1 ||
      t.blocks[1].rows() != n2 || t.blocks[1].cols() != n2)
    throw Error("block sizes do not match the filtration level");
}

}  // namespace

BlockMatrix::BlockMatrix(int level_, std::vector<Mat> blocks_)
    : level(level_), blocks(std::move(blocks_)) {
  check_sizes(*this);
}

BlockMatrix BlockMatrix::adjoint() const {
  BlockMatrix out = *this;
  for (auto& b : out.blocks) b = b.adjoint().eval();
  return out;
}

BlockMatrix BlockMatrix::operator*(const BlockMatrix& o) const {
  if (level != o.level) throw Error("block matrix level mismatch");
  BlockMatrix out = *this;
  for (size_t k = 0; k < blocks.size(); ++k) out.blocks[k] = blocks[k] * o.blocks[k];
  return out;
}

BlockMatrix BlockMatrix::operator-(const BlockMatrix& o) const {
  if (level != o.level) throw Error("block matrix level mismatch");
  BlockMatrix out = *this;
  for (size_t k = 0; k < blocks.size(); ++k) out.blocks[k] = blocks[k] - o.blocks[k];
  return out;
}

double BlockMatrix::norm() const {
  double n = 0;
  for (const auto& b : blocks) {
    if (b.size() == 0) continue;
    Eigen::JacobiSVD<Mat> svd(b);
    n = std::max(n, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
  }
  return n;
}

bool BlockMatrix::is_unitary(double tol) const {
  for (const auto& b : blocks)
    if ((b.adjoint() * b - Mat::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff() > tol)
      return false;
  return true;
}

bool BlockMatrix::is_projection(double tol) const {
  for (const auto& b : blocks) {
    if ((b * b - b).cwiseAbs().maxCoeff() > tol) return false;
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

std::pair<int, int> gm_level_sizes(int n) {
  if (n < 1) throw Error("filtration level must be >= 1");
  int n1 = 5, n2 = 3;
  for (int k = 1; k < n; ++k) {
    int next = n1 + n2;
    n2 = n1;
    n1 = next;
  }
  return {n1, n2};
}

BlockMatrix gm_identity(int n) {
  auto [n1, n2] = gm_level_sizes(n);
  return BlockMatrix(n, {Mat::Identity(n1, n1), Mat::Identity(n2, n2)});
}

BlockMatrix gm_diagonal_projection(int n, const std::vector<std::vector<int>>& diag01) {
  auto [n1, n2] = gm_level_sizes(n);
  if (diag01.size() != 2 || static_cast<int>(diag01[0].size()) != n1 ||
      static_cast<int>(diag01[1].size()) != n2)
    throw Error("diagonal pattern sizes do not match the filtration level");
  BlockMatrix out = gm_identity(n);
  for (int k = 0; k < 2; ++k)
    for (size_t i = 0; i < diag01[k].size(); ++i) {
      if (diag01[k][i] != 0 && diag01[k][i] != 1) throw Error("diagonal pattern must be 0/1");
      out.blocks[k](i, i) = diag01[k][i];
    }
  return out;
}

BlockMatrix gm_include(const BlockMatrix& t) {
  check_sizes(t);
  auto [n1, n2] = gm_level_sizes(t.level);
  Mat big = Mat::Zero(n1 + n2, n1 + n2);
  big.topLeftCorner(n1, n1) = t.blocks[0];
  big.bottomRightCorner(n2, n2) = t.blocks[1];
  return BlockMatrix(t.level + 1, {big, t.blocks[0]});
}

BlockMatrix gm_include_to(const BlockMatrix& t, int to_level) {
  if (to_level < t.level) throw Error("inclusion target below current level");
  BlockMatrix out = t;
  while (out.level < to_level) out = gm_include(out);
  return out;
}

BlockMatrix gm_v(int n) {
  auto [n1, n2] = gm_level_sizes(n);
  auto cyclic = [](int k) {
    Mat m = Mat::Zero(k, k);
    for (int i = 0; i < k; ++i) m((i + 1) % k, i) = 1.0;
    return m;
  };
  return BlockMatrix(n, {cyclic(n1), cyclic(n2)});
}

BlockMatrix gm_z(int n) {
  if (n < 1) throw Error("level must be >= 1");
  auto [n1, n2] = gm_level_sizes(n + 1);
  const double theta = kPi / std::ldexp(1.0, n);
  const std::complex<double> e(std::cos(theta), std::sin(theta));
  // Hadamard conjugate of diag(1, e^{i theta}).
  const std::complex<double> a = (1.0 + e) / 2.0;
  const std::complex<double> b = (1.0 - e) / 2.0;
  Mat first = Mat::Identity(n1, n1);
  const int p = 0, q = n2;  // 0-based pivot indices {1, n2+1}
  first(p, p) = a;
  first(p, q) = b;
  first(q, p) = b;
  first(q, q) = a;
  return BlockMatrix(n + 1, {first, Mat::Identity(n2, n2)});
}

Mat gm_sigma(const Mat& s) {
  if (s.rows() != s.cols()) throw Error("sigma needs a square matrix");
  const int k = static_cast<int>(s.rows());
  Mat out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = s((i + k - 1) % k, (j + k - 1) % k);
  return out;
}

BlockMatrix gm_w(int n) {
  if (n < 1) throw Error("level must be >= 1");
  const BlockMatrix z = gm_z(n);
  const BlockMatrix vnext = gm_v(n + 1);
  const BlockMatrix vincl = gm_include(gm_v(n));
  Mat first = vnext.blocks[0] * vincl.blocks[0].adjoint();
  const long long count = (1LL << n) - 1;
  Mat zpow = z.blocks[0];
  std::vector<Mat> powers(count + 1);  // powers[e] = z^e on the first block
  powers[1] = zpow;
  for (long long e = 2; e <= count; ++e) powers[e] = powers[e - 1] * powers[1];
  for (long long j = 1; j <= count; ++j) {
    Mat factor = powers[count + 1 - j];
    for (long long r = 0; r < j; ++r) factor = gm_sigma(factor);
    first = first * factor;
  }
  auto [n1, n2] = gm_level_sizes(n + 1);
  return BlockMatrix(n + 1, {first, Mat::Identity(n2, n2)});
}

BlockMatrix embed_iota(const BlockMatrix& f, double tol) {
  if (!f.is_projection(tol)) throw Error("iota input must be a projection");
  const int n = f.level;
  BlockMatrix conj = gm_include(f);
  // w_1^{-1} ... w_n^{-1} f w_n ... w_1 with every w_j included to level n+1.
  BlockMatrix left = gm_identity(n + 1);
  for (int j = 1; j <= n; ++j) left = left * gm_include_to(gm_w(j), n + 1).adjoint();
  return left * conj * left.adjoint();
}

std::vector<long long> block_ranks(const BlockMatrix& p, double tol) {
  if (!p.is_projection(tol)) throw Error("not a projection");
  std::vector<long long> ranks;
  for (const auto& b : p.blocks) {
    const double tr = b.trace().real();
    const long long r = std::llround(tr);
    if (std::abs(tr - r) > tol) throw Error("projection trace is not near an integer");
    ranks.push_back(r);
  }
  return ranks;
}

AfIndexHom af_index_transport(const AfIndexHom& I) {
  if (I.values.size() != 2) throw Error("golden-mean index hom has two blocks");
  // S = [[1,1],[1,0]]: S^T J = I has J = ((S^T)^{-1}) I = [[0,1],[1,-1]] I.
  return AfIndexHom{I.level + 1, {I.values[1], I.values[0] - I.values[1]}};
}

AfIndexHom af_index_transport_to(const AfIndexHom& I, int to_level) {
  if (to_level < I.level) throw Error("transport target below current level");
  AfIndexHom out = I;
  while (out.level < to_level) out = af_index_transport(out);
  return out;
}

long long rave_af_pairing(const AfIndexHom& I, const BlockMatrix& p, double tol) {
  if (I.level != p.level) throw Error("index hom level does not match projection level");
  auto ranks = block_ranks(p, tol);
  if (ranks.size() != I.values.size()) throw Error("block count mismatch");
  long long out = 0;
  for (size_t k = 0; k < ranks.size(); ++k) out += ranks[k] * I.values[k];
  return out;
}

}  // namespace cantor
