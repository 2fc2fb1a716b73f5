#pragma once

// The golden-mean orbit-breaking AF filtration: block sizes (5,3), (8,5),
// (13,8), ..., the inclusion (T1,T2) -> (diag(T1,T2), T1), the cyclic-shift
// unitaries v_n, the root-of-swap unitaries z, the index-shift sigma, the
// products w_n, and the embedding iota on diagonal projections.

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cantor/words.hpp"

namespace cantor {

using Mat = Eigen::MatrixXcd;

struct BlockMatrix {
  int level = 1;
  std::vector<Mat> blocks;

  BlockMatrix() = default;
  BlockMatrix(int level_, std::vector<Mat> blocks_);

  BlockMatrix adjoint() const;
  BlockMatrix operator*(const BlockMatrix& o) const;
  BlockMatrix operator-(const BlockMatrix& o) const;
  double norm() const;  // max block operator norm
  bool is_unitary(double tol) const;
  bool is_projection(double tol) const;
};

std::pair<int, int> gm_level_sizes(int n);
BlockMatrix gm_identity(int n);
// Diagonal 0/1 block matrix from per-block diagonal patterns.
BlockMatrix gm_diagonal_projection(int n, const std::vector<std::vector<int>>& diag01);

// (T1, T2) -> (diag(T1, T2), T1).
BlockMatrix gm_include(const BlockMatrix& t);
BlockMatrix gm_include_to(const BlockMatrix& t, int to_level);

// Cyclic basis shifts i -> i+1 (mod size) on both blocks; lives at level n.
BlockMatrix gm_v(int n);

// Identity except the 2x2 principal submatrix on indices {1, n2+1} of the
// first block at level n+1, a 2^n-th root of the swap there (Hadamard
// conjugate of diag(1, e^{i pi/2^n})).
BlockMatrix gm_z(int n);

// Cyclic index shift: sigma(S)_{ij} = S_{(i-1)(j-1)} with wraparound;
// equals conjugation by the cyclic shift matrix.
Mat gm_sigma(const Mat& s);

// w_n = (v_{n+1} incl(v_n)^* sigma(z^{2^n-1}) sigma^2(z^{2^n-2}) ...
//        sigma^{2^n-1}(z), Id); lives at level n+1.
BlockMatrix gm_w(int n);

// w_1^{-1} ... w_n^{-1} f w_n ... w_1 for a diagonal projection f at level
// n, computed at level n+1.
BlockMatrix embed_iota(const BlockMatrix& f, double tol = 1e-9);

// Block rank vector of a projection (K0 class data at its level).
std::vector<long long> block_ranks(const BlockMatrix& p, double tol = 1e-9);

// Index homomorphism on the AF filtration: one integer per block.
struct AfIndexHom {
  int level = 1;
  std::vector<long long> values;
};

// Dual transport of an AF index hom one level up: J with S^T J = I for the
// golden-mean transition S = [[1,1],[1,0]].
AfIndexHom af_index_transport(const AfIndexHom& I);
AfIndexHom af_index_transport_to(const AfIndexHom& I, int to_level);

// sum_k rank_k(p) * I_k at p's level.
long long rave_af_pairing(const AfIndexHom& I, const BlockMatrix& p, double tol = 1e-9);

}  // namespace cantor
