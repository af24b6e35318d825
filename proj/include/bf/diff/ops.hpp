#pragma once

#include <span>
#include <vector>

#include "bf/diff/tape.hpp"

namespace bf::diff {

// Boolean attention/softmax mask; true = entry participates.
struct Mask {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> allowed;  // rows*cols

  static Mask all(int rows, int cols, bool value = true) {
    return {rows, cols, std::vector<uint8_t>(static_cast<size_t>(rows) * cols, value ? 1 : 0)};
  }
  uint8_t& at(int r, int c) { return allowed[static_cast<size_t>(r) * cols + c]; }
  uint8_t at(int r, int c) const { return allowed[static_cast<size_t>(r) * cols + c]; }
};

// Elementwise and broadcast arithmetic.
int add(Tape& t, int a, int b);
int sub(Tape& t, int a, int b);
int mul(Tape& t, int a, int b);
int scale(Tape& t, int a, double s);
int add_rowvec(Tape& t, int x, int v);  // v is [1, C], broadcast over rows
int mul_rowvec(Tape& t, int x, int v);

// Linear algebra.
int matmul(Tape& t, int a, int b);     // [m,k] x [k,n]
int matmul_nt(Tape& t, int a, int b);  // [m,k] x [n,k]^T
int linear(Tape& t, int x, int w, int b);  // x*w + bias row

// Nonlinearities and normalization.
int relu(Tape& t, int x);
int layer_norm(Tape& t, int x);  // per-row, no affine; eps = 1e-12

// Row-wise softmax; a fully masked row yields all zeros.
int softmax(Tape& t, int x);
int softmax_masked(Tape& t, int x, const Mask& mask);

// softmax(q k^T / sqrt(d), mask) v — composed from the primitives above.
int scaled_dot_attention(Tape& t, int q, int k, int v, const Mask& mask);

// Shape plumbing.
int concat_rows(Tape& t, std::span<const int> ids);
int concat_cols(Tape& t, std::span<const int> ids);
int slice_rows(Tape& t, int x, int r0, int r1);
int slice_cols(Tape& t, int x, int c0, int c1);
int reshape(Tape& t, int x, int rows, int cols);
int mean_pool_rows(Tape& t, int x);  // [n,c] -> [1,c]
int cumsum_rows(Tape& t, int x);
int sum_all(Tape& t, int x);  // -> [1,1]

// Losses.
int smooth_l1(Tape& t, int pred, const Array& target);          // mean reduction, beta=1
int cross_entropy(Tape& t, int logits, int label);              // logits [1,K]
int l2_norm_loss(Tape& t, int a, const Array& b, double eps_smooth = 1e-12);
int l2_norm_loss(Tape& t, int a, int b, double eps_smooth = 1e-12);
int squared_l2_loss(Tape& t, int a, const Array& b);            // sum of squares

}  // namespace bf::diff
