#pragma once

#include <array>
#include <vector>

#include "cbrec/tensor.hpp"

namespace cbrec::ad {

// Canonical list of differentiable op names. The gradient-check suite is
// driven off this list, so an op added here without a corresponding test
// sampler fails the suite.
const std::vector<std::string>& op_names();

// --- elementwise ---
template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> scale(const Tensor<T>& a, T s);
template <typename T> Tensor<T> relu(const Tensor<T>& a);

// x [..., n] plus a length-n bias vector applied to the last axis.
template <typename T> Tensor<T> add_bias(const Tensor<T>& x, const Tensor<T>& bias);

// --- linear algebra ---
// a [m,k] x b [k,n] -> [m,n]
template <typename T> Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);
// Batched: a [B,m,k] x b [B,k,n] -> [B,m,n]. Inner sums are evaluated in a
// value-canonical order so results are invariant to batch-row permutations of
// the operands that permute the summands.
template <typename T> Tensor<T> bmm(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> transpose12(const Tensor<T>& x); // [B,m,n] -> [B,n,m]

// --- convolution (zero padding; stride 1 or 2) ---
// x [Cin,H,W], w [Cout,Cin,kh,kw], bias [Cout] (may be undefined)
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 int stride, int pad);
// x [Cin,D,H,W], w [Cout,Cin,kd,kh,kw]
template <typename T>
Tensor<T> conv3d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 int stride, int pad);

// --- resampling ---
template <typename T> Tensor<T> avg_pool2d(const Tensor<T>& x);         // 2x2, stride 2
template <typename T> Tensor<T> upsample_nearest2d(const Tensor<T>& x); // x2

// --- reductions / structure ---
// Elementwise max over same-shape tensors; gradient routes to the first
// maximizer.
template <typename T> Tensor<T> max_over(const std::vector<Tensor<T>>& xs);
template <typename T> Tensor<T> concat(const std::vector<Tensor<T>>& xs, int axis);
template <typename T> Tensor<T> reshape(const Tensor<T>& x, Shape shape);
template <typename T> Tensor<T> sum_all(const Tensor<T>& x); // -> [1]
// vec [n] -> [rows, n]
template <typename T> Tensor<T> broadcast_rows(const Tensor<T>& vec, int rows);

// --- normalization ---
// Softmax over the last axis; the denominator uses a value-canonical sum so
// the result is stable under permutations of that axis.
template <typename T> Tensor<T> softmax_lastdim(const Tensor<T>& x);
// Layer normalization over the last axis with per-feature gain/shift.
template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta);

// --- differentiable grid sampling (zero extension outside the grid) ---
// Gradients flow to the sampled field only; coordinates are plain data.
// field [C,H,W], coords (x,y) pairs -> [P,C]
template <typename T>
Tensor<T> grid_sample2d(const Tensor<T>& field,
                        const std::vector<std::array<double, 2>>& coords);
// field [C,D,H,W], coords (x,y,z) -> [P,C]
template <typename T>
Tensor<T> grid_sample3d(const Tensor<T>& field,
                        const std::vector<std::array<double, 3>>& coords);

} // namespace cbrec::ad
