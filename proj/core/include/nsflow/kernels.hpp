// Copyright 2026 The NSFlow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "nsflow/workload.hpp"

// Golden reference kernels. Deliberately brute-force: these are the oracles
// the array simulator and the functional SIMD layer are checked against.
namespace nsflow::kernels {

using IntVec = std::vector<std::int64_t>;
using IntMat = std::vector<IntVec>;
using RealVec = std::vector<double>;
using RealMat = std::vector<RealVec>;

/// Circular convolution: C[n] = sum_k A[k] * B[(n-k) mod d].
IntVec circ_conv(const IntVec& a, const IntVec& b);

/// Circular correlation, the unbinding counterpart of circ_conv:
/// C[n] = sum_k A[(n+k) mod d] * B[k].  corr(A, delta) == A, and
/// corr(A, B) == conv(A, reverse(B) rotated right by one).
IntVec circ_corr(const IntVec& a, const IntVec& b);

enum class BlockOp { Conv, Corr };

/// Applies a circular op independently to each aligned b-sized block.
/// Requires b to divide the vector length.
IntVec blockwise(BlockOp op, const IntVec& a, const IntVec& b, std::int64_t block);

/// Cosine similarity of `query` against each codebook row. Zero-norm rows
/// score 0; when `diagnostics` is non-null a note is appended per such row.
RealVec similarity(const RealVec& query, const RealMat& codebook,
                   std::vector<std::string>* diagnostics = nullptr);

/// Exact integer matrix product (m x n) * (n x k).
IntMat gemm(const IntMat& a, const IntMat& b);

// Element-wise reference math used by the SIMD functional layer.
RealVec vec_add(const RealVec& a, const RealVec& b);
RealVec vec_mul(const RealVec& a, const RealVec& b);
RealVec vec_div(const RealVec& a, const RealVec& b);  // throws on zero divisor
RealVec vec_exp(const RealVec& a);
RealVec vec_log(const RealVec& a);                    // throws on non-positive
RealVec vec_tanh(const RealVec& a);
double l2_norm(const RealVec& a);
RealVec softmax(const RealVec& a);
double reduce_sum(const RealVec& a);

/// Dispatcher keyed by the workload's element-wise op classes. mul_div runs
/// the multiply route; division and log error paths live in vec_div/vec_log.
RealVec elemwise(ElemwiseOpKind op, const std::vector<RealVec>& inputs);

struct QuantParams {
  double scale = 1.0;                   // > 0
  Precision precision = Precision::INT8;  // integer kinds only
};

/// Symmetric round-to-nearest-even quantization, clamped to the precision
/// range ([-128,127] for INT8, [-8,7] for INT4).
IntVec quantize(const RealVec& x, const QuantParams& q);
RealVec dequantize(const IntVec& x, const QuantParams& q);

std::int64_t quant_min(Precision p);
std::int64_t quant_max(Precision p);

}  // namespace nsflow::kernels
