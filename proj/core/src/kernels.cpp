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

#include "nsflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsflow::kernels {

namespace {

void require_same_length(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("vector length mismatch: " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
}

}  // namespace

IntVec circ_conv(const IntVec& a, const IntVec& b) {
  require_same_length(a, b);
  const std::int64_t d = static_cast<std::int64_t>(a.size());
  IntVec c(a.size(), 0);
  for (std::int64_t n = 0; n < d; ++n) {
    std::int64_t acc = 0;
    for (std::int64_t k = 0; k < d; ++k) {
      acc += a[k] * b[((n - k) % d + d) % d];
    }
    c[n] = acc;
  }
  return c;
}

IntVec circ_corr(const IntVec& a, const IntVec& b) {
  require_same_length(a, b);
  const std::int64_t d = static_cast<std::int64_t>(a.size());
  IntVec c(a.size(), 0);
  for (std::int64_t n = 0; n < d; ++n) {
    std::int64_t acc = 0;
    for (std::int64_t k = 0; k < d; ++k) {
      acc += a[(n + k) % d] * b[k];
    }
    c[n] = acc;
  }
  return c;
}

IntVec blockwise(BlockOp op, const IntVec& a, const IntVec& b, std::int64_t block) {
  require_same_length(a, b);
  const std::int64_t d = static_cast<std::int64_t>(a.size());
  if (block < 1 || d % block != 0) {
    throw std::invalid_argument("block size " + std::to_string(block) +
                                " does not divide vector length " +
                                std::to_string(d));
  }
  IntVec out(a.size());
  for (std::int64_t base = 0; base < d; base += block) {
    IntVec ab(a.begin() + base, a.begin() + base + block);
    IntVec bb(b.begin() + base, b.begin() + base + block);
    IntVec cb = op == BlockOp::Conv ? circ_conv(ab, bb) : circ_corr(ab, bb);
    for (std::int64_t i = 0; i < block; ++i) out[base + i] = cb[i];
  }
  return out;
}

RealVec similarity(const RealVec& query, const RealMat& codebook,
                   std::vector<std::string>* diagnostics) {
  double qn = 0;
  for (double v : query) qn += v * v;
  qn = std::sqrt(qn);
  RealVec out;
  out.reserve(codebook.size());
  for (std::size_t r = 0; r < codebook.size(); ++r) {
    const RealVec& row = codebook[r];
    if (row.size() != query.size()) {
      throw std::invalid_argument("codebook row " + std::to_string(r) +
                                  " dimension mismatch");
    }
    double rn = 0, dot = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      rn += row[i] * row[i];
      dot += row[i] * query[i];
    }
    rn = std::sqrt(rn);
    if (rn == 0.0 || qn == 0.0) {
      if (diagnostics) {
        diagnostics->push_back("zero-norm vector at codebook row " +
                               std::to_string(r));
      }
      out.push_back(0.0);
    } else {
      out.push_back(dot / (qn * rn));
    }
  }
  return out;
}

IntMat gemm(const IntMat& a, const IntMat& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (n == 0) throw std::invalid_argument("gemm: empty B");
  const std::size_t k = b[0].size();
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("gemm: A column count != B row count");
  }
  IntMat c(m, IntVec(k, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      const std::int64_t av = a[i][p];
      if (av == 0) continue;
      const IntVec& brow = b[p];
      for (std::size_t j = 0; j < k; ++j) c[i][j] += av * brow[j];
    }
  }
  return c;
}

RealVec vec_add(const RealVec& a, const RealVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_add: length mismatch");
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RealVec vec_mul(const RealVec& a, const RealVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_mul: length mismatch");
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

RealVec vec_div(const RealVec& a, const RealVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_div: length mismatch");
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0.0) throw std::domain_error("vec_div: division by zero at index " + std::to_string(i));
    out[i] = a[i] / b[i];
  }
  return out;
}

RealVec vec_exp(const RealVec& a) {
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::exp(a[i]);
  return out;
}

RealVec vec_log(const RealVec& a) {
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] <= 0.0) throw std::domain_error("vec_log: non-positive input at index " + std::to_string(i));
    out[i] = std::log(a[i]);
  }
  return out;
}

RealVec vec_tanh(const RealVec& a) {
  RealVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::tanh(a[i]);
  return out;
}

double l2_norm(const RealVec& a) {
  double s = 0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

RealVec softmax(const RealVec& a) {
  if (a.empty()) return {};
  double mx = a[0];
  for (double v : a) mx = std::max(mx, v);
  RealVec out(a.size());
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = std::exp(a[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double reduce_sum(const RealVec& a) {
  double s = 0;
  for (double v : a) s += v;
  return s;
}

RealVec elemwise(ElemwiseOpKind op, const std::vector<RealVec>& inputs) {
  auto need = [&](std::size_t n) {
    if (inputs.size() < n) {
      throw std::invalid_argument(std::string("elemwise ") + elemwise_op_name(op) +
                                  ": expected " + std::to_string(n) + " inputs");
    }
  };
  switch (op) {
    case ElemwiseOpKind::Add:
      need(2);
      return vec_add(inputs[0], inputs[1]);
    case ElemwiseOpKind::MulDiv:
      need(2);
      return vec_mul(inputs[0], inputs[1]);
    case ElemwiseOpKind::ExpLogTanh:
      need(1);
      return vec_tanh(inputs[0]);
    case ElemwiseOpKind::Norm:
      need(1);
      return {l2_norm(inputs[0])};
    case ElemwiseOpKind::Softmax:
      need(1);
      return softmax(inputs[0]);
    case ElemwiseOpKind::ReduceSum:
      need(1);
      return {reduce_sum(inputs[0])};
  }
  throw std::logic_error("elemwise: unknown op");
}

std::int64_t quant_min(Precision p) {
  switch (p) {
    case Precision::INT8: return -128;
    case Precision::INT4: return -8;
    default: throw std::invalid_argument("quant range defined for integer precisions only");
  }
}

std::int64_t quant_max(Precision p) {
  switch (p) {
    case Precision::INT8: return 127;
    case Precision::INT4: return 7;
    default: throw std::invalid_argument("quant range defined for integer precisions only");
  }
}

namespace {

// Round half to even, independent of the FP environment.
std::int64_t round_half_even(double x) {
  const double fl = std::floor(x);
  const double frac = x - fl;
  if (frac > 0.5) return static_cast<std::int64_t>(fl) + 1;
  if (frac < 0.5) return static_cast<std::int64_t>(fl);
  const auto lo = static_cast<std::int64_t>(fl);
  return (lo % 2 == 0) ? lo : lo + 1;
}

}  // namespace

IntVec quantize(const RealVec& x, const QuantParams& q) {
  if (q.scale <= 0.0) throw std::invalid_argument("quantize: scale must be positive");
  const std::int64_t lo = quant_min(q.precision);
  const std::int64_t hi = quant_max(q.precision);
  IntVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::int64_t v = round_half_even(x[i] / q.scale);
    out[i] = std::clamp(v, lo, hi);
  }
  return out;
}

RealVec dequantize(const IntVec& x, const QuantParams& q) {
  if (q.scale <= 0.0) throw std::invalid_argument("dequantize: scale must be positive");
  RealVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = static_cast<double>(x[i]) * q.scale;
  return out;
}

}  // namespace nsflow::kernels
