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
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nsflow {

enum class Precision { FP16, FP8, INT8, INT4 };

const char* precision_name(Precision p);
Precision precision_from_name(const std::string& name);

/// Bytes for `elements` values of precision `p` (INT4 packs two per byte,
/// rounded up).
std::uint64_t bytes_for(Precision p, std::uint64_t elements);

/// GEMM-lowered layer: output rows m, inner dim n, weight columns k.
struct LayerDims {
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t k = 1;
  std::uint64_t filter_bytes = 0;  // defaults to bytes(n*k) at parse time
  std::uint64_t ifmap_bytes = 0;   // defaults to bytes(m*n)
  std::uint64_t ofmap_bytes = 0;   // defaults to bytes(m*k)

  bool operator==(const LayerDims&) const = default;
};

enum class VsaOpKind { Bind, Unbind, Similarity };

const char* vsa_op_name(VsaOpKind k);
VsaOpKind vsa_op_from_name(const std::string& name);

struct VsaDims {
  std::int64_t n_vec = 1;   // vector quantity
  std::int64_t d = 1;       // vector dimension
  std::int64_t block = 1;   // blockwise circular-conv block size, divides d
  VsaOpKind op_kind = VsaOpKind::Bind;
  std::uint64_t data_bytes = 0;  // defaults to bytes(n_vec*d)

  bool operator==(const VsaDims&) const = default;
};

enum class ElemwiseOpKind { Add, MulDiv, ExpLogTanh, Norm, Softmax, ReduceSum };

const char* elemwise_op_name(ElemwiseOpKind k);
ElemwiseOpKind elemwise_op_from_name(const std::string& name);

struct ElemwiseDims {
  std::int64_t elements = 1;
  ElemwiseOpKind op_kind = ElemwiseOpKind::Add;

  bool operator==(const ElemwiseDims&) const = default;
};

using NodePayload = std::variant<LayerDims, VsaDims, ElemwiseDims>;

struct OperatorNode {
  std::string id;
  NodePayload payload;
  Precision precision = Precision::INT8;
  std::vector<std::string> deps;

  bool is_layer() const { return std::holds_alternative<LayerDims>(payload); }
  bool is_vsa() const { return std::holds_alternative<VsaDims>(payload); }
  bool is_elemwise() const { return std::holds_alternative<ElemwiseDims>(payload); }
  const LayerDims& layer() const { return std::get<LayerDims>(payload); }
  const VsaDims& vsa() const { return std::get<VsaDims>(payload); }
  const ElemwiseDims& elemwise() const { return std::get<ElemwiseDims>(payload); }

  bool operator==(const OperatorNode&) const = default;
};

/// One loop iteration of the workload plus the loop count. Immutable after
/// construction; safe to share across readers.
struct WorkloadSpec {
  std::string name;
  std::int64_t loop_count = 1;
  std::vector<OperatorNode> nodes;

  /// Index of the node with `id`, or -1.
  int find(const std::string& id) const;

  bool operator==(const WorkloadSpec&) const = default;
};

/// Parse failure with 1-based line/column of the offending location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

struct Diagnostic {
  std::string node_id;  // empty for spec-level findings
  std::string message;
};

/// Parses and fully validates a workload document (see README for the
/// schema). Throws ParseError for malformed text, std::runtime_error with a
/// descriptive message for semantic violations (dangling deps, cycles, ...).
WorkloadSpec parse_workload(const std::string& text);

/// Canonical JSON form; parse_workload(serialize(s)) == s.
std::string serialize(const WorkloadSpec& spec);

/// Empty iff every invariant holds; each diagnostic names the violating node.
std::vector<Diagnostic> validate(const WorkloadSpec& spec);

/// Built-in workloads: "tiny-nsai" and "resnet18-symbolic(<ratio>)" where
/// ratio in (0,1) is the symbolic share of total memory.
WorkloadSpec builtin_workload(const std::string& name);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string workload_hash(const WorkloadSpec& spec);

}  // namespace nsflow
