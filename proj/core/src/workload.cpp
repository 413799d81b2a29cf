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

#include "nsflow/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nsflow {

using nlohmann::json;

const char* precision_name(Precision p) {
  switch (p) {
    case Precision::FP16: return "fp16";
    case Precision::FP8: return "fp8";
    case Precision::INT8: return "int8";
    case Precision::INT4: return "int4";
  }
  return "int8";
}

Precision precision_from_name(const std::string& name) {
  if (name == "fp16") return Precision::FP16;
  if (name == "fp8") return Precision::FP8;
  if (name == "int8") return Precision::INT8;
  if (name == "int4") return Precision::INT4;
  throw std::runtime_error("unknown precision \"" + name + "\"");
}

std::uint64_t bytes_for(Precision p, std::uint64_t elements) {
  switch (p) {
    case Precision::FP16: return elements * 2;
    case Precision::FP8: return elements;
    case Precision::INT8: return elements;
    case Precision::INT4: return (elements + 1) / 2;
  }
  return elements;
}

const char* vsa_op_name(VsaOpKind k) {
  switch (k) {
    case VsaOpKind::Bind: return "bind";
    case VsaOpKind::Unbind: return "unbind";
    case VsaOpKind::Similarity: return "similarity";
  }
  return "bind";
}

VsaOpKind vsa_op_from_name(const std::string& name) {
  if (name == "bind") return VsaOpKind::Bind;
  if (name == "unbind") return VsaOpKind::Unbind;
  if (name == "similarity") return VsaOpKind::Similarity;
  throw std::runtime_error("unknown vsa op \"" + name + "\"");
}

const char* elemwise_op_name(ElemwiseOpKind k) {
  switch (k) {
    case ElemwiseOpKind::Add: return "add";
    case ElemwiseOpKind::MulDiv: return "mul_div";
    case ElemwiseOpKind::ExpLogTanh: return "exp_log_tanh";
    case ElemwiseOpKind::Norm: return "norm";
    case ElemwiseOpKind::Softmax: return "softmax";
    case ElemwiseOpKind::ReduceSum: return "reduce_sum";
  }
  return "add";
}

ElemwiseOpKind elemwise_op_from_name(const std::string& name) {
  if (name == "add") return ElemwiseOpKind::Add;
  if (name == "mul_div") return ElemwiseOpKind::MulDiv;
  if (name == "exp_log_tanh") return ElemwiseOpKind::ExpLogTanh;
  if (name == "norm") return ElemwiseOpKind::Norm;
  if (name == "softmax") return ElemwiseOpKind::Softmax;
  if (name == "reduce_sum") return ElemwiseOpKind::ReduceSum;
  throw std::runtime_error("unknown elemwise op \"" + name + "\"");
}

int WorkloadSpec::find(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// Fill in defaulted byte fields from the dims and declared precision.
void apply_byte_defaults(OperatorNode& node) {
  if (node.is_layer()) {
    auto& l = std::get<LayerDims>(node.payload);
    const auto u = [](std::int64_t v) { return static_cast<std::uint64_t>(v); };
    if (l.filter_bytes == 0) l.filter_bytes = bytes_for(node.precision, u(l.n) * u(l.k));
    if (l.ifmap_bytes == 0) l.ifmap_bytes = bytes_for(node.precision, u(l.m) * u(l.n));
    if (l.ofmap_bytes == 0) l.ofmap_bytes = bytes_for(node.precision, u(l.m) * u(l.k));
  } else if (node.is_vsa()) {
    auto& v = std::get<VsaDims>(node.payload);
    if (v.data_bytes == 0) {
      v.data_bytes = bytes_for(node.precision,
                               static_cast<std::uint64_t>(v.n_vec) *
                                   static_cast<std::uint64_t>(v.d));
    }
  }
}

void line_col_of(const std::string& text, std::size_t byte, int* line, int* col) {
  *line = 1;
  *col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++*line;
      *col = 1;
    } else {
      ++*col;
    }
  }
}

// Finds one dependency cycle and returns its node ids in order.
std::vector<std::string> find_cycle(const WorkloadSpec& spec) {
  const int n = static_cast<int>(spec.nodes.size());
  std::vector<int> color(n, 0);  // 0 white, 1 gray, 2 black
  std::vector<int> stack;
  std::vector<std::string> cycle;

  // Iterative DFS over dependency edges (node -> its deps).
  std::function<bool(int)> dfs = [&](int u) -> bool {
    color[u] = 1;
    stack.push_back(u);
    for (const auto& dep : spec.nodes[u].deps) {
      int v = spec.find(dep);
      if (v < 0) continue;
      if (color[v] == 1) {
        auto it = std::find(stack.begin(), stack.end(), v);
        for (; it != stack.end(); ++it) cycle.push_back(spec.nodes[*it].id);
        return true;
      }
      if (color[v] == 0 && dfs(v)) return true;
    }
    color[u] = 2;
    stack.pop_back();
    return false;
  };
  for (int i = 0; i < n; ++i) {
    if (color[i] == 0 && dfs(i)) return cycle;
  }
  return {};
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  return out;
}

}  // namespace

std::vector<Diagnostic> validate(const WorkloadSpec& spec) {
  std::vector<Diagnostic> out;
  if (spec.nodes.empty()) {
    out.push_back({"", "workload has no nodes"});
    return out;
  }
  if (spec.loop_count < 1) out.push_back({"", "loop_count must be >= 1"});

  std::set<std::string> seen;
  for (const auto& node : spec.nodes) {
    if (!seen.insert(node.id).second) {
      out.push_back({node.id, "duplicate node id"});
    }
  }
  for (const auto& node : spec.nodes) {
    if (node.is_layer()) {
      const auto& l = node.layer();
      if (l.m < 1) out.push_back({node.id, "m >= 1"});
      if (l.n < 1) out.push_back({node.id, "n >= 1"});
      if (l.k < 1) out.push_back({node.id, "k >= 1"});
    } else if (node.is_vsa()) {
      const auto& v = node.vsa();
      if (v.n_vec < 1) out.push_back({node.id, "n_vec >= 1"});
      if (v.d < 1) out.push_back({node.id, "d >= 1"});
      if (v.block < 1 || v.d % v.block != 0) {
        out.push_back({node.id, "block must divide d"});
      }
    } else {
      const auto& e = node.elemwise();
      if (e.elements < 1) out.push_back({node.id, "elements >= 1"});
    }
    for (const auto& dep : node.deps) {
      if (spec.find(dep) < 0) {
        out.push_back({node.id, "dangling dependency \"" + dep + "\""});
      }
      if (dep == node.id) {
        out.push_back({node.id, "self-dependency"});
      }
    }
  }

  auto cycle = find_cycle(spec);
  if (!cycle.empty()) {
    out.push_back({cycle.front(), "dependency cycle: {" + join_ids(cycle) + "}"});
  }

  // Weak connectivity: one DAG per loop iteration.
  if (cycle.empty()) {
    const int n = static_cast<int>(spec.nodes.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
      for (const auto& dep : spec.nodes[i].deps) {
        int j = spec.find(dep);
        if (j >= 0) {
          adj[i].push_back(j);
          adj[j].push_back(i);
        }
      }
    }
    std::vector<bool> vis(n, false);
    std::vector<int> todo{0};
    vis[0] = true;
    int reached = 1;
    while (!todo.empty()) {
      int u = todo.back();
      todo.pop_back();
      for (int v : adj[u]) {
        if (!vis[v]) {
          vis[v] = true;
          ++reached;
          todo.push_back(v);
        }
      }
    }
    if (reached != n) {
      for (int i = 0; i < n; ++i) {
        if (!vis[i]) {
          out.push_back({spec.nodes[i].id, "node not connected to the rest of the graph"});
          break;
        }
      }
    }
  }
  return out;
}

WorkloadSpec parse_workload(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    line_col_of(text, e.byte > 0 ? e.byte - 1 : 0, &line, &col);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what(),
                     line, col);
  }

  WorkloadSpec spec;
  try {
    spec.name = doc.value("name", "");
    spec.loop_count = doc.value("loop_count", std::int64_t{1});
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
      throw std::runtime_error("missing \"nodes\" array");
    }
    for (const auto& jn : doc["nodes"]) {
      OperatorNode node;
      node.id = jn.at("id").get<std::string>();
      node.precision = precision_from_name(jn.value("precision", "int8"));
      if (jn.contains("deps")) node.deps = jn["deps"].get<std::vector<std::string>>();
      const std::string kind = jn.at("kind").get<std::string>();
      if (kind == "layer") {
        LayerDims l;
        l.m = jn.at("m").get<std::int64_t>();
        l.n = jn.at("n").get<std::int64_t>();
        l.k = jn.at("k").get<std::int64_t>();
        l.filter_bytes = jn.value("filter_bytes", std::uint64_t{0});
        l.ifmap_bytes = jn.value("ifmap_bytes", std::uint64_t{0});
        l.ofmap_bytes = jn.value("ofmap_bytes", std::uint64_t{0});
        node.payload = l;
      } else if (kind == "vsa") {
        VsaDims v;
        v.n_vec = jn.at("n_vec").get<std::int64_t>();
        v.d = jn.at("d").get<std::int64_t>();
        v.block = jn.value("block", v.d);
        v.op_kind = vsa_op_from_name(jn.value("op", "bind"));
        v.data_bytes = jn.value("data_bytes", std::uint64_t{0});
        node.payload = v;
      } else if (kind == "elemwise") {
        ElemwiseDims e;
        e.elements = jn.at("elements").get<std::int64_t>();
        e.op_kind = elemwise_op_from_name(jn.value("op", "add"));
        node.payload = e;
      } else {
        throw std::runtime_error("unknown node kind \"" + kind + "\" in node \"" + node.id + "\"");
      }
      apply_byte_defaults(node);
      spec.nodes.push_back(std::move(node));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("workload document error: ") + e.what());
  }

  auto diags = validate(spec);
  if (!diags.empty()) {
    std::string msg = "invalid workload:";
    for (const auto& d : diags) {
      msg += "\n  ";
      if (!d.node_id.empty()) msg += d.node_id + ": ";
      msg += d.message;
    }
    throw std::runtime_error(msg);
  }
  return spec;
}

std::string serialize(const WorkloadSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["loop_count"] = spec.loop_count;
  doc["nodes"] = json::array();
  for (const auto& node : spec.nodes) {
    json jn;
    jn["id"] = node.id;
    jn["precision"] = precision_name(node.precision);
    jn["deps"] = node.deps;
    if (node.is_layer()) {
      const auto& l = node.layer();
      jn["kind"] = "layer";
      jn["m"] = l.m;
      jn["n"] = l.n;
      jn["k"] = l.k;
      jn["filter_bytes"] = l.filter_bytes;
      jn["ifmap_bytes"] = l.ifmap_bytes;
      jn["ofmap_bytes"] = l.ofmap_bytes;
    } else if (node.is_vsa()) {
      const auto& v = node.vsa();
      jn["kind"] = "vsa";
      jn["op"] = vsa_op_name(v.op_kind);
      jn["n_vec"] = v.n_vec;
      jn["d"] = v.d;
      jn["block"] = v.block;
      jn["data_bytes"] = v.data_bytes;
    } else {
      const auto& e = node.elemwise();
      jn["kind"] = "elemwise";
      jn["op"] = elemwise_op_name(e.op_kind);
      jn["elements"] = e.elements;
    }
    doc["nodes"].push_back(jn);
  }
  return doc.dump(2) + "\n";
}

namespace {

OperatorNode make_layer(std::string id, std::int64_t m, std::int64_t n, std::int64_t k,
                        Precision p, std::vector<std::string> deps) {
  OperatorNode node;
  node.id = std::move(id);
  node.payload = LayerDims{m, n, k, 0, 0, 0};
  node.precision = p;
  node.deps = std::move(deps);
  apply_byte_defaults(node);
  return node;
}

OperatorNode make_vsa(std::string id, std::int64_t n_vec, std::int64_t d, std::int64_t block,
                      VsaOpKind op, Precision p, std::vector<std::string> deps) {
  OperatorNode node;
  node.id = std::move(id);
  node.payload = VsaDims{n_vec, d, block, op, 0};
  node.precision = p;
  node.deps = std::move(deps);
  apply_byte_defaults(node);
  return node;
}

OperatorNode make_elemwise(std::string id, std::int64_t elements, ElemwiseOpKind op,
                           Precision p, std::vector<std::string> deps) {
  OperatorNode node;
  node.id = std::move(id);
  node.payload = ElemwiseDims{elements, op};
  node.precision = p;
  node.deps = std::move(deps);
  return node;
}

WorkloadSpec tiny_nsai() {
  WorkloadSpec spec;
  spec.name = "tiny-nsai";
  spec.loop_count = 1;
  spec.nodes.push_back(make_layer("l1", 4, 8, 8, Precision::INT8, {}));
  spec.nodes.push_back(make_vsa("v1", 2, 8, 8, VsaOpKind::Bind, Precision::INT4, {"l1"}));
  return spec;
}

struct ResnetGemm {
  const char* id;
  std::int64_t m, n, k;
};

// ResNet18 at 224x224 lowered to GEMM dims (17 convs, 3 downsample convs, fc).
constexpr ResnetGemm kResnet18[] = {
    {"conv1", 12544, 147, 64},
    {"l1b1c1", 3136, 576, 64},  {"l1b1c2", 3136, 576, 64},
    {"l1b2c1", 3136, 576, 64},  {"l1b2c2", 3136, 576, 64},
    {"l2b1c1", 784, 576, 128},  {"l2b1c2", 784, 1152, 128},
    {"l2b1ds", 784, 64, 128},   {"l2b2c1", 784, 1152, 128},
    {"l2b2c2", 784, 1152, 128},
    {"l3b1c1", 196, 1152, 256}, {"l3b1c2", 196, 2304, 256},
    {"l3b1ds", 196, 128, 256},  {"l3b2c1", 196, 2304, 256},
    {"l3b2c2", 196, 2304, 256},
    {"l4b1c1", 49, 2304, 512},  {"l4b1c2", 49, 4608, 512},
    {"l4b1ds", 49, 256, 512},   {"l4b2c1", 49, 4608, 512},
    {"l4b2c2", 49, 4608, 512},
    {"fc", 1, 512, 1000},
};

// Synthetic vector-symbolic population mixed into the ablation workload:
// mostly short block-code binds plus every seventh a wider unbind node.
constexpr std::int64_t kVsaSmallNvec = 2048;
constexpr std::int64_t kVsaSmallD = 8;
constexpr std::int64_t kVsaWideNvec = 1024;
constexpr std::int64_t kVsaWideD = 32;
constexpr int kVsaWideEvery = 7;
constexpr int kVsaChainWidth = 4;
constexpr std::int64_t kResnetSymbolicLoops = 3;

WorkloadSpec resnet18_symbolic(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::runtime_error("resnet18-symbolic ratio must be in (0,1)");
  }
  WorkloadSpec spec;
  char buf[64];
  std::snprintf(buf, sizeof buf, "resnet18-symbolic(%g)", ratio);
  spec.name = buf;
  spec.loop_count = kResnetSymbolicLoops;

  std::string prev;
  std::uint64_t nn_bytes = 0;
  for (const auto& g : kResnet18) {
    std::vector<std::string> deps;
    if (!prev.empty()) deps.push_back(prev);
    auto node = make_layer(g.id, g.m, g.n, g.k, Precision::INT8, deps);
    const auto& l = node.layer();
    nn_bytes += l.filter_bytes + l.ifmap_bytes + l.ofmap_bytes;
    spec.nodes.push_back(std::move(node));
    prev = g.id;
  }
  // Residual adds ride along as attached element-wise work; they depend on
  // each block's second conv and feed the SIMD sizing, not the layer chain.
  const char* add_after[] = {"l1b1c2", "l1b2c2", "l2b1c2", "l2b2c2",
                             "l3b1c2", "l3b2c2", "l4b1c2", "l4b2c2"};
  for (int i = 0; i < 8; ++i) {
    const std::string src = add_after[i];
    const auto& l = spec.nodes[static_cast<std::size_t>(spec.find(src))].layer();
    spec.nodes.push_back(make_elemwise("add" + std::to_string(i + 1), l.m * l.k,
                                       ElemwiseOpKind::Add, Precision::INT8, {src}));
  }

  const std::uint64_t target = static_cast<std::uint64_t>(
      std::llround(ratio / (1.0 - ratio) * static_cast<double>(nn_bytes)));
  std::uint64_t total = 0;
  int idx = 0;
  std::vector<OperatorNode> vsa_nodes;
  while (true) {
    const bool wide = (idx % kVsaWideEvery) == kVsaWideEvery - 1;
    const std::int64_t nv = wide ? kVsaWideNvec : kVsaSmallNvec;
    const std::int64_t d = wide ? kVsaWideD : kVsaSmallD;
    const std::uint64_t nb = bytes_for(Precision::INT4,
                                       static_cast<std::uint64_t>(nv) *
                                           static_cast<std::uint64_t>(d));
    if (total + nb > target) break;
    char vid[16];
    std::snprintf(vid, sizeof vid, "v%05d", idx);
    vsa_nodes.push_back(make_vsa(vid, nv, d, d,
                                 wide ? VsaOpKind::Unbind : VsaOpKind::Bind,
                                 Precision::INT4, {}));
    total += nb;
    ++idx;
  }
  // Remainder node pins the byte share exactly (data_bytes overridden).
  if (total < target || vsa_nodes.empty()) {
    const std::uint64_t rem = target - total;
    const std::int64_t nv = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(rem) /
                        static_cast<double>(bytes_for(Precision::INT4, kVsaSmallD))));
    char vid[16];
    std::snprintf(vid, sizeof vid, "v%05d", idx);
    auto node = make_vsa(vid, nv, kVsaSmallD, kVsaSmallD, VsaOpKind::Bind,
                         Precision::INT4, {});
    std::get<VsaDims>(node.payload).data_bytes = std::max<std::uint64_t>(rem, 1);
    vsa_nodes.push_back(std::move(node));
  }
  // Wire the nodes as kVsaChainWidth parallel chains hanging off fc.
  for (std::size_t i = 0; i < vsa_nodes.size(); ++i) {
    if (i < kVsaChainWidth) {
      vsa_nodes[i].deps = {"fc"};
    } else {
      vsa_nodes[i].deps = {vsa_nodes[i - kVsaChainWidth].id};
    }
    spec.nodes.push_back(std::move(vsa_nodes[i]));
  }
  return spec;
}

}  // namespace

WorkloadSpec builtin_workload(const std::string& name) {
  if (name == "tiny-nsai") return tiny_nsai();
  const std::string prefix = "resnet18-symbolic(";
  if (name.rfind(prefix, 0) == 0 && name.back() == ')') {
    const std::string arg = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    std::size_t pos = 0;
    double ratio = std::stod(arg, &pos);
    if (pos != arg.size()) throw std::runtime_error("bad ratio \"" + arg + "\"");
    return resnet18_symbolic(ratio);
  }
  throw std::runtime_error("unknown builtin workload \"" + name + "\"");
}

std::string workload_hash(const WorkloadSpec& spec) {
  const std::string text = serialize(spec);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nsflow
