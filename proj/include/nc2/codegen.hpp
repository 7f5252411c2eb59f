#pragma once

// Random linear network codes on a normalized two-unicast network.
//
// Source s_i exposes an interface of width k_{i-12} (its out-degree after
// normalization). Each outgoing edge of s_i carries a random combination of
// the interface symbols; every other edge carries a random combination of
// the symbols on the in-edges of its tail. Global coding vectors are
// expressed over the concatenated interface [s1 coordinates | s2 coordinates].

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nc2/error.hpp"
#include "nc2/gfmat.hpp"
#include "nc2/netgraph.hpp"
#include "nc2/rng.hpp"

namespace nc2 {

struct CodedNetwork {
  enum class EdgeKind { Source1, Source2, Relay };

  Network net;
  Field field;
  std::size_t width1 = 0;  // k_{1-12}
  std::size_t width2 = 0;  // k_{2-12}
  std::vector<EdgeKind> kind;
  // Relay edges: in-edges of the tail, ascending. Source edges: empty.
  std::vector<std::vector<std::size_t>> inputs;
  // a_{ij,n} over the source interface, or f_{m,n} aligned with inputs[n].
  std::vector<std::vector<Element>> local;
  std::vector<std::size_t> edge_order;       // every edge after all edges feeding its tail
  std::vector<std::vector<Element>> global;  // [alpha_n | beta_n], length width1 + width2

  std::size_t interface_width() const noexcept { return width1 + width2; }
};

struct TransferMatrices {
  Matrix h11, h12, h21, h22;

  // Relabel sessions: H'_{ij} = H_{(3-i)(3-j)}.
  TransferMatrices swapped() const { return {h22, h21, h12, h11}; }
  const Matrix& at(int i, int j) const {
    return i == 1 ? (j == 1 ? h11 : h12) : (j == 1 ? h21 : h22);
  }
};

namespace detail {

inline std::vector<std::size_t> edge_evaluation_order(const Network& net) {
  const auto order = topological_order(net);
  std::vector<std::size_t> pos(net.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<std::size_t> edges(net.edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = i;
  std::stable_sort(edges.begin(), edges.end(),
                   [&](std::size_t a, std::size_t b) { return pos[net.edges[a].tail] < pos[net.edges[b].tail]; });
  return edges;
}

}  // namespace detail

// Symbols on every edge given the interface symbols injected at s1 and s2.
// Forward simulation, independent of the global vectors.
inline std::vector<Element> propagate(const CodedNetwork& code, std::span<const Element> iface1,
                                      std::span<const Element> iface2) {
  if (iface1.size() != code.width1 || iface2.size() != code.width2)
    throw PreconditionError("propagate: interface symbol count mismatch");
  const Field& f = code.field;
  std::vector<Element> y(code.net.edges.size(), 0);
  for (std::size_t n : code.edge_order) {
    const auto& c = code.local[n];
    Element acc = 0;
    switch (code.kind[n]) {
      case CodedNetwork::EdgeKind::Source1:
        for (std::size_t j = 0; j < c.size(); ++j) acc = f.add(acc, f.mul(c[j], iface1[j]));
        break;
      case CodedNetwork::EdgeKind::Source2:
        for (std::size_t j = 0; j < c.size(); ++j) acc = f.add(acc, f.mul(c[j], iface2[j]));
        break;
      case CodedNetwork::EdgeKind::Relay:
        for (std::size_t j = 0; j < c.size(); ++j) acc = f.add(acc, f.mul(c[j], y[code.inputs[n][j]]));
        break;
    }
    y[n] = acc;
  }
  return y;
}

// Coefficients are drawn i.i.d. uniform over GF(q) in edge-index order.
inline CodedNetwork assign_random_code(const Network& net, Field field, std::uint64_t seed) {
  if (!is_normalized(net)) throw PreconditionError("assign_random_code: network is not normalized");
  CodedNetwork code{net, field, 0, 0, {}, {}, {}, {}, {}};
  code.width1 = net.out_degree(net.s1);
  code.width2 = net.out_degree(net.s2);
  const std::size_t m = net.edges.size();
  code.kind.resize(m);
  code.inputs.resize(m);
  code.local.resize(m);
  code.edge_order = detail::edge_evaluation_order(net);

  Rng rng(seed);
  for (std::size_t n = 0; n < m; ++n) {
    const NodeId tail = net.edges[n].tail;
    std::size_t width;
    if (tail == net.s1) {
      code.kind[n] = CodedNetwork::EdgeKind::Source1;
      width = code.width1;
    } else if (tail == net.s2) {
      code.kind[n] = CodedNetwork::EdgeKind::Source2;
      width = code.width2;
    } else {
      code.kind[n] = CodedNetwork::EdgeKind::Relay;
      code.inputs[n] = net.in_edges(tail);
      width = code.inputs[n].size();
    }
    code.local[n].resize(width);
    for (auto& c : code.local[n]) c = field.random(rng);
  }

  const std::size_t w = code.interface_width();
  code.global.assign(m, std::vector<Element>(w, 0));
  for (std::size_t n : code.edge_order) {
    auto& g = code.global[n];
    const auto& c = code.local[n];
    switch (code.kind[n]) {
      case CodedNetwork::EdgeKind::Source1:
        for (std::size_t j = 0; j < c.size(); ++j) g[j] = c[j];
        break;
      case CodedNetwork::EdgeKind::Source2:
        for (std::size_t j = 0; j < c.size(); ++j) g[code.width1 + j] = c[j];
        break;
      case CodedNetwork::EdgeKind::Relay:
        for (std::size_t j = 0; j < c.size(); ++j) {
          const auto& in = code.global[code.inputs[n][j]];
          for (std::size_t k = 0; k < w; ++k) g[k] = field.add(g[k], field.mul(c[j], in[k]));
        }
        break;
    }
  }
  return code;
}

// Row r of [H_i1 H_i2] is the global vector on the r-th in-edge of t_i.
inline TransferMatrices transfer_matrices(const CodedNetwork& code) {
  auto block = [&](NodeId terminal, bool first) {
    const auto in = code.net.in_edges(terminal);
    const std::size_t width = first ? code.width1 : code.width2;
    const std::size_t offset = first ? 0 : code.width1;
    Matrix h(code.field, in.size(), width);
    for (std::size_t r = 0; r < in.size(); ++r)
      for (std::size_t c = 0; c < width; ++c) h.set(r, c, code.global[in[r]][offset + c]);
    return h;
  };
  return {block(code.net.t1, true), block(code.net.t1, false), block(code.net.t2, true), block(code.net.t2, false)};
}

struct RankProfile {
  std::size_t h11, h12, h21, h22, t1_joint, t2_joint;
  friend bool operator==(const RankProfile&, const RankProfile&) = default;
};

inline RankProfile rank_profile(const TransferMatrices& tm) {
  return {rank(tm.h11), rank(tm.h12), rank(tm.h21), rank(tm.h22), rank(hcat(tm.h11, tm.h12)),
          rank(hcat(tm.h21, tm.h22))};
}

// True iff every transfer matrix attains its min-cut rank.
inline bool validate_rank_profile(const TransferMatrices& tm, const CutVector& cv) {
  auto dims = [](const Matrix& m, int r, int c) {
    return m.rows() == static_cast<std::size_t>(r) && m.cols() == static_cast<std::size_t>(c);
  };
  if (!dims(tm.h11, cv.k121, cv.k112) || !dims(tm.h12, cv.k121, cv.k212) || !dims(tm.h21, cv.k122, cv.k112) ||
      !dims(tm.h22, cv.k122, cv.k212))
    throw PreconditionError("transfer matrix dimensions disagree with the cut vector");
  auto u = [](int v) { return static_cast<std::size_t>(v); };
  const RankProfile want{u(cv.k11), u(cv.k21), u(cv.k12), u(cv.k22), u(cv.k121), u(cv.k122)};
  return rank_profile(tm) == want;
}

inline constexpr std::array<std::uint32_t, 4> kFieldLadder = {257, 521, 1031, 2053};
inline constexpr int kAttemptsPerField = 32;

struct CodeResult {
  CodedNetwork code;
  TransferMatrices tm;
  int attempts = 0;  // candidates evaluated, across all field tiers
  std::uint64_t code_seed = 0;
};

// Fields tried in order: `start` (if given) followed by the ladder entries
// above it, otherwise the whole ladder.
inline std::vector<std::uint32_t> field_schedule(std::optional<std::uint32_t> start) {
  if (!start) return {kFieldLadder.begin(), kFieldLadder.end()};
  std::vector<std::uint32_t> out{*start};
  for (auto q : kFieldLadder)
    if (q > *start) out.push_back(q);
  return out;
}

inline CodeResult generate_valid_code(const Network& net, std::uint64_t seed,
                                      std::optional<std::uint32_t> start_q = std::nullopt) {
  const CutVector cv = cut_vector(net);
  int attempts = 0;
  for (std::uint32_t q : field_schedule(start_q)) {
    const Field field(q);
    for (int a = 0; a < kAttemptsPerField; ++a) {
      ++attempts;
      const std::uint64_t s = derive_seed(seed, {0xc0de, q, static_cast<std::uint64_t>(a)});
      CodedNetwork code = assign_random_code(net, field, s);
      TransferMatrices tm = transfer_matrices(code);
      if (validate_rank_profile(tm, cv)) return {std::move(code), std::move(tm), attempts, s};
    }
  }
  throw LemmaViolation("no code with maximal transfer ranks found up to q = 2053");
}

}  // namespace nc2
