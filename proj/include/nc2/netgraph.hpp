#pragma once

// Two-unicast networks: directed acyclic multigraphs with unit-capacity
// edges, two sources and two terminals.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nc2/error.hpp"

namespace nc2 {

using NodeId = std::size_t;

struct Edge {
  NodeId tail;
  NodeId head;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Nonempty subset of {1, 2}, used for both source and terminal sides.
enum class Pair : unsigned { One = 1, Two = 2, Both = 3 };

struct Network {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;  // edge identity is the position; parallel edges repeat
  NodeId s1 = 0, s2 = 0, t1 = 0, t2 = 0;

  // Filled by normalize() when it had to add artificial nodes. Indices
  // below input_nodes / input_edges belong to the network it was given.
  struct Normalization {
    std::size_t input_nodes;
    std::size_t input_edges;
    NodeId s1, s2, t1, t2;
    friend bool operator==(const Normalization&, const Normalization&) = default;
  };
  std::optional<Normalization> normalization;

  NodeId source(int i) const { return i == 1 ? s1 : s2; }
  NodeId terminal(int i) const { return i == 1 ? t1 : t2; }

  std::optional<NodeId> find(std::string_view name) const {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end()) return std::nullopt;
    return static_cast<NodeId>(it - nodes.begin());
  }

  NodeId add_node(std::string name) {
    nodes.push_back(std::move(name));
    return nodes.size() - 1;
  }

  std::size_t out_degree(NodeId v) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [v](const Edge& e) { return e.tail == v; }));
  }
  std::size_t in_degree(NodeId v) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [v](const Edge& e) { return e.head == v; }));
  }
  // Edge indices in ascending order.
  std::vector<std::size_t> out_edges(NodeId v) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].tail == v) r.push_back(i);
    return r;
  }
  std::vector<std::size_t> in_edges(NodeId v) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].head == v) r.push_back(i);
    return r;
  }

  friend bool operator==(const Network&, const Network&) = default;
};

// The nine min-cut values k_{N1-N2}. Field names spell the source subset
// then the terminal subset: k121 is {s1,s2} -> {t1}, k112 is {s1} -> {t1,t2}.
struct CutVector {
  int k11 = 0, k22 = 0, k12 = 0, k21 = 0;
  int k121 = 0, k122 = 0, k112 = 0, k212 = 0, k1212 = 0;

  // Relabel (s1,t1) <-> (s2,t2).
  CutVector swapped() const { return {k22, k11, k21, k12, k122, k121, k212, k112, k1212}; }

  std::array<int, 9> values() const { return {k11, k22, k12, k21, k121, k122, k112, k212, k1212}; }

  static CutVector from_values(const std::array<int, 9>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
  }

  // Structural relations every cut vector of a real network obeys.
  bool consistent() const {
    for (int v : values())
      if (v < 0) return false;
    return k11 <= std::min(k121, k112) && k22 <= std::min(k122, k212) && k12 <= std::min(k122, k112) &&
           k21 <= std::min(k121, k212) && std::max({k121, k122, k112, k212}) <= k1212 &&
           k1212 <= k121 + k122 && k1212 <= k112 + k212 && k121 <= k11 + k21 && k122 <= k12 + k22 &&
           k112 <= k11 + k12 && k212 <= k21 + k22;
  }

  friend bool operator==(const CutVector&, const CutVector&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && !(line[j] == ' ' || line[j] == '\t' || line[j] == '\r')) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

// Line-oriented format:
//   node <id>
//   source1 <id> | source2 <id> | sink1 <id> | sink2 <id>
//   edge <tail> <head> [multiplicity]
// '#' starts a comment. Each role appears exactly once.
inline Network parse_network(std::string_view text) {
  Network net;
  std::map<std::string, NodeId, std::less<>> ids;
  auto intern = [&](std::string_view name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    NodeId id = net.add_node(std::string(name));
    ids.emplace(std::string(name), id);
    return id;
  };

  static constexpr std::array<std::string_view, 4> kRoles = {"source1", "source2", "sink1", "sink2"};
  std::array<std::optional<NodeId>, 4> roles;
  std::array<std::size_t, 4> role_line{};

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;

    const std::string_view kw = tok[0];
    if (kw == "node") {
      if (tok.size() != 2) throw ParseError(lineno, "expected 'node <id>'");
      intern(tok[1]);
    } else if (kw == "edge") {
      if (tok.size() != 3 && tok.size() != 4) throw ParseError(lineno, "expected 'edge <tail> <head> [multiplicity]'");
      long long mult = 1;
      if (tok.size() == 4) {
        auto [p, ec] = std::from_chars(tok[3].data(), tok[3].data() + tok[3].size(), mult);
        if (ec != std::errc{} || p != tok[3].data() + tok[3].size() || mult < 1)
          throw ParseError(lineno, "multiplicity must be a positive integer, got '" + std::string(tok[3]) + "'");
      }
      const NodeId tail = intern(tok[1]);
      const NodeId head = intern(tok[2]);
      if (tail == head) throw ParseError(lineno, "self-loop on '" + std::string(tok[1]) + "'");
      for (long long m = 0; m < mult; ++m) net.edges.push_back({tail, head});
    } else {
      auto it = std::find(kRoles.begin(), kRoles.end(), kw);
      if (it == kRoles.end()) throw ParseError(lineno, "unknown keyword '" + std::string(kw) + "'");
      if (tok.size() != 2) throw ParseError(lineno, "expected '" + std::string(kw) + " <id>'");
      const auto r = static_cast<std::size_t>(it - kRoles.begin());
      if (roles[r])
        throw ParseError(lineno, "duplicate " + std::string(kw) + " declaration (first on line " +
                                     std::to_string(role_line[r]) + ")");
      roles[r] = intern(tok[1]);
      role_line[r] = lineno;
    }
  }

  for (std::size_t r = 0; r < 4; ++r)
    if (!roles[r]) throw ParseError(0, "missing " + std::string(kRoles[r]) + " declaration");
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b)
      if (*roles[a] == *roles[b])
        throw ParseError(role_line[b], std::string(kRoles[a]) + " and " + std::string(kRoles[b]) +
                                           " name the same node");
  net.s1 = *roles[0];
  net.s2 = *roles[1];
  net.t1 = *roles[2];
  net.t2 = *roles[3];
  return net;
}

// Canonical text form; parse_network(format_network(n)) reproduces n's
// nodes, edges and roles.
inline std::string format_network(const Network& net) {
  std::ostringstream os;
  for (const auto& n : net.nodes) os << "node " << n << '\n';
  os << "source1 " << net.nodes[net.s1] << '\n'
     << "source2 " << net.nodes[net.s2] << '\n'
     << "sink1 " << net.nodes[net.t1] << '\n'
     << "sink2 " << net.nodes[net.t2] << '\n';
  for (const auto& e : net.edges) os << "edge " << net.nodes[e.tail] << ' ' << net.nodes[e.head] << '\n';
  return os.str();
}

// Same graph with the two sessions relabeled.
inline Network swap_sessions(Network net) {
  std::swap(net.s1, net.s2);
  std::swap(net.t1, net.t2);
  if (net.normalization) {
    std::swap(net.normalization->s1, net.normalization->s2);
    std::swap(net.normalization->t1, net.normalization->t2);
  }
  return net;
}

// Kahn's algorithm, smallest ready node id first.
inline std::vector<NodeId> topological_order(const Network& net) {
  const std::size_t n = net.nodes.size();
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<NodeId>> succ(n);
  for (const auto& e : net.edges) {
    ++indeg[e.head];
    succ[e.tail].push_back(e.head);
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (NodeId w : succ[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  if (order.size() != n) throw CycleError("network contains a directed cycle");
  return order;
}

inline std::vector<NodeId> pair_members(const Network& net, Pair p, bool sources) {
  std::vector<NodeId> out;
  if (static_cast<unsigned>(p) & 1u) out.push_back(sources ? net.s1 : net.t1);
  if (static_cast<unsigned>(p) & 2u) out.push_back(sources ? net.s2 : net.t2);
  return out;
}

// Maximum number of edge-disjoint paths from the source subset to the
// terminal subset: BFS augmenting paths on a unit-capacity residual graph
// with a supersource and supersink.
inline int min_cut(const Network& net, Pair sources, Pair terminals) {
  struct Arc {
    std::size_t to;
    long long cap;
  };
  const std::size_t n = net.nodes.size();
  const std::size_t src = n, dst = n + 1;
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> adj(n + 2);
  auto add_arc = [&](std::size_t u, std::size_t v, long long cap) {
    adj[u].push_back(arcs.size());
    arcs.push_back({v, cap});
    adj[v].push_back(arcs.size());
    arcs.push_back({u, 0});
  };
  for (const auto& e : net.edges) add_arc(e.tail, e.head, 1);
  const long long big = static_cast<long long>(net.edges.size()) + 1;
  for (NodeId s : pair_members(net, sources, true)) add_arc(src, s, big);
  for (NodeId t : pair_members(net, terminals, false)) add_arc(t, dst, big);

  int flow = 0;
  std::vector<std::size_t> via(n + 2);
  while (true) {
    std::vector<bool> seen(n + 2, false);
    std::deque<std::size_t> queue{src};
    seen[src] = true;
    while (!queue.empty() && !seen[dst]) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t a : adj[u]) {
        const std::size_t v = arcs[a].to;
        if (arcs[a].cap > 0 && !seen[v]) {
          seen[v] = true;
          via[v] = a;
          queue.push_back(v);
        }
      }
    }
    if (!seen[dst]) break;
    for (std::size_t v = dst; v != src; v = arcs[via[v] ^ 1u].to) {
      arcs[via[v]].cap -= 1;
      arcs[via[v] ^ 1u].cap += 1;
    }
    ++flow;
  }
  return flow;
}

inline CutVector cut_vector(const Network& net) {
  using P = Pair;
  return {min_cut(net, P::One, P::One),   min_cut(net, P::Two, P::Two),   min_cut(net, P::One, P::Two),
          min_cut(net, P::Two, P::One),   min_cut(net, P::Both, P::One),  min_cut(net, P::Both, P::Two),
          min_cut(net, P::One, P::Both),  min_cut(net, P::Two, P::Both),  min_cut(net, P::Both, P::Both)};
}

// Ensures s_i has no incoming edges and exactly k_{i-12} outgoing edges, and
// t_i has no outgoing edges and exactly k_{12-i} incoming edges, by hanging
// an artificial source (terminal) off the original one where needed.
// Artificial nodes and edges are appended, so original indices stay valid.
inline Network normalize(const Network& input) {
  topological_order(input);
  const CutVector cv = cut_vector(input);
  Network net = input;
  auto unique_name = [&](std::string base) {
    while (net.find(base)) base += '\'';
    return base;
  };
  bool changed = false;
  for (int i = 1; i <= 2; ++i) {
    NodeId& s = i == 1 ? net.s1 : net.s2;
    const int k = i == 1 ? cv.k112 : cv.k212;
    if (net.in_degree(s) == 0 && net.out_degree(s) == static_cast<std::size_t>(k)) continue;
    const NodeId art = net.add_node(unique_name("s" + std::to_string(i) + "_art"));
    for (int j = 0; j < k; ++j) net.edges.push_back({art, s});
    s = art;
    changed = true;
  }
  for (int i = 1; i <= 2; ++i) {
    NodeId& t = i == 1 ? net.t1 : net.t2;
    const int k = i == 1 ? cv.k121 : cv.k122;
    if (net.out_degree(t) == 0 && net.in_degree(t) == static_cast<std::size_t>(k)) continue;
    const NodeId art = net.add_node(unique_name("t" + std::to_string(i) + "_art"));
    for (int j = 0; j < k; ++j) net.edges.push_back({t, art});
    t = art;
    changed = true;
  }
  if (!changed) return net;
  net.normalization = Network::Normalization{input.nodes.size(), input.edges.size(), input.s1, input.s2, input.t1,
                                             input.t2};
  if (!(cut_vector(net) == cv)) throw LemmaViolation("normalization changed the cut vector");
  return net;
}

inline bool is_normalized(const Network& net) {
  const CutVector cv = cut_vector(net);
  return net.in_degree(net.s1) == 0 && net.in_degree(net.s2) == 0 && net.out_degree(net.t1) == 0 &&
         net.out_degree(net.t2) == 0 && net.out_degree(net.s1) == static_cast<std::size_t>(cv.k112) &&
         net.out_degree(net.s2) == static_cast<std::size_t>(cv.k212) &&
         net.in_degree(net.t1) == static_cast<std::size_t>(cv.k121) &&
         net.in_degree(net.t2) == static_cast<std::size_t>(cv.k122);
}

}  // namespace nc2
