#pragma once

// Small simple undirected graphs: representation, generators, parsing,
// explicit lexicographic products and the brute-force combinatorics that
// back the oracle checks.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lexspectra/errors.hpp"

namespace lexspectra {

using Vertex = std::uint32_t;

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

inline constexpr std::size_t kDefaultConstructionCap = 20000;
inline constexpr std::size_t kDefaultSearchCap = 64;

class Graph {
 public:
  explicit Graph(std::size_t order) : adjacency_(order) {
    if (order == 0) throw ParseError("graph order must be positive");
  }

  Graph(std::size_t order, std::span<const Edge> edges) : Graph(order) {
    for (const Edge& e : edges) add_edge(e.u, e.v);
  }

  // Adjacency lists are sorted and symmetric; validated in O(E log E).
  explicit Graph(std::vector<std::vector<Vertex>> adjacency)
      : adjacency_(std::move(adjacency)) {
    if (adjacency_.empty()) throw ParseError("graph order must be positive");
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      auto& list = adjacency_[u];
      std::sort(list.begin(), list.end());
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i] >= adjacency_.size()) throw ParseError("adjacency entry out of range");
        if (list[i] == u) throw ParseError("loop at vertex " + std::to_string(u));
        if (i > 0 && list[i] == list[i - 1]) throw ParseError("duplicate edge");
      }
      edge_count_ += list.size();
    }
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      for (Vertex v : adjacency_[u]) {
        if (!adjacent(v, u)) throw ParseError("adjacency lists are not symmetric");
      }
    }
    edge_count_ /= 2;
  }

  std::size_t order() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t degree(std::size_t u) const { return adjacency_.at(u).size(); }
  std::span<const Vertex> neighbors(std::size_t u) const { return adjacency_.at(u); }

  bool adjacent(std::size_t u, std::size_t v) const {
    const auto& list = adjacency_.at(u);
    return std::binary_search(list.begin(), list.end(), static_cast<Vertex>(v));
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= order() || v >= order()) {
      throw ParseError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                       "} has an endpoint >= order " + std::to_string(order()));
    }
    if (u == v) throw ParseError("loop at vertex " + std::to_string(u));
    if (order() > std::numeric_limits<Vertex>::max()) throw SizeError("graph too large");
    auto insert = [this](std::size_t a, std::size_t b) {
      auto& list = adjacency_[a];
      auto it = std::lower_bound(list.begin(), list.end(), static_cast<Vertex>(b));
      if (it != list.end() && *it == b) {
        throw ParseError("duplicate edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
      }
      list.insert(it, static_cast<Vertex>(b));
    };
    insert(u, v);
    insert(v, u);
    ++edge_count_;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < order(); ++u) {
      for (Vertex v : adjacency_[u]) {
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

  std::size_t min_degree() const {
    std::size_t d = std::numeric_limits<std::size_t>::max();
    for (const auto& list : adjacency_) d = std::min(d, list.size());
    return d;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& list : adjacency_) d = std::max(d, list.size());
    return d;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.adjacency_ == b.adjacency_; }

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

// ---------------------------------------------------------------------------
// Structural queries

inline std::optional<std::size_t> regularity(const Graph& g) {
  std::size_t d = g.degree(0);
  for (std::size_t u = 1; u < g.order(); ++u) {
    if (g.degree(u) != d) return std::nullopt;
  }
  return d;
}

inline bool is_complete(const Graph& g) {
  return g.edge_count() == g.order() * (g.order() - 1) / 2;
}

// degree -> number of vertices with that degree
inline std::map<std::size_t, std::size_t> degree_histogram(const Graph& g) {
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t u = 0; u < g.order(); ++u) ++hist[g.degree(u)];
  return hist;
}

inline std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source) {
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.order(), kUnreached);
  std::queue<std::size_t> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    std::size_t u = frontier.front();
    frontier.pop();
    for (Vertex v : g.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

inline std::size_t component_count(const Graph& g) {
  std::vector<bool> seen(g.order(), false);
  std::size_t components = 0;
  for (std::size_t s = 0; s < g.order(); ++s) {
    if (seen[s]) continue;
    ++components;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (Vertex v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

inline bool is_connected(const Graph& g) { return component_count(g) == 1; }

// nullopt stands for an infinite diameter (disconnected graph).
inline std::optional<std::size_t> diameter(const Graph& g) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < g.order(); ++s) {
    for (std::size_t d : bfs_distances(g, s)) {
      if (d == std::numeric_limits<std::size_t>::max()) return std::nullopt;
      best = std::max(best, d);
    }
  }
  return best;
}

inline Graph complement(const Graph& g) {
  std::vector<std::vector<Vertex>> adj(g.order());
  for (std::size_t u = 0; u < g.order(); ++u) {
    for (std::size_t v = 0; v < g.order(); ++v) {
      if (u != v && !g.adjacent(u, v)) adj[u].push_back(static_cast<Vertex>(v));
    }
  }
  return Graph(std::move(adj));
}

// ---------------------------------------------------------------------------
// Generators

namespace generators {

inline Graph cycle(std::size_t n) {
  if (n < 3) throw ParseError("cycle needs at least 3 vertices");
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline Graph path(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph complete(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

inline Graph empty(std::size_t n) { return Graph(n); }

// Vertex 0 is the centre, joined to 1..n-1.
inline Graph star(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(0, i);
  return g;
}

// Kneser graph K(5,2): 2-subsets of {0..4} in lexicographic order,
// adjacent iff disjoint.
inline Graph petersen() {
  std::vector<std::pair<int, int>> subsets;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) subsets.emplace_back(a, b);
  }
  Graph g(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t j = i + 1; j < subsets.size(); ++j) {
      auto [a, b] = subsets[i];
      auto [c, d] = subsets[j];
      if (a != c && a != d && b != c && b != d) g.add_edge(i, j);
    }
  }
  return g;
}

// Triangle with a pendant vertex attached to vertex 0.
inline Graph paw() {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  return g;
}

}  // namespace generators

// ---------------------------------------------------------------------------
// Specs and parsing

struct GraphSpec {
  enum class Family { cycle, path, complete, star, petersen, paw, empty, explicit_edges };

  Family family = Family::complete;
  std::size_t parameter = 1;  // order for explicit_edges
  std::vector<Edge> edges;    // explicit_edges only

  static GraphSpec named(Family family, std::size_t parameter) {
    GraphSpec spec;
    spec.family = family;
    spec.parameter = parameter;
    return spec;
  }

  static GraphSpec explicit_graph(std::size_t order, std::vector<Edge> edges) {
    GraphSpec spec;
    spec.family = Family::explicit_edges;
    spec.parameter = order;
    spec.edges = std::move(edges);
    return spec;
  }

  // "cycle:4", "petersen", or "edges:<order>" for explicit graphs.
  std::string name() const {
    switch (family) {
      case Family::cycle: return "cycle:" + std::to_string(parameter);
      case Family::path: return "path:" + std::to_string(parameter);
      case Family::complete: return "complete:" + std::to_string(parameter);
      case Family::star: return "star:" + std::to_string(parameter);
      case Family::empty: return "empty:" + std::to_string(parameter);
      case Family::petersen: return "petersen";
      case Family::paw: return "paw";
      case Family::explicit_edges: return "edges:" + std::to_string(parameter);
    }
    return "?";
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  if (text.empty()) throw ParseError(std::string(what) + ": missing number");
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw ParseError(std::string(what) + ": '" + std::string(text) + "' is not a nonnegative integer");
    }
    if (value > (std::numeric_limits<std::size_t>::max() - 9) / 10) {
      throw ParseError(std::string(what) + ": number too large");
    }
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

inline void check_edges(std::size_t order, const std::vector<Edge>& edges,
                        const std::vector<std::string>& labels) {
  Graph probe(order);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    try {
      probe.add_edge(edges[i].u, edges[i].v);
    } catch (const ParseError& e) {
      throw ParseError(labels[i] + ": " + e.what());
    }
  }
}

}  // namespace detail

// JSON document {"order": n, "edges": [[u, v], ...]} with 0-based vertices.
inline GraphSpec graph_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("order") || !doc.contains("edges")) {
    throw ParseError("graph JSON must be an object with \"order\" and \"edges\"");
  }
  if (!doc["order"].is_number_unsigned() || doc["order"].get<std::size_t>() == 0) {
    throw ParseError("graph JSON: \"order\" must be a positive integer");
  }
  if (!doc["edges"].is_array()) throw ParseError("graph JSON: \"edges\" must be an array");
  std::size_t order = doc["order"].get<std::size_t>();
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  std::size_t index = 0;
  for (const auto& item : doc["edges"]) {
    std::string label = "edge #" + std::to_string(index) + " " + item.dump();
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() ||
        !item[1].is_number_unsigned()) {
      throw ParseError(label + ": expected [u, v] with nonnegative integers");
    }
    edges.push_back({item[0].get<std::size_t>(), item[1].get<std::size_t>()});
    labels.push_back(std::move(label));
    ++index;
  }
  detail::check_edges(order, edges, labels);
  return GraphSpec::explicit_graph(order, std::move(edges));
}

// Plain-text edge list: one "u v" pair per line, '#' starts a comment.
inline GraphSpec graph_spec_from_edge_list(std::string_view text, std::size_t order) {
  if (order == 0) throw ParseError("edge list: order must be positive");
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = detail::trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    std::istringstream fields(body);
    std::string a, b, extra;
    fields >> a >> b;
    std::string label = "line " + std::to_string(line_no) + " '" + body + "'";
    if (b.empty() || (fields >> extra)) throw ParseError(label + ": expected two vertex indices");
    std::size_t u = 0, v = 0;
    try {
      u = detail::parse_count(a, label);
      v = detail::parse_count(b, label);
    } catch (const ParseError&) {
      throw ParseError(label + ": vertex indices must be nonnegative integers");
    }
    edges.push_back({u, v});
    labels.push_back(std::move(label));
  }
  detail::check_edges(order, edges, labels);
  return GraphSpec::explicit_graph(order, std::move(edges));
}

// Parses a generator string ("cycle:4", "petersen", ...), an inline JSON
// graph, or "@path" naming a JSON file.
inline GraphSpec parse_graph_spec(std::string_view text) {
  std::string spec = detail::trim(text);
  if (spec.empty()) throw ParseError("empty graph spec");
  if (spec.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(spec);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("graph JSON: ") + e.what());
    }
    return graph_spec_from_json(doc);
  }
  if (spec.front() == '@') {
    std::ifstream file(spec.substr(1));
    if (!file) throw ParseError("cannot open graph file '" + spec.substr(1) + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_graph_spec(buffer.str());
  }
  if (spec == "petersen") return GraphSpec::named(GraphSpec::Family::petersen, 10);
  if (spec == "paw") return GraphSpec::named(GraphSpec::Family::paw, 4);
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("unknown graph spec '" + spec + "'");
  std::string family = spec.substr(0, colon);
  std::size_t parameter = detail::parse_count(spec.substr(colon + 1), "graph spec '" + spec + "'");
  if (parameter == 0) throw ParseError("graph spec '" + spec + "': parameter must be >= 1");
  using F = GraphSpec::Family;
  if (family == "cycle") {
    if (parameter < 3) throw ParseError("graph spec '" + spec + "': cycle needs at least 3 vertices");
    return GraphSpec::named(F::cycle, parameter);
  }
  if (family == "path") return GraphSpec::named(F::path, parameter);
  if (family == "complete") return GraphSpec::named(F::complete, parameter);
  if (family == "star") return GraphSpec::named(F::star, parameter);
  if (family == "empty") return GraphSpec::named(F::empty, parameter);
  throw ParseError("unknown graph family '" + family + "'");
}

inline Graph parse_graph(const GraphSpec& spec) {
  using F = GraphSpec::Family;
  switch (spec.family) {
    case F::cycle: return generators::cycle(spec.parameter);
    case F::path: return generators::path(spec.parameter);
    case F::complete: return generators::complete(spec.parameter);
    case F::star: return generators::star(spec.parameter);
    case F::empty: return generators::empty(spec.parameter);
    case F::petersen: return generators::petersen();
    case F::paw: return generators::paw();
    case F::explicit_edges: return Graph(spec.parameter, spec.edges);
  }
  throw ParseError("unknown graph family");
}

inline Graph parse_graph(std::string_view text) { return parse_graph(parse_graph_spec(text)); }

inline nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"order", g.order()}, {"edges", std::move(edges)}};
}

// ---------------------------------------------------------------------------
// Products

// Vertex (x, y) of H[G] gets index x * |V(G)| + y.
inline Graph lexicographic_product(const Graph& h, const Graph& g,
                                   std::size_t cap = kDefaultConstructionCap) {
  const std::size_t n = h.order();
  const std::size_t m = g.order();
  if (m != 0 && n > cap / m) {
    throw SizeError("lexicographic product of order " + std::to_string(n) + "*" +
                    std::to_string(m) + " exceeds the construction cap " + std::to_string(cap));
  }
  std::vector<std::vector<Vertex>> adj(n * m);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      auto& list = adj[x * m + y];
      list.reserve(h.degree(x) * m + g.degree(y));
      for (Vertex xn : h.neighbors(x)) {
        for (std::size_t yy = 0; yy < m; ++yy) list.push_back(static_cast<Vertex>(xn * m + yy));
      }
      for (Vertex yn : g.neighbors(y)) list.push_back(static_cast<Vertex>(x * m + yn));
    }
  }
  return Graph(std::move(adj));
}

// H^k[G] = H[H^(k-1)[G]]; without G this is H^k with H^0 = K1.
inline Graph power_graph(const Graph& h, std::size_t k, const std::optional<Graph>& g = std::nullopt,
                         std::size_t cap = kDefaultConstructionCap) {
  Graph result = g ? *g : Graph(1);
  std::size_t order = result.order();
  for (std::size_t i = 0; i < k; ++i) {
    if (order > cap / h.order()) {
      throw SizeError("power graph exceeds the construction cap " + std::to_string(cap));
    }
    order *= h.order();
  }
  for (std::size_t i = 0; i < k; ++i) result = lexicographic_product(h, result, cap);
  return result;
}

// H[G_1, ..., G_n]: part j occupies a contiguous block of indices, and
// blocks i, j are fully joined when ij is an edge of H.
inline Graph generalized_composition(const Graph& h, std::span<const Graph> parts,
                                     std::size_t cap = kDefaultConstructionCap) {
  if (parts.size() != h.order()) throw ParseError("H-join needs one part per vertex of H");
  std::vector<std::size_t> start(parts.size() + 1, 0);
  for (std::size_t j = 0; j < parts.size(); ++j) start[j + 1] = start[j] + parts[j].order();
  if (start.back() > cap) throw SizeError("H-join exceeds the construction cap");
  std::vector<std::vector<Vertex>> adj(start.back());
  for (std::size_t j = 0; j < parts.size(); ++j) {
    for (std::size_t y = 0; y < parts[j].order(); ++y) {
      auto& list = adj[start[j] + y];
      for (Vertex yn : parts[j].neighbors(y)) list.push_back(static_cast<Vertex>(start[j] + yn));
      for (Vertex i : h.neighbors(j)) {
        for (std::size_t w = start[i]; w < start[i + 1]; ++w) list.push_back(static_cast<Vertex>(w));
      }
    }
  }
  return Graph(std::move(adj));
}

// ---------------------------------------------------------------------------
// Brute-force combinatorics

namespace detail {

class VertexSet {
 public:
  explicit VertexSet(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  VertexSet operator&(const VertexSet& o) const {
    VertexSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Maximum clique by branch and bound; the bound is a greedy colouring of
// the candidate set (colour classes are independent sets).
class MaxCliqueSearch {
 public:
  explicit MaxCliqueSearch(const Graph& g) : g_(g) {
    for (std::size_t u = 0; u < g.order(); ++u) {
      rows_.emplace_back(g.order());
      for (Vertex v : g.neighbors(u)) rows_.back().set(v);
    }
  }

  std::size_t run() {
    VertexSet all(g_.order());
    for (std::size_t u = 0; u < g_.order(); ++u) all.set(u);
    expand(all, 0);
    return best_;
  }

 private:
  void expand(const VertexSet& candidates, std::size_t size) {
    std::vector<std::size_t> order;
    std::vector<std::size_t> colour;
    colour_sort(candidates, order, colour);
    VertexSet remaining = candidates;
    for (std::size_t i = order.size(); i-- > 0;) {
      if (size + colour[i] <= best_) return;
      std::size_t v = order[i];
      VertexSet next = remaining & rows_[v];
      if (next.empty()) {
        best_ = std::max(best_, size + 1);
      } else {
        expand(next, size + 1);
      }
      remaining.reset(v);
    }
  }

  // Vertices ordered by non-decreasing colour number.
  void colour_sort(const VertexSet& candidates, std::vector<std::size_t>& order,
                   std::vector<std::size_t>& colour) const {
    std::vector<std::size_t> pending;
    candidates.for_each([&](std::size_t v) { pending.push_back(v); });
    std::size_t c = 0;
    while (!pending.empty()) {
      ++c;
      std::vector<std::size_t> rest;
      std::vector<std::size_t> klass;
      for (std::size_t v : pending) {
        bool clash = std::any_of(klass.begin(), klass.end(),
                                 [&](std::size_t w) { return rows_[v].test(w); });
        if (clash) {
          rest.push_back(v);
        } else {
          klass.push_back(v);
          order.push_back(v);
          colour.push_back(c);
        }
      }
      pending = std::move(rest);
    }
  }

  const Graph& g_;
  std::vector<VertexSet> rows_;
  std::size_t best_ = 0;
};

inline void check_search_cap(const Graph& g, std::size_t cap, std::string_view what) {
  if (g.order() > cap) {
    throw SizeError(std::string(what) + " on " + std::to_string(g.order()) +
                    " vertices exceeds the exact-search cap " + std::to_string(cap));
  }
}

// Maximum number of internally vertex-disjoint s-t paths, stopping once
// `limit` paths are found. Unit-capacity flow on the split-vertex network.
inline std::size_t local_connectivity(const Graph& g, std::size_t s, std::size_t t, std::size_t limit) {
  const std::size_t n = g.order();
  // node 2u = u_in, 2u+1 = u_out
  struct Arc {
    std::size_t to;
    int cap;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> net(2 * n);
  auto add = [&](std::size_t a, std::size_t b, int c) {
    net[a].push_back({b, c, net[b].size()});
    net[b].push_back({a, 0, net[a].size() - 1});
  };
  constexpr int kInf = 1 << 20;
  for (std::size_t u = 0; u < n; ++u) add(2 * u, 2 * u + 1, (u == s || u == t) ? kInf : 1);
  for (std::size_t u = 0; u < n; ++u) {
    for (Vertex v : g.neighbors(u)) add(2 * u + 1, 2 * v, kInf);
  }
  const std::size_t source = 2 * s + 1;
  const std::size_t sink = 2 * t;
  std::size_t flow = 0;
  while (flow < limit) {
    std::vector<std::pair<std::size_t, std::size_t>> parent(2 * n, {SIZE_MAX, 0});
    std::queue<std::size_t> q;
    q.push(source);
    parent[source] = {source, 0};
    while (!q.empty() && parent[sink].first == SIZE_MAX) {
      std::size_t a = q.front();
      q.pop();
      for (std::size_t i = 0; i < net[a].size(); ++i) {
        const Arc& arc = net[a][i];
        if (arc.cap > 0 && parent[arc.to].first == SIZE_MAX) {
          parent[arc.to] = {a, i};
          q.push(arc.to);
        }
      }
    }
    if (parent[sink].first == SIZE_MAX) break;
    for (std::size_t b = sink; b != source;) {
      auto [a, i] = parent[b];
      Arc& arc = net[a][i];
      arc.cap -= 1;
      net[b][arc.rev].cap += 1;
      b = a;
    }
    ++flow;
  }
  return flow;
}

}  // namespace detail

inline std::size_t clique_number(const Graph& g, std::size_t cap = kDefaultSearchCap) {
  detail::check_search_cap(g, cap, "clique number");
  return detail::MaxCliqueSearch(g).run();
}

inline std::size_t independence_number(const Graph& g, std::size_t cap = kDefaultSearchCap) {
  detail::check_search_cap(g, cap, "independence number");
  return detail::MaxCliqueSearch(complement(g)).run();
}

// Minimum vertex cut. Complete graphs get order-1, disconnected graphs 0.
inline std::size_t vertex_connectivity(const Graph& g, std::size_t cap = kDefaultSearchCap) {
  detail::check_search_cap(g, cap, "vertex connectivity");
  const std::size_t n = g.order();
  if (is_complete(g)) return n - 1;
  if (!is_connected(g)) return 0;
  // Every minimum separator S misses one of v_0..v_|S|; the first such v_i
  // and any vertex beyond S on another side give a non-adjacent pair (i, j>i).
  std::size_t best = g.min_degree();
  for (std::size_t i = 0; i <= best && i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (g.adjacent(i, j)) continue;
      best = std::min(best, detail::local_connectivity(g, i, j, best));
    }
  }
  return best;
}

// Backtracking colourability test, vertices in decreasing-degree order.
inline bool is_colorable(const Graph& g, std::size_t colours) {
  std::vector<std::size_t> order(g.order());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
  std::vector<std::size_t> colour(g.order(), SIZE_MAX);
  auto place = [&](auto&& self, std::size_t pos, std::size_t used) -> bool {
    if (pos == order.size()) return true;
    std::size_t v = order[pos];
    // A fresh colour is interchangeable with any other fresh colour.
    std::size_t limit = std::min(colours, used + 1);
    for (std::size_t c = 0; c < limit; ++c) {
      bool ok = true;
      for (Vertex w : g.neighbors(v)) {
        if (colour[w] == c) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      colour[v] = c;
      if (self(self, pos + 1, std::max(used, c + 1))) return true;
      colour[v] = SIZE_MAX;
    }
    return false;
  };
  return place(place, 0, 0);
}

inline std::size_t chromatic_number(const Graph& g, std::size_t cap = kDefaultSearchCap) {
  detail::check_search_cap(g, cap, "chromatic number");
  std::size_t c = std::max<std::size_t>(1, clique_number(g, cap));
  while (!is_colorable(g, c)) ++c;
  return c;
}

}  // namespace lexspectra
