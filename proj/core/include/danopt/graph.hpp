#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace danopt {

using NodeId = std::uint32_t;

// Simple graph over nodes 0..n-1, directed or undirected. Adjacency lists
// are kept sorted ascending; iteration order over neighbors is therefore
// deterministic and independent of insertion order.
class Graph {
 public:
  Graph(NodeId n, bool directed);

  NodeId node_count() const { return n_; }
  bool directed() const { return directed_; }

  // Inserts an edge; for undirected graphs both orientations. Self-loops
  // and out-of-range endpoints are rejected. Duplicate inserts are no-ops.
  void add_edge(NodeId from, NodeId to);
  bool has_edge(NodeId from, NodeId to) const;

  // Directed: number of arcs. Undirected: number of unordered pairs.
  std::size_t edge_count() const;

  const std::vector<NodeId>& out_neighbors(NodeId v) const;
  const std::vector<NodeId>& in_neighbors(NodeId v) const;
  // Undirected alias for out_neighbors.
  const std::vector<NodeId>& neighbors(NodeId v) const;

  // Unordered pair list (i < j) for undirected graphs, arc list for
  // directed ones. Sorted lexicographically.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  NodeId n_;
  bool directed_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;  // unused for undirected
};

// Rooted spanning tree. `graph` holds the undirected tree edges (exactly
// n-1 of them); parent[root] is empty.
struct SpanningTree {
  Graph graph;
  NodeId root = 0;
  std::vector<std::optional<NodeId>> parent;

  NodeId node_count() const { return graph.node_count(); }
};

// Undirected connectivity via BFS from node 0.
bool is_connected(const Graph& g);

// Strong connectivity: BFS reachability from node 0 along out- and
// in-edges. Works on undirected graphs too (equals is_connected there).
bool is_strongly_connected(const Graph& g);

// Exact diameter by BFS from every node. Throws ProtocolError if the graph
// is not (strongly) connected. diameter of a single node is 0.
int diameter(const Graph& g);

// BFS tree rooted at `root`; ties between frontier nodes are resolved by
// ascending NodeId, so the result is deterministic. Requires a connected
// undirected graph.
SpanningTree bfs_spanning_tree(const Graph& g, NodeId root = 0);

// Uniform random recursive tree: node k >= 1 attaches to a uniform draw
// from 0..k-1. Rooted at 0.
SpanningTree generate_random_tree(NodeId n, std::uint64_t seed);

// G(n, p) with p = min(1, 2 ln n / n), resampled until connected (at most
// `max_retries` attempts, then ProtocolError). Every candidate pair i<j is
// tested with one uniform draw in a fixed order, so the result depends
// only on (n, seed).
Graph generate_erdos_renyi(NodeId n, std::uint64_t seed, int max_retries = 1000);

// Text format: first line "n <count> directed <0|1>", then one "i j" pair
// per line. Undirected edges are stored once (either orientation).
Graph read_graph(std::istream& in);
Graph load_graph(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void save_graph(const std::string& path, const Graph& g);

}  // namespace danopt
