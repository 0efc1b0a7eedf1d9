#include "danopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "danopt/errors.hpp"
#include "danopt/rng.hpp"

namespace danopt {

Graph::Graph(NodeId n, bool directed) : n_(n), directed_(directed) {
  out_.resize(n);
  if (directed_) in_.resize(n);
}

namespace {

void insert_sorted(std::vector<NodeId>& v, NodeId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

bool contains_sorted(const std::vector<NodeId>& v, NodeId x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

void Graph::add_edge(NodeId from, NodeId to) {
  if (from >= n_ || to >= n_)
    throw ConfigError("edge endpoint out of range: " + std::to_string(from) +
                      " " + std::to_string(to));
  if (from == to)
    throw ConfigError("self-loop rejected at node " + std::to_string(from));
  insert_sorted(out_[from], to);
  if (directed_) {
    insert_sorted(in_[to], from);
  } else {
    insert_sorted(out_[to], from);
  }
}

bool Graph::has_edge(NodeId from, NodeId to) const {
  if (from >= n_ || to >= n_) return false;
  return contains_sorted(out_[from], to);
}

std::size_t Graph::edge_count() const {
  std::size_t arcs = 0;
  for (const auto& adj : out_) arcs += adj.size();
  return directed_ ? arcs : arcs / 2;
}

const std::vector<NodeId>& Graph::out_neighbors(NodeId v) const {
  return out_.at(v);
}

const std::vector<NodeId>& Graph::in_neighbors(NodeId v) const {
  return directed_ ? in_.at(v) : out_.at(v);
}

const std::vector<NodeId>& Graph::neighbors(NodeId v) const {
  return out_.at(v);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> result;
  for (NodeId i = 0; i < n_; ++i) {
    for (NodeId j : out_[i]) {
      if (directed_ || i < j) result.emplace_back(i, j);
    }
  }
  return result;
}

namespace {

// Nodes reachable from `start` following `forward` ? out : in edges.
std::size_t reachable_count(const Graph& g, NodeId start, bool forward) {
  std::vector<char> seen(g.node_count(), 0);
  std::deque<NodeId> queue{start};
  seen[start] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    const auto& adj = forward ? g.out_neighbors(v) : g.in_neighbors(v);
    for (NodeId w : adj) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  return reachable_count(g, 0, true) == g.node_count();
}

bool is_strongly_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  if (!g.directed()) return is_connected(g);
  return reachable_count(g, 0, true) == g.node_count() &&
         reachable_count(g, 0, false) == g.node_count();
}

int diameter(const Graph& g) {
  const NodeId n = g.node_count();
  if (n == 0) return 0;
  if (!is_strongly_connected(g))
    throw ProtocolError("diameter undefined: graph is not strongly connected");
  int best = 0;
  std::vector<int> dist(n);
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<NodeId> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      best = std::max(best, dist[v]);
      for (NodeId w : g.out_neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return best;
}

SpanningTree bfs_spanning_tree(const Graph& g, NodeId root) {
  const NodeId n = g.node_count();
  if (g.directed())
    throw ConfigError("spanning tree requires an undirected graph");
  if (root >= n) throw ConfigError("spanning tree root out of range");

  SpanningTree tree{Graph(n, false), root, std::vector<std::optional<NodeId>>(n)};
  std::vector<char> seen(n, 0);
  std::deque<NodeId> queue{root};
  seen[root] = 1;
  NodeId visited = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.neighbors(v)) {  // ascending, so ties pick smallest id
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        tree.parent[w] = v;
        tree.graph.add_edge(v, w);
        queue.push_back(w);
      }
    }
  }
  if (visited != n)
    throw ConfigError("spanning tree requires a connected graph");
  return tree;
}

SpanningTree generate_random_tree(NodeId n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("tree needs at least one node");
  SpanningTree tree{Graph(n, false), 0, std::vector<std::optional<NodeId>>(n)};
  Rng rng(seed);
  for (NodeId k = 1; k < n; ++k) {
    NodeId p = static_cast<NodeId>(rng.below(k));
    tree.parent[k] = p;
    tree.graph.add_edge(p, k);
  }
  return tree;
}

Graph generate_erdos_renyi(NodeId n, std::uint64_t seed, int max_retries) {
  if (n == 0) throw ConfigError("graph needs at least one node");
  const double p = n > 1 ? std::min(1.0, 2.0 * std::log(double(n)) / double(n)) : 1.0;
  Rng rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Graph g(n, false);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (rng.uniform() < p) g.add_edge(i, j);
      }
    }
    if (is_connected(g)) return g;
  }
  throw ProtocolError("no connected draw in " + std::to_string(max_retries) +
                      " attempts (n = " + std::to_string(n) + ")");
}

Graph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("graph file: empty input");
  std::istringstream header(line);
  std::string kw_n, kw_dir;
  long long n = -1;
  int directed = -1;
  header >> kw_n >> n >> kw_dir >> directed;
  if (header.fail() || kw_n != "n" || kw_dir != "directed" || n < 0 ||
      (directed != 0 && directed != 1))
    throw DataError("graph file: bad header '" + line + "'");

  Graph g(static_cast<NodeId>(n), directed == 1);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream edge(line);
    long long i = -1, j = -1;
    edge >> i >> j;
    std::string rest;
    if (edge.fail() || (edge >> rest) || i < 0 || j < 0 || i >= n || j >= n)
      throw DataError("graph file: bad edge at line " + std::to_string(lineno) +
                      ": '" + line + "'");
    try {
      g.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j));
    } catch (const ConfigError& e) {
      throw DataError("graph file: line " + std::to_string(lineno) + ": " +
                      e.what());
    }
  }
  return g;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "n " << g.node_count() << " directed " << (g.directed() ? 1 : 0)
      << "\n";
  for (const auto& [i, j] : g.edges()) out << i << " " << j << "\n";
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write graph file: " + path);
  write_graph(out, g);
}

}  // namespace danopt
