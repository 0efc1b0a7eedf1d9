#include "danopt/dsf.hpp"

#include <ostream>
#include <string>

#include "danopt/errors.hpp"

namespace danopt {

namespace {

// A connected undirected graph is a tree iff it has exactly n-1 edges.
bool is_tree(const Graph& g) {
  if (g.directed()) return false;
  if (!is_connected(g)) return false;
  return g.edges().size() + 1 == static_cast<std::size_t>(g.node_count());
}

[[noreturn]] void reject_undirected_non_tree(const char* where) {
  throw ConfigError(std::string(where) +
                    ": undirected selective flooding runs on trees only; "
                    "extract a spanning tree (e.g. bfs_spanning_tree) and "
                    "run on that");
}

}  // namespace

std::optional<NodeId> dsf_select_undirected(const DsfNodeState& state,
                                            NodeId neighbor) {
  const auto sent_it = state.sent_to.find(neighbor);
  const auto recv_it = state.received_from.find(neighbor);
  for (NodeId origin : state.info) {
    if (sent_it != state.sent_to.end() && sent_it->second.count(origin)) {
      continue;
    }
    if (recv_it != state.received_from.end() &&
        recv_it->second.count(origin)) {
      continue;
    }
    return origin;
  }
  return std::nullopt;
}

std::optional<NodeId> dsf_select_directed(const DsfNodeState& state,
                                          NodeId out_neighbor) {
  const auto sent_it = state.sent_to.find(out_neighbor);
  for (NodeId origin : state.info) {
    if (sent_it != state.sent_to.end() && sent_it->second.count(origin)) {
      continue;
    }
    return origin;
  }
  return std::nullopt;
}

std::uint64_t DsfResult::total_transmissions() const {
  std::uint64_t total = 0;
  for (const auto& round : rounds) {
    total += round.transmissions.size();
  }
  return total;
}

int default_round_budget(const Graph& g) {
  const NodeId n = g.node_count();
  if (!g.directed()) {
    if (!is_tree(g)) reject_undirected_non_tree("default_round_budget");
    return static_cast<int>(n) - 1;
  }
  return static_cast<int>(n) + diameter(g) - 1;
}

DsfResult run_dsf(const Graph& g, const std::vector<TaggedMessage>& payloads,
                  const DsfOptions& options, CommLedger* ledger) {
  const NodeId n = g.node_count();
  if (payloads.size() != static_cast<std::size_t>(n)) {
    throw ConfigError("run_dsf: need exactly one payload per node, got " +
                      std::to_string(payloads.size()) + " for " +
                      std::to_string(n) + " nodes");
  }
  for (NodeId i = 0; i < n; ++i) {
    if (payloads[i].origin != i) {
      throw ConfigError("run_dsf: payload " + std::to_string(i) +
                        " is tagged with origin " +
                        std::to_string(payloads[i].origin) +
                        "; each node must start with its own datum");
    }
  }
  if (g.directed()) {
    if (!is_strongly_connected(g)) {
      throw ConfigError(
          "run_dsf: directed graph must be strongly connected");
    }
  } else {
    if (!is_tree(g)) reject_undirected_non_tree("run_dsf");
  }

  const int budget = options.rounds ? *options.rounds
                                    : default_round_budget(g);
  if (budget < 0) {
    throw ConfigError("run_dsf: round budget must be non-negative");
  }

  DsfResult result;
  result.states.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    result.states[i].self = i;
    result.states[i].info.insert(i);
  }

  std::vector<std::uint64_t> cumulative_scalars(n, 0);

  auto all_complete = [&]() {
    for (const auto& s : result.states) {
      if (!s.complete(n)) return false;
    }
    return true;
  };

  if (all_complete()) {
    result.completion_round = 0;
    result.all_complete = true;
    return result;
  }

  for (int round = 1; round <= budget; ++round) {
    // Phase 1: every node selects from the state it held after the
    // previous round. Nothing is mutated until all picks are made.
    std::vector<Transmission> picks;
    for (NodeId i = 0; i < n; ++i) {
      const DsfNodeState& state = result.states[i];
      for (NodeId j : g.neighbors(i)) {
        const std::optional<NodeId> origin =
            g.directed() ? dsf_select_directed(state, j)
                         : dsf_select_undirected(state, j);
        if (origin) {
          picks.push_back(Transmission{
              i, j, *origin, payloads[*origin].payload.size()});
        }
      }
    }

    // A silent round makes every later round silent too: no state changed,
    // so the same (empty) selections would repeat forever.
    if (picks.empty()) break;

    // Phase 2: simultaneous delivery.
    for (const Transmission& t : picks) {
      result.states[t.from].sent_to[t.to].insert(t.origin);
      result.states[t.to].info.insert(t.origin);
      result.states[t.to].received_from[t.from].insert(t.origin);
      cumulative_scalars[t.from] += t.scalars;
      if (ledger) {
        ledger->record_send(t.from, t.to, t.scalars);
        ledger->record_receive(t.from, t.to, t.scalars);
      }
    }

    RoundReport report;
    report.round = round;
    report.transmissions = std::move(picks);
    report.cumulative_scalars = cumulative_scalars;
    result.rounds.push_back(std::move(report));

    if (!result.completion_round && all_complete()) {
      result.completion_round = round;
    }
  }

  result.all_complete = all_complete();
  if (options.require_completion && !result.all_complete) {
    throw ProtocolError(
        "run_dsf: round budget of " + std::to_string(budget) +
        " exhausted before every node learned every origin");
  }
  return result;
}

std::uint64_t min_transmissions_lower_bound(const SpanningTree& tree) {
  const NodeId n = tree.graph.node_count();
  if (n == 0) return 0;
  return static_cast<std::uint64_t>(n) - 1;
}

void write_round_reports_jsonl(std::ostream& out,
                               const std::vector<RoundReport>& rounds,
                               std::uint32_t id_bits) {
  for (const auto& round : rounds) {
    for (const auto& t : round.transmissions) {
      out << "{\"round\":" << round.round << ",\"edge\":[" << t.from << ","
          << t.to << "],\"origin\":" << t.origin << ",\"scalars\":"
          << t.scalars << ",\"bits\":" << (t.scalars * 64 + id_bits)
          << "}\n";
    }
  }
}

}  // namespace danopt
