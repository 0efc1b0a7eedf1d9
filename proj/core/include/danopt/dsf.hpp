#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "danopt/comm_ledger.hpp"
#include "danopt/graph.hpp"

namespace danopt {

// One node's initial datum, tagged with its origin. Payload length may
// differ per origin; the ledger charges the actual length per transmission.
struct TaggedMessage {
  NodeId origin = 0;
  std::vector<double> payload;
};

// Per-node protocol state. info holds the origins known so far; sent_to /
// received_from track per-neighbor history and drive the selection rule.
struct DsfNodeState {
  NodeId self = 0;
  std::set<NodeId> info;
  std::map<NodeId, std::set<NodeId>> sent_to;
  std::map<NodeId, std::set<NodeId>> received_from;

  bool complete(NodeId node_count) const {
    return info.size() == node_count;
  }
};

// Smallest origin known to the node, not yet sent to `neighbor` and not
// received from it either. Empty when nothing is eligible (a valid,
// silent outcome).
std::optional<NodeId> dsf_select_undirected(const DsfNodeState& state,
                                            NodeId neighbor);

// Directed variant: only the not-yet-sent check. Out-neighbors need not be
// in-neighbors, so "received from" cannot be consulted; duplicates across
// a two-way pair of arcs are allowed.
std::optional<NodeId> dsf_select_directed(const DsfNodeState& state,
                                          NodeId out_neighbor);

struct Transmission {
  NodeId from = 0;
  NodeId to = 0;
  NodeId origin = 0;
  std::uint64_t scalars = 0;
};

struct RoundReport {
  int round = 0;  // 1-based
  std::vector<Transmission> transmissions;
  // Scalars each node has sent after this round's deliveries.
  std::vector<std::uint64_t> cumulative_scalars;
};

struct DsfOptions {
  // Round budget; defaults to default_round_budget(graph).
  std::optional<int> rounds;
  // Throw ProtocolError if some node is still missing origins when the
  // budget is exhausted. Disable to probe tightness of the bounds.
  bool require_completion = true;
};

struct DsfResult {
  std::vector<DsfNodeState> states;
  std::vector<RoundReport> rounds;
  // First round after whose deliveries every node knows every origin;
  // 0 when complete before any round (single node).
  std::optional<int> completion_round;
  bool all_complete = false;

  std::uint64_t total_transmissions() const;
};

// n-1 rounds on an undirected tree, n + diameter - 1 on a directed graph.
// Other undirected graphs are rejected; extract a spanning tree first.
int default_round_budget(const Graph& g);

// Synchronous selective flooding. Each round has two phases: every node
// picks, per out-neighbor, an eligible origin (see the selection rules
// above); then all picks are delivered at once. Selection therefore sees
// only the previous round's state. payloads[i].origin must equal i.
// Undirected graphs must be trees; directed graphs must be strongly
// connected.
DsfResult run_dsf(const Graph& g, const std::vector<TaggedMessage>& payloads,
                  const DsfOptions& options = {},
                  CommLedger* ledger = nullptr);

// Any protocol achieving full set-consensus needs at least n-1
// transmissions: a leaf node receives the other n-1 origins over its only
// edge, one per message. Diagnostic reference for reports.
std::uint64_t min_transmissions_lower_bound(const SpanningTree& tree);

// One JSON object per transmission:
// {"round":r,"edge":[i,j],"origin":u,"scalars":s,"bits":b}
void write_round_reports_jsonl(std::ostream& out,
                               const std::vector<RoundReport>& rounds,
                               std::uint32_t id_bits);

}  // namespace danopt
