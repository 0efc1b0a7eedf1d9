#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "danopt/graph.hpp"

namespace danopt {

// Identifier overhead per message: ceil(log2 n) bits to name the origin,
// zero when a single node cannot confuse origins.
std::uint32_t message_id_bits(std::uint32_t node_count);

// Double-entry communication accounting. Every transmission is recorded on
// the sender and on the receiver; conservation_ok() cross-checks the two
// sides per directed edge. Payload is counted in 64-bit scalars; bit totals
// are payload * 64 plus the per-message identifier overhead.
class CommLedger {
 public:
  CommLedger() = default;
  explicit CommLedger(std::uint32_t node_count);

  std::uint32_t node_count() const { return node_count_; }
  std::uint32_t id_bits() const { return id_bits_; }

  void record_send(NodeId from, NodeId to, std::uint64_t scalars);
  void record_receive(NodeId from, NodeId to, std::uint64_t scalars);

  std::uint64_t sent_scalars(NodeId v) const;
  std::uint64_t sent_messages(NodeId v) const;
  std::uint64_t received_scalars(NodeId v) const;
  std::uint64_t received_messages(NodeId v) const;

  // scalars * 64
  std::uint64_t payload_bits(NodeId v) const;
  // payload + sent messages * id_bits
  std::uint64_t total_bits(NodeId v) const;

  std::uint64_t total_sent_scalars() const;
  std::uint64_t total_sent_messages() const;
  double avg_scalars_per_node() const;
  double avg_payload_bits_per_node() const;
  double avg_total_bits_per_node() const;

  // Closes the current iteration: per-node deltas since the previous mark
  // become last_iteration_*; cumulative counters are untouched.
  void mark_iteration();
  std::uint64_t last_iteration_scalars(NodeId v) const;
  std::uint64_t last_iteration_messages(NodeId v) const;

  // True when for every directed edge the send and receive records agree in
  // message count and scalar volume.
  bool conservation_ok() const;

  struct EdgeFlow {
    std::uint64_t messages = 0;
    std::uint64_t scalars = 0;
  };
  const std::map<std::pair<NodeId, NodeId>, EdgeFlow>& sends() const {
    return sent_;
  }

 private:
  std::uint32_t node_count_ = 0;
  std::uint32_t id_bits_ = 0;
  std::vector<std::uint64_t> sent_scalars_;
  std::vector<std::uint64_t> sent_messages_;
  std::vector<std::uint64_t> recv_scalars_;
  std::vector<std::uint64_t> recv_messages_;
  std::vector<std::uint64_t> mark_scalars_;
  std::vector<std::uint64_t> mark_messages_;
  std::vector<std::uint64_t> last_scalars_;
  std::vector<std::uint64_t> last_messages_;
  std::map<std::pair<NodeId, NodeId>, EdgeFlow> sent_;
  std::map<std::pair<NodeId, NodeId>, EdgeFlow> received_;
};

}  // namespace danopt
