#include "danopt/comm_ledger.hpp"

#include "danopt/errors.hpp"

namespace danopt {

std::uint32_t message_id_bits(std::uint32_t node_count) {
  if (node_count <= 1) return 0;
  std::uint32_t bits = 0;
  std::uint32_t capacity = 1;
  while (capacity < node_count) {
    capacity <<= 1;
    ++bits;
  }
  return bits;
}

CommLedger::CommLedger(std::uint32_t node_count)
    : node_count_(node_count),
      id_bits_(message_id_bits(node_count)),
      sent_scalars_(node_count, 0),
      sent_messages_(node_count, 0),
      recv_scalars_(node_count, 0),
      recv_messages_(node_count, 0),
      mark_scalars_(node_count, 0),
      mark_messages_(node_count, 0),
      last_scalars_(node_count, 0),
      last_messages_(node_count, 0) {}

void CommLedger::record_send(NodeId from, NodeId to, std::uint64_t scalars) {
  if (from >= node_count_ || to >= node_count_)
    throw ProtocolError("ledger: endpoint out of range");
  sent_scalars_[from] += scalars;
  sent_messages_[from] += 1;
  auto& flow = sent_[{from, to}];
  flow.messages += 1;
  flow.scalars += scalars;
}

void CommLedger::record_receive(NodeId from, NodeId to, std::uint64_t scalars) {
  if (from >= node_count_ || to >= node_count_)
    throw ProtocolError("ledger: endpoint out of range");
  recv_scalars_[to] += scalars;
  recv_messages_[to] += 1;
  auto& flow = received_[{from, to}];
  flow.messages += 1;
  flow.scalars += scalars;
}

std::uint64_t CommLedger::sent_scalars(NodeId v) const {
  return sent_scalars_.at(v);
}
std::uint64_t CommLedger::sent_messages(NodeId v) const {
  return sent_messages_.at(v);
}
std::uint64_t CommLedger::received_scalars(NodeId v) const {
  return recv_scalars_.at(v);
}
std::uint64_t CommLedger::received_messages(NodeId v) const {
  return recv_messages_.at(v);
}

std::uint64_t CommLedger::payload_bits(NodeId v) const {
  return sent_scalars(v) * 64;
}

std::uint64_t CommLedger::total_bits(NodeId v) const {
  return payload_bits(v) + sent_messages(v) * id_bits_;
}

std::uint64_t CommLedger::total_sent_scalars() const {
  std::uint64_t total = 0;
  for (auto s : sent_scalars_) total += s;
  return total;
}

std::uint64_t CommLedger::total_sent_messages() const {
  std::uint64_t total = 0;
  for (auto m : sent_messages_) total += m;
  return total;
}

double CommLedger::avg_scalars_per_node() const {
  if (node_count_ == 0) return 0.0;
  return static_cast<double>(total_sent_scalars()) / node_count_;
}

double CommLedger::avg_payload_bits_per_node() const {
  return avg_scalars_per_node() * 64.0;
}

double CommLedger::avg_total_bits_per_node() const {
  if (node_count_ == 0) return 0.0;
  std::uint64_t bits = 0;
  for (NodeId v = 0; v < node_count_; ++v) bits += total_bits(v);
  return static_cast<double>(bits) / node_count_;
}

void CommLedger::mark_iteration() {
  for (NodeId v = 0; v < node_count_; ++v) {
    last_scalars_[v] = sent_scalars_[v] - mark_scalars_[v];
    last_messages_[v] = sent_messages_[v] - mark_messages_[v];
    mark_scalars_[v] = sent_scalars_[v];
    mark_messages_[v] = sent_messages_[v];
  }
}

std::uint64_t CommLedger::last_iteration_scalars(NodeId v) const {
  return last_scalars_.at(v);
}

std::uint64_t CommLedger::last_iteration_messages(NodeId v) const {
  return last_messages_.at(v);
}

bool CommLedger::conservation_ok() const {
  if (sent_.size() != received_.size()) return false;
  for (const auto& [edge, flow] : sent_) {
    auto it = received_.find(edge);
    if (it == received_.end()) return false;
    if (it->second.messages != flow.messages ||
        it->second.scalars != flow.scalars)
      return false;
  }
  return true;
}

}  // namespace danopt
