#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace danopt {

// One optimizer iteration as seen from any node (all nodes are identical).
// Cumulative communication columns are per-node averages.
struct IterationRecord {
  int k = 0;
  double grad_norm = 0;
  double stepsize = 0;
  bool updated = false;
  double scalars_sent_per_node_cum = 0;
  double bits_sent_per_node_cum = 0;
  std::optional<double> dist_to_opt;  // empty when the optimum is unknown
};

// CSV with header
//   k,grad_norm,stepsize,updated,scalars_sent_per_node_cum,
//   bits_sent_per_node_cum,dist_to_opt
// Doubles use %.17g so a file round-trips to the exact same values;
// dist_to_opt is left empty when unknown.
void write_trace_csv(std::ostream& out, std::span<const IterationRecord> rows);

}  // namespace danopt
