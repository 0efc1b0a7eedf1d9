#include "danopt/trace.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace danopt {

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_trace_csv(std::ostream& out, std::span<const IterationRecord> rows) {
  out << "k,grad_norm,stepsize,updated,scalars_sent_per_node_cum,"
         "bits_sent_per_node_cum,dist_to_opt\n";
  for (const auto& r : rows) {
    out << r.k << ',' << fmt(r.grad_norm) << ',' << fmt(r.stepsize) << ','
        << (r.updated ? 1 : 0) << ',' << fmt(r.scalars_sent_per_node_cum)
        << ',' << fmt(r.bits_sent_per_node_cum) << ',';
    if (r.dist_to_opt) out << fmt(*r.dist_to_opt);
    out << '\n';
  }
}

}  // namespace danopt
