#include <algorithm>
#include <vector>

#include "citeprof/netanalysis.hpp"

namespace citeprof::netanalysis {

int broad_shell_of(int shell, int max_shell) {
  if (shell <= 0 || max_shell <= 0) return 0;
  const int width = std::max(1, max_shell / 6);
  return std::min(6, (shell - 1) / width + 1);
}

ShellAssignment kshell_decompose(const ingest::CitationGraph& graph) {
  const std::size_t n = graph.node_count();
  ShellAssignment out;
  out.shell.assign(n, 0);
  out.broad_shell.assign(n, 0);
  if (n == 0) return out;

  // Bucket-queue peeling (Batagelj-Zaversnik) on in-degree. Removing a node
  // lowers the in-degree of the papers it cites.
  std::vector<std::size_t> deg(n);
  std::size_t max_deg = 0;
  for (ingest::NodeId v = 0; v < n; ++v) {
    deg[v] = graph.in_degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<std::size_t> bin(max_deg + 1, 0);
  for (auto d : deg) ++bin[d];
  std::size_t start = 0;
  for (auto& b : bin) {
    const auto count = b;
    b = start;
    start += count;
  }
  std::vector<ingest::NodeId> order(n);
  std::vector<std::size_t> pos(n);
  for (ingest::NodeId v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = v;
  }
  for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const auto v = order[i];
    for (auto w : graph.references(v)) {
      if (deg[w] <= deg[v]) continue;
      const auto dw = deg[w];
      const auto pw = pos[w];
      const auto first = bin[dw];
      const auto u = order[first];
      if (u != w) {
        std::swap(order[pw], order[first]);
        pos[u] = pw;
        pos[w] = first;
      }
      ++bin[dw];
      --deg[w];
    }
  }

  for (ingest::NodeId v = 0; v < n; ++v) {
    // Uncited papers form shell 0; everything else is peeled from stage 1.
    out.shell[v] = graph.in_degree(v) == 0 ? 0 : std::max(1, static_cast<int>(deg[v]));
    out.max_shell = std::max(out.max_shell, out.shell[v]);
  }
  for (ingest::NodeId v = 0; v < n; ++v) out.broad_shell[v] = broad_shell_of(out.shell[v], out.max_shell);
  return out;
}

}  // namespace citeprof::netanalysis
