#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace causevo {

/// Directed flow network with capacities of type Cap (an exact integer type
/// or double). Residual capacities at or below `tolerance` count as zero.
template <class Cap>
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes, Cap tolerance = Cap(0)) : adj_(nodes), tol_(tolerance) {}

  /// Returns the edge id; its reverse has id + 1.
  std::size_t add_edge(std::size_t from, std::size_t to, Cap capacity, double cost = 0.0) {
    const std::size_t id = edges_.size();
    edges_.push_back({to, capacity, cost});
    edges_.push_back({from, Cap(0), -cost});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    original_.push_back(capacity);
    original_.push_back(Cap(0));
    return id;
  }

  std::size_t node_count() const { return adj_.size(); }

  /// Flow currently routed through edge `id`.
  Cap flow_on(std::size_t id) const { return original_[id] - edges_[id].residual; }

  /// Dinic's algorithm; adds to any flow already present.
  Cap max_flow(std::size_t source, std::size_t sink) {
    Cap total(0);
    while (build_levels(source, sink)) {
      next_.assign(adj_.size(), 0);
      while (true) {
        Cap pushed = augment(source, sink, Cap(-1));
        if (!(pushed > tol_)) break;
        total += pushed;
      }
    }
    return total;
  }

  /// Successive shortest paths (Bellman-Ford on the residual graph) until
  /// `limit` units are sent or no augmenting path remains. Paths are scanned
  /// in edge insertion order and only strictly shorter labels (by more than
  /// 1e-12) replace earlier ones, so ties resolve toward lower edge ids.
  std::pair<Cap, double> min_cost_flow(std::size_t source, std::size_t sink, Cap limit) {
    Cap sent(0);
    double cost = 0.0;
    const std::size_t n = adj_.size();
    while (limit - sent > tol_) {
      std::vector<double> dist(n, std::numeric_limits<double>::infinity());
      std::vector<std::size_t> via(n, kNone);
      dist[source] = 0.0;
      for (std::size_t round = 0; round + 1 < n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u) {
          if (dist[u] == std::numeric_limits<double>::infinity()) continue;
          for (std::size_t id : adj_[u]) {
            const Edge& e = edges_[id];
            if (!(e.residual > tol_)) continue;
            const double cand = dist[u] + e.cost;
            if (cand < dist[e.to] - 1e-12) {
              dist[e.to] = cand;
              via[e.to] = id;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (via[sink] == kNone) break;
      Cap push = limit - sent;
      for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        push = std::min(push, edges_[via[v]].residual);
      }
      for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].residual -= push;
        edges_[via[v] ^ 1].residual += push;
      }
      sent += push;
      cost += dist[sink] * static_cast<double>(push);
    }
    return {sent, cost};
  }

  /// Nodes reachable from `source` in the residual graph (source side of a
  /// minimum cut once the flow is maximal).
  std::vector<bool> residual_reachable(std::size_t source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{source};
    seen[source] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t id : adj_[u]) {
        const Edge& e = edges_[id];
        if (e.residual > tol_ && !seen[e.to]) {
          seen[e.to] = true;
          queue.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Edge {
    std::size_t to;
    Cap residual;
    double cost;
  };

  bool build_levels(std::size_t source, std::size_t sink) {
    level_.assign(adj_.size(), -1);
    std::queue<std::size_t> queue;
    level_[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t id : adj_[u]) {
        const Edge& e = edges_[id];
        if (e.residual > tol_ && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          queue.push(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // `bound` < 0 means unbounded.
  Cap augment(std::size_t u, std::size_t sink, Cap bound) {
    if (u == sink) return bound;
    for (std::size_t& i = next_[u]; i < adj_[u].size(); ++i) {
      const std::size_t id = adj_[u][i];
      Edge& e = edges_[id];
      if (!(e.residual > tol_) || level_[e.to] != level_[u] + 1) continue;
      const Cap want = bound < Cap(0) ? e.residual : std::min(bound, e.residual);
      Cap got = augment(e.to, sink, want);
      if (got > tol_) {
        e.residual -= got;
        edges_[id ^ 1].residual += got;
        return got;
      }
    }
    return Cap(0);
  }

  std::vector<Edge> edges_;
  std::vector<Cap> original_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  Cap tol_;
};

}  // namespace causevo
