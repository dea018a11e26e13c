#include <algorithm>
#include <deque>
#include <numeric>

#include "ctmap/errors.hpp"
#include "ctmap/group_examples.hpp"

namespace ctmap {

namespace {

constexpr Distance kMaxTilingRadius = 16;
constexpr std::size_t kMaxPatchVertices = 4'000'000;

// Patch of the tessellation grown ring by ring. The boundary is kept as a
// cyclic vertex list with a consistent orientation; a vertex is complete once
// it has q neighbours.
class Patch {
 public:
  Patch(int p, int q) : p_(p), q_(q) { adj_.emplace_back(); }

  std::size_t size() const { return adj_.size(); }
  const std::vector<std::vector<Vertex>>& adjacency() const { return adj_; }

  void first_ring() {
    std::vector<Vertex> spokes;
    for (int i = 0; i < q_; ++i) {
      spokes.push_back(add_vertex());
      link(0, spokes.back());
    }
    boundary_.clear();
    for (int i = 0; i < q_; ++i) {
      const Vertex from = spokes[static_cast<std::size_t>(i)];
      const Vertex to = spokes[static_cast<std::size_t>((i + 1) % q_)];
      boundary_.push_back(from);
      fill_gap(from, to, p_ - 3);
    }
  }

  void next_ring() {
    const std::size_t m = boundary_.size();
    struct Spoke {
      std::size_t owner;
    };
    std::vector<Spoke> spokes;
    for (std::size_t i = 0; i < m; ++i) {
      const int missing = q_ - static_cast<int>(adj_[boundary_[i]].size());
      if (missing < 0) fail(ErrorKind::NotHyperbolicTiling, "tiling construction overfilled a vertex");
      for (int k = 0; k < missing; ++k) spokes.push_back({i});
    }
    const std::size_t t = spokes.size();
    if (t == 0) fail(ErrorKind::NotHyperbolicTiling, "tiling patch closed up");

    // Gap j lies between spoke j and spoke j+1; extra[j] new vertices fill its face.
    std::vector<int> extra(t);
    for (std::size_t j = 0; j < t; ++j) {
      const std::size_t a = spokes[j].owner;
      const std::size_t b = spokes[(j + 1) % t].owner;
      std::size_t run = 0;
      if (a == b && j + 1 < t) {
        run = 1;
      } else {
        const std::size_t step = (b + m - a) % m;
        run = step == 0 ? m + 1 : step + 1;
      }
      extra[j] = p_ - static_cast<int>(run) - 2;
      if (extra[j] < -1) fail(ErrorKind::NotHyperbolicTiling, "tiling face would close with too few vertices");
    }
    // Spokes whose gap needs -1 extra vertices share their endpoint.
    std::vector<std::size_t> parent(t);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t j = 0; j < t; ++j) {
      if (extra[j] == -1) {
        const std::size_t a = find(j);
        const std::size_t b = find((j + 1) % t);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    std::vector<Vertex> endpoint_of_class(t, 0);
    std::vector<bool> made(t, false);
    std::vector<Vertex> endpoint(t);
    for (std::size_t j = 0; j < t; ++j) {
      const std::size_t c = find(j);
      if (!made[c]) {
        endpoint_of_class[c] = add_vertex();
        made[c] = true;
      }
      endpoint[j] = endpoint_of_class[c];
      link(boundary_[spokes[j].owner], endpoint[j]);
    }
    std::vector<Vertex> fresh;
    for (std::size_t j = 0; j < t; ++j) {
      if (fresh.empty() || fresh.back() != endpoint[j]) fresh.push_back(endpoint[j]);
      if (extra[j] >= 0) {
        boundary_.swap(fresh);
        fill_gap(endpoint[j], endpoint[(j + 1) % t], extra[j]);
        boundary_.swap(fresh);
      }
    }
    while (fresh.size() > 1 && fresh.back() == fresh.front()) fresh.pop_back();
    boundary_ = std::move(fresh);
    if (adj_.size() > kMaxPatchVertices) fail(ErrorKind::InvalidArgument, "tiling patch exceeds the vertex cap");
  }

 private:
  Vertex add_vertex() {
    adj_.emplace_back();
    return static_cast<Vertex>(adj_.size() - 1);
  }

  void link(Vertex u, Vertex v) {
    if (std::find(adj_[u].begin(), adj_[u].end(), v) != adj_[u].end()) return;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }

  // Path from -> x1 -> ... -> x_count -> to; the new interior vertices are
  // appended to the boundary in order.
  void fill_gap(Vertex from, Vertex to, int count) {
    Vertex prev = from;
    for (int i = 0; i < count; ++i) {
      const Vertex x = add_vertex();
      link(prev, x);
      boundary_.push_back(x);
      prev = x;
    }
    link(prev, to);
  }

  int p_;
  int q_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<Vertex> boundary_;
};

std::vector<Distance> bfs(const std::vector<std::vector<Vertex>>& adj, Vertex source) {
  std::vector<Distance> dist(adj.size(), kUnreachable);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    for (const Vertex w : adj[u]) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

MetricGraph tiling_ball(int p, int q, Distance radius) {
  if (p < 3 || q < 3 || (p - 2) * (q - 2) <= 4) {
    fail(ErrorKind::NotHyperbolicTiling, "{" + std::to_string(p) + "," + std::to_string(q) + "} is not a hyperbolic tiling");
  }
  if (radius > kMaxTilingRadius) fail(ErrorKind::InvalidArgument, "tiling radius exceeds cap " + std::to_string(kMaxTilingRadius));
  if (radius == 0) return MetricGraph::single_vertex();

  Patch patch(p, q);
  patch.first_ring();
  // Grow until every vertex within the radius has its full valence.
  while (true) {
    const auto dist = bfs(patch.adjacency(), 0);
    bool complete = true;
    for (std::size_t v = 0; v < patch.size(); ++v) {
      if (dist[v] <= radius && static_cast<int>(patch.adjacency()[v].size()) < q) {
        complete = false;
        break;
      }
    }
    if (complete) break;
    patch.next_ring();
  }

  // Induced ball, renumbered breadth-first with neighbours in ascending
  // construction order.
  std::vector<std::vector<Vertex>> adj = patch.adjacency();
  for (auto& row : adj) std::sort(row.begin(), row.end());
  const auto dist = bfs(adj, 0);
  std::vector<Vertex> order{0};
  std::vector<Vertex> renumber(adj.size(), kUnreachable);
  renumber[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const Vertex w : adj[order[head]]) {
      if (dist[w] <= radius && renumber[w] == kUnreachable) {
        renumber[w] = static_cast<Vertex>(order.size());
        order.push_back(w);
      }
    }
  }
  std::vector<Edge> edges;
  for (const Vertex u : order) {
    for (const Vertex w : adj[u]) {
      if (renumber[w] != kUnreachable && renumber[u] < renumber[w]) edges.emplace_back(renumber[u], renumber[w]);
    }
  }
  return MetricGraph::from_edges(edges, order.size());
}

}  // namespace ctmap
