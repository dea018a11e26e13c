#include "ctmap/metric_graph.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ctmap/errors.hpp"

namespace ctmap {

struct MetricGraph::State {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;  // CSR, size n + 1
  std::vector<Vertex> adjacency;
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  std::unordered_map<std::string, Vertex> label_index;

  mutable std::once_flag dense_once;
  mutable std::vector<std::uint16_t> dense;
  mutable Distance diameter = 0;

  std::vector<Distance> bfs(Vertex source) const {
    std::vector<Distance> dist(n, kUnreachable);
    std::vector<Vertex> queue;
    queue.reserve(n);
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex u = queue[head];
      for (std::size_t k = offsets[u]; k < offsets[u + 1]; ++k) {
        const Vertex w = adjacency[k];
        if (dist[w] == kUnreachable) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return dist;
  }

  void ensure_dense() const {
    if (n > kDenseDistanceLimit) {
      fail(ErrorKind::GraphTooLarge, "dense distance table requested for " + std::to_string(n) +
                                         " vertices (limit " + std::to_string(kDenseDistanceLimit) + ")");
    }
    std::call_once(dense_once, [this] {
      dense.assign(n * n, 0);
      Distance diam = 0;
      for (Vertex s = 0; s < n; ++s) {
        const auto row = bfs(s);
        for (std::size_t t = 0; t < n; ++t) {
          dense[s * n + t] = static_cast<std::uint16_t>(row[t]);
          diam = std::max(diam, row[t]);
        }
      }
      diameter = diam;
    });
  }
};

namespace {

std::string describe_components(const std::vector<std::vector<Vertex>>& components) {
  std::ostringstream out;
  out << "graph has " << components.size() << " components:";
  const std::size_t shown = std::min<std::size_t>(components.size(), 8);
  for (std::size_t c = 0; c < shown; ++c) {
    out << " {";
    const std::size_t m = std::min<std::size_t>(components[c].size(), 6);
    for (std::size_t i = 0; i < m; ++i) out << (i ? "," : "") << components[c][i];
    if (components[c].size() > m) out << ",...(" << components[c].size() << ")";
    out << "}";
  }
  if (components.size() > shown) out << " ...";
  return out.str();
}

}  // namespace

MetricGraph MetricGraph::from_edges(std::span<const Edge> edges, std::optional<std::size_t> vertex_count,
                                    std::vector<std::string> labels) {
  auto state = std::make_shared<State>();
  std::size_t n = 0;
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) fail(ErrorKind::SelfLoop, "self-loop at vertex " + std::to_string(u));
    canon.emplace_back(std::min(u, v), std::max(u, v));
    n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }
  if (vertex_count) {
    if (*vertex_count < n) {
      fail(ErrorKind::UnknownVertex, "edge references vertex beyond declared count " + std::to_string(*vertex_count));
    }
    n = *vertex_count;
  }
  if (n == 0) fail(ErrorKind::EmptyEdgeList, "graph must have at least one vertex");
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : canon) {
    ++degree[u];
    ++degree[v];
  }
  state->n = n;
  state->offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) state->offsets[i + 1] = state->offsets[i] + degree[i];
  state->adjacency.resize(state->offsets[n]);
  std::vector<std::size_t> cursor(state->offsets.begin(), state->offsets.end() - 1);
  for (auto [u, v] : canon) {
    state->adjacency[cursor[u]++] = v;
    state->adjacency[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(state->adjacency.begin() + static_cast<std::ptrdiff_t>(state->offsets[i]),
              state->adjacency.begin() + static_cast<std::ptrdiff_t>(state->offsets[i + 1]));
  }
  state->edges = std::move(canon);

  // Connectivity.
  std::vector<int> component(n, -1);
  std::vector<std::vector<Vertex>> components;
  for (Vertex s = 0; s < n; ++s) {
    if (component[s] != -1) continue;
    const int id = static_cast<int>(components.size());
    components.emplace_back();
    std::vector<Vertex> stack{s};
    component[s] = id;
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      components.back().push_back(u);
      for (std::size_t k = state->offsets[u]; k < state->offsets[u + 1]; ++k) {
        const Vertex w = state->adjacency[k];
        if (component[w] == -1) {
          component[w] = id;
          stack.push_back(w);
        }
      }
    }
    std::sort(components.back().begin(), components.back().end());
  }
  if (components.size() > 1) fail(ErrorKind::DisconnectedGraph, describe_components(components));

  if (!labels.empty()) {
    if (labels.size() != n) fail(ErrorKind::InvalidArgument, "label count does not match vertex count");
    for (Vertex v = 0; v < n; ++v) state->label_index.emplace(labels[v], v);
    state->labels = std::move(labels);
  }
  return MetricGraph(std::move(state));
}

MetricGraph MetricGraph::single_vertex(std::string label) {
  std::vector<std::string> labels;
  if (!label.empty()) labels.push_back(std::move(label));
  return from_edges({}, std::size_t{1}, std::move(labels));
}

std::size_t MetricGraph::vertex_count() const noexcept { return state_->n; }
std::size_t MetricGraph::edge_count() const noexcept { return state_->edges.size(); }

std::span<const Vertex> MetricGraph::neighbors(Vertex v) const {
  check_vertex(v);
  return {state_->adjacency.data() + state_->offsets[v], state_->offsets[v + 1] - state_->offsets[v]};
}

std::span<const Edge> MetricGraph::edges() const noexcept { return state_->edges; }

bool MetricGraph::adjacent(Vertex u, Vertex v) const {
  const auto nb = neighbors(u);
  check_vertex(v);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Distance MetricGraph::distance(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  if (state_->n <= kDenseDistanceLimit) {
    state_->ensure_dense();
    return state_->dense[static_cast<std::size_t>(u) * state_->n + v];
  }
  return state_->bfs(u)[v];
}

std::vector<Distance> MetricGraph::distances_from(Vertex source) const {
  check_vertex(source);
  if (state_->n <= kDenseDistanceLimit) {
    state_->ensure_dense();
    const std::uint16_t* row = state_->dense.data() + static_cast<std::size_t>(source) * state_->n;
    return std::vector<Distance>(row, row + state_->n);
  }
  return state_->bfs(source);
}

Distance MetricGraph::diameter() const {
  if (state_->n <= kDenseDistanceLimit) {
    state_->ensure_dense();
    return state_->diameter;
  }
  Distance diam = 0;
  for (Vertex s = 0; s < state_->n; ++s) {
    const auto row = state_->bfs(s);
    diam = std::max(diam, *std::max_element(row.begin(), row.end()));
  }
  return diam;
}

const std::uint16_t* MetricGraph::dense_row(Vertex u) const {
  check_vertex(u);
  state_->ensure_dense();
  return state_->dense.data() + static_cast<std::size_t>(u) * state_->n;
}

bool MetricGraph::has_labels() const noexcept { return !state_->labels.empty(); }

const std::string& MetricGraph::label(Vertex v) const {
  check_vertex(v);
  static const std::string empty;
  return state_->labels.empty() ? empty : state_->labels[v];
}

std::optional<Vertex> MetricGraph::find_label(std::string_view label) const {
  const auto it = state_->label_index.find(std::string(label));
  if (it == state_->label_index.end()) return std::nullopt;
  return it->second;
}

std::uintptr_t MetricGraph::id() const noexcept { return reinterpret_cast<std::uintptr_t>(state_.get()); }

void MetricGraph::check_vertex(Vertex v) const {
  if (v >= state_->n) {
    fail(ErrorKind::UnknownVertex,
         "vertex " + std::to_string(v) + " not in graph of " + std::to_string(state_->n) + " vertices");
  }
}

bool GeodesicSegment::contains(Vertex v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

MetricGraph build_graph(std::span<const Edge> edges) {
  if (edges.empty()) fail(ErrorKind::EmptyEdgeList, "edge list is empty");
  return MetricGraph::from_edges(edges);
}

Distance distance(const MetricGraph& g, Vertex u, Vertex v) { return g.distance(u, v); }

GeodesicSegment geodesic(const MetricGraph& g, Vertex u, Vertex v) {
  g.check_vertex(u);
  g.check_vertex(v);
  GeodesicSegment seg;
  seg.graph_id = g.id();
  const auto from_u = g.distances_from(u);
  std::vector<Vertex> reversed{v};
  Vertex cur = v;
  while (cur != u) {
    const Distance target = from_u[cur] - 1;
    for (const Vertex w : g.neighbors(cur)) {
      if (from_u[w] == target) {
        cur = w;
        break;
      }
    }
    reversed.push_back(cur);
  }
  seg.vertices.assign(reversed.rbegin(), reversed.rend());
  return seg;
}

HalfInt gromov_product(const MetricGraph& g, Vertex a, Vertex b, Vertex c) {
  const std::int64_t ac = g.distance(a, c);
  const std::int64_t bc = g.distance(b, c);
  const std::int64_t ab = g.distance(a, b);
  return HalfInt::from_twice(ac + bc - ab);
}

HalfInt four_point_defect(const MetricGraph& g, Vertex x, Vertex y, Vertex z, Vertex w) {
  const std::int64_t s1 = std::int64_t{g.distance(x, y)} + g.distance(z, w);
  const std::int64_t s2 = std::int64_t{g.distance(x, z)} + g.distance(y, w);
  const std::int64_t s3 = std::int64_t{g.distance(x, w)} + g.distance(y, z);
  const std::int64_t hi = std::max({s1, s2, s3});
  const std::int64_t lo = std::min({s1, s2, s3});
  const std::int64_t mid = s1 + s2 + s3 - hi - lo;
  return HalfInt::from_twice(hi - mid);
}

namespace {

struct QuadBest {
  int twice = -1;
  std::array<Vertex, 4> witness{};
  std::uint64_t scanned = 0;
};

// Exhaustive scan over x < y < z < w for a fixed outer x.
void scan_outer(const MetricGraph& g, std::size_t n, Vertex x, QuadBest& best) {
  const std::uint16_t* rx = g.dense_row(x);
  for (Vertex y = x + 1; y < n; ++y) {
    const std::uint16_t* ry = g.dense_row(y);
    const int dxy = rx[y];
    for (Vertex z = y + 1; z < n; ++z) {
      const std::uint16_t* rz = g.dense_row(z);
      const int dxz = rx[z];
      const int dyz = ry[z];
      int local = -1;
      for (std::size_t w = z + 1; w < n; ++w) {
        const int s1 = dxy + rz[w];
        const int s2 = dxz + ry[w];
        const int s3 = dyz + rx[w];
        const int hi = std::max(s1, std::max(s2, s3));
        const int lo = std::min(s1, std::min(s2, s3));
        const int defect = 2 * hi + lo - s1 - s2 - s3;
        local = std::max(local, defect);
      }
      best.scanned += n - z - 1;
      if (local > best.twice) {
        for (std::size_t w = z + 1; w < n; ++w) {
          const int s1 = dxy + rz[w];
          const int s2 = dxz + ry[w];
          const int s3 = dyz + rx[w];
          const int hi = std::max(s1, std::max(s2, s3));
          const int lo = std::min(s1, std::min(s2, s3));
          if (2 * hi + lo - s1 - s2 - s3 == local) {
            best.twice = local;
            best.witness = {x, y, z, static_cast<Vertex>(w)};
            break;
          }
        }
      }
    }
  }
}

}  // namespace

HyperbolicityReport delta_four_point(const MetricGraph& g, const FourPointOptions& options) {
  const std::size_t n = g.vertex_count();
  HyperbolicityReport report;
  if (options.sample_count > 0) {
    report.sampled = true;
    if (n < 4) return report;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
    std::int64_t best = -1;
    for (std::uint64_t s = 0; s < options.sample_count; ++s) {
      std::array<Vertex, 4> q{};
      for (;;) {
        for (auto& v : q) v = pick(rng);
        std::sort(q.begin(), q.end());
        if (std::adjacent_find(q.begin(), q.end()) == q.end()) break;
      }
      const HalfInt d = four_point_defect(g, q[0], q[1], q[2], q[3]);
      if (d.twice() > best || (d.twice() == best && q < report.witness_quadruple)) {
        best = d.twice();
        report.witness_quadruple = q;
      }
    }
    report.delta_four_point = HalfInt::from_twice(std::max<std::int64_t>(best, 0));
    report.quadruples_scanned = options.sample_count;
    return report;
  }

  if (n > options.vertex_cap) {
    fail(ErrorKind::GraphTooLarge, "four-point scan over " + std::to_string(n) + " vertices exceeds cap " +
                                       std::to_string(options.vertex_cap) + "; use sampling");
  }
  if (n < 4) return report;  // every quadruple repeats a vertex: defect 0
  g.dense_row(0);            // build the table before fanning out

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<QuadBest> partial(threads);
  std::atomic<Vertex> next{0};
  auto worker = [&](unsigned t) {
    for (Vertex x; (x = next.fetch_add(1)) + 3 < n;) {
      QuadBest local;
      scan_outer(g, n, x, local);
      QuadBest& p = partial[t];
      p.scanned += local.scanned;
      if (local.twice > p.twice || (local.twice == p.twice && local.witness < p.witness)) {
        p.twice = local.twice;
        p.witness = local.witness;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }
  QuadBest total;
  for (const auto& p : partial) {
    total.scanned += p.scanned;
    if (p.twice > total.twice || (p.twice == total.twice && p.witness < total.witness)) {
      total.twice = p.twice;
      total.witness = p.witness;
    }
  }
  report.delta_four_point = HalfInt::from_twice(total.twice);
  report.witness_quadruple = total.witness;
  report.quadruples_scanned = total.scanned;
  return report;
}

NetApproximation net_approximation(const MetricGraph& g, Distance edge_radius) {
  const std::size_t n = g.vertex_count();
  std::vector<char> blocked(n, 0);
  std::vector<Vertex> centers;
  for (Vertex v = 0; v < n; ++v) {
    if (blocked[v]) continue;
    centers.push_back(v);
    blocked[v] = 1;
    for (const Vertex w : g.neighbors(v)) blocked[w] = 1;
  }
  std::vector<Edge> net_edges;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      if (g.distance(centers[i], centers[j]) <= edge_radius) {
        net_edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
      }
    }
  }
  std::vector<Vertex> nearest(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    Distance best = kUnreachable;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const Distance d = g.distance(v, centers[i]);
      if (d < best) {
        best = d;
        nearest[v] = static_cast<Vertex>(i);
      }
    }
  }
  return NetApproximation{MetricGraph::from_edges(net_edges, centers.size()), std::move(centers), std::move(nearest)};
}

std::vector<Vertex> ball(const MetricGraph& g, Vertex center, Distance radius) {
  const auto dist = g.distances_from(center);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < dist.size(); ++v) {
    if (dist[v] <= radius) out.push_back(v);
  }
  return out;
}

std::vector<Distance> distances_to_set(const MetricGraph& g, std::span<const Vertex> set) {
  if (set.empty()) fail(ErrorKind::EmptySet, "distance to an empty set");
  std::vector<Distance> dist(g.vertex_count(), kUnreachable);
  std::vector<Vertex> queue;
  queue.reserve(g.vertex_count());
  for (const Vertex s : set) {
    g.check_vertex(s);
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    for (const Vertex w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<Vertex> geodesic_interval(const MetricGraph& g, Vertex a, Vertex b) {
  const Distance dab = g.distance(a, b);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.distance(a, v) + g.distance(v, b) == dab) out.push_back(v);
  }
  return out;
}

bool is_path(const MetricGraph& g, std::span<const Vertex> path) {
  if (path.empty()) return false;
  for (const Vertex v : path) {
    if (v >= g.vertex_count()) return false;
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!g.adjacent(path[i - 1], path[i])) return false;
  }
  return true;
}

std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    if (!(fields >> u)) continue;  // blank line
    std::string rest;
    if (!(fields >> v) || (fields >> rest) || u < 0 || v < 0 || u > std::numeric_limits<Vertex>::max() ||
        v > std::numeric_limits<Vertex>::max()) {
      fail(ErrorKind::ParseError, "edge list line " + std::to_string(line_no) + ": expected two vertex ids");
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return edges;
}

std::vector<Edge> parse_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open edge list " + path);
  return parse_edge_list(in);
}

}  // namespace ctmap
