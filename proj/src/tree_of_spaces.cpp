#include "ctmap/tree_of_spaces.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ctmap/errors.hpp"

namespace ctmap {

namespace {

void check_attach(const EdgeSpace& e, const std::vector<Vertex>& attach, const MetricGraph& target,
                  std::size_t index, const char* side) {
  const std::string where = "edge " + std::to_string(index) + " " + side;
  if (attach.size() != e.space.vertex_count()) {
    fail(ErrorKind::AttachTargetMissing, where + ": attach map is not total on the edge space");
  }
  std::set<Vertex> seen;
  for (const Vertex x : attach) {
    if (x >= target.vertex_count()) fail(ErrorKind::AttachTargetMissing, where + ": target vertex " + std::to_string(x) + " missing");
    if (!seen.insert(x).second) fail(ErrorKind::AttachMapNotInjective, where + ": vertex " + std::to_string(x) + " hit twice");
  }
}

}  // namespace

TreeOfSpaces::TreeOfSpaces(Vertex root, std::vector<MetricGraph> vertex_spaces, std::vector<EdgeSpace> edges,
                           FamilyParams params, std::vector<std::string> space_names)
    : root_(root),
      vertex_spaces_(std::move(vertex_spaces)),
      edges_(std::move(edges)),
      params_(params),
      space_names_(std::move(space_names)) {
  const std::size_t n = vertex_spaces_.size();
  if (n == 0) fail(ErrorKind::InvalidArgument, "tree of spaces needs at least one vertex");
  if (root_ >= n) fail(ErrorKind::UnknownVertex, "root " + std::to_string(root_) + " is not a tree vertex");
  if (edges_.size() != n - 1) fail(ErrorKind::InvalidArgument, "tree must have exactly one edge fewer than vertices");
  if (params_.K < Rational(1) || params_.epsilon < Rational(0) || params_.delta < HalfInt{}) {
    fail(ErrorKind::InvalidArgument, "family parameters need K >= 1, epsilon >= 0, delta >= 0");
  }
  std::vector<Edge> tree_edges;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.from >= n || e.to >= n) fail(ErrorKind::UnknownVertex, "edge " + std::to_string(i) + " names a missing tree vertex");
    if (e.from == e.to) fail(ErrorKind::SelfLoop, "tree edge " + std::to_string(i) + " is a loop");
    check_attach(e, e.attach_lo, vertex_spaces_[e.from], i, "lo");
    check_attach(e, e.attach_hi, vertex_spaces_[e.to], i, "hi");
    tree_edges.emplace_back(e.from, e.to);
  }
  if (n > 1) {
    tree_ = MetricGraph::from_edges(tree_edges, n);
    if (tree_.edge_count() != edges_.size()) fail(ErrorKind::InvalidArgument, "tree has parallel edges");
  }
  parent_.assign(n, std::nullopt);
  parent_edge_.assign(n, 0);
  child_edges_.assign(n, {});
  std::vector<bool> seen(n, false);
  std::deque<Vertex> queue{root_};
  seen[root_] = true;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (e.from != v && e.to != v) continue;
      const Vertex w = e.from == v ? e.to : e.from;
      if (seen[w]) continue;
      seen[w] = true;
      parent_[w] = v;
      parent_edge_[w] = i;
      child_edges_[v].push_back(i);
      queue.push_back(w);
    }
  }
}

std::size_t TreeOfSpaces::parent_edge(Vertex v) const {
  if (!parent_.at(v)) fail(ErrorKind::VertexIsRoot, "vertex " + std::to_string(v) + " is the root");
  return parent_edge_[v];
}

Vertex TreeOfSpaces::child_of(std::size_t edge) const {
  const auto& e = edges_.at(edge);
  return parent_[e.to] && *parent_[e.to] == e.from && parent_edge_[e.to] == edge ? e.to : e.from;
}

const std::vector<Vertex>& TreeOfSpaces::attach_parent_side(std::size_t edge) const {
  const auto& e = edges_.at(edge);
  return child_of(edge) == e.to ? e.attach_lo : e.attach_hi;
}

const std::vector<Vertex>& TreeOfSpaces::attach_child_side(std::size_t edge) const {
  const auto& e = edges_.at(edge);
  return child_of(edge) == e.to ? e.attach_hi : e.attach_lo;
}

HalfInt TotalSpace::tree_distance(const TreeOfSpaces& tos, Vertex x, Vertex y) const {
  const Piece& a = piece(x);
  const Piece& b = piece(y);
  auto ends = [&](const Piece& p) -> std::pair<Vertex, Vertex> {
    if (!p.over_edge) return {static_cast<Vertex>(p.index), static_cast<Vertex>(p.index)};
    const auto& e = tos.edges()[p.index];
    return {e.from, e.to};
  };
  if (a.over_edge && b.over_edge && a.index == b.index) return HalfInt{};
  const auto [a1, a2] = ends(a);
  const auto [b1, b2] = ends(b);
  Distance best = kUnreachable;
  for (const Vertex u : {a1, a2}) {
    for (const Vertex v : {b1, b2}) best = std::min(best, tos.tree_distance(u, v));
  }
  const std::int64_t halves = (a.over_edge ? 1 : 0) + (b.over_edge ? 1 : 0);
  return HalfInt::from_twice(2 * static_cast<std::int64_t>(best) + halves);
}

TotalSpace assemble_total_space(const TreeOfSpaces& tos) {
  std::vector<std::size_t> vertex_offset;
  std::vector<std::size_t> edge_offset;
  std::vector<Piece> pieces;
  std::vector<Edge> edges;
  std::size_t next = 0;
  for (Vertex v = 0; v < tos.tree_vertex_count(); ++v) {
    const MetricGraph& space = tos.vertex_space(v);
    vertex_offset.push_back(next);
    for (Vertex x = 0; x < space.vertex_count(); ++x) pieces.push_back(Piece{false, v, x});
    for (const auto& [a, b] : space.edges()) {
      edges.emplace_back(static_cast<Vertex>(next + a), static_cast<Vertex>(next + b));
    }
    next += space.vertex_count();
  }
  for (std::size_t i = 0; i < tos.edges().size(); ++i) {
    const EdgeSpace& e = tos.edges()[i];
    edge_offset.push_back(next);
    for (Vertex x = 0; x < e.space.vertex_count(); ++x) {
      pieces.push_back(Piece{true, i, x});
      const auto m = static_cast<Vertex>(next + x);
      edges.emplace_back(static_cast<Vertex>(vertex_offset[e.from] + e.attach_lo[x]), m);
      edges.emplace_back(m, static_cast<Vertex>(vertex_offset[e.to] + e.attach_hi[x]));
    }
    for (const auto& [a, b] : e.space.edges()) {
      edges.emplace_back(static_cast<Vertex>(next + a), static_cast<Vertex>(next + b));
    }
    next += e.space.vertex_count();
  }
  MetricGraph graph = next == 1 ? MetricGraph::single_vertex() : MetricGraph::from_edges(edges, next);
  return TotalSpace(std::move(graph), std::move(vertex_offset), std::move(edge_offset), std::move(pieces));
}

QIEmbeddingReport verify_qi_embedded(const TreeOfSpaces& tos, const TotalSpace& /*total*/) {
  QIEmbeddingReport report;
  const QIEstimate declared{tos.params().K, tos.params().epsilon, false};
  for (std::size_t i = 0; i < tos.edges().size(); ++i) {
    const EdgeSpace& e = tos.edges()[i];
    for (const bool hi : {false, true}) {
      const MetricGraph& target = tos.vertex_space(hi ? e.to : e.from);
      const PairStats stats = map_pair_stats(e.space, target, hi ? e.attach_hi : e.attach_lo);
      AttachQIReport row;
      row.edge = i;
      row.hi_side = hi;
      row.best = fit_quasi_isometry(stats, Rational(e.space.diameter()));
      row.pass = satisfies(stats, declared);
      report.pass = report.pass && row.pass;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::vector<PropernessRow> verify_uniform_properness(const TreeOfSpaces& tos, const TotalSpace& total,
                                                     std::span<const Distance> M_values) {
  std::vector<Distance> Ms(M_values.begin(), M_values.end());
  std::sort(Ms.begin(), Ms.end());
  Ms.erase(std::unique(Ms.begin(), Ms.end()), Ms.end());
  std::vector<PropernessRow> rows;
  for (const Distance M : Ms) rows.push_back({M, 0});
  const MetricGraph& X = total.graph();
  for (Vertex v = 0; v < tos.tree_vertex_count(); ++v) {
    const MetricGraph& space = tos.vertex_space(v);
    for (Vertex x = 0; x < space.vertex_count(); ++x) {
      const auto dv = space.distances_from(x);
      const auto dX = X.distances_from(total.lift(v, x));
      for (Vertex y = 0; y < space.vertex_count(); ++y) {
        const Distance outer = dX[total.lift(v, y)];
        for (auto& row : rows) {
          if (outer <= row.M) row.N = std::max(row.N, dv[y]);
        }
      }
    }
  }
  return rows;
}

std::vector<std::optional<Vertex>> phi_map(const TreeOfSpaces& tos, Vertex v) {
  const std::size_t e = tos.parent_edge(v);
  const Vertex up = *tos.parent(v);
  const auto& lo = tos.attach_parent_side(e);
  const auto& hi = tos.attach_child_side(e);
  std::vector<std::optional<Vertex>> phi(tos.vertex_space(up).vertex_count());
  for (std::size_t x = 0; x < lo.size(); ++x) phi[lo[x]] = hi[x];
  return phi;
}

GeodesicSegment capital_phi(const TreeOfSpaces& tos, Vertex v, const GeodesicSegment& mu) {
  const auto phi = phi_map(tos, v);
  const MetricGraph& source = tos.vertex_space(*tos.parent(v));
  if (mu.graph_id != source.id()) fail(ErrorKind::SegmentGraphMismatch, "segment is not in the rootward vertex space");
  if (mu.vertices.empty()) fail(ErrorKind::InvalidArgument, "empty segment");
  const auto a = phi[mu.front()];
  const auto b = phi[mu.back()];
  if (!a || !b) fail(ErrorKind::EndpointOutsideDomain, "segment endpoint outside the attach image");
  return geodesic(tos.vertex_space(v), *a, *b);
}

Distance attach_image_quasiconvexity(const TreeOfSpaces& tos, GeodesicMode mode) {
  Distance worst = 0;
  for (const EdgeSpace& e : tos.edges()) {
    worst = std::max(worst, quasiconvexity_constant(tos.vertex_space(e.from), e.attach_lo, mode));
    worst = std::max(worst, quasiconvexity_constant(tos.vertex_space(e.to), e.attach_hi, mode));
  }
  return worst;
}

FamilyReport verify_family(const TreeOfSpaces& tos, const TotalSpace& total, const FourPointOptions& options) {
  FamilyReport report;
  auto name_of = [&](Vertex v) {
    return v < tos.space_names().size() ? tos.space_names()[v] : "X" + std::to_string(v);
  };
  for (Vertex v = 0; v < tos.tree_vertex_count(); ++v) {
    SpaceDeltaRow row{name_of(v), false, v, delta_four_point(tos.vertex_space(v), options).delta_four_point, false};
    row.pass = row.delta <= tos.params().delta;
    report.deltas.push_back(row);
  }
  for (std::size_t i = 0; i < tos.edges().size(); ++i) {
    SpaceDeltaRow row{"e" + std::to_string(i), true, i, delta_four_point(tos.edges()[i].space, options).delta_four_point, false};
    row.pass = row.delta <= tos.params().delta;
    report.deltas.push_back(row);
  }
  report.qi = verify_qi_embedded(tos, total);
  report.pass = report.qi.pass && std::all_of(report.deltas.begin(), report.deltas.end(), [](const auto& r) { return r.pass; });
  return report;
}

}  // namespace ctmap
