#include "ctmap/ladder.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "ctmap/errors.hpp"

namespace ctmap {

std::vector<Vertex> Ladder::support_tree() const {
  std::vector<Vertex> out;
  for (const auto& e : entries) out.push_back(e.tree_vertex);
  std::sort(out.begin(), out.end());
  return out;
}

LadderConstants calibrate_ladder_constants(const TreeOfSpaces& tos, const PerpsOptions& options) {
  LadderConstants out;
  std::map<std::uintptr_t, PerpsConstants> cache;
  for (Vertex v = 0; v < tos.tree_vertex_count(); ++v) {
    const MetricGraph& space = tos.vertex_space(v);
    auto it = cache.find(space.id());
    if (it == cache.end()) {
      const HalfInt delta = delta_four_point(space).delta_four_point;
      it = cache.emplace(space.id(), calibrate_perps(space, delta, options)).first;
    }
    out.C1 = std::max(out.C1, it->second.C1);
    out.D = std::max<std::int64_t>(out.D, it->second.D);
  }
  out.C2 = attach_image_quasiconvexity(tos);
  out.C = static_cast<std::int64_t>(out.C1) + out.C2;
  return out;
}

std::vector<ChildSegment> build_b1(const TreeOfSpaces& tos, const TotalSpace& /*total*/, Vertex v,
                                   const GeodesicSegment& mu, std::int64_t C, std::int64_t D) {
  if (C < 0 || D < 0) fail(ErrorKind::ConstantsNegative, "ladder constants C and D must be non-negative");
  const MetricGraph& space = tos.vertex_space(v);
  if (mu.graph_id != space.id()) fail(ErrorKind::SegmentGraphMismatch, "segment is not in the vertex space");
  const auto near = distances_to_set(space, mu.vertices);
  std::vector<ChildSegment> out;
  for (const std::size_t e : tos.child_edges(v)) {
    std::vector<Vertex> meet;
    for (const Vertex x : tos.attach_parent_side(e)) {
      if (near[x] <= static_cast<Distance>(C)) meet.push_back(x);
    }
    std::sort(meet.begin(), meet.end());
    if (meet.size() < 2) continue;
    Vertex p = meet[0];
    Vertex q = meet[0];
    Distance best = 0;
    for (std::size_t i = 0; i < meet.size(); ++i) {
      for (std::size_t j = i + 1; j < meet.size(); ++j) {
        const Distance d = space.distance(meet[i], meet[j]);
        if (d > best) {
          best = d;
          p = meet[i];
          q = meet[j];
        }
      }
    }
    if (static_cast<std::int64_t>(best) <= D) continue;  // strict threshold
    const Vertex child = tos.child_of(e);
    out.push_back(ChildSegment{child, capital_phi(tos, child, geodesic(space, p, q)), p, q});
  }
  return out;
}

Ladder build_ladder(const TreeOfSpaces& tos, const TotalSpace& total, const GeodesicSegment& lambda, std::int64_t C,
                    std::int64_t D) {
  if (C < 0 || D < 0) fail(ErrorKind::ConstantsNegative, "ladder constants C and D must be non-negative");
  if (lambda.graph_id != tos.vertex_space(tos.root()).id()) {
    fail(ErrorKind::SegmentGraphMismatch, "base geodesic is not in the root space");
  }
  Ladder ladder;
  ladder.base_geodesic = lambda;
  ladder.C = C;
  ladder.D = D;
  ladder.slot.assign(tos.tree_vertex_count(), std::nullopt);
  ladder.entries.push_back(LadderEntry{tos.root(), lambda, std::nullopt, 0, 0, 0});
  ladder.slot[tos.root()] = 0;
  for (std::size_t head = 0; head < ladder.entries.size(); ++head) {
    const LadderEntry current = ladder.entries[head];
    for (auto& child : build_b1(tos, total, current.tree_vertex, current.segment, C, D)) {
      ladder.slot[child.child] = ladder.entries.size();
      ladder.entries.push_back(LadderEntry{child.child, std::move(child.segment), current.tree_vertex, child.p, child.q,
                                           current.generation + 1});
    }
  }
  return ladder;
}

std::vector<Vertex> ladder_vertices(const TotalSpace& total, const Ladder& ladder) {
  std::vector<Vertex> out;
  for (const auto& e : ladder.entries) {
    for (const Vertex x : e.segment.vertices) out.push_back(total.lift(e.tree_vertex, x));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Retraction::Retraction(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder) {
  const MetricGraph& X = total.graph();
  const auto n = X.vertex_count();
  // Owner: the lowest-id nearest vertex of P^-1(T1), found layer by layer.
  std::vector<Distance> dist(n, kUnreachable);
  std::vector<Vertex> owner(n, 0);
  std::vector<Vertex> order;
  for (Vertex x = 0; x < n; ++x) {
    const Piece& pc = total.piece(x);
    if (!pc.over_edge && ladder.in_support(static_cast<Vertex>(pc.index))) {
      dist[x] = 0;
      owner[x] = x;
      order.push_back(x);
    }
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vertex u = order[head];
    for (const Vertex w : X.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        owner[w] = owner[u];
        order.push_back(w);
      } else if (dist[w] == dist[u] + 1) {
        owner[w] = std::min(owner[w], owner[u]);
      }
    }
  }
  // Fibrewise projection onto lambda_v, earliest position on ties.
  std::vector<std::vector<Vertex>> projection(tos.tree_vertex_count());
  for (const auto& e : ladder.entries) {
    const MetricGraph& space = tos.vertex_space(e.tree_vertex);
    auto& table = projection[e.tree_vertex];
    table.resize(space.vertex_count());
    for (Vertex x = 0; x < space.vertex_count(); ++x) table[x] = nearest_point_projection(space, x, e.segment);
  }
  image_.resize(n);
  for (Vertex x = 0; x < n; ++x) {
    const Piece& pc = total.piece(owner[x]);
    image_[x] = total.lift(static_cast<Vertex>(pc.index), projection[pc.index][pc.local]);
  }
}

Vertex retract(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder, Vertex x) {
  total.graph().check_vertex(x);
  return Retraction(tos, total, ladder)(x);
}

RetractionReport audit_retraction_lipschitz(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder) {
  const Retraction pi(tos, total, ladder);
  RetractionReport report;
  for (const auto& [x, y] : total.graph().edges()) {
    const Distance d = total.graph().distance(pi(x), pi(y));
    if (d > report.lipschitz_C0) {
      report.lipschitz_C0 = d;
      report.witness_pair = {x, y};
    }
  }
  return report;
}

Distance audit_quasiconvexity(const TreeOfSpaces& /*tos*/, const TotalSpace& total, const Ladder& ladder,
                              GeodesicMode mode) {
  return quasiconvexity_constant(total.graph(), ladder_vertices(total, ladder), mode);
}

RetractionReport audit_vertical_bound(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder) {
  RetractionReport report;
  if (ladder.entries.size() == 1) {
    report.ladder_trivial = true;
    return report;
  }
  std::vector<Vertex> base;
  for (const Vertex x : ladder.base_geodesic.vertices) base.push_back(total.lift(tos.root(), x));
  const auto to_base = distances_to_set(total.graph(), base);
  for (const auto& e : ladder.entries) {
    if (e.tree_vertex == tos.root()) continue;
    const auto dT = static_cast<std::int64_t>(tos.tree_distance(e.tree_vertex, tos.root()));
    for (const Vertex x : e.segment.vertices) {
      const Vertex a = total.lift(e.tree_vertex, x);
      const Rational ratio(to_base[a], dT);
      if (ratio > report.vertical_A) {
        report.vertical_A = ratio;
        report.vertical_witness = a;
      }
    }
  }
  return report;
}

}  // namespace ctmap
