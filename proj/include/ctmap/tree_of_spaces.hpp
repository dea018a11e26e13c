#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctmap/exact.hpp"
#include "ctmap/hyperbolic_ops.hpp"
#include "ctmap/metric_graph.hpp"

namespace ctmap {

struct FamilyParams {
  HalfInt delta;
  Rational K{1};
  Rational epsilon{0};
};

// Edge of the base tree with its edge space and the two attaching maps
// X_e -> X_from and X_e -> X_to.
struct EdgeSpace {
  Vertex from = 0;
  Vertex to = 0;
  MetricGraph space = MetricGraph::single_vertex();
  std::vector<Vertex> attach_lo;
  std::vector<Vertex> attach_hi;
};

class TreeOfSpaces {
 public:
  // Validates the tree, the spaces and the attaching maps.
  TreeOfSpaces(Vertex root, std::vector<MetricGraph> vertex_spaces, std::vector<EdgeSpace> edges,
               FamilyParams params, std::vector<std::string> space_names = {});

  Vertex root() const noexcept { return root_; }
  std::size_t tree_vertex_count() const noexcept { return vertex_spaces_.size(); }
  const MetricGraph& tree() const noexcept { return tree_; }
  const MetricGraph& vertex_space(Vertex v) const { return vertex_spaces_.at(v); }
  const std::vector<EdgeSpace>& edges() const noexcept { return edges_; }
  const FamilyParams& params() const noexcept { return params_; }
  const std::vector<std::string>& space_names() const noexcept { return space_names_; }

  // Rootward neighbour and the index of the edge joining them.
  std::optional<Vertex> parent(Vertex v) const { return parent_.at(v); }
  std::size_t parent_edge(Vertex v) const;
  // Edges leading away from the root at v, ascending edge index.
  const std::vector<std::size_t>& child_edges(Vertex v) const { return child_edges_.at(v); }
  Vertex child_of(std::size_t edge) const;
  // Attaching map of edge e into the rootward / away-from-root endpoint.
  const std::vector<Vertex>& attach_parent_side(std::size_t edge) const;
  const std::vector<Vertex>& attach_child_side(std::size_t edge) const;
  Distance tree_distance(Vertex a, Vertex b) const { return tree_.distance(a, b); }

 private:
  Vertex root_;
  std::vector<MetricGraph> vertex_spaces_;
  std::vector<EdgeSpace> edges_;
  FamilyParams params_;
  std::vector<std::string> space_names_;
  MetricGraph tree_ = MetricGraph::single_vertex();
  std::vector<std::optional<Vertex>> parent_;
  std::vector<std::size_t> parent_edge_;
  std::vector<std::vector<std::size_t>> child_edges_;
};

// Where an X vertex sits: over a tree vertex (vertex-space copy) or over the
// midpoint of a tree edge (mid-copy of the edge space).
struct Piece {
  bool over_edge = false;
  std::size_t index = 0;  // tree vertex or edge index
  Vertex local = 0;       // vertex of X_v or X_e
};

class TotalSpace {
 public:
  TotalSpace(MetricGraph graph, std::vector<std::size_t> vertex_offset, std::vector<std::size_t> edge_offset,
             std::vector<Piece> pieces)
      : graph_(std::move(graph)),
        vertex_offset_(std::move(vertex_offset)),
        edge_offset_(std::move(edge_offset)),
        pieces_(std::move(pieces)) {}

  const MetricGraph& graph() const noexcept { return graph_; }
  Vertex lift(Vertex tree_vertex, Vertex local) const {
    return static_cast<Vertex>(vertex_offset_.at(tree_vertex) + local);
  }
  Vertex mid(std::size_t edge, Vertex local) const { return static_cast<Vertex>(edge_offset_.at(edge) + local); }
  const Piece& piece(Vertex x) const { return pieces_.at(x); }
  // P(x) in the subdivided tree, doubled: vertex v -> 2 d_T(v, .), midpoints odd.
  HalfInt tree_distance(const TreeOfSpaces& tos, Vertex x, Vertex y) const;

 private:
  MetricGraph graph_;
  std::vector<std::size_t> vertex_offset_;
  std::vector<std::size_t> edge_offset_;
  std::vector<Piece> pieces_;
};

TotalSpace assemble_total_space(const TreeOfSpaces& tos);

struct AttachQIReport {
  std::size_t edge = 0;
  bool hi_side = false;
  QIEstimate best;
  bool pass = false;
};

struct QIEmbeddingReport {
  std::vector<AttachQIReport> rows;
  bool pass = true;
};

QIEmbeddingReport verify_qi_embedded(const TreeOfSpaces& tos, const TotalSpace& total);

struct PropernessRow {
  Distance M = 0;
  Distance N = 0;
};

std::vector<PropernessRow> verify_uniform_properness(const TreeOfSpaces& tos, const TotalSpace& total,
                                                     std::span<const Distance> M_values);

// Partial map X_{v-} -> X_v defined on the rootward attach image.
std::vector<std::optional<Vertex>> phi_map(const TreeOfSpaces& tos, Vertex v);
GeodesicSegment capital_phi(const TreeOfSpaces& tos, Vertex v, const GeodesicSegment& mu);

// Largest quasiconvexity constant of an attach image in its vertex space.
Distance attach_image_quasiconvexity(const TreeOfSpaces& tos, GeodesicMode mode = GeodesicMode::Canonical);

struct SpaceDeltaRow {
  std::string name;
  bool edge_space = false;
  std::size_t index = 0;
  HalfInt delta;
  bool pass = false;
};

struct FamilyReport {
  std::vector<SpaceDeltaRow> deltas;
  QIEmbeddingReport qi;
  bool pass = false;
};

// Declared delta against every vertex and edge space, and the declared
// (K, epsilon) against every attaching map.
FamilyReport verify_family(const TreeOfSpaces& tos, const TotalSpace& total, const FourPointOptions& options = {});

}  // namespace ctmap
