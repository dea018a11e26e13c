#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctmap/exact.hpp"

namespace ctmap {

using Vertex = std::uint32_t;
using Distance = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

inline constexpr Distance kUnreachable = 0xffffffffu;

// Graphs up to this many vertices keep a dense all-pairs table (16-bit
// entries). Larger graphs answer distance queries by breadth-first search.
inline constexpr std::size_t kDenseDistanceLimit = 8192;

// Finite connected graph with unit edge lengths and its path metric.
// Immutable after construction; copies share state, so copies compare equal
// under id().
class MetricGraph {
 public:
  // Validates connectivity and irreflexivity. Duplicate edges collapse.
  // When vertex_count is absent it is one past the largest referenced id.
  static MetricGraph from_edges(std::span<const Edge> edges,
                                std::optional<std::size_t> vertex_count = std::nullopt,
                                std::vector<std::string> labels = {});
  static MetricGraph single_vertex(std::string label = {});

  std::size_t vertex_count() const noexcept;
  std::size_t edge_count() const noexcept;
  // Sorted ascending.
  std::span<const Vertex> neighbors(Vertex v) const;
  // Canonical edge list: u < v, sorted lexicographically.
  std::span<const Edge> edges() const noexcept;
  bool adjacent(Vertex u, Vertex v) const;

  Distance distance(Vertex u, Vertex v) const;
  std::vector<Distance> distances_from(Vertex source) const;
  Distance diameter() const;

  bool has_labels() const noexcept;
  const std::string& label(Vertex v) const;
  std::optional<Vertex> find_label(std::string_view label) const;

  // Identity of the shared immutable state.
  std::uintptr_t id() const noexcept;
  void check_vertex(Vertex v) const;

  // Row of the dense all-pairs table; throws GraphTooLarge beyond the dense limit.
  const std::uint16_t* dense_row(Vertex u) const;

 private:
  struct State;
  explicit MetricGraph(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

// Ordered vertex path realizing d(first, last) in its owning graph.
struct GeodesicSegment {
  std::vector<Vertex> vertices;
  std::uintptr_t graph_id = 0;

  std::size_t length() const noexcept { return vertices.empty() ? 0 : vertices.size() - 1; }
  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }
  bool contains(Vertex v) const;
};

struct HyperbolicityReport {
  HalfInt delta_four_point;
  std::array<Vertex, 4> witness_quadruple{};
  std::uint64_t quadruples_scanned = 0;
  bool sampled = false;
};

struct FourPointOptions {
  std::size_t vertex_cap = 2000;
  // Zero means exhaustive; otherwise draw this many random quadruples.
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct NetApproximation {
  MetricGraph net;
  std::vector<Vertex> centers;  // net vertex -> input vertex
  std::vector<Vertex> nearest;  // input vertex -> net vertex of a closest center
};

MetricGraph build_graph(std::span<const Edge> edges);

Distance distance(const MetricGraph& g, Vertex u, Vertex v);

// Breadth-first geodesic: walking back from v, each step takes the
// lowest-id neighbour one layer closer to u.
GeodesicSegment geodesic(const MetricGraph& g, Vertex u, Vertex v);

HalfInt gromov_product(const MetricGraph& g, Vertex a, Vertex b, Vertex c);

// (1/2)(L1 - L2) for the three pairing sums L1 >= L2 >= L3.
HalfInt four_point_defect(const MetricGraph& g, Vertex x, Vertex y, Vertex z, Vertex w);

HyperbolicityReport delta_four_point(const MetricGraph& g, const FourPointOptions& options = {});

NetApproximation net_approximation(const MetricGraph& g, Distance edge_radius = 4);

std::vector<Vertex> ball(const MetricGraph& g, Vertex center, Distance radius);

// Multi-source breadth-first distances to a nonempty vertex set.
std::vector<Distance> distances_to_set(const MetricGraph& g, std::span<const Vertex> set);

// Vertices lying on at least one geodesic from a to b (ascending).
std::vector<Vertex> geodesic_interval(const MetricGraph& g, Vertex a, Vertex b);

bool is_path(const MetricGraph& g, std::span<const Vertex> path);

// Edge-list text: one "u v" pair per line, '#' starts a comment.
std::vector<Edge> parse_edge_list(std::istream& in);
std::vector<Edge> parse_edge_list_file(const std::string& path);

}  // namespace ctmap
