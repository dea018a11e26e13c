#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctmap/exact.hpp"
#include "ctmap/hyperbolic_ops.hpp"
#include "ctmap/tree_of_spaces.hpp"

namespace ctmap {

// Segment emitted for a child tree vertex by one step of the construction.
struct ChildSegment {
  Vertex child = 0;
  GeodesicSegment segment;  // in X_child
  Vertex p = 0;             // maximal pair in the parent space
  Vertex q = 0;
};

struct LadderEntry {
  Vertex tree_vertex = 0;
  GeodesicSegment segment;  // lambda_v in X_v
  std::optional<Vertex> parent;
  Vertex p = 0;
  Vertex q = 0;
  Distance generation = 0;
};

struct Ladder {
  GeodesicSegment base_geodesic;
  std::vector<LadderEntry> entries;              // breadth-first, root first
  std::vector<std::optional<std::size_t>> slot;  // tree vertex -> entry index
  std::int64_t C = 0;
  std::int64_t D = 0;

  bool in_support(Vertex v) const { return v < slot.size() && slot[v].has_value(); }
  std::vector<Vertex> support_tree() const;
  const LadderEntry& entry(Vertex v) const { return entries.at(*slot.at(v)); }
};

struct LadderConstants {
  std::int64_t C = 0;  // C1 + C2
  std::int64_t D = 1;
  Distance C1 = 0;
  Distance C2 = 0;
};

// C1 and D from the perpendicular calibration of every vertex space, C2 from
// the quasiconvexity of the attach images.
LadderConstants calibrate_ladder_constants(const TreeOfSpaces& tos, const PerpsOptions& options = {});

std::vector<ChildSegment> build_b1(const TreeOfSpaces& tos, const TotalSpace& total, Vertex v,
                                   const GeodesicSegment& mu, std::int64_t C, std::int64_t D);

Ladder build_ladder(const TreeOfSpaces& tos, const TotalSpace& total, const GeodesicSegment& lambda, std::int64_t C,
                    std::int64_t D);

// B_lambda as ascending X vertices.
std::vector<Vertex> ladder_vertices(const TotalSpace& total, const Ladder& ladder);

// Pi_lambda tabulated over all of X.
class Retraction {
 public:
  Retraction(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder);
  Vertex operator()(Vertex x) const { return image_.at(x); }
  const std::vector<Vertex>& table() const noexcept { return image_; }

 private:
  std::vector<Vertex> image_;
};

Vertex retract(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder, Vertex x);

struct RetractionReport {
  Distance lipschitz_C0 = 0;
  Edge witness_pair{0, 0};
  Distance quasiconvexity_Cprime = 0;
  Rational vertical_A{0};
  Vertex vertical_witness = 0;
  bool ladder_trivial = false;
};

RetractionReport audit_retraction_lipschitz(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder);
Distance audit_quasiconvexity(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder,
                              GeodesicMode mode = GeodesicMode::Canonical);
RetractionReport audit_vertical_bound(const TreeOfSpaces& tos, const TotalSpace& total, const Ladder& ladder);

}  // namespace ctmap
