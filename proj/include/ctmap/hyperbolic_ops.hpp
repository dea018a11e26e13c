#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctmap/exact.hpp"
#include "ctmap/metric_graph.hpp"

namespace ctmap {

struct QIEstimate {
  Rational K{1};
  Rational epsilon{0};
  // No K on the grid brought the additive constant under its cap; K and
  // epsilon then hold the largest grid K and the epsilon it needs.
  bool saturated = false;
};

// Per domain distance s, the extreme image distances observed.
class PairStats {
 public:
  void add(Distance domain, Distance image);
  void merge(const PairStats& other);
  bool empty() const noexcept { return min_image_.empty(); }
  std::size_t max_domain() const noexcept { return min_image_.empty() ? 0 : min_image_.size() - 1; }
  bool has(Distance s) const { return s < seen_.size() && seen_[s]; }
  Distance min_image(Distance s) const { return min_image_[s]; }
  Distance max_image(Distance s) const { return max_image_[s]; }

 private:
  std::vector<Distance> min_image_;
  std::vector<Distance> max_image_;
  std::vector<bool> seen_;
};

// Least K on the grid {1, 5/4, ..., 16}, then least epsilon on the 1/4 grid,
// with (1/K) s - epsilon <= t <= K s + epsilon for every observed pair, and
// epsilon no larger than epsilon_cap.
QIEstimate fit_quasi_isometry(const PairStats& stats, const Rational& epsilon_cap);
bool satisfies(const PairStats& stats, const QIEstimate& params);

// Distances (samples) of a vertex map f: domain -> target over all domain pairs.
PairStats map_pair_stats(const MetricGraph& domain, const MetricGraph& target, std::span<const Vertex> f);

struct PerpsConstants {
  Distance D = 1;
  Distance C1 = 0;
  HalfInt delta_used;
  std::uint64_t quadruples = 0;
  bool sampled = false;
};

struct LipschitzReport {
  Distance max_displacement = 0;
  Edge witness{0, 0};
  Rational budget;
  bool pass = false;
};

struct ConcatReport {
  QIEstimate params;
  std::vector<Vertex> path;
  Rational K_budget;
  Rational epsilon_budget;
  bool pass = false;
};

struct InnerProductReport {
  HalfInt value;
  Rational budget;
  bool pass = false;
};

struct CompatReport {
  Distance max_distance = 0;
  Vertex witness = 0;
  Rational budget;
  bool pass = false;
};

enum class GeodesicMode { Canonical, Exhaustive };

struct DivergenceEntry {
  Distance D = 0;
  std::optional<Distance> length;  // nullopt: no avoiding path
};

struct DivergenceProfile {
  std::vector<DivergenceEntry> entries;
  double log_slope = 0.0;
  bool strictly_increasing = false;
  bool pass = false;  // log-slope above kDivergenceSlopeFloor
};

inline constexpr double kDivergenceSlopeFloor = 0.01;

// Empirical budgets for the existence constants of the projection lemmas,
// expressed in the measured delta and quasigeodesic parameters.
Rational lipschitz_budget(HalfInt delta);                    // 4 delta + 1
Rational concat_K_budget();                                  // 3
Rational concat_epsilon_budget(HalfInt delta);               // 8 delta + 2
Rational inner_product_budget(const QIEstimate& params, HalfInt delta);  // K (eps/2 + 2 delta + 1)
Rational compat_budget(const QIEstimate& params, HalfInt delta);

Vertex nearest_point_projection(const MetricGraph& g, Vertex x, const GeodesicSegment& mu);
// Position along mu of the projection.
std::size_t nearest_point_index(const MetricGraph& g, Vertex x, const GeodesicSegment& mu);

LipschitzReport projection_lipschitz_audit(const MetricGraph& g, const GeodesicSegment& mu, HalfInt delta);

// Least k with every geodesic between points of S inside the closed
// k-neighbourhood of S. Canonical mode uses geodesic(a, b) only; exhaustive
// mode uses every vertex of the geodesic interval of a and b.
Distance quasiconvexity_constant(const MetricGraph& g, std::span<const Vertex> S,
                                 GeodesicMode mode = GeodesicMode::Canonical);

QIEstimate quasigeodesic_params(const MetricGraph& g, std::span<const Vertex> path);

ConcatReport concat_projection_check(const MetricGraph& g, Vertex x, const GeodesicSegment& mu, std::size_t z_index,
                                     HalfInt delta);

InnerProductReport inner_product_bound_audit(const MetricGraph& g, std::span<const Vertex> path, std::size_t p,
                                             std::size_t q, std::size_t r, HalfInt delta);

// phi maps source vertices to target vertices (nullopt: undefined). mu2 is
// geodesic(phi(a), phi(b)) in the target.
CompatReport projection_compat_audit(const MetricGraph& source, const MetricGraph& target,
                                     std::span<const std::optional<Vertex>> phi, const QIEstimate& phi_params,
                                     const GeodesicSegment& mu1, std::span<const Vertex> sample, HalfInt delta);

struct PerpsOptions {
  std::uint64_t exhaustive_limit = 200000;  // quadruples per D before sampling
  std::uint64_t sample_count = 200000;
  std::uint64_t seed = 0;
};

PerpsConstants calibrate_perps(const MetricGraph& g, HalfInt delta, const PerpsOptions& options = {});

// Radius C1 needed for the perpendicular union on a single quadruple.
Distance perps_radius(const MetricGraph& g, Vertex a, Vertex b, Vertex c, Vertex d);

DivergenceProfile divergence_profile(const MetricGraph& g, Vertex x, Vertex y, Vertex z, Vertex w, Distance A0,
                                     Distance min_base = 1);

}  // namespace ctmap
