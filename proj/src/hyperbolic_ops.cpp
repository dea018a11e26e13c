#include "ctmap/hyperbolic_ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "ctmap/errors.hpp"

namespace ctmap {

namespace {

constexpr std::int64_t kGrid = 4;
constexpr std::int64_t kMaxK = 16;

void check_segment(const MetricGraph& g, const GeodesicSegment& mu) {
  if (mu.graph_id != g.id()) fail(ErrorKind::SegmentGraphMismatch, "geodesic segment belongs to a different graph");
  if (mu.vertices.empty()) fail(ErrorKind::InvalidArgument, "empty geodesic segment");
}

// Least epsilon on the grid for a fixed K; every observed pair must satisfy
// both quasi-isometry inequalities.
Rational needed_epsilon(const PairStats& stats, const Rational& K) {
  Rational worst(0);
  for (Distance s = 0; s <= stats.max_domain(); ++s) {
    if (!stats.has(s)) continue;
    const Rational lower = Rational(s) / K - Rational(stats.min_image(s));
    const Rational upper = Rational(stats.max_image(s)) - K * Rational(s);
    worst = std::max({worst, lower, upper});
  }
  return worst.ceil_to_grid(kGrid);
}

Distance distance_to_set_dense(const MetricGraph& g, Vertex v, std::span<const Vertex> set) {
  Distance best = kUnreachable;
  if (g.vertex_count() <= kDenseDistanceLimit) {
    const std::uint16_t* row = g.dense_row(v);
    for (const Vertex s : set) best = std::min<Distance>(best, row[s]);
  } else {
    for (const Vertex s : set) best = std::min(best, g.distance(v, s));
  }
  return best;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

}  // namespace

void PairStats::add(Distance domain, Distance image) {
  if (domain >= min_image_.size()) {
    min_image_.resize(domain + 1, kUnreachable);
    max_image_.resize(domain + 1, 0);
    seen_.resize(domain + 1, false);
  }
  min_image_[domain] = std::min(min_image_[domain], image);
  max_image_[domain] = std::max(max_image_[domain], image);
  seen_[domain] = true;
}

void PairStats::merge(const PairStats& other) {
  for (Distance s = 0; s < other.seen_.size(); ++s) {
    if (!other.seen_[s]) continue;
    add(s, other.min_image_[s]);
    add(s, other.max_image_[s]);
  }
}

QIEstimate fit_quasi_isometry(const PairStats& stats, const Rational& epsilon_cap) {
  QIEstimate best;
  for (std::int64_t j = kGrid; j <= kMaxK * kGrid; ++j) {
    const Rational K(j, kGrid);
    const Rational eps = needed_epsilon(stats, K);
    if (eps <= epsilon_cap) return QIEstimate{K, eps, false};
    best = QIEstimate{K, eps, true};
  }
  return best;
}

bool satisfies(const PairStats& stats, const QIEstimate& params) {
  for (Distance s = 0; s <= stats.max_domain(); ++s) {
    if (!stats.has(s)) continue;
    if (Rational(s) / params.K - params.epsilon > Rational(stats.min_image(s))) return false;
    if (Rational(stats.max_image(s)) > params.K * Rational(s) + params.epsilon) return false;
  }
  return true;
}

PairStats map_pair_stats(const MetricGraph& domain, const MetricGraph& target, std::span<const Vertex> f) {
  if (f.size() != domain.vertex_count()) fail(ErrorKind::InvalidArgument, "map must be total on the domain");
  PairStats stats;
  for (Vertex u = 0; u < domain.vertex_count(); ++u) {
    const auto du = domain.distances_from(u);
    const auto tu = target.distances_from(f[u]);
    for (Vertex v = u; v < domain.vertex_count(); ++v) stats.add(du[v], tu[f[v]]);
  }
  return stats;
}

Rational lipschitz_budget(HalfInt delta) { return Rational(4) * delta.to_rational() + Rational(1); }
Rational concat_K_budget() { return Rational(3); }
Rational concat_epsilon_budget(HalfInt delta) { return Rational(8) * delta.to_rational() + Rational(2); }

Rational inner_product_budget(const QIEstimate& params, HalfInt delta) {
  return params.K * (params.epsilon / Rational(2) + Rational(2) * delta.to_rational() + Rational(1));
}

Rational compat_budget(const QIEstimate& params, HalfInt delta) {
  const Rational d = delta.to_rational();
  return params.K * (params.epsilon + Rational(4) * d + Rational(1)) + params.epsilon + Rational(2) * d;
}

std::size_t nearest_point_index(const MetricGraph& g, Vertex x, const GeodesicSegment& mu) {
  check_segment(g, mu);
  g.check_vertex(x);
  std::size_t best = 0;
  Distance best_d = kUnreachable;
  for (std::size_t i = 0; i < mu.vertices.size(); ++i) {
    const Distance d = g.distance(x, mu.vertices[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Vertex nearest_point_projection(const MetricGraph& g, Vertex x, const GeodesicSegment& mu) {
  return mu.vertices[nearest_point_index(g, x, mu)];
}

LipschitzReport projection_lipschitz_audit(const MetricGraph& g, const GeodesicSegment& mu, HalfInt delta) {
  check_segment(g, mu);
  std::vector<Vertex> proj(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) proj[v] = nearest_point_projection(g, v, mu);
  LipschitzReport report;
  report.budget = lipschitz_budget(delta);
  for (const auto& [u, v] : g.edges()) {
    const Distance d = g.distance(proj[u], proj[v]);
    if (d > report.max_displacement) {
      report.max_displacement = d;
      report.witness = {u, v};
    }
  }
  report.pass = Rational(report.max_displacement) <= report.budget;
  return report;
}

Distance quasiconvexity_constant(const MetricGraph& g, std::span<const Vertex> S, GeodesicMode mode) {
  if (S.empty()) fail(ErrorKind::EmptySet, "quasiconvexity of an empty set");
  for (const Vertex s : S) g.check_vertex(s);
  const std::vector<Distance> to_s = distances_to_set(g, S);
  std::vector<Vertex> members(S.begin(), S.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Distance k = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      // Both orientations: the canonical geodesic depends on direction.
      for (const auto& [a, b] : {std::pair{members[i], members[j]}, std::pair{members[j], members[i]}}) {
        if (mode == GeodesicMode::Canonical) {
          for (const Vertex v : geodesic(g, a, b).vertices) k = std::max(k, to_s[v]);
        } else {
          for (const Vertex v : geodesic_interval(g, a, b)) k = std::max(k, to_s[v]);
        }
      }
    }
  }
  return k;
}

QIEstimate quasigeodesic_params(const MetricGraph& g, std::span<const Vertex> path) {
  if (path.empty()) fail(ErrorKind::NotAPath, "empty path");
  if (!is_path(g, path)) fail(ErrorKind::NotAPath, "consecutive path vertices are not adjacent");
  PairStats stats;
  for (std::size_t i = 0; i < path.size(); ++i) {
    for (std::size_t j = i; j < path.size(); ++j) {
      stats.add(static_cast<Distance>(j - i), g.distance(path[i], path[j]));
    }
  }
  return fit_quasi_isometry(stats, Rational(g.diameter()));
}

ConcatReport concat_projection_check(const MetricGraph& g, Vertex x, const GeodesicSegment& mu, std::size_t z_index,
                                     HalfInt delta) {
  check_segment(g, mu);
  if (z_index >= mu.vertices.size()) fail(ErrorKind::InvalidArgument, "z index outside the segment");
  const std::size_t y_index = nearest_point_index(g, x, mu);
  ConcatReport report;
  report.path = geodesic(g, x, mu.vertices[y_index]).vertices;
  if (z_index >= y_index) {
    for (std::size_t i = y_index + 1; i <= z_index; ++i) report.path.push_back(mu.vertices[i]);
  } else {
    for (std::size_t i = y_index; i-- > z_index;) report.path.push_back(mu.vertices[i]);
  }
  report.params = quasigeodesic_params(g, report.path);
  report.K_budget = concat_K_budget();
  report.epsilon_budget = concat_epsilon_budget(delta);
  report.pass = !report.params.saturated && report.params.K <= report.K_budget &&
                report.params.epsilon <= report.epsilon_budget;
  return report;
}

InnerProductReport inner_product_bound_audit(const MetricGraph& g, std::span<const Vertex> path, std::size_t p,
                                             std::size_t q, std::size_t r, HalfInt delta) {
  if (!(p < q && q < r)) fail(ErrorKind::OutOfOrder, "positions must satisfy p < q < r");
  if (r >= path.size()) fail(ErrorKind::InvalidArgument, "position outside the path");
  const QIEstimate params = quasigeodesic_params(g, path);
  InnerProductReport report;
  report.value = gromov_product(g, path[p], path[r], path[q]);
  report.budget = inner_product_budget(params, delta);
  report.pass = report.value.to_rational() <= report.budget;
  return report;
}

CompatReport projection_compat_audit(const MetricGraph& source, const MetricGraph& target,
                                     std::span<const std::optional<Vertex>> phi, const QIEstimate& phi_params,
                                     const GeodesicSegment& mu1, std::span<const Vertex> sample, HalfInt delta) {
  check_segment(source, mu1);
  if (phi.size() != source.vertex_count()) fail(ErrorKind::InvalidArgument, "map table size differs from the source");
  auto image = [&](Vertex v) {
    source.check_vertex(v);
    if (!phi[v]) fail(ErrorKind::MapNotDefinedOnVertex, "map undefined on vertex " + std::to_string(v));
    target.check_vertex(*phi[v]);
    return *phi[v];
  };
  const GeodesicSegment mu2 = geodesic(target, image(mu1.front()), image(mu1.back()));
  CompatReport report;
  report.budget = compat_budget(phi_params, delta);
  for (const Vertex p : sample) {
    const Vertex q = nearest_point_projection(source, p, mu1);
    const Vertex r = nearest_point_projection(target, image(p), mu2);
    const Distance d = target.distance(r, image(q));
    if (d > report.max_distance) {
      report.max_distance = d;
      report.witness = p;
    }
  }
  report.pass = Rational(report.max_distance) <= report.budget;
  return report;
}

namespace {

// Canonical geodesics and perpendicular feet, memoised across sample draws
// and D levels.
class PerpsCache {
 public:
  explicit PerpsCache(const MetricGraph& g) : g_(g), n_(g.vertex_count()), paths_(n_ * n_), feet_(n_ * n_) {}

  const std::vector<Vertex>& path(Vertex u, Vertex v) {
    auto& slot = paths_[u * n_ + v];
    if (!slot) slot = geodesic(g_, u, v).vertices;
    return *slot;
  }

  // a with b nearest on [b,c]; d with c nearest on [b,c].
  const std::pair<std::vector<Vertex>, std::vector<Vertex>>& feet(Vertex b, Vertex c) {
    auto& slot = feet_[b * n_ + c];
    if (!slot) {
      const auto& bc = path(b, c);
      slot.emplace();
      for (Vertex v = 0; v < n_; ++v) {
        const Distance to_seg = distance_to_set_dense(g_, v, bc);
        if (to_seg == g_.distance(v, b)) slot->first.push_back(v);
        if (to_seg == g_.distance(v, c)) slot->second.push_back(v);
      }
    }
    return *slot;
  }

  Distance radius(Vertex a, Vertex b, Vertex c, Vertex d) {
    const auto& ad = path(a, d);
    Distance worst = 0;
    for (const auto& [u, v] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, d}}) {
      for (const Vertex x : path(u, v)) worst = std::max(worst, distance_to_set_dense(g_, x, ad));
    }
    return worst;
  }

 private:
  const MetricGraph& g_;
  std::size_t n_;
  std::vector<std::optional<std::vector<Vertex>>> paths_;
  std::vector<std::optional<std::pair<std::vector<Vertex>, std::vector<Vertex>>>> feet_;
};

}  // namespace

Distance perps_radius(const MetricGraph& g, Vertex a, Vertex b, Vertex c, Vertex d) {
  for (const Vertex v : {a, b, c, d}) g.check_vertex(v);
  const auto ad = geodesic(g, a, d).vertices;
  Distance worst = 0;
  for (const auto& [u, v] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, d}}) {
    for (const Vertex x : geodesic(g, u, v).vertices) worst = std::max(worst, distance_to_set_dense(g, x, ad));
  }
  return worst;
}

PerpsConstants calibrate_perps(const MetricGraph& g, HalfInt delta, const PerpsOptions& options) {
  const auto n = static_cast<Vertex>(g.vertex_count());
  if (n > kDenseDistanceLimit) fail(ErrorKind::GraphTooLarge, "perpendicular calibration needs the dense distance table");
  const Distance diam = g.diameter();
  PerpsCache cache(g);

  struct Level {
    Distance D;
    Distance C1 = 0;
    std::uint64_t quadruples = 0;
    bool sampled = false;
  };

  auto measure = [&](Distance D) {
    Level level{D};
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex b = 0; b < n; ++b) {
      for (Vertex c = 0; c < n; ++c) {
        if (b != c && g.distance(b, c) >= D) pairs.emplace_back(b, c);
      }
    }
    std::uint64_t total = 0;
    for (const auto& [b, c] : pairs) {
      const auto& [at_b, at_c] = cache.feet(b, c);
      total += static_cast<std::uint64_t>(at_b.size()) * at_c.size();
      if (total > options.exhaustive_limit) break;
    }
    if (total <= options.exhaustive_limit) {
      for (const auto& [b, c] : pairs) {
        const auto& [at_b, at_c] = cache.feet(b, c);
        for (const Vertex a : at_b) {
          for (const Vertex d : at_c) level.C1 = std::max(level.C1, cache.radius(a, b, c, d));
        }
      }
      level.quadruples = total;
      return level;
    }
    level.sampled = true;
    std::mt19937_64 rng(options.seed ^ (0x5bd1e995ull * (D + 1)));
    for (std::uint64_t i = 0; i < options.sample_count; ++i) {
      const auto& [b, c] = pairs[draw(rng, pairs.size())];
      const auto& [at_b, at_c] = cache.feet(b, c);
      const Vertex a = at_b[draw(rng, at_b.size())];
      const Vertex d = at_c[draw(rng, at_c.size())];
      level.C1 = std::max(level.C1, cache.radius(a, b, c, d));
      ++level.quadruples;
    }
    return level;
  };

  PerpsConstants result;
  result.delta_used = delta;
  if (diam < 2) {
    // Only D = 1 admits quadruples (or none at all).
    const Level only = measure(1);
    result.D = 1;
    result.C1 = only.C1;
    result.quadruples = only.quadruples;
    result.sampled = only.sampled;
    return result;
  }
  std::optional<Level> previous;
  for (Distance D = 1; D <= diam; D *= 2) {
    Level level = measure(D);
    if (previous && previous->quadruples > 0 && level.quadruples > 0 && previous->C1 == level.C1) {
      result.D = previous->D;
      result.C1 = previous->C1;
      result.quadruples = previous->quadruples;
      result.sampled = previous->sampled;
      return result;
    }
    previous = level;
  }
  fail(ErrorKind::CalibrationFailed, "perpendicular constant did not stabilise up to the diameter " + std::to_string(diam));
}

DivergenceProfile divergence_profile(const MetricGraph& g, Vertex x, Vertex y, Vertex z, Vertex w, Distance A0,
                                     Distance min_base) {
  for (const Vertex v : {x, y, z, w}) g.check_vertex(v);
  const HalfInt left = gromov_product(g, x, z, y);
  const HalfInt right = gromov_product(g, y, w, z);
  if (left > HalfInt::from_int(A0)) fail(ErrorKind::PreconditionViolated, "(x,z)_y = " + left.str() + " exceeds A0");
  if (right > HalfInt::from_int(A0)) fail(ErrorKind::PreconditionViolated, "(y,w)_z = " + right.str() + " exceeds A0");
  if (g.distance(y, z) < min_base) fail(ErrorKind::PreconditionViolated, "d(y,z) below the minimum base length");
  const auto base = geodesic(g, y, z).vertices;
  const auto to_base = distances_to_set(g, base);
  if (to_base[x] == 0 || to_base[w] == 0) fail(ErrorKind::PreconditionViolated, "x or w lies on the base geodesic");
  const Distance cap = std::min(to_base[x], to_base[w]) - 1;

  DivergenceProfile profile;
  const auto n = g.vertex_count();
  for (Distance D = 0; D <= cap; ++D) {
    std::vector<Distance> dist(n, kUnreachable);
    std::deque<Vertex> queue{x};
    dist[x] = 0;
    while (!queue.empty() && dist[w] == kUnreachable) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (const Vertex v : g.neighbors(u)) {
        if (to_base[v] > D && dist[v] == kUnreachable) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    DivergenceEntry entry{D, std::nullopt};
    if (dist[w] != kUnreachable) entry.length = dist[w];
    profile.entries.push_back(entry);
  }

  std::vector<std::pair<double, double>> points;
  for (const auto& e : profile.entries) {
    if (e.length) points.emplace_back(static_cast<double>(e.D), std::log(static_cast<double>(*e.length)));
  }
  if (points.size() >= 2) {
    double mx = 0;
    double my = 0;
    for (const auto& [px, py] : points) {
      mx += px;
      my += py;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0;
    double sxx = 0;
    for (const auto& [px, py] : points) {
      sxy += (px - mx) * (py - my);
      sxx += (px - mx) * (px - mx);
    }
    profile.log_slope = sxy / sxx;
  }
  profile.strictly_increasing = profile.entries.size() >= 2 && points.size() == profile.entries.size();
  for (std::size_t i = 1; profile.strictly_increasing && i < profile.entries.size(); ++i) {
    if (*profile.entries[i].length <= *profile.entries[i - 1].length) profile.strictly_increasing = false;
  }
  profile.pass = points.size() >= 2 && profile.log_slope > kDivergenceSlopeFloor;
  return profile;
}

}  // namespace ctmap
