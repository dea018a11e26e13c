#include "ctmap/cannon_thurston.hpp"

#include <algorithm>
#include <map>

#include "ctmap/digest.hpp"
#include "ctmap/errors.hpp"

namespace ctmap {

std::optional<Distance> properness_at(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0, Distance N) {
  const MetricGraph& root_space = tos.vertex_space(tos.root());
  root_space.check_vertex(x0);
  const auto dv = root_space.distances_from(x0);
  const auto dX = total.graph().distances_from(total.lift(tos.root(), x0));
  std::optional<Distance> f;
  for (Vertex y = 0; y < root_space.vertex_count(); ++y) {
    if (dv[y] < N) continue;
    const Distance d = dX[total.lift(tos.root(), y)];
    if (!f || d < *f) f = d;
  }
  return f;
}

std::vector<PropernessModulusRow> properness_modulus(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0,
                                                     std::span<const Distance> N_values) {
  std::vector<Distance> Ns(N_values.begin(), N_values.end());
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  std::vector<PropernessModulusRow> rows;
  for (const Distance N : Ns) {
    if (const auto f = properness_at(tos, total, x0, N)) rows.push_back({N, *f});
  }
  return rows;
}

std::vector<GeodesicSegment> tangent_family(const TreeOfSpaces& tos, Vertex x0, std::span<const Distance> N_values,
                                            Distance min_length) {
  const MetricGraph& g = tos.vertex_space(tos.root());
  g.check_vertex(x0);
  const auto from_x0 = g.distances_from(x0);
  const auto n = static_cast<Vertex>(g.vertex_count());
  std::vector<GeodesicSegment> family;
  for (const Distance N : N_values) {
    bool found = false;
    for (Vertex a = 0; a < n && !found; ++a) {
      if (from_x0[a] < N) continue;
      for (Vertex b = a + 1; b < n && !found; ++b) {
        if (from_x0[b] < N || g.distance(a, b) < min_length) continue;
        GeodesicSegment seg = geodesic(g, a, b);
        Distance closest = kUnreachable;
        for (const Vertex v : seg.vertices) closest = std::min(closest, from_x0[v]);
        if (closest == N) {
          family.push_back(std::move(seg));
          found = true;
        }
      }
    }
  }
  return family;
}

std::vector<GeodesicSegment> length_family(const TreeOfSpaces& tos, std::span<const Distance> lengths) {
  const MetricGraph& g = tos.vertex_space(tos.root());
  const auto n = static_cast<Vertex>(g.vertex_count());
  std::vector<GeodesicSegment> family;
  for (const Distance L : lengths) {
    bool found = false;
    for (Vertex a = 0; a < n && !found; ++a) {
      const auto da = g.distances_from(a);
      for (Vertex b = a + 1; b < n; ++b) {
        if (da[b] == L) {
          family.push_back(geodesic(g, a, b));
          found = true;
          break;
        }
      }
    }
  }
  return family;
}

Distance lambda_M(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0, const GeodesicSegment& lambda,
                  GeodesicMode mode) {
  const MetricGraph& X = total.graph();
  const Vertex v0 = tos.root();
  const Vertex a = total.lift(v0, lambda.front());
  const Vertex b = total.lift(v0, lambda.back());
  const auto from_base = X.distances_from(total.lift(v0, x0));
  const std::vector<Vertex> path = mode == GeodesicMode::Canonical ? geodesic(X, a, b).vertices : geodesic_interval(X, a, b);
  Distance M = kUnreachable;
  for (const Vertex v : path) M = std::min(M, from_base[v]);
  return M;
}

CTProfile mn_profile(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0,
                     std::span<const GeodesicSegment> family, GeodesicMode mode) {
  if (family.empty()) fail(ErrorKind::EmptyFamily, "lambda family is empty");
  const MetricGraph& root_space = tos.vertex_space(tos.root());
  root_space.check_vertex(x0);
  const auto from_x0 = root_space.distances_from(x0);
  CTProfile profile;
  profile.basepoint = total.lift(tos.root(), x0);
  profile.mode = mode;
  std::map<Distance, CTRow> grouped;
  for (const auto& lambda : family) {
    if (lambda.graph_id != root_space.id()) fail(ErrorKind::SegmentGraphMismatch, "lambda is not in the root space");
    CTRow row;
    row.N = kUnreachable;
    for (const Vertex v : lambda.vertices) row.N = std::min(row.N, from_x0[v]);
    row.f = properness_at(tos, total, x0, row.N).value_or(0);
    row.M = lambda_M(tos, total, x0, lambda, mode);
    row.lambda_digest = digest_vertices(lambda.vertices);
    profile.raw_rows.push_back(row);
    auto [it, inserted] = grouped.emplace(row.N, row);
    if (!inserted && row.M < it->second.M) it->second = row;
  }
  for (auto& [N, row] : grouped) profile.rows.push_back(row);
  return profile;
}

CriterionReport criterion_check(const CTProfile& profile, std::span<const PropernessModulusRow> f_table,
                                const Rational& A, Distance Cprime, Vertex basepoint) {
  if (profile.basepoint != basepoint) {
    fail(ErrorKind::InconsistentBasepoint, "profile basepoint " + std::to_string(profile.basepoint) +
                                               " differs from " + std::to_string(basepoint));
  }
  CriterionReport report;
  const Rational denom = A + Rational(1);
  for (const CTRow& row : profile.rows) {
    const auto hit = std::find_if(f_table.begin(), f_table.end(), [&](const auto& r) { return r.N == row.N; });
    if (hit == f_table.end()) fail(ErrorKind::InvalidArgument, "no f(N) for N = " + std::to_string(row.N));
    const Rational bound = Rational(hit->f) / denom - Rational(Cprime);
    if (Rational(row.M) < bound && report.rows_pass) {
      report.rows_pass = false;
      report.witness = row;
      report.detail = "M(" + std::to_string(row.N) + ") = " + std::to_string(row.M) + " < " + bound.str();
    }
  }
  for (std::size_t i = 1; i < profile.rows.size(); ++i) {
    if (profile.rows[i].M < profile.rows[i - 1].M) report.monotone = false;
  }
  if (profile.rows.size() >= 2) {
    const std::size_t k = std::max<std::size_t>(1, profile.rows.size() / 3);
    Distance first = kUnreachable;
    Distance last = kUnreachable;
    for (std::size_t i = 0; i < k; ++i) {
      first = std::min(first, profile.rows[i].M);
      last = std::min(last, profile.rows[profile.rows.size() - 1 - i].M);
    }
    report.trend_pass = last > first;
    if (!report.trend_pass && report.detail.empty()) report.detail = "M does not grow from the first to the last third";
  } else if (report.detail.empty()) {
    report.detail = "trend needs at least two rows";
  }
  report.pass = report.rows_pass && report.trend_pass;
  return report;
}

TheoremCheck theorem_check(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0,
                           std::span<const GeodesicSegment> family, std::int64_t C, std::int64_t D,
                           GeodesicMode mode) {
  TheoremCheck check;
  check.profile = mn_profile(tos, total, x0, family, mode);
  for (const auto& lambda : family) {
    const Ladder ladder = build_ladder(tos, total, lambda, C, D);
    check.A = std::max(check.A, audit_vertical_bound(tos, total, ladder).vertical_A);
    check.Cprime = std::max(check.Cprime, audit_quasiconvexity(tos, total, ladder, mode));
  }
  std::vector<Distance> Ns;
  for (const auto& row : check.profile.rows) Ns.push_back(row.N);
  check.f_table = properness_modulus(tos, total, x0, Ns);
  check.report = criterion_check(check.profile, check.f_table, check.A, check.Cprime, check.profile.basepoint);
  return check;
}

}  // namespace ctmap
