#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctmap/exact.hpp"
#include "ctmap/hyperbolic_ops.hpp"
#include "ctmap/ladder.hpp"
#include "ctmap/tree_of_spaces.hpp"

namespace ctmap {

struct PropernessModulusRow {
  Distance N = 0;
  Distance f = 0;
};

// f(N) for each N that some root-space vertex reaches; larger N are omitted.
std::vector<PropernessModulusRow> properness_modulus(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0,
                                                     std::span<const Distance> N_values);
std::optional<Distance> properness_at(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0, Distance N);

// Geodesics of X_{v0} whose closest approach to x0 is exactly N, one per N:
// the canonical geodesic of the lexicographically first pair (a < b) with
// d(a, b) >= min_length. N values with no such pair are skipped.
std::vector<GeodesicSegment> tangent_family(const TreeOfSpaces& tos, Vertex x0, std::span<const Distance> N_values,
                                            Distance min_length = 1);
// Canonical geodesic of the lexicographically first pair at distance L, per L.
std::vector<GeodesicSegment> length_family(const TreeOfSpaces& tos, std::span<const Distance> lengths);

struct CTRow {
  Distance N = 0;
  Distance f = 0;
  Distance M = 0;
  std::string lambda_digest;
};

struct CTProfile {
  Vertex basepoint = 0;  // X vertex i_{v0}(x0)
  GeodesicMode mode = GeodesicMode::Canonical;
  std::vector<CTRow> rows;      // grouped by N, minimum M kept
  std::vector<CTRow> raw_rows;  // one per lambda, family order
};

// M for one lambda: least X-distance from i(x0) to a geodesic joining the
// lifted endpoints (canonical geodesic, or every geodesic in exhaustive mode).
Distance lambda_M(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0, const GeodesicSegment& lambda,
                  GeodesicMode mode);

CTProfile mn_profile(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0,
                     std::span<const GeodesicSegment> family, GeodesicMode mode = GeodesicMode::Canonical);

struct CriterionReport {
  bool rows_pass = true;
  bool trend_pass = false;
  bool monotone = true;  // grouped M nondecreasing
  bool pass = false;
  std::optional<CTRow> witness;  // first failing row
  std::string detail;
};

CriterionReport criterion_check(const CTProfile& profile, std::span<const PropernessModulusRow> f_table,
                                const Rational& A, Distance Cprime, Vertex basepoint);

// Full lower-bound check over a lambda family: one ladder per lambda, A and
// C' taken as maxima over the family (C' in the same mode as M).
struct TheoremCheck {
  CTProfile profile;
  std::vector<PropernessModulusRow> f_table;
  Rational A{0};
  Distance Cprime = 0;
  CriterionReport report;
};

TheoremCheck theorem_check(const TreeOfSpaces& tos, const TotalSpace& total, Vertex x0,
                           std::span<const GeodesicSegment> family, std::int64_t C, std::int64_t D,
                           GeodesicMode mode = GeodesicMode::Canonical);

}  // namespace ctmap
