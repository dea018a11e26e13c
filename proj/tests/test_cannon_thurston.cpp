#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ctmap/cannon_thurston.hpp"
#include "ctmap/errors.hpp"
#include "ctmap/group_examples.hpp"
#include "ctmap/spaces_io.hpp"

using namespace ctmap;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

std::vector<Vertex> identity_map(std::size_t n) {
  std::vector<Vertex> m(n);
  for (Vertex v = 0; v < n; ++v) m[v] = v;
  return m;
}

FamilyParams trivial_params() { return FamilyParams{HalfInt::from_int(0), Rational(1), Rational(0)}; }

TreeOfSpaces product(const MetricGraph& s, std::size_t tree_vertices) {
  std::vector<MetricGraph> spaces(tree_vertices, s);
  std::vector<EdgeSpace> edges;
  for (Vertex v = 0; v + 1 < tree_vertices; ++v)
    edges.push_back({v, v + 1, s, identity_map(s.vertex_count()), identity_map(s.vertex_count())});
  return TreeOfSpaces(0, spaces, edges, trivial_params());
}

std::string data(const std::string& name) { return std::string(CTMAP_DATA_DIR) + "/instances/" + name; }

std::vector<Distance> range(Distance lo, Distance hi) {
  std::vector<Distance> out;
  for (Distance n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

}  // namespace

TEST_CASE("properness: f(N) = N without shortcuts") {
  const auto ball = cayley_ball(GroupPresentationModel::free(2), 3);
  const Vertex x0 = *ball.find_label("1");
  for (std::size_t k : {1u, 3u}) {
    const auto tos = product(ball, k);
    const auto total = assemble_total_space(tos);
    const auto rows = properness_modulus(tos, total, x0, range(0, 6));
    CHECK(rows.size() == 4);  // N beyond the radius is never reached
    for (const auto& r : rows) CHECK(r.f == r.N);
    CHECK_FALSE(properness_at(tos, total, x0, 4).has_value());
  }
}

TEST_CASE("properness: shortcuts through the twisted edge") {
  const auto inst = load_instance(data("twisted3.json"));
  const auto total = assemble_total_space(inst.tos);
  const auto rows = properness_modulus(inst.tos, total, inst.basepoint, range(0, 12));
  REQUIRE(rows.size() >= 10);
  bool drop = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].f <= rows[i].N);
    if (i > 0) CHECK(rows[i].f >= rows[i - 1].f);
    drop = drop || rows[i].f < rows[i].N;
  }
  CHECK(drop);
  // unsorted and repeated requests give the same table
  const std::vector<Distance> shuffled{5, 1, 5, 0, 3};
  const auto again = properness_modulus(inst.tos, total, inst.basepoint, shuffled);
  REQUIRE(again.size() == 4);
  CHECK(again[0].N == 0);
  CHECK(again[3].N == 5);
  CHECK(again[3].f == rows[5].f);
}

TEST_CASE("families") {
  const auto inst = load_instance(data("single_tree.json"));
  const auto& g = inst.tos.vertex_space(0);
  const auto from_x0 = g.distances_from(inst.basepoint);
  const auto fam = tangent_family(inst.tos, inst.basepoint, range(0, 30), 4);
  REQUIRE_FALSE(fam.empty());
  Distance last = 0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& seg = fam[i];
    CHECK(seg.length() >= 4);
    CHECK(is_path(g, seg.vertices));
    CHECK(g.distance(seg.front(), seg.back()) == seg.length());
    Distance closest = kUnreachable;
    for (const Vertex v : seg.vertices) closest = std::min(closest, from_x0[v]);
    if (i > 0) CHECK(closest > last);
    last = closest;
  }
  CHECK(kind_of([&] { tangent_family(inst.tos, 10000, range(0, 2)); }) == ErrorKind::UnknownVertex);

  const std::vector<Distance> lengths{1, 3, 5, 200};
  const auto lf = length_family(inst.tos, lengths);
  REQUIRE(lf.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(lf[i].length() == lengths[i]);
  CHECK(lf[0].front() == 0);
}

TEST_CASE("M(N) = N in a single tree space") {
  const auto inst = load_instance(data("single_tree.json"));
  const auto total = assemble_total_space(inst.tos);
  const auto fam = tangent_family(inst.tos, inst.basepoint, range(0, 12), 4);
  const auto profile = mn_profile(inst.tos, total, inst.basepoint, fam);
  REQUIRE(profile.rows.size() == fam.size());
  for (const auto& r : profile.rows) {
    CHECK(r.M == r.N);
    CHECK(r.f == r.N);
    CHECK(r.lambda_digest.size() == 16);
  }
  const auto check = theorem_check(inst.tos, total, inst.basepoint, fam, 0, 1);
  CHECK(check.report.pass);
  CHECK(check.report.monotone);
  CHECK(check.A == Rational(0));
  CHECK(check.Cprime == 0);
}

TEST_CASE("lambda through the basepoint") {
  const auto ball = cayley_ball(GroupPresentationModel::free(2), 3);
  const auto tos = product(ball, 2);
  const auto total = assemble_total_space(tos);
  const Vertex x0 = *ball.find_label("1");
  const auto lambda = geodesic(ball, *ball.find_label("aaa"), *ball.find_label("BB"));
  REQUIRE(lambda.contains(x0));
  CHECK(lambda_M(tos, total, x0, lambda, GeodesicMode::Canonical) == 0);
  CHECK(lambda_M(tos, total, x0, lambda, GeodesicMode::Exhaustive) == 0);
  const std::vector<GeodesicSegment> fam{lambda};
  const auto profile = mn_profile(tos, total, x0, fam);
  REQUIRE(profile.rows.size() == 1);
  CHECK(profile.rows[0].N == 0);
  CHECK(profile.rows[0].M == 0);
  CHECK(profile.basepoint == total.lift(0, x0));
}

TEST_CASE("profile grouping keeps the least M per N") {
  const auto inst = load_instance(data("twisted3.json"));
  const auto total = assemble_total_space(inst.tos);
  const auto fam = length_family(inst.tos, range(2, 10));
  const auto profile = mn_profile(inst.tos, total, inst.basepoint, fam);
  CHECK(profile.raw_rows.size() == fam.size());
  for (std::size_t i = 1; i < profile.rows.size(); ++i) CHECK(profile.rows[i].N > profile.rows[i - 1].N);
  for (const auto& raw : profile.raw_rows) {
    const auto g = std::find_if(profile.rows.begin(), profile.rows.end(), [&](const CTRow& r) { return r.N == raw.N; });
    REQUIRE(g != profile.rows.end());
    CHECK(g->M <= raw.M);
  }
  // exhaustive M never exceeds canonical M
  const auto ex = mn_profile(inst.tos, total, inst.basepoint, fam, GeodesicMode::Exhaustive);
  for (std::size_t i = 0; i < fam.size(); ++i) CHECK(ex.raw_rows[i].M <= profile.raw_rows[i].M);
}

TEST_CASE("criterion_check: rows, trend, monotone, witness") {
  CTProfile profile;
  profile.basepoint = 7;
  profile.rows = {{1, 2, 1, ""}, {2, 4, 0, ""}, {3, 6, 3, ""}};
  const std::vector<PropernessModulusRow> f{{1, 2}, {2, 4}, {3, 6}};
  const auto ok = criterion_check(profile, f, Rational(1), 2, 7);
  CHECK(ok.rows_pass);
  CHECK(ok.trend_pass);
  CHECK_FALSE(ok.monotone);
  CHECK(ok.pass);
  CHECK_FALSE(ok.witness.has_value());

  // with A = 0 and C' = 0 every row needs M >= f; the first failure is reported
  const auto bad = criterion_check(profile, f, Rational(0), 0, 7);
  CHECK_FALSE(bad.rows_pass);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->N == 1);
  CHECK(bad.detail.find("M(1) = 1") != std::string::npos);

  CTProfile flat = profile;
  flat.rows = {{1, 0, 2, ""}, {2, 0, 2, ""}, {3, 0, 2, ""}};
  const std::vector<PropernessModulusRow> zero{{1, 0}, {2, 0}, {3, 0}};
  const auto fr = criterion_check(flat, zero, Rational(0), 0, 7);
  CHECK(fr.rows_pass);
  CHECK(fr.monotone);
  CHECK_FALSE(fr.trend_pass);
  CHECK_FALSE(fr.pass);

  CTProfile one = profile;
  one.rows = {{1, 2, 5, ""}};
  CHECK_FALSE(criterion_check(one, f, Rational(0), 0, 7).pass);

  CHECK(kind_of([&] { criterion_check(profile, f, Rational(0), 0, 8); }) == ErrorKind::InconsistentBasepoint);
  const std::vector<PropernessModulusRow> missing{{1, 2}};
  CHECK(kind_of([&] { criterion_check(profile, missing, Rational(0), 0, 7); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("profile errors") {
  const auto inst = load_instance(data("product3.json"));
  const auto total = assemble_total_space(inst.tos);
  const std::vector<GeodesicSegment> none;
  CHECK(kind_of([&] { mn_profile(inst.tos, total, inst.basepoint, none); }) == ErrorKind::EmptyFamily);
  const auto& other = inst.tos.vertex_space(1);
  const auto tiling = tiling_ball(7, 3, 2);
  const std::vector<GeodesicSegment> foreign{geodesic(tiling, 0, 3)};
  CHECK(kind_of([&] { mn_profile(inst.tos, total, inst.basepoint, foreign); }) == ErrorKind::SegmentGraphMismatch);
  CHECK(kind_of([&] { properness_at(inst.tos, total, static_cast<Vertex>(other.vertex_count() + 5), 1); }) ==
        ErrorKind::UnknownVertex);
}

TEST_CASE("theorem_check on the product instance") {
  const auto inst = load_instance(data("product3.json"));
  const auto total = assemble_total_space(inst.tos);
  const auto fam = tangent_family(inst.tos, inst.basepoint, range(0, 12), 4);
  const std::int64_t C = inst.ladder_C.value_or(2);
  const std::int64_t D = inst.ladder_D.value_or(3);
  const auto check = theorem_check(inst.tos, total, inst.basepoint, fam, C, D);
  CHECK(check.report.pass);
  for (const auto& r : check.f_table) CHECK(r.f == r.N);
  CHECK(check.report.detail.empty());
}
