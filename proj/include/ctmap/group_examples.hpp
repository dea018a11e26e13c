#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctmap/exact.hpp"
#include "ctmap/metric_graph.hpp"

namespace ctmap {

// Letter k > 0 is the k-th generator, -k its inverse. In strings generator k
// is the k-th lowercase letter and its inverse the uppercase one; the stable
// letter of a free-by-cyclic group is written t / T.
using Letter = int;
using Word = std::vector<Letter>;

Word free_reduce(std::span<const Letter> word);
Word inverse_word(std::span<const Letter> word);
// Reduced concatenation u * v.
Word free_product(std::span<const Letter> u, std::span<const Letter> v);
std::string word_to_string(std::span<const Letter> word);
// Accepts "1" or "" for the identity.
Word parse_word(std::string_view text, int rank);

// Automorphism of the free group of the given rank, by generator images.
class FreeAutomorphism {
 public:
  FreeAutomorphism() = default;
  FreeAutomorphism(int rank, std::vector<Word> images);
  static FreeAutomorphism identity(int rank);
  // "a->ab,b->a"
  static FreeAutomorphism parse(std::string_view text, int rank);

  int rank() const noexcept { return rank_; }
  const std::vector<Word>& images() const noexcept { return images_; }
  Word apply(std::span<const Letter> word) const;
  FreeAutomorphism compose(const FreeAutomorphism& inner) const;  // this o inner
  bool is_identity() const;
  std::string str() const;

  // Inverse found by enumerating reduced words up to max_length as candidate
  // preimages of each generator; nullopt if none is found.
  std::optional<FreeAutomorphism> inverse_by_search(int max_length = 10) const;

 private:
  int rank_ = 0;
  std::vector<Word> images_;
};

enum class ModelKind { Free, FreeByCyclic, SurfaceTiling };

// Group (or tessellation) with an exact normal form.
//   free:k                      free group of rank k
//   fbc:k:a->ab,b->a[;inv:...]  F_k x|_phi Z with t^-1 w t = phi(w)
//   tiling:p:q                  1-skeleton of the {p,q} tessellation
struct GroupPresentationModel {
  ModelKind kind = ModelKind::Free;
  int rank = 0;
  FreeAutomorphism phi;
  FreeAutomorphism phi_inverse;
  int p = 0;
  int q = 0;

  static GroupPresentationModel free(int rank);
  static GroupPresentationModel free_by_cyclic(FreeAutomorphism phi);
  static GroupPresentationModel surface_tiling(int p, int q);
  static GroupPresentationModel parse(std::string_view spec);
  std::string spec() const;
  // Generators with inverses, in breadth-first expansion order.
  std::vector<Letter> generator_letters() const;
  std::vector<std::string> generators() const;
  Letter stable_letter() const noexcept { return rank + 1; }
};

// Normal form t^k w, w freely reduced (k = 0 for free models).
struct GroupElement {
  std::int64_t t_exponent = 0;
  Word fiber;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

GroupElement identity_element();
GroupElement multiply_generator(const GroupPresentationModel& model, const GroupElement& g, Letter letter);
GroupElement multiply(const GroupPresentationModel& model, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupPresentationModel& model, const GroupElement& g);
GroupElement normal_form(const GroupPresentationModel& model, std::span<const Letter> word);
Word canonical_word(const GroupPresentationModel& model, const GroupElement& g);
std::string element_label(const GroupPresentationModel& model, const GroupElement& g);

struct BallEnumeration {
  std::vector<GroupElement> elements;  // breadth-first order
  std::vector<Distance> word_length;
};

BallEnumeration enumerate_ball(const GroupPresentationModel& model, Distance radius);

// Cayley ball with vertices labelled by canonical words. Tiling models
// delegate to tiling_ball.
MetricGraph cayley_ball(const GroupPresentationModel& model, Distance radius);

// Prefix-closed set of reduced words (a subtree of the Cayley tree of F_rank),
// labelled, numbered breadth-first in generator order.
MetricGraph free_subtree(int rank, std::span<const Word> words, Distance ball_radius = 0);
// Prefix closure of phi applied to the labels of a labelled free subtree.
MetricGraph free_image_subtree(const MetricGraph& source, const FreeAutomorphism& phi);

// Subgroup whose intrinsic word metric is known in closed form.
//   fiber        kernel of the t-exponent in a free-by-cyclic model (F_rank)
//   factor:ab    free factor on the listed generators of a free model
//   whole        the ambient group itself
struct SubgroupSpec {
  enum class Kind { Fiber, Factor, Whole } kind = Kind::Fiber;
  std::vector<Letter> factor_generators;
  static SubgroupSpec parse(std::string_view text);
  bool contains(const GroupElement& g) const;
};

struct DistortionRow {
  Distance radius = 0;
  Distance intrinsic_diameter = 0;
  Rational disto;
};

struct DistortionTable {
  std::vector<DistortionRow> rows;
};

DistortionTable distortion_profile(const GroupPresentationModel& model, const SubgroupSpec& subgroup,
                                   std::span<const Distance> radii);

struct Matrix2 {
  std::array<std::int64_t, 4> m{1, 0, 0, 1};  // row-major
  std::int64_t operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
  std::int64_t determinant() const;
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

// Which twist shape the first factor takes. OddLower: index 1 is the
// lower-triangular twist along b, even indices are upper-triangular.
enum class TwistParity { OddLower, OddUpper };

struct TwistSequence {
  std::vector<std::int64_t> a;
  Matrix2 product;
};

TwistSequence dehn_twist_product(std::span<const std::int64_t> a, TwistParity parity = TwistParity::OddLower);

struct TwistBoundsReport {
  std::int64_t lower = 0;  // product of a(i)
  std::int64_t proxy = 0;  // max |entry| of the twist product
  std::int64_t upper = 0;  // product of a(i) + 2
  std::int64_t determinant = 1;
  bool pass = false;
};

TwistBoundsReport twist_bounds_check(std::span<const std::int64_t> a);

// 1-skeleton of the {p,q} tessellation out to combinatorial radius R around a
// vertex, numbered breadth-first from that vertex (vertex 0).
MetricGraph tiling_ball(int p, int q, Distance radius);

}  // namespace ctmap
