#include "ctmap/group_examples.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "ctmap/errors.hpp"

namespace ctmap {

namespace {

constexpr int kMaxRank = 19;  // letters a..s; t is the stable letter

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(g.t_exponent);
    for (const Letter l : g.fiber) {
      h ^= static_cast<std::uint64_t>(l + 64) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int(const std::string& text, const char* what) {
  char* end = nullptr;
  const long value = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0') fail(ErrorKind::ParseError, std::string("expected integer for ") + what + ": '" + text + "'");
  return static_cast<int>(value);
}

std::size_t common_prefix(const Word& u, const Word& v) {
  std::size_t k = 0;
  while (k < u.size() && k < v.size() && u[k] == v[k]) ++k;
  return k;
}

Distance tree_word_distance(const Word& u, const Word& v) {
  const std::size_t k = common_prefix(u, v);
  return static_cast<Distance>(u.size() + v.size() - 2 * k);
}

Word apply_power(const GroupPresentationModel& model, Word w, std::int64_t power) {
  const FreeAutomorphism& step = power >= 0 ? model.phi : model.phi_inverse;
  for (std::int64_t i = 0; i < (power >= 0 ? power : -power); ++i) w = step.apply(w);
  return w;
}

bool checked_mul(std::int64_t a, std::int64_t b, std::int64_t& out) { return !__builtin_mul_overflow(a, b, &out); }
bool checked_add(std::int64_t a, std::int64_t b, std::int64_t& out) { return !__builtin_add_overflow(a, b, &out); }

}  // namespace

Word free_reduce(std::span<const Letter> word) {
  Word out;
  out.reserve(word.size());
  for (const Letter l : word) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word inverse_word(std::span<const Letter> word) {
  Word out(word.rbegin(), word.rend());
  for (auto& l : out) l = -l;
  return out;
}

Word free_product(std::span<const Letter> u, std::span<const Letter> v) {
  Word out(u.begin(), u.end());
  for (const Letter l : v) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

std::string word_to_string(std::span<const Letter> word) {
  if (word.empty()) return "1";
  std::string out;
  for (const Letter l : word) {
    const int k = std::abs(l) - 1;
    out += static_cast<char>((l > 0 ? 'a' : 'A') + k);
  }
  return out;
}

Word parse_word(std::string_view text, int rank) {
  Word out;
  if (text == "1") return out;
  for (const char c : text) {
    Letter l = 0;
    if (c >= 'a' && c <= 'z') {
      l = c - 'a' + 1;
    } else if (c >= 'A' && c <= 'Z') {
      l = -(c - 'A' + 1);
    } else {
      fail(ErrorKind::ParseError, std::string("invalid letter '") + c + "' in word '" + std::string(text) + "'");
    }
    if (std::abs(l) > rank) {
      fail(ErrorKind::ParseError, std::string("letter '") + c + "' outside rank " + std::to_string(rank));
    }
    out.push_back(l);
  }
  return free_reduce(out);
}

FreeAutomorphism::FreeAutomorphism(int rank, std::vector<Word> images) : rank_(rank), images_(std::move(images)) {
  if (rank_ < 1 || rank_ > kMaxRank) fail(ErrorKind::InvalidArgument, "free rank must be in [1, 19]");
  if (static_cast<int>(images_.size()) != rank_) fail(ErrorKind::InvalidArgument, "automorphism needs one image per generator");
  for (auto& img : images_) {
    img = free_reduce(img);
    if (img.empty()) fail(ErrorKind::InvalidArgument, "automorphism maps a generator to the identity");
  }
}

FreeAutomorphism FreeAutomorphism::identity(int rank) {
  std::vector<Word> images;
  for (int i = 1; i <= rank; ++i) images.push_back({i});
  return FreeAutomorphism(rank, std::move(images));
}

FreeAutomorphism FreeAutomorphism::parse(std::string_view text, int rank) {
  std::vector<Word> images;
  for (int i = 1; i <= rank; ++i) images.push_back({i});
  for (const auto& clause : split(text, ',')) {
    const auto arrow = clause.find("->");
    if (arrow == std::string::npos || arrow != 1) fail(ErrorKind::ParseError, "automorphism clause '" + clause + "' is not x->word");
    const Word source = parse_word(clause.substr(0, 1), rank);
    if (source.size() != 1 || source[0] < 0) fail(ErrorKind::ParseError, "automorphism source must be a generator: '" + clause + "'");
    images[static_cast<std::size_t>(source[0] - 1)] = parse_word(clause.substr(3), rank);
  }
  return FreeAutomorphism(rank, std::move(images));
}

Word FreeAutomorphism::apply(std::span<const Letter> word) const {
  Word out;
  for (const Letter l : word) {
    const Word& img = images_[static_cast<std::size_t>(std::abs(l) - 1)];
    if (l > 0) {
      out = free_product(out, img);
    } else {
      out = free_product(out, inverse_word(img));
    }
  }
  return out;
}

FreeAutomorphism FreeAutomorphism::compose(const FreeAutomorphism& inner) const {
  std::vector<Word> images;
  for (const auto& img : inner.images_) images.push_back(apply(img));
  return FreeAutomorphism(rank_, std::move(images));
}

bool FreeAutomorphism::is_identity() const {
  for (int i = 0; i < rank_; ++i) {
    if (images_[static_cast<std::size_t>(i)] != Word{i + 1}) return false;
  }
  return true;
}

std::string FreeAutomorphism::str() const {
  std::string out;
  for (int i = 0; i < rank_; ++i) {
    if (i) out += ',';
    out += static_cast<char>('a' + i);
    out += "->";
    out += word_to_string(images_[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::optional<FreeAutomorphism> FreeAutomorphism::inverse_by_search(int max_length) const {
  std::vector<std::optional<Word>> preimage(static_cast<std::size_t>(rank_));
  int found = 0;
  std::vector<Word> frontier{Word{}};
  constexpr std::size_t kWordBudget = 400000;
  std::size_t visited = 0;
  for (int len = 1; len <= max_length && found < rank_ && visited < kWordBudget; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (int g = 1; g <= rank_; ++g) {
        for (const Letter l : {g, -g}) {
          if (!w.empty() && w.back() == -l) continue;
          Word ext = w;
          ext.push_back(l);
          const Word img = apply(ext);
          if (img.size() == 1) {
            const auto idx = static_cast<std::size_t>(std::abs(img[0]) - 1);
            if (!preimage[idx]) {
              preimage[idx] = img[0] > 0 ? ext : inverse_word(ext);
              ++found;
            }
          }
          next.push_back(std::move(ext));
        }
      }
    }
    visited += next.size();
    frontier = std::move(next);
  }
  if (found < rank_) return std::nullopt;
  std::vector<Word> images;
  for (auto& p : preimage) images.push_back(*p);
  FreeAutomorphism candidate(rank_, std::move(images));
  if (!compose(candidate).is_identity() || !candidate.compose(*this).is_identity()) return std::nullopt;
  return candidate;
}

GroupPresentationModel GroupPresentationModel::free(int rank) {
  GroupPresentationModel m;
  m.kind = ModelKind::Free;
  m.rank = rank;
  m.phi = FreeAutomorphism::identity(rank);
  m.phi_inverse = m.phi;
  return m;
}

GroupPresentationModel GroupPresentationModel::free_by_cyclic(FreeAutomorphism phi) {
  GroupPresentationModel m;
  m.kind = ModelKind::FreeByCyclic;
  m.rank = phi.rank();
  auto inv = phi.inverse_by_search();
  if (!inv) fail(ErrorKind::NormalFormFailure, "could not invert automorphism " + phi.str() + "; supply ';inv:...'");
  m.phi = std::move(phi);
  m.phi_inverse = std::move(*inv);
  return m;
}

GroupPresentationModel GroupPresentationModel::surface_tiling(int p, int q) {
  if (p < 3 || q < 3 || (p - 2) * (q - 2) <= 4) {
    fail(ErrorKind::NotHyperbolicTiling, "{" + std::to_string(p) + "," + std::to_string(q) + "} is not a hyperbolic tiling");
  }
  GroupPresentationModel m;
  m.kind = ModelKind::SurfaceTiling;
  m.p = p;
  m.q = q;
  return m;
}

GroupPresentationModel GroupPresentationModel::parse(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) fail(ErrorKind::ParseError, "empty model spec");
  if (parts[0] == "free" && parts.size() == 2) {
    const int rank = parse_int(parts[1], "free rank");
    if (rank < 1 || rank > kMaxRank) fail(ErrorKind::ParseError, "free rank must be in [1, 19]");
    return free(rank);
  }
  if (parts[0] == "tiling" && parts.size() == 3) {
    return surface_tiling(parse_int(parts[1], "tiling p"), parse_int(parts[2], "tiling q"));
  }
  if (parts[0] == "fbc" && parts.size() >= 3) {
    const int rank = parse_int(parts[1], "fbc rank");
    if (rank < 1 || rank > kMaxRank) fail(ErrorKind::ParseError, "fbc rank must be in [1, 19]");
    // Rejoin: the automorphism text itself may not contain ':' except in ";inv:".
    std::string rest(spec.substr(parts[0].size() + parts[1].size() + 2));
    std::string inv_text;
    if (const auto pos = rest.find(";inv:"); pos != std::string::npos) {
      inv_text = rest.substr(pos + 5);
      rest = rest.substr(0, pos);
    }
    auto phi = FreeAutomorphism::parse(rest, rank);
    if (inv_text.empty()) return free_by_cyclic(std::move(phi));
    auto inv = FreeAutomorphism::parse(inv_text, rank);
    if (!phi.compose(inv).is_identity() || !inv.compose(phi).is_identity()) {
      fail(ErrorKind::NormalFormFailure, "supplied inverse does not invert " + phi.str());
    }
    GroupPresentationModel m;
    m.kind = ModelKind::FreeByCyclic;
    m.rank = rank;
    m.phi = std::move(phi);
    m.phi_inverse = std::move(inv);
    return m;
  }
  fail(ErrorKind::ParseError, "unrecognised model spec '" + std::string(spec) + "'");
}

std::string GroupPresentationModel::spec() const {
  switch (kind) {
    case ModelKind::Free: return "free:" + std::to_string(rank);
    case ModelKind::FreeByCyclic: return "fbc:" + std::to_string(rank) + ":" + phi.str();
    case ModelKind::SurfaceTiling: return "tiling:" + std::to_string(p) + ":" + std::to_string(q);
  }
  return {};
}

std::vector<Letter> GroupPresentationModel::generator_letters() const {
  std::vector<Letter> out;
  for (int i = 1; i <= rank; ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  if (kind == ModelKind::FreeByCyclic) {
    out.push_back(stable_letter());
    out.push_back(-stable_letter());
  }
  return out;
}

std::vector<std::string> GroupPresentationModel::generators() const {
  std::vector<std::string> out;
  for (int i = 0; i < rank; ++i) out.emplace_back(1, static_cast<char>('a' + i));
  if (kind == ModelKind::FreeByCyclic) out.emplace_back("t");
  return out;
}

GroupElement identity_element() { return {}; }

GroupElement multiply_generator(const GroupPresentationModel& model, const GroupElement& g, Letter letter) {
  GroupElement out = g;
  if (model.kind == ModelKind::FreeByCyclic && std::abs(letter) == model.stable_letter()) {
    // t^k w t = t^(k+1) phi(w);  t^k w t^-1 = t^(k-1) phi^-1(w)
    if (letter > 0) {
      out.t_exponent += 1;
      out.fiber = model.phi.apply(g.fiber);
    } else {
      out.t_exponent -= 1;
      out.fiber = model.phi_inverse.apply(g.fiber);
    }
    return out;
  }
  if (std::abs(letter) > model.rank || letter == 0) {
    fail(ErrorKind::InvalidArgument, "letter outside the model's generators");
  }
  const Letter one[1] = {letter};
  out.fiber = free_product(g.fiber, one);
  return out;
}

GroupElement multiply(const GroupPresentationModel& model, const GroupElement& g, const GroupElement& h) {
  // t^k w . t^m v = t^(k+m) phi^m(w) v
  GroupElement out;
  out.t_exponent = g.t_exponent + h.t_exponent;
  out.fiber = free_product(apply_power(model, g.fiber, h.t_exponent), h.fiber);
  return out;
}

GroupElement inverse(const GroupPresentationModel& model, const GroupElement& g) {
  GroupElement out;
  out.t_exponent = -g.t_exponent;
  out.fiber = apply_power(model, inverse_word(g.fiber), -g.t_exponent);
  return out;
}

GroupElement normal_form(const GroupPresentationModel& model, std::span<const Letter> word) {
  GroupElement g;
  for (const Letter l : word) g = multiply_generator(model, g, l);
  return g;
}

Word canonical_word(const GroupPresentationModel& model, const GroupElement& g) {
  Word out;
  const Letter t = g.t_exponent >= 0 ? model.stable_letter() : -model.stable_letter();
  for (std::int64_t i = 0; i < std::abs(g.t_exponent); ++i) out.push_back(t);
  out.insert(out.end(), g.fiber.begin(), g.fiber.end());
  return out;
}

std::string element_label(const GroupPresentationModel& /*model*/, const GroupElement& g) {
  std::string out(static_cast<std::size_t>(std::abs(g.t_exponent)), g.t_exponent >= 0 ? 't' : 'T');
  if (g.fiber.empty()) return out.empty() ? "1" : out;
  return out + word_to_string(g.fiber);
}

BallEnumeration enumerate_ball(const GroupPresentationModel& model, Distance radius) {
  if (model.kind == ModelKind::SurfaceTiling) {
    fail(ErrorKind::InvalidArgument, "tiling models have no group normal form; use tiling_ball");
  }
  BallEnumeration ball;
  std::unordered_map<GroupElement, Vertex, ElementHash> index;
  ball.elements.push_back(identity_element());
  ball.word_length.push_back(0);
  index.emplace(identity_element(), 0);
  const auto letters = model.generator_letters();
  for (std::size_t head = 0; head < ball.elements.size(); ++head) {
    if (ball.word_length[head] == radius) continue;
    for (const Letter l : letters) {
      GroupElement next = multiply_generator(model, ball.elements[head], l);
      if (index.contains(next)) continue;
      if (normal_form(model, canonical_word(model, next)) != next) {
        fail(ErrorKind::NormalFormFailure, "normal form not idempotent at " + element_label(model, next));
      }
      index.emplace(next, static_cast<Vertex>(ball.elements.size()));
      ball.elements.push_back(std::move(next));
      ball.word_length.push_back(ball.word_length[head] + 1);
    }
  }
  return ball;
}

MetricGraph cayley_ball(const GroupPresentationModel& model, Distance radius) {
  if (model.kind == ModelKind::SurfaceTiling) return tiling_ball(model.p, model.q, radius);
  const BallEnumeration ball = enumerate_ball(model, radius);
  std::unordered_map<GroupElement, Vertex, ElementHash> index;
  for (std::size_t i = 0; i < ball.elements.size(); ++i) index.emplace(ball.elements[i], static_cast<Vertex>(i));
  std::vector<Edge> edges;
  const auto letters = model.generator_letters();
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    for (const Letter l : letters) {
      const auto it = index.find(multiply_generator(model, ball.elements[i], l));
      if (it != index.end() && it->second > i) edges.emplace_back(static_cast<Vertex>(i), it->second);
    }
  }
  std::vector<std::string> labels;
  labels.reserve(ball.elements.size());
  for (const auto& g : ball.elements) labels.push_back(element_label(model, g));
  return MetricGraph::from_edges(edges, ball.elements.size(), std::move(labels));
}

MetricGraph free_subtree(int rank, std::span<const Word> words, Distance ball_radius) {
  if (rank < 1 || rank > kMaxRank) fail(ErrorKind::InvalidArgument, "free rank must be in [1, 19]");
  std::map<Word, bool> members;  // prefix-closed set
  members[Word{}] = true;
  auto add_prefixes = [&](const Word& w) {
    Word prefix;
    for (const Letter l : w) {
      prefix.push_back(l);
      members[prefix] = true;
    }
  };
  for (const auto& w : words) {
    for (const Letter l : w) {
      if (l == 0 || std::abs(l) > rank) fail(ErrorKind::InvalidArgument, "word letter outside rank");
    }
    add_prefixes(free_reduce(w));
  }
  if (ball_radius > 0) {
    const auto ballgraph = enumerate_ball(GroupPresentationModel::free(rank), ball_radius);
    for (const auto& g : ballgraph.elements) add_prefixes(g.fiber);
  }
  // Breadth-first from the identity in generator order a, A, b, B, ...
  std::vector<Word> order{Word{}};
  std::map<Word, Vertex> index{{Word{}, 0}};
  std::vector<Edge> edges;
  std::vector<Letter> letters;
  for (int i = 1; i <= rank; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const Letter l : letters) {
      if (!order[head].empty() && order[head].back() == -l) continue;
      Word ext = order[head];
      ext.push_back(l);
      if (!members.contains(ext)) continue;
      const auto id = static_cast<Vertex>(order.size());
      index.emplace(ext, id);
      edges.emplace_back(static_cast<Vertex>(head), id);
      order.push_back(std::move(ext));
    }
  }
  std::vector<std::string> labels;
  for (const auto& w : order) labels.push_back(word_to_string(w));
  return MetricGraph::from_edges(edges, order.size(), std::move(labels));
}

MetricGraph free_image_subtree(const MetricGraph& source, const FreeAutomorphism& phi) {
  if (!source.has_labels()) fail(ErrorKind::InvalidArgument, "image subtree needs a labelled free-group space");
  std::vector<Word> images;
  for (Vertex v = 0; v < source.vertex_count(); ++v) images.push_back(phi.apply(parse_word(source.label(v), phi.rank())));
  return free_subtree(phi.rank(), images);
}

SubgroupSpec SubgroupSpec::parse(std::string_view text) {
  SubgroupSpec s;
  if (text == "fiber") {
    s.kind = Kind::Fiber;
  } else if (text == "whole") {
    s.kind = Kind::Whole;
  } else if (text.starts_with("factor:")) {
    s.kind = Kind::Factor;
    for (const Letter l : parse_word(text.substr(7), kMaxRank)) {
      if (l < 0) fail(ErrorKind::ParseError, "factor generators must be positive letters");
      s.factor_generators.push_back(l);
    }
    if (s.factor_generators.empty()) fail(ErrorKind::ParseError, "factor needs at least one generator");
  } else {
    fail(ErrorKind::ParseError, "unrecognised subgroup '" + std::string(text) + "'");
  }
  return s;
}

bool SubgroupSpec::contains(const GroupElement& g) const {
  switch (kind) {
    case Kind::Whole: return true;
    case Kind::Fiber: return g.t_exponent == 0;
    case Kind::Factor:
      if (g.t_exponent != 0) return false;
      return std::all_of(g.fiber.begin(), g.fiber.end(), [&](Letter l) {
        return std::find(factor_generators.begin(), factor_generators.end(), std::abs(l)) != factor_generators.end();
      });
  }
  return false;
}

DistortionTable distortion_profile(const GroupPresentationModel& model, const SubgroupSpec& subgroup,
                                   std::span<const Distance> radii) {
  if (model.kind == ModelKind::SurfaceTiling) fail(ErrorKind::InvalidArgument, "distortion needs a group model");
  if (subgroup.kind == SubgroupSpec::Kind::Fiber && model.kind != ModelKind::FreeByCyclic) {
    fail(ErrorKind::InvalidArgument, "fiber subgroup needs a free-by-cyclic model");
  }
  if (subgroup.kind == SubgroupSpec::Kind::Factor) {
    for (const Letter l : subgroup.factor_generators) {
      if (l > model.rank) fail(ErrorKind::InvalidArgument, "factor generator outside model rank");
    }
  }
  std::vector<Distance> sorted(radii.begin(), radii.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) return {};
  if (sorted.front() == 0) fail(ErrorKind::InvalidArgument, "distortion radius must be positive");

  const bool tree_metric = subgroup.kind != SubgroupSpec::Kind::Whole || model.kind == ModelKind::Free;
  const BallEnumeration ambient = enumerate_ball(model, sorted.back());

  // Ambient lookup for the whole-group metric on free-by-cyclic models, built
  // only when the exponent bounds below do not pin the diameter.
  std::unordered_map<GroupElement, Distance, ElementHash> lengths;

  DistortionTable table;
  for (const Distance R : sorted) {
    std::vector<const GroupElement*> members;
    for (std::size_t i = 0; i < ambient.elements.size() && ambient.word_length[i] <= R; ++i) {
      if (subgroup.contains(ambient.elements[i])) members.push_back(&ambient.elements[i]);
    }
    if (members.empty()) fail(ErrorKind::SubgroupBallEmpty, "no subgroup elements within radius " + std::to_string(R));
    Distance diam = 0;
    if (tree_metric) {
      // Double sweep is exact for tree metrics.
      auto farthest = [&](const Word& from) {
        const Word* best = &members.front()->fiber;
        Distance best_d = 0;
        for (const auto* m : members) {
          const Distance d = tree_word_distance(from, m->fiber);
          if (d > best_d) {
            best_d = d;
            best = &m->fiber;
          }
        }
        return std::pair{best, best_d};
      };
      const auto [s1, d0] = farthest(members.front()->fiber);
      (void)d0;
      diam = farthest(*s1).second;
    } else {
      // t-exponent is 1-Lipschitz to Z, so its spread bounds the diameter
      // below; |u| + |v| bounds it above.
      std::int64_t kmin = 0;
      std::int64_t kmax = 0;
      Distance longest = 0;
      Distance second = 0;
      for (std::size_t i = 0; i < ambient.elements.size() && ambient.word_length[i] <= R; ++i) {
        kmin = std::min(kmin, ambient.elements[i].t_exponent);
        kmax = std::max(kmax, ambient.elements[i].t_exponent);
        const Distance len = ambient.word_length[i];
        if (len > longest) {
          second = longest;
          longest = len;
        } else if (len > second) {
          second = len;
        }
      }
      if (kmax - kmin == static_cast<std::int64_t>(longest) + second) {
        table.rows.push_back(DistortionRow{R, longest + second, Rational(longest + second, R)});
        continue;
      }
      if (lengths.empty()) {
        const BallEnumeration doubled = enumerate_ball(model, 2 * sorted.back());
        for (std::size_t i = 0; i < doubled.elements.size(); ++i) {
          lengths.emplace(doubled.elements[i], doubled.word_length[i]);
        }
      }
      for (const auto* u : members) {
        const GroupElement uinv = inverse(model, *u);
        for (const auto* v : members) diam = std::max(diam, lengths.at(multiply(model, uinv, *v)));
      }
    }
    table.rows.push_back(DistortionRow{R, diam, Rational(diam, R)});
  }
  return table;
}

std::int64_t Matrix2::determinant() const {
  std::int64_t ad = 0;
  std::int64_t bc = 0;
  std::int64_t det = 0;
  if (!checked_mul(m[0], m[3], ad) || !checked_mul(m[1], m[2], bc) || __builtin_sub_overflow(ad, bc, &det)) {
    fail(ErrorKind::EntryOverflow, "determinant overflowed 64 bits; use a big-integer build");
  }
  return det;
}

TwistSequence dehn_twist_product(std::span<const std::int64_t> a, TwistParity parity) {
  TwistSequence seq;
  seq.a.assign(a.begin(), a.end());
  Matrix2 acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 2) fail(ErrorKind::InvalidCoefficient, "twist coefficient a(" + std::to_string(i + 1) + ") = " + std::to_string(a[i]) + " < 2");
    const bool odd_index = (i % 2 == 0);  // 1-based index i + 1
    const bool lower = (parity == TwistParity::OddLower) == odd_index;
    const Matrix2 factor = lower ? Matrix2{{1, 0, a[i], 1}} : Matrix2{{1, a[i], 0, 1}};
    Matrix2 next;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        std::int64_t x = 0;
        std::int64_t y = 0;
        std::int64_t s = 0;
        if (!checked_mul(acc(r, 0), factor(0, c), x) || !checked_mul(acc(r, 1), factor(1, c), y) || !checked_add(x, y, s)) {
          fail(ErrorKind::EntryOverflow, "twist product entry overflowed 64 bits; use a big-integer build");
        }
        next.m[static_cast<std::size_t>(2 * r + c)] = s;
      }
    }
    acc = next;
  }
  seq.product = acc;
  return seq;
}

TwistBoundsReport twist_bounds_check(std::span<const std::int64_t> a) {
  const TwistSequence seq = dehn_twist_product(a);
  TwistBoundsReport report;
  report.lower = 1;
  report.upper = 1;
  for (const std::int64_t x : a) {
    if (!checked_mul(report.lower, x, report.lower) || !checked_mul(report.upper, x + 2, report.upper)) {
      fail(ErrorKind::EntryOverflow, "twist bound product overflowed 64 bits");
    }
  }
  for (const std::int64_t e : seq.product.m) report.proxy = std::max(report.proxy, e < 0 ? -e : e);
  report.determinant = seq.product.determinant();
  report.pass = report.lower <= report.proxy && report.proxy <= report.upper;
  return report;
}

}  // namespace ctmap
