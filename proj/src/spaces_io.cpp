#include "ctmap/spaces_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ctmap/digest.hpp"
#include "ctmap/errors.hpp"

namespace ctmap {

namespace {

using nlohmann::json;

struct BuiltSpace {
  MetricGraph graph = MetricGraph::single_vertex();
  std::optional<int> rank;  // free-group spaces, for automorphism attach maps
};

Rational parse_rational(const json& value, const char* what) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(text));
      return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::logic_error&) {
      fail(ErrorKind::ParseError, std::string("bad rational for ") + what + ": '" + text + "'");
    }
  }
  fail(ErrorKind::ParseError, std::string("expected integer or \"p/q\" for ") + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(ErrorKind::ParseError, where + ": missing \"" + key + "\"");
  return obj.at(key);
}

BuiltSpace build_space(const std::string& name, const json& spec, std::map<std::string, BuiltSpace>& built,
                       const json& all, int depth) {
  if (auto it = built.find(name); it != built.end()) return it->second;
  if (depth > 32) fail(ErrorKind::ParseError, "space references nest too deeply at '" + name + "'");
  const std::string where = "space '" + name + "'";
  BuiltSpace out;
  if (spec.contains("edges")) {
    std::vector<Edge> edges;
    for (const auto& e : spec.at("edges")) {
      if (!e.is_array() || e.size() != 2) fail(ErrorKind::ParseError, where + ": edges must be [u, v] pairs");
      edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
    }
    if (edges.empty()) {
      out.graph = MetricGraph::single_vertex();
    } else {
      out.graph = build_graph(edges);
    }
  } else if (spec.contains("image_of")) {
    const auto source_name = spec.at("image_of").get<std::string>();
    if (!all.contains(source_name)) fail(ErrorKind::ParseError, where + ": unknown source space '" + source_name + "'");
    const BuiltSpace source = build_space(source_name, all.at(source_name), built, all, depth + 1);
    if (!source.rank) fail(ErrorKind::ParseError, where + ": image_of needs a free-group source space");
    const auto phi = FreeAutomorphism::parse(require(spec, "automorphism", where).get<std::string>(), *source.rank);
    out.graph = free_image_subtree(source.graph, phi);
    out.rank = source.rank;
  } else if (spec.contains("model")) {
    const auto model = GroupPresentationModel::parse(spec.at("model").get<std::string>());
    const auto radius = require(spec, "radius", where).get<Distance>();
    if (model.kind == ModelKind::Free) {
      std::vector<Word> words;
      if (spec.contains("words")) {
        for (const auto& w : spec.at("words")) words.push_back(parse_power_word(w.get<std::string>(), model.rank));
      }
      out.graph = free_subtree(model.rank, words, radius);
      out.rank = model.rank;
    } else {
      if (spec.contains("words")) fail(ErrorKind::ParseError, where + ": words apply to free models only");
      out.graph = cayley_ball(model, radius);
    }
  } else {
    fail(ErrorKind::ParseError, where + ": needs \"edges\", \"model\" or \"image_of\"");
  }
  built.emplace(name, out);
  return out;
}

std::vector<Vertex> build_attach(const json& value, const BuiltSpace& edge_space, const BuiltSpace& target,
                                 const std::string& where) {
  const MetricGraph& source = edge_space.graph;
  std::vector<Vertex> map(source.vertex_count());
  if (value.is_array()) {
    if (value.size() != source.vertex_count()) fail(ErrorKind::AttachTargetMissing, where + ": table size differs from the edge space");
    for (std::size_t i = 0; i < value.size(); ++i) map[i] = value[i].get<Vertex>();
    return map;
  }
  if (!value.is_string()) fail(ErrorKind::ParseError, where + ": attach map must be a string or an array");
  const auto text = value.get<std::string>();
  auto by_label = [&](auto&& image_of) {
    for (Vertex x = 0; x < source.vertex_count(); ++x) {
      const std::string label = image_of(source.label(x));
      const auto hit = target.graph.find_label(label);
      if (!hit) fail(ErrorKind::AttachTargetMissing, where + ": no vertex labelled '" + label + "' in the target");
      map[x] = *hit;
    }
  };
  if (text == "identity") {
    if (source.has_labels() && target.graph.has_labels()) {
      by_label([](const std::string& s) { return s; });
    } else {
      for (Vertex x = 0; x < source.vertex_count(); ++x) map[x] = x;
    }
    return map;
  }
  if (text.starts_with("automorphism:")) {
    if (!edge_space.rank || !source.has_labels() || !target.graph.has_labels()) {
      fail(ErrorKind::ParseError, where + ": automorphism attach maps need labelled free-group spaces");
    }
    const auto phi = FreeAutomorphism::parse(text.substr(13), *edge_space.rank);
    by_label([&](const std::string& s) { return word_to_string(phi.apply(parse_word(s, phi.rank()))); });
    return map;
  }
  fail(ErrorKind::ParseError, where + ": unknown attach map '" + text + "'");
}

}  // namespace

Word parse_power_word(std::string_view text, int rank) {
  Word out;
  std::size_t i = 0;
  if (text == "1") return out;
  while (i < text.size()) {
    const Word letter = parse_word(text.substr(i, 1), rank);
    ++i;
    std::size_t power = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      const std::size_t start = i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      if (start == i) fail(ErrorKind::ParseError, "missing exponent in word '" + std::string(text) + "'");
      power = std::stoul(std::string(text.substr(start, i - start)));
    }
    for (std::size_t k = 0; k < power; ++k) out.insert(out.end(), letter.begin(), letter.end());
  }
  return free_reduce(out);
}

Instance parse_instance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& ex) {
    fail(ErrorKind::ParseError, std::string("instance is not valid JSON: ") + ex.what());
  }
  try {
    const json& spaces = require(doc, "spaces", "instance");
    std::map<std::string, BuiltSpace> built;
    auto space = [&](const std::string& name) {
      if (!spaces.contains(name)) fail(ErrorKind::ParseError, "unknown space '" + name + "'");
      return build_space(name, spaces.at(name), built, spaces, 0);
    };

    const json& vertices = require(doc, "vertices", "instance");
    std::vector<std::optional<BuiltSpace>> vertex_spaces(vertices.size());
    std::vector<std::string> names(vertices.size());
    for (const auto& v : vertices) {
      const auto id = require(v, "id", "vertex").get<Vertex>();
      if (id >= vertices.size()) fail(ErrorKind::ParseError, "vertex ids must be 0..n-1");
      if (vertex_spaces[id]) fail(ErrorKind::ParseError, "duplicate vertex id " + std::to_string(id));
      names[id] = require(v, "space", "vertex").get<std::string>();
      vertex_spaces[id] = space(names[id]);
    }

    std::vector<EdgeSpace> edges;
    if (doc.contains("edges")) {
      for (const auto& e : doc.at("edges")) {
        EdgeSpace out;
        out.from = require(e, "from", "edge").get<Vertex>();
        out.to = require(e, "to", "edge").get<Vertex>();
        const std::string where = "edge " + std::to_string(out.from) + "-" + std::to_string(out.to);
        if (out.from >= vertices.size() || out.to >= vertices.size()) fail(ErrorKind::UnknownVertex, where + ": missing tree vertex");
        const BuiltSpace edge_space = space(require(e, "space", where).get<std::string>());
        out.space = edge_space.graph;
        out.attach_lo = build_attach(require(e, "attach_lo", where), edge_space, *vertex_spaces[out.from], where + " attach_lo");
        out.attach_hi = build_attach(require(e, "attach_hi", where), edge_space, *vertex_spaces[out.to], where + " attach_hi");
        edges.push_back(std::move(out));
      }
    }

    FamilyParams params;
    if (doc.contains("params")) {
      const json& p = doc.at("params");
      if (p.contains("delta")) {
        const Rational twice = Rational(2) * parse_rational(p.at("delta"), "delta");
        if (twice.den() != 1) fail(ErrorKind::ParseError, "delta must be a half-integer");
        params.delta = HalfInt::from_twice(twice.num());
      }
      if (p.contains("K")) params.K = parse_rational(p.at("K"), "K");
      if (p.contains("epsilon")) params.epsilon = parse_rational(p.at("epsilon"), "epsilon");
    }

    std::vector<MetricGraph> graphs;
    for (auto& v : vertex_spaces) graphs.push_back(v->graph);
    const auto root = doc.value("root", Vertex{0});
    Instance inst{doc.value("name", std::string("instance")),
                  TreeOfSpaces(root, std::move(graphs), std::move(edges), params, names),
                  digest_hex(doc.dump()),
                  std::nullopt,
                  std::nullopt,
                  0};
    if (doc.contains("ladder")) {
      const json& l = doc.at("ladder");
      if (l.contains("C")) inst.ladder_C = l.at("C").get<std::int64_t>();
      if (l.contains("D")) inst.ladder_D = l.at("D").get<std::int64_t>();
    }
    if (doc.contains("basepoint")) {
      const json& b = doc.at("basepoint");
      const MetricGraph& root_space = inst.tos.vertex_space(root);
      if (b.is_string()) {
        const auto hit = root_space.find_label(b.get<std::string>());
        if (!hit) fail(ErrorKind::ParseError, "basepoint label not found in the root space");
        inst.basepoint = *hit;
      } else {
        inst.basepoint = b.get<Vertex>();
        root_space.check_vertex(inst.basepoint);
      }
    }
    return inst;
  } catch (const json::exception& ex) {
    fail(ErrorKind::ParseError, std::string("malformed instance: ") + ex.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot open instance file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_instance(text.str());
}

}  // namespace ctmap
