#include "ctmap/digest.hpp"

#include <cstdio>

namespace ctmap {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

std::string digest_vertices(std::span<const Vertex> vertices) {
  std::string text;
  for (const Vertex v : vertices) {
    text += std::to_string(v);
    text += ' ';
  }
  return digest_hex(text);
}

std::string digest_graph(const MetricGraph& g) {
  std::string text = std::to_string(g.vertex_count()) + ":";
  for (const auto& [u, v] : g.edges()) {
    text += std::to_string(u) + '-' + std::to_string(v) + ' ';
  }
  return digest_hex(text);
}

}  // namespace ctmap
