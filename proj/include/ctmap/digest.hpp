#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "ctmap/metric_graph.hpp"

namespace ctmap {

// 64-bit FNV-1a, rendered as 16 lowercase hex digits. Provenance tag only;
// not collision resistant.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string digest_hex(std::string_view bytes);
std::string digest_vertices(std::span<const Vertex> vertices);
std::string digest_graph(const MetricGraph& g);

}  // namespace ctmap
