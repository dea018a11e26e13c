#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ctmap/group_examples.hpp"
#include "ctmap/tree_of_spaces.hpp"

namespace ctmap {

// Tree-of-spaces instance file (JSON):
//
//   {
//     "name": "product3",
//     "root": 0,
//     "params": {"delta": "0", "K": "1", "epsilon": "0"},
//     "spaces": {
//       "S":  {"model": "free:2", "radius": 2, "words": ["a^10", "B^10"]},
//       "P":  {"edges": [[0, 1], [1, 2]]},
//       "T":  {"model": "tiling:7:3", "radius": 2},
//       "S1": {"image_of": "S", "automorphism": "a->ab,b->a"}
//     },
//     "vertices": [{"id": 0, "space": "S"}, ...],
//     "edges": [{"from": 0, "to": 1, "space": "S",
//                "attach_lo": "identity", "attach_hi": "automorphism:a->ab,b->a"}],
//     "ladder": {"C": 2, "D": 3},
//     "basepoint": "1"
//   }
//
// Attach maps are "identity" (by label when both spaces are labelled, by
// index otherwise), "automorphism:<images>" (by label), or an explicit array
// of target vertex ids. Numbers in "params" may be integers or "p/q" strings.
struct Instance {
  std::string name;
  TreeOfSpaces tos;
  std::string digest;  // of the canonical JSON text
  std::optional<std::int64_t> ladder_C;
  std::optional<std::int64_t> ladder_D;
  Vertex basepoint = 0;  // in the root vertex space
};

Instance parse_instance(std::string_view json_text);
Instance load_instance(const std::string& path);

// "a^10B^3" style words; plain letter runs are accepted too.
Word parse_power_word(std::string_view text, int rank);

}  // namespace ctmap
