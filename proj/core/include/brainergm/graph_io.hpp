#pragma once

#include <filesystem>
#include <iosfwd>

#include "brainergm/graph.hpp"

namespace brainergm {

// Edge-list text format:
//
//   # comment
//   n=<count> [base=1]
//   <i> <j>
//   ...
//
// With base=1 the ids in the file are 1-based and are shifted on load.
// save_graph always writes 0-based ids in sorted order.
Graph load_graph(std::istream& in);
Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& g, std::ostream& out);
void save_graph(const Graph& g, const std::filesystem::path& path);

// Two-column CSV `node_id,<attribute name>` with a header row; ids 0-based.
NodeAttributes load_attributes(std::istream& in, int n);
NodeAttributes load_attributes(const std::filesystem::path& path, int n);

}  // namespace brainergm
