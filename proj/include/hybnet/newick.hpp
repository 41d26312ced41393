#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hybnet/phylo_tree.hpp"

namespace hybnet {

// Parses a single rooted binary Newick tree terminated by ';'. Branch lengths,
// comments and internal node labels are discarded, unary nodes are suppressed
// and a root leaf ρ is attached above the Newick root.
PhyloTree parse_newick(std::string_view text);

// Parses every non-empty line of `text` as one tree.
std::vector<PhyloTree> parse_newick_lines(std::string_view text);

// Canonical Newick: children sorted by their own encoding, ρ omitted.
std::string to_newick(const PhyloTree& t);

// Quotes a label when it contains Newick metacharacters.
std::string newick_label(std::string_view label);

namespace detail {

// Raw syntax tree shared by the tree and eNewick readers.
struct NewickNode {
  std::string label;
  std::vector<NewickNode> children;
};

NewickNode parse_newick_syntax(std::string_view text);

}  // namespace detail
}  // namespace hybnet
