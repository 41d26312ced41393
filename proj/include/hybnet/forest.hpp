#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybnet/phylo_tree.hpp"

namespace hybnet {

// A partition of X ∪ {ρ}. Blocks and the labels inside them are kept sorted,
// so structurally equal forests compare equal.
class Forest {
 public:
  Forest() = default;
  explicit Forest(std::vector<std::vector<std::string>> blocks);

  const std::vector<std::vector<std::string>>& blocks() const { return blocks_; }
  const std::vector<std::string>& block(int i) const { return blocks_[i]; }
  int size() const { return static_cast<int>(blocks_.size()); }
  std::vector<std::string> labels() const;
  // Index of the block holding `label`, or -1.
  int block_of(std::string_view label) const;
  int rho_block() const { return block_of(kRho); }

  friend bool operator==(const Forest&, const Forest&) = default;
  friend auto operator<=>(const Forest&, const Forest&) = default;

 private:
  std::vector<std::vector<std::string>> blocks_;
};

// Nodes of T(L(B)): the union of the paths between leaves of `block`.
std::vector<NodeId> span_nodes(const PhyloTree& t, std::span<const std::string> block);
// Root of T(L(B)), i.e. the lowest common ancestor of the block's leaves.
NodeId block_root(const PhyloTree& t, std::span<const std::string> block);

bool is_forest_for(const Forest& f, const PhyloTree& t);
bool is_agreement_forest(const Forest& f, std::span<const PhyloTree> trees);

struct InheritanceGraph {
  // adj[i] lists blocks j with an edge i -> j.
  std::vector<std::vector<int>> adj;
  bool has_cycle() const;
};

InheritanceGraph inheritance_graph(const Forest& f, std::span<const PhyloTree> trees);
bool is_acyclic_agreement_forest(const Forest& f, std::span<const PhyloTree> trees);

// JSON: a sorted list of sorted label lists.
std::string forest_to_json(const Forest& f);
Forest forest_from_json(std::string_view text);

}  // namespace hybnet
