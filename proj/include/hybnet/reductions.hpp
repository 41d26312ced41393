#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hybnet/phylo_tree.hpp"

namespace hybnet {

inline const std::string kSubtreePrefix = "__sub_";
inline const std::string kChainPrefix = "__chain_";

// A tuple (x_1, ..., x_q) of taxa whose parents p_q, ..., p_1 form a directed
// path, or p_q, ..., p_2 does and p_1 == p_2. taxa[0] is x_1, the lowest.
struct Chain {
  std::vector<std::string> taxa;
  int size() const { return static_cast<int>(taxa.size()); }
  friend bool operator==(const Chain&, const Chain&) = default;
  friend auto operator<=>(const Chain&, const Chain&) = default;
};

// How a chain sat in the tree it was collapsed out of.
enum class ChainForm {
  Single,   // q == 1, the synthetic leaf simply renames x_1
  Path,     // p_1 keeps a non-chain child; the chain is not pendant
  Pendant,  // p_1 == p_2; the chain forms a pendant caterpillar
};

struct ChainSubstitution {
  Chain chain;
  ChainForm form = ChainForm::Single;
};

// Synthetic leaf label -> the structure it replaced.
struct TaxonMap {
  std::map<std::string, std::variant<PhyloTree, ChainSubstitution>> entries;

  bool empty() const { return entries.empty(); }
  bool contains(const std::string& label) const { return entries.count(label) != 0; }
  void merge(const TaxonMap& other);
};

bool is_synthetic_label(const std::string& label);

struct ReducedTrees {
  std::vector<PhyloTree> trees;
  TaxonMap map;
};

// Replaces every maximal common pendant subtree on >= 2 taxa by a fresh leaf.
// Subtrees are discovered in preorder of the first tree and named __sub_0, ...
ReducedTrees common_pendant_subtree_reduction(std::span<const PhyloTree> trees);

bool is_chain_of(const PhyloTree& t, const Chain& c);

// All maximal common chains. They are pairwise disjoint, cover the taxa
// (singletons included) and are ordered by their lowest taxon.
std::vector<Chain> common_chains(std::span<const PhyloTree> trees);

std::string chain_label(const Chain& c);

struct CollapsedTree {
  PhyloTree tree;
  TaxonMap map;
};

// Replaces the chain's leaves and internal chain edges by the synthetic leaf
// chain_label(c). Throws NotAChain.
CollapsedTree collapse_chain(const PhyloTree& t, const Chain& c);

// Undoes reductions until no synthetic label remains. Throws MissingSubstitution.
PhyloTree expand_map(const PhyloTree& t, const TaxonMap& m);

}  // namespace hybnet
