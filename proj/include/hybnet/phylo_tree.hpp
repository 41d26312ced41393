#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hybnet {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

// Label of the root leaf. Newick input never contains it; the parser adds it.
inline const std::string kRho = "\xCF\x81";  // UTF-8 "ρ"

struct TreeNode {
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  std::string label;
};

// Rooted binary leaf-labelled tree. When the root carries the label ρ it has a
// single child, mirroring the convention that the root is itself a leaf.
// Trees without ρ (restrictions, pendant subtrees) have an ordinary root.
// Immutable after construction.
class PhyloTree {
 public:
  PhyloTree() = default;
  explicit PhyloTree(std::vector<TreeNode> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  bool empty() const { return nodes_.empty(); }
  NodeId root() const { return root_; }
  bool has_rho() const { return root_ != kNoNode && nodes_[root_].label == kRho; }

  NodeId parent(NodeId v) const { return nodes_[v].parent; }
  const std::vector<NodeId>& children(NodeId v) const { return nodes_[v].children; }
  const std::string& label(NodeId v) const { return nodes_[v].label; }
  bool is_leaf(NodeId v) const { return nodes_[v].children.empty(); }
  // Leaves plus the ρ root.
  bool is_labelled(NodeId v) const { return !nodes_[v].label.empty(); }
  NodeId sibling(NodeId v) const;

  int depth(NodeId v) const { return depth_[v]; }
  // True when a is an ancestor of d or a == d.
  bool is_ancestor(NodeId a, NodeId d) const {
    return tin_[a] <= tin_[d] && tout_[d] <= tout_[a];
  }

  NodeId leaf(std::string_view label) const;
  std::optional<NodeId> find_leaf(std::string_view label) const;

  // Sorted leaf labels, ρ included when present.
  std::vector<std::string> labels() const;
  // Sorted leaf labels without ρ.
  std::vector<std::string> taxa() const;
  int taxon_count() const;

  const std::vector<NodeId>& preorder() const { return preorder_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
  NodeId root_ = kNoNode;
  std::vector<int> depth_, tin_, tout_;
  std::vector<NodeId> preorder_;
  std::unordered_map<std::string, NodeId> leaf_index_;
};

// Minimal subtree spanning `labels` with degree-2 nodes suppressed. ρ is kept
// as the root only if it is listed.
PhyloTree restrict_tree(const PhyloTree& t, std::span<const std::string> labels);

// Sorted-child encoding of the topology; equal strings iff isomorphic trees.
std::string canonical_form(const PhyloTree& t);
std::string canonical_form(const PhyloTree& t, NodeId subtree_root);

bool isomorphic(const PhyloTree& a, const PhyloTree& b);

// The subtree hanging below v, as a tree without ρ.
PhyloTree pendant_subtree(const PhyloTree& t, NodeId v);

// Builds a tree with ρ on top of `body` (which must not contain ρ).
PhyloTree with_rho(const PhyloTree& body);

}  // namespace hybnet
