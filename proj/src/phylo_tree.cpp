#include "hybnet/phylo_tree.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "hybnet/errors.hpp"
#include "hybnet/newick.hpp"

namespace hybnet {

PhyloTree::PhyloTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  const int n = size();
  for (NodeId v = 0; v < n; ++v) {
    const TreeNode& node = nodes_[v];
    if (node.parent == kNoNode) {
      if (root_ != kNoNode) throw InputError("tree has more than one root");
      root_ = v;
    } else if (node.parent < 0 || node.parent >= n) {
      throw InputError("tree node has an out-of-range parent");
    }
    for (NodeId c : node.children) {
      if (c < 0 || c >= n || nodes_[c].parent != v)
        throw InputError("tree parent/child lists disagree");
    }
  }
  if (n == 0) return;
  if (root_ == kNoNode) throw InputError("tree has no root");

  for (NodeId v = 0; v < n; ++v) {
    const TreeNode& node = nodes_[v];
    const auto kids = node.children.size();
    if (node.label == kRho) {
      if (v != root_) throw InputError("only the root may be labelled " + kRho);
      if (kids > 1) throw NonBinaryError("root " + kRho + " has more than one child");
      continue;
    }
    if (kids == 0) {
      if (node.label.empty()) throw InputError("unlabelled leaf");
    } else {
      if (!node.label.empty()) throw InputError("internal node carries label " + node.label);
      if (kids != 2) throw NonBinaryError("node with " + std::to_string(kids) + " children");
    }
  }

  depth_.assign(n, 0);
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  preorder_.reserve(n);
  int clock = 0;
  // Iterative DFS; trees from random generators can be deep caterpillars.
  std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
  tin_[root_] = clock++;
  preorder_.push_back(root_);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < nodes_[v].children.size()) {
      NodeId c = nodes_[v].children[next++];
      depth_[c] = depth_[v] + 1;
      tin_[c] = clock++;
      preorder_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      tout_[v] = clock++;
      stack.pop_back();
    }
  }
  if (static_cast<int>(preorder_.size()) != n) throw InputError("tree is not connected");

  for (NodeId v = 0; v < n; ++v) {
    if (nodes_[v].label.empty()) continue;
    if (!leaf_index_.emplace(nodes_[v].label, v).second) throw DuplicateLabel(nodes_[v].label);
  }
}

NodeId PhyloTree::sibling(NodeId v) const {
  NodeId p = parent(v);
  if (p == kNoNode || children(p).size() != 2) return kNoNode;
  return children(p)[0] == v ? children(p)[1] : children(p)[0];
}

std::optional<NodeId> PhyloTree::find_leaf(std::string_view label) const {
  auto it = leaf_index_.find(std::string(label));
  if (it == leaf_index_.end()) return std::nullopt;
  return it->second;
}

NodeId PhyloTree::leaf(std::string_view label) const {
  auto v = find_leaf(label);
  if (!v) throw UnknownLabel(std::string(label));
  return *v;
}

std::vector<std::string> PhyloTree::labels() const {
  std::vector<std::string> out;
  out.reserve(leaf_index_.size());
  for (const auto& [label, v] : leaf_index_) out.push_back(label);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> PhyloTree::taxa() const {
  auto out = labels();
  std::erase(out, kRho);
  return out;
}

int PhyloTree::taxon_count() const {
  return static_cast<int>(leaf_index_.size()) - (has_rho() ? 1 : 0);
}

PhyloTree restrict_tree(const PhyloTree& t, std::span<const std::string> labels) {
  if (labels.empty()) throw InputError("restriction to an empty label set");
  std::vector<char> keep(t.size(), 0);
  bool keep_rho = false;
  for (const auto& l : labels) {
    NodeId v = t.leaf(l);
    keep[v] = 1;
    if (l == kRho) keep_rho = true;
  }

  std::vector<TreeNode> out;
  // Returns the new id of the suppressed image of the subtree at v, or kNoNode.
  std::function<NodeId(NodeId)> build = [&](NodeId v) -> NodeId {
    if (t.is_leaf(v)) {
      if (!keep[v]) return kNoNode;
      out.push_back(TreeNode{kNoNode, {}, t.label(v)});
      return static_cast<NodeId>(out.size()) - 1;
    }
    std::vector<NodeId> kept;
    for (NodeId c : t.children(v)) {
      NodeId r = build(c);
      if (r != kNoNode) kept.push_back(r);
    }
    if (kept.empty()) return kNoNode;
    if (kept.size() == 1) return kept[0];
    out.push_back(TreeNode{kNoNode, kept, {}});
    NodeId id = static_cast<NodeId>(out.size()) - 1;
    for (NodeId c : kept) out[c].parent = id;
    return id;
  };

  NodeId top = kNoNode;
  if (t.has_rho()) {
    NodeId body = t.children(t.root()).empty() ? kNoNode : build(t.children(t.root())[0]);
    if (keep_rho) {
      out.push_back(TreeNode{kNoNode, {}, kRho});
      top = static_cast<NodeId>(out.size()) - 1;
      if (body != kNoNode) {
        out[top].children.push_back(body);
        out[body].parent = top;
      }
    } else {
      top = body;
    }
  } else {
    top = build(t.root());
  }
  (void)top;
  return PhyloTree(std::move(out));
}

namespace {

std::string encode(const PhyloTree& t, NodeId v) {
  if (t.is_leaf(v)) return newick_label(t.label(v));
  std::vector<std::string> parts;
  for (NodeId c : t.children(v)) parts.push_back(encode(t, c));
  if (t.label(v) == kRho) return newick_label(kRho) + ">" + parts[0];
  std::sort(parts.begin(), parts.end());
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += parts[i];
  }
  s += ')';
  return s;
}

}  // namespace

std::string canonical_form(const PhyloTree& t, NodeId subtree_root) {
  return encode(t, subtree_root);
}

std::string canonical_form(const PhyloTree& t) {
  if (t.empty()) return {};
  return encode(t, t.root());
}

bool isomorphic(const PhyloTree& a, const PhyloTree& b) {
  return canonical_form(a) == canonical_form(b);
}

PhyloTree pendant_subtree(const PhyloTree& t, NodeId v) {
  std::vector<TreeNode> out;
  std::function<NodeId(NodeId)> copy = [&](NodeId u) -> NodeId {
    out.push_back(TreeNode{kNoNode, {}, t.label(u)});
    NodeId id = static_cast<NodeId>(out.size()) - 1;
    for (NodeId c : t.children(u)) {
      NodeId cid = copy(c);
      out[cid].parent = id;
      out[id].children.push_back(cid);
    }
    return id;
  };
  copy(v);
  return PhyloTree(std::move(out));
}

PhyloTree with_rho(const PhyloTree& body) {
  if (body.has_rho()) throw InputError("tree already has a root leaf");
  std::vector<TreeNode> nodes = body.nodes();
  const NodeId r = static_cast<NodeId>(nodes.size());
  nodes.push_back(TreeNode{kNoNode, {body.root()}, kRho});
  nodes[body.root()].parent = r;
  return PhyloTree(std::move(nodes));
}

}  // namespace hybnet
