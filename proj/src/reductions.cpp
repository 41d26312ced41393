#include "hybnet/reductions.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "hybnet/errors.hpp"
#include "hybnet/newick.hpp"

namespace hybnet {
namespace {

// Editable copy of a tree; dead nodes are dropped when the tree is rebuilt.
struct MutableTree {
  std::vector<TreeNode> nodes;
  std::vector<char> alive;

  explicit MutableTree(const PhyloTree& t) : nodes(t.nodes()), alive(t.size(), 1) {}

  NodeId add(std::string label = {}) {
    nodes.push_back(TreeNode{kNoNode, {}, std::move(label)});
    alive.push_back(1);
    return static_cast<NodeId>(nodes.size()) - 1;
  }

  void link(NodeId parent, NodeId child) {
    nodes[parent].children.push_back(child);
    nodes[child].parent = parent;
  }

  // Puts `replacement` where `old` hung below its parent.
  void replace(NodeId old, NodeId replacement) {
    NodeId p = nodes[old].parent;
    nodes[replacement].parent = p;
    if (p != kNoNode) std::replace(nodes[p].children.begin(), nodes[p].children.end(), old, replacement);
    nodes[old].parent = kNoNode;
  }

  void kill_subtree(NodeId v) {
    alive[v] = 0;
    for (NodeId c : nodes[v].children) kill_subtree(c);
  }

  PhyloTree finish() const {
    std::vector<NodeId> remap(nodes.size(), kNoNode);
    std::vector<TreeNode> out;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (!alive[v]) continue;
      remap[v] = static_cast<NodeId>(out.size());
      out.push_back(nodes[v]);
    }
    for (auto& n : out) {
      if (n.parent != kNoNode) n.parent = remap[n.parent];
      for (auto& c : n.children) c = remap[c];
    }
    return PhyloTree(std::move(out));
  }
};

std::vector<std::string> subtree_encodings(const PhyloTree& t) {
  std::vector<std::string> enc(t.size());
  const auto& order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    if (t.is_leaf(v)) {
      enc[v] = newick_label(t.label(v));
      continue;
    }
    if (t.label(v) == kRho) continue;
    std::string a = enc[t.children(v)[0]], b = enc[t.children(v)[1]];
    if (b < a) std::swap(a, b);
    enc[v] = "(" + a + "," + b + ")";
  }
  return enc;
}

int count_leaves(const PhyloTree& t, NodeId v) {
  if (t.is_leaf(v)) return 1;
  int n = 0;
  for (NodeId c : t.children(v)) n += count_leaves(t, c);
  return n;
}

void require_same_labels(std::span<const PhyloTree> trees) {
  if (trees.empty()) return;
  auto ref = trees[0].labels();
  for (std::size_t i = 1; i < trees.size(); ++i) {
    if (trees[i].labels() != ref)
      throw LabelMismatch("tree " + std::to_string(i + 1) + " differs from tree 1");
  }
}

}  // namespace

void TaxonMap::merge(const TaxonMap& other) {
  for (const auto& [k, v] : other.entries) entries.insert_or_assign(k, v);
}

bool is_synthetic_label(const std::string& label) {
  return label.rfind(kSubtreePrefix, 0) == 0 || label.rfind(kChainPrefix, 0) == 0;
}

ReducedTrees common_pendant_subtree_reduction(std::span<const PhyloTree> trees) {
  require_same_labels(trees);
  ReducedTrees out;
  if (trees.empty()) return out;

  std::vector<std::vector<std::string>> enc;
  std::vector<std::unordered_map<std::string, NodeId>> index(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    enc.push_back(subtree_encodings(trees[i]));
    for (NodeId v = 0; v < trees[i].size(); ++v) {
      if (!trees[i].is_leaf(v) && trees[i].label(v) != kRho) index[i].emplace(enc[i][v], v);
    }
  }

  const PhyloTree& first = trees[0];
  std::vector<std::pair<std::string, std::string>> found;  // encoding, synthetic label
  std::function<void(NodeId)> visit = [&](NodeId v) {
    if (first.is_leaf(v)) return;
    if (first.label(v) != kRho) {
      bool common = true;
      for (std::size_t i = 1; i < trees.size() && common; ++i) common = index[i].count(enc[0][v]) != 0;
      if (common) {
        std::string name = kSubtreePrefix + std::to_string(found.size());
        out.map.entries.emplace(name, pendant_subtree(first, v));
        found.emplace_back(enc[0][v], name);
        return;
      }
    }
    for (NodeId c : first.children(v)) visit(c);
  };
  visit(first.root());

  for (std::size_t i = 0; i < trees.size(); ++i) {
    MutableTree mt(trees[i]);
    for (const auto& [code, name] : found) {
      NodeId v = index[i].at(code);
      NodeId leaf = mt.add(name);
      mt.replace(v, leaf);
      mt.kill_subtree(v);
    }
    out.trees.push_back(mt.finish());
  }
  return out;
}

bool is_chain_of(const PhyloTree& t, const Chain& c) {
  if (c.taxa.empty()) return false;
  std::vector<NodeId> p;
  for (const auto& x : c.taxa) {
    auto leaf = t.find_leaf(x);
    if (!leaf || x == kRho) return false;
    p.push_back(t.parent(*leaf));
  }
  const int q = c.size();
  // p[i] is p_{i+1}; the path runs p_q -> ... -> p_1.
  for (int i = 1; i + 1 < q; ++i) {
    if (t.parent(p[i]) != p[i + 1]) return false;
  }
  if (q >= 2 && !(t.parent(p[0]) == p[1] || p[0] == p[1])) return false;
  return true;
}

std::vector<Chain> common_chains(std::span<const PhyloTree> trees) {
  require_same_labels(trees);
  if (trees.empty()) return {};
  const auto taxa = trees[0].taxa();
  const int n = static_cast<int>(taxa.size());
  std::unordered_map<std::string, int> id;
  for (int i = 0; i < n; ++i) id[taxa[i]] = i;

  auto leaf_taxon = [&](const PhyloTree& t, NodeId v) -> int {
    if (v == kNoNode || !t.is_leaf(v) || t.label(v) == kRho) return -1;
    return id.at(t.label(v));
  };
  // strict[t][x] = y when p_y is the parent of p_x; cherry[t][x] = y when x, y are siblings.
  std::vector<std::vector<int>> strict(trees.size(), std::vector<int>(n, -1));
  std::vector<std::vector<int>> cherry(trees.size(), std::vector<int>(n, -1));
  for (std::size_t ti = 0; ti < trees.size(); ++ti) {
    const PhyloTree& t = trees[ti];
    for (int x = 0; x < n; ++x) {
      NodeId leaf = t.leaf(taxa[x]);
      NodeId px = t.parent(leaf);
      cherry[ti][x] = leaf_taxon(t, t.sibling(leaf));
      if (px != kNoNode) strict[ti][x] = leaf_taxon(t, t.sibling(px));
    }
  }
  auto related_everywhere = [&](int x, int y, bool allow_cherry) {
    for (std::size_t ti = 0; ti < trees.size(); ++ti) {
      if (strict[ti][x] == y) continue;
      if (allow_cherry && cherry[ti][x] == y) continue;
      return false;
    }
    return true;
  };

  std::vector<int> succ(n, -1), pred(n, -1);
  for (int x = 0; x < n; ++x) {
    int y = strict[0][x];
    if (y >= 0 && related_everywhere(x, y, false)) {
      succ[x] = y;
      pred[y] = x;
    }
  }

  std::vector<char> used(n, 0);
  std::vector<std::vector<int>> paths;
  for (int x = 0; x < n; ++x) {
    if (pred[x] != -1) continue;
    std::vector<int> path;
    for (int y = x; y != -1; y = succ[y]) path.push_back(y);
    paths.push_back(std::move(path));
  }
  // Extend at the bottom by a taxon that shares p_1 with x_1 in some tree.
  std::vector<char> singleton(n, 0);
  for (const auto& path : paths)
    if (path.size() == 1) singleton[path[0]] = 1;
  std::vector<std::vector<int>> chains;
  std::vector<int> extension(paths.size(), -1);
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    int bottom = paths[pi][0];
    std::vector<int> candidates;
    for (std::size_t ti = 0; ti < trees.size(); ++ti) {
      if (cherry[ti][bottom] >= 0) candidates.push_back(cherry[ti][bottom]);
      for (int x = 0; x < n; ++x)
        if (strict[ti][x] == bottom) candidates.push_back(x);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (int x0 : candidates) {
      if (x0 == bottom || !singleton[x0] || used[x0]) continue;
      if (paths[pi].size() == 1 && used[bottom]) continue;
      if (!related_everywhere(x0, bottom, true)) continue;
      extension[pi] = x0;
      used[x0] = 1;
      used[bottom] = 1;
      break;
    }
    if (extension[pi] == -1 && paths[pi].size() > 1) used[bottom] = 1;
  }
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    const auto& path = paths[pi];
    // A singleton absorbed as someone else's x_1 is not a chain of its own.
    if (path.size() == 1 && extension[pi] == -1 && used[path[0]]) {
      bool absorbed = std::find(extension.begin(), extension.end(), path[0]) != extension.end();
      if (absorbed) continue;
    }
    std::vector<int> chain;
    if (extension[pi] != -1) chain.push_back(extension[pi]);
    chain.insert(chain.end(), path.begin(), path.end());
    chains.push_back(std::move(chain));
  }

  std::vector<Chain> out;
  for (const auto& ch : chains) {
    Chain c;
    for (int x : ch) c.taxa.push_back(taxa[x]);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const Chain& a, const Chain& b) { return a.taxa.front() < b.taxa.front(); });
  return out;
}

std::string chain_label(const Chain& c) {
  std::string s = kChainPrefix;
  for (std::size_t i = 0; i < c.taxa.size(); ++i) {
    if (i) s += '+';
    s += c.taxa[i];
  }
  return s;
}

CollapsedTree collapse_chain(const PhyloTree& t, const Chain& c) {
  if (!is_chain_of(t, c)) throw NotAChain(chain_label(c));
  const std::string name = chain_label(c);
  MutableTree mt(t);
  const int q = c.size();
  std::vector<NodeId> leaves, parents;
  for (const auto& x : c.taxa) {
    leaves.push_back(t.leaf(x));
    parents.push_back(t.parent(leaves.back()));
  }

  ChainForm form;
  if (q == 1) {
    form = ChainForm::Single;
    mt.nodes[leaves[0]].label = name;
  } else if (parents[0] == parents[1]) {
    form = ChainForm::Pendant;
    NodeId top = parents[q - 1];
    NodeId leaf = mt.add(name);
    mt.replace(top, leaf);
    mt.kill_subtree(top);
  } else {
    form = ChainForm::Path;
    NodeId top = parents[q - 1];
    NodeId p1 = parents[0];
    NodeId rest = t.children(p1)[0] == leaves[0] ? t.children(p1)[1] : t.children(p1)[0];
    NodeId joint = mt.add();
    NodeId leaf = mt.add(name);
    mt.replace(top, joint);
    // Detach the continuation below p_1 before discarding the chain's nodes.
    auto& kids = mt.nodes[p1].children;
    kids.erase(std::remove(kids.begin(), kids.end(), rest), kids.end());
    mt.kill_subtree(top);
    mt.link(joint, leaf);
    mt.link(joint, rest);
  }

  CollapsedTree out{mt.finish(), {}};
  out.map.entries.emplace(name, ChainSubstitution{c, form});
  return out;
}

PhyloTree expand_map(const PhyloTree& input, const TaxonMap& m) {
  PhyloTree t = input;
  while (true) {
    NodeId target = kNoNode;
    for (NodeId v : t.preorder()) {
      if (t.is_leaf(v) && is_synthetic_label(t.label(v))) {
        target = v;
        break;
      }
    }
    if (target == kNoNode) return t;
    auto it = m.entries.find(t.label(target));
    if (it == m.entries.end()) throw MissingSubstitution(t.label(target));

    MutableTree mt(t);
    if (const auto* sub = std::get_if<PhyloTree>(&it->second)) {
      std::function<NodeId(NodeId)> copy = [&](NodeId u) -> NodeId {
        NodeId id = mt.add(sub->label(u));
        for (NodeId c : sub->children(u)) mt.link(id, copy(c));
        return id;
      };
      NodeId top = copy(sub->root());
      mt.replace(target, top);
      mt.alive[target] = 0;
    } else {
      const auto& cs = std::get<ChainSubstitution>(it->second);
      const auto& taxa = cs.chain.taxa;
      const int q = cs.chain.size();
      switch (cs.form) {
        case ChainForm::Single:
          mt.nodes[target].label = taxa[0];
          break;
        case ChainForm::Pendant: {
          NodeId below = mt.add(taxa[0]);
          for (int i = 1; i < q; ++i) {
            NodeId p = mt.add();
            mt.link(p, mt.add(taxa[i]));
            mt.link(p, below);
            below = p;
          }
          mt.replace(target, below);
          mt.alive[target] = 0;
          break;
        }
        case ChainForm::Path: {
          NodeId joint = t.parent(target);
          if (joint == kNoNode || t.children(joint).size() != 2)
            throw InputError("chain leaf " + t.label(target) + " has no sibling to hang below");
          NodeId rest = t.sibling(target);
          auto& kids = mt.nodes[joint].children;
          kids.erase(std::remove(kids.begin(), kids.end(), rest), kids.end());
          NodeId below = rest;
          for (int i = 0; i < q; ++i) {
            NodeId p = mt.add();
            mt.link(p, mt.add(taxa[i]));
            mt.link(p, below);
            below = p;
          }
          mt.replace(joint, below);
          mt.kill_subtree(joint);
          break;
        }
      }
    }
    t = mt.finish();
  }
}

}  // namespace hybnet
