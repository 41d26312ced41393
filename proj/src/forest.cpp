#include "hybnet/forest.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "hybnet/errors.hpp"

namespace hybnet {

Forest::Forest(std::vector<std::vector<std::string>> blocks) : blocks_(std::move(blocks)) {
  std::set<std::string> seen;
  for (auto& b : blocks_) {
    if (b.empty()) throw InputError("forest has an empty block");
    std::sort(b.begin(), b.end());
    for (const auto& l : b)
      if (!seen.insert(l).second) throw DuplicateLabel(l);
  }
  std::sort(blocks_.begin(), blocks_.end());
}

std::vector<std::string> Forest::labels() const {
  std::vector<std::string> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

int Forest::block_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i) {
    if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), label)) return i;
  }
  return -1;
}

NodeId block_root(const PhyloTree& t, std::span<const std::string> block) {
  if (block.empty()) return kNoNode;
  NodeId a = t.leaf(block[0]);
  for (std::size_t i = 1; i < block.size(); ++i) {
    NodeId b = t.leaf(block[i]);
    while (!t.is_ancestor(a, b)) a = t.parent(a);
  }
  return a;
}

std::vector<NodeId> span_nodes(const PhyloTree& t, std::span<const std::string> block) {
  if (block.empty()) return {};
  NodeId top = block_root(t, block);
  // A node lies on a leaf-to-leaf path iff it has a block leaf below it and
  // either misses some block leaf or is the common ancestor itself.
  std::vector<int> below(t.size(), 0);
  for (const auto& l : block) ++below[t.leaf(l)];
  const auto& order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId p = t.parent(*it);
    if (p != kNoNode) below[p] += below[*it];
  }
  const int n = static_cast<int>(block.size());
  std::vector<NodeId> out;
  for (NodeId v : order) {
    if (below[v] > 0 && (below[v] < n || v == top)) out.push_back(v);
  }
  return out;
}

bool is_forest_for(const Forest& f, const PhyloTree& t) {
  if (f.labels() != t.labels()) return false;
  std::vector<char> used(t.size(), 0);
  for (const auto& b : f.blocks()) {
    for (NodeId v : span_nodes(t, b)) {
      if (used[v]) return false;
      used[v] = 1;
    }
  }
  return true;
}

bool is_agreement_forest(const Forest& f, std::span<const PhyloTree> trees) {
  for (const auto& t : trees)
    if (!is_forest_for(f, t)) return false;
  if (trees.size() < 2) return true;
  for (const auto& b : f.blocks()) {
    if (b.size() < 3) continue;  // one or two leaves have a single shape
    std::string ref = canonical_form(restrict_tree(trees[0], b));
    for (std::size_t i = 1; i < trees.size(); ++i)
      if (canonical_form(restrict_tree(trees[i], b)) != ref) return false;
  }
  return true;
}

bool InheritanceGraph::has_cycle() const {
  const int n = static_cast<int>(adj.size());
  std::vector<int> indeg(n, 0);
  for (const auto& out : adj)
    for (int j : out) ++indeg[j];
  std::vector<int> ready;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  int seen = 0;
  while (!ready.empty()) {
    int i = ready.back();
    ready.pop_back();
    ++seen;
    for (int j : adj[i])
      if (--indeg[j] == 0) ready.push_back(j);
  }
  return seen != n;
}

InheritanceGraph inheritance_graph(const Forest& f, std::span<const PhyloTree> trees) {
  InheritanceGraph g;
  g.adj.resize(f.size());
  for (const auto& t : trees) {
    std::vector<NodeId> roots;
    for (const auto& b : f.blocks()) roots.push_back(block_root(t, b));
    for (int i = 0; i < f.size(); ++i) {
      for (int j = 0; j < f.size(); ++j) {
        if (i != j && roots[i] != roots[j] && t.is_ancestor(roots[i], roots[j])) g.adj[i].push_back(j);
      }
    }
  }
  for (auto& out : g.adj) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return g;
}

bool is_acyclic_agreement_forest(const Forest& f, std::span<const PhyloTree> trees) {
  return is_agreement_forest(f, trees) && !inheritance_graph(f, trees).has_cycle();
}

std::string forest_to_json(const Forest& f) { return nlohmann::json(f.blocks()).dump(); }

Forest forest_from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    return Forest(j.get<std::vector<std::vector<std::string>>>());
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("forest JSON: ") + e.what());
  }
}

}  // namespace hybnet
