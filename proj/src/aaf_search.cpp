#include "hybnet/aaf_search.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "hybnet/errors.hpp"

namespace hybnet {

void for_each_chain_guess(std::size_t chain_count, const std::function<bool(const ChainGuess&)>& fn) {
  if (chain_count >= 63) throw BudgetExceeded("too many chains to enumerate guesses");
  ChainGuess g(chain_count, ChainCase::OneSide);
  const std::uint64_t total = std::uint64_t{1} << chain_count;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (std::size_t i = 0; i < chain_count; ++i)
      g[i] = ((idx >> (chain_count - 1 - i)) & 1u) ? ChainCase::Spread : ChainCase::OneSide;
    if (!fn(g)) return;
  }
}

std::vector<ChainGuess> chain_guesses(std::span<const Chain> chains) {
  std::vector<ChainGuess> out;
  for_each_chain_guess(chains.size(), [&](const ChainGuess& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

namespace {

bool all_isomorphic(std::span<const PhyloTree> trees) {
  for (std::size_t i = 1; i < trees.size(); ++i)
    if (!isomorphic(trees[0], trees[i])) return false;
  return true;
}

std::vector<std::string> leaves_below(const PhyloTree& t, NodeId v) {
  std::vector<std::string> out;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (t.is_leaf(u)) out.push_back(t.label(u));
    for (NodeId c : t.children(u)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Advances `idx` (strictly increasing indices into [0, n)) to the next
// combination of the same size.
bool next_combination(std::vector<int>& idx, int n) {
  const int j = static_cast<int>(idx.size());
  int i = j - 1;
  while (i >= 0 && idx[i] == n - j + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int x = i + 1; x < j; ++x) idx[x] = idx[x - 1] + 1;
  return true;
}

}  // namespace

std::string candidate_to_json(const AafCandidate& c, int k) {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["guess"] = nlohmann::ordered_json::array();
  for (auto g : c.guess) j["guess"].push_back(g == ChainCase::OneSide ? "one-side" : "spread");
  j["deleted"] = c.deleted;
  j["forest"] = c.forest.blocks();
  return j.dump();
}

AafSearchStats enumerate_aafs(std::span<const PhyloTree> trees, int k, const AafSearchOptions& options,
                              const std::function<bool(const AafCandidate&)>& emit) {
  AafSearchStats stats;
  if (trees.empty() || k < 0) return stats;

  if (k == 0) {
    stats.guesses = 1;
    stats.subsets = 1;
    if (!all_isomorphic(trees)) return stats;
    AafCandidate c{Forest({trees[0].labels()}), {}, {}};
    ++stats.emitted;
    if (options.trace) options.trace(candidate_to_json(c, k));
    emit(c);
    return stats;
  }

  std::vector<Chain> chains;
  for (auto& c : common_chains(trees))
    if (c.size() >= 2) chains.push_back(std::move(c));

  std::set<Forest> seen;
  bool stop = false;
  for_each_chain_guess(chains.size(), [&](const ChainGuess& guess) {
    ++stats.guesses;
    // Collapse OneSide chains; only the first tree is needed for deletions.
    PhyloTree t1 = trees[0];
    std::map<std::string, std::vector<std::string>> expansion;
    for (std::size_t i = 0; i < chains.size(); ++i) {
      if (guess[i] != ChainCase::OneSide) continue;
      t1 = collapse_chain(t1, chains[i]).tree;
      expansion[chain_label(chains[i])] = chains[i].taxa;
    }
    if (options.prune && t1.taxon_count() > 5 * k - 1) {
      ++stats.pruned_guesses;
      return true;
    }

    // Candidate edges: the parent edge of every non-root node, in preorder.
    std::vector<NodeId> bottoms;
    for (NodeId v : t1.preorder())
      if (t1.parent(v) != kNoNode) bottoms.push_back(v);
    const int m = static_cast<int>(bottoms.size());

    std::vector<NodeId> uf(t1.size());
    std::function<NodeId(NodeId)> find = [&](NodeId v) { return uf[v] == v ? v : uf[v] = find(uf[v]); };
    std::vector<char> cut(t1.size(), 0);

    for (int j = 0; j <= std::min(k, m) && !stop; ++j) {
      std::vector<int> idx(j);
      std::iota(idx.begin(), idx.end(), 0);
      do {
        ++stats.subsets;
        std::fill(cut.begin(), cut.end(), 0);
        for (int i : idx) cut[bottoms[i]] = 1;
        std::iota(uf.begin(), uf.end(), 0);
        for (NodeId v : bottoms)
          if (!cut[v]) uf[find(v)] = find(t1.parent(v));
        std::map<NodeId, std::vector<std::string>> groups;
        for (NodeId v = 0; v < t1.size(); ++v) {
          if (!t1.is_labelled(v)) continue;
          auto& block = groups[find(v)];
          auto it = expansion.find(t1.label(v));
          if (it == expansion.end())
            block.push_back(t1.label(v));
          else
            block.insert(block.end(), it->second.begin(), it->second.end());
        }
        // Cuts that leave a taxon-free piece duplicate a smaller cut.
        if (static_cast<int>(groups.size()) != j + 1) continue;
        std::vector<std::vector<std::string>> blocks;
        for (auto& [rep, b] : groups) blocks.push_back(std::move(b));
        Forest f(std::move(blocks));
        if (seen.count(f) || !is_acyclic_agreement_forest(f, trees)) continue;
        seen.insert(f);
        AafCandidate c{std::move(f), guess, {}};
        for (int i : idx) c.deleted.push_back(leaves_below(t1, bottoms[i]));
        ++stats.emitted;
        if (options.trace) options.trace(candidate_to_json(c, k));
        if (!emit(c)) {
          stop = true;
          break;
        }
      } while (next_combination(idx, m));
    }
    return !stop;
  });
  return stats;
}

std::vector<Forest> collect_aafs(std::span<const PhyloTree> trees, int k, bool prune) {
  std::vector<Forest> out;
  AafSearchOptions opts;
  opts.prune = prune;
  enumerate_aafs(trees, k, opts, [&](const AafCandidate& c) {
    out.push_back(c.forest);
    return true;
  });
  return out;
}

}  // namespace hybnet
