#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hybnet/forest.hpp"
#include "hybnet/phylo_tree.hpp"
#include "hybnet/reductions.hpp"

namespace hybnet {

// OneSide: the whole chain ends up on one side of the cut and is collapsed.
// Spread: its taxa may be separated, so the chain stays expanded.
enum class ChainCase { OneSide = 0, Spread = 1 };
using ChainGuess = std::vector<ChainCase>;

// All 2^m guesses in lexicographic order (OneSide < Spread, first chain most
// significant). Calls `fn` for each; stops early when it returns false.
void for_each_chain_guess(std::size_t chain_count, const std::function<bool(const ChainGuess&)>& fn);
std::vector<ChainGuess> chain_guesses(std::span<const Chain> chains);

struct AafCandidate {
  Forest forest;
  ChainGuess guess;  // one entry per chain of length >= 2
  // Deleted edges of the collapsed first tree, each named by the labels below it.
  std::vector<std::vector<std::string>> deleted;
};

struct AafSearchOptions {
  bool prune = true;
  // Receives one JSON line per emitted candidate.
  std::function<void(const std::string&)> trace;
};

struct AafSearchStats {
  std::uint64_t guesses = 0;
  std::uint64_t pruned_guesses = 0;
  std::uint64_t subsets = 0;
  std::uint64_t emitted = 0;
};

// Streams every distinct AAF with at most k+1 blocks reachable by deleting at
// most k edges of the (chain-collapsed) first tree. `emit` returns false to stop.
AafSearchStats enumerate_aafs(std::span<const PhyloTree> trees, int k, const AafSearchOptions& options,
                              const std::function<bool(const AafCandidate&)>& emit);

std::vector<Forest> collect_aafs(std::span<const PhyloTree> trees, int k, bool prune = true);

std::string candidate_to_json(const AafCandidate& c, int k);

}  // namespace hybnet
