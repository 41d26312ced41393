#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybnet/extended_aaf.hpp"
#include "hybnet/network.hpp"
#include "hybnet/reconstruct.hpp"

namespace hybnet {

// Exactly three Newick lines on the same taxa. Throws InputError / LabelMismatch.
TreeTriple read_instance(std::string_view text);

struct SolveOptions {
  int max_k = 6;
  bool prune = true;
  // Randomizes the order in which free components are reconstructed.
  std::optional<std::uint64_t> seed;
  TraceSink trace;
  double time_limit_seconds = 0;       // 0 = unlimited
  std::uint64_t max_states = 0;        // 0 = unlimited
  int threads = 1;                     // AAF candidates are sharded across workers
};

struct LevelStats {
  int k = 0;
  std::uint64_t candidates = 0;
  std::uint64_t invisible_skips = 0;
  std::uint64_t states = 0;
  std::uint64_t signatures = 0;
  std::uint64_t cnets = 0;
  std::uint64_t verify_failures = 0;
  std::map<RejectReason, std::uint64_t> rejections;
};

struct SolveStats {
  std::vector<LevelStats> levels;
  double seconds = 0;
};

struct Solution {
  Network network;
  int k = 0;
  Forest aaf;                    // on the reduced taxa
  Description description;       // certificate, on the reduced trees
  std::array<bool, 3> displays{};
  std::array<int, 3> invisible{};  // |I(T)| of the certificate
};

struct SolveResult {
  std::optional<Solution> solution;
  SolveStats stats;
  bool limit_hit = false;
  std::string diagnostic;
};

SolveResult solve(const TreeTriple& trees, const SolveOptions& options = {});

// Smallest j such that deleting j edges of t1 yields an AAF of {t1, t2}.
int oracle_two_tree_maaf(const PhyloTree& t1, const PhyloTree& t2, int max_k);

// Minimum reticulation count over all binary networks on the taxa with at most
// max_k reticulations displaying every tree; nullopt when none does.
std::optional<int> oracle_exhaustive_networks(const TreeTriple& trees, int max_k);

struct GeneratedInstance {
  TreeTriple trees;
};

GeneratedInstance gen_random(int n, int moves, std::uint64_t seed);
PhyloTree random_tree(int n, std::uint64_t seed);
// Applies one random rSPR move.
PhyloTree random_rspr(const PhyloTree& t, std::uint64_t seed);

// Every rooted binary tree on `taxa`, each with ρ on top.
std::vector<PhyloTree> all_trees(const std::vector<std::string>& taxa);

int env_threads();

}  // namespace hybnet
