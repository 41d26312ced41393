#include "hybnet/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

#include "hybnet/aaf_search.hpp"
#include "hybnet/errors.hpp"
#include "hybnet/newick.hpp"
#include "hybnet/reductions.hpp"

namespace hybnet {

TreeTriple read_instance(std::string_view text) {
  auto trees = parse_newick_lines(text);
  if (trees.size() != 3)
    throw InputError("expected exactly three trees, found " + std::to_string(trees.size()));
  for (int i = 1; i < 3; ++i)
    if (trees[i].labels() != trees[0].labels())
      throw LabelMismatch("tree " + std::to_string(i + 1) + " differs from tree 1");
  return trees;
}

int env_threads() {
  const char* s = std::getenv("HYBNET_THREADS");
  if (!s) return 1;
  int n = std::atoi(s);
  return n > 0 ? n : 1;
}

namespace {

using Clock = std::chrono::steady_clock;

struct SharedLimits {
  Clock::time_point start = Clock::now();
  double time_limit = 0;
  std::uint64_t max_states = 0;
  std::atomic<std::uint64_t> states{0};
  std::atomic<bool> hit{false};

  bool exceeded() {
    if (hit) return true;
    if (max_states && states.load() > max_states) hit = true;
    if (time_limit > 0 && std::chrono::duration<double>(Clock::now() - start).count() > time_limit) hit = true;
    return hit;
  }
};

void merge_stats(LevelStats& into, const CnetSearchStats& s) {
  into.states += s.states;
  into.signatures += s.signatures;
  into.cnets += s.cnets;
  for (auto [r, n] : s.rejections) into.rejections[r] += n;
}

}  // namespace

SolveResult solve(const TreeTriple& trees, const SolveOptions& options) {
  if (trees.size() != 3) throw InputError("exactly three trees are supported");
  for (int i = 1; i < 3; ++i)
    if (trees[i].labels() != trees[0].labels())
      throw LabelMismatch("tree " + std::to_string(i + 1) + " differs from tree 1");

  SolveResult result;
  SharedLimits limits;
  limits.time_limit = options.time_limit_seconds;
  limits.max_states = options.max_states;

  ReducedTrees reduced = common_pendant_subtree_reduction(trees);
  auto shared = std::make_shared<const TreeTriple>(reduced.trees);

  auto trace = [&](nlohmann::ordered_json j) {
    if (options.trace) options.trace(j.dump());
  };

  for (int k = 0; k <= options.max_k; ++k) {
    LevelStats level;
    level.k = k;
    trace({{"event", "level"}, {"k", k}});

    std::vector<Forest> candidates;
    AafSearchOptions aopts;
    aopts.prune = options.prune;
    aopts.trace = options.trace;
    enumerate_aafs(*shared, k, aopts, [&](const AafCandidate& c) {
      candidates.push_back(c.forest);
      return !limits.exceeded();
    });
    level.candidates = candidates.size();

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{candidates.size()};
    std::optional<Solution> found;

    auto work = [&]() {
      while (true) {
        const std::size_t i = next++;
        if (i >= candidates.size() || i > best.load() || limits.exceeded()) return;
        auto fs = std::make_shared<const ExtendedAaf>(shared, candidates[i]);
        std::array<int, 3> inv{};
        bool skip = false;
        for (int t = 0; t < 3; ++t) {
          inv[t] = static_cast<int>(fs->invisible(t).size());
          if (inv[t] > std::max(0, k - 1)) skip = true;
        }
        if (skip) {
          std::lock_guard lock(mu);
          ++level.invisible_skips;
          continue;
        }
        std::uint64_t failures = 0;
        std::optional<Solution> local;
        CnetSearchControl control;
        control.seed = options.seed;
        std::uint64_t seen_states = 0;
        control.should_stop = [&]() {
          ++seen_states;
          ++limits.states;
          return best.load() < i || limits.exceeded();
        };
        auto stats = search_cnets(fs, k, [&](const CnetFound& f) {
          Network net = expand_map(induce_network(f.cnet), reduced.map);
          Solution s;
          s.k = hybridization_number(net);
          bool ok = s.k <= k && is_binary_network(net);
          for (int t = 0; t < 3 && ok; ++t) {
            s.displays[t] = displays(net, trees[t]);
            ok = s.displays[t];
          }
          if (!ok) {
            ++failures;
            return false;
          }
          // A tree network is the input tree; hand it back with its own child order.
          s.network = s.k == 0 ? network_from_tree(trees[0]) : std::move(net);
          s.aaf = candidates[i];
          s.description = f.description;
          s.invisible = inv;
          local = std::move(s);
          return true;
        }, control);
        std::lock_guard lock(mu);
        merge_stats(level, stats);
        level.verify_failures += failures;
        if (local && i < best.load()) {
          best = i;
          found = std::move(local);
        }
      }
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    result.stats.levels.push_back(level);
    if (found) {
      trace({{"event", "solution"}, {"k", found->k}, {"aaf", found->aaf.blocks()}});
      result.solution = std::move(found);
      break;
    }
    if (limits.exceeded()) {
      result.limit_hit = true;
      result.diagnostic = "search limit reached while trying k = " + std::to_string(k);
      break;
    }
  }
  if (!result.solution && !result.limit_hit)
    result.diagnostic = "no network with hybridization number <= " + std::to_string(options.max_k);
  result.stats.seconds = std::chrono::duration<double>(Clock::now() - limits.start).count();
  return result;
}

int oracle_two_tree_maaf(const PhyloTree& t1, const PhyloTree& t2, int max_k) {
  const std::array<PhyloTree, 2> pair{t1, t2};
  std::vector<NodeId> bottoms;
  for (NodeId v : t1.preorder())
    if (t1.parent(v) != kNoNode) bottoms.push_back(v);
  const int m = static_cast<int>(bottoms.size());
  int best = max_k + 1;
  std::vector<NodeId> uf(t1.size());
  std::function<NodeId(NodeId)> find = [&](NodeId v) { return uf[v] == v ? v : uf[v] = find(uf[v]); };
  for (int j = 0; j <= std::min(max_k, m); ++j) {
    std::vector<int> idx(j);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<char> cut(t1.size(), 0);
      for (int i : idx) cut[bottoms[i]] = 1;
      std::iota(uf.begin(), uf.end(), 0);
      for (NodeId v : bottoms)
        if (!cut[v]) uf[find(v)] = find(t1.parent(v));
      std::map<NodeId, std::vector<std::string>> groups;
      for (NodeId v = 0; v < t1.size(); ++v)
        if (t1.is_labelled(v)) groups[find(v)].push_back(t1.label(v));
      std::vector<std::vector<std::string>> blocks;
      for (auto& [r, b] : groups) blocks.push_back(std::move(b));
      const int size = static_cast<int>(blocks.size());
      if (size - 1 < best && is_acyclic_agreement_forest(Forest(std::move(blocks)), pair)) best = size - 1;
      // Next j-subset in lexicographic order.
      int i = j - 1;
      while (i >= 0 && idx[i] == m - j + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int x = i + 1; x < j; ++x) idx[x] = idx[x - 1] + 1;
    }
    if (best <= j) return best;
  }
  throw BudgetExceeded("two-tree oracle found no AAF within " + std::to_string(max_k) + " deletions");
}

namespace {

// Inserts a new edge a -> b, where a subdivides e1 and b subdivides e2.
Dag insert_edge(const Dag& g, EdgeId e1, EdgeId e2) {
  Dag h = g;
  const DagEdge first = h.edge(e1);
  NodeId a = h.add_node();
  h.set_head(e1, a);
  EdgeId below_a = h.add_edge(a, first.to);
  EdgeId target = e2 == e1 ? below_a : e2;
  const DagEdge second = h.edge(target);
  NodeId b = h.add_node();
  h.set_head(target, b);
  h.add_edge(b, second.to);
  h.add_edge(a, b);
  return h;
}

bool reaches(const Dag& g, NodeId from, NodeId to) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = 1;
    for (EdgeId e : g.out_edges(v)) stack.push_back(g.edge(e).to);
  }
  return false;
}

// Calls fn on every network with one more reticulation than g.
bool for_each_extension(const Dag& g, const std::function<bool(const Dag&)>& fn) {
  std::vector<EdgeId> edges;
  for (EdgeId e = 0; e < g.edge_capacity(); ++e)
    if (g.edge(e).alive) edges.push_back(e);
  for (EdgeId e1 : edges) {
    for (EdgeId e2 : edges) {
      if (g.indeg(g.edge(e2).from) == 0) continue;  // a reticulation cannot sit on the root edge
      if (e1 != e2 && reaches(g, g.edge(e2).to, g.edge(e1).from)) continue;
      if (fn(insert_edge(g, e1, e2))) return true;
    }
  }
  return false;
}

bool displays_all(const Dag& g, const TreeTriple& trees) {
  for (const auto& t : trees)
    if (!displays(g, t)) return false;
  return true;
}

}  // namespace

std::vector<PhyloTree> all_trees(const std::vector<std::string>& taxa) {
  std::vector<PhyloTree> out;
  if (taxa.empty()) return out;
  std::vector<TreeNode> start{TreeNode{kNoNode, {1}, kRho}, TreeNode{0, {}, taxa[0]}};
  std::function<void(std::vector<TreeNode>&, std::size_t)> grow = [&](std::vector<TreeNode>& nodes, std::size_t i) {
    if (i == taxa.size()) {
      out.emplace_back(nodes);
      return;
    }
    const int count = static_cast<int>(nodes.size());
    for (NodeId x = 1; x < count; ++x) {
      std::vector<TreeNode> next = nodes;
      NodeId p = static_cast<NodeId>(next.size());
      NodeId leaf = p + 1;
      NodeId up = next[x].parent;
      std::replace(next[up].children.begin(), next[up].children.end(), x, p);
      next.push_back(TreeNode{up, {x, leaf}, {}});
      next.push_back(TreeNode{p, {}, taxa[i]});
      next[x].parent = p;
      grow(next, i + 1);
    }
  };
  grow(start, 1);
  return out;
}

std::optional<int> oracle_exhaustive_networks(const TreeTriple& trees, int max_k) {
  if (max_k > 2) throw BudgetExceeded("exhaustive oracle supports at most two reticulations");
  const auto taxa = trees.at(0).taxa();
  if (taxa.size() > 5) throw BudgetExceeded("exhaustive oracle supports at most five taxa");
  std::vector<Dag> level;
  for (const auto& t : all_trees(taxa)) level.push_back(network_from_tree(t));
  for (const auto& g : level)
    if (displays_all(g, trees)) return 0;
  for (int k = 1; k <= max_k; ++k) {
    std::vector<Dag> next;
    bool keep = k < max_k;
    for (const auto& g : level) {
      bool hit = for_each_extension(g, [&](const Dag& h) {
        if (displays_all(h, trees)) return true;
        if (keep) next.push_back(h);
        return false;
      });
      if (hit) return k;
    }
    level = std::move(next);
  }
  return std::nullopt;
}

namespace {

struct MutableTree {
  std::vector<TreeNode> nodes;

  NodeId add(NodeId parent, std::string label) {
    nodes.push_back(TreeNode{parent, {}, std::move(label)});
    NodeId id = static_cast<NodeId>(nodes.size()) - 1;
    if (parent != kNoNode) nodes[parent].children.push_back(id);
    return id;
  }

  // Puts fresh internal node p on the edge above x with second child y.
  void graft(NodeId x, NodeId p, NodeId y) {
    NodeId up = nodes[x].parent;
    std::replace(nodes[up].children.begin(), nodes[up].children.end(), x, p);
    nodes[p].parent = up;
    nodes[p].children = {x, y};
    nodes[x].parent = p;
    nodes[y].parent = p;
  }
};

bool in_subtree(const std::vector<TreeNode>& nodes, NodeId root, NodeId v) {
  for (; v != kNoNode; v = nodes[v].parent)
    if (v == root) return true;
  return false;
}

}  // namespace

PhyloTree random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw InputError("a tree needs at least one taxon");
  std::mt19937_64 rng(seed);
  MutableTree t;
  NodeId rho = t.add(kNoNode, kRho);
  t.add(rho, "t1");
  for (int i = 2; i <= n; ++i) {
    const NodeId count = static_cast<NodeId>(t.nodes.size());
    NodeId x = std::uniform_int_distribution<NodeId>(1, count - 1)(rng);
    NodeId p = t.add(kNoNode, {});
    NodeId leaf = t.add(kNoNode, "t" + std::to_string(i));
    t.graft(x, p, leaf);
  }
  return PhyloTree(t.nodes);
}

PhyloTree random_rspr(const PhyloTree& tree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TreeNode> nodes = tree.nodes();
  const NodeId root = tree.root();
  const NodeId body = tree.children(root).at(0);
  std::vector<NodeId> movable;
  for (NodeId v = 0; v < tree.size(); ++v)
    if (v != root && v != body) movable.push_back(v);
  if (movable.empty()) return tree;
  NodeId v = movable[std::uniform_int_distribution<std::size_t>(0, movable.size() - 1)(rng)];

  // Prune: remove v's parent p, joining p's parent to v's sibling.
  NodeId p = nodes[v].parent;
  NodeId sib = nodes[p].children[0] == v ? nodes[p].children[1] : nodes[p].children[0];
  NodeId up = nodes[p].parent;
  std::replace(nodes[up].children.begin(), nodes[up].children.end(), p, sib);
  nodes[sib].parent = up;

  // Regraft on any edge of the remaining tree.
  std::vector<NodeId> targets;
  for (NodeId x = 0; x < tree.size(); ++x)
    if (x != root && x != p && !in_subtree(nodes, v, x)) targets.push_back(x);
  NodeId x = targets[std::uniform_int_distribution<std::size_t>(0, targets.size() - 1)(rng)];
  NodeId xp = nodes[x].parent;
  std::replace(nodes[xp].children.begin(), nodes[xp].children.end(), x, p);
  nodes[p].parent = xp;
  nodes[p].children = {x, v};
  nodes[x].parent = p;
  nodes[v].parent = p;
  return PhyloTree(std::move(nodes));
}

GeneratedInstance gen_random(int n, int moves, std::uint64_t seed) {
  if (n < 2) throw InputError("gen_random needs at least two taxa");
  std::mt19937_64 rng(seed);
  PhyloTree base = random_tree(n, rng());
  GeneratedInstance inst;
  inst.trees.push_back(base);
  for (int i = 0; i < 2; ++i) {
    PhyloTree t = base;
    for (int m = 0; m < moves; ++m) t = random_rspr(t, rng());
    inst.trees.push_back(t);
  }
  return inst;
}

}  // namespace hybnet
