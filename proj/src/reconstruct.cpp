#include "hybnet/reconstruct.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <set>

#include <json.hpp>

#include "hybnet/errors.hpp"

namespace hybnet {

std::string reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::NoFreeNode:
      return "NoFreeNode";
    case RejectReason::BuddyGuessMismatch:
      return "BuddyGuessMismatch";
    case RejectReason::BranchConflict:
      return "BranchConflict";
    case RejectReason::CyclicAttachOrder:
      return "CyclicAttachOrder";
    case RejectReason::ColourFlow:
      return "ColourFlow";
    case RejectReason::InvalidBuddy:
      return "InvalidBuddy";
  }
  return "?";
}

std::string Signature::canonical(const ExtendedAaf& fs) const {
  auto node_name = [&](int n) {
    std::vector<std::string> names;
    for (int c : nodes[n]) names.push_back(fs.component(c).name);
    std::sort(names.begin(), names.end());
    std::string s;
    for (const auto& x : names) s += (s.empty() ? "" : "|") + x;
    return s;
  };
  std::vector<std::string> lines;
  for (std::size_t n = 0; n < nodes.size(); ++n) lines.push_back("node " + node_name(static_cast<int>(n)));
  for (const auto& e : edges) {
    std::string top = e.top < 0 ? "<root>" : node_name(e.top);
    lines.push_back("edge " + top + " -> " + node_name(e.bottom) + " " + std::to_string(e.colours) + "/" +
                    std::to_string(e.split));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

namespace {

// Read-only data derived from the extended AAF once per search.
struct Context {
  const ExtendedAaf* fs = nullptr;
  std::vector<std::vector<int>> up;  // descendant DAG: component -> direct ancestors
  std::vector<int> in_count;         // number of direct descendants
  // attached[c][t]: roots of the subtrees of tree t attached to AAF component c.
  std::vector<std::array<std::vector<NodeId>, 3>> attached;

  explicit Context(const ExtendedAaf& f) : fs(&f), up(descendant_dag(f)), in_count(f.size(), 0) {
    for (const auto& out : up)
      for (int c : out) ++in_count[c];
    attached.resize(f.size());
    for (int c = 0; c < f.size(); ++c) {
      if (f.component(c).kind != ComponentKind::Aaf) continue;
      for (int t = 0; t < 3; ++t) {
        const PhyloTree& tr = f.tree(t);
        for (NodeId v : tr.preorder()) {
          if (f.component_of(t, v) != c) continue;
          for (NodeId ch : tr.children(v))
            if (f.component_of(t, ch) != c) attached[c][t].push_back(ch);
        }
      }
    }
  }
};

struct State {
  std::vector<std::vector<int>> nodes;
  std::vector<SignatureEdge> edges;
  std::array<std::vector<int>, 3> root_edge_of;  // tree node -> live root edge or -1
  std::vector<int> node_of;
  std::vector<int> pending;
  std::vector<WiringGuess> guesses;
  std::vector<int> order;
  int cost = 0;
  int remaining = 0;

  explicit State(const Context& ctx) {
    const auto& fs = *ctx.fs;
    for (int t = 0; t < 3; ++t) root_edge_of[t].assign(fs.tree(t).size(), -1);
    node_of.assign(fs.size(), -1);
    pending = ctx.in_count;
    guesses.resize(fs.size());
    remaining = fs.size();
  }
};

struct Step {
  std::vector<int> merged;
  std::vector<int> buddies;
};

class Builder {
 public:
  explicit Builder(const Context& ctx) : ctx_(ctx), fs_(*ctx.fs) {}

  bool is_free(const State& s, int c) const {
    if (s.node_of[c] != -1 || s.pending[c] != 0) return false;
    const Component& comp = fs_.component(c);
    if (comp.kind == ComponentKind::INode) {
      const int t = comp.tree;
      for (NodeId ch : fs_.tree(t).children(comp.rep[t])) {
        int e = s.root_edge_of[t][ch];
        if (e < 0 || s.edges[e].split != t) return false;
      }
      return true;
    }
    for (int t = 0; t < 3; ++t) {
      for (NodeId v : ctx_.attached[c][t]) {
        int e = s.root_edge_of[t][v];
        if (e < 0) return false;
        const auto& ed = s.edges[e];
        for (int u = 0; u < 3; ++u) {
          if (!has_colour(ed.colours, u)) continue;
          NodeId p = fs_.tree(u).parent(ed.rep[u]);
          if (p == kNoNode || fs_.component_of(u, p) != c) return false;
        }
      }
    }
    return true;
  }

  std::vector<int> free_components(const State& s) const {
    std::vector<int> out;
    for (int c = 0; c < fs_.size(); ++c)
      if (is_free(s, c)) out.push_back(c);
    return out;
  }

  // Colours arriving from below an invisible node's image.
  ColourSet child_colours(const State& s, int c) const {
    const Component& comp = fs_.component(c);
    ColourSet u = 0;
    for (NodeId ch : fs_.tree(comp.tree).children(comp.rep[comp.tree]))
      u |= s.edges[s.root_edge_of[comp.tree][ch]].colours;
    return u;
  }

  // Processes free component c with `guess`. With `fixed` set, buddies must
  // carry an equal guess there; otherwise they inherit it.
  std::optional<Rejection> process(State& s, int c, const WiringGuess& guess,
                                   const std::vector<WiringGuess>* fixed, Step* step) const {
    const Component& comp = fs_.component(c);
    const int z = static_cast<int>(s.nodes.size());
    s.nodes.push_back({c});
    std::array<NodeId, 3> rep{kNoNode, kNoNode, kNoNode};
    std::vector<int> members{c};

    if (comp.kind == ComponentKind::INode) {
      const int t = comp.tree;
      const auto& kids = fs_.tree(t).children(comp.rep[t]);
      int e1 = s.root_edge_of[t][kids[0]], e2 = s.root_edge_of[t][kids[1]];
      consume(s, e1, z, step);
      consume(s, e2, z, step);
      const auto& a = s.edges[e1];
      const auto& b = s.edges[e2];
      if (guess.colours() != (a.colours | b.colours))
        return Rejection{RejectReason::ColourFlow, comp.name + " guesses colours the children do not carry"};
      rep[t] = comp.rep[t];
      for (int u = 0; u < 3; ++u) {
        if (u == t) continue;
        const bool in_a = has_colour(a.colours, u), in_b = has_colour(b.colours, u);
        if (in_a && in_b) {
          NodeId p = fs_.tree(u).parent(a.rep[u]);
          if (p == kNoNode || p != fs_.tree(u).parent(b.rep[u]))
            return Rejection{RejectReason::InvalidBuddy, comp.name + ": " + colour_name(u) + " subtrees are not siblings"};
          int w = fs_.component_of(u, p);
          const Component& wc = fs_.component(w);
          if (wc.kind != ComponentKind::INode || wc.tree != u || s.node_of[w] != -1 || s.pending[w] != 0)
            return Rejection{RejectReason::InvalidBuddy, comp.name + ": no unused invisible node of " + colour_name(u)};
          if (fixed && (*fixed)[w] != guess)
            return Rejection{RejectReason::BuddyGuessMismatch, comp.name + " and " + wc.name};
          rep[u] = p;
          members.push_back(w);
          s.nodes[z].push_back(w);
          if (step) step->buddies.push_back(w);
        } else if (in_a || in_b) {
          rep[u] = (in_a ? a : b).rep[u];
        }
      }
    } else {
      std::set<int> below;
      for (int t = 0; t < 3; ++t)
        for (NodeId v : ctx_.attached[c][t]) below.insert(s.root_edge_of[t][v]);
      for (int e : below) consume(s, e, z, step);
      for (int t = 0; t < 3; ++t) rep[t] = comp.rep[t];
    }

    for (const auto& part : guess.parts) {
      SignatureEdge e;
      e.bottom = z;
      e.colours = part.colours;
      e.split = part.split;
      for (int t = 0; t < 3; ++t) {
        if (!has_colour(part.colours, t)) continue;
        e.rep[t] = rep[t];
        if (s.root_edge_of[t][rep[t]] != -1)
          return Rejection{RejectReason::ColourFlow, comp.name + ": two root edges for one subtree of " + colour_name(t)};
      }
      const int id = static_cast<int>(s.edges.size());
      s.edges.push_back(e);
      for (int t = 0; t < 3; ++t)
        if (has_colour(part.colours, t)) s.root_edge_of[t][rep[t]] = id;
    }
    if (!guess.parts.empty()) s.cost += static_cast<int>(guess.parts.size()) - 1;

    std::sort(s.nodes[z].begin(), s.nodes[z].end());
    for (int m : members) {
      s.node_of[m] = z;
      s.guesses[m] = guess;
      --s.remaining;
      for (int a : ctx_.up[m]) --s.pending[a];
    }
    s.order.push_back(c);
    return std::nullopt;
  }

  std::optional<Rejection> finish(const State& s) const {
    for (std::size_t e = 0; e < s.edges.size(); ++e)
      if (s.edges[e].top < 0)
        return Rejection{RejectReason::ColourFlow, "root edge " + std::to_string(e) + " is never absorbed"};
    return std::nullopt;
  }

  Signature signature(const State& s) const {
    return Signature{s.nodes, s.edges, s.node_of, s.order, s.guesses, s.cost};
  }

 private:
  static void consume(State& s, int e, int z, Step* step) {
    auto& ed = s.edges[e];
    ed.top = z;
    for (int t = 0; t < 3; ++t)
      if (has_colour(ed.colours, t) && s.root_edge_of[t][ed.rep[t]] == e) s.root_edge_of[t][ed.rep[t]] = -1;
    if (step) step->merged.push_back(e);
  }

  const Context& ctx_;
  const ExtendedAaf& fs_;
};

std::string round_json(const ExtendedAaf& fs, int round, const std::vector<int>& free, int chosen,
                       const WiringGuess& guess, const Step& step, int cost) {
  nlohmann::ordered_json j;
  j["round"] = round;
  j["free"] = nlohmann::ordered_json::array();
  for (int c : free) j["free"].push_back(fs.component(c).name);
  j["chosen"] = fs.component(chosen).name;
  j["guess"] = guess_to_string(guess);
  j["merged"] = step.merged;
  j["buddies"] = nlohmann::ordered_json::array();
  for (int c : step.buddies) j["buddies"].push_back(fs.component(c).name);
  j["cost"] = cost;
  return j.dump();
}

}  // namespace

std::variant<Signature, Rejection> build_signature(const Description& d, const SignatureOptions& options) {
  const ExtendedAaf& fs = *d.fstar;
  if (static_cast<int>(d.guesses.size()) != fs.size()) throw InputError("description needs one guess per component");
  Context ctx(fs);
  Builder b(ctx);
  State s(ctx);
  std::optional<std::mt19937_64> rng;
  if (options.seed) rng.emplace(*options.seed);
  int round = 0;
  while (s.remaining > 0) {
    auto free = b.free_components(s);
    if (free.empty()) return Rejection{RejectReason::NoFreeNode, std::to_string(s.remaining) + " components left"};
    int c = free[0];
    if (rng) c = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(*rng)];
    Step step;
    if (auto r = b.process(s, c, d.guesses[c], &d.guesses, &step)) return *r;
    if (options.trace) options.trace(round_json(fs, ++round, free, c, d.guesses[c], step, s.cost));
  }
  if (auto r = b.finish(s)) return *r;
  return b.signature(s);
}

std::variant<Cnet, Rejection> expand_components(const Signature& sig, const ExtendedAaf& fs, const TraceSink& trace) {
  Dag h;
  const int sn = static_cast<int>(sig.nodes.size());
  // Dag node standing for the top of each signature node.
  std::vector<NodeId> top(sn, kNoNode);
  // For AAF nodes: C-cluster of a component-tree node -> Dag node, plus parent links.
  struct Expanded {
    int comp = -1;
    bool rho_only = false;
    std::map<std::vector<std::string>, NodeId> by_cluster;
    std::map<NodeId, EdgeId> parent_edge;
  };
  std::vector<Expanded> expanded(sn);

  for (int n = 0; n < sn; ++n) {
    const Component& comp = fs.component(sig.nodes[n][0]);
    if (comp.kind == ComponentKind::INode) {
      top[n] = h.add_node();
      continue;
    }
    Expanded& ex = expanded[n];
    ex.comp = sig.nodes[n][0];
    const auto& block = fs.aaf().block(comp.block);
    if (comp.rho && block.size() == 1) {
      ex.rho_only = true;
      continue;
    }
    PhyloTree ct = restrict_tree(fs.tree(0), block);
    std::vector<NodeId> map(ct.size());
    std::vector<std::vector<std::string>> clusters(ct.size());
    const auto& order = ct.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId v = *it;
      if (ct.is_labelled(v) && ct.label(v) != kRho) clusters[v].push_back(ct.label(v));
      for (NodeId c : ct.children(v)) clusters[v].insert(clusters[v].end(), clusters[c].begin(), clusters[c].end());
      std::sort(clusters[v].begin(), clusters[v].end());
    }
    for (NodeId v : order) {
      map[v] = h.add_node(ct.is_leaf(v) && ct.label(v) != kRho ? ct.label(v) : std::string{});
      if (ct.parent(v) != kNoNode) ex.parent_edge[map[v]] = h.add_edge(map[ct.parent(v)], map[v], kAllColours);
      // The ρ node shares its cluster with its child; the child is the attachment target.
      if (ct.label(v) != kRho) ex.by_cluster[clusters[v]] = map[v];
    }
    top[n] = map[ct.root()];
  }

  // Edges below I-nodes hang directly; edges below AAF nodes are attached after.
  std::vector<std::vector<int>> pending(sn);
  for (int i = 0; i < static_cast<int>(sig.edges.size()); ++i) {
    const auto& e = sig.edges[i];
    if (expanded[e.top].comp < 0)
      h.add_edge(top[e.top], top[e.bottom], e.colours);
    else
      pending[e.top].push_back(i);
  }

  for (int c : sig.order) {
    const int n = sig.node_of[c];
    Expanded& ex = expanded[n];
    if (ex.comp != c) continue;
    const Component& comp = fs.component(c);
    nlohmann::ordered_json tj;
    tj["component"] = comp.name;
    tj["attach"] = nlohmann::ordered_json::array();
    if (ex.rho_only) {
      for (int i : pending[n]) {
        NodeId r = h.add_node();
        h.add_edge(r, top[sig.edges[i].bottom], sig.edges[i].colours);
      }
      if (trace) {
        tj["roots"] = pending[n];
        trace(tj.dump());
      }
      continue;
    }
    const auto& block = fs.aaf().block(comp.block);
    std::set<std::string> in_block(block.begin(), block.end());
    // Per edge: the component edge it branches off and, per tree, its depth.
    std::map<NodeId, std::vector<int>> groups;
    std::map<int, std::array<int, 3>> depth;
    for (int i : pending[n]) {
      const auto& e = sig.edges[i];
      NodeId target = kNoNode;
      std::array<int, 3> d{-1, -1, -1};
      for (int t = 0; t < 3; ++t) {
        if (!has_colour(e.colours, t)) continue;
        const PhyloTree& tr = fs.tree(t);
        NodeId u = tr.parent(e.rep[t]);
        d[t] = tr.depth(u);
        NodeId w = u;
        while (true) {
          NodeId next = kNoNode;
          int inside = 0;
          for (NodeId ch : tr.children(w)) {
            if (fs.component_of(t, ch) == c) {
              ++inside;
              next = ch;
            }
          }
          if (inside != 1) break;
          w = next;
        }
        std::vector<std::string> cl;
        std::vector<NodeId> stack{w};
        while (!stack.empty()) {
          NodeId x = stack.back();
          stack.pop_back();
          if (tr.is_leaf(x) && in_block.count(tr.label(x))) cl.push_back(tr.label(x));
          for (NodeId ch : tr.children(x)) stack.push_back(ch);
        }
        std::sort(cl.begin(), cl.end());
        auto it = ex.by_cluster.find(cl);
        if (it == ex.by_cluster.end()) throw InternalInconsistency("attachment point outside " + comp.name);
        if (target != kNoNode && target != it->second)
          return Rejection{RejectReason::BranchConflict, "edge " + std::to_string(i) + " below " + comp.name};
        target = it->second;
      }
      groups[target].push_back(i);
      depth[i] = d;
    }

    for (auto& [w, es] : groups) {
      // D_f: g before g' when some tree attaches g higher on f.
      std::map<int, std::set<int>> succ;
      std::map<int, int> indeg;
      for (int i : es) indeg[i] = 0;
      for (int t = 0; t < 3; ++t) {
        std::vector<std::pair<int, int>> along;
        for (int i : es)
          if (depth[i][t] >= 0) along.emplace_back(depth[i][t], i);
        std::sort(along.begin(), along.end());
        for (std::size_t j = 1; j < along.size(); ++j)
          if (succ[along[j - 1].second].insert(along[j].second).second) ++indeg[along[j].second];
      }
      std::priority_queue<int, std::vector<int>, std::greater<>> ready;
      for (auto [i, d] : indeg)
        if (d == 0) ready.push(i);
      std::vector<int> order;
      while (!ready.empty()) {
        int i = ready.top();
        ready.pop();
        order.push_back(i);
        for (int j : succ[i])
          if (--indeg[j] == 0) ready.push(j);
      }
      if (order.size() != es.size())
        return Rejection{RejectReason::CyclicAttachOrder, "edges below " + comp.name + " cannot be ordered"};

      EdgeId f = ex.parent_edge.at(w);
      NodeId prev = h.edge(f).from;
      h.remove_edge(f);
      for (int i : order) {
        NodeId sub = h.add_node();
        h.add_edge(prev, sub, kAllColours);
        h.add_edge(sub, top[sig.edges[i].bottom], sig.edges[i].colours);
        prev = sub;
      }
      ex.parent_edge[w] = h.add_edge(prev, w, kAllColours);
      if (trace) {
        nlohmann::ordered_json a;
        std::string name;
        for (const auto& [cl, node] : ex.by_cluster) {
          if (node != w) continue;
          for (const auto& l : cl) name += (name.empty() ? "" : ",") + l;
        }
        a["edge"] = name;
        a["order"] = order;
        tj["attach"].push_back(a);
      }
    }
    if (trace) trace(tj.dump());
  }
  return h.compacted();
}

std::variant<Cnet, Rejection> reconstruct_cnet(const Description& d, const SignatureOptions& options) {
  auto sig = build_signature(d, options);
  if (auto* r = std::get_if<Rejection>(&sig)) return *r;
  auto h = expand_components(std::get<Signature>(sig), *d.fstar, options.trace);
  if (auto* r = std::get_if<Rejection>(&h)) return *r;
  auto report = validate_cnet(std::get<Cnet>(h), d.fstar->trees());
  if (!report.ok()) throw InternalInconsistency("reconstructed CNET fails " + report.summary());
  return h;
}

namespace {

class Search {
 public:
  Search(const std::shared_ptr<const ExtendedAaf>& fs, int k, const std::function<bool(const CnetFound&)>& accept,
         const CnetSearchControl& control)
      : fs_(fs), k_(k), accept_(accept), control_(control), ctx_(*fs), builder_(ctx_) {
    for (const auto& c : fs->components()) lists_.push_back(enumerate_wiring_guesses(root_kind(c), c.tree));
    if (control.seed) rng_.emplace(*control.seed);
  }

  CnetSearchStats run() {
    State s(ctx_);
    dfs(s);
    return stats_;
  }

 private:
  void reject(const Rejection& r) { ++stats_.rejections[r.reason]; }

  void dfs(const State& s) {
    if (stop_) return;
    if (control_.should_stop && control_.should_stop()) {
      stop_ = true;
      return;
    }
    ++stats_.states;
    if (s.remaining == 0) {
      complete(s);
      return;
    }
    auto free = builder_.free_components(s);
    if (free.empty()) {
      reject({RejectReason::NoFreeNode, ""});
      return;
    }
    int c = free[0];
    if (rng_) c = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(*rng_)];
    const Component& comp = fs_->component(c);
    const ColourSet need = comp.kind == ComponentKind::INode ? builder_.child_colours(s, c) : 0;
    for (const auto& g : lists_[c]) {
      if (comp.kind == ComponentKind::INode && g.colours() != need) continue;
      if (s.cost + static_cast<int>(g.parts.size()) - 1 > k_ && !g.parts.empty()) continue;
      State next = s;
      if (auto r = builder_.process(next, c, g, nullptr, nullptr)) {
        reject(*r);
        continue;
      }
      if (next.cost > k_) continue;
      dfs(next);
      if (stop_) return;
    }
  }

  void complete(const State& s) {
    if (auto r = builder_.finish(s)) {
      reject(*r);
      return;
    }
    ++stats_.signatures;
    Signature sig = builder_.signature(s);
    auto h = expand_components(sig, *fs_);
    if (auto* r = std::get_if<Rejection>(&h)) {
      reject(*r);
      return;
    }
    auto report = validate_cnet(std::get<Cnet>(h), fs_->trees());
    if (!report.ok()) throw InternalInconsistency("reconstructed CNET fails " + report.summary());
    ++stats_.cnets;
    CnetFound found{std::move(std::get<Cnet>(h)), sig, Description{fs_, sig.guesses}};
    if (accept_(found)) stop_ = true;
  }

  std::shared_ptr<const ExtendedAaf> fs_;
  int k_;
  const std::function<bool(const CnetFound&)>& accept_;
  const CnetSearchControl& control_;
  Context ctx_;
  Builder builder_;
  std::vector<std::vector<WiringGuess>> lists_;
  CnetSearchStats stats_;
  std::optional<std::mt19937_64> rng_;
  bool stop_ = false;
};

}  // namespace

CnetSearchStats search_cnets(const std::shared_ptr<const ExtendedAaf>& fs, int k,
                             const std::function<bool(const CnetFound&)>& accept, const CnetSearchControl& control) {
  return Search(fs, k, accept, control).run();
}

}  // namespace hybnet
