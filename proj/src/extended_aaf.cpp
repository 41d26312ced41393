#include "hybnet/extended_aaf.hpp"

#include <algorithm>
#include <bit>

#include <json.hpp>

#include "hybnet/errors.hpp"

namespace hybnet {

std::vector<NodeId> invisible_nodes(const PhyloTree& t, const Forest& f) {
  std::vector<char> seen(t.size(), 0);
  for (const auto& b : f.blocks())
    for (NodeId v : span_nodes(t, b)) seen[v] = 1;
  std::vector<NodeId> out;
  for (NodeId v : t.preorder())
    if (!seen[v]) out.push_back(v);
  return out;
}

namespace {

std::string cluster_name(const PhyloTree& t, NodeId v) {
  std::vector<std::string> leaves;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (t.is_leaf(u)) leaves.push_back(t.label(u));
    for (NodeId c : t.children(u)) stack.push_back(c);
  }
  std::sort(leaves.begin(), leaves.end());
  std::string s;
  for (const auto& l : leaves) s += (s.empty() ? "" : ",") + l;
  return s;
}

}  // namespace

ExtendedAaf::ExtendedAaf(std::shared_ptr<const TreeTriple> trees, Forest aaf)
    : trees_(std::move(trees)), aaf_(std::move(aaf)) {
  if (!trees_ || trees_->size() != 3) throw InputError("an extended AAF needs exactly three trees");
  for (int b = 0; b < aaf_.size(); ++b) {
    Component c;
    c.block = b;
    c.rho = std::binary_search(aaf_.block(b).begin(), aaf_.block(b).end(), kRho);
    for (int t = 0; t < 3; ++t) c.rep[t] = block_root(tree(t), aaf_.block(b));
    for (const auto& l : aaf_.block(b)) c.name += (c.name.empty() ? "{" : ",") + l;
    c.name += "}";
    if (c.rho) rho_ = b;
    components_.push_back(std::move(c));
  }
  for (int t = 0; t < 3; ++t) {
    owner_[t].assign(tree(t).size(), -1);
    for (int b = 0; b < aaf_.size(); ++b)
      for (NodeId v : span_nodes(tree(t), aaf_.block(b))) owner_[t][v] = b;
  }
  for (int t = 0; t < 3; ++t) {
    invisible_[t] = invisible_nodes(tree(t), aaf_);
    for (NodeId v : invisible_[t]) {
      Component c;
      c.kind = ComponentKind::INode;
      c.tree = t;
      c.rep[t] = v;
      c.name = colour_name(t) + "[" + cluster_name(tree(t), v) + "]";
      owner_[t][v] = static_cast<int>(components_.size());
      components_.push_back(std::move(c));
    }
  }
}

int ExtendedAaf::invisible_count() const {
  return static_cast<int>(invisible_[0].size() + invisible_[1].size() + invisible_[2].size());
}

std::vector<std::vector<int>> descendant_dag(const ExtendedAaf& fstar) {
  std::vector<std::vector<int>> adj(fstar.size());
  for (int c = 0; c < fstar.size(); ++c) {
    for (int t = 0; t < 3; ++t) {
      NodeId r = fstar.component(c).rep[t];
      if (r == kNoNode) continue;
      NodeId p = fstar.tree(t).parent(r);
      if (p != kNoNode) adj[c].push_back(fstar.component_of(t, p));
    }
    std::sort(adj[c].begin(), adj[c].end());
    adj[c].erase(std::unique(adj[c].begin(), adj[c].end()), adj[c].end());
  }
  return adj;
}

ColourSet WiringGuess::colours() const {
  ColourSet c = 0;
  for (const auto& p : parts) c |= p.colours;
  return c;
}

RootKind root_kind(const Component& c) {
  if (c.kind == ComponentKind::INode) return RootKind::INode;
  return c.rho ? RootKind::Rho : RootKind::AafRoot;
}

std::vector<WiringGuess> enumerate_wiring_guesses(RootKind kind, int tree) {
  if (kind == RootKind::Rho) return {WiringGuess{}};
  std::vector<WiringGuess> out;
  for (ColourSet u = 1; u <= kAllColours; ++u) {
    if (kind == RootKind::INode && !has_colour(u, tree)) continue;
    if (kind == RootKind::AafRoot && u != kAllColours) continue;
    std::vector<int> members;
    for (int t = 0; t < 3; ++t)
      if (has_colour(u, t)) members.push_back(t);
    // Set partitions via restricted growth strings.
    const int m = static_cast<int>(members.size());
    std::vector<int> rgs(m, 0);
    while (true) {
      int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
      std::vector<ColourSet> part(blocks, 0);
      for (int i = 0; i < m; ++i) part[rgs[i]] |= colour_bit(members[i]);
      // Every choice of split colour per part.
      std::vector<int> pick(blocks, 0);
      while (true) {
        WiringGuess g;
        for (int b = 0; b < blocks; ++b) {
          int seen = 0;
          for (int t = 0; t < 3; ++t) {
            if (!has_colour(part[b], t)) continue;
            if (seen++ == pick[b]) g.parts.push_back({part[b], t});
          }
        }
        out.push_back(std::move(g));
        int b = blocks - 1;
        for (; b >= 0; --b) {
          if (++pick[b] < std::popcount(static_cast<unsigned>(part[b]))) break;
          pick[b] = 0;
        }
        if (b < 0) break;
      }
      // Next restricted growth string.
      int i = m - 1;
      for (; i > 0; --i) {
        int mx = *std::max_element(rgs.begin(), rgs.begin() + i);
        if (rgs[i] <= mx) {
          ++rgs[i];
          std::fill(rgs.begin() + i + 1, rgs.end(), 0);
          break;
        }
      }
      if (i <= 0) break;
    }
  }
  return out;
}

std::string guess_to_string(const WiringGuess& g) {
  if (g.parts.empty()) return "-";
  std::string s;
  for (const auto& p : g.parts) {
    if (!s.empty()) s += " + ";
    s += "{";
    bool first = true;
    for (int t = 0; t < 3; ++t) {
      if (!has_colour(p.colours, t)) continue;
      if (!first) s += ",";
      first = false;
      s += colour_name(t);
    }
    s += "}/" + colour_name(p.split);
  }
  return s;
}

std::uint64_t enumerate_guess_products(const std::vector<std::pair<RootKind, int>>& roots,
                                       const std::function<bool(const std::vector<WiringGuess>&)>& fn) {
  const std::size_t n = roots.size();
  std::vector<std::vector<WiringGuess>> lists;
  for (auto [kind, tree] : roots) lists.push_back(enumerate_wiring_guesses(kind, tree));
  std::vector<std::size_t> idx(n, 0);
  std::vector<WiringGuess> current(n);
  std::uint64_t count = 0;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) current[i] = lists[i][idx[i]];
    ++count;
    if (!fn(current)) return count;
    std::size_t i = n;
    for (; i > 0; --i) {
      if (++idx[i - 1] < lists[i - 1].size()) break;
      idx[i - 1] = 0;
    }
    if (i == 0) return count;
  }
}

std::uint64_t enumerate_descriptions(const std::shared_ptr<const ExtendedAaf>& fstar,
                                     const std::function<bool(const Description&)>& fn, int k) {
  if (k >= 1) {
    for (int t = 0; t < 3; ++t)
      if (static_cast<int>(fstar->invisible(t).size()) > k - 1) return 0;
  }
  std::vector<std::pair<RootKind, int>> roots;
  for (const auto& c : fstar->components()) roots.emplace_back(root_kind(c), c.tree);
  Description d{fstar, {}};
  return enumerate_guess_products(roots, [&](const std::vector<WiringGuess>& g) {
    d.guesses = g;
    return fn(d);
  });
}

std::string description_to_json(const Description& d) {
  nlohmann::ordered_json j;
  j["components"] = nlohmann::ordered_json::array();
  const auto& fs = *d.fstar;
  for (int c = 0; c < fs.size(); ++c) {
    const auto& comp = fs.component(c);
    nlohmann::ordered_json e;
    e["id"] = c;
    e["name"] = comp.name;
    e["kind"] = comp.kind == ComponentKind::INode ? "invisible" : (comp.rho ? "rho" : "aaf");
    nlohmann::ordered_json reps = nlohmann::ordered_json::object();
    for (int t = 0; t < 3; ++t)
      if (comp.rep[t] != kNoNode) reps[colour_name(t)] = comp.rep[t];
    e["reps"] = reps;
    e["guess"] = nlohmann::ordered_json::array();
    if (c < static_cast<int>(d.guesses.size())) {
      for (const auto& p : d.guesses[c].parts) {
        nlohmann::ordered_json part;
        part["colours"] = nlohmann::ordered_json::array();
        for (int t = 0; t < 3; ++t)
          if (has_colour(p.colours, t)) part["colours"].push_back(colour_name(t));
        part["split"] = colour_name(p.split);
        e["guess"].push_back(part);
      }
    }
    j["components"].push_back(e);
  }
  return j.dump();
}

}  // namespace hybnet
