#include "hybnet/network.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hybnet/errors.hpp"
#include "hybnet/newick.hpp"

namespace hybnet {

std::string colour_name(int t) { return "T" + std::to_string(t + 1); }

NodeId Dag::add_node(std::string label) {
  labels_.push_back(std::move(label));
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<NodeId>(labels_.size()) - 1;
}

EdgeId Dag::add_edge(NodeId from, NodeId to, ColourSet colours) {
  edges_.push_back(DagEdge{from, to, colours, true});
  EdgeId e = static_cast<EdgeId>(edges_.size()) - 1;
  out_[from].push_back(e);
  in_[to].push_back(e);
  return e;
}

void Dag::remove_edge(EdgeId e) {
  auto& ed = edges_[e];
  if (!ed.alive) return;
  ed.alive = false;
  std::erase(out_[ed.from], e);
  std::erase(in_[ed.to], e);
}

void Dag::set_head(EdgeId e, NodeId to) {
  std::erase(in_[edges_[e].to], e);
  edges_[e].to = to;
  in_[to].push_back(e);
}

void Dag::set_tail(EdgeId e, NodeId from) {
  std::erase(out_[edges_[e].from], e);
  edges_[e].from = from;
  out_[from].push_back(e);
}

int Dag::edge_count() const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const DagEdge& e) { return e.alive; }));
}

std::vector<NodeId> Dag::roots() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count(); ++v)
    if (is_live(v) && in_[v].empty()) out.push_back(v);
  return out;
}

std::optional<NodeId> Dag::find_label(std::string_view label) const {
  for (NodeId v = 0; v < node_count(); ++v)
    if (labels_[v] == label) return v;
  return std::nullopt;
}

std::optional<std::vector<NodeId>> Dag::topological_order() const {
  const int n = node_count();
  std::vector<int> indeg(n);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  int live = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (!is_live(v)) continue;
    ++live;
    indeg[v] = static_cast<int>(in_[v].size());
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<NodeId> order;
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (EdgeId e : out_[v])
      if (--indeg[edges_[e].to] == 0) ready.push(edges_[e].to);
  }
  if (static_cast<int>(order.size()) != live) return std::nullopt;
  return order;
}

Dag Dag::compacted() const {
  Dag out;
  std::vector<NodeId> remap(node_count(), kNoNode);
  for (NodeId v = 0; v < node_count(); ++v)
    if (is_live(v)) remap[v] = out.add_node(labels_[v]);
  for (const auto& e : edges_)
    if (e.alive) out.add_edge(remap[e.from], remap[e.to], e.colours);
  return out;
}

int hybridization_number(const Dag& g) {
  int k = 0;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.indeg(v) >= 2) k += g.indeg(v) - 1;
  return k;
}

namespace {

// Sorted-child encoding of the tree formed by the edges accepted by `use`
// below v, with degree-2 nodes suppressed. Unlabelled dead ends vanish when
// `prune` is set and make the result nullopt otherwise.
std::optional<std::string> encode_subgraph(const Dag& g, NodeId v,
                                           const std::function<bool(EdgeId)>& use, bool prune) {
  std::vector<std::string> parts;
  bool any_child = false;
  for (EdgeId e : g.out_edges(v)) {
    if (!use(e)) continue;
    any_child = true;
    auto sub = encode_subgraph(g, g.edge(e).to, use, prune);
    if (!sub) return std::nullopt;
    if (!sub->empty()) parts.push_back(std::move(*sub));
  }
  if (!any_child) {
    if (!g.label(v).empty()) return newick_label(g.label(v));
    if (prune) return std::string{};
    return std::nullopt;
  }
  if (parts.empty()) return std::string{};
  if (parts.size() == 1) return parts[0];
  std::sort(parts.begin(), parts.end());
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += parts[i];
  }
  return s + ")";
}

std::string rho_prefix() { return newick_label(kRho) + ">"; }

std::string node_name(const Dag& g, NodeId v) {
  return g.label(v).empty() ? "node " + std::to_string(v) : g.label(v);
}

}  // namespace

bool CnetReport::violates(int condition) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const CnetViolation& v) { return v.condition == condition; });
}

std::string CnetReport::summary() const {
  static const char* names[] = {"", "(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)", "(viii)"};
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += std::string(names[v.condition]) + " " + v.witness;
  }
  return s.empty() ? "ok" : s;
}

CnetReport validate_cnet(const Cnet& h, std::span<const PhyloTree> trees) {
  CnetReport r;
  auto fail = [&](int c, std::string w) { r.violations.push_back({c, std::move(w)}); };

  const bool acyclic = h.is_acyclic();
  if (!acyclic) fail(1, "graph has a directed cycle");

  for (NodeId v : h.roots())
    if (h.outdeg(v) != 1) fail(2, "root " + node_name(h, v) + " has " + std::to_string(h.outdeg(v)) + " children");

  std::set<std::string> taxa;
  if (!trees.empty())
    for (const auto& x : trees[0].taxa()) taxa.insert(x);
  std::set<std::string> seen;
  for (NodeId v = 0; v < h.node_count(); ++v) {
    if (!h.is_live(v)) continue;
    bool sink = h.outdeg(v) == 0;
    const auto& l = h.label(v);
    if (sink && l.empty()) fail(3, "unlabelled sink " + node_name(h, v));
    if (!l.empty()) {
      if (!sink) fail(3, "labelled node " + l + " is not a sink");
      if (!seen.insert(l).second) fail(3, "label " + l + " used twice");
      if (!taxa.count(l)) fail(3, "label " + l + " is not a taxon");
    }
  }
  for (const auto& x : taxa)
    if (!seen.count(x)) fail(3, "taxon " + x + " missing");

  for (EdgeId e = 0; e < h.edge_capacity(); ++e) {
    const auto& ed = h.edge(e);
    if (!ed.alive) continue;
    if ((ed.colours & kAllColours) == 0)
      fail(6, "edge " + node_name(h, ed.from) + "->" + node_name(h, ed.to) + " has no colour");
  }

  for (std::size_t t = 0; t < trees.size(); ++t) {
    const int ti = static_cast<int>(t);
    std::vector<int> in_t(h.node_count(), 0), out_t(h.node_count(), 0);
    bool touches_root = false;
    for (EdgeId e = 0; e < h.edge_capacity(); ++e) {
      const auto& ed = h.edge(e);
      if (!ed.alive || !has_colour(ed.colours, ti)) continue;
      ++in_t[ed.to];
      ++out_t[ed.from];
      if (h.indeg(ed.from) == 0) touches_root = true;
    }
    if (!touches_root) fail(5, "image of " + colour_name(ti) + " has no root edge");
    if (!acyclic) {
      fail(4, "image of " + colour_name(ti) + " not checked on a cyclic graph");
      continue;
    }
    std::vector<NodeId> tops;
    std::string problem;
    for (NodeId v = 0; v < h.node_count(); ++v) {
      if (in_t[v] + out_t[v] == 0) continue;
      if (in_t[v] > 1) problem = node_name(h, v) + " has two " + colour_name(ti) + " in-edges";
      if (in_t[v] == 0) tops.push_back(v);
    }
    if (problem.empty() && tops.size() != 1) problem = "image has " + std::to_string(tops.size()) + " tops";
    if (problem.empty() && out_t[tops[0]] != 1) problem = "image top does not have a single child";
    if (problem.empty()) {
      auto use = [&](EdgeId e) { return has_colour(h.edge(e).colours, ti); };
      auto enc = encode_subgraph(h, tops[0], use, false);
      if (!enc)
        problem = "image has an unlabelled dead end";
      else if (rho_prefix() + *enc != canonical_form(trees[t]))
        problem = "image is not isomorphic to the tree";
    }
    if (!problem.empty()) fail(4, colour_name(ti) + ": " + problem);
  }

  for (NodeId v = 0; v < h.node_count(); ++v) {
    if (!h.is_live(v) || h.indeg(v) == 0 || h.outdeg(v) == 0) continue;
    if (h.outdeg(v) != 2) {
      fail(7, node_name(h, v) + " has " + std::to_string(h.outdeg(v)) + " children");
      continue;
    }
    ColourSet a = h.edge(h.out_edges(v)[0]).colours, b = h.edge(h.out_edges(v)[1]).colours;
    if ((a & b) == 0) fail(8, node_name(h, v) + " has no colour on both child edges");
  }
  return r;
}

bool is_binary_network(const Network& n) {
  if (!n.is_acyclic()) return false;
  auto roots = n.roots();
  if (roots.size() != 1) return false;
  std::set<std::string> labels;
  for (NodeId v = 0; v < n.node_count(); ++v) {
    if (!n.is_live(v)) continue;
    const int in = n.indeg(v), out = n.outdeg(v);
    if (v == roots[0]) {
      if (!n.label(v).empty() || out != 1) return false;
      continue;
    }
    if (out == 0) {
      if (n.label(v).empty() || in != 1 || !labels.insert(n.label(v)).second) return false;
      continue;
    }
    if (!n.label(v).empty()) return false;
    if (!((in == 1 && out == 2) || (in == 2 && out == 1))) return false;
  }
  return true;
}

Network induce_network(const Cnet& input) {
  if (!input.is_acyclic()) throw InvalidCnet("graph has a directed cycle");
  Dag g = input;
  auto union_of = [&](const std::vector<EdgeId>& es) {
    ColourSet c = 0;
    for (EdgeId e : es) c |= g.edge(e).colours;
    return c;
  };

  // Nodes that are both reticulation and split node become x_t -> x_b.
  for (NodeId v = 0, n = g.node_count(); v < n; ++v) {
    if (g.indeg(v) < 2 || g.outdeg(v) < 2) continue;
    auto outs = g.out_edges(v);
    NodeId xb = g.add_node();
    for (EdgeId e : outs) g.set_tail(e, xb);
    g.add_edge(v, xb, union_of(outs));
  }

  // In-degree d >= 3 becomes a chain of d-1 binary reticulations.
  for (NodeId v = 0, n = g.node_count(); v < n; ++v) {
    const int d = g.indeg(v);
    if (d < 3) continue;
    auto ins = g.in_edges(v);
    NodeId c = g.add_node();
    g.set_head(ins[0], c);
    g.set_head(ins[1], c);
    for (int i = 2; i < d - 1; ++i) {
      NodeId next = g.add_node();
      g.add_edge(c, next, union_of(g.in_edges(c)));
      g.set_head(ins[i], next);
      c = next;
    }
    g.add_edge(c, v, union_of(g.in_edges(c)));
  }

  // Combine roots: r1's child edge moves to r2, then r1 -> r2.
  while (true) {
    auto roots = g.roots();
    if (roots.size() < 2) break;
    NodeId r1 = roots[0], r2 = roots[1];
    if (g.outdeg(r1) != 1 || g.outdeg(r2) != 1) throw InvalidCnet("root without exactly one child");
    EdgeId e = g.out_edges(r1)[0];
    ColourSet c = g.edge(e).colours;
    g.set_tail(e, r2);
    g.add_edge(r1, r2, c | g.edge(g.out_edges(r2)[0]).colours);
  }

  // Leaves with several parents get a private reticulation x'.
  for (NodeId v = 0, n = g.node_count(); v < n; ++v) {
    if (g.label(v).empty() || g.indeg(v) < 2) continue;
    auto ins = g.in_edges(v);
    NodeId x = g.add_node();
    for (EdgeId e : ins) g.set_head(e, x);
    g.add_edge(x, v, union_of(ins));
  }

  Network out = g.compacted();
  if (!is_binary_network(out)) throw InvalidCnet("induced network is not binary");
  return out;
}

bool displays(const Network& n, const PhyloTree& t) {
  std::vector<NodeId> ret;
  for (NodeId v = 0; v < n.node_count(); ++v)
    if (n.indeg(v) >= 2) ret.push_back(v);
  const int k = hybridization_number(n);
  if (k > 25) throw TooManyReticulations(k);
  auto roots = n.roots();
  if (roots.size() != 1) return false;

  const std::string target = canonical_form(t);
  // chosen[v] is the index of the selected in-edge of reticulation v.
  std::vector<int> chosen(n.node_count(), 0);
  std::vector<char> allowed(n.edge_capacity(), 0);
  auto use = [&](EdgeId e) { return allowed[e] != 0; };
  while (true) {
    for (EdgeId e = 0; e < n.edge_capacity(); ++e) {
      const auto& ed = n.edge(e);
      allowed[e] = ed.alive && (n.indeg(ed.to) < 2 || n.in_edges(ed.to)[chosen[ed.to]] == e);
    }
    auto enc = encode_subgraph(n, roots[0], use, true);
    if (enc && rho_prefix() + *enc == target) return true;
    // Mixed-radix increment over the reticulations.
    std::size_t i = 0;
    for (; i < ret.size(); ++i) {
      if (++chosen[ret[i]] < n.indeg(ret[i])) break;
      chosen[ret[i]] = 0;
    }
    if (i == ret.size()) return false;
  }
}

Forest deletion_forest(const Network& n) {
  std::vector<NodeId> uf(n.node_count());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<NodeId(NodeId)> find = [&](NodeId v) { return uf[v] == v ? v : uf[v] = find(uf[v]); };
  for (EdgeId e = 0; e < n.edge_capacity(); ++e) {
    const auto& ed = n.edge(e);
    if (ed.alive && n.indeg(ed.to) < 2) uf[find(ed.from)] = find(ed.to);
  }
  std::map<NodeId, std::vector<std::string>> groups;
  for (NodeId v = 0; v < n.node_count(); ++v)
    if (!n.label(v).empty()) groups[find(v)].push_back(n.label(v));
  auto roots = n.roots();
  if (!roots.empty()) groups[find(roots[0])].push_back(kRho);
  std::vector<std::vector<std::string>> blocks;
  for (auto& [rep, b] : groups) blocks.push_back(std::move(b));
  return Forest(std::move(blocks));
}

Format parse_format(std::string_view name) {
  if (name == "enewick") return Format::ENewick;
  if (name == "dot") return Format::Dot;
  if (name == "json") return Format::Json;
  throw UnsupportedFormat(std::string(name));
}

namespace {

std::string emit_enewick(const Dag& g) {
  auto roots = g.roots();
  if (roots.size() != 1) throw UnsupportedFormat("eNewick needs a single root, graph has " + std::to_string(roots.size()));
  std::map<NodeId, int> tags;
  std::function<std::string(NodeId)> encode = [&](NodeId v) -> std::string {
    std::string tag;
    if (g.indeg(v) >= 2) {
      auto [it, fresh] = tags.emplace(v, static_cast<int>(tags.size()) + 1);
      tag = "#H" + std::to_string(it->second);
      if (!fresh) return tag;
    }
    if (g.outdeg(v) == 0) return newick_label(g.label(v)) + tag;
    std::string s = "(";
    bool first = true;
    for (EdgeId e : g.out_edges(v)) {
      if (!first) s += ',';
      first = false;
      s += encode(g.edge(e).to);
    }
    return s + ")" + tag;
  };
  NodeId top = roots[0];
  if (g.outdeg(top) == 1) top = g.edge(g.out_edges(top)[0]).to;
  std::string body = encode(top);
  if (g.outdeg(top) == 0 && g.indeg(top) < 2) body = "(" + body + ")";
  return body + ";";
}

const char* dot_colour(ColourSet c) {
  static const char* palette[] = {"black", "red", "green3", "gold3", "blue", "magenta", "cyan3", "gray40"};
  return palette[c & kAllColours];
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string emit_dot(const Dag& g) {
  auto order = g.topological_order();
  std::vector<NodeId> nodes;
  if (order) {
    nodes = *order;
  } else {
    for (NodeId v = 0; v < g.node_count(); ++v) nodes.push_back(v);
  }
  std::ostringstream os;
  os << "digraph network {\n";
  for (NodeId v : nodes) {
    os << "  n" << v;
    if (g.label(v).empty())
      os << " [label=\"\", shape=" << (g.indeg(v) == 0 ? "point" : "circle") << ", width=0.15];\n";
    else
      os << " [label=" << dot_quote(g.label(v)) << ", shape=plaintext];\n";
  }
  for (NodeId v : nodes) {
    for (EdgeId e : g.out_edges(v)) {
      const auto& ed = g.edge(e);
      os << "  n" << ed.from << " -> n" << ed.to << " [color=" << dot_colour(ed.colours) << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string emit_json(const Dag& g) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    nlohmann::ordered_json node;
    node["id"] = v;
    if (!g.label(v).empty()) node["label"] = g.label(v);
    j["nodes"].push_back(node);
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
    const auto& ed = g.edge(e);
    if (!ed.alive) continue;
    nlohmann::ordered_json edge;
    edge["from"] = ed.from;
    edge["to"] = ed.to;
    edge["colours"] = nlohmann::ordered_json::array();
    for (int t = 0; t < 3; ++t)
      if (has_colour(ed.colours, t)) edge["colours"].push_back(colour_name(t));
    j["edges"].push_back(edge);
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string emit(const Dag& g, Format format) {
  Dag c = g.compacted();
  switch (format) {
    case Format::ENewick:
      return emit_enewick(c);
    case Format::Dot:
      return emit_dot(c);
    case Format::Json:
      return emit_json(c);
  }
  throw UnsupportedFormat("unknown");
}

Network parse_enewick(std::string_view text) {
  detail::NewickNode syntax = detail::parse_newick_syntax(text);
  Dag g;
  std::map<std::string, NodeId> hybrids;
  std::set<NodeId> defined;
  std::set<std::string> labels;
  auto add_label = [&](NodeId v, const std::string& l) {
    if (l.empty()) return;
    if (!g.label(v).empty() && g.label(v) != l) throw SyntaxError("hybrid node named twice");
    if (g.label(v).empty() && !labels.insert(l).second) throw DuplicateLabel(l);
    g.set_label(v, l);
  };

  std::function<NodeId(const detail::NewickNode&)> build = [&](const detail::NewickNode& s) -> NodeId {
    auto hash = s.label.find('#');
    NodeId v;
    if (hash != std::string::npos) {
      std::string tag = s.label.substr(hash + 1);
      if (tag.empty()) throw SyntaxError("empty hybrid tag");
      auto [it, fresh] = hybrids.emplace(tag, kNoNode);
      if (fresh) it->second = g.add_node();
      v = it->second;
      if (s.children.empty()) {
        add_label(v, s.label.substr(0, hash));
        return v;
      }
      if (!defined.insert(v).second) throw SyntaxError("hybrid #" + tag + " defined twice");
    } else {
      v = g.add_node();
      if (s.children.empty()) add_label(v, s.label);
    }
    for (const auto& c : s.children) g.add_edge(v, build(c));
    return v;
  };

  NodeId top = build(syntax);
  NodeId root = g.add_node();
  g.add_edge(root, top);
  for (const auto& [tag, v] : hybrids)
    if (g.outdeg(v) == 0 && g.label(v).empty()) throw SyntaxError("hybrid #" + tag + " has no definition");
  if (!g.is_acyclic()) throw SyntaxError("eNewick describes a cyclic graph");

  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == root || !g.label(v).empty() || g.indeg(v) != 1 || g.outdeg(v) != 1) continue;
    EdgeId in = g.in_edges(v)[0], out = g.out_edges(v)[0];
    NodeId child = g.edge(out).to;
    g.remove_edge(out);
    g.set_head(in, child);
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.is_live(v) && g.outdeg(v) == 0 && g.label(v).empty()) throw SyntaxError("unlabelled leaf");
  return g.compacted();
}

Dag dag_from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    Dag g;
    std::map<long long, NodeId> ids;
    std::set<std::string> labels;
    for (const auto& node : j.at("nodes")) {
      std::string label = node.value("label", std::string{});
      if (!label.empty() && !labels.insert(label).second) throw DuplicateLabel(label);
      if (!ids.emplace(node.at("id").get<long long>(), g.add_node(label)).second)
        throw SyntaxError("duplicate node id in JSON");
    }
    for (const auto& edge : j.at("edges")) {
      auto from = ids.find(edge.at("from").get<long long>());
      auto to = ids.find(edge.at("to").get<long long>());
      if (from == ids.end() || to == ids.end()) throw SyntaxError("edge refers to an unknown node");
      ColourSet c = 0;
      if (edge.contains("colours")) {
        for (const auto& name : edge.at("colours")) {
          auto s = name.get<std::string>();
          if (s == "T1") c |= colour_bit(0);
          else if (s == "T2") c |= colour_bit(1);
          else if (s == "T3") c |= colour_bit(2);
          else throw SyntaxError("unknown colour " + s);
        }
      }
      g.add_edge(from->second, to->second, c);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("network JSON: ") + e.what());
  }
}

Network parse_network(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return dag_from_json(text);
  // eNewick: the first non-comment, non-empty line.
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    auto f = line.find_first_not_of(" \t\r");
    if (f != std::string_view::npos && line[f] != '#') return parse_enewick(line);
    start = end + 1;
  }
  throw SyntaxError("no network found");
}

Network network_from_tree(const PhyloTree& t, ColourSet colours) {
  Dag g;
  std::vector<NodeId> map(t.size());
  for (NodeId v = 0; v < t.size(); ++v) map[v] = g.add_node(t.label(v) == kRho ? std::string{} : t.label(v));
  // Preorder keeps each node's children in the tree's order.
  std::vector<NodeId> stack;
  if (!t.empty()) stack.push_back(t.root());
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    const auto& kids = t.children(v);
    for (NodeId c : kids) g.add_edge(map[v], map[c], colours);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  if (!t.empty() && !t.has_rho()) {
    NodeId r = g.add_node();
    g.add_edge(r, map[t.root()], colours);
  }
  return g;
}

Network expand_map(const Network& input, const TaxonMap& m) {
  Dag g = input;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!is_synthetic_label(g.label(v))) continue;
    auto it = m.entries.find(g.label(v));
    if (it == m.entries.end()) throw MissingSubstitution(g.label(v));
    ColourSet c = 0;
    for (EdgeId e : g.in_edges(v)) c |= g.edge(e).colours;
    g.set_label(v, {});
    if (const auto* sub = std::get_if<PhyloTree>(&it->second)) {
      std::function<void(NodeId, NodeId)> copy = [&](NodeId into, NodeId u) {
        for (NodeId child : sub->children(u)) {
          NodeId w = g.add_node(sub->is_leaf(child) ? sub->label(child) : std::string{});
          g.add_edge(into, w, c);
          copy(w, child);
        }
      };
      if (sub->is_leaf(sub->root()))
        g.set_label(v, sub->label(sub->root()));
      else
        copy(v, sub->root());
    } else {
      const auto& cs = std::get<ChainSubstitution>(it->second);
      const auto& taxa = cs.chain.taxa;
      if (cs.form == ChainForm::Path) throw InputError("chain in path form cannot be expanded inside a network");
      if (cs.form == ChainForm::Single || taxa.size() == 1) {
        g.set_label(v, taxa[0]);
      } else {
        NodeId below = g.add_node(taxa[0]);
        for (std::size_t i = 1; i + 1 < taxa.size(); ++i) {
          NodeId p = g.add_node();
          g.add_edge(p, g.add_node(taxa[i]), c);
          g.add_edge(p, below, c);
          below = p;
        }
        g.add_edge(v, g.add_node(taxa.back()), c);
        g.add_edge(v, below, c);
      }
    }
  }
  return g.compacted();
}

}  // namespace hybnet
