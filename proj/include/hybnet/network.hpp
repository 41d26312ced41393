#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybnet/forest.hpp"
#include "hybnet/phylo_tree.hpp"
#include "hybnet/reductions.hpp"

namespace hybnet {

// Bit t stands for the t-th input tree.
using ColourSet = std::uint8_t;
inline constexpr ColourSet kAllColours = 0b111;
inline constexpr ColourSet colour_bit(int t) { return static_cast<ColourSet>(1u << t); }
inline bool has_colour(ColourSet s, int t) { return (s >> t) & 1u; }
std::string colour_name(int t);  // "T1", "T2", "T3"

using EdgeId = int;

struct DagEdge {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  ColourSet colours = 0;
  bool alive = true;
};

// Leaf-labelled multigraph DAG with optional per-edge colour sets. Serves both
// as CNET (several roots, high in-degrees, coloured) and as the strict binary
// network produced by induce_network. Roots are unlabelled; in a finalized
// network the single root stands for ρ.
class Dag {
 public:
  NodeId add_node(std::string label = {});
  EdgeId add_edge(NodeId from, NodeId to, ColourSet colours = 0);
  void remove_edge(EdgeId e);
  void set_head(EdgeId e, NodeId to);
  void set_tail(EdgeId e, NodeId from);
  void set_colours(EdgeId e, ColourSet c) { edges_[e].colours = c; }
  void set_label(NodeId v, std::string label) { labels_[v] = std::move(label); }

  int node_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const;  // live edges only
  EdgeId edge_capacity() const { return static_cast<EdgeId>(edges_.size()); }
  const DagEdge& edge(EdgeId e) const { return edges_[e]; }
  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<EdgeId>& out_edges(NodeId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(NodeId v) const { return in_[v]; }
  int indeg(NodeId v) const { return static_cast<int>(in_[v].size()); }
  int outdeg(NodeId v) const { return static_cast<int>(out_[v].size()); }
  // Nodes that still carry at least one edge, or are labelled.
  bool is_live(NodeId v) const { return !labels_[v].empty() || !in_[v].empty() || !out_[v].empty(); }

  std::vector<NodeId> roots() const;
  std::optional<NodeId> find_label(std::string_view label) const;
  // Kahn order, ties by id; nullopt when cyclic.
  std::optional<std::vector<NodeId>> topological_order() const;
  bool is_acyclic() const { return topological_order().has_value(); }
  // Copy without dead edges and isolated unlabelled nodes, ids in order.
  Dag compacted() const;

 private:
  std::vector<std::string> labels_;
  std::vector<DagEdge> edges_;
  std::vector<std::vector<EdgeId>> out_, in_;
};

using Network = Dag;
using Cnet = Dag;

int hybridization_number(const Dag& g);

struct CnetViolation {
  int condition;  // 1..8 for (i)..(viii)
  std::string witness;
};

struct CnetReport {
  std::vector<CnetViolation> violations;
  bool ok() const { return violations.empty(); }
  bool violates(int condition) const;
  std::string summary() const;
};

CnetReport validate_cnet(const Cnet& h, std::span<const PhyloTree> trees);

// Binary single-root network with the same hybridization number. Throws InvalidCnet.
Network induce_network(const Cnet& h);

// Single unlabelled root of out-degree 1, every other non-leaf of total degree 3.
bool is_binary_network(const Network& n);

bool displays(const Network& n, const PhyloTree& t);

Forest deletion_forest(const Network& n);

enum class Format { ENewick, Dot, Json };
Format parse_format(std::string_view name);  // throws UnsupportedFormat
std::string emit(const Dag& g, Format format);

Network parse_enewick(std::string_view text);
Dag dag_from_json(std::string_view text);
// Accepts either eNewick or the JSON dump.
Network parse_network(std::string_view text);

// Network from a tree; ρ becomes the unlabelled root. Edges get `colours`.
Network network_from_tree(const PhyloTree& t, ColourSet colours = 0);

// Replaces synthetic leaves by their recorded pendant subtrees.
Network expand_map(const Network& n, const TaxonMap& m);

}  // namespace hybnet
