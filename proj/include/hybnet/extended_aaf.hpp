#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hybnet/forest.hpp"
#include "hybnet/network.hpp"
#include "hybnet/phylo_tree.hpp"

namespace hybnet {

using TreeTriple = std::vector<PhyloTree>;

enum class ComponentKind { Aaf, INode };

struct Component {
  ComponentKind kind = ComponentKind::Aaf;
  int block = -1;         // Aaf: index into the forest's blocks
  int tree = -1;          // INode: the tree it belongs to
  bool rho = false;       // the block holding ρ
  std::array<NodeId, 3> rep{kNoNode, kNoNode, kNoNode};  // top of T(L(C)) per tree
  std::string name;
};

// Nodes of T that lie on no path between two leaves of one block (ρ counts as a leaf).
std::vector<NodeId> invisible_nodes(const PhyloTree& t, const Forest& f);

// AAF blocks plus invisible nodes. Component ids: blocks in forest order, then
// I-nodes of the first, second and third tree in preorder.
class ExtendedAaf {
 public:
  ExtendedAaf(std::shared_ptr<const TreeTriple> trees, Forest aaf);

  const TreeTriple& trees() const { return *trees_; }
  const PhyloTree& tree(int t) const { return (*trees_)[t]; }
  const std::shared_ptr<const TreeTriple>& shared_trees() const { return trees_; }
  const Forest& aaf() const { return aaf_; }
  const std::vector<Component>& components() const { return components_; }
  const Component& component(int c) const { return components_[c]; }
  int size() const { return static_cast<int>(components_.size()); }
  int rho_component() const { return rho_; }
  const std::vector<NodeId>& invisible(int t) const { return invisible_[t]; }
  int invisible_count() const;
  // Component owning tree node v of tree t.
  int component_of(int t, NodeId v) const { return owner_[t][v]; }

 private:
  std::shared_ptr<const TreeTriple> trees_;
  Forest aaf_;
  std::vector<Component> components_;
  std::array<std::vector<NodeId>, 3> invisible_;
  std::array<std::vector<int>, 3> owner_;
  int rho_ = -1;
};

// Edge C -> C' when C' is the nearest component root above C in some tree.
std::vector<std::vector<int>> descendant_dag(const ExtendedAaf& fstar);

struct GuessPart {
  ColourSet colours = 0;
  int split = 0;  // the tree whose split node sits at the top of this edge
  friend bool operator==(const GuessPart&, const GuessPart&) = default;
};

// Parent edges of a component root's image, ordered by lowest colour.
struct WiringGuess {
  std::vector<GuessPart> parts;
  ColourSet colours() const;
  friend bool operator==(const WiringGuess&, const WiringGuess&) = default;
};

enum class RootKind { INode, AafRoot, Rho };

std::vector<WiringGuess> enumerate_wiring_guesses(RootKind kind, int tree = 0);
RootKind root_kind(const Component& c);
std::string guess_to_string(const WiringGuess& g);

struct Description {
  std::shared_ptr<const ExtendedAaf> fstar;
  std::vector<WiringGuess> guesses;  // indexed by component id
};

// Cartesian product of the guess lists for roots of the given kinds (tree is
// only read for INode), last root fastest. `fn` returns false to stop.
std::uint64_t enumerate_guess_products(const std::vector<std::pair<RootKind, int>>& roots,
                                       const std::function<bool(const std::vector<WiringGuess>&)>& fn);

// Cartesian product over the components' guess lists, last component fastest.
// With k >= 1 nothing is produced once some |I(T)| exceeds k-1.
std::uint64_t enumerate_descriptions(const std::shared_ptr<const ExtendedAaf>& fstar,
                                     const std::function<bool(const Description&)>& fn, int k = -1);

std::string description_to_json(const Description& d);

}  // namespace hybnet
