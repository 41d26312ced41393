#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hybnet/extended_aaf.hpp"
#include "hybnet/network.hpp"

namespace hybnet {

enum class RejectReason {
  NoFreeNode,
  BuddyGuessMismatch,
  BranchConflict,
  CyclicAttachOrder,
  // The guessed parent colours differ from the colours arriving from below.
  ColourFlow,
  // Colours shared by both child edges do not meet at an unused invisible node.
  InvalidBuddy,
};

std::string reason_name(RejectReason r);

struct Rejection {
  RejectReason reason;
  std::string witness;
};

struct SignatureEdge {
  int top = -1;  // -1 while the edge still hangs from a fresh root
  int bottom = -1;
  ColourSet colours = 0;
  int split = 0;  // colour of the split node at the top
  // For each colour: root of the pendant subtree of that tree the edge represents.
  std::array<NodeId, 3> rep{kNoNode, kNoNode, kNoNode};
};

struct Signature {
  std::vector<std::vector<int>> nodes;  // component ids mapped to each node
  std::vector<SignatureEdge> edges;
  std::vector<int> node_of;             // component -> node
  std::vector<int> order;               // chosen free components, in processing order
  std::vector<WiringGuess> guesses;     // guess per component
  int hybridization = 0;

  // Node and edge listing keyed by component names; equal iff equal signatures.
  std::string canonical(const ExtendedAaf& fs) const;
};

using TraceSink = std::function<void(const std::string&)>;

struct SignatureOptions {
  // Pick uniformly among free components instead of the lowest id.
  std::optional<std::uint64_t> seed;
  TraceSink trace;
};

std::variant<Signature, Rejection> build_signature(const Description& d, const SignatureOptions& options = {});
std::variant<Cnet, Rejection> expand_components(const Signature& sig, const ExtendedAaf& fs,
                                                const TraceSink& trace = {});
// Throws InternalInconsistency when the result fails validate_cnet.
std::variant<Cnet, Rejection> reconstruct_cnet(const Description& d, const SignatureOptions& options = {});

struct CnetSearchStats {
  std::uint64_t states = 0;
  std::uint64_t signatures = 0;
  std::uint64_t cnets = 0;
  std::map<RejectReason, std::uint64_t> rejections;
};

struct CnetFound {
  Cnet cnet;
  Signature signature;
  Description description;
};

struct CnetSearchControl {
  // Polled between states; returning true abandons the search.
  std::function<bool()> should_stop;
  // Picks the next free component at random instead of the lowest id.
  std::optional<std::uint64_t> seed;
};

// Explores descriptions lazily: only the guess of the next free component is
// branched on, buddies inherit it, and partial signatures whose hybridization
// number exceeds k are cut. `accept` sees every valid CNET and returns true to stop.
CnetSearchStats search_cnets(const std::shared_ptr<const ExtendedAaf>& fs, int k,
                             const std::function<bool(const CnetFound&)>& accept,
                             const CnetSearchControl& control = {});

}  // namespace hybnet
