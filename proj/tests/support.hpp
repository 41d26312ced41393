// Small independent oracles shared by the tests. They only use the raw parent
// and child arrays, never the library's canonical forms.
#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "hybnet/newick.hpp"
#include "hybnet/phylo_tree.hpp"

namespace testing {

using Cluster = std::set<std::string>;
using Clusters = std::set<Cluster>;

// Leaf sets below every node except ρ.
inline Clusters clusters(const hybnet::PhyloTree& t) {
  Clusters out;
  std::function<Cluster(hybnet::NodeId)> walk = [&](hybnet::NodeId v) {
    Cluster c;
    if (t.is_leaf(v)) {
      if (t.label(v) != hybnet::kRho) c.insert(t.label(v));
    }
    for (auto ch : t.children(v)) {
      auto s = walk(ch);
      c.insert(s.begin(), s.end());
    }
    if (!c.empty() && t.label(v) != hybnet::kRho) out.insert(c);
    return c;
  };
  walk(t.root());
  return out;
}

// Clusters of the restriction to `keep`, read off the original clusters.
inline Clusters restricted_clusters(const hybnet::PhyloTree& t, const Cluster& keep) {
  Clusters out;
  for (const auto& c : clusters(t)) {
    Cluster r;
    std::set_intersection(c.begin(), c.end(), keep.begin(), keep.end(), std::inserter(r, r.begin()));
    if (!r.empty()) out.insert(r);
  }
  return out;
}

// Clusters straight from Newick text with a separate scanner.
inline Clusters newick_clusters(const std::string& text) {
  Clusters out;
  std::vector<Cluster> stack;
  std::string name;
  Cluster last;
  auto flush = [&]() {
    if (!name.empty()) {
      last = {name};
      out.insert(last);
      name.clear();
    }
  };
  for (char ch : text) {
    if (ch == '(') {
      stack.emplace_back();
    } else if (ch == ',' || ch == ')') {
      flush();
      stack.back().insert(last.begin(), last.end());
      if (ch == ')') {
        last = stack.back();
        stack.pop_back();
        out.insert(last);
      }
    } else if (ch == ';' || ch == ' ') {
      flush();
    } else {
      name += ch;
    }
  }
  return out;
}

inline hybnet::PhyloTree tree(const std::string& s) { return hybnet::parse_newick(s); }

}  // namespace testing
