#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "hybnet/driver.hpp"
#include "hybnet/extended_aaf.hpp"
#include "support.hpp"

using namespace hybnet;
using testing::tree;

namespace {

std::shared_ptr<const TreeTriple> triple(const char* a, const char* b, const char* c) {
  return std::make_shared<const TreeTriple>(TreeTriple{tree(a), tree(b), tree(c)});
}

// Counts guesses straight from the definition: 1-3 parts with disjoint
// nonempty colour sets, a split colour inside each part.
int count_by_definition(RootKind kind, int t) {
  std::vector<std::pair<ColourSet, int>> parts;
  for (ColourSet s = 1; s <= kAllColours; ++s)
    for (int c = 0; c < 3; ++c)
      if (has_colour(s, c)) parts.emplace_back(s, c);
  int count = 0;
  for (unsigned mask = 0; mask < (1u << parts.size()); ++mask) {
    ColourSet used = 0;
    bool ok = true;
    int n = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      if (used & parts[i].first) ok = false;
      used |= parts[i].first;
      ++n;
    }
    if (!ok) continue;
    if (kind == RootKind::Rho) count += n == 0;
    if (kind == RootKind::AafRoot) count += n >= 1 && used == kAllColours;
    if (kind == RootKind::INode) count += n >= 1 && has_colour(used, t);
  }
  return count;
}

}  // namespace

TEST_CASE("wiring guess counts") {
  for (int t = 0; t < 3; ++t) {
    CHECK(enumerate_wiring_guesses(RootKind::INode, t).size() == 17);
    CHECK(count_by_definition(RootKind::INode, t) == 17);
  }
  CHECK(enumerate_wiring_guesses(RootKind::AafRoot).size() == 10);
  CHECK(count_by_definition(RootKind::AafRoot, 0) == 10);
  CHECK(enumerate_wiring_guesses(RootKind::Rho).size() == 1);
  CHECK(enumerate_wiring_guesses(RootKind::Rho)[0].parts.empty());
  CHECK(count_by_definition(RootKind::Rho, 0) == 1);
}

TEST_CASE("I-node guesses split 1 + 3 + 3 + 10 over their colour unions") {
  for (int t = 0; t < 3; ++t) {
    std::map<ColourSet, int> by_union;
    for (const auto& g : enumerate_wiring_guesses(RootKind::INode, t)) ++by_union[g.colours()];
    CHECK(by_union.size() == 4);
    CHECK(by_union[colour_bit(t)] == 1);
    CHECK(by_union[kAllColours] == 10);
    for (auto [u, n] : by_union)
      if (std::popcount(static_cast<unsigned>(u)) == 2) CHECK(n == 3);
  }
}

TEST_CASE("every guess satisfies its invariants and none repeats") {
  for (auto kind : {RootKind::INode, RootKind::AafRoot, RootKind::Rho}) {
    std::set<std::string> seen;
    for (const auto& g : enumerate_wiring_guesses(kind, 1)) {
      CHECK(seen.insert(guess_to_string(g)).second);
      ColourSet used = 0;
      for (const auto& p : g.parts) {
        CHECK(p.colours != 0);
        CHECK((used & p.colours) == 0);
        CHECK(has_colour(p.colours, p.split));
        used |= p.colours;
      }
      CHECK(g.parts.size() <= 3);
      if (kind == RootKind::INode) CHECK(has_colour(used, 1));
      if (kind == RootKind::AafRoot) CHECK(used == kAllColours);
    }
  }
}

TEST_CASE("invisible nodes") {
  auto t = tree("((a,b),c);");
  CHECK(invisible_nodes(t, Forest({{"a", "b", "c", kRho}})).empty());
  auto inv = invisible_nodes(t, Forest({{"a"}, {"b"}, {"c"}, {kRho}}));
  CHECK(inv.size() == 2);
  for (NodeId v : inv) CHECK_FALSE(t.is_leaf(v));

  auto fs = testing::worked_fstar();
  CHECK(fs->invisible_count() == 4);
  CHECK(fs->invisible(0).size() == 1);
  CHECK(fs->invisible(1).size() == 2);
  CHECK(fs->invisible(2).size() == 1);
  CHECK(fs->component(4).name == "T1[c,d]");
  CHECK(fs->component(5).name == "T2[b,c,d]");
  CHECK(fs->component(6).name == "T2[b,c]");
  CHECK(fs->component(7).name == "T3[c,d]");
}

TEST_CASE("single block has no invisible nodes on random trees") {
  for (int s = 0; s < 50; ++s) {
    auto t = random_tree(2 + s, s);
    CHECK(invisible_nodes(t, Forest({t.labels()})).empty());
  }
}

TEST_CASE("descendant dag") {
  auto one = std::make_shared<const ExtendedAaf>(triple("((a,b),c);", "((a,b),c);", "((a,b),c);"),
                                                 Forest({{"a", "b", "c", kRho}}));
  auto d1 = descendant_dag(*one);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].empty());

  auto nested = std::make_shared<const ExtendedAaf>(triple("((a,b),(c,d));", "((a,b),(c,d));", "((a,b),(c,d));"),
                                                    Forest({{"a", "b"}, {"c", "d", kRho}}));
  auto d2 = descendant_dag(*nested);
  CHECK(d2[0] == std::vector<int>{1});
  CHECK(d2[1].empty());

  auto fs = testing::worked_fstar();
  auto d = descendant_dag(*fs);
  std::vector<int> indeg(fs->size(), 0);
  for (const auto& row : d)
    for (int x : row) ++indeg[x];
  std::vector<std::string> sources;
  for (int c = 0; c < fs->size(); ++c)
    if (indeg[c] == 0) sources.push_back(fs->component(c).name);
  CHECK(sources == std::vector<std::string>{"{b}", "{c}", "{d}"});
}

TEST_CASE("descendant dag is acyclic with a source") {
  for (int s = 0; s < 30; ++s) {
    auto inst = gen_random(6, 2, 800 + s);
    auto sh = std::make_shared<const TreeTriple>(inst.trees);
    std::vector<std::vector<std::string>> blocks;
    for (const auto& l : inst.trees[0].labels()) blocks.push_back({l});
    ExtendedAaf fs(sh, Forest(blocks));
    auto d = descendant_dag(fs);
    std::vector<int> indeg(fs.size(), 0);
    for (const auto& row : d)
      for (int x : row) ++indeg[x];
    std::vector<int> queue;
    for (int c = 0; c < fs.size(); ++c)
      if (!indeg[c]) queue.push_back(c);
    CHECK_FALSE(queue.empty());
    std::size_t seen = 0;
    while (!queue.empty()) {
      int c = queue.back();
      queue.pop_back();
      ++seen;
      for (int x : d[c])
        if (--indeg[x] == 0) queue.push_back(x);
    }
    CHECK(seen == d.size());
  }
}

TEST_CASE("description counts follow the product formula") {
  auto expect = [](int f, int i) { return static_cast<std::uint64_t>(std::pow(10, f - 1) * std::pow(17, i)); };
  for (auto [f, i] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {2, 2}, {3, 2}}) {
    std::vector<std::pair<RootKind, int>> roots{{RootKind::Rho, 0}};
    for (int j = 1; j < f; ++j) roots.emplace_back(RootKind::AafRoot, 0);
    for (int j = 0; j < i; ++j) roots.emplace_back(RootKind::INode, j % 3);
    CHECK(enumerate_guess_products(roots, [](const auto&) { return true; }) == expect(f, i));
  }
  // Real extended AAFs.
  auto single = std::make_shared<const ExtendedAaf>(triple("((a,b),c);", "((a,b),c);", "((a,b),c);"),
                                                    Forest({{"a", "b", "c", kRho}}));
  CHECK(enumerate_descriptions(single, [](const Description&) { return true; }) == 1);
  auto three = std::make_shared<const ExtendedAaf>(
      triple("(((t1,t3),t2),t4);", "(((t1,t3),t2),t4);", "(((t2,t3),t1),t4);"),
      Forest({{"t1", "t3"}, {"t2"}, {"t4", kRho}}));
  CHECK(three->invisible_count() == 2);
  CHECK(enumerate_descriptions(three, [](const Description&) { return true; }) == expect(3, 2));
  auto fs = testing::worked_fstar();
  std::uint64_t stopped = enumerate_descriptions(fs, [](const Description&) { return false; });
  CHECK(stopped == 1);
  // |I(T2)| = 2 exceeds k-1 for k = 2.
  CHECK(enumerate_descriptions(fs, [](const Description&) { return true; }, 2) == 0);
}

TEST_CASE("global description bound identity") {
  // 10^k * 17^(3(k-1)) == 49130^k / 4913
  for (int k = 1; k <= 3; ++k) {
    long double lhs = std::pow(10.0L, k) * std::pow(17.0L, 3 * (k - 1));
    long double rhs = std::pow(49130.0L, k) / 4913.0L;
    CHECK(std::fabs(lhs - rhs) / rhs < 1e-12L);
  }
}

TEST_CASE("description json") {
  auto fs = testing::worked_fstar();
  auto d = testing::worked_description();
  auto j = description_to_json(d);
  CHECK(j.find("\"T2[b,c]\"") != std::string::npos);
  CHECK(j.find("\"kind\":\"rho\"") != std::string::npos);
}
