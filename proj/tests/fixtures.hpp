// The worked instance: three trees on {a,..,e}, AAF {a,e,ρ},{b},{c},{d}
// and one invisible node in T1 and T3, two in T2.
#pragma once

#include <memory>
#include <string>
#include <variant>

#include "hybnet/extended_aaf.hpp"
#include "hybnet/network.hpp"
#include "hybnet/newick.hpp"
#include "hybnet/reconstruct.hpp"

namespace testing {

inline std::shared_ptr<const hybnet::TreeTriple> worked_trees() {
  using hybnet::parse_newick;
  return std::make_shared<const hybnet::TreeTriple>(hybnet::TreeTriple{
      parse_newick("(e,((c,d),(b,a)));"), parse_newick("(a,(((b,c),d),e));"), parse_newick("(a,(b,((c,d),e)));")});
}

inline std::shared_ptr<const hybnet::ExtendedAaf> worked_fstar() {
  return std::make_shared<const hybnet::ExtendedAaf>(
      worked_trees(), hybnet::Forest({{"a", "e", hybnet::kRho}, {"b"}, {"c"}, {"d"}}));
}

// Components: 0 {a,e,ρ}, 1 {b}, 2 {c}, 3 {d}, 4 v1 = T1[c,d], 5 v2 = T2[b,c,d],
// 6 v3 = T2[b,c], 7 v4 = T3[c,d]. Colour masks: 1 = T1, 2 = T2, 4 = T3.
inline hybnet::Description worked_description() {
  using hybnet::GuessPart;
  auto fs = worked_fstar();
  hybnet::Description d{fs, std::vector<hybnet::WiringGuess>(fs->size())};
  d.guesses[1] = {{GuessPart{1, 0}, GuessPart{6, 1}}};
  d.guesses[2] = {{GuessPart{3, 1}, GuessPart{4, 2}}};
  d.guesses[3] = {{GuessPart{3, 0}, GuessPart{4, 2}}};
  d.guesses[4] = {{GuessPart{1, 0}, GuessPart{6, 1}}};
  d.guesses[5] = {{GuessPart{1, 0}, GuessPart{6, 1}}};
  d.guesses[6] = {{GuessPart{7, 0}}};
  d.guesses[7] = {{GuessPart{4, 2}}};
  return d;
}

// Full trace of reconstructing the worked description, one JSON object per
// line, followed by the induced network.
inline std::string worked_trace() {
  std::string out;
  hybnet::SignatureOptions o;
  o.trace = [&](const std::string& line) { out += line + "\n"; };
  auto r = hybnet::reconstruct_cnet(worked_description(), o);
  if (auto* h = std::get_if<hybnet::Cnet>(&r)) {
    auto n = hybnet::induce_network(*h);
    out += "{\"hybridization\":" + std::to_string(hybnet::hybridization_number(n)) + ",\"network\":\"" +
           hybnet::emit(n, hybnet::Format::ENewick) + "\"}\n";
  } else {
    out += "rejected: " + hybnet::reason_name(std::get<hybnet::Rejection>(r).reason) + "\n";
  }
  return out;
}

// A triple where descriptions can fail in the expansion step.
inline std::shared_ptr<const hybnet::TreeTriple> conflict_trees() {
  using hybnet::parse_newick;
  return std::make_shared<const hybnet::TreeTriple>(hybnet::TreeTriple{parse_newick("((((t3,t5),t1),t2),t4);"),
                                                                       parse_newick("((((t3,t4),t5),t1),t2);"),
                                                                       parse_newick("((((t1,t5),t3),t4),t2);")});
}

// t4's {T1,T3} edge hangs above the whole component in T1 but on the (t1,t5)
// edge in T3.
inline hybnet::Description branch_conflict_description() {
  using hybnet::GuessPart;
  auto fs = std::make_shared<const hybnet::ExtendedAaf>(conflict_trees(),
                                                        hybnet::Forest({{"t1", "t2", "t5", hybnet::kRho}, {"t3"}, {"t4"}}));
  hybnet::Description d{fs, std::vector<hybnet::WiringGuess>(fs->size())};
  d.guesses[1] = {{GuessPart{7, 1}}};
  d.guesses[2] = {{GuessPart{5, 0}, GuessPart{2, 1}}};
  d.guesses[3] = {{GuessPart{7, 0}}};
  return d;
}

// On the top edge of {t1,t5,ρ}, T1 puts t4 above t2 and T3 puts t2 above t4.
inline hybnet::Description cyclic_order_description() {
  using hybnet::GuessPart;
  auto fs = std::make_shared<const hybnet::ExtendedAaf>(
      conflict_trees(), hybnet::Forest({{"t1", "t5", hybnet::kRho}, {"t2"}, {"t3"}, {"t4"}}));
  hybnet::Description d{fs, std::vector<hybnet::WiringGuess>(fs->size())};
  d.guesses[1] = {{GuessPart{7, 0}}};
  d.guesses[2] = {{GuessPart{7, 1}}};
  d.guesses[3] = {{GuessPart{5, 0}, GuessPart{2, 1}}};
  d.guesses[4] = {{GuessPart{3, 0}, GuessPart{4, 2}}};
  return d;
}

}  // namespace testing
