// Python module _hybnet. Trees and networks cross the boundary as text.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hybnet/aaf_search.hpp"
#include "hybnet/driver.hpp"
#include "hybnet/errors.hpp"
#include "hybnet/newick.hpp"

namespace py = pybind11;
using namespace hybnet;

namespace {

TreeTriple to_triple(const std::vector<std::string>& trees) {
  TreeTriple out;
  for (const auto& t : trees) out.push_back(parse_newick(t));
  return out;
}

py::dict level_dict(const LevelStats& l) {
  py::dict d;
  d["k"] = l.k;
  d["candidates"] = l.candidates;
  d["invisible_skips"] = l.invisible_skips;
  d["states"] = l.states;
  d["signatures"] = l.signatures;
  d["cnets"] = l.cnets;
  py::dict rej;
  for (auto [reason, n] : l.rejections) rej[py::str(reason_name(reason))] = n;
  d["rejections"] = rej;
  return d;
}

py::dict solve_py(const std::vector<std::string>& trees, int max_k, bool prune, std::optional<std::uint64_t> seed,
                  double time_limit, std::uint64_t max_states, int threads, const std::string& format) {
  SolveOptions o;
  o.max_k = max_k;
  o.prune = prune;
  o.seed = seed;
  o.time_limit_seconds = time_limit;
  o.max_states = max_states;
  o.threads = threads;
  const Format f = parse_format(format);
  auto triple = to_triple(trees);
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = solve(triple, o);
  }
  py::dict d;
  d["limit_hit"] = r.limit_hit;
  d["diagnostic"] = r.diagnostic;
  d["seconds"] = r.stats.seconds;
  py::list levels;
  for (const auto& l : r.stats.levels) levels.append(level_dict(l));
  d["levels"] = levels;
  if (r.solution) {
    d["k"] = r.solution->k;
    d["network"] = emit(r.solution->network, f);
    d["aaf"] = r.solution->aaf.blocks();
    d["invisible"] = r.solution->invisible;
  } else {
    d["k"] = py::none();
    d["network"] = py::none();
  }
  return d;
}

py::dict verify_py(const std::string& network, const std::vector<std::string>& trees) {
  auto n = parse_network(network);
  py::dict d;
  d["binary"] = is_binary_network(n);
  d["hybridization_number"] = hybridization_number(n);
  std::vector<bool> shown;
  for (const auto& t : trees) shown.push_back(displays(n, parse_newick(t)));
  d["displays"] = shown;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hybnet, m) {
  m.doc() = "Minimum hybridization networks for three rooted binary trees";
  py::register_exception<Error>(m, "HybnetError", PyExc_ValueError);

  m.def("solve", &solve_py, py::arg("trees"), py::arg("max_k") = 6, py::arg("prune") = true,
        py::arg("seed") = py::none(), py::arg("time_limit") = 0.0, py::arg("max_states") = 0,
        py::arg("threads") = 1, py::arg("format") = "enewick",
        "Solve a triple of Newick trees. Returns a dict; 'network' is None when nothing fits in max_k.");
  m.def("verify", &verify_py, py::arg("network"), py::arg("trees"));
  m.def(
      "displays", [](const std::string& n, const std::string& t) { return displays(parse_network(n), parse_newick(t)); },
      py::arg("network"), py::arg("tree"));
  m.def(
      "hybridization_number", [](const std::string& n) { return hybridization_number(parse_network(n)); },
      py::arg("network"));
  m.def(
      "convert", [](const std::string& n, const std::string& format) { return emit(parse_network(n), parse_format(format)); },
      py::arg("network"), py::arg("format"));
  m.def(
      "canonical_newick", [](const std::string& t) { return to_newick(parse_newick(t)); }, py::arg("tree"));
  m.def(
      "aafs",
      [](const std::vector<std::string>& trees, int k, bool prune) {
        std::vector<std::vector<std::vector<std::string>>> out;
        for (const auto& f : collect_aafs(to_triple(trees), k, prune)) out.push_back(f.blocks());
        return out;
      },
      py::arg("trees"), py::arg("k"), py::arg("prune") = true,
      "Acyclic agreement forests with at most k+1 blocks, as lists of sorted blocks.");
  m.def(
      "gen_random",
      [](int n, int moves, std::uint64_t seed) {
        std::vector<std::string> out;
        for (const auto& t : gen_random(n, moves, seed).trees) out.push_back(to_newick(t));
        return out;
      },
      py::arg("n"), py::arg("moves"), py::arg("seed"));
  m.attr("RHO") = kRho;
}
