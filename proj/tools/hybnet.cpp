// Command-line front end: solve, verify, aaf, displays, gen.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hybnet/aaf_search.hpp"
#include "hybnet/driver.hpp"
#include "hybnet/errors.hpp"
#include "hybnet/newick.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNoSolution = 1;
constexpr int kInputError = 2;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw hybnet::InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<hybnet::PhyloTree> read_trees(const std::string& path) {
  auto trees = hybnet::parse_newick_lines(slurp(path));
  if (trees.empty()) throw hybnet::InputError(path + " holds no trees");
  for (std::size_t i = 1; i < trees.size(); ++i)
    if (trees[i].labels() != trees[0].labels())
      throw hybnet::LabelMismatch("tree " + std::to_string(i + 1) + " differs from tree 1");
  return trees;
}

int run_solve(const std::string& file, int max_k, const std::string& format, bool trace, bool no_prune,
              std::optional<std::uint64_t> seed, double time_limit) {
  auto trees = hybnet::read_instance(slurp(file));
  hybnet::SolveOptions opts;
  opts.max_k = max_k;
  opts.prune = !no_prune;
  opts.seed = seed;
  opts.time_limit_seconds = time_limit;
  opts.threads = hybnet::env_threads();
  if (trace) opts.trace = [](const std::string& line) { std::cerr << line << '\n'; };
  auto fmt = hybnet::parse_format(format);
  auto res = hybnet::solve(trees, opts);
  if (!res.solution) {
    std::cerr << res.diagnostic << '\n';
    return kNoSolution;
  }
  std::cout << hybnet::emit(res.solution->network, fmt);
  if (fmt == hybnet::Format::ENewick) std::cout << '\n';
  std::cerr << "k=" << res.solution->k << '\n';
  return kOk;
}

int run_verify(const std::string& network, const std::string& trees_file) {
  auto net = hybnet::parse_network(slurp(network));
  auto trees = read_trees(trees_file);
  bool ok = hybnet::is_binary_network(net);
  std::cout << "binary: " << (ok ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < trees.size(); ++i) {
    bool d = hybnet::displays(net, trees[i]);
    ok = ok && d;
    std::cout << "displays tree " << i + 1 << ": " << (d ? "yes" : "no") << '\n';
  }
  std::cout << "hybridization number: " << hybnet::hybridization_number(net) << '\n';
  return ok ? kOk : kNoSolution;
}

int run_aaf(const std::string& file, int k, bool no_prune) {
  auto trees = read_trees(file);
  hybnet::AafSearchOptions opts;
  opts.prune = !no_prune;
  std::uint64_t count = 0;
  hybnet::enumerate_aafs(trees, k, opts, [&](const hybnet::AafCandidate& c) {
    std::cout << hybnet::candidate_to_json(c, k) << '\n';
    ++count;
    return true;
  });
  return count ? kOk : kNoSolution;
}

int run_displays(const std::string& network, const std::string& tree) {
  auto net = hybnet::parse_network(slurp(network));
  auto t = read_trees(tree);
  bool d = hybnet::displays(net, t.at(0));
  std::cout << (d ? "yes" : "no") << '\n';
  return d ? kOk : kNoSolution;
}

int run_gen(int n, int moves, std::uint64_t seed) {
  auto inst = hybnet::gen_random(n, moves, seed);
  for (const auto& t : inst.trees) std::cout << hybnet::to_newick(t) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum hybridization networks for three rooted binary trees"};
  app.require_subcommand(1);

  std::string file, network, trees_file, format = "enewick";
  int max_k = 6, k = 1, n = 8, moves = 1;
  bool trace = false, no_prune = false;
  std::optional<std::uint64_t> seed;
  std::uint64_t gen_seed = 1;
  double time_limit = 0;

  auto* solve = app.add_subcommand("solve", "Find a network with minimum hybridization number");
  solve->add_option("file", file, "Three Newick trees, one per line ('-' for stdin)")->required();
  solve->add_option("--max-k", max_k, "Largest hybridization number to try");
  solve->add_option("--format", format, "enewick, dot or json");
  solve->add_flag("--trace", trace, "Write JSON lines describing the search to stderr");
  solve->add_flag("--no-prune", no_prune, "Disable the taxon-count prune in the AAF search");
  solve->add_option("--seed", seed, "Randomize the order of free components");
  solve->add_option("--time-limit", time_limit, "Wall-clock limit in seconds");

  auto* verify = app.add_subcommand("verify", "Check that a network displays the trees");
  verify->add_option("network", network, "eNewick or JSON network")->required();
  verify->add_option("trees", trees_file, "Newick trees, one per line")->required();

  auto* aaf = app.add_subcommand("aaf", "List acyclic agreement forest candidates");
  aaf->add_option("file", file, "Newick trees, one per line")->required();
  aaf->add_option("--k", k, "Number of deleted edges")->required();
  aaf->add_flag("--no-prune", no_prune, "Disable the taxon-count prune");

  auto* disp = app.add_subcommand("displays", "Check whether a network displays a tree");
  disp->add_option("network", network, "eNewick or JSON network")->required();
  disp->add_option("tree", trees_file, "Newick tree")->required();

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", n, "Number of taxa")->required();
  gen->add_option("--moves", moves, "rSPR moves per derived tree")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve) return run_solve(file, max_k, format, trace, no_prune, seed, time_limit);
    if (*verify) return run_verify(network, trees_file);
    if (*aaf) return run_aaf(file, k, no_prune);
    if (*disp) return run_displays(network, trees_file);
    if (*gen) return run_gen(n, moves, gen_seed);
  } catch (const hybnet::BudgetExceeded& e) {
    std::cerr << e.what() << '\n';
    return kNoSolution;
  } catch (const hybnet::Error& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
