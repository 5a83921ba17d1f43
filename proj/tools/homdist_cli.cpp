#include "homdist/cfi.hpp"
#include "homdist/decomposition.hpp"
#include "homdist/families.hpp"
#include "homdist/graph.hpp"
#include "homdist/homtensor.hpp"
#include "homdist/lasserre.hpp"
#include "homdist/refinement.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;
using namespace homdist;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

Graph load_graph(const std::string& path, const std::string& format) {
  std::string text = read_file(path);
  GraphFormat f;
  if (format == "graph6")
    f = GraphFormat::graph6;
  else if (format == "edgelist")
    f = GraphFormat::edge_list;
  else
    f = sniff_format(text);
  return parse_graph(text, f);
}

void emit(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

json rung_json(const LadderRung& r) {
  json j;
  j["name"] = r.name;
  if (r.refused) {
    j["refused"] = r.refusal;
  } else {
    j["verdict"] = r.verdict == Verdict::indistinguishable ? "indistinguishable" : "distinguished";
    j["rounds"] = r.rounds;
    j["classes_per_round"] = r.classes_per_round;
  }
  return j;
}

int cmd_compare(const std::string& g_path, const std::string& h_path, int t, const std::string& format,
                const std::string& out_path) {
  Graph g = load_graph(g_path, format);
  Graph h = load_graph(h_path, format);
  auto rep = ladder_report(g, h, t);
  json j;
  j["schema"] = 1;
  j["variant"] = LadderReport::variant;
  j["t"] = t;
  j["rungs"] = {rung_json(rep.sa_high), rung_json(rep.mwl), rung_json(rep.sa_low)};
  j["chain_violation"] = rep.chain_violation;
  if (rep.chain_violation) j["violation_detail"] = rep.violation_detail;
  emit(j, out_path);
  if (rep.chain_violation) return 2;
  if (rep.mwl.refused) return 2;
  return rep.mwl.verdict == Verdict::indistinguishable ? 0 : 1;
}

int cmd_hom(const std::string& f_path, const std::string& g_path, const std::string& format) {
  Graph f = load_graph(f_path, format);
  Graph g = load_graph(g_path, format);
  Integer count;
  // use the decomposition DP when a small-width decomposition exists
  bool used_dp = false;
  if (f.vertex_count() <= 13) {
    auto [w, td] = treewidth_exact(f);
    if (w <= 3) {
      count = hom_count_td(f, td, g);
      used_dp = true;
    }
  }
  if (!used_dp) count = hom_count(f, g);
  std::cout << count.str() << "\n";
  return 0;
}

int cmd_family(int t, const std::string& family_str, int budget, int depth, const std::string& out_path) {
  Family fam;
  if (family_str == "L")
    fam = Family::L;
  else if (family_str == "Lplus")
    fam = Family::LPlus;
  else
    throw std::runtime_error("family must be L or Lplus");
  EnumerationBudget b;
  b.max_vertices = budget;
  b.max_depth = depth;
  auto members = enumerate_family(t, fam, b);
  std::string dump = dump_family(members);
  std::string path = out_path.empty() ? family_cache_name(t, fam, b) : out_path;
  write_file(path, dump);
  std::cout << "wrote " << members.size() << " members to " << path << "\n";
  return 0;
}

int cmd_lasserre(const std::string& g_path, const std::string& h_path, int t, bool nonneg,
                 const std::string& export_path, const std::string& verify_path, const std::string& tol_str,
                 const std::string& format, const std::string& out_path) {
  Graph g = load_graph(g_path, format);
  Graph h = load_graph(h_path, format);
  auto sys = build_system(g, h, t, nonneg);
  if (!export_path.empty()) {
    write_file(export_path, export_sdpa(sys));
    std::cout << "wrote " << sys.var_count() - 1 << " variables to " << export_path << "\n";
    return 0;
  }
  if (!verify_path.empty()) {
    auto values = parse_assignment_text(read_file(verify_path));
    auto y = assignment_from_imported(sys, values);
    auto res = verify_solution(sys, y, parse_rational(tol_str));
    json j;
    j["schema"] = 1;
    j["accepted"] = res.accepted;
    j["violations"] = res.violations;
    emit(j, out_path);
    std::cout << (res.accepted ? "accepted" : "rejected") << "\n";
    return res.accepted ? 0 : 1;
  }
  json j;
  j["schema"] = 1;
  j["t"] = t;
  j["nonneg"] = nonneg;
  j["variables"] = sys.var_count();
  j["moment_size"] = sys.moment_rows.size();
  j["constraints"] = sys.constraints.size();
  emit(j, out_path);
  return 0;
}

int cmd_corpus_cfi(const std::string& base_path, const std::string& prefix, const std::string& format) {
  Graph base = load_graph(base_path, format);
  auto [even, odd] = cfi_pair(base);
  write_file(prefix + "_even.g6", to_graph6(even) + "\n");
  write_file(prefix + "_odd.g6", to_graph6(odd) + "\n");
  std::cout << "wrote " << prefix << "_even.g6 and " << prefix << "_odd.g6 (" << even.vertex_count()
            << " vertices each)\n";
  return 0;
}

int cmd_corpus_random(int n, int count, std::uint64_t seed, const std::string& prefix) {
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    Graph g = random_graph(n, 1, 2, rng);
    write_file(prefix + "_" + std::to_string(i) + ".g6", to_graph6(g) + "\n");
  }
  std::cout << "wrote " << count << " graphs with prefix " << prefix << "\n";
  return 0;
}

int cmd_treewidth(const std::string& g_path, const std::string& format, const std::string& out_path) {
  Graph g = load_graph(g_path, format);
  auto [w, td] = treewidth_exact(g);
  json j;
  j["schema"] = 1;
  j["width"] = w;
  j["bags"] = td.bags;
  std::vector<std::pair<int, int>> edges = td.tree.edges();
  j["tree_edges"] = edges;
  emit(j, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph distinguishability toolkit: relaxation hierarchies, refinement, homomorphism counting"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags usable after the subcommand name

  std::string format = "auto";
  std::string out_path;
  std::uint64_t seed = 0;
  app.add_option("--format", format, "input graph format: graph6, edgelist, auto")->capture_default_str();
  app.add_option("--out", out_path, "write the report to this path instead of stdout");
  app.add_option("--seed", seed, "seed for randomized corpora")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "refinement ladder comparison of two graphs");
  compare->fallthrough();
  std::string g_path, h_path;
  int t = 1;
  compare->add_option("g_file", g_path, "first graph file")->required();
  compare->add_option("h_file", h_path, "second graph file")->required();
  compare->add_option("--t", t, "level of the hierarchy")->capture_default_str();

  auto* hom = app.add_subcommand("hom", "count homomorphisms F -> G");
  hom->fallthrough();
  std::string f_path;
  hom->add_option("f_file", f_path, "pattern graph file")->required();
  hom->add_option("g_file", g_path, "target graph file")->required();

  auto* family = app.add_subcommand("family", "enumerate a bilabelled family and dump it");
  family->fallthrough();
  std::string family_str = "Lplus";
  int budget = 6, depth = 4;
  family->add_option("--t", t, "label arity")->capture_default_str();
  family->add_option("--family", family_str, "L or Lplus")->capture_default_str();
  family->add_option("--budget", budget, "max vertices of the underlying graph")->capture_default_str();
  family->add_option("--depth", depth, "max composition depth")->capture_default_str();

  auto* lasserre = app.add_subcommand("lasserre", "build, export, or verify the level-t system");
  lasserre->fallthrough();
  bool nonneg = false;
  std::string export_path, verify_path, tol_str = "0";
  lasserre->add_option("g_file", g_path, "first graph file")->required();
  lasserre->add_option("h_file", h_path, "second graph file")->required();
  lasserre->add_option("--t", t, "level")->capture_default_str();
  lasserre->add_flag("--nonneg", nonneg, "add non-negativity constraints");
  lasserre->add_option("--export", export_path, "write the sparse SDPA file here");
  lasserre->add_option("--verify", verify_path, "verify the assignment in this file (exported variable order)");
  lasserre->add_option("--tol", tol_str, "PSD tolerance (0 = exact rational check)")->capture_default_str();

  auto* corpus = app.add_subcommand("corpus", "emit instance files");
  corpus->fallthrough();
  std::string cfi_base, prefix = "corpus";
  int rn = 0, rcount = 0;
  corpus->add_option("--cfi", cfi_base, "base graph file for a gadget-twisted pair");
  corpus->add_option("--random-n", rn, "vertex count for random graphs");
  corpus->add_option("--random-count", rcount, "number of random graphs");
  corpus->add_option("--prefix", prefix, "output filename prefix")->capture_default_str();

  auto* treewidth = app.add_subcommand("treewidth", "exact treewidth and a witness decomposition");
  treewidth->fallthrough();
  treewidth->add_option("g_file", g_path, "graph file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (compare->parsed()) return cmd_compare(g_path, h_path, t, format, out_path);
    if (hom->parsed()) return cmd_hom(f_path, g_path, format);
    if (family->parsed()) return cmd_family(t, family_str, budget, depth, out_path);
    if (lasserre->parsed())
      return cmd_lasserre(g_path, h_path, t, nonneg, export_path, verify_path, tol_str, format, out_path);
    if (corpus->parsed()) {
      if (!cfi_base.empty()) return cmd_corpus_cfi(cfi_base, prefix, format);
      if (rcount > 0) return cmd_corpus_random(rn, rcount, seed, prefix);
      throw std::runtime_error("corpus: pass --cfi or --random-n/--random-count");
    }
    if (treewidth->parsed()) return cmd_treewidth(g_path, format, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
