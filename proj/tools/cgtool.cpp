// cgtool: command-line front end for the chain graph library. Subcommands
// wrap the library operations one-to-one; graphs and chains travel as text
// files, traces as JSON lines. Exit codes: 0 success, 1 input/domain error,
// 2 violated internal invariant.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cg/cg.hpp>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cg::input_error("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw cg::input_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw cg::input_error("cannot write '" + path + "'");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    spit(out_path, content);
  }
}

cg::NodeSet parse_labels(const std::string& csv) {
  cg::NodeSet out;
  std::string cur;
  std::istringstream in(csv);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) out.insert(cur);
  }
  return out;
}

struct Options {
  std::string graph_file, second_file, chain_file, model_file, trace_file_in;
  std::string x_csv, y_csv, z_csv;
  std::string oracle = "reach";
  std::string kind = "cg";
  std::string out_path, trace_path;
  std::string k_csv, l_csv, r_csv;
  uint64_t seed = 0;
  size_t n = 1;
  size_t max_nodes = cg::kDefaultNodeBound;
  double edge_prob = 0.4;
  int verbosity = 0;
};

int run_validate(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  std::cout << "parsed: " << g.nodes().size() << " nodes, " << g.arcs().size()
            << " directed, " << g.lines().size() << " undirected\n";
  bool cgness = cg::is_chain_graph(g);
  std::cout << "chain graph: " << (cgness ? "yes" : "no") << "\n";
  std::cout << "components:";
  for (const auto& c : cg::components(g)) {
    std::cout << " {";
    bool first = true;
    for (const auto& n : c) {
      std::cout << (first ? "" : " ") << n;
      first = false;
    }
    std::cout << "}";
  }
  std::cout << "\n";
  if (cgness) {
    std::cout << "consistent chain:\n" << cg::print_chain(cg::consistent_chain(g));
  }
  return cgness ? 0 : 1;
}

int run_components(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  std::ostringstream out;
  for (const auto& c : cg::components(g)) {
    bool first = true;
    for (const auto& n : c) {
      out << (first ? "" : " ") << n;
      first = false;
    }
    out << "\n";
  }
  emit(opt.out_path, out.str());
  return 0;
}

int run_separate(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  cg::SeparationTriple t{parse_labels(opt.x_csv), parse_labels(opt.y_csv),
                         parse_labels(opt.z_csv)};
  bool verdict = false;
  if (opt.oracle == "reach") {
    verdict = cg::separated(g, t);
  } else if (opt.oracle == "brute") {
    verdict = cg::separated_bruteforce(g, t, 4 * g.nodes().size());
  } else if (opt.oracle == "moral") {
    verdict = cg::separated_moral(g, t);
  } else if (opt.oracle == "all") {
    bool reach = cg::separated(g, t);
    bool brute = cg::separated_bruteforce(g, t, 4 * g.nodes().size());
    bool moral = cg::separated_moral(g, t);
    if (reach != brute || reach != moral) {
      throw cg::internal_error("separation engines disagree: reach=" + std::to_string(reach) +
                               " brute=" + std::to_string(brute) +
                               " moral=" + std::to_string(moral));
    }
    verdict = reach;
  } else {
    throw cg::input_error("unknown oracle '" + opt.oracle + "'");
  }
  std::cout << (verdict ? "true" : "false") << "\n";
  return 0;
}

int run_model(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  auto model = cg::enumerate_model(g, opt.max_nodes);
  emit(opt.out_path, cg::print_model(model));
  return 0;
}

int run_imap_check(const Options& opt) {
  cg::HybridGraph h = cg::parse_graph(slurp(opt.graph_file));
  cg::HybridGraph g = cg::parse_graph(slurp(opt.second_file));
  bool verdict = cg::is_imap(h, g, opt.max_nodes);
  std::cout << (verdict ? "true" : "false") << "\n";
  return 0;
}

void emit_transform(const Options& opt, const cg::HybridGraph& initial,
                    const cg::TransformResult& result) {
  emit(opt.out_path, cg::print_graph(result.graph));
  if (!opt.trace_path.empty()) {
    cg::Trace t{initial, std::nullopt, result.ops, result.graph};
    spit(opt.trace_path, cg::write_trace(t));
  }
  if (opt.verbosity > 0) {
    std::cerr << result.ops.size() << " elementary operations\n";
  }
}

int run_fbsplit(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  auto result = cg::fbsplit(parse_labels(opt.k_csv), parse_labels(opt.l_csv), g);
  emit_transform(opt, g, result);
  return 0;
}

int run_fbmerge(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  auto result = cg::fbmerge(parse_labels(opt.l_csv), parse_labels(opt.r_csv), g);
  emit_transform(opt, g, result);
  return 0;
}

int run_b3(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  cg::Chain alpha = cg::parse_chain(slurp(opt.chain_file));
  auto result = cg::method_b3(g, alpha);
  emit(opt.out_path, cg::print_graph(result.graph));
  if (!opt.trace_path.empty()) spit(opt.trace_path, cg::write_trace(result.trace));
  if (opt.verbosity > 0) {
    std::cerr << result.trace.ops.size() << " elementary operations\n";
  }
  return 0;
}

int run_g2h(const Options& opt) {
  cg::HybridGraph g = cg::parse_graph(slurp(opt.graph_file));
  cg::HybridGraph h = cg::parse_graph(slurp(opt.second_file));
  cg::Trace t = cg::method_g2h(g, h, opt.max_nodes);
  emit(opt.out_path, cg::print_graph(t.final_graph));
  if (!opt.trace_path.empty()) spit(opt.trace_path, cg::write_trace(t));
  if (opt.verbosity > 0) std::cerr << t.ops.size() << " elementary operations\n";
  return 0;
}

int run_mimap(const Options& opt) {
  cg::IndependenceModel model = cg::parse_model(slurp(opt.model_file));
  cg::Chain alpha = cg::parse_chain(slurp(opt.chain_file));
  cg::NodeSet universe;
  for (const auto& b : alpha.blocks) universe.insert(b.begin(), b.end());
  for (const auto& n : model.universe) {
    if (!universe.contains(n)) {
      throw cg::input_error("model mentions node '" + n + "' outside the chain");
    }
  }
  model.universe = universe;
  if (universe.size() > 12) {
    std::cerr << "warning: boundary search is exponential; " << universe.size()
              << " nodes will be slow\n";
  }
  auto g = cg::mi_map(cg::oracle_from_model(std::move(model)), alpha);
  emit(opt.out_path, cg::print_graph(g));
  return 0;
}

int run_verify_trace(const Options& opt) {
  cg::Trace t = cg::read_trace(slurp(opt.trace_file_in));
  cg::HybridGraph h = cg::parse_graph(slurp(opt.graph_file));
  auto report = cg::verify_trace(t, h, opt.max_nodes);
  if (report.valid) {
    std::cout << "valid\n";
    return 0;
  }
  std::cout << "step " << (report.step ? std::to_string(*report.step) : "?") << ": "
            << report.message << "\n";
  return 1;
}

int run_random(const Options& opt) {
  cg::Rng rng(opt.seed);
  auto labels = cg::make_labels(opt.n);
  if (opt.kind == "cg") {
    auto g = cg::random_cg(rng, labels, opt.edge_prob);
    emit(opt.out_path, cg::print_graph(g));
    return 0;
  }
  if (opt.kind == "imap-pair") {
    if (opt.out_path.empty()) {
      throw cg::input_error("random --kind imap-pair needs --out <prefix>");
    }
    auto pair = cg::random_imap_pair(rng, labels, opt.edge_prob);
    spit(opt.out_path + ".g.txt", cg::print_graph(pair.g));
    spit(opt.out_path + ".h.txt", cg::print_graph(pair.h));
    if (opt.verbosity > 0) {
      std::cerr << "wrote " << opt.out_path << ".g.txt and " << opt.out_path << ".h.txt\n";
    }
    return 0;
  }
  throw cg::input_error("unknown kind '" + opt.kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chain graph separation and transformation toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--max-nodes", opt.max_nodes, "bound for exhaustive model enumeration");
    sub->add_flag("-v,--verbose", opt.verbosity, "more detail on stderr");
  };

  auto* validate = app.add_subcommand("validate", "parse a graph file and classify it");
  validate->add_option("graph", opt.graph_file, "graph file")->required();

  auto* comps = app.add_subcommand("components", "list the components of a graph");
  comps->add_option("graph", opt.graph_file)->required();
  comps->add_option("--out", opt.out_path, "write to a file instead of stdout");

  auto* sep = app.add_subcommand("separate", "decide X separated from Y given Z");
  sep->add_option("graph", opt.graph_file)->required();
  sep->add_option("--x", opt.x_csv, "comma separated labels")->required();
  sep->add_option("--y", opt.y_csv, "comma separated labels")->required();
  sep->add_option("--z", opt.z_csv, "comma separated labels");
  sep->add_option("--oracle", opt.oracle, "reach | brute | moral | all");

  auto* model = app.add_subcommand("model", "enumerate all separation statements");
  model->add_option("graph", opt.graph_file)->required();
  model->add_option("--out", opt.out_path);
  add_common(model);

  auto* imap = app.add_subcommand("imap-check", "is I(first) contained in I(second)?");
  imap->add_option("imap", opt.graph_file, "candidate independence map H")->required();
  imap->add_option("graph", opt.second_file, "reference graph G")->required();
  add_common(imap);

  auto* fbs = app.add_subcommand("fbsplit", "feasible block splitting");
  fbs->add_option("graph", opt.graph_file)->required();
  fbs->add_option("--k", opt.k_csv, "block to split, comma separated")->required();
  fbs->add_option("--l", opt.l_csv, "subset to carve out, comma separated");
  fbs->add_option("--out", opt.out_path);
  fbs->add_option("--trace", opt.trace_path, "write the elementary ops as JSON lines");
  add_common(fbs);

  auto* fbm = app.add_subcommand("fbmerge", "feasible block merging");
  fbm->add_option("graph", opt.graph_file)->required();
  fbm->add_option("--l", opt.l_csv, "left block, comma separated")->required();
  fbm->add_option("--r", opt.r_csv, "right block, comma separated")->required();
  fbm->add_option("--out", opt.out_path);
  fbm->add_option("--trace", opt.trace_path);
  add_common(fbm);

  auto* b3 = app.add_subcommand("b3", "minimal independence map relative to a chain");
  b3->add_option("graph", opt.graph_file)->required();
  b3->add_option("chain", opt.chain_file)->required();
  b3->add_option("--out", opt.out_path);
  b3->add_option("--trace", opt.trace_path);
  add_common(b3);

  auto* g2h = app.add_subcommand("g2h", "transform one chain graph into another");
  g2h->add_option("source", opt.graph_file)->required();
  g2h->add_option("target", opt.second_file)->required();
  g2h->add_option("--out", opt.out_path);
  g2h->add_option("--trace", opt.trace_path);
  add_common(g2h);

  auto* mm = app.add_subcommand("mimap", "minimal independence map of an explicit model");
  mm->add_option("model", opt.model_file)->required();
  mm->add_option("chain", opt.chain_file)->required();
  mm->add_option("--out", opt.out_path);
  add_common(mm);

  auto* vt = app.add_subcommand("verify-trace", "replay a trace and check it step by step");
  vt->add_option("trace", opt.trace_file_in)->required();
  vt->add_option("target", opt.graph_file)->required();
  add_common(vt);

  auto* rnd = app.add_subcommand("random", "seeded random instances");
  rnd->add_option("--seed", opt.seed)->required();
  rnd->add_option("-n,--nodes", opt.n, "node count")->required()->check(CLI::PositiveNumber);
  rnd->add_option("--kind", opt.kind, "cg | imap-pair");
  rnd->add_option("--edge-prob", opt.edge_prob);
  rnd->add_option("--out", opt.out_path, "output path (prefix for imap-pair)");
  add_common(rnd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return run_validate(opt);
    if (app.got_subcommand(comps)) return run_components(opt);
    if (app.got_subcommand(sep)) return run_separate(opt);
    if (app.got_subcommand(model)) return run_model(opt);
    if (app.got_subcommand(imap)) return run_imap_check(opt);
    if (app.got_subcommand(fbs)) return run_fbsplit(opt);
    if (app.got_subcommand(fbm)) return run_fbmerge(opt);
    if (app.got_subcommand(b3)) return run_b3(opt);
    if (app.got_subcommand(g2h)) return run_g2h(opt);
    if (app.got_subcommand(mm)) return run_mimap(opt);
    if (app.got_subcommand(vt)) return run_verify_trace(opt);
    if (app.got_subcommand(rnd)) return run_random(opt);
  } catch (const cg::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const cg::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
