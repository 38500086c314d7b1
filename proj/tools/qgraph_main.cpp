// qgraph: spectra and genericity analysis of metric-graph Laplacians via the
// secular determinant.
//
// Exit codes: 0 success, 1 I/O or syntax, 2 validation, 3 solver,
// 4 size limits, 64 usage.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgraph/analysis.hpp"
#include "qgraph/eigenfunction.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/oracle.hpp"
#include "qgraph/secular.hpp"
#include "qgraph/spectral.hpp"

namespace {

using namespace qgraph;

struct RunConfig {
  std::string graph_path;
  std::string config_path;
  std::string output_path = "-";
  std::string format = "csv";
  double k_max = 10.0;
  int count = 10;
  double rank_tol = 1e-8;
  double gen_threshold = 1e-6;
  double newton_tol = 1e-12;
  int samples = 1000;
  double h = 1e-3;
  int seed = 0;  // reserved; no randomized paths
  int edge = 0;  // 1-based, 0 = all
  int index = 1;
  int vertex = 1;
  double lambda = 0.0;
  int n_max = 8;

  SpectralOptions spectral() const {
    SpectralOptions opt;
    opt.rank_tol = rank_tol;
    opt.newton_tol = newton_tol;
    return opt;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SyntaxError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const RunConfig& cfg, const std::string& data) {
  if (cfg.output_path == "-" || cfg.output_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw SyntaxError("cannot open output file: " + cfg.output_path);
  out << data;
}

MetricGraph load_graph(const RunConfig& cfg) {
  if (cfg.graph_path.empty()) throw UsageError("--graph is required");
  return parse_graph(read_file(cfg.graph_path));
}

MetricGraph load_valid_graph(const RunConfig& cfg) {
  MetricGraph g = load_graph(cfg);
  require_valid(g);
  return g;
}

std::string fmt(double v) { return detail::fmt17(v); }

// config file: JSON object keyed by long option names; explicit flags win
void apply_config_file(RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(cfg.config_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("config file: ") + e.what());
  }
  auto get = [&](const char* a, const char* b, auto& slot) {
    using T = std::decay_t<decltype(slot)>;
    if (doc.contains(a)) slot = doc.at(a).get<T>();
    else if (doc.contains(b)) slot = doc.at(b).get<T>();
  };
  get("graph", "graph_path", cfg.graph_path);
  get("output", "output_path", cfg.output_path);
  get("format", "output_format", cfg.format);
  get("k-max", "k_max", cfg.k_max);
  get("count", "count", cfg.count);
  get("rank-tol", "rank_tol", cfg.rank_tol);
  get("gen-threshold", "gen_threshold", cfg.gen_threshold);
  get("newton-tol", "newton_tol", cfg.newton_tol);
  get("samples", "samples", cfg.samples);
  get("h", "h", cfg.h);
  get("seed", "seed", cfg.seed);
  get("edge", "edge", cfg.edge);
  get("index", "index", cfg.index);
  get("vertex", "vertex", cfg.vertex);
  get("lambda", "lambda", cfg.lambda);
  get("n-max", "n_max", cfg.n_max);
}

int cmd_validate(const RunConfig& cfg) {
  MetricGraph g = load_graph(cfg);
  ValidationReport rep = validate(g);
  std::string out;
  out += "ok," + std::string(rep.ok ? "1" : "0") + "\n";
  out += "connected," + std::string(rep.connected ? "1" : "0") + "\n";
  out += "components," + std::to_string(rep.components) + "\n";
  out += "edges," + std::to_string(g.num_edges()) + "\n";
  out += "vertices," + std::to_string(g.num_vertices()) + "\n";
  out += "euler_characteristic," + std::to_string(euler_characteristic(g)) + "\n";
  for (const auto& iss : rep.issues)
    out += "issue," + std::string(issue_code_name(iss.code)) + "," + iss.message + "\n";
  write_output(cfg, out);
  if (!rep.ok) {
    std::cerr << "validation failed";
    for (const auto& iss : rep.issues) std::cerr << " [" << issue_code_name(iss.code) << "]";
    std::cerr << "\n";
    return 2;
  }
  return 0;
}

std::string spectrum_to_structured(const SpectrumSlice& s) {
  std::string out = "{\"k_max\":" + fmt(s.k_max) +
                    ",\"lambda0_multiplicity\":" + std::to_string(s.lambda0_multiplicity) +
                    ",\"zeros\":[\n";
  bool first = true;
  for (const auto& z : s.zeros) {
    if (!first) out += ",\n";
    first = false;
    out += "{\"k\":" + fmt(z.k) + ",\"lambda\":" + fmt(z.lambda) +
           ",\"multiplicity\":" + std::to_string(z.multiplicity) +
           ",\"cluster\":" + (z.cluster ? "true" : "false") + "}";
  }
  out += "\n]}\n";
  return out;
}

int cmd_spectrum(const RunConfig& cfg) {
  if (!(cfg.k_max > 0)) throw UsageError("--k-max must be positive");
  MetricGraph g = load_valid_graph(cfg);
  SpectrumSlice s = find_spectrum(g, cfg.k_max, cfg.spectral());
  write_output(cfg, cfg.format == "structured" ? spectrum_to_structured(s) : spectrum_to_csv(s));
  double estimate = g.total_length() * cfg.k_max / 3.14159265358979323846;
  std::cerr << "weyl-count: found " << zero_count_with_multiplicity(s) << " zeros in (0, "
            << cfg.k_max << "], asymptotic estimate " << estimate << "\n";
  return 0;
}

std::string parity_report_to_structured(const ParityReport& rep) {
  std::string out = "{\"hypotheses_met\":" + std::string(rep.hypotheses_met ? "true" : "false") +
                    ",\"chi\":" + std::to_string(rep.chi) +
                    ",\"insufficient\":" + std::string(rep.insufficient ? "true" : "false") +
                    ",\"rows\":[\n";
  bool first = true;
  for (const auto& r : rep.rows) {
    if (!first) out += ",\n";
    first = false;
    out += "{\"index\":" + std::to_string(r.index) + ",\"k\":" + fmt(r.k) +
           ",\"multiplicity\":" + std::to_string(r.multiplicity) +
           ",\"min_vertex_value\":" + fmt(r.min_vertex_value) +
           ",\"generic\":" + (r.generic ? "true" : "false") +
           ",\"nodal_count\":" + std::to_string(r.nodal_count) +
           ",\"parity_match\":" + (r.parity_match ? "true" : "false") + "}";
  }
  out += "\n]}\n";
  return out;
}

int cmd_generic(const RunConfig& cfg) {
  if (!(cfg.k_max > 0)) throw UsageError("--k-max must be positive");
  if (cfg.count <= 0) throw UsageError("--count must be positive");
  MetricGraph g = load_valid_graph(cfg);
  ParityReport rep = parity_scan(g, cfg.count, cfg.k_max, cfg.gen_threshold, cfg.spectral());
  if (cfg.format == "structured") {
    write_output(cfg, parity_report_to_structured(rep));
  } else {
    write_output(cfg,
                 "# non-secular rows have k=0 (constant states)\n" + parity_report_to_csv(rep));
  }
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  if (cfg.count <= 0) throw UsageError("--count must be positive");
  if (!(cfg.h > 0)) throw UsageError("--h must be positive");
  MetricGraph g = load_valid_graph(cfg);
  std::vector<double> lambdas = fd_spectrum(g, cfg.h, cfg.count);
  std::string out = "# h," + fmt(cfg.h) + "\n";
  out += "index,lambda\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    out += std::to_string(i + 1) + "," + fmt(lambdas[i]) + "\n";
  write_output(cfg, out);
  return 0;
}

int cmd_secular_poly(const RunConfig& cfg) {
  MetricGraph g = load_valid_graph(cfg);
  SecularPolynomial p = secular_polynomial(g);
  write_output(cfg, polynomial_to_json(p));
  return 0;
}

int cmd_sample_secular(const RunConfig& cfg) {
  if (cfg.samples < 2) throw UsageError("--samples must be at least 2");
  if (!(cfg.k_max > 0)) throw UsageError("--k-max must be positive");
  MetricGraph g = load_valid_graph(cfg);
  std::string out = "k,re_p,im_p,abs_p\n";
  for (int j = 0; j < cfg.samples; ++j) {
    double k = cfg.k_max * j / (cfg.samples - 1);
    Cplx p = secular_eval(g, k);
    out += fmt(k) + "," + fmt(std::real(p)) + "," + fmt(std::imag(p)) + "," +
           fmt(std::abs(p)) + "\n";
  }
  write_output(cfg, out);
  return 0;
}

// eigenpair addressed by 1-based position in the spectrum slice; 0 selects
// the lambda = 0 state
Eigenpair select_pair(const MetricGraph& g, const RunConfig& cfg) {
  if (cfg.index == 0) {
    auto zero = lambda0_eigenpair(g);
    if (!zero) throw SolverError("graph has no lambda = 0 eigenstate");
    return *zero;
  }
  SpectrumSlice s = find_spectrum(g, cfg.k_max, cfg.spectral());
  if (cfg.index < 0 || cfg.index > static_cast<int>(s.zeros.size()))
    throw UsageError("--index exceeds the number of zeros below --k-max");
  return s.zeros[cfg.index - 1];
}

int cmd_eigenfunction(const RunConfig& cfg) {
  MetricGraph g = load_valid_graph(cfg);
  Eigenpair pair = select_pair(g, cfg);
  Eigenfunction f = eigenfunction(g, pair, 0);
  std::string out = "# k," + fmt(pair.k) + "\n";
  out += "# multiplicity," + std::to_string(pair.multiplicity) + "\n";
  out += eigenfunction_to_csv(f, cfg.samples >= 2 ? cfg.samples : 101);
  write_output(cfg, out);
  return 0;
}

int cmd_nodal(const RunConfig& cfg) {
  MetricGraph g = load_valid_graph(cfg);
  Eigenpair pair = select_pair(g, cfg);
  NodalDecomposition nd = nodal_domains(g, pair, cfg.gen_threshold);
  std::string out;
  out += "# k," + fmt(pair.k) + "\n";
  out += "# domain_count," + std::to_string(nd.domain_count) + "\n";
  out += "# generic," + std::string(nd.generic ? "1" : "0") + "\n";
  std::string vz = "# vertex_zeros";
  for (int v : nd.vertex_zeros) vz += "," + std::to_string(v + 1);
  out += vz + "\n";
  out += "edge,segment,t_lo,t_hi,domain\n";
  for (int e = 0; e < g.num_edges(); ++e) {
    std::vector<double> cuts = {0.0};
    if (nd.interior_zeros.count(e))
      cuts.insert(cuts.end(), nd.interior_zeros.at(e).begin(), nd.interior_zeros.at(e).end());
    cuts.push_back(g.edges[e].length);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      auto it = nd.domain_assignment.find({e, static_cast<int>(j)});
      if (it == nd.domain_assignment.end()) continue;  // silent edge
      out += std::to_string(e + 1) + "," + std::to_string(j) + "," + fmt(cuts[j]) + "," +
             fmt(cuts[j + 1]) + "," + std::to_string(it->second) + "\n";
    }
  }
  write_output(cfg, out);
  return 0;
}

int cmd_hadamard(const RunConfig& cfg) {
  MetricGraph g = load_valid_graph(cfg);
  Eigenpair pair = select_pair(g, cfg);
  std::string out = "# k," + fmt(pair.k) + "\n";
  out += "edge,dlambda_dlength\n";
  if (cfg.edge > 0) {
    if (cfg.edge > g.num_edges()) throw UsageError("--edge exceeds the edge count");
    out += std::to_string(cfg.edge) + "," + fmt(hadamard_derivative(g, pair, cfg.edge - 1)) + "\n";
  } else {
    for (int e = 0; e < g.num_edges(); ++e)
      out += std::to_string(e + 1) + "," + fmt(hadamard_derivative(g, pair, e)) + "\n";
  }
  write_output(cfg, out);
  return 0;
}

int cmd_mfunction(const RunConfig& cfg) {
  MetricGraph g = load_valid_graph(cfg);
  if (cfg.vertex < 1 || cfg.vertex > g.num_vertices())
    throw UsageError("--vertex out of range");
  MFunctionSample m =
      m_function_truncated(g, cfg.vertex - 1, cfg.lambda, cfg.n_max, cfg.spectral());
  std::string out = "vertex,lambda,n_max,value\n";
  out += std::to_string(m.vertex + 1) + "," + fmt(m.lambda) + "," + std::to_string(m.n_max) +
         "," + fmt(m.value) + "\n";
  write_output(cfg, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // pre-scan for a config file so explicit flags override its values
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") cfg.config_path = argv[i + 1];
  }
  try {
    apply_config_file(cfg);
  } catch (const qgraph::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"spectra of metric-graph Laplacians via the secular determinant"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h for the oracle step --h

  std::string chosen;
  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--graph", cfg.graph_path, "graph description file (JSON)");
    sub->add_option("--config", cfg.config_path, "JSON config file; flags win");
    sub->add_option("--output", cfg.output_path, "output path ('-' for stdout)");
    sub->add_option("--format", cfg.format, "csv|structured")
        ->check(CLI::IsMember({"csv", "structured"}));
    sub->add_option("--k-max", cfg.k_max, "wavenumber scan limit");
    sub->add_option("--count", cfg.count, "number of eigenpairs requested");
    sub->add_option("--rank-tol", cfg.rank_tol, "null-space rank tolerance");
    sub->add_option("--gen-threshold", cfg.gen_threshold, "genericity vertex-value threshold");
    sub->add_option("--newton-tol", cfg.newton_tol, "Newton convergence tolerance in k");
    sub->add_option("--samples", cfg.samples, "sample count for grids/exports");
    sub->add_option("--h", cfg.h, "finite-difference oracle mesh step");
    sub->add_option("--seed", cfg.seed, "reserved (no randomized paths)");
    sub->add_option("--edge", cfg.edge, "1-based edge selector (0 = all)");
    sub->add_option("--index", cfg.index,
                    "1-based index of the distinct zero, ascending (0 = lambda=0 state)");
    sub->add_option("--vertex", cfg.vertex, "1-based vertex selector");
    sub->add_option("--lambda", cfg.lambda, "spectral parameter for the M-function");
    sub->add_option("--n-max", cfg.n_max, "truncation order for the M-function");
    sub->parse_complete_callback([&, sub]() { chosen = sub->get_name(); });
  };

  add_common(app.add_subcommand("validate", "parse and validate a graph description"));
  add_common(app.add_subcommand("spectrum", "locate secular zeros with multiplicities"));
  add_common(app.add_subcommand("generic", "generic eigenpairs and nodal parity report"));
  add_common(app.add_subcommand("secular-poly", "exact multivariate secular polynomial"));
  add_common(app.add_subcommand("oracle", "finite-difference reference eigenvalues"));
  add_common(app.add_subcommand("sample-secular", "sample p(k) on a uniform grid"));
  add_common(app.add_subcommand("eigenfunction", "export eigenfunction samples"));
  add_common(app.add_subcommand("nodal", "nodal decomposition of an eigenfunction"));
  add_common(app.add_subcommand("hadamard", "length derivatives of an eigenvalue"));
  add_common(app.add_subcommand("mfunction", "truncated Titchmarsh-Weyl M-function"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (chosen == "validate") return cmd_validate(cfg);
    if (chosen == "spectrum") return cmd_spectrum(cfg);
    if (chosen == "generic") return cmd_generic(cfg);
    if (chosen == "secular-poly") return cmd_secular_poly(cfg);
    if (chosen == "oracle") return cmd_oracle(cfg);
    if (chosen == "sample-secular") return cmd_sample_secular(cfg);
    if (chosen == "eigenfunction") return cmd_eigenfunction(cfg);
    if (chosen == "nodal") return cmd_nodal(cfg);
    if (chosen == "hadamard") return cmd_hadamard(cfg);
    if (chosen == "mfunction") return cmd_mfunction(cfg);
    std::cerr << "error: no subcommand selected\n";
    return 64;
  } catch (const qgraph::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const qgraph::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const qgraph::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qgraph::SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const qgraph::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
