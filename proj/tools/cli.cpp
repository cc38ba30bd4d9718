#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "report.hpp"

namespace qfactor::cli {

namespace {

struct Options {
  std::string in_path;
  std::string out_path;
  std::optional<Index> n;
  std::optional<Index> d;
  std::vector<Index> blocks;
  std::vector<double> weights;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::string map = "identity";
};

struct Result {
  Json doc;
  int code = ok;
};

struct Context {
  const Options& opt;
  std::istream& in;

  TolerancePolicy policy() const {
    return opt.eps ? TolerancePolicy::uniform(*opt.eps) : TolerancePolicy{};
  }

  Json input() const {
    try {
      if (opt.in_path.empty() || opt.in_path == "-") return Json::parse(in);
      std::ifstream file(opt.in_path);
      if (!file) throw InputError("cannot read " + opt.in_path);
      return Json::parse(file);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("invalid JSON: ") + e.what());
    }
  }

  Index n() const {
    if (!opt.n) throw InputError("--n is required");
    if (*opt.n <= 0) throw InputError("--n must be positive");
    return *opt.n;
  }

  Index d() const {
    if (!opt.d) throw InputError("--d is required");
    if (*opt.d <= 0) throw InputError("--d must be positive");
    return *opt.d;
  }

  std::uint64_t seed() const {
    if (!opt.seed) throw InputError("--seed is required");
    return *opt.seed;
  }
};

using Handler = std::function<Result(const Context&)>;

Json tolerances_json(const TolerancePolicy& pol) {
  Json out;
  out["eps_eq"] = pol.eps_eq;
  out["eps_psd"] = pol.eps_psd;
  out["eps_rank"] = pol.eps_rank;
  return out;
}

Json units_doc(const MatrixUnitSystem& units) {
  Json out;
  out["n"] = units.order();
  out["dim"] = units.ambient_dim();
  out["units"] = units_to_json(units);
  return out;
}

MatrixUnitSystem units_input(const Json& j) {
  return units_from_json(j.is_object() ? require(j, "units", "input") : j);
}

bool flag_or(const Json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw InputError("\"" + key + "\" must be a boolean");
  return j[key].get<bool>();
}

StarSubalgebra algebra_input(const Json& j, const TolerancePolicy& pol) {
  const std::vector<ComplexMatrix> gens =
      matrix_list(require(j, "generators", "input"), "generators");
  const bool unital = flag_or(j, "unital", true);
  Index dim = 0;
  if (j.contains("dim")) {
    dim = require_index(j, "dim", "input");
  } else if (!gens.empty()) {
    dim = gens.front().rows();
  } else {
    throw InputError("input: \"dim\" is required when there are no generators");
  }
  for (const auto& g : gens) {
    if (g.rows() != dim) throw InputError("generators: all must be dim x dim");
  }
  return generated_algebra(dim, gens, unital, pol);
}

Json basis_json(const StarSubalgebra& alg) {
  Json out = Json::array();
  for (Index k = 0; k < alg.dim(); ++k) out.push_back(matrix_to_json(alg.element(k)));
  return out;
}

// units

Result units_standard(const Context& ctx) { return {units_doc(standard_units(ctx.n()))}; }

Result units_random(const Context& ctx) {
  const Index n = ctx.n();
  const Index d = ctx.d();
  if (d % n != 0) throw InputError("--d must be a multiple of --n");
  Rng rng(ctx.seed());
  Json doc = units_doc(random_unital_embedding(n, d, rng));
  doc["seed"] = ctx.seed();
  return {doc};
}

Result units_from_unitaries_cmd(const Context& ctx) {
  const Json j = ctx.input();
  const std::vector<ComplexMatrix> us = matrix_list(require(j, "unitaries", "input"), "unitaries");
  const Index n = j.contains("n") ? require_index(j, "n", "input")
                                  : static_cast<Index>(us.size()) + 1;
  return {units_doc(units_from_unitaries(n, us, ctx.policy()))};
}

Result units_validate(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const MatrixUnitSystem units = units_input(ctx.input());
  const UnitsReport rep = validate_units(units, pol);
  Report report;
  report.fields()["n"] = units.order();
  report.fields()["dim"] = units.ambient_dim();
  report.fields()["worst_relation"] = rep.worst_relation;
  report.fields()["tolerances"] = tolerances_json(pol);
  report.add({"matrix units", rep.pass, rep.max_residual, pol.eps_eq});
  return {report.to_json(), report.pass() ? ok : validation_failed};
}

Result units_intertwine(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const Json j = ctx.input();
  const MatrixUnitSystem f = units_from_json(require(j, "f", "input"), "f");
  const MatrixUnitSystem fp = units_from_json(require(j, "f_prime", "input"), "f_prime");
  const ComplexMatrix u = intertwiner(f, fp, pol);
  double intertwining = 0.0;
  for (Index i = 0; i < f.order(); ++i) {
    for (Index k = 0; k < f.order(); ++k) {
      intertwining = std::max(intertwining, max_abs_diff(u * fp(i, k) * u.adjoint(), f(i, k)));
    }
  }
  Report report;
  report.fields()["u"] = matrix_to_json(u);
  report.fields()["tolerances"] = tolerances_json(pol);
  const double unitarity = max_abs_diff(u * u.adjoint(), identity(u.rows()));
  report.add({"unitary", unitarity <= pol.eps_eq, unitarity, pol.eps_eq});
  report.add({"intertwines", intertwining <= pol.eps_eq, intertwining, pol.eps_eq});
  return {report.to_json(), report.pass() ? ok : validation_failed};
}

// channel

Result channel_choi(const Context& ctx) {
  const Index n = ctx.n();
  const std::string& name = ctx.opt.map;
  Json doc;
  if (name == "identity") {
    doc = channel_to_json(identity_channel(n));
  } else if (name == "transpose") {
    doc = channel_to_json(transpose_map(n));
  } else if (name == "depolarizing") {
    doc = channel_to_json(depolarizing_channel(n));
  } else if (name == "trace-to-e11") {
    doc = channel_to_json(choi_of_map(n, [n](const ComplexMatrix& x) {
      return ComplexMatrix(x.trace() * matrix_unit(n, 0, 0));
    }));
  } else if (name == "random") {
    Rng rng(ctx.seed());
    doc = channel_to_json(Channel(n, gaussian_matrix(n * n, n * n, rng)));
    doc["seed"] = ctx.seed();
  } else {
    throw InputError("unknown --map " + name +
                     " (identity|transpose|depolarizing|trace-to-e11|random)");
  }
  return {doc};
}

Result channel_apply(const Context& ctx) {
  const Json j = ctx.input();
  const Channel ch = channel_from_json(require(j, "choi", "input"));
  const ComplexMatrix x = matrix_from_json(require(j, "x", "input"), "x");
  if (x.rows() != ch.n()) throw InputError("x: must be n x n");
  Json doc;
  doc["n"] = ch.n();
  doc["y"] = matrix_to_json(apply_choi(ch, x));
  return {doc};
}

Result channel_verify(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const Channel ch = channel_from_json(ctx.input());
  const ChannelReport rep = verify_channel(ch, pol);
  const double herm = max_abs_diff(ch.choi(), ch.choi().adjoint());
  Report report;
  report.fields()["n"] = ch.n();
  report.fields()["cp"] = rep.cp;
  report.fields()["unital"] = rep.unital;
  report.fields()["tp"] = rep.trace_preserving;
  report.fields()["hermitian"] = rep.hermitian;
  if (rep.hermitian) report.fields()["min_eigenvalue"] = rep.min_eigenvalue;
  report.fields()["tolerances"] = tolerances_json(pol);
  report.add({"hermitian", rep.hermitian, herm, pol.eps_eq});
  report.add({"cp", rep.cp, rep.hermitian ? std::max(0.0, -rep.min_eigenvalue) : herm,
              pol.eps_psd});
  report.add({"unital", rep.unital, rep.unital_residual, pol.eps_eq});
  report.add({"tp", rep.trace_preserving, rep.tp_residual, pol.eps_eq});
  return {report.to_json(), report.pass() ? ok : validation_failed};
}

Result channel_from_ancilla_cmd(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  if (ctx.opt.in_path.empty() && ctx.opt.seed) {
    const Index n = ctx.n();
    const Index d = ctx.d();
    Rng rng(ctx.seed());
    const ComplexMatrix u = haar_unitary(n * d, rng);
    Json doc = channel_to_json(channel_from_ancilla(u, n, FiniteTracialAlgebra::full(d), pol));
    doc["seed"] = ctx.seed();
    return {doc};
  }
  const Json j = ctx.input();
  const Index n = require_index(j, "n", "input");
  const ComplexMatrix u = matrix_from_json(require(j, "u", "input"), "u");
  const FiniteTracialAlgebra ancilla =
      j.contains("ancilla") ? algebra_from_json(j["ancilla"], "ancilla")
                            : FiniteTracialAlgebra::full(u.rows() / n);
  return {channel_to_json(channel_from_ancilla(u, n, ancilla, pol))};
}

Result channel_distance_cmd(const Context& ctx) {
  const Json j = ctx.input();
  const Channel a = channel_from_json(require(j, "a", "input"));
  const Channel b = channel_from_json(require(j, "b", "input"));
  if (a.n() != b.n()) throw InputError("channels act on different matrix sizes");
  Json doc;
  doc["n"] = a.n();
  doc["distance"] = channel_distance(a, b);
  return {doc};
}

// trace

Result trace_gen(const Context& ctx) {
  const Index n = ctx.n();
  const std::vector<Index>& blocks = ctx.opt.blocks;
  std::vector<double> weights = ctx.opt.weights;
  if (blocks.empty()) throw InputError("--blocks is required");
  if (weights.empty()) weights.assign(blocks.size(), 1.0 / static_cast<double>(blocks.size()));
  if (weights.size() != blocks.size()) throw InputError("--weights must match --blocks");
  Rng rng(ctx.seed());
  try {
    return {trace_to_json(random_trace(n, blocks, weights, rng))};
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
}

Result trace_phi(const Context& ctx) {
  return {channel_to_json(phi(trace_from_json(ctx.input(), ctx.policy())))};
}

Result trace_correlate(const Context& ctx) {
  const CorrelationMatrix k = correlation_matrix(trace_from_json(ctx.input(), ctx.policy()));
  Json doc;
  doc["n"] = k.n;
  doc["correlation"] = matrix_to_json(k.values);
  return {doc};
}

Result trace_decompose(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const FiniteDimTrace tr = trace_from_json(ctx.input(), pol);
  Rng rng(ctx.seed());
  Json components = Json::array();
  for (const auto& part : decompose_trace(tr, rng, pol)) {
    Json c;
    c["weight"] = part.weight;
    c["trace"] = trace_to_json(part.trace);
    components.push_back(std::move(c));
  }
  Json doc;
  doc["components"] = std::move(components);
  doc["seed"] = ctx.seed();
  return {doc};
}

Result trace_combine(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const Json j = ctx.input();
  const Json& list = require(j, "traces", "input");
  if (!list.is_array() || list.empty()) throw InputError("traces: expected a non-empty array");
  std::vector<FiniteDimTrace> traces;
  for (const auto& t : list) traces.push_back(trace_from_json(t, pol));
  if (!j.contains("coefficients")) return {trace_to_json(faithful_combination(traces, pol))};
  const std::vector<double> coeffs = number_list(j["coefficients"], "coefficients");
  return {trace_to_json(convex_combine(traces, coeffs, pol))};
}

Result trace_fiber(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const Json j = ctx.input();
  const FiniteDimTrace a = trace_from_json(require(j, "a", "input"), pol);
  const FiniteDimTrace b = trace_from_json(require(j, "b", "input"), pol);
  if (a.n() != b.n()) throw InputError("traces have different n");
  Json doc;
  doc["same_fiber"] = same_phi_fiber(a, b, pol);
  doc["correlation_distance"] =
      max_abs_diff(correlation_matrix(a).values, correlation_matrix(b).values);
  doc["tolerance"] = pol.eps_eq;
  return {doc};
}

// algebra

Result algebra_span(const Context& ctx) {
  const StarSubalgebra alg = algebra_input(ctx.input(), ctx.policy());
  Json doc;
  doc["ambient_dim"] = alg.ambient_dim();
  doc["dim"] = alg.dim();
  doc["contains_unit"] = alg.contains_unit();
  doc["basis"] = basis_json(alg);
  return {doc};
}

Result algebra_commutant(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const StarSubalgebra comm = commutant(algebra_input(ctx.input(), pol), pol);
  Json doc;
  doc["ambient_dim"] = comm.ambient_dim();
  doc["dim"] = comm.dim();
  doc["basis"] = basis_json(comm);
  return {doc};
}

Result algebra_blocks(const Context& ctx) {
  const TolerancePolicy pol = ctx.policy();
  const StarSubalgebra alg = algebra_input(ctx.input(), pol);
  if (!alg.contains_unit()) throw InputError("algebra blocks: the algebra must be unital");
  Rng rng(ctx.seed());
  const BlockStructure bs = block_structure(alg, rng, pol);
  Json blocks = Json::array();
  for (const auto& b : bs.blocks) {
    Json entry;
    entry["dim"] = b.dim;
    entry["multiplicity"] = b.multiplicity;
    blocks.push_back(std::move(entry));
  }
  Json doc;
  doc["ambient_dim"] = alg.ambient_dim();
  doc["dim"] = alg.dim();
  doc["blocks"] = std::move(blocks);
  doc["seed"] = ctx.seed();
  return {doc};
}

struct Command {
  const char* group;
  const char* name;
  const char* help;
  Handler run;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"units", "standard", "standard matrix units of M_n", units_standard},
      {"units", "random", "random unital embedding M_n -> M_d", units_random},
      {"units", "from-unitaries", "units from unitaries u_2..u_n", units_from_unitaries_cmd},
      {"units", "validate", "check the matrix-unit relations", units_validate},
      {"units", "intertwine", "unitary carrying one unit system to another", units_intertwine},
      {"channel", "choi", "Choi matrix of a named map", channel_choi},
      {"channel", "apply", "apply a Choi matrix to x", channel_apply},
      {"channel", "verify", "check CP, unital and trace preserving", channel_verify},
      {"channel", "from-ancilla", "channel of a unitary in M_n (x) N", channel_from_ancilla_cmd},
      {"channel", "distance", "normalized Frobenius distance of Choi matrices",
       channel_distance_cmd},
      {"trace", "gen", "random finite-dimensional trace", trace_gen},
      {"trace", "phi", "channel of a trace", trace_phi},
      {"trace", "correlate", "correlation matrix of a trace", trace_correlate},
      {"trace", "decompose", "split a trace over the blocks it generates", trace_decompose},
      {"trace", "combine", "convex or faithful combination of traces", trace_combine},
      {"trace", "fiber", "whether two traces have the same channel", trace_fiber},
      {"algebra", "span", "generated *-algebra", algebra_span},
      {"algebra", "commutant", "commutant of the generated *-algebra", algebra_commutant},
      {"algebra", "blocks", "block structure of the generated *-algebra", algebra_blocks},
  };
  return table;
}

void add_common_options(CLI::App* sub, Options& opt) {
  sub->add_option("--in", opt.in_path, "input JSON file (default: stdin)");
  sub->add_option("--out", opt.out_path, "output JSON file (default: stdout)");
  sub->add_option("--n", opt.n, "matrix size n");
  sub->add_option("--d", opt.d, "ambient or ancilla dimension");
  sub->add_option("--blocks", opt.blocks, "block sizes, comma separated")->delimiter(',');
  sub->add_option("--weights", opt.weights, "block weights, comma separated")->delimiter(',');
  sub->add_option("--seed", opt.seed, "random seed");
  sub->add_option("--eps", opt.eps, "uniform tolerance");
  sub->add_option("--map", opt.map, "identity|transpose|depolarizing|trace-to-e11|random");
}

Json error_doc(const std::string& message) {
  Json doc;
  doc["error"] = message;
  return doc;
}

int emit(const Json& doc, const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string text = doc.dump(2) + "\n";
  if (opt.out_path.empty() || opt.out_path == "-") {
    out << text;
    return ok;
  }
  std::ofstream file(opt.out_path);
  if (!file || !(file << text)) {
    err << "qfactor: cannot write " << opt.out_path << "\n";
    return bad_input;
  }
  return ok;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  Options opt;
  CLI::App app("Factorizable channels and traces on M_n * M_n", "qfactor");
  app.require_subcommand(1);
  const Command* chosen = nullptr;
  for (const auto& cmd : commands()) {
    CLI::App* group = app.get_subcommand_no_throw(cmd.group);
    if (group == nullptr) {
      group = app.add_subcommand(cmd.group, std::string(cmd.group) + " commands");
      group->require_subcommand(1);
    }
    CLI::App* leaf = group->add_subcommand(cmd.name, cmd.help);
    add_common_options(leaf, opt);
    leaf->callback([&chosen, &cmd] { chosen = &cmd; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "qfactor: " << e.what() << "\n";
    out << error_doc(e.what()).dump(2) << "\n";
    return bad_input;
  }
  if (chosen == nullptr) {
    out << error_doc("no subcommand").dump(2) << "\n";
    return bad_input;
  }

  const Context ctx{opt, in};
  int code = ok;
  Json doc;
  try {
    if (opt.eps && !(*opt.eps > 0.0)) throw InputError("--eps must be positive");
    Result res = chosen->run(ctx);
    doc = std::move(res.doc);
    code = res.code;
  } catch (const NumericalError& e) {
    err << "qfactor: " << e.what() << "\n";
    doc = error_doc(e.what());
    code = validation_failed;
  } catch (const Error& e) {
    err << "qfactor: " << e.what() << "\n";
    doc = error_doc(e.what());
    code = bad_input;
  } catch (const Json::exception& e) {
    err << "qfactor: " << e.what() << "\n";
    doc = error_doc(e.what());
    code = bad_input;
  }
  const int written = emit(doc, opt, out, err);
  return written != ok ? written : code;
}

}  // namespace qfactor::cli
