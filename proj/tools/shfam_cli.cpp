// Command-line front end: sequence analysis, equations, solution-free sets,
// hash-family matrices, bounds and a small benchmark table.
//
// Exit codes: 0 success or verified, 1 verification failure, 2 usage or
// precondition error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shfam/shfam.hpp"

namespace {

using namespace shfam;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string log_base = "2";
  SearchLimits limits;
  bool json = false;
};

LogBase log_base_of(const Globals& g) { return g.log_base == "e" ? LogBase::natural : LogBase::two; }

std::string braces(std::span<const Value> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

std::string braces(std::span<const Integer> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i].str();
  return out + "}";
}

std::string parens(std::span<const Integer> s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i].str();
  return out + ")";
}

std::string describe(const BipartiteArray& a) { return "pos=" + braces(a.pos()) + " neg=" + braces(a.neg()); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw precondition_error("cannot write '" + path + "'");
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<Value> value_list(const std::string& text) {
  std::vector<Value> out;
  for (const auto& x : parse_integer_list(text)) out.push_back(to_value(x));
  return out;
}

PermSeq sequence_arg(const std::string& inline_text, const std::string& file) {
  if (!file.empty()) return PermSeq(parse_integer_list(read_file(file)));
  if (inline_text.empty()) throw precondition_error("no sequence given");
  return PermSeq(parse_integer_list(inline_text));
}

HashFamilyMatrix load_matrix(const std::string& path) {
  if (ends_with(path, ".json")) return matrix_from_json(json::parse(read_file(path)));
  std::istringstream in(read_file(path));
  return read_matrix_csv(in);
}

std::string matrix_text(const HashFamilyMatrix& a, const std::string& format) {
  if (format == "json") return to_json(a).dump(2) + "\n";
  std::ostringstream os;
  write_matrix_csv(os, a);
  return os.str();
}

// ---- seq -----------------------------------------------------------------

struct SeqArgs {
  std::string sequence, file;
};

int cmd_seq(const SeqArgs& args, const Globals& g) {
  const PermSeq u = sequence_arg(args.sequence, args.file);
  const SeqAnalysis a = analyze(u);
  if (g.json) {
    std::cout << to_json(a).dump(2) << '\n';
    return kOk;
  }
  std::cout << "sequence: " << parens(u.entries()) << '\n';
  std::cout << "tau: " << a.tau << '\n';
  std::cout << "epsilon: " << a.epsilon << '\n';
  std::cout << "chi: (";
  for (std::size_t i = 0; i < a.chi.size(); ++i) std::cout << (i ? "," : "") << a.chi[i];
  std::cout << ")\n";
  for (std::size_t j = 0; j < a.deletions.size(); ++j) std::cout << "U^(" << j << "): " << parens(a.deletions[j].entries()) << '\n';
  return kOk;
}

// ---- equations -------------------------------------------------------------

struct EquationsArgs {
  std::string r, sequence;
  std::size_t max_length = 0;
  double a = 0.0;
  std::string theta;
  int which = 0;
};

int cmd_equations(const EquationsArgs& args, const Globals& g) {
  if (!args.r.empty()) {
    const auto eqs = equations_of(parse_integer_list(args.r), args.max_length);
    if (g.json) {
      std::cout << to_json(std::span<const BipartiteArray>(eqs)).dump(2) << '\n';
    } else {
      for (const auto& e : eqs) std::cout << describe(e) << '\n';
    }
    return kOk;
  }
  const PermSeq u = sequence_arg(args.sequence, "");
  const BipartiteArray arr = array_from_sequence(u);
  json out = {{"array", to_json(arr)}, {"diagnostics", to_json(diagnostics(arr))}};
  if (!args.theta.empty()) out["ancestor"] = to_json(ancestor(arr, parse_integer(args.theta), args.which == 0 ? 1 : args.which));
  if (args.a > 0.0) out["string"] = to_json(algorithm1(u, args.a));
  if (g.json) {
    std::cout << out.dump(2) << '\n';
    return kOk;
  }
  const ArrayDiagnostics d = diagnostics(arr);
  std::cout << "array: " << describe(arr) << '\n';
  std::cout << "alpha: " << d.alpha << "  alpha': " << d.alpha_prime << "  gap: " << d.gap << "  delta: " << d.delta << '\n';
  std::cout << "Z: " << braces(d.z_set) << "  mutually unequal: " << (d.mutually_unequal ? "yes" : "no") << '\n';
  if (!args.theta.empty())
    std::cout << "ancestor: " << describe(ancestor(arr, parse_integer(args.theta), args.which == 0 ? 1 : args.which)) << '\n';
  if (args.a > 0.0) {
    const AncestorString s = algorithm1(u, args.a);
    for (std::size_t i = 0; i < s.arrays.size(); ++i) {
      std::cout << "A[" << i << "]: " << describe(s.arrays[i]);
      if (i > 0)
        std::cout << "  theta=" << s.thetas[i - 1] << " type=" << s.ancestor_type(i) << " m=" << s.locations[i - 1]
                  << (s.reproducible[i - 1] ? "" : " (theta >= delta)");
      std::cout << '\n';
    }
  }
  return kOk;
}

// ---- tower -----------------------------------------------------------------

struct TowerArgs {
  std::string m = "2^64";
  std::size_t t = 4;
};

int cmd_tower(const TowerArgs& args, const Globals& g) {
  const PlasticSet r = plastic_tower(parse_integer(args.m), args.t, log_base_of(g));
  if (g.json) std::cout << to_json(r).dump(2) << '\n';
  else std::cout << "R = " << braces(r.elements()) << "  rank " << r.rank() << '\n';
  return kOk;
}

// ---- solfree ---------------------------------------------------------------

struct SolfreeArgs {
  std::string r, equations_file, sequence;
  std::size_t max_length = 0;
  std::string m;
  std::string from = "1";
  std::string strategy = "greedy";
  double a = 0.5;
  std::string out, set_out;
};

std::vector<BipartiteArray> equations_arg(const std::string& r, std::size_t max_length, const std::string& file,
                                          const std::string& sequence) {
  if (!file.empty()) return arrays_from_json(json::parse(read_file(file)));
  if (!sequence.empty()) return {array_from_sequence(PermSeq(parse_integer_list(sequence)))};
  if (!r.empty()) return equations_of(parse_integer_list(r), max_length);
  throw precondition_error("give --r, --equations or --seq");
}

int cmd_solfree(const SolfreeArgs& args, const Globals& g) {
  if (args.m.empty()) throw precondition_error("--m is required");
  const Integer m = parse_integer(args.m);
  SolutionFreeCert cert;
  std::optional<PipelineResult> pipeline;
  if (args.strategy == "pipeline") {
    if (args.sequence.empty()) throw precondition_error("pipeline needs --seq");
    pipeline = pipeline_single_equation(PermSeq(parse_integer_list(args.sequence)), args.a, m, g.limits);
    cert = pipeline->cert;
  } else {
    const auto eqs = equations_arg(args.r, args.max_length, args.equations_file, args.sequence);
    if (args.strategy == "greedy") {
      cert = greedy_solution_free_in(to_value(parse_integer(args.from)), to_value(m), eqs, g.limits);
    } else if (args.strategy == "exact") {
      cert = max_solution_free_exact(to_value(m), eqs, g.limits);
    } else if (args.strategy == "behrend") {
      if (eqs.size() != 1) throw precondition_error("behrend needs exactly one equation");
      cert = behrend_base(eqs.front(), m, g.limits);
    } else {
      throw precondition_error("unknown strategy '" + args.strategy + "'");
    }
  }

  if (!args.out.empty()) write_file(args.out, (pipeline ? to_json(*pipeline) : to_json(cert)).dump(2) + "\n");
  if (!args.set_out.empty()) {
    std::ostringstream os;
    write_set_text(os, cert.set);
    write_file(args.set_out, os.str());
  }
  if (g.json) {
    std::cout << (pipeline ? to_json(*pipeline) : to_json(cert)).dump(2) << '\n';
  } else {
    std::cout << "strategy: " << args.strategy << '\n';
    std::cout << "size: " << cert.set.size() << '\n';
    std::cout << "set: " << braces(cert.set) << '\n';
    std::cout << "verified: " << (cert.verified ? "yes" : "no") << " (" << to_string(cert.method) << ")\n";
    for (const auto& n : cert.notes) std::cout << "note: " << n << '\n';
    if (cert.witness) std::cout << "witness: " << to_json(*cert.witness).dump() << '\n';
  }
  return cert.verified ? kOk : kFail;
}

// ---- phf -------------------------------------------------------------------

struct PhfBuildArgs {
  std::string r, tower_m;
  std::size_t t = 3;
  std::string q;
  std::string m, m_file;
  bool auto_m = false;
  std::string m_strategy = "greedy";
  bool no_verify_m = false;
  std::string out, format;
};

PlasticSet rows_arg(const std::string& r, const std::string& tower_m, std::size_t t, const Globals& g) {
  if (!r.empty()) return PlasticSet(parse_integer_list(r));
  if (!tower_m.empty()) return plastic_tower(parse_integer(tower_m), t, log_base_of(g));
  throw precondition_error("give --r or --tower-m");
}

std::vector<Value> auto_m(const PlasticSet& r, Value q, const std::string& strategy, const SearchLimits& limits) {
  const Value top = to_value(m_range_limit(r, q));
  if (top < 0) return {};
  const auto eqs = equations_of(r.elements(), r.size());
  if (strategy == "greedy") return greedy_solution_free_in(0, top, eqs, limits).set;
  if (strategy == "exact") {
    // Translation invariance: a maximum set in [1, top + 1] shifted down by one.
    auto s = max_solution_free_exact(top + 1, eqs, limits).set;
    for (auto& v : s) --v;
    return s;
  }
  throw precondition_error("unknown M strategy '" + strategy + "'");
}

int cmd_phf_build(const PhfBuildArgs& args, const Globals& g) {
  if (args.q.empty()) throw precondition_error("--q is required");
  const PlasticSet r = rows_arg(args.r, args.tower_m, args.t, g);
  const Value q = to_value(parse_integer(args.q));
  std::vector<Value> m;
  if (args.auto_m) m = auto_m(r, q, args.m_strategy, g.limits);
  else if (!args.m_file.empty()) {
    std::istringstream in(read_file(args.m_file));
    m = read_set_text(in);
  } else if (!args.m.empty()) m = value_list(args.m);
  else throw precondition_error("give --m, --m-file or --auto-m");

  BuildOptions opts;
  opts.verify_m = !args.no_verify_m;
  opts.limits = g.limits;
  const HashFamilyMatrix a = build_phf(r, m, q, opts);
  const std::string format = !args.format.empty() ? args.format : (ends_with(args.out, ".json") ? "json" : "csv");
  const std::string text = matrix_text(a, format);
  if (args.out.empty()) {
    std::cout << text;
    return kOk;
  }
  write_file(args.out, text);
  std::cout << "R = " << braces(r.elements()) << "  rank " << r.rank() << "  q = " << q << '\n';
  std::cout << "M = " << braces(a.provenance()->m) << "  |M| = " << m.size() << "  solution-free: " << to_string(a.provenance()->m_status)
            << '\n';
  std::cout << "matrix: " << a.rows() << " x " << a.cols() << " -> " << args.out << '\n';
  return kOk;
}

struct PhfVerifyArgs {
  std::string matrix, type;
  unsigned jobs = 1;
  std::size_t rainbow = 0;
  std::uint64_t max_families = 1'000'000'000;
};

int cmd_phf_verify(const PhfVerifyArgs& args, const Globals& g) {
  if (args.matrix.empty()) throw precondition_error("--matrix is required");
  const HashFamilyMatrix a = load_matrix(args.matrix);
  std::vector<std::size_t> w;
  if (args.type.empty()) w.assign(a.rows(), 1);
  else
    for (auto v : value_list(args.type)) {
      if (v < 1) throw precondition_error("weights must be positive");
      w.push_back(static_cast<std::size_t>(v));
    }
  const SHFType type(w);
  ShfOptions opts;
  opts.jobs = args.jobs;
  opts.max_families = args.max_families;
  const ShfResult res = verify_shf(a, type, opts);

  std::optional<RainbowCycle> cycle;
  if (args.rainbow > 0) cycle = find_rainbow_cycle(a, std::min(args.rainbow, a.rows()), g.limits.max_checks);
  std::optional<CycleEquation> relation;
  if (cycle && a.provenance()) relation = cycle_equation(a, *cycle);

  if (g.json) {
    json out = to_json(res);
    if (args.rainbow > 0) out["rainbow_cycle"] = cycle ? to_json(*cycle) : json(nullptr);
    if (relation) out["cycle_equation"] = to_json(*relation);
    std::cout << out.dump(2) << '\n';
  } else {
    std::string ws;
    for (std::size_t i = 0; i < w.size(); ++i) ws += (i ? "," : "") + std::to_string(type.weights()[i]);
    std::cout << (res.separating ? "PASS" : "FAIL") << ": SHF(" << a.rows() << "; " << a.cols() << ", " << a.q() << ", {" << ws
              << "}) over " << res.families << " families\n";
    if (res.witness) {
      std::cout << "unseparated:";
      for (const auto& grp : *res.witness) {
        std::vector<Value> cols(grp.begin(), grp.end());
        std::cout << ' ' << braces(cols);
      }
      std::cout << '\n';
    }
    if (args.rainbow > 0) {
      if (!cycle) std::cout << "rainbow cycle: none with k <= " << args.rainbow << '\n';
      else {
        std::cout << "rainbow cycle: k=" << cycle->k() << " columns " << json(cycle->columns).dump() << " rows "
                  << json(cycle->rows).dump() << '\n';
        if (relation)
          std::cout << "relation: coefficients " << integers_json(relation->coefficients).dump() << " on m = "
                    << json(relation->values).dump() << (relation->holds ? " (holds over Z)" : " (mod q only)") << '\n';
      }
    }
  }
  return res.separating ? kOk : kFail;
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs {
  std::uint64_t n = 3;
  std::string q;
  std::string type = "1,1";
};

int cmd_bounds(const BoundsArgs& args, const Globals& g) {
  if (args.q.empty()) throw precondition_error("--q is required");
  std::vector<std::size_t> w;
  for (auto v : value_list(args.type)) w.push_back(static_cast<std::size_t>(v));
  const SHFType type(w);
  const Integer q = parse_integer(args.q);
  const Integer upper = bound_upper(args.n, q, type);
  const double lower = bound_lower_lll(args.n, q.convert_to<double>(), type.u());
  if (g.json) std::cout << json{{"upper", integer_json(upper)}, {"lower_lll", lower}}.dump(2) << '\n';
  else std::cout << "upper: " << upper << "\nlower_lll: " << lower << '\n';
  return kOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string r;
  std::size_t t = 3;
  std::string qs;
  std::string strategy = "greedy";
  bool no_timing = false;
};

int cmd_bench(const BenchArgs& args, const Globals& g) {
  std::vector<Integer> rows;
  if (!args.r.empty()) rows = parse_integer_list(args.r);
  else
    for (std::size_t i = 0; i < args.t; ++i) rows.emplace_back(i);
  const PlasticSet r(rows);
  const SHFType type = SHFType::perfect(r.size());
  std::cout << "q,|M|,n,upper,lower" << (args.no_timing ? "" : ",runtime_ms") << '\n';
  for (const auto& qi : parse_integer_list(args.qs)) {
    const auto start = std::chrono::steady_clock::now();
    const Value q = to_value(qi);
    const auto m = auto_m(r, q, args.strategy, g.limits);
    const Integer n = Integer(q) * m.size();
    const Integer upper = bound_upper(r.size(), qi, type);
    const double lower = bound_lower_lll(r.size(), qi.convert_to<double>(), type.u());
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (n > upper) std::cerr << "warning: n exceeds the upper bound at q = " << q << '\n';
    std::ostringstream lo;
    lo.precision(6);
    lo << lower;
    std::cout << q << ',' << m.size() << ',' << n << ',' << upper << ',' << lo.str();
    if (!args.no_timing) std::cout << ',' << static_cast<long long>(ms + 0.5);
    std::cout << '\n';
  }
  return kOk;
}

// ---- export ----------------------------------------------------------------

struct ExportArgs {
  std::string cert, matrix, out, format;
};

int cmd_export(const ExportArgs& args, const Globals&) {
  if (args.out.empty()) throw precondition_error("--out is required");
  if (!args.cert.empty()) {
    const json j = json::parse(read_file(args.cert));
    const json& c = j.contains("certificate") ? j.at("certificate") : j;
    const auto set = c.at("set").get<std::vector<Value>>();
    std::ostringstream os;
    if (args.format == "json") os << json(set).dump() << '\n';
    else write_set_text(os, set);
    write_file(args.out, os.str());
    return kOk;
  }
  if (!args.matrix.empty()) {
    const HashFamilyMatrix a = load_matrix(args.matrix);
    const std::string format = !args.format.empty() ? args.format : (ends_with(args.out, ".json") ? "json" : "csv");
    write_file(args.out, matrix_text(a, format));
    return kOk;
  }
  throw precondition_error("give --cert or --matrix");
}

// ---- config ----------------------------------------------------------------

std::string config_path_from(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + scalar_text(v[i]);
    return out;
  }
  return v.dump();
}

// Config values become option defaults, so explicit flags still win. Flat keys
// apply to every command that has the option; an object keyed by a command
// name applies to that command only.
void apply_config(CLI::App& app, const json& cfg) {
  auto apply = [](CLI::App& target, const std::string& key, const json& value) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    if (auto* opt = target.get_option_no_throw("--" + name)) {
      if (value.is_boolean()) {
        if (value.get<bool>()) opt->default_str("true")->default_val(true);
      } else {
        opt->default_val(scalar_text(value));
      }
    }
  };
  std::function<void(CLI::App&, const json&)> walk = [&](CLI::App& target, const json& obj) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        if (auto* sub = target.get_subcommand_no_throw(key)) walk(*sub, value);
        continue;
      }
      apply(target, key, value);
      for (auto* sub : target.get_subcommands([](CLI::App*) { return true; })) {
        apply(*sub, key, value);
        for (auto* leaf : sub->get_subcommands([](CLI::App*) { return true; })) apply(*leaf, key, value);
      }
    }
  };
  walk(app, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solution-free sets for invariant equations and separating hash families"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::string config;
  app.add_option("--config", config, "JSON file of option defaults (flags override)");
  app.add_option("--log-base", g.log_base, "Logarithm base for towers: 2 or e")->check(CLI::IsMember({"2", "e"}));
  app.add_option("--max-checks", g.limits.max_checks, "Search budget in elementary checks");
  app.add_option("--max-arity", g.limits.max_arity, "Largest equation arity searched");
  app.add_option("--exact-cap", g.limits.exact_cap, "Largest m for exact search");
  app.add_option("--max-output", g.limits.max_output, "Largest set a construction may produce");
  app.add_flag("--json", g.json, "Print JSON instead of text");

  SeqArgs seq;
  auto* c_seq = app.add_subcommand("seq", "Terminating number, direction and deletion character of a sequence");
  c_seq->add_option("sequence", seq.sequence, "Comma separated entries");
  c_seq->add_option("--file", seq.file, "File holding the sequence");

  EquationsArgs eq;
  auto* c_eq = app.add_subcommand("equations", "Equations of a row set, or the array of one sequence");
  c_eq->add_option("--r", eq.r, "Row set; prints one equation per class");
  c_eq->add_option("--max-length", eq.max_length, "Longest sequence length (default |R|)");
  c_eq->add_option("--seq", eq.sequence, "Single sequence");
  c_eq->add_option("--theta", eq.theta, "Ancestor parameter");
  c_eq->add_option("--type", eq.which, "Ancestor type 1 or 2");
  c_eq->add_option("--a", eq.a, "Exponent for the ancestor string walk");

  TowerArgs tw;
  auto* c_tower = app.add_subcommand("tower", "Tower row set from m");
  c_tower->add_option("--m", tw.m, "m (expressions like 2^64 accepted)");
  c_tower->add_option("--t", tw.t, "Number of levels");

  SolfreeArgs sf;
  auto* c_sf = app.add_subcommand("solfree", "Build a solution-free set");
  c_sf->add_option("--r", sf.r, "Row set whose equations must be avoided");
  c_sf->add_option("--max-length", sf.max_length, "Longest sequence length (default |R|)");
  c_sf->add_option("--equations", sf.equations_file, "JSON file with arrays");
  c_sf->add_option("--seq", sf.sequence, "Sequence whose equation must be avoided");
  c_sf->add_option("--m", sf.m, "Upper end of the interval");
  c_sf->add_option("--from", sf.from, "Lower end for greedy (default 1)");
  c_sf->add_option("--strategy", sf.strategy, "greedy, exact, behrend or pipeline")
      ->check(CLI::IsMember({"greedy", "exact", "behrend", "pipeline"}));
  c_sf->add_option("--a", sf.a, "Exponent for the pipeline");
  c_sf->add_option("--out", sf.out, "Certificate JSON path");
  c_sf->add_option("--set-out", sf.set_out, "Set text path");

  auto* c_phf = app.add_subcommand("phf", "Build or verify hash-family matrices");
  c_phf->require_subcommand(1);
  PhfBuildArgs pb;
  auto* c_build = c_phf->add_subcommand("build", "Matrix from R, M and q");
  c_build->add_option("--r", pb.r, "Row set");
  c_build->add_option("--tower-m", pb.tower_m, "Use the tower row set for this m");
  c_build->add_option("--t", pb.t, "Tower levels");
  c_build->add_option("--q", pb.q, "Alphabet size");
  c_build->add_option("--m", pb.m, "M as a comma separated list");
  c_build->add_option("--m-file", pb.m_file, "M as newline separated text");
  c_build->add_flag("--auto-m", pb.auto_m, "Choose M in [0, floor((q-1)/rank)] automatically");
  c_build->add_option("--m-strategy", pb.m_strategy, "greedy or exact for --auto-m")->check(CLI::IsMember({"greedy", "exact"}));
  c_build->add_flag("--no-verify-m", pb.no_verify_m, "Skip the solution-free check of M");
  c_build->add_option("--out", pb.out, "Output path (.csv or .json)");
  c_build->add_option("--format", pb.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  PhfVerifyArgs pv;
  auto* c_verify = c_phf->add_subcommand("verify", "Exhaustive separation check");
  c_verify->add_option("--matrix", pv.matrix, "Matrix file (.csv or .json)");
  c_verify->add_option("--type", pv.type, "Weights, e.g. 1,1,1 (default all ones, t = N)");
  c_verify->add_option("--jobs", pv.jobs, "Worker threads");
  c_verify->add_option("--rainbow", pv.rainbow, "Also search rainbow cycles up to this length");
  c_verify->add_option("--max-families", pv.max_families, "Enumeration budget");

  BoundsArgs bd;
  auto* c_bounds = app.add_subcommand("bounds", "Closed-form upper and probabilistic lower bounds");
  c_bounds->add_option("--n", bd.n, "Number of rows N");
  c_bounds->add_option("--q", bd.q, "Alphabet size");
  c_bounds->add_option("--type", bd.type, "Weights");

  BenchArgs bn;
  auto* c_bench = app.add_subcommand("bench", "Table of achieved n against the bounds");
  c_bench->add_option("--r", bn.r, "Row set (default 0..t-1)");
  c_bench->add_option("--t", bn.t, "Row count when --r is absent");
  c_bench->add_option("--q", bn.qs, "Comma separated q values");
  c_bench->add_option("--strategy", bn.strategy, "greedy or exact")->check(CLI::IsMember({"greedy", "exact"}));
  c_bench->add_flag("--no-timing", bn.no_timing, "Omit the runtime column");

  ExportArgs ex;
  auto* c_export = app.add_subcommand("export", "Convert certificates and matrices");
  c_export->add_option("--cert", ex.cert, "Certificate JSON");
  c_export->add_option("--matrix", ex.matrix, "Matrix file");
  c_export->add_option("--out", ex.out, "Output path");
  c_export->add_option("--format", ex.format, "text/json for sets, csv/json for matrices");

  try {
    if (const std::string path = config_path_from(argc, argv); !path.empty()) apply_config(app, json::parse(read_file(path)));
    app.parse(argc, argv);
    if (c_seq->parsed()) return cmd_seq(seq, g);
    if (c_eq->parsed()) return cmd_equations(eq, g);
    if (c_tower->parsed()) return cmd_tower(tw, g);
    if (c_sf->parsed()) return cmd_solfree(sf, g);
    if (c_build->parsed()) return cmd_phf_build(pb, g);
    if (c_verify->parsed()) return cmd_phf_verify(pv, g);
    if (c_bounds->parsed()) return cmd_bounds(bd, g);
    if (c_bench->parsed()) return cmd_bench(bn, g);
    if (c_export->parsed()) return cmd_export(ex, g);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const shfam::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
