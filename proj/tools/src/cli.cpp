#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "borelmod/action.hpp"
#include "borelmod/cases.hpp"
#include "borelmod/count.hpp"
#include "borelmod/forest_io.hpp"
#include "borelmod/oracle.hpp"
#include "borelmod/roots.hpp"

namespace borelmod::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Raised for bad flag values that CLI11 cannot check by itself.
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct refused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EngineFlags {
  std::string type;
  std::string mode = "adjoint";
  std::string strategy = "lazy";
  std::string shape = "product";
  int workers = 1;
  int max_level = -1;
  double time_cap = 0;
  bool budget_small = false;
  std::optional<int> max_branches, max_resolve_steps;
  std::optional<std::size_t> max_poly_terms;
  std::optional<std::uint32_t> max_poly_degree;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f, const std::string& default_mode) {
  f.mode = default_mode;
  cmd->add_option("--type,-t", f.type, "Cartan type, e.g. A3, G2, E8")->required();
  cmd->add_option("--mode,-m", f.mode, "adjoint or coadjoint")
      ->check(CLI::IsMember({"adjoint", "coadjoint"}))
      ->capture_default_str();
  cmd->add_option("--strategy", f.strategy, "lazy or eager")
      ->check(CLI::IsMember({"lazy", "eager"}))
      ->capture_default_str();
  cmd->add_option("--shape", f.shape, "product or linear group element")
      ->check(CLI::IsMember({"product", "linear"}))
      ->capture_default_str();
  cmd->add_option("--workers,-j", f.workers, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  cmd->add_option("--max-level", f.max_level, "stop after this many coordinates (partial forest)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--time-cap", f.time_cap, "seconds before giving up (0 = none)")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--budget-small", f.budget_small, "small preset budget");
  cmd->add_option("--max-branches", f.max_branches, "leaves per lift step")->check(CLI::PositiveNumber);
  cmd->add_option("--max-poly-terms", f.max_poly_terms, "term cap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-poly-degree", f.max_poly_degree, "degree cap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-resolve-steps", f.max_resolve_steps, "case splits per resolve path")
      ->check(CLI::PositiveNumber);
}

CartanType parse_type(const std::string& s) {
  try {
    return CartanType::parse(s);
  } catch (const invalid_type_error& e) {
    throw usage_error(e.what());
  }
}

RunOptions run_options(const EngineFlags& f) {
  RunOptions opt;
  if (f.budget_small) opt.budget = Budget::small();
  if (f.max_branches) opt.budget.max_branches = *f.max_branches;
  if (f.max_poly_terms) opt.budget.max_poly_terms = *f.max_poly_terms;
  if (f.max_poly_degree) opt.budget.max_poly_degree = *f.max_poly_degree;
  if (f.max_resolve_steps) opt.budget.max_resolve_steps = *f.max_resolve_steps;
  opt.strategy = parse_strategy(f.strategy);
  opt.shape = parse_shape(f.shape);
  opt.workers = f.workers;
  if (f.max_level >= 0) opt.max_level = f.max_level;
  if (f.time_cap > 0)
    opt.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(f.time_cap));
  return opt;
}

Forest compute_forest(const EngineFlags& f) {
  const CartanType ct = parse_type(f.type);
  const RootSystem rs(ct);
  const StructureConstants sc(rs);
  const ModuleWithFiltration mod(sc, parse_mode(f.mode));
  try {
    return run(mod, run_options(f));
  } catch (const deadline_exceeded& e) {
    throw refused(e.what());
  }
}

std::vector<std::uint64_t> parse_primes(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw usage_error("bad prime list '" + list + "'");
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw usage_error("empty prime list");
  return out;
}

// ------------------------------------------------------------------ roots

int cmd_roots(const std::string& type, const std::string& format, std::ostream& out) {
  const RootSystem rs(parse_type(type));
  const StructureConstants sc(rs);
  const int N = rs.size();
  if (format == "tsv") {
    out << "index\theight\tcoeffs\n";
    for (int i = 0; i < N; ++i) out << i + 1 << '\t' << rs.height(i) << '\t' << format_coeffs(rs.root(i).coeffs) << '\n';
    return 0;
  }
  ojson j;
  j["type"] = rs.type().name();
  j["rank"] = rs.rank();
  j["N"] = N;
  j["cartan_matrix"] = rs.cartan_matrix();
  const auto bad = bad_primes(rs).bad_primes;
  j["bad_primes"] = std::vector<int>(bad.begin(), bad.end());
  ojson roots = ojson::array();
  for (int i = 0; i < N; ++i)
    roots.push_back({{"index", i + 1}, {"height", rs.height(i)}, {"coeffs", rs.root(i).coeffs}});
  j["positive_roots"] = std::move(roots);
  ojson constants = ojson::array();
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k)
      if (auto s = rs.sum(i, k); s && i < k) constants.push_back({i + 1, k + 1, *s + 1, sc(i, k)});
  j["constants"] = std::move(constants);
  out << j.dump(2) << '\n';
  return 0;
}

// ----------------------------------------------------------------- action

int cmd_action(const std::string& type, const std::string& mode, bool dump, std::ostream& out) {
  const RootSystem rs(parse_type(type));
  const StructureConstants sc(rs);
  const ModuleWithFiltration mod(sc, parse_mode(mode));
  out << "type\t" << rs.type().name() << "\nmode\t" << to_string(mod.mode()) << "\ndim\t" << mod.dim()
      << "\norder";
  for (int c : mod.order()) out << '\t' << c + 1;
  out << "\nmax_power";
  for (int j = 0; j < mod.dim(); ++j) out << '\t' << mod.max_power(j);
  out << '\n';
  if (dump) {
    out << "generator\tpower\trow\tcol\tvalue\n";
    for (int j = 0; j < mod.dim(); ++j)
      for (int m = 1; m <= mod.max_power(j); ++m)
        for (const auto& e : mod.exp_coefficient(j, m).entries())
          out << j + 1 << '\t' << m << '\t' << e.row + 1 << '\t' << e.col + 1 << '\t' << e.value << '\n';
  }
  return 0;
}

// -------------------------------------------------------------- modality

void print_modality(const Forest& f, const std::string& format, std::ostream& out) {
  const ModalityResult m = modality(f);
  if (format == "json") {
    ojson j = {{"type", f.type.name()},
               {"mode", to_string(f.mode)},
               {"mod_U", m.mod_U},
               {"mod_B", m.mod_B},
               {"upper_bound_only", m.upper_bound_only},
               {"partial", f.partial}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "type\tmode\tmod_U\tmod_B\tupper_bound_only\n"
      << f.type.name() << '\t' << to_string(f.mode) << '\t' << m.mod_U << '\t' << m.mod_B << '\t'
      << (m.upper_bound_only ? "true" : "false") << '\n';
}

// ------------------------------------------------------------- classpoly

int cmd_classpoly(const EngineFlags& flags, const std::string& primes, const std::string& format,
                  std::ostream& out) {
  const Forest f = compute_forest(flags);
  if (f.partial) throw usage_error("classpoly needs a complete forest (drop --max-level)");
  std::optional<CountPolynomial> poly;
  try {
    poly = class_polynomial(f);
  } catch (const non_closed_form_error&) {
  }
  const bool relaxed = modality(f).upper_bound_only;
  std::vector<std::pair<std::uint64_t, Integer>> values;
  if (!primes.empty())
    for (auto q : parse_primes(primes)) {
      try {
        values.emplace_back(q, class_number(f, q));
      } catch (const std::domain_error& e) {
        throw refused(e.what());
      } catch (const guard_exceeded& e) {
        throw refused(e.what());
      }
    }
  if (format == "json") {
    ojson j;
    j["type"] = f.type.name();
    j["mode"] = to_string(f.mode);
    j["polynomial"] = poly ? ojson(poly->to_string()) : ojson(nullptr);
    j["exact"] = !relaxed;
    if (poly) j["degree"] = poly->degree();
    ojson vals = ojson::object();
    for (const auto& [q, v] : values) vals[std::to_string(q)] = v.get_str();
    j["values"] = std::move(vals);
    out << j.dump(2) << '\n';
    return 0;
  }
  out << (poly ? poly->to_string() : std::string("non-closed-form")) << (relaxed ? " (upper bound)" : " (exact)")
      << '\n';
  for (const auto& [q, v] : values) out << "q=" << q << '\t' << v.get_str() << '\n';
  return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const EngineFlags& flags, std::uint64_t p, const std::string& forest_path, std::ostream& out) {
  const CartanType ct = parse_type(flags.type);
  const RootSystem rs(ct);
  const StructureConstants sc(rs);
  const ModuleWithFiltration mod(sc, parse_mode(flags.mode));
  Forest f;
  if (forest_path.empty()) {
    f = compute_forest(flags);
  } else {
    std::ifstream in(forest_path);
    if (!in) throw usage_error("cannot read " + forest_path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      f = forest_from_json(ss.str());
    } catch (const forest_format_error& e) {
      throw usage_error(e.what());
    }
    if (f.type != ct || f.mode != mod.mode()) throw usage_error("forest does not match --type/--mode");
  }
  VerifyReport r;
  try {
    r = verify(f, mod, p);
  } catch (const std::domain_error& e) {
    throw refused(e.what());
  } catch (const guard_exceeded& e) {
    throw refused(e.what());
  }
  out << "type: " << ct.name() << "\nmode: " << to_string(mod.mode()) << "\np: " << p << '\n' << r.to_string();
  return r.verdict == Verdict::UnderCount ? 1 : 0;
}

// ----------------------------------------------------------------- table

// mod(B:u) for the exceptional types as tabulated in the literature.
int published_mod_b(const std::string& type) {
  static const std::vector<std::pair<std::string, int>> known = {
      {"G2", 1}, {"F4", 4}, {"E6", 5}, {"E7", 10}, {"E8", 20}};
  for (const auto& [t, v] : known)
    if (t == type) return v;
  return -1;
}

int cmd_table(const std::string& types, const EngineFlags& base, std::ostream& out, std::ostream& err) {
  out << "type\tmode\tmod_B\tpublished\tstatus\tcells\tseconds\n";
  std::stringstream ss(types);
  for (std::string t; std::getline(ss, t, ',');) {
    EngineFlags f = base;
    f.type = parse_type(t).name();
    const auto start = std::chrono::steady_clock::now();
    std::string mod_b = "-", status, cells = "-";
    try {
      const Forest forest = compute_forest(f);
      const auto m = modality(forest);
      mod_b = std::to_string(m.mod_B);
      status = m.upper_bound_only ? "upper-bound" : "exact";
      cells = std::to_string(forest.cells.size());
    } catch (const refused&) {
      status = "time-cap";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const int pub = published_mod_b(f.type);
    std::ostringstream sec;
    sec.precision(2);
    sec << std::fixed << secs;
    out << f.type << '\t' << f.mode << '\t' << mod_b << '\t' << (pub >= 0 ? std::to_string(pub) : "-") << '\t'
        << status << '\t' << cells << '\t' << sec.str() << '\n';
    out.flush();
    err.flush();
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modality and class-count computations for Borel subgroups", "borelmod"};
  app.require_subcommand(1);

  std::string type, format = "tsv", mode = "adjoint";
  auto* roots = app.add_subcommand("roots", "positive roots and structure constants");
  roots->add_option("--type,-t", type, "Cartan type")->required();
  roots->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));

  bool dump = false;
  auto* action = app.add_subcommand("action", "generator action tables on u or u*");
  action->add_option("--type,-t", type, "Cartan type")->required();
  action->add_option("--mode,-m", mode, "adjoint or coadjoint")->check(CLI::IsMember({"adjoint", "coadjoint"}));
  action->add_flag("--dump-exp-tables", dump, "print every nonzero table entry");

  EngineFlags pf;
  std::string out_path;
  auto* param = app.add_subcommand("parametrize", "run the case engine and print the forest as JSON");
  add_engine_flags(param, pf, "adjoint");
  param->add_option("--out,-o", out_path, "write the forest here instead of stdout");

  EngineFlags mf;
  std::string mformat = "tsv";
  auto* mod = app.add_subcommand("modality", "mod(U:u) and mod(B:u) from a forest");
  add_engine_flags(mod, mf, "adjoint");
  mod->add_option("--format", mformat, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));

  EngineFlags cf;
  std::string primes, cformat = "text";
  auto* cpoly = app.add_subcommand("classpoly", "class-number polynomial from the coadjoint forest");
  add_engine_flags(cpoly, cf, "coadjoint");
  cpoly->add_option("-q,--primes", primes, "comma-separated primes to evaluate at");
  cpoly->add_option("--format", cformat, "text or json")->check(CLI::IsMember({"text", "json"}));

  EngineFlags vf;
  std::uint64_t p = 0;
  std::string forest_path;
  auto* ver = app.add_subcommand("verify", "compare cell counts with brute-force orbit counts");
  add_engine_flags(ver, vf, "adjoint");
  ver->add_option("-p,--prime", p, "prime field size")->required();
  ver->add_option("--forest", forest_path, "forest JSON to check (default: compute one)");

  EngineFlags tf;
  tf.type = "G2";
  std::string types = "G2,F4,E6,E7,E8";
  tf.time_cap = 60;
  tf.mode = "coadjoint";
  auto* table = app.add_subcommand("table", "mod(B:u) for exceptional types, computed vs published");
  table->add_option("--types", types, "comma-separated types")->capture_default_str();
  table->add_option("--time-cap", tf.time_cap, "seconds per type")->capture_default_str();
  table->add_option("--mode,-m", tf.mode, "adjoint or coadjoint")
      ->check(CLI::IsMember({"adjoint", "coadjoint"}))
      ->capture_default_str();
  table->add_option("--workers,-j", tf.workers, "worker threads")->check(CLI::Range(1, 256));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) {
      err << sub->help();
      return 2;
    }
    err << app.help();
    return 2;
  }

  try {
    if (*roots) return cmd_roots(type, format, out);
    if (*action) return cmd_action(type, mode, dump, out);
    if (*param) {
      const Forest f = compute_forest(pf);
      const std::string json = forest_to_json(f);
      if (out_path.empty()) {
        out << json;
      } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw usage_error("cannot write " + out_path);
        file << json;
      }
      return 0;
    }
    if (*mod) {
      print_modality(compute_forest(mf), mformat, out);
      return 0;
    }
    if (*cpoly) return cmd_classpoly(cf, primes, cformat, out);
    if (*ver) return cmd_verify(vf, p, forest_path, out);
    if (*table) return cmd_table(types, tf, out, err);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const refused& e) {
    err << "refused: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace borelmod::cli
