#include "commlab/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "commlab/batch.hpp"
#include "commlab/bounds.hpp"
#include "commlab/error.hpp"
#include "commlab/instance_io.hpp"
#include "commlab/report.hpp"

namespace commlab {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  double tol = kDefaultTolerance;
  double timeout_s = 60.0;
  std::string out;
  std::string format = "csv";
  std::string rho_mode = "global";
  std::string correctness = "uniform";
  std::string plot;
};

struct TargetArgs {
  std::string fn;
  std::string relation;
  unsigned n = 1;
  unsigned ell = 2;
  std::string sizes;
  std::size_t colors = 2;
  double delta = 0.25;
  std::string instance;
};

void add_target_options(CLI::App* cmd, TargetArgs& t) {
  cmd->add_option("--fn", t.fn, "function: xor, eq, matvec, constant, random");
  cmd->add_option("--relation", t.relation, "relation: approx-xor");
  cmd->add_option("--n", t.n, "bit width");
  cmd->add_option("--ell", t.ell, "parties (matvec)");
  cmd->add_option("--sizes", t.sizes, "domain sizes, e.g. 4x4");
  cmd->add_option("--colors", t.colors, "colors (random)");
  cmd->add_option("--delta", t.delta, "distance fraction (approx-xor)");
  cmd->add_option("--instance", t.instance, "instance file");
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad sizes '" + text + "'");
    sizes.push_back(std::stoul(part));
  }
  if (sizes.empty()) throw InvalidInput("bad sizes '" + text + "'");
  return sizes;
}

FunctionSpec function_spec(const TargetArgs& t, std::uint64_t seed) {
  FunctionSpec f;
  f.n = t.n;
  f.ell = t.ell;
  f.seed = seed;
  f.colors = t.colors;
  if (t.fn == "xor") {
    f.kind = FunctionSpec::Kind::xor_fn;
  } else if (t.fn == "eq") {
    f.kind = FunctionSpec::Kind::eq;
  } else if (t.fn == "matvec") {
    f.kind = FunctionSpec::Kind::matvec;
  } else if (t.fn == "constant" || t.fn == "random") {
    f.kind = t.fn == "constant" ? FunctionSpec::Kind::constant : FunctionSpec::Kind::random;
    if (t.sizes.empty()) throw InvalidInput("--fn " + t.fn + " needs --sizes");
    f.sizes = parse_sizes(t.sizes);
  } else {
    throw InvalidInput("unknown function '" + t.fn + "'");
  }
  return f;
}

// The colored function named on the command line or carried by --instance.
ColoredFunction function_target(const TargetArgs& t, std::uint64_t seed, std::string& id) {
  if (!t.instance.empty()) {
    const Instance inst = load_instance(t.instance);
    if (!inst.function) throw InvalidInput(t.instance + ": instance has no function");
    id = fs::path(t.instance).stem().string();
    return gen_function(*inst.function);
  }
  if (t.fn.empty()) throw InvalidInput("need --fn or --instance");
  const FunctionSpec f = function_spec(t, seed);
  id = t.fn + "-n" + std::to_string(t.n);
  if (f.kind == FunctionSpec::Kind::constant || f.kind == FunctionSpec::Kind::random) id = t.fn + "-" + t.sizes;
  return gen_function(f);
}

void emit(const Globals& g, const std::vector<ReportRow>& rows, std::ostream& out) {
  const auto format = parse_report_format(g.format);
  if (g.out.empty()) write_report(out, rows, format);
  else write_report(fs::path(g.out), rows, format);
  if (!g.plot.empty()) write_margin_plot(g.plot, rows);
}

fs::path report_dir(const Globals& g) {
  if (g.out.empty()) return ".";
  const auto parent = fs::path(g.out).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// ---- gen ----

struct GenArgs {
  std::string generator = "random-bounded";
  std::string fixed;
  std::string seeds;
  std::size_t rho_max = 2;
  std::size_t parties = 2;
  std::size_t max_side = 16;
  TargetArgs target;
};

int cmd_gen(const Globals& g, const GenArgs& a, std::ostream& out) {
  if (g.out.empty()) throw InvalidInput("gen needs --out (a directory)");
  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput(dir.string() + ": cannot create directory");

  if (!a.fixed.empty()) {
    fs::path path = dir / (a.fixed + ".json");
    if (a.fixed == "parity-tightness") {
      save_instance(path, parity_tightness_instance());
    } else if (a.fixed == "singleton") {
      save_instance(path, singleton_partition_instance(function_spec(a.target, g.seed)));
    } else if (a.fixed == "trivial-merlin-am") {
      save_am(path, trivial_merlin_am(function_spec(a.target, g.seed)));
    } else {
      throw InvalidInput("unknown fixed instance '" + a.fixed + "'");
    }
    out << path.string() << "\n";
    return kExitOk;
  }

  InstanceParams p;
  p.generator = parse_generator(a.generator);
  p.parties = a.parties;
  p.max_side = a.max_side;
  p.rho_max = a.rho_max;
  const auto seeds = a.seeds.empty() ? std::vector<std::uint64_t>{g.seed} : parse_seeds(a.seeds);
  for (auto s : seeds) {
    fs::path path = dir / (a.generator + "-s" + std::to_string(s) + ".json");
    save_instance(path, generate_instance(p, s));
    out << path.string() << "\n";
  }
  return kExitOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite = "main";
  std::string generator = "random-bounded";
  std::string seeds;
  std::vector<std::size_t> rho_max{2};
  std::size_t parties = 3;
  std::size_t max_side = 16;
  std::vector<std::string> instances;
};

int cmd_verify(const Globals& g, const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const Suite suite = parse_suite(a.suite);
  const RhoMode rho = parse_rho_mode(g.rho_mode);
  std::vector<ReportRow> rows;
  std::size_t violations = 0;
  std::vector<fs::path> reproducers;

  if (!a.instances.empty()) {
    for (const auto& file : a.instances) {
      const auto start = std::chrono::steady_clock::now();
      const Instance inst = load_instance(file);
      auto chk = check_instance(inst, suite, g.tol, rho, fs::path(file).stem().string());
      chk.row.runtime_ms = elapsed_ms(start);
      if (chk.violation) {
        ++violations;
        auto path = report_dir(g) / ("repro-" + chk.row.instance_id + ".json");
        save_instance(path, inst);
        reproducers.push_back(path);
      }
      rows.push_back(std::move(chk.row));
    }
  } else {
    SuiteConfig cfg;
    cfg.suite = suite;
    cfg.generator = parse_generator(a.generator);
    cfg.seeds = a.seeds.empty() ? std::vector<std::uint64_t>{g.seed} : parse_seeds(a.seeds);
    cfg.rho_max = a.rho_max;
    cfg.parties = a.parties;
    cfg.max_side = a.max_side;
    cfg.tol = g.tol;
    cfg.rho_mode = rho;
    cfg.reproducer_dir = report_dir(g);
    const auto res = run_suite(cfg);
    rows = res.rows();
    violations = res.violations;
    reproducers = res.reproducers;
    if (res.generation_failures) err << "warning: " << res.generation_failures << " generation failures\n";
  }
  emit(g, rows, out);
  for (const auto& r : reproducers) err << "violation reproducer: " << r.string() << "\n";
  return violations ? kExitViolation : kExitOk;
}

// ---- cover / bounds ----

struct CoverArgs {
  bool exact = false;
  bool greedy = false;
  std::string witness;
  TargetArgs target;
};

int cmd_cover(const Globals& g, const CoverArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  std::string id;
  const ColoredFunction f = function_target(a.target, g.seed, id);
  ReportRow row;
  row.instance_id = id;
  row.sizes = f.shape().sizes();
  row.color_count = f.color_count();
  int code = kExitOk;

  const auto greedy = cover_number(f, CoverMode::greedy, g.timeout_s);
  row.cover_greedy = greedy.upper;
  const Cover* witness = &greedy.witness;
  CoverResult exact;
  if (a.exact || !a.greedy) {
    exact = cover_number(f, CoverMode::exact, g.timeout_s);
    if (exact.status == SetCoverResult::Status::optimal) {
      row.cover_exact = exact.upper;
      witness = &exact.witness;
    } else if (exact.status == SetCoverResult::Status::timeout) {
      row.status = "timeout:lower=" + std::to_string(exact.lower) + ":upper=" + std::to_string(exact.upper);
      err << "exact cover timed out: " << exact.lower << " <= cover <= " << exact.upper << "\n";
      code = kExitTimeout;
    } else {
      row.status = "heuristic:catalog-partial";
    }
  }
  if (!a.witness.empty()) {
    Instance inst;
    inst.protocol = Protocol(*witness, MinIndexSelector{});
    save_instance(a.witness, inst);
  }
  row.runtime_ms = elapsed_ms(start);
  emit(g, {row}, out);
  return code;
}

int cmd_bounds(const Globals& g, const TargetArgs& t, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  std::string id;
  const ColoredFunction f = function_target(t, g.seed, id);
  BoundBudget budget;
  budget.timeout_s = g.timeout_s;
  const BoundSummary s = bound_summary(f, budget);
  ReportRow row;
  row.instance_id = id;
  row.sizes = f.shape().sizes();
  row.cover_exact = s.cover_exact;
  row.cover_greedy = s.cover_greedy;
  row.fooling_best = s.fooling_best;
  row.rank_rational = s.rank_rational;
  row.rank_gf2 = s.rank_gf2;
  row.color_count = s.color_count;
  int code = kExitOk;
  if (s.timeout) {
    row.status = "timeout:lower=" + std::to_string(s.cover_lower) + ":upper=" + std::to_string(s.cover_greedy);
    code = kExitTimeout;
  }
  if (!s.consistency_errors.empty()) {
    row.status = "inconsistent";
    for (const auto& e : s.consistency_errors) err << "consistency: " << e << "\n";
    code = kExitViolation;
  }
  row.runtime_ms = elapsed_ms(start);
  emit(g, {row}, out);
  return code;
}

// ---- am ----

nlohmann::json am_json(const AMReport& r) {
  nlohmann::json j;
  j["schema"] = "commlab-am-report-v1";
  j["correctness"] = to_string(r.correctness);
  j["branch_error"] = r.branch_error;
  j["good_sizes"] = r.good_sizes;
  j["overall_error"] = r.overall_error;
  j["meets_two_thirds"] = r.meets_two_thirds;
  j["cost"] = r.cost;
  j["r0"] = r.r0;
  j["h_f_given_x"] = r.h_f_given_x;
  j["h_f_given_y"] = r.h_f_given_y;
  j["rho_r0"] = r.rho_r0;
  j["estimated_lower_bound"] = r.estimated_lower_bound;
  j["restricted_margin"] = r.restricted.margin;
  return j;
}

int cmd_am(const Globals& g, const TargetArgs& t, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  AMInstance am;
  std::string id;
  if (!t.instance.empty()) {
    am = load_am(t.instance);
    id = fs::path(t.instance).stem().string();
  } else {
    if (t.fn.empty()) throw InvalidInput("need --fn or --instance");
    am = trivial_merlin_am(function_spec(t, g.seed));
    id = "trivial-merlin-" + t.fn + "-n" + std::to_string(t.n);
  }
  const Target target = am.target();
  const AMReport rep = am_analyze(am.am_protocol(), target, parse_correctness(g.correctness));

  ReportRow row;
  row.instance_id = id;
  row.sizes = am.branches.front().shape().sizes();
  const InfoProfile& p = rep.profile;
  row.rho_global = p.rho_global;
  row.rho_box_max = p.rho_box_max;
  row.h_t = p.h_t;
  row.i_xy = p.i_xy;
  row.i_xy_given_t = p.i_xy_given_t;
  row.margin_main = check_main_inequality(p, parse_rho_mode(g.rho_mode)).margin;
  row.ic = p.ic;
  row.margin_ic = check_ic(p, parse_rho_mode(g.rho_mode)).second.margin;
  if (const auto* f = std::get_if<ColoredFunction>(&target)) row.color_count = f->color_count();
  row.status = rep.meets_two_thirds ? "ok" : "error-above-1/3";
  row.runtime_ms = elapsed_ms(start);

  emit(g, {row}, out);
  const std::string text = canonical_dump(am_json(rep));
  if (g.out.empty()) {
    out << text;
  } else {
    std::ofstream f(g.out + ".am.json", std::ios::binary);
    if (!f) throw InvalidInput(g.out + ".am.json: cannot write file");
    f << text;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rectangle covers, protocol entropies and classical bounds", "commlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed")->capture_default_str();
  app.add_option("--tol", g.tol, "violation tolerance")->capture_default_str();
  app.add_option("--timeout-s", g.timeout_s, "solver time limit")->capture_default_str();
  app.add_option("--out", g.out, "output file (gen: directory)");
  app.add_option("--format", g.format, "csv or json")->capture_default_str();
  app.add_option("--rho-mode", g.rho_mode, "global, max-box or expected")->capture_default_str();
  app.add_option("--correctness", g.correctness, "per-input or uniform")->capture_default_str();
  app.add_option("--plot", g.plot, "SVG histogram of margin_main");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write instance files");
  gen_cmd->add_option("--gen", gen.generator, "tree, random-bounded, windmill, trivial-merlin");
  gen_cmd->add_option("--fixed", gen.fixed, "parity-tightness, singleton, trivial-merlin-am");
  gen_cmd->add_option("--seeds", gen.seeds, "e.g. 0..99");
  gen_cmd->add_option("--rho-max", gen.rho_max, "thickness cap");
  gen_cmd->add_option("--parties", gen.parties, "number of parties");
  gen_cmd->add_option("--max-side", gen.max_side, "largest side");
  add_target_options(gen_cmd, gen.target);

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "run an inequality suite");
  ver_cmd->add_option("suite", ver.suite, "main, transcript, ic, multiparty, tree");
  ver_cmd->add_option("--gen", ver.generator, "instance generator");
  ver_cmd->add_option("--seeds", ver.seeds, "e.g. 0..99");
  ver_cmd->add_option("--rho-max", ver.rho_max, "thickness caps")->delimiter(',');
  ver_cmd->add_option("--parties", ver.parties, "parties (multiparty)");
  ver_cmd->add_option("--max-side", ver.max_side, "largest side");
  ver_cmd->add_option("--instance", ver.instances, "instance files");

  CoverArgs cov;
  auto* cov_cmd = app.add_subcommand("cover", "minimum monochromatic cover");
  cov_cmd->add_flag("--exact", cov.exact, "branch and bound");
  cov_cmd->add_flag("--greedy", cov.greedy, "greedy only");
  cov_cmd->add_option("--witness", cov.witness, "write the cover as an instance file");
  add_target_options(cov_cmd, cov.target);

  TargetArgs bnd;
  auto* bnd_cmd = app.add_subcommand("bounds", "cover, fooling set and rank bounds");
  add_target_options(bnd_cmd, bnd);

  TargetArgs amt;
  auto* am_cmd = app.add_subcommand("am", "AM protocol analysis");
  add_target_options(am_cmd, amt);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*gen_cmd) return cmd_gen(g, gen, out);
    if (*ver_cmd) return cmd_verify(g, ver, out, err);
    if (*cov_cmd) return cmd_cover(g, cov, out, err);
    if (*bnd_cmd) return cmd_bounds(g, bnd, out, err);
    if (*am_cmd) return cmd_am(g, amt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace commlab
