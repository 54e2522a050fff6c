#include "commlab/batch.hpp"

#include <algorithm>
#include <chrono>
#include <exception>

#include <omp.h>

#include "commlab/error.hpp"
#include "commlab/rng.hpp"

namespace commlab {

std::string to_string(Suite s) {
  switch (s) {
    case Suite::main: return "main";
    case Suite::transcript: return "transcript";
    case Suite::ic: return "ic";
    case Suite::multiparty: return "multiparty";
    case Suite::tree: return "tree";
  }
  return "?";
}

Suite parse_suite(const std::string& text) {
  for (Suite s : {Suite::main, Suite::transcript, Suite::ic, Suite::multiparty, Suite::tree})
    if (to_string(s) == text) return s;
  throw InvalidInput("unknown suite '" + text + "'");
}

std::string to_string(Generator g) {
  switch (g) {
    case Generator::tree: return "tree";
    case Generator::random_bounded: return "random-bounded";
    case Generator::windmill: return "windmill";
    case Generator::trivial_merlin: return "trivial-merlin";
  }
  return "?";
}

Generator parse_generator(const std::string& text) {
  for (Generator g : {Generator::tree, Generator::random_bounded, Generator::windmill, Generator::trivial_merlin})
    if (to_string(g) == text) return g;
  throw InvalidInput("unknown generator '" + text + "'");
}

namespace {

enum Stream : std::uint64_t { kShape = 1, kCover, kSelector, kColors, kDistribution, kShapeMix };

ExplicitSelector random_explicit(const Cover& cover, std::uint64_t seed) {
  const auto& shape = cover.shape();
  Rng rng(seed);
  ExplicitSelector sel;
  sel.table.resize(shape.cell_count());
  std::vector<std::uint32_t> containing;
  for (std::size_t c = 0; c < shape.cell_count(); ++c) {
    containing.clear();
    for (std::size_t b = 0; b < cover.size(); ++b)
      if (cover.box(b).contains(shape, c)) containing.push_back(static_cast<std::uint32_t>(b));
    sel.table[c] = containing[rng.below(containing.size())];
  }
  return sel;
}

FunctionSpec table_spec(const ColoredFunction& f) {
  FunctionSpec spec;
  spec.kind = FunctionSpec::Kind::table;
  spec.sizes = f.shape().sizes();
  spec.table = f.colors();
  return spec;
}

}  // namespace

Instance generate_instance(const InstanceParams& params, std::uint64_t seed) {
  Rng shape_rng(hash64(seed, kShape));
  DomainShape shape;
  if (params.generator == Generator::windmill) {
    shape = DomainShape({4, 4});
  } else {
    const std::size_t lo = params.max_side >= 2 ? 2 : 1;
    std::vector<std::size_t> sizes(params.parties);
    for (auto& s : sizes) s = lo + shape_rng.below(params.max_side - lo + 1);
    shape = DomainShape(sizes);
  }

  Instance inst;
  Rng sel_rng(hash64(seed, kSelector));
  auto pick_selector = [&](const Cover& cover) -> TranscriptSelector {
    switch (sel_rng.below(3)) {
      case 0: return MinIndexSelector{};
      case 1: return SeededRandomSelector{hash64(seed, kSelector + 100)};
      default: return random_explicit(cover, hash64(seed, kSelector + 200));
    }
  };
  switch (params.generator) {
    case Generator::tree:
      inst.protocol = compile_tree(random_tree(shape, hash64(seed, kCover)));
      break;
    case Generator::random_bounded: {
      RandomBoundedParams rb;
      rb.rho_max = params.rho_max;
      rb.extra = 1 + shape_rng.below(8);
      Cover cover = random_bounded_cover(shape, rb, hash64(seed, kCover));
      auto sel = pick_selector(cover);
      inst.protocol = Protocol(std::move(cover), std::move(sel));
      break;
    }
    case Generator::windmill: {
      Cover cover = windmill_cover();
      auto sel = pick_selector(cover);
      inst.protocol = Protocol(std::move(cover), std::move(sel));
      break;
    }
    case Generator::trivial_merlin:
      inst.protocol = Protocol(trivial_merlin_cover(shape), MinIndexSelector{});
      break;
  }

  Rng color_rng(hash64(seed, kColors));
  const std::size_t colors = 2 + color_rng.below(3);
  inst.function = table_spec(cover_colored_function(inst.protocol.cover(), colors, hash64(seed, kColors + 100)));

  Rng mix(hash64(seed, kShapeMix));
  const double zero_fraction = mix.coin(0.5) ? 0.0 : 0.3;
  DistributionSpec d;
  d.kind = DistributionSpec::Kind::table;
  d.p = JointDistribution::random(shape, hash64(seed, kDistribution), zero_fraction).table();
  inst.distribution = std::move(d);
  return inst;
}

Instance parity_tightness_instance() {
  Instance inst;
  inst.protocol = Protocol(double_full_box_cover(), parity_selector());
  FunctionSpec f;
  f.kind = FunctionSpec::Kind::constant;
  f.sizes = {2, 2};
  inst.function = f;
  inst.distribution = DistributionSpec{};
  return inst;
}

Instance singleton_partition_instance(const FunctionSpec& f) {
  const ColoredFunction fn = gen_function(f);
  Instance inst;
  inst.protocol = Protocol(trivial_merlin_cover(fn.shape()), MinIndexSelector{});
  inst.function = f;
  inst.distribution = DistributionSpec{};
  return inst;
}

AMInstance trivial_merlin_am(const FunctionSpec& f) {
  AMInstance am;
  am.function = f;
  Instance branch = singleton_partition_instance(f);
  branch.function.reset();
  branch.distribution.reset();
  const auto ep = ErrorProtocol::from_box_colors(branch.protocol, Target(gen_function(f)));
  branch.outputs = OutputMaps{ep.ga_table(), ep.gb_table()};
  am.branches.push_back(std::move(branch));
  return am;
}

InstanceCheck check_instance(const Instance& inst, Suite suite, double tol, RhoMode rho_mode,
                             const std::string& id) {
  InstanceCheck out;
  const auto target = inst.target();
  ProfileOptions opts;
  if (target) {
    opts.target = &*target;
    opts.f_mode = std::holds_alternative<ColoredFunction>(*target) ? FMode::function : FMode::box_color;
  }
  out.profile = build_profile(inst.joint_distribution(), inst.protocol, opts);
  const InfoProfile& p = out.profile;

  auto identity = [](const char* name, double gap) {
    MarginReport r;
    r.id = name;
    r.margin = -gap;
    r.components = {{"gap", gap}};
    return r;
  };
  const MarginReport main = check_main_inequality(p, rho_mode);
  const auto [ic_identity, ic_bound] = check_ic(p, rho_mode);
  out.margins.push_back(main);
  out.margins.push_back(identity("chain-rule", p.chain_rule_gap));
  out.margins.push_back(identity("triple-formula", p.triple_formula_gap));
  out.margins.push_back(ic_identity);

  switch (suite) {
    case Suite::main:
      break;
    case Suite::transcript:
      if (p.has_f && p.parties == 2) {
        const auto mode = opts.f_mode == FMode::function ? TranscriptMode::function : TranscriptMode::relation;
        out.margins.push_back(check_transcript_bound(p, mode, rho_mode));
      }
      break;
    case Suite::ic:
      out.margins.push_back(ic_bound);
      break;
    case Suite::multiparty:
      out.margins.push_back(check_multiparty(p, p.parties, MultipartyMode::transcript_only, rho_mode));
      if (p.has_f) out.margins.push_back(check_multiparty(p, p.parties, MultipartyMode::with_f, rho_mode));
      break;
    case Suite::tree: {
      MarginReport mono;
      mono.id = "tree-monotonicity";
      mono.margin = p.i_xy - p.i_xy_given_t;
      mono.components = {{"I(X:Y)", p.i_xy}, {"I(X:Y|T)", p.i_xy_given_t}};
      if (p.rho_global == 1) out.margins.push_back(mono);
      break;
    }
  }

  out.fingerprint = fingerprint(inst);
  for (auto& m : out.margins) {
    m.fingerprint = out.fingerprint;
    if (m.margin < -tol) out.violation = true;
  }

  ReportRow& row = out.row;
  row.instance_id = id;
  row.sizes = inst.shape().sizes();
  row.rho_global = p.rho_global;
  row.rho_box_max = p.rho_box_max;
  row.h_t = p.h_t;
  row.i_xy = p.i_xy;
  row.i_xy_given_t = p.i_xy_given_t;
  row.margin_main = main.margin;
  row.ic = p.ic;
  row.margin_ic = ic_bound.margin;
  if (target && std::holds_alternative<ColoredFunction>(*target))
    row.color_count = std::get<ColoredFunction>(*target).color_count();
  row.status = out.violation ? "violation" : "ok";
  return out;
}

std::vector<ReportRow> SuiteResult::rows() const {
  std::vector<ReportRow> r;
  r.reserve(checks.size());
  for (const auto& c : checks) r.push_back(c.row);
  return r;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  struct Job {
    std::size_t rho;
    std::uint64_t seed;
  };
  InstanceParams base;
  base.generator = cfg.suite == Suite::tree ? Generator::tree : cfg.generator;
  base.parties = cfg.suite == Suite::multiparty ? cfg.parties : 2;
  base.max_side = cfg.suite == Suite::multiparty ? std::min<std::size_t>(cfg.max_side, 6) : cfg.max_side;

  std::vector<Job> jobs;
  const std::vector<std::size_t> rhos =
      base.generator == Generator::random_bounded ? cfg.rho_max : std::vector<std::size_t>{1};
  for (std::size_t rho : rhos)
    for (std::uint64_t s : cfg.seeds) jobs.push_back({rho, s});

  SuiteResult res;
  res.checks.resize(jobs.size());
  std::vector<Instance> instances(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Job& job = jobs[i];
    std::string id = to_string(cfg.suite) + "-" + to_string(base.generator);
    if (base.generator == Generator::random_bounded) id += "-r" + std::to_string(job.rho);
    id += "-s" + std::to_string(job.seed);
    InstanceCheck& chk = res.checks[i];
    try {
      InstanceParams params = base;
      params.rho_max = job.rho;
      instances[i] = generate_instance(params, job.seed);
      chk = check_instance(instances[i], cfg.suite, cfg.tol, cfg.rho_mode, id);
    } catch (const GenerationFailure&) {
      chk.row.instance_id = id;
      chk.row.status = "generation-failure";
    } catch (...) {
      errors[i] = std::current_exception();
    }
    chk.row.seed = job.seed;
    chk.row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& chk = res.checks[i];
    if (chk.row.status == "generation-failure") ++res.generation_failures;
    if (!chk.violation) continue;
    ++res.violations;
    res.violating.push_back(instances[i]);
    if (cfg.reproducer_dir) {
      auto path = *cfg.reproducer_dir / ("repro-" + chk.row.instance_id + ".json");
      save_instance(path, instances[i]);
      res.reproducers.push_back(std::move(path));
    }
  }
  return res;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  auto number = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad seed list '" + text + "'");
    try {
      return std::stoull(s);
    } catch (const std::out_of_range&) {
      throw InvalidInput("seed out of range in '" + text + "'");
    }
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string part = text.substr(pos, comma - pos);
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(number(part));
    } else {
      const auto a = number(part.substr(0, dots));
      const auto b = number(part.substr(dots + 2));
      if (b < a) throw InvalidInput("empty seed range '" + part + "'");
      if (b - a >= 100'000'000) throw InvalidInput("seed range too long '" + part + "'");
      for (auto s = a;; ++s) {
        out.push_back(s);
        if (s == b) break;
      }
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace commlab
