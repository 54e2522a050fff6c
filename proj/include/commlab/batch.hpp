#pragma once

// Seeded inequality suites. Rows are evaluated in parallel and returned in
// (rho_max, seed) order; reproducers for violations are written afterwards.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "commlab/info.hpp"
#include "commlab/instance_io.hpp"
#include "commlab/report.hpp"
#include "commlab/verify.hpp"

namespace commlab {

enum class Suite { main, transcript, ic, multiparty, tree };
enum class Generator { tree, random_bounded, windmill, trivial_merlin };

std::string to_string(Suite s);
Suite parse_suite(const std::string& text);
std::string to_string(Generator g);
Generator parse_generator(const std::string& text);

struct InstanceParams {
  Generator generator = Generator::random_bounded;
  std::size_t parties = 2;
  std::size_t max_side = 16;  // sides drawn from [1, max_side]
  std::size_t rho_max = 2;
};

// A seeded instance: cover, selector, a cover-colored function and a random
// distribution (explicit table). Throws GenerationFailure.
Instance generate_instance(const InstanceParams& params, std::uint64_t seed);

// Fixed instances.
Instance parity_tightness_instance();
Instance singleton_partition_instance(const FunctionSpec& f);  // uniform distribution
AMInstance trivial_merlin_am(const FunctionSpec& f);

struct SuiteConfig {
  Suite suite = Suite::main;
  Generator generator = Generator::random_bounded;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> rho_max{2};
  std::size_t max_side = 16;
  std::size_t parties = 3;  // multiparty suite only
  double tol = kDefaultTolerance;
  RhoMode rho_mode = RhoMode::global;
  std::optional<std::filesystem::path> reproducer_dir;  // none: keep in memory only
};

struct InstanceCheck {
  ReportRow row;
  InfoProfile profile;
  std::vector<MarginReport> margins;  // signed; identities as -gap
  bool violation = false;
  std::string fingerprint;
};

// All checks of `suite` on one instance. margin_main is always computed.
InstanceCheck check_instance(const Instance& inst, Suite suite, double tol, RhoMode rho_mode,
                             const std::string& id = "instance");

struct SuiteResult {
  std::vector<InstanceCheck> checks;
  std::vector<Instance> violating;  // same order as reproducers
  std::vector<std::filesystem::path> reproducers;
  std::size_t violations = 0;
  std::size_t generation_failures = 0;

  std::vector<ReportRow> rows() const;
};

SuiteResult run_suite(const SuiteConfig& cfg);

// "0..99", "7", "1,4,9" or combinations such as "0..3,10".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

}  // namespace commlab
