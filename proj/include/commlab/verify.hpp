#pragma once

// Signed margins for the entropic forms of the protocol inequalities.
// margin >= 0 means the inequality holds on the instance; slack terms of the
// asymptotic statements are not modelled, so margins are exact.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "commlab/functions.hpp"
#include "commlab/info.hpp"

namespace commlab {

enum class RhoMode { global, max_box, expected };

std::string to_string(RhoMode mode);
RhoMode parse_rho_mode(const std::string& text);

// log2 of the thickness under the chosen aggregate reading.
double log_rho(const InfoProfile& profile, RhoMode mode);

struct MarginReport {
  std::string id;
  double margin = 0.0;
  std::vector<std::pair<std::string, double>> components;
  RhoMode rho_mode = RhoMode::global;
  std::string fingerprint;
  std::uint64_t seed = 0;
  bool flagged = false;  // relation mode with excluded cells
  double excluded_mass = 0.0;

  double component(const std::string& name) const;
};

// I(X:Y) - I(X:Y|T) + log rho.
MarginReport check_main_inequality(const InfoProfile& profile, RhoMode rho_mode = RhoMode::global);

enum class TranscriptMode { function, relation, restricted };

// H(T) - [H(F|X) + H(F|Y) + H(T|X,F) + H(T|Y,F) - log rho]. The profile must
// carry F: the function for `function`, the box color for `relation`, and for
// `restricted` a profile conditioned on the good set.
MarginReport check_transcript_bound(const InfoProfile& profile, TranscriptMode mode,
                                    RhoMode rho_mode = RhoMode::global);

// first: IC identity, margin = -|IC - (H(T) - I(X:Y:T))|.
// second: IC bound, margin = H(T) + log rho - IC.
std::pair<MarginReport, MarginReport> check_ic(const InfoProfile& profile, RhoMode rho_mode = RhoMode::global);

enum class MultipartyMode { transcript_only, with_f };

// H(T) - (1/(l-1)) [sum_i H(T|X_i) - log rho], or with F:
// H(T) - (1/(l-1)) [sum_i H(F|X_i) + sum_i H(T|X_i,F) - log rho].
MarginReport check_multiparty(const InfoProfile& profile, std::size_t ell, MultipartyMode mode,
                              RhoMode rho_mode = RhoMode::global);

// I(X:Y) - I(X:Y|T) with T the leaf of a deterministic tree.
MarginReport check_deterministic_monotonicity(const ProtocolTree& tree, const JointDistribution& dist);

enum class CorrectnessMode { per_input, uniform_error };

std::string to_string(CorrectnessMode mode);
CorrectnessMode parse_correctness(const std::string& text);

struct AMReport {
  CorrectnessMode correctness = CorrectnessMode::uniform_error;
  std::vector<double> branch_error;      // uniform-cell error per branch
  std::vector<std::size_t> good_sizes;   // |GOOD_r|
  double overall_error = 0.0;
  bool meets_two_thirds = false;         // overall success probability >= 2/3
  double cost = 0.0;                     // log2 max_r #boxes
  std::size_t r0 = 0;
  MarginReport restricted;               // transcript bound on GOOD_{r0}
  InfoProfile profile;                   // branch r0, uniform on GOOD_{r0}
  double h_f_given_x = 0.0;
  double h_f_given_y = 0.0;
  std::size_t rho_r0 = 1;
  double estimated_lower_bound = 0.0;    // H(F|X) + H(F|Y) - log2 rho(Pi_{r0})
};

// Throws DegenerateInstance when GOOD_{r0} is empty.
AMReport am_analyze(const AMProtocol& am, const Target& target, CorrectnessMode correctness);

}  // namespace commlab
