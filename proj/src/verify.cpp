#include "commlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commlab/error.hpp"

namespace commlab {

std::string to_string(RhoMode mode) {
  switch (mode) {
    case RhoMode::global: return "global";
    case RhoMode::max_box: return "max-box";
    case RhoMode::expected: return "expected";
  }
  return "?";
}

RhoMode parse_rho_mode(const std::string& text) {
  if (text == "global") return RhoMode::global;
  if (text == "max-box") return RhoMode::max_box;
  if (text == "expected") return RhoMode::expected;
  throw InvalidInput("unknown rho mode '" + text + "'");
}

std::string to_string(CorrectnessMode mode) {
  return mode == CorrectnessMode::per_input ? "per-input" : "uniform";
}

CorrectnessMode parse_correctness(const std::string& text) {
  if (text == "per-input" || text == "per-input-2/3") return CorrectnessMode::per_input;
  if (text == "uniform" || text == "uniform-error") return CorrectnessMode::uniform_error;
  throw InvalidInput("unknown correctness mode '" + text + "'");
}

double log_rho(const InfoProfile& profile, RhoMode mode) {
  switch (mode) {
    case RhoMode::global: return std::log2(static_cast<double>(profile.rho_global));
    case RhoMode::max_box: return std::log2(static_cast<double>(profile.rho_box_max));
    case RhoMode::expected: return profile.expected_log_rho;
  }
  return 0.0;
}

double MarginReport::component(const std::string& name) const {
  for (const auto& [k, v] : components)
    if (k == name) return v;
  throw InvalidInput("report " + id + " has no component " + name);
}

MarginReport check_main_inequality(const InfoProfile& profile, RhoMode rho_mode) {
  MarginReport r;
  r.id = "main";
  r.rho_mode = rho_mode;
  const double lr = log_rho(profile, rho_mode);
  r.margin = profile.i_xy - profile.i_xy_given_t + lr;
  r.components = {{"I(X:Y)", profile.i_xy}, {"I(X:Y|T)", profile.i_xy_given_t}, {"log_rho", lr}};
  return r;
}

MarginReport check_transcript_bound(const InfoProfile& profile, TranscriptMode mode, RhoMode rho_mode) {
  if (!profile.has_f) throw InvalidInput("transcript bound needs a profile with F");
  if (profile.parties != 2) throw InvalidInput("transcript bound is two-party; use check_multiparty");
  MarginReport r;
  switch (mode) {
    case TranscriptMode::function: r.id = "transcript-function"; break;
    case TranscriptMode::relation: r.id = "transcript-relation"; break;
    case TranscriptMode::restricted: r.id = "transcript-restricted"; break;
  }
  r.rho_mode = rho_mode;
  const double lr = log_rho(profile, rho_mode);
  const double rhs = profile.h_f_given_x[0] + profile.h_f_given_x[1] + profile.h_t_given_x_f[0] +
                     profile.h_t_given_x_f[1] - lr;
  r.margin = profile.h_t - rhs;
  r.components = {{"H(T)", profile.h_t},
                  {"H(F|X)", profile.h_f_given_x[0]},
                  {"H(F|Y)", profile.h_f_given_x[1]},
                  {"H(T|X,F)", profile.h_t_given_x_f[0]},
                  {"H(T|Y,F)", profile.h_t_given_x_f[1]},
                  {"log_rho", lr}};
  if (mode == TranscriptMode::relation && profile.warning) {
    r.flagged = true;
    r.excluded_mass = profile.excluded_mass;
  }
  return r;
}

std::pair<MarginReport, MarginReport> check_ic(const InfoProfile& profile, RhoMode rho_mode) {
  MarginReport identity;
  identity.id = "ic-identity";
  identity.rho_mode = rho_mode;
  const double rhs = profile.h_t - profile.i_xyt;
  const double gap = std::abs(profile.ic - rhs);
  identity.margin = -gap;
  identity.components = {{"IC", profile.ic}, {"H(T)", profile.h_t}, {"I(X:Y:T)", profile.i_xyt}, {"gap", gap}};

  MarginReport bound;
  bound.id = "ic-bound";
  bound.rho_mode = rho_mode;
  const double lr = log_rho(profile, rho_mode);
  bound.margin = profile.h_t + lr - profile.ic;
  bound.components = {{"IC", profile.ic}, {"H(T)", profile.h_t}, {"log_rho", lr}};
  return {identity, bound};
}

MarginReport check_multiparty(const InfoProfile& profile, std::size_t ell, MultipartyMode mode,
                              RhoMode rho_mode) {
  if (ell < 2) throw InvalidInput("multiparty check needs at least two parties");
  if (ell != profile.parties)
    throw InvalidInput("multiparty check for " + std::to_string(ell) + " parties on a " +
                       std::to_string(profile.parties) + "-party profile");
  MarginReport r;
  r.rho_mode = rho_mode;
  const double lr = log_rho(profile, rho_mode);
  const double k = static_cast<double>(ell - 1);
  const double sum_t = std::accumulate(profile.h_t_given_x.begin(), profile.h_t_given_x.end(), 0.0);
  if (mode == MultipartyMode::transcript_only) {
    r.id = "multiparty-transcript";
    r.margin = profile.h_t - (sum_t - lr) / k;
    r.components = {{"H(T)", profile.h_t}, {"sum H(T|X_i)", sum_t}, {"log_rho", lr}};
  } else {
    if (!profile.has_f) throw InvalidInput("multiparty with-f mode needs a profile with F");
    const double sum_f = std::accumulate(profile.h_f_given_x.begin(), profile.h_f_given_x.end(), 0.0);
    const double sum_tf = std::accumulate(profile.h_t_given_x_f.begin(), profile.h_t_given_x_f.end(), 0.0);
    r.id = "multiparty-with-f";
    r.margin = profile.h_t - (sum_f + sum_tf - lr) / k;
    r.components = {{"H(T)", profile.h_t},
                    {"sum H(F|X_i)", sum_f},
                    {"sum H(T|X_i,F)", sum_tf},
                    {"log_rho", lr}};
  }
  return r;
}

MarginReport check_deterministic_monotonicity(const ProtocolTree& tree, const JointDistribution& dist) {
  const Protocol p = compile_tree(tree);
  const InfoProfile prof = build_profile(dist, p);
  MarginReport r;
  r.id = "tree-monotonicity";
  r.margin = prof.i_xy - prof.i_xy_given_t;
  r.components = {{"I(X:Y)", prof.i_xy}, {"I(X:Y|T)", prof.i_xy_given_t}};
  return r;
}

AMReport am_analyze(const AMProtocol& am, const Target& target, CorrectnessMode correctness) {
  const auto& shape = am.shape();
  if (!(target_shape(target) == shape)) throw InvalidInput("AM protocol and target have different shapes");
  const std::size_t cells = shape.cell_count();
  const std::size_t nb = am.branches().size();

  AMReport rep;
  rep.correctness = correctness;
  std::vector<IndexSet> good;
  std::size_t max_boxes = 0;
  for (const auto& ep : am.branches()) {
    good.push_back(good_set(ep, target));
    rep.good_sizes.push_back(good.back().count());
    rep.branch_error.push_back(1.0 - static_cast<double>(rep.good_sizes.back()) / static_cast<double>(cells));
    max_boxes = std::max(max_boxes, ep.boxes());
  }
  rep.cost = std::log2(static_cast<double>(max_boxes));
  rep.r0 = static_cast<std::size_t>(std::max_element(rep.good_sizes.begin(), rep.good_sizes.end()) -
                                    rep.good_sizes.begin());  // first maximum

  if (correctness == CorrectnessMode::uniform_error) {
    rep.overall_error = std::accumulate(rep.branch_error.begin(), rep.branch_error.end(), 0.0) /
                        static_cast<double>(nb);
  } else {
    std::size_t worst_failures = 0;
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t failures = 0;
      for (const auto& g : good) failures += g.contains(c) ? 0 : 1;
      worst_failures = std::max(worst_failures, failures);
    }
    rep.overall_error = static_cast<double>(worst_failures) / static_cast<double>(nb);
  }
  // Success probability >= 2/3, compared exactly on integers where possible.
  rep.meets_two_thirds = 3.0 * (1.0 - rep.overall_error) >= 2.0 - 1e-12;

  const IndexSet& good0 = good[rep.r0];
  if (good0.empty()) throw DegenerateInstance("GOOD set of the best branch is empty");
  const auto& ep = am.branches()[rep.r0];
  const auto transcript = transcript_table(ep.protocol());
  std::vector<ColorId> fcol(cells, 0);
  good0.for_each([&](std::size_t c) {
    fcol[c] = static_cast<ColorId>(ep.ga(shape.coord(c, 0), transcript[c]));
  });
  ProfileOptions opts;
  opts.f_column = std::move(fcol);
  rep.profile = build_profile(JointDistribution::uniform_on(shape, good0), ep.protocol(), opts);
  rep.restricted = check_transcript_bound(rep.profile, TranscriptMode::restricted, RhoMode::global);
  rep.h_f_given_x = rep.profile.h_f_given_x[0];
  rep.h_f_given_y = rep.profile.h_f_given_x[1];
  rep.rho_r0 = rep.profile.rho_global;
  rep.estimated_lower_bound =
      rep.h_f_given_x + rep.h_f_given_y - std::log2(static_cast<double>(rep.rho_r0));
  return rep;
}

}  // namespace commlab
