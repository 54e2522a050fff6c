#pragma once

// Exact Shannon quantities over explicit finite distributions on a domain.
//
// Random variables are deterministic functions of the cell: the party inputs
// X_1..X_l, the selected box T, and an optional color F. All values are in
// bits with 0 log 0 = 0. Conditional quantities come from joint-entropy
// differences, never from per-condition renormalisation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commlab/core.hpp"
#include "commlab/functions.hpp"
#include "commlab/kernels.hpp"

namespace commlab {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kNormalizationTolerance = 1e-12;

class JointDistribution {
 public:
  JointDistribution() = default;
  // Throws InvalidInput on negative or non-finite entries, or when the total
  // is not within 1e-12 of one.
  JointDistribution(DomainShape shape, std::vector<double> p);

  static JointDistribution uniform(const DomainShape& shape);
  static JointDistribution uniform_on(const DomainShape& shape, const IndexSet& cells);
  // Skewed random weights; each cell is zeroed with probability zero_fraction.
  static JointDistribution random(const DomainShape& shape, std::uint64_t seed,
                                  double zero_fraction = 0.0);

  // Conditioning on a cell set, renormalised. Throws DegenerateInstance when
  // the set has zero mass.
  JointDistribution restricted(const IndexSet& cells) const;

  const DomainShape& shape() const { return shape_; }
  double p(std::size_t linear) const { return p_[linear]; }
  const std::vector<double>& table() const { return p_; }
  double mass(const IndexSet& cells) const;

  bool operator==(const JointDistribution&) const = default;

 private:
  DomainShape shape_;
  std::vector<double> p_;
};

struct Var {
  enum class Kind { party, transcript, color };
  Kind kind = Kind::party;
  std::size_t party = 0;

  static Var X(std::size_t i) { return {Kind::party, i}; }
  static Var T() { return {Kind::transcript, 0}; }
  static Var F() { return {Kind::color, 0}; }

  bool operator==(const Var&) const = default;
};

using VarGroup = std::vector<Var>;

// Binds a distribution to the per-cell variable columns. Only cells with
// positive probability are kept.
class InfoModel {
 public:
  InfoModel(const JointDistribution& dist, std::optional<std::vector<std::uint32_t>> transcript = std::nullopt,
            std::optional<std::vector<ColorId>> color = std::nullopt);

  std::size_t arity() const { return arity_; }
  std::size_t support_size() const { return probs_.size(); }
  bool has_transcript() const { return transcript_.has_value(); }
  bool has_color() const { return color_.has_value(); }

  double entropy(const VarGroup& vars) const;
  double conditional_entropy(const VarGroup& s, const VarGroup& given) const;
  double mutual_information(const VarGroup& a, const VarGroup& b, const VarGroup& given = {}) const;

  // H(B|A) as sum over a of p(a) H(B | A = a), each term from a renormalised
  // slice. An independent route used to check the chain rule.
  double conditional_entropy_direct(const VarGroup& b, const VarGroup& a) const;

  // X_1 and (X_2..X_l): the two sides of every two-party quantity.
  VarGroup alice() const { return {Var::X(0)}; }
  VarGroup bob() const;

 private:
  std::uint32_t value(const Var& v, std::size_t row) const;
  kernels::Grouping grouping(const VarGroup& vars) const;

  std::size_t arity_ = 0;
  std::vector<double> probs_;
  std::vector<std::vector<std::uint32_t>> parties_;
  std::optional<std::vector<std::uint32_t>> transcript_;
  std::optional<std::vector<ColorId>> color_;
};

// Parsed H(S|U) or I(S:U|W). Names: X, Y (= X1, X2), X1..Xl, T, F.
struct InfoExpression {
  enum class Kind { entropy, mutual };
  Kind kind = Kind::entropy;
  VarGroup first;
  VarGroup second;  // mutual only
  VarGroup given;
};

// Throws InvalidInput on a malformed expression.
InfoExpression parse_expression(const std::string& text);

double info_quantity(const InfoModel& model, const InfoExpression& expr);
double info_quantity(const InfoModel& model, const std::string& expr);

// h(d) = d log(1/d) + (1-d) log(1/(1-d)); h(0) = h(1) = 0.
double binary_entropy(double delta);

struct TripleInformation {
  double value = 0.0;        // I(A:B) - I(A:B|W)
  double formula_gap = 0.0;  // |value - (H(W) - H(W|A) - H(W|B) + H(W|A,B))|
};

TripleInformation triple_information(const InfoModel& model, const VarGroup& a, const VarGroup& b,
                                     const VarGroup& w);

// I(X:T|Y) + I(Y:T|X). Throws InvalidInput if the support leaves the cover.
double internal_information_cost(const JointDistribution& dist, const Protocol& protocol);

enum class FMode { none, function, box_color };

struct ProfileOptions {
  const Target* target = nullptr;
  FMode f_mode = FMode::none;
  std::optional<IndexSet> restrict_to;          // condition on these cells first
  std::optional<std::vector<ColorId>> f_column;  // explicit per-cell F, overrides target
};

struct InfoProfile {
  std::size_t parties = 2;
  std::size_t support_size = 0;

  double h_x = 0, h_y = 0, h_xy = 0;
  double chain_rule_gap = 0;  // |H(X,Y) - H(X) - H(Y|X)| with H(Y|X) computed directly

  double h_t = 0;
  std::vector<double> h_t_given_x;    // per party
  double i_xy = 0;
  double i_xy_given_t = 0;
  double i_xyt = 0;                   // I(X:Y) - I(X:Y|T)
  double triple_formula_gap = 0;
  double ic = 0;                      // I(X:T|Y) + I(Y:T|X)
  double ic_identity_gap = 0;         // |IC - (H(T) - I(X:Y:T))|

  bool has_f = false;
  double h_f = 0;
  std::vector<double> h_f_given_x;    // per party
  std::vector<double> h_t_given_x_f;  // per party
  double h_f_given_all = 0;           // H(F | X_1..X_l)
  double i_xyf = 0;
  double i_xyf_gap = 0;               // |I(X:Y:F) - (H(F) - H(F|X) - H(F|Y))|, if H(F|X,Y)=0

  std::size_t rho_global = 1;         // rho(Pi)
  std::size_t rho_box_max = 1;        // max rho(R) over boxes carrying mass
  double expected_log_rho = 0;        // E[log2 rho(T)]

  double excluded_mass = 0;           // box-color mode
  std::vector<std::size_t> none_color_boxes;
  bool warning = false;
};

InfoProfile build_profile(const JointDistribution& dist, const Protocol& protocol,
                          const ProfileOptions& options = {});

}  // namespace commlab
