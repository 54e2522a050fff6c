#pragma once

// Target functions and relations, cover generators, protocols with error
// and Arthur-Merlin families.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "commlab/core.hpp"
#include "commlab/index_set.hpp"

namespace commlab {

using ColorId = std::uint32_t;

// Dense color table; ids are contiguous from 0 and all of them occur.
class ColoredFunction {
 public:
  ColoredFunction() = default;
  ColoredFunction(DomainShape shape, std::vector<ColorId> colors);

  const DomainShape& shape() const { return shape_; }
  ColorId color(std::size_t linear) const { return colors_[linear]; }
  const std::vector<ColorId>& colors() const { return colors_; }
  std::size_t color_count() const { return color_count_; }

  bool operator==(const ColoredFunction&) const = default;

 private:
  DomainShape shape_;
  std::vector<ColorId> colors_;
  std::size_t color_count_ = 0;
};

// Per-cell admissible colors over {0..color_count-1}; "smallest" is by id.
class Relation {
 public:
  Relation() = default;
  Relation(DomainShape shape, std::size_t color_count, std::vector<IndexSet> admissible);

  const DomainShape& shape() const { return shape_; }
  std::size_t color_count() const { return color_count_; }
  const IndexSet& admissible(std::size_t linear) const { return admissible_[linear]; }
  bool admits(std::size_t linear, ColorId z) const { return admissible_[linear].contains(z); }

  bool operator==(const Relation&) const = default;

 private:
  DomainShape shape_;
  std::size_t color_count_ = 0;
  std::vector<IndexSet> admissible_;
};

using Target = std::variant<ColoredFunction, Relation>;
const DomainShape& target_shape(const Target& target);

// Generator parameters. Kept as data so instance files can round-trip them.
struct FunctionSpec {
  enum class Kind { xor_fn, eq, matvec, constant, random, table };
  Kind kind = Kind::constant;
  unsigned n = 1;                   // bit width (xor, eq, matvec)
  unsigned ell = 2;                 // parties (matvec)
  std::vector<std::size_t> sizes;   // constant, random, table
  std::size_t colors = 2;           // random
  std::uint64_t seed = 0;           // random
  std::vector<ColorId> table;       // table

  bool operator==(const FunctionSpec&) const = default;
};

ColoredFunction gen_function(const FunctionSpec& spec);

ColoredFunction xor_function(unsigned n);
ColoredFunction eq_function(unsigned n);
// l parties: x_1..x_{l-1} are n-bit columns of A, x_l has l-1 bits; the
// color is A * x_l over GF(2). Bit j of an index is vector component j.
ColoredFunction matvec_function(unsigned ell, unsigned n);
ColoredFunction constant_function(const DomainShape& shape);
// Uniform colors in [0, colors), relabelled to keep ids contiguous.
ColoredFunction random_function(const DomainShape& shape, std::size_t colors, std::uint64_t seed);

struct RelationSpec {
  enum class Kind { approx_xor, table };
  Kind kind = Kind::approx_xor;
  unsigned n = 1;
  double delta = 0.0;
  std::vector<std::size_t> sizes;                     // table
  std::size_t colors = 0;                             // table
  std::vector<std::vector<ColorId>> admissible;       // table, per cell

  bool operator==(const RelationSpec&) const = default;
};

Relation gen_relation(const RelationSpec& spec);
// admissible(x,y) = { z : hamming(x xor y, z) <= floor(delta * n) }.
Relation approx_xor_relation(unsigned n, double delta);

// Cover generators.
Cover trivial_merlin_cover(const DomainShape& shape);
Cover windmill_cover();
// Two copies of the full 2x2 box: the tightness instance for the main
// inequality when paired with parity_selector().
Cover double_full_box_cover();
ExplicitSelector parity_selector();

struct RandomTreeParams {
  double stop_probability = 0.25;  // chance to stop at a splittable node
};
ProtocolTree random_tree(const DomainShape& shape, std::uint64_t seed, RandomTreeParams params = {});

struct RandomBoundedParams {
  std::size_t rho_max = 2;
  std::size_t extra = 4;
  std::size_t attempts_per_box = 1000;
  RandomTreeParams tree;
};
// Random tree partition plus `extra` random boxes, each rejected if it would
// push any cell above rho_max. Throws GenerationFailure when the attempt
// budget runs out.
Cover random_bounded_cover(const DomainShape& shape, const RandomBoundedParams& params,
                           std::uint64_t seed);

// Random function under which every box of the cover is monochromatic:
// boxes linked by overlap share one random color in [0, colors).
ColoredFunction cover_colored_function(const Cover& cover, std::size_t colors, std::uint64_t seed);

// Smallest common color of the box, if any.
std::optional<ColorId> monochromatic_color(const Box& box, const Target& target);

// Output maps of a protocol with error. Entries are indexed (input, box);
// kUndefined marks inputs that are not a row/column of the box.
class ErrorProtocol {
 public:
  static constexpr std::int32_t kUndefined = -1;

  ErrorProtocol() = default;
  // Throws InvalidInput unless two-party and the tables are defined exactly
  // on the (input, box) pairs where the input belongs to the box.
  ErrorProtocol(Protocol protocol, std::vector<std::int32_t> ga, std::vector<std::int32_t> gb);

  // gA = gB = the box's monochromatic color, or the color of its first cell
  // when the box is not monochromatic.
  static ErrorProtocol from_box_colors(Protocol protocol, const Target& target);

  const Protocol& protocol() const { return protocol_; }
  std::int32_t ga(std::size_t row, std::size_t box) const { return ga_[row * boxes() + box]; }
  std::int32_t gb(std::size_t col, std::size_t box) const { return gb_[col * boxes() + box]; }
  void set_ga(std::size_t row, std::size_t box, ColorId z);
  void set_gb(std::size_t col, std::size_t box, ColorId z);
  const std::vector<std::int32_t>& ga_table() const { return ga_; }
  const std::vector<std::int32_t>& gb_table() const { return gb_; }
  std::size_t boxes() const { return protocol_.cover().size(); }

  bool operator==(const ErrorProtocol&) const = default;

 private:
  Protocol protocol_;
  std::vector<std::int32_t> ga_;
  std::vector<std::int32_t> gb_;
};

// Cells where gA(x,t) = gB(y,t) equals f(x,y) (function) or is admissible
// (relation). Bit i set iff linear cell i is good.
IndexSet good_set(const ErrorProtocol& ep, const Target& target);

// A distribution over error protocols, uniform over branches.
class AMProtocol {
 public:
  AMProtocol() = default;
  explicit AMProtocol(std::vector<ErrorProtocol> branches);

  const std::vector<ErrorProtocol>& branches() const { return branches_; }
  const DomainShape& shape() const { return branches_.front().protocol().shape(); }

  bool operator==(const AMProtocol&) const = default;

 private:
  std::vector<ErrorProtocol> branches_;
};

std::string function_kind_name(FunctionSpec::Kind kind);

}  // namespace commlab
