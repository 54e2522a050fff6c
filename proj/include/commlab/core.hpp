#pragma once

// Domains, boxes, covers, transcript selectors and protocol trees.
//
// A domain is a finite grid D = D_1 x ... x D_l (l >= 2). Cells are addressed
// either by coordinates or by a row-major linear index (last party fastest).
// A box is a product of per-party index sets; for l = 2 it is a combinatorial
// rectangle S x T. A cover is an ordered list of boxes whose union is D, and a
// protocol pairs a cover with a selector choosing, for every cell, one box
// that contains it (the transcript).

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "commlab/index_set.hpp"

namespace commlab {

using Coords = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 24;
inline constexpr std::size_t kDimensionCap = std::size_t{1} << 12;

class DomainShape {
 public:
  DomainShape() = default;
  explicit DomainShape(std::vector<std::size_t> sizes, std::size_t cell_cap = kDefaultCellCap);

  // Power-of-two grid with the given per-party bit widths.
  static DomainShape from_bits(const std::vector<unsigned>& bits,
                               std::size_t cell_cap = kDefaultCellCap);

  std::size_t arity() const { return sizes_.size(); }
  std::size_t size(std::size_t dim) const { return sizes_[dim]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t cell_count() const { return cells_; }

  std::size_t linear(std::span<const std::size_t> coords) const;
  Coords coords(std::size_t linear) const;
  std::size_t coord(std::size_t linear, std::size_t dim) const {
    return (linear / strides_[dim]) % sizes_[dim];
  }
  std::size_t stride(std::size_t dim) const { return strides_[dim]; }

  bool operator==(const DomainShape& o) const { return sizes_ == o.sizes_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t cells_ = 0;
};

class Box {
 public:
  Box() = default;
  explicit Box(std::vector<IndexSet> factors) : factors_(std::move(factors)) {}

  // Box from explicit index lists; throws InvalidInput when malformed.
  static Box from_lists(const DomainShape& shape,
                        const std::vector<std::vector<std::size_t>>& lists);
  static Box full(const DomainShape& shape);
  static Box singleton(const DomainShape& shape, std::size_t linear);

  std::size_t arity() const { return factors_.size(); }
  const IndexSet& factor(std::size_t dim) const { return factors_[dim]; }
  const std::vector<IndexSet>& factors() const { return factors_; }

  bool contains(const DomainShape& shape, std::size_t linear) const;
  bool contains_coords(std::span<const std::size_t> coords) const;
  std::size_t cell_count() const;

  // Visits the linear index of every cell of the box in ascending order.
  template <class Fn>
  void for_each_cell(const DomainShape& shape, Fn&& fn) const;

  std::vector<std::size_t> cells(const DomainShape& shape) const;

  // Throws InvalidInput on arity mismatch, empty factor or out-of-range index.
  void check_against(const DomainShape& shape) const;

  bool operator==(const Box&) const = default;
  auto operator<=>(const Box&) const = default;

 private:
  std::vector<IndexSet> factors_;
};

class Cover {
 public:
  Cover() = default;
  // Checks every box against the shape and that the list is nonempty.
  // Coverage itself is reported by validate_cover, not enforced here.
  Cover(DomainShape shape, std::vector<Box> boxes);

  const DomainShape& shape() const { return shape_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  const Box& box(std::size_t i) const { return boxes_[i]; }
  std::size_t size() const { return boxes_.size(); }

  bool operator==(const Cover&) const = default;

 private:
  DomainShape shape_;
  std::vector<Box> boxes_;
};

struct CoverageReport {
  bool covers_domain = false;
  bool is_partition = false;
  std::vector<std::size_t> uncovered;  // linear cell indices
};

CoverageReport validate_cover(const Cover& cover);

// Per-cell thickness: number of boxes containing each cell.
std::vector<std::uint32_t> cell_thickness(const Cover& cover);

struct ThicknessScope {
  enum class Kind { cell, box, global };
  Kind kind = Kind::global;
  std::size_t index = 0;

  static ThicknessScope cell(std::size_t linear) { return {Kind::cell, linear}; }
  static ThicknessScope box(std::size_t i) { return {Kind::box, i}; }
  static ThicknessScope global() { return {Kind::global, 0}; }
};

std::size_t thickness(const Cover& cover, ThicknessScope scope);

// rho(R) for every box: max cell thickness over the box.
std::vector<std::uint32_t> box_thickness(const Cover& cover,
                                         std::span<const std::uint32_t> per_cell);

// Selector kinds.
struct MinIndexSelector {
  bool operator==(const MinIndexSelector&) const = default;
};
struct SeededRandomSelector {
  std::uint64_t seed = 0;
  bool operator==(const SeededRandomSelector&) const = default;
};
struct ExplicitSelector {
  std::vector<std::uint32_t> table;  // linear cell -> box index
  bool operator==(const ExplicitSelector&) const = default;
};

using TranscriptSelector = std::variant<MinIndexSelector, SeededRandomSelector, ExplicitSelector>;

class Protocol {
 public:
  Protocol() = default;
  // Throws InvalidSelector when an explicit table has the wrong length or
  // names a box that does not contain its cell.
  Protocol(Cover cover, TranscriptSelector selector);

  const Cover& cover() const { return cover_; }
  const DomainShape& shape() const { return cover_.shape(); }
  const TranscriptSelector& selector() const { return selector_; }

  bool operator==(const Protocol&) const = default;

 private:
  Cover cover_;
  TranscriptSelector selector_;
};

// Box chosen for one cell. Throws UncoveredCell if no box contains it,
// InvalidSelector if an explicit table entry does not contain it.
std::size_t select_transcript(const Protocol& protocol, std::size_t linear);

// Transcript for every cell, same contract as select_transcript.
std::vector<std::uint32_t> transcript_table(const Protocol& protocol);

// Binary protocol tree. An internal node is owned by one party and splits that
// party's inherited index set into two nonempty halves; leaves are boxes.
struct TreeNode {
  std::size_t owner = 0;
  IndexSet left_part;
  IndexSet right_part;
  std::vector<TreeNode> children;  // empty for a leaf, two otherwise

  bool is_leaf() const { return children.empty(); }

  static TreeNode leaf() { return {}; }
  static TreeNode split(std::size_t owner, IndexSet left, IndexSet right, TreeNode l,
                        TreeNode r);

  bool operator==(const TreeNode&) const = default;
};

struct ProtocolTree {
  DomainShape shape;
  TreeNode root;
};

// Leaves in depth-first (left before right) order become the boxes; the
// selector is explicit. Throws InvalidTree on a malformed split.
Protocol compile_tree(const ProtocolTree& tree);

template <class Fn>
void Box::for_each_cell(const DomainShape& shape, Fn&& fn) const {
  const std::size_t arity = factors_.size();
  std::vector<std::vector<std::size_t>> lists(arity);
  for (std::size_t d = 0; d < arity; ++d) {
    lists[d] = factors_[d].members();
    if (lists[d].empty()) return;
  }
  std::vector<std::size_t> pos(arity, 0);
  while (true) {
    std::size_t lin = 0;
    for (std::size_t d = 0; d < arity; ++d) lin += lists[d][pos[d]] * shape.stride(d);
    fn(lin);
    std::size_t d = arity;
    while (d > 0) {
      --d;
      if (++pos[d] < lists[d].size()) break;
      pos[d] = 0;
      if (d == 0) return;
    }
  }
}

}  // namespace commlab
