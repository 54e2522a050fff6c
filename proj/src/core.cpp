#include "commlab/core.hpp"

#include <algorithm>
#include <string>

#include "commlab/error.hpp"
#include "commlab/kernels.hpp"

namespace commlab {

namespace {

std::string cell_name(const DomainShape& shape, std::size_t linear) {
  std::string s = "(";
  auto c = shape.coords(linear);
  for (std::size_t d = 0; d < c.size(); ++d) {
    if (d) s += ",";
    s += std::to_string(c[d]);
  }
  return s + ")";
}

}  // namespace

DomainShape::DomainShape(std::vector<std::size_t> sizes, std::size_t cell_cap)
    : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw InvalidInput("domain needs at least two parties");
  cells_ = 1;
  for (auto s : sizes_) {
    if (s == 0) throw InvalidInput("domain dimension of size 0");
    if (s > kDimensionCap)
      throw InvalidInput("domain dimension " + std::to_string(s) + " exceeds cap " +
                         std::to_string(kDimensionCap));
    if (cells_ > cell_cap / s)
      throw InvalidInput("domain exceeds cell cap " + std::to_string(cell_cap));
    cells_ *= s;
  }
  strides_.assign(sizes_.size(), 1);
  for (std::size_t d = sizes_.size() - 1; d > 0; --d) strides_[d - 1] = strides_[d] * sizes_[d];
}

DomainShape DomainShape::from_bits(const std::vector<unsigned>& bits, std::size_t cell_cap) {
  std::vector<std::size_t> sizes;
  for (auto b : bits) {
    if (b > 12) throw InvalidInput("bit width " + std::to_string(b) + " exceeds 12");
    sizes.push_back(std::size_t{1} << b);
  }
  return DomainShape(std::move(sizes), cell_cap);
}

std::size_t DomainShape::linear(std::span<const std::size_t> coords) const {
  if (coords.size() != sizes_.size()) throw InvalidInput("coordinate arity mismatch");
  std::size_t lin = 0;
  for (std::size_t d = 0; d < coords.size(); ++d) {
    if (coords[d] >= sizes_[d]) throw InvalidInput("coordinate out of range");
    lin += coords[d] * strides_[d];
  }
  return lin;
}

Coords DomainShape::coords(std::size_t linear) const {
  Coords c(sizes_.size());
  for (std::size_t d = 0; d < sizes_.size(); ++d) c[d] = coord(linear, d);
  return c;
}

Box Box::from_lists(const DomainShape& shape, const std::vector<std::vector<std::size_t>>& lists) {
  if (lists.size() != shape.arity())
    throw InvalidInput("box has " + std::to_string(lists.size()) + " factors, domain has " +
                       std::to_string(shape.arity()));
  std::vector<IndexSet> factors;
  for (std::size_t d = 0; d < lists.size(); ++d) {
    IndexSet s(shape.size(d));
    for (auto i : lists[d]) {
      if (i >= shape.size(d))
        throw InvalidInput("box index " + std::to_string(i) + " out of range in dimension " +
                           std::to_string(d));
      s.insert(i);
    }
    if (s.empty()) throw InvalidInput("box has an empty factor in dimension " + std::to_string(d));
    factors.push_back(std::move(s));
  }
  return Box(std::move(factors));
}

Box Box::full(const DomainShape& shape) {
  std::vector<IndexSet> factors;
  for (std::size_t d = 0; d < shape.arity(); ++d) factors.push_back(IndexSet::full(shape.size(d)));
  return Box(std::move(factors));
}

Box Box::singleton(const DomainShape& shape, std::size_t linear) {
  std::vector<IndexSet> factors;
  for (std::size_t d = 0; d < shape.arity(); ++d) {
    IndexSet s(shape.size(d));
    s.insert(shape.coord(linear, d));
    factors.push_back(std::move(s));
  }
  return Box(std::move(factors));
}

bool Box::contains(const DomainShape& shape, std::size_t linear) const {
  for (std::size_t d = 0; d < factors_.size(); ++d)
    if (!factors_[d].contains(shape.coord(linear, d))) return false;
  return true;
}

bool Box::contains_coords(std::span<const std::size_t> coords) const {
  if (coords.size() != factors_.size()) return false;
  for (std::size_t d = 0; d < factors_.size(); ++d)
    if (!factors_[d].contains(coords[d])) return false;
  return true;
}

std::size_t Box::cell_count() const {
  std::size_t n = 1;
  for (const auto& f : factors_) n *= f.count();
  return n;
}

std::vector<std::size_t> Box::cells(const DomainShape& shape) const {
  std::vector<std::size_t> out;
  out.reserve(cell_count());
  for_each_cell(shape, [&](std::size_t c) { out.push_back(c); });
  return out;
}

void Box::check_against(const DomainShape& shape) const {
  if (factors_.size() != shape.arity())
    throw InvalidInput("box arity " + std::to_string(factors_.size()) + " does not match domain");
  for (std::size_t d = 0; d < factors_.size(); ++d) {
    const auto& f = factors_[d];
    if (f.universe() != shape.size(d))
      throw InvalidInput("box factor universe mismatch in dimension " + std::to_string(d));
    if (f.empty()) throw InvalidInput("box has an empty factor in dimension " + std::to_string(d));
  }
}

Cover::Cover(DomainShape shape, std::vector<Box> boxes)
    : shape_(std::move(shape)), boxes_(std::move(boxes)) {
  if (boxes_.empty()) throw InvalidInput("cover has no boxes");
  if (boxes_.size() > UINT32_MAX) throw InvalidInput("too many boxes");
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    try {
      boxes_[i].check_against(shape_);
    } catch (const InvalidInput& e) {
      throw InvalidInput("box " + std::to_string(i) + ": " + e.what());
    }
  }
}

std::vector<std::uint32_t> cell_thickness(const Cover& cover) {
  return kernels::parallel::cell_thickness(cover);
}

CoverageReport validate_cover(const Cover& cover) {
  auto per_cell = cell_thickness(cover);
  CoverageReport r;
  bool exact = true;
  for (std::size_t c = 0; c < per_cell.size(); ++c) {
    if (per_cell[c] == 0) r.uncovered.push_back(c);
    if (per_cell[c] != 1) exact = false;
  }
  r.covers_domain = r.uncovered.empty();
  r.is_partition = r.covers_domain && exact;
  return r;
}

std::vector<std::uint32_t> box_thickness(const Cover& cover,
                                         std::span<const std::uint32_t> per_cell) {
  std::vector<std::uint32_t> out(cover.size(), 0);
  for (std::size_t i = 0; i < cover.size(); ++i) {
    std::uint32_t m = 0;
    cover.box(i).for_each_cell(cover.shape(), [&](std::size_t c) { m = std::max(m, per_cell[c]); });
    out[i] = m;
  }
  return out;
}

std::size_t thickness(const Cover& cover, ThicknessScope scope) {
  const auto& shape = cover.shape();
  switch (scope.kind) {
    case ThicknessScope::Kind::cell: {
      if (scope.index >= shape.cell_count())
        throw InvalidInput("cell index " + std::to_string(scope.index) + " out of range");
      std::size_t n = 0;
      for (const auto& b : cover.boxes()) n += b.contains(shape, scope.index) ? 1 : 0;
      return n;
    }
    case ThicknessScope::Kind::box: {
      if (scope.index >= cover.size())
        throw InvalidInput("box index " + std::to_string(scope.index) + " out of range");
      auto per_cell = cell_thickness(cover);
      std::uint32_t m = 0;
      cover.box(scope.index).for_each_cell(shape, [&](std::size_t c) { m = std::max(m, per_cell[c]); });
      return m;
    }
    case ThicknessScope::Kind::global: {
      auto per_cell = cell_thickness(cover);
      return per_cell.empty() ? 0 : *std::max_element(per_cell.begin(), per_cell.end());
    }
  }
  return 0;
}

Protocol::Protocol(Cover cover, TranscriptSelector selector)
    : cover_(std::move(cover)), selector_(std::move(selector)) {
  if (const auto* ex = std::get_if<ExplicitSelector>(&selector_)) {
    const auto& shape = cover_.shape();
    if (ex->table.size() != shape.cell_count())
      throw InvalidSelector("explicit selector has " + std::to_string(ex->table.size()) +
                            " entries, domain has " + std::to_string(shape.cell_count()) +
                            " cells");
    for (std::size_t c = 0; c < ex->table.size(); ++c) {
      const auto b = ex->table[c];
      if (b >= cover_.size() || !cover_.box(b).contains(shape, c))
        throw InvalidSelector("explicit selector maps cell " + cell_name(shape, c) +
                              " to box " + std::to_string(b) + " which does not contain it");
    }
  }
}

std::size_t select_transcript(const Protocol& protocol, std::size_t linear) {
  const auto& shape = protocol.shape();
  if (linear >= shape.cell_count())
    throw InvalidInput("cell index " + std::to_string(linear) + " out of range");
  std::vector<std::uint32_t> containing;
  for (std::size_t i = 0; i < protocol.cover().size(); ++i)
    if (protocol.cover().box(i).contains(shape, linear))
      containing.push_back(static_cast<std::uint32_t>(i));
  if (containing.empty())
    throw UncoveredCell("cell " + cell_name(shape, linear) + " is covered by no box");
  return kernels::choose_box(protocol.selector(), linear, containing);
}

std::vector<std::uint32_t> transcript_table(const Protocol& protocol) {
  return kernels::parallel::transcript_table(protocol);
}

TreeNode TreeNode::split(std::size_t owner, IndexSet left, IndexSet right, TreeNode l, TreeNode r) {
  TreeNode n;
  n.owner = owner;
  n.left_part = std::move(left);
  n.right_part = std::move(right);
  n.children.push_back(std::move(l));
  n.children.push_back(std::move(r));
  return n;
}

namespace {

void compile_node(const DomainShape& shape, const TreeNode& node, std::vector<IndexSet>& current,
                  std::vector<Box>& leaves) {
  if (node.is_leaf()) {
    leaves.emplace_back(current);
    return;
  }
  if (node.children.size() != 2) throw InvalidTree("internal node must have exactly two children");
  if (node.owner >= shape.arity())
    throw InvalidTree("node owner " + std::to_string(node.owner) + " is not a party");
  const auto& inherited = current[node.owner];
  const auto& l = node.left_part;
  const auto& r = node.right_part;
  if (l.universe() != inherited.universe() || r.universe() != inherited.universe())
    throw InvalidTree("split parts have the wrong universe");
  if (l.empty() || r.empty()) throw InvalidTree("split has an empty part");
  if (l.intersects(r)) throw InvalidTree("split parts overlap");
  if ((l | r) != inherited) throw InvalidTree("split parts do not partition the inherited set");

  IndexSet saved = inherited;
  current[node.owner] = l;
  compile_node(shape, node.children[0], current, leaves);
  current[node.owner] = r;
  compile_node(shape, node.children[1], current, leaves);
  current[node.owner] = std::move(saved);
}

}  // namespace

Protocol compile_tree(const ProtocolTree& tree) {
  const auto& shape = tree.shape;
  std::vector<IndexSet> current;
  for (std::size_t d = 0; d < shape.arity(); ++d) current.push_back(IndexSet::full(shape.size(d)));
  std::vector<Box> leaves;
  compile_node(shape, tree.root, current, leaves);

  ExplicitSelector sel;
  sel.table.assign(shape.cell_count(), 0);
  for (std::size_t i = 0; i < leaves.size(); ++i)
    leaves[i].for_each_cell(shape, [&](std::size_t c) { sel.table[c] = static_cast<std::uint32_t>(i); });
  return Protocol(Cover(shape, std::move(leaves)), std::move(sel));
}

}  // namespace commlab
