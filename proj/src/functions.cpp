#include "commlab/functions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "commlab/error.hpp"
#include "commlab/rng.hpp"

namespace commlab {

namespace {

void check_same_shape(const DomainShape& a, const DomainShape& b) {
  if (!(a == b)) throw InvalidInput("shape mismatch between box/protocol and target");
}

std::vector<ColorId> compact_ids(std::vector<ColorId> colors) {
  std::vector<ColorId> used(colors);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (auto& c : colors)
    c = static_cast<ColorId>(std::lower_bound(used.begin(), used.end(), c) - used.begin());
  return colors;
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

ColoredFunction::ColoredFunction(DomainShape shape, std::vector<ColorId> colors)
    : shape_(std::move(shape)), colors_(std::move(colors)) {
  if (colors_.size() != shape_.cell_count())
    throw InvalidInput("color table has " + std::to_string(colors_.size()) + " entries, domain has " +
                       std::to_string(shape_.cell_count()));
  ColorId max = 0;
  for (auto c : colors_) max = std::max(max, c);
  std::vector<bool> seen(static_cast<std::size_t>(max) + 1, false);
  for (auto c : colors_) seen[c] = true;
  for (std::size_t c = 0; c < seen.size(); ++c)
    if (!seen[c]) throw InvalidInput("color ids are not contiguous: id " + std::to_string(c) + " unused");
  color_count_ = seen.size();
}

Relation::Relation(DomainShape shape, std::size_t color_count, std::vector<IndexSet> admissible)
    : shape_(std::move(shape)), color_count_(color_count), admissible_(std::move(admissible)) {
  if (admissible_.size() != shape_.cell_count())
    throw InvalidInput("relation table size does not match domain");
  for (std::size_t c = 0; c < admissible_.size(); ++c) {
    if (admissible_[c].universe() != color_count_)
      throw InvalidInput("relation admissible set has the wrong color universe at cell " +
                         std::to_string(c));
    if (admissible_[c].empty())
      throw InvalidInput("relation admits no color at cell " + std::to_string(c));
  }
}

const DomainShape& target_shape(const Target& target) {
  return std::visit([](const auto& t) -> const DomainShape& { return t.shape(); }, target);
}

ColoredFunction xor_function(unsigned n) {
  DomainShape shape = DomainShape::from_bits({n, n});
  std::vector<ColorId> colors(shape.cell_count());
  for (std::size_t c = 0; c < colors.size(); ++c)
    colors[c] = static_cast<ColorId>(shape.coord(c, 0) ^ shape.coord(c, 1));
  return ColoredFunction(std::move(shape), std::move(colors));
}

ColoredFunction eq_function(unsigned n) {
  DomainShape shape = DomainShape::from_bits({n, n});
  std::vector<ColorId> colors(shape.cell_count());
  for (std::size_t c = 0; c < colors.size(); ++c)
    colors[c] = shape.coord(c, 0) == shape.coord(c, 1) ? 1 : 0;
  return ColoredFunction(std::move(shape), std::move(colors));
}

ColoredFunction matvec_function(unsigned ell, unsigned n) {
  if (ell < 2) throw InvalidInput("matvec needs at least two parties");
  std::vector<unsigned> bits(ell - 1, n);
  bits.push_back(ell - 1);
  DomainShape shape = DomainShape::from_bits(bits);
  std::vector<ColorId> colors(shape.cell_count());
  for (std::size_t c = 0; c < colors.size(); ++c) {
    const std::size_t v = shape.coord(c, ell - 1);
    std::size_t out = 0;
    for (unsigned j = 0; j + 1 < ell; ++j)
      if ((v >> j) & 1u) out ^= shape.coord(c, j);
    colors[c] = static_cast<ColorId>(out);
  }
  return ColoredFunction(std::move(shape), std::move(colors));
}

ColoredFunction constant_function(const DomainShape& shape) {
  return ColoredFunction(shape, std::vector<ColorId>(shape.cell_count(), 0));
}

ColoredFunction random_function(const DomainShape& shape, std::size_t colors, std::uint64_t seed) {
  if (colors == 0) throw InvalidInput("random function needs at least one color");
  Rng rng(seed);
  std::vector<ColorId> table(shape.cell_count());
  for (auto& c : table) c = static_cast<ColorId>(rng.below(colors));
  return ColoredFunction(shape, compact_ids(std::move(table)));
}

ColoredFunction gen_function(const FunctionSpec& spec) {
  switch (spec.kind) {
    case FunctionSpec::Kind::xor_fn:
      return xor_function(spec.n);
    case FunctionSpec::Kind::eq:
      return eq_function(spec.n);
    case FunctionSpec::Kind::matvec:
      return matvec_function(spec.ell, spec.n);
    case FunctionSpec::Kind::constant:
      return constant_function(DomainShape(spec.sizes));
    case FunctionSpec::Kind::random:
      return random_function(DomainShape(spec.sizes), spec.colors, spec.seed);
    case FunctionSpec::Kind::table:
      return ColoredFunction(DomainShape(spec.sizes), spec.table);
  }
  throw InvalidInput("unknown function kind");
}

std::string function_kind_name(FunctionSpec::Kind kind) {
  switch (kind) {
    case FunctionSpec::Kind::xor_fn: return "xor";
    case FunctionSpec::Kind::eq: return "eq";
    case FunctionSpec::Kind::matvec: return "matvec";
    case FunctionSpec::Kind::constant: return "constant";
    case FunctionSpec::Kind::random: return "random";
    case FunctionSpec::Kind::table: return "table";
  }
  return "?";
}

Relation approx_xor_relation(unsigned n, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidInput("delta must lie in [0, 1]");
  DomainShape shape = DomainShape::from_bits({n, n});
  const std::size_t colors = std::size_t{1} << n;
  const auto radius = static_cast<unsigned>(std::floor(delta * n + 1e-9));
  std::vector<IndexSet> admissible;
  admissible.reserve(shape.cell_count());
  for (std::size_t c = 0; c < shape.cell_count(); ++c) {
    const std::size_t center = shape.coord(c, 0) ^ shape.coord(c, 1);
    IndexSet s(colors);
    for (std::size_t z = 0; z < colors; ++z)
      if (static_cast<unsigned>(std::popcount(center ^ z)) <= radius) s.insert(z);
    admissible.push_back(std::move(s));
  }
  return Relation(std::move(shape), colors, std::move(admissible));
}

Relation gen_relation(const RelationSpec& spec) {
  if (spec.kind == RelationSpec::Kind::approx_xor) return approx_xor_relation(spec.n, spec.delta);
  DomainShape shape(spec.sizes);
  if (spec.admissible.size() != shape.cell_count())
    throw InvalidInput("relation table size does not match domain");
  std::vector<IndexSet> admissible;
  for (const auto& cell : spec.admissible) {
    IndexSet s(spec.colors);
    for (auto z : cell) {
      if (z >= spec.colors) throw InvalidInput("relation color " + std::to_string(z) + " out of range");
      s.insert(z);
    }
    admissible.push_back(std::move(s));
  }
  return Relation(std::move(shape), spec.colors, std::move(admissible));
}

Cover trivial_merlin_cover(const DomainShape& shape) {
  std::vector<Box> boxes;
  boxes.reserve(shape.cell_count());
  for (std::size_t c = 0; c < shape.cell_count(); ++c) boxes.push_back(Box::singleton(shape, c));
  return Cover(shape, std::move(boxes));
}

Cover windmill_cover() {
  DomainShape shape({4, 4});
  std::vector<Box> boxes{
      Box::from_lists(shape, {{0}, {0, 1, 2}}),
      Box::from_lists(shape, {{0, 1, 2}, {3}}),
      Box::from_lists(shape, {{3}, {1, 2, 3}}),
      Box::from_lists(shape, {{1, 2, 3}, {0}}),
      Box::from_lists(shape, {{1, 2}, {1, 2}}),
  };
  return Cover(std::move(shape), std::move(boxes));
}

Cover double_full_box_cover() {
  DomainShape shape({2, 2});
  return Cover(shape, {Box::full(shape), Box::full(shape)});
}

ExplicitSelector parity_selector() {
  DomainShape shape({2, 2});
  ExplicitSelector sel;
  sel.table.resize(4);
  for (std::size_t c = 0; c < 4; ++c) sel.table[c] = (shape.coord(c, 0) ^ shape.coord(c, 1)) ? 1 : 0;
  return sel;
}

namespace {

TreeNode grow(const DomainShape& shape, std::vector<IndexSet>& current, Rng& rng,
              const RandomTreeParams& params) {
  std::vector<std::size_t> splittable;
  for (std::size_t d = 0; d < current.size(); ++d)
    if (current[d].count() > 1) splittable.push_back(d);
  if (splittable.empty() || rng.coin(params.stop_probability)) return TreeNode::leaf();

  const std::size_t owner = splittable[rng.below(splittable.size())];
  auto members = current[owner].members();
  shuffle(members, rng);
  const std::size_t k = 1 + rng.below(members.size() - 1);
  IndexSet left(shape.size(owner));
  IndexSet right(shape.size(owner));
  for (std::size_t i = 0; i < members.size(); ++i) (i < k ? left : right).insert(members[i]);

  IndexSet saved = current[owner];
  current[owner] = left;
  TreeNode l = grow(shape, current, rng, params);
  current[owner] = right;
  TreeNode r = grow(shape, current, rng, params);
  current[owner] = std::move(saved);
  return TreeNode::split(owner, std::move(left), std::move(right), std::move(l), std::move(r));
}

Box random_box(const DomainShape& shape, Rng& rng) {
  std::vector<IndexSet> factors;
  for (std::size_t d = 0; d < shape.arity(); ++d) {
    const double u = rng.uniform();
    const double density = u * u;  // skew towards small boxes
    IndexSet s(shape.size(d));
    for (std::size_t i = 0; i < shape.size(d); ++i)
      if (rng.coin(density)) s.insert(i);
    if (s.empty()) s.insert(rng.below(shape.size(d)));
    factors.push_back(std::move(s));
  }
  return Box(std::move(factors));
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

ProtocolTree random_tree(const DomainShape& shape, std::uint64_t seed, RandomTreeParams params) {
  Rng rng(seed);
  std::vector<IndexSet> current;
  for (std::size_t d = 0; d < shape.arity(); ++d) current.push_back(IndexSet::full(shape.size(d)));
  return ProtocolTree{shape, grow(shape, current, rng, params)};
}

Cover random_bounded_cover(const DomainShape& shape, const RandomBoundedParams& params,
                           std::uint64_t seed) {
  if (params.rho_max < 1) throw InvalidInput("rho_max must be at least 1");
  Protocol base = compile_tree(random_tree(shape, seed, params.tree));
  std::vector<Box> boxes = base.cover().boxes();
  std::vector<std::uint32_t> thick(shape.cell_count(), 1);

  // Separate stream so the tree does not shift with `extra`.
  Rng rng(splitmix64(seed ^ 0x6a09e667f3bcc909ull));
  const std::size_t budget = params.attempts_per_box * params.extra;
  std::size_t attempts = 0;
  std::size_t added = 0;
  while (added < params.extra) {
    if (attempts++ >= budget)
      throw GenerationFailure("random-bounded: rejection budget exhausted after " +
                                  std::to_string(budget) + " attempts",
                              seed);
    Box b = random_box(shape, rng);
    bool ok = true;
    b.for_each_cell(shape, [&](std::size_t c) { ok = ok && thick[c] < params.rho_max; });
    if (!ok) continue;
    b.for_each_cell(shape, [&](std::size_t c) { ++thick[c]; });
    boxes.push_back(std::move(b));
    ++added;
  }
  return Cover(shape, std::move(boxes));
}

ColoredFunction cover_colored_function(const Cover& cover, std::size_t colors, std::uint64_t seed) {
  if (colors == 0) throw InvalidInput("need at least one color");
  const auto& shape = cover.shape();
  std::vector<std::size_t> parent(cover.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::int64_t> owner(shape.cell_count(), -1);
  for (std::size_t i = 0; i < cover.size(); ++i) {
    cover.box(i).for_each_cell(shape, [&](std::size_t c) {
      if (owner[c] < 0) {
        owner[c] = static_cast<std::int64_t>(i);
      } else {
        auto a = find_root(parent, static_cast<std::size_t>(owner[c]));
        auto b = find_root(parent, i);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    });
  }
  Rng rng(seed);
  std::vector<ColorId> component_color(cover.size());
  for (auto& c : component_color) c = static_cast<ColorId>(rng.below(colors));
  std::vector<ColorId> table(shape.cell_count());
  for (std::size_t c = 0; c < table.size(); ++c) {
    if (owner[c] < 0) throw InvalidInput("cover does not cover cell " + std::to_string(c));
    table[c] = component_color[find_root(parent, static_cast<std::size_t>(owner[c]))];
  }
  return ColoredFunction(shape, compact_ids(std::move(table)));
}

std::optional<ColorId> monochromatic_color(const Box& box, const Target& target) {
  const auto& shape = target_shape(target);
  box.check_against(shape);
  if (const auto* f = std::get_if<ColoredFunction>(&target)) {
    std::optional<ColorId> color;
    bool mono = true;
    box.for_each_cell(shape, [&](std::size_t c) {
      if (!color) color = f->color(c);
      else if (*color != f->color(c)) mono = false;
    });
    return mono ? color : std::nullopt;
  }
  const auto& rel = std::get<Relation>(target);
  IndexSet common = IndexSet::full(rel.color_count());
  box.for_each_cell(shape, [&](std::size_t c) { common &= rel.admissible(c); });
  if (common.empty()) return std::nullopt;
  return static_cast<ColorId>(common.first());
}

ErrorProtocol::ErrorProtocol(Protocol protocol, std::vector<std::int32_t> ga, std::vector<std::int32_t> gb)
    : protocol_(std::move(protocol)), ga_(std::move(ga)), gb_(std::move(gb)) {
  const auto& shape = protocol_.shape();
  if (shape.arity() != 2) throw InvalidInput("protocols with error are two-party");
  const std::size_t nb = boxes();
  if (ga_.size() != shape.size(0) * nb || gb_.size() != shape.size(1) * nb)
    throw InvalidInput("gA/gB table size does not match rows/columns x boxes");
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& box = protocol_.cover().box(b);
    for (std::size_t x = 0; x < shape.size(0); ++x)
      if ((ga_[x * nb + b] != kUndefined) != box.factor(0).contains(x) || ga_[x * nb + b] < kUndefined)
        throw InvalidInput("gA(" + std::to_string(x) + ", box " + std::to_string(b) +
                           ") must be defined exactly when the row lies in the box");
    for (std::size_t y = 0; y < shape.size(1); ++y)
      if ((gb_[y * nb + b] != kUndefined) != box.factor(1).contains(y) || gb_[y * nb + b] < kUndefined)
        throw InvalidInput("gB(" + std::to_string(y) + ", box " + std::to_string(b) +
                           ") must be defined exactly when the column lies in the box");
  }
}

ErrorProtocol ErrorProtocol::from_box_colors(Protocol protocol, const Target& target) {
  const auto& shape = protocol.shape();
  check_same_shape(shape, target_shape(target));
  if (shape.arity() != 2) throw InvalidInput("protocols with error are two-party");
  const std::size_t nb = protocol.cover().size();
  std::vector<std::int32_t> ga(shape.size(0) * nb, kUndefined);
  std::vector<std::int32_t> gb(shape.size(1) * nb, kUndefined);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& box = protocol.cover().box(b);
    ColorId z;
    if (auto mono = monochromatic_color(box, target)) {
      z = *mono;
    } else {
      std::size_t first = box.cells(shape).front();
      if (const auto* f = std::get_if<ColoredFunction>(&target)) z = f->color(first);
      else z = static_cast<ColorId>(std::get<Relation>(target).admissible(first).first());
    }
    box.factor(0).for_each([&](std::size_t x) { ga[x * nb + b] = static_cast<std::int32_t>(z); });
    box.factor(1).for_each([&](std::size_t y) { gb[y * nb + b] = static_cast<std::int32_t>(z); });
  }
  return ErrorProtocol(std::move(protocol), std::move(ga), std::move(gb));
}

void ErrorProtocol::set_ga(std::size_t row, std::size_t box, ColorId z) {
  if (ga_.at(row * boxes() + box) == kUndefined) throw InvalidInput("row not in box");
  ga_[row * boxes() + box] = static_cast<std::int32_t>(z);
}

void ErrorProtocol::set_gb(std::size_t col, std::size_t box, ColorId z) {
  if (gb_.at(col * boxes() + box) == kUndefined) throw InvalidInput("column not in box");
  gb_[col * boxes() + box] = static_cast<std::int32_t>(z);
}

IndexSet good_set(const ErrorProtocol& ep, const Target& target) {
  const auto& shape = ep.protocol().shape();
  check_same_shape(shape, target_shape(target));
  const auto transcript = transcript_table(ep.protocol());
  IndexSet good(shape.cell_count());
  const auto* f = std::get_if<ColoredFunction>(&target);
  const auto* rel = std::get_if<Relation>(&target);
  for (std::size_t c = 0; c < shape.cell_count(); ++c) {
    const auto t = transcript[c];
    const auto a = ep.ga(shape.coord(c, 0), t);
    const auto b = ep.gb(shape.coord(c, 1), t);
    if (a != b || a < 0) continue;
    const auto z = static_cast<ColorId>(a);
    const bool ok = f ? f->color(c) == z : (z < rel->color_count() && rel->admits(c, z));
    if (ok) good.insert(c);
  }
  return good;
}

AMProtocol::AMProtocol(std::vector<ErrorProtocol> branches) : branches_(std::move(branches)) {
  if (branches_.empty()) throw InvalidInput("AM protocol needs at least one branch");
  for (const auto& b : branches_)
    if (!(b.protocol().shape() == branches_.front().protocol().shape()))
      throw InvalidInput("AM branches must share one domain shape");
}

}  // namespace commlab
