#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "commlab/error.hpp"
#include "commlab/kernels.hpp"

namespace commlab::kernels::parallel {

namespace {

constexpr std::size_t kLeaf = 32;
constexpr std::size_t kTaskCutoff = std::size_t{1} << 15;

// Same split tree as kernels::pairwise_sum.
double tree_sum(std::span<const double> values) {
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  if (values.size() < kTaskCutoff) return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
  double left = 0.0;
  double right = 0.0;
#pragma omp task shared(left) if (values.size() >= kTaskCutoff)
  left = tree_sum(values.first(half));
  right = tree_sum(values.subspan(half));
#pragma omp taskwait
  return left + right;
}

double parallel_pairwise_sum(std::span<const double> values) {
  if (values.size() < kTaskCutoff) return tree_sum(values);
  double s = 0.0;
#pragma omp parallel
#pragma omp single
  s = tree_sum(values);
  return s;
}

}  // namespace

namespace {

// Work is split by the first coordinate: each slice x0 is a contiguous block
// of cells written by one thread, so no atomics are needed and boxes land in
// ascending order within each cell.
class Slices {
 public:
  explicit Slices(const Cover& cover) : shape_(cover.shape()), by_slice_(shape_.size(0)) {
    members_.reserve(cover.size());
    for (std::size_t i = 0; i < cover.size(); ++i) {
      const Box& b = cover.box(i);
      b.factor(0).for_each([&](std::size_t x0) { by_slice_[x0].push_back(static_cast<std::uint32_t>(i)); });
      std::vector<std::vector<std::size_t>> rest;
      for (std::size_t d = 1; d < b.arity(); ++d) rest.push_back(b.factor(d).members());
      members_.push_back(std::move(rest));
    }
  }

  std::size_t count() const { return by_slice_.size(); }

  // Calls fn(cell, box) for every box meeting slice x0, boxes ascending.
  template <class Fn>
  void visit(std::size_t x0, Fn&& fn) const {
    const std::size_t base = x0 * shape_.stride(0);
    const std::size_t rest = shape_.arity() - 1;
    std::vector<std::size_t> pos(rest);
    for (auto i : by_slice_[x0]) {
      const auto& lists = members_[i];
      std::fill(pos.begin(), pos.end(), 0);
      while (true) {
        std::size_t lin = base;
        for (std::size_t d = 0; d < rest; ++d) lin += lists[d][pos[d]] * shape_.stride(d + 1);
        fn(lin, i);
        std::size_t d = rest;
        while (d > 0 && ++pos[d - 1] == lists[d - 1].size()) pos[--d] = 0;
        if (d == 0) break;
      }
    }
  }

 private:
  const DomainShape& shape_;
  std::vector<std::vector<std::uint32_t>> by_slice_;
  std::vector<std::vector<std::vector<std::size_t>>> members_;
};

}  // namespace

std::vector<std::uint32_t> cell_thickness(const Cover& cover) {
  std::vector<std::uint32_t> out(cover.shape().cell_count(), 0);
  const Slices slices(cover);
  const auto n = static_cast<std::ptrdiff_t>(slices.count());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t x0 = 0; x0 < n; ++x0)
    slices.visit(static_cast<std::size_t>(x0), [&](std::size_t c, std::uint32_t) { ++out[c]; });
  return out;
}

CellBoxLists cell_box_lists(const Cover& cover) {
  const Slices slices(cover);
  const auto n = static_cast<std::ptrdiff_t>(slices.count());
  std::vector<std::uint32_t> counts(cover.shape().cell_count(), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t x0 = 0; x0 < n; ++x0)
    slices.visit(static_cast<std::size_t>(x0), [&](std::size_t c, std::uint32_t) { ++counts[c]; });
  CellBoxLists lists;
  lists.offsets.assign(counts.size() + 1, 0);
  for (std::size_t c = 0; c < counts.size(); ++c) lists.offsets[c + 1] = lists.offsets[c] + counts[c];
  lists.boxes.resize(lists.offsets.back());
  std::vector<std::size_t> cursor(lists.offsets.begin(), lists.offsets.end() - 1);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t x0 = 0; x0 < n; ++x0)
    slices.visit(static_cast<std::size_t>(x0), [&](std::size_t c, std::uint32_t i) { lists.boxes[cursor[c]++] = i; });
  return lists;
}

std::vector<std::uint32_t> transcript_table(const Protocol& protocol) {
  const auto lists = parallel::cell_box_lists(protocol.cover());
  std::vector<std::uint32_t> out(protocol.shape().cell_count());
  const auto cells = static_cast<std::ptrdiff_t>(out.size());
  // Smallest failing cell wins so the reported error matches the serial path.
  std::ptrdiff_t first_bad = cells;
#pragma omp parallel for schedule(static) reduction(min : first_bad)
  for (std::ptrdiff_t c = 0; c < cells; ++c) {
    const auto cell = static_cast<std::size_t>(c);
    try {
      out[cell] = choose_box(protocol.selector(), cell, lists.of(cell));
    } catch (const Error&) {
      first_bad = std::min(first_bad, c);
    }
  }
  if (first_bad < cells) {
    const auto cell = static_cast<std::size_t>(first_bad);
    choose_box(protocol.selector(), cell, lists.of(cell));  // rethrows on this thread
  }
  return out;
}

std::vector<double> group_masses(const Grouping& grouping, std::span<const double> probs) {
  std::vector<std::size_t> start(grouping.groups + 1, 0);
  for (auto g : grouping.ids) ++start[g + 1];
  for (std::size_t g = 0; g < grouping.groups; ++g) start[g + 1] += start[g];
  std::vector<double> ordered(grouping.ids.size());
  std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
  for (std::size_t i = 0; i < grouping.ids.size(); ++i) ordered[cursor[grouping.ids[i]]++] = probs[i];
  std::vector<double> out(grouping.groups);
  const auto groups = static_cast<std::ptrdiff_t>(grouping.groups);
#pragma omp parallel for schedule(dynamic, 64) if (grouping.ids.size() > 4096)
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    const auto gi = static_cast<std::size_t>(g);
    out[gi] = tree_sum(std::span<const double>(ordered).subspan(start[gi], start[gi + 1] - start[gi]));
  }
  return out;
}

double entropy_bits(std::span<const double> masses) {
  std::vector<double> terms(masses.size());
  const auto n = static_cast<std::ptrdiff_t>(masses.size());
#pragma omp parallel for schedule(static) if (masses.size() > 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double m = masses[static_cast<std::size_t>(i)];
    terms[static_cast<std::size_t>(i)] = m > 0.0 ? -m * std::log2(m) : 0.0;
  }
  return parallel_pairwise_sum(terms);
}

}  // namespace commlab::kernels::parallel
