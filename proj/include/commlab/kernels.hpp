#pragma once

// Per-cell data-parallel kernels. `serial` is the reference; `parallel` is
// the OpenMP version used by the library. Both produce bit-identical output:
// counts are integers, and floating-point sums go through the same fixed
// pairwise tree regardless of thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "commlab/core.hpp"

namespace commlab::kernels {

// Compressed cell -> containing boxes lists, boxes ascending within a cell.
struct CellBoxLists {
  std::vector<std::size_t> offsets;  // cell_count + 1
  std::vector<std::uint32_t> boxes;

  std::span<const std::uint32_t> of(std::size_t cell) const {
    return {boxes.data() + offsets[cell], offsets[cell + 1] - offsets[cell]};
  }
};

// Pairwise sum with fixed leaf blocks of 32 values.
double pairwise_sum(std::span<const double> values);

// Groups are dense ids in [0, groups). Returns per-group probability mass,
// each summed pairwise over the group's members in ascending position order.
struct Grouping {
  std::vector<std::uint32_t> ids;
  std::size_t groups = 0;
};

namespace serial {
std::vector<std::uint32_t> cell_thickness(const Cover& cover);
CellBoxLists cell_box_lists(const Cover& cover);
std::vector<std::uint32_t> transcript_table(const Protocol& protocol);
std::vector<double> group_masses(const Grouping& grouping, std::span<const double> probs);
double entropy_bits(std::span<const double> masses);
}  // namespace serial

namespace parallel {
std::vector<std::uint32_t> cell_thickness(const Cover& cover);
CellBoxLists cell_box_lists(const Cover& cover);
std::vector<std::uint32_t> transcript_table(const Protocol& protocol);
std::vector<double> group_masses(const Grouping& grouping, std::span<const double> probs);
double entropy_bits(std::span<const double> masses);
}  // namespace parallel

// Shared by both variants: pick among the containing boxes of one cell.
std::uint32_t choose_box(const TranscriptSelector& selector, std::size_t cell,
                         std::span<const std::uint32_t> containing);

}  // namespace commlab::kernels
