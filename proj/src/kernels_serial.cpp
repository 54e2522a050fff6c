#include <cmath>

#include "commlab/kernels.hpp"

namespace commlab::kernels::serial {

std::vector<std::uint32_t> cell_thickness(const Cover& cover) {
  std::vector<std::uint32_t> out(cover.shape().cell_count(), 0);
  for (const auto& box : cover.boxes()) box.for_each_cell(cover.shape(), [&](std::size_t c) { ++out[c]; });
  return out;
}

CellBoxLists cell_box_lists(const Cover& cover) {
  const auto counts = serial::cell_thickness(cover);
  CellBoxLists lists;
  lists.offsets.assign(counts.size() + 1, 0);
  for (std::size_t c = 0; c < counts.size(); ++c) lists.offsets[c + 1] = lists.offsets[c] + counts[c];
  lists.boxes.resize(lists.offsets.back());
  std::vector<std::size_t> cursor(lists.offsets.begin(), lists.offsets.end() - 1);
  for (std::size_t i = 0; i < cover.size(); ++i)
    cover.box(i).for_each_cell(cover.shape(), [&](std::size_t c) {
      lists.boxes[cursor[c]++] = static_cast<std::uint32_t>(i);
    });
  return lists;
}

std::vector<std::uint32_t> transcript_table(const Protocol& protocol) {
  const auto lists = serial::cell_box_lists(protocol.cover());
  std::vector<std::uint32_t> out(protocol.shape().cell_count());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = choose_box(protocol.selector(), c, lists.of(c));
  return out;
}

std::vector<double> group_masses(const Grouping& grouping, std::span<const double> probs) {
  // Stable bucket by group, then one pairwise sum per bucket.
  std::vector<std::size_t> start(grouping.groups + 1, 0);
  for (auto g : grouping.ids) ++start[g + 1];
  for (std::size_t g = 0; g < grouping.groups; ++g) start[g + 1] += start[g];
  std::vector<double> ordered(grouping.ids.size());
  std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
  for (std::size_t i = 0; i < grouping.ids.size(); ++i) ordered[cursor[grouping.ids[i]]++] = probs[i];
  std::vector<double> out(grouping.groups);
  for (std::size_t g = 0; g < grouping.groups; ++g)
    out[g] = pairwise_sum(std::span<const double>(ordered).subspan(start[g], start[g + 1] - start[g]));
  return out;
}

double entropy_bits(std::span<const double> masses) {
  std::vector<double> terms(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i)
    terms[i] = masses[i] > 0.0 ? -masses[i] * std::log2(masses[i]) : 0.0;
  return pairwise_sum(terms);
}

}  // namespace commlab::kernels::serial
