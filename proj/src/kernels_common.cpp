#include <cmath>
#include <string>

#include "commlab/error.hpp"
#include "commlab/kernels.hpp"
#include "commlab/rng.hpp"

namespace commlab::kernels {

namespace {
constexpr std::size_t kLeaf = 32;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::uint32_t choose_box(const TranscriptSelector& selector, std::size_t cell,
                         std::span<const std::uint32_t> containing) {
  if (containing.empty()) throw UncoveredCell("cell " + std::to_string(cell) + " is covered by no box");
  if (std::holds_alternative<MinIndexSelector>(selector)) return containing.front();
  if (const auto* sr = std::get_if<SeededRandomSelector>(&selector))
    return containing[hash64(sr->seed, cell) % containing.size()];
  const auto& table = std::get<ExplicitSelector>(selector).table;
  const auto b = cell < table.size() ? table[cell] : UINT32_MAX;
  for (auto c : containing)
    if (c == b) return b;
  throw InvalidSelector("explicit selector maps cell " + std::to_string(cell) + " to box " +
                        std::to_string(b) + " which does not contain it");
}

}  // namespace commlab::kernels
