#pragma once

// Classical lower/upper bounds for two-party functions: maximal
// monochromatic rectangles, minimum monochromatic cover, fooling sets and
// communication-matrix rank.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "commlab/core.hpp"
#include "commlab/functions.hpp"

namespace commlab {

struct MonochromaticCatalog {
  DomainShape shape;
  std::vector<std::vector<Box>> per_color;  // sorted, deduplicated
  bool partial = false;                     // enumeration hit the cap

  std::size_t total() const;
};

inline constexpr std::size_t kDefaultCatalogCap = 1'000'000;
inline constexpr std::size_t kExactCoverCellCap = std::size_t{1} << 16;

// Maximal bicliques of each color's bipartite row/column graph, found by
// closing row neighbourhoods under intersection.
MonochromaticCatalog enumerate_maximal_monochromatic(const ColoredFunction& f,
                                                     std::size_t cap = kDefaultCatalogCap);

// Set cover over explicit candidate sets of a universe.
struct SetCoverResult {
  enum class Status { optimal, timeout, heuristic };
  Status status = Status::optimal;
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::vector<std::size_t> chosen;  // best solution found, ascending
  std::uint64_t nodes = 0;
};

// Max-new-coverage greedy, ties to the lowest index.
SetCoverResult greedy_set_cover(const std::vector<IndexSet>& sets, std::size_t universe);

// Branch and bound: greedy upper bound, branching on the uncovered element
// with fewest candidates, lower bound from a greedy pairwise-separated
// element set. Throws InvalidInput when some element has no candidate.
SetCoverResult exact_set_cover(const std::vector<IndexSet>& sets, std::size_t universe,
                               std::chrono::steady_clock::time_point deadline);

enum class CoverMode { exact, greedy };

struct CoverResult {
  SetCoverResult::Status status = SetCoverResult::Status::optimal;
  std::size_t lower = 0;
  std::size_t upper = 0;
  Cover witness;
  std::vector<ColorId> witness_colors;  // color of each witness box
  std::size_t catalog_size = 0;
  bool catalog_partial = false;

  std::size_t count() const { return upper; }
};

CoverResult cover_number(const ColoredFunction& f, CoverMode mode, double timeout_s = 60.0);

enum class FoolingMode { exact, greedy };
inline constexpr std::size_t kFoolingExactCap = 64;

// Cells of `color` pairwise fooling each other. Exact mode refuses more than
// 64 candidate cells with InvalidInput.
std::vector<std::size_t> fooling_set(const ColoredFunction& f, ColorId color, FoolingMode mode);

enum class Field { gf2, rational };

std::size_t rank_gf2(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols);
std::size_t rank_rational(const std::vector<std::vector<std::int64_t>>& matrix);

// Rank of the indicator matrix of `color`, or of f itself when f is 0/1
// valued and no color is given (otherwise InvalidInput).
std::size_t comm_matrix_rank(const ColoredFunction& f, Field field,
                             std::optional<ColorId> color = std::nullopt);

struct BoundBudget {
  double timeout_s = 60.0;
  std::size_t catalog_cap = kDefaultCatalogCap;
};

struct BoundSummary {
  std::optional<std::size_t> cover_exact;
  std::size_t cover_lower = 0;
  std::size_t cover_greedy = 0;
  std::optional<Cover> exact_witness;
  Cover greedy_witness;
  std::vector<std::size_t> fooling_per_color;
  std::vector<bool> fooling_is_exact;
  std::size_t fooling_best = 0;
  std::vector<std::size_t> rank_rational_per_color;
  std::vector<std::size_t> rank_gf2_per_color;
  std::size_t rank_rational = 0;  // max over colors
  std::size_t rank_gf2 = 0;       // max over colors
  std::size_t color_count = 0;
  bool timeout = false;
  bool catalog_partial = false;
  std::vector<std::string> consistency_errors;
};

BoundSummary bound_summary(const ColoredFunction& f, const BoundBudget& budget = {});

}  // namespace commlab
