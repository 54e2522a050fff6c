#include <algorithm>

#include "commlab/bounds.hpp"
#include "commlab/error.hpp"

namespace commlab {

namespace {

void check_witness(const ColoredFunction& f, const Cover& cover, const char* name,
                   std::vector<std::string>& errors) {
  if (!validate_cover(cover).covers_domain) errors.push_back(std::string(name) + " witness does not cover the domain");
  for (std::size_t i = 0; i < cover.size(); ++i)
    if (!monochromatic_color(cover.box(i), f))
      errors.push_back(std::string(name) + " witness box " + std::to_string(i) + " is not monochromatic");
}

std::vector<std::size_t> boxes_per_color(const ColoredFunction& f, const Cover& cover) {
  std::vector<std::size_t> n(f.color_count(), 0);
  for (const auto& b : cover.boxes())
    if (auto c = monochromatic_color(b, f)) ++n[*c];
  return n;
}

}  // namespace

BoundSummary bound_summary(const ColoredFunction& f, const BoundBudget& budget) {
  BoundSummary s;
  s.color_count = f.color_count();

  const auto greedy = cover_number(f, CoverMode::greedy, budget.timeout_s);
  s.cover_greedy = greedy.upper;
  s.greedy_witness = greedy.witness;
  s.catalog_partial = greedy.catalog_partial;

  if (f.shape().cell_count() <= kExactCoverCellCap) {
    const auto exact = cover_number(f, CoverMode::exact, budget.timeout_s);
    s.cover_lower = exact.lower;
    if (exact.status == SetCoverResult::Status::optimal) {
      s.cover_exact = exact.upper;
      s.exact_witness = exact.witness;
    } else {
      s.timeout = exact.status == SetCoverResult::Status::timeout;
    }
  }

  for (ColorId c = 0; c < f.color_count(); ++c) {
    std::vector<std::size_t> fs;
    bool exact = true;
    try {
      fs = fooling_set(f, c, FoolingMode::exact);
    } catch (const InvalidInput&) {
      fs = fooling_set(f, c, FoolingMode::greedy);
      exact = false;
    }
    s.fooling_per_color.push_back(fs.size());
    s.fooling_is_exact.push_back(exact);
    s.fooling_best = std::max(s.fooling_best, fs.size());
    s.rank_rational_per_color.push_back(comm_matrix_rank(f, Field::rational, c));
    s.rank_gf2_per_color.push_back(comm_matrix_rank(f, Field::gf2, c));
  }
  s.rank_rational = *std::max_element(s.rank_rational_per_color.begin(), s.rank_rational_per_color.end());
  s.rank_gf2 = *std::max_element(s.rank_gf2_per_color.begin(), s.rank_gf2_per_color.end());

  auto& err = s.consistency_errors;
  check_witness(f, s.greedy_witness, "greedy", err);
  if (s.color_count > s.cover_greedy) err.push_back("color count exceeds greedy cover");
  const auto greedy_counts = boxes_per_color(f, s.greedy_witness);
  for (ColorId c = 0; c < f.color_count(); ++c)
    if (s.fooling_per_color[c] > greedy_counts[c])
      err.push_back("fooling set of color " + std::to_string(c) + " exceeds greedy boxes of that color");
  if (s.cover_exact) {
    check_witness(f, *s.exact_witness, "exact", err);
    if (*s.cover_exact > s.cover_greedy) err.push_back("exact cover exceeds greedy cover");
    if (*s.cover_exact < s.color_count) err.push_back("exact cover below color count");
    const auto exact_counts = boxes_per_color(f, *s.exact_witness);
    for (ColorId c = 0; c < f.color_count(); ++c)
      if (s.fooling_per_color[c] > exact_counts[c])
        err.push_back("fooling set of color " + std::to_string(c) + " exceeds exact boxes of that color");
  }
  return s;
}

}  // namespace commlab
