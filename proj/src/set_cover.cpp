#include <algorithm>
#include <numeric>

#include "commlab/bounds.hpp"
#include "commlab/error.hpp"

namespace commlab {

SetCoverResult greedy_set_cover(const std::vector<IndexSet>& sets, std::size_t universe) {
  IndexSet uncovered = IndexSet::full(universe);
  SetCoverResult r;
  r.status = SetCoverResult::Status::heuristic;
  while (!uncovered.empty()) {
    std::size_t best = sets.size();
    std::size_t best_gain = 0;
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const std::size_t gain = (sets[j] & uncovered).count();
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    if (best == sets.size()) throw InvalidInput("set cover infeasible: element " +
                                                std::to_string(uncovered.first()) + " has no candidate");
    uncovered.subtract(sets[best]);
    r.chosen.push_back(best);
  }
  std::sort(r.chosen.begin(), r.chosen.end());
  r.upper = r.chosen.size();
  r.lower = universe == 0 ? 0 : 1;
  return r;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<IndexSet>& sets, std::size_t universe,
                 std::chrono::steady_clock::time_point deadline)
      : sets_(sets), universe_(universe), deadline_(deadline), candidates_(universe) {
    for (std::size_t j = 0; j < sets_.size(); ++j)
      sets_[j].for_each([&](std::size_t e) { candidates_[e].push_back(j); });
    neighbourhood_.assign(universe, IndexSet(universe));
    for (std::size_t e = 0; e < universe; ++e) {
      if (candidates_[e].empty())
        throw InvalidInput("set cover infeasible: element " + std::to_string(e) + " has no candidate");
      for (auto j : candidates_[e]) neighbourhood_[e] |= sets_[j];
    }
    order_.resize(universe);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return candidates_[a].size() < candidates_[b].size();
    });
  }

  // Elements no single set covers together; each needs its own set.
  std::size_t lower_bound(const IndexSet& uncovered) const {
    IndexSet blocked(universe_);
    std::size_t lb = 0;
    for (auto e : order_) {
      if (!uncovered.contains(e) || blocked.contains(e)) continue;
      ++lb;
      blocked |= neighbourhood_[e];
    }
    return lb;
  }

  SetCoverResult run() {
    auto greedy = greedy_set_cover(sets_, universe_);
    best_ = greedy.chosen;
    IndexSet all = IndexSet::full(universe_);
    root_lower_ = lower_bound(all);
    if (root_lower_ < best_.size()) search(all);

    SetCoverResult r;
    r.chosen = best_;
    std::sort(r.chosen.begin(), r.chosen.end());
    r.upper = best_.size();
    r.lower = timed_out_ ? root_lower_ : r.upper;
    r.status = timed_out_ ? SetCoverResult::Status::timeout : SetCoverResult::Status::optimal;
    r.nodes = nodes_;
    return r;
  }

 private:
  void search(const IndexSet& uncovered) {
    if (timed_out_) return;
    if ((++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
      timed_out_ = true;
      return;
    }
    if (uncovered.empty()) {
      if (chosen_.size() < best_.size()) best_ = chosen_;
      return;
    }
    if (chosen_.size() + lower_bound(uncovered) >= best_.size()) return;

    std::size_t pick = universe_;
    uncovered.for_each([&](std::size_t e) {
      if (pick == universe_ || candidates_[e].size() < candidates_[pick].size()) pick = e;
    });
    for (auto j : candidates_[pick]) {
      IndexSet rest = uncovered;
      rest.subtract(sets_[j]);
      chosen_.push_back(j);
      search(rest);
      chosen_.pop_back();
      if (timed_out_) return;
    }
  }

  const std::vector<IndexSet>& sets_;
  std::size_t universe_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<IndexSet> neighbourhood_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  std::size_t root_lower_ = 0;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

bool pairwise_disjoint(const std::vector<IndexSet>& sets, std::size_t universe) {
  IndexSet seen(universe);
  for (const auto& s : sets) {
    if (s.intersects(seen)) return false;
    seen |= s;
  }
  return true;
}

}  // namespace

SetCoverResult exact_set_cover(const std::vector<IndexSet>& sets, std::size_t universe,
                               std::chrono::steady_clock::time_point deadline) {
  if (pairwise_disjoint(sets, universe)) {
    // Every nonempty set is the only candidate for its elements.
    SetCoverResult r;
    IndexSet covered(universe);
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (sets[j].empty()) continue;
      r.chosen.push_back(j);
      covered |= sets[j];
    }
    if (covered.count() != universe)
      throw InvalidInput("set cover infeasible: element " +
                         std::to_string(IndexSet(IndexSet::full(universe)).subtract(covered).first()) +
                         " has no candidate");
    r.lower = r.upper = r.chosen.size();
    return r;
  }
  return BranchAndBound(sets, universe, deadline).run();
}

namespace {

std::vector<IndexSet> cell_sets(const MonochromaticCatalog& cat, std::vector<Box>& boxes,
                                std::vector<ColorId>& colors) {
  std::vector<IndexSet> sets;
  for (std::size_t c = 0; c < cat.per_color.size(); ++c)
    for (const auto& b : cat.per_color[c]) {
      IndexSet s(cat.shape.cell_count());
      b.for_each_cell(cat.shape, [&](std::size_t cell) { s.insert(cell); });
      sets.push_back(std::move(s));
      boxes.push_back(b);
      colors.push_back(static_cast<ColorId>(c));
    }
  return sets;
}

}  // namespace

CoverResult cover_number(const ColoredFunction& f, CoverMode mode, double timeout_s) {
  const auto& shape = f.shape();
  if (mode == CoverMode::exact && shape.cell_count() > kExactCoverCellCap)
    throw InvalidInput("exact cover is limited to " + std::to_string(kExactCoverCellCap) + " cells");
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(timeout_s));

  auto cat = enumerate_maximal_monochromatic(f);
  std::vector<Box> boxes;
  std::vector<ColorId> colors;
  const auto sets = cell_sets(cat, boxes, colors);

  SetCoverResult sc = mode == CoverMode::exact ? exact_set_cover(sets, shape.cell_count(), deadline)
                                               : greedy_set_cover(sets, shape.cell_count());
  CoverResult r;
  r.status = sc.status;
  r.lower = sc.lower;
  r.upper = sc.upper;
  r.catalog_size = sets.size();
  r.catalog_partial = cat.partial;
  if (cat.partial && r.status == SetCoverResult::Status::optimal) r.status = SetCoverResult::Status::heuristic;
  std::vector<Box> chosen;
  for (auto j : sc.chosen) {
    chosen.push_back(boxes[j]);
    r.witness_colors.push_back(colors[j]);
  }
  r.witness = Cover(shape, std::move(chosen));
  return r;
}

}  // namespace commlab
