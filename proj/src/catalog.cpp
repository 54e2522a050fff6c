#include <algorithm>
#include <deque>
#include <unordered_set>

#include "commlab/bounds.hpp"
#include "commlab/error.hpp"

namespace commlab {

std::size_t MonochromaticCatalog::total() const {
  std::size_t n = 0;
  for (const auto& v : per_color) n += v.size();
  return n;
}

MonochromaticCatalog enumerate_maximal_monochromatic(const ColoredFunction& f, std::size_t cap) {
  const auto& shape = f.shape();
  if (shape.arity() != 2) throw InvalidInput("monochromatic catalog is two-party");
  const std::size_t rows = shape.size(0);
  const std::size_t cols = shape.size(1);

  MonochromaticCatalog cat;
  cat.shape = shape;
  cat.per_color.resize(f.color_count());
  std::size_t total = 0;

  for (std::size_t color = 0; color < f.color_count(); ++color) {
    std::vector<IndexSet> nbr(rows, IndexSet(cols));
    for (std::size_t x = 0; x < rows; ++x)
      for (std::size_t y = 0; y < cols; ++y)
        if (f.color(x * cols + y) == color) nbr[x].insert(y);

    // Column sets of maximal rectangles are exactly the nonempty
    // intersections of row neighbourhoods.
    std::unordered_set<IndexSet, IndexSetHash> seen;
    std::deque<IndexSet> queue;
    for (const auto& n : nbr)
      if (!n.empty() && seen.insert(n).second) queue.push_back(n);
    while (!queue.empty() && !cat.partial) {
      IndexSet t = std::move(queue.front());
      queue.pop_front();
      for (const auto& n : nbr) {
        IndexSet u = t & n;
        if (!u.empty() && seen.insert(u).second) {
          queue.push_back(std::move(u));
          if (total + seen.size() > cap) {
            cat.partial = true;
            break;
          }
        }
      }
    }

    auto& boxes = cat.per_color[color];
    for (const auto& t : seen) {
      IndexSet s(rows);
      for (std::size_t x = 0; x < rows; ++x)
        if (t.is_subset_of(nbr[x])) s.insert(x);
      boxes.push_back(Box({std::move(s), t}));
    }
    std::sort(boxes.begin(), boxes.end());
    if (boxes.size() + total > cap) {
      boxes.resize(cap - total);
      cat.partial = true;
    }
    total += boxes.size();
    if (cat.partial) break;
  }
  return cat;
}

}  // namespace commlab
