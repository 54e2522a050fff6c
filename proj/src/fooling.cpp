#include <bit>

#include "commlab/bounds.hpp"
#include "commlab/error.hpp"

namespace commlab {

namespace {

// Maximum clique on at most 64 vertices; greedy colouring bound.
class MaxClique {
 public:
  explicit MaxClique(std::vector<std::uint64_t> adj) : adj_(std::move(adj)) {}

  std::uint64_t run() {
    const std::size_t n = adj_.size();
    std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    expand(0, all);
    return best_;
  }

 private:
  void expand(std::uint64_t current, std::uint64_t candidates) {
    // Colour classes in vertex order; vertices are tried highest colour first.
    std::vector<int> order;
    std::vector<int> colour;
    std::uint64_t uncoloured = candidates;
    int k = 0;
    while (uncoloured) {
      ++k;
      std::uint64_t avail = uncoloured;
      while (avail) {
        const int v = std::countr_zero(avail);
        avail &= ~(std::uint64_t{1} << v);
        avail &= ~adj_[static_cast<std::size_t>(v)];
        uncoloured &= ~(std::uint64_t{1} << v);
        order.push_back(v);
        colour.push_back(k);
      }
    }
    const int size = std::popcount(current);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (size + colour[i] <= std::popcount(best_)) return;
      const int v = order[i];
      const std::uint64_t bit = std::uint64_t{1} << v;
      const std::uint64_t next = current | bit;
      const std::uint64_t rest = candidates & adj_[static_cast<std::size_t>(v)];
      if (rest == 0) {
        if (std::popcount(next) > std::popcount(best_)) best_ = next;
      } else {
        expand(next, rest);
      }
      candidates &= ~bit;
    }
  }

  std::vector<std::uint64_t> adj_;
  std::uint64_t best_ = 0;
};

}  // namespace

std::vector<std::size_t> fooling_set(const ColoredFunction& f, ColorId color, FoolingMode mode) {
  const auto& shape = f.shape();
  if (shape.arity() != 2) throw InvalidInput("fooling sets are two-party");
  if (color >= f.color_count()) throw InvalidInput("color " + std::to_string(color) + " does not occur");
  const std::size_t cols = shape.size(1);

  std::vector<std::size_t> cand;
  for (std::size_t c = 0; c < shape.cell_count(); ++c)
    if (f.color(c) == color) cand.push_back(c);

  auto fool = [&](std::size_t a, std::size_t b) {
    const std::size_t x1 = a / cols, y1 = a % cols, x2 = b / cols, y2 = b % cols;
    return f.color(x1 * cols + y2) != color || f.color(x2 * cols + y1) != color;
  };

  if (mode == FoolingMode::greedy) {
    std::vector<std::size_t> out;
    for (auto c : cand) {
      bool ok = true;
      for (auto o : out) ok = ok && fool(c, o);
      if (ok) out.push_back(c);
    }
    return out;
  }

  if (cand.size() > kFoolingExactCap)
    throw InvalidInput("exact fooling set limited to " + std::to_string(kFoolingExactCap) + " candidate cells (" +
                       std::to_string(cand.size()) + " given); use greedy mode");
  std::vector<std::uint64_t> adj(cand.size(), 0);
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      if (fool(cand[i], cand[j])) {
        adj[i] |= std::uint64_t{1} << j;
        adj[j] |= std::uint64_t{1} << i;
      }
  const std::uint64_t best = MaxClique(adj).run();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cand.size(); ++i)
    if ((best >> i) & 1u) out.push_back(cand[i]);
  return out;
}

}  // namespace commlab
