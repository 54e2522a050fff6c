#include <boost/multiprecision/cpp_int.hpp>

#include "commlab/bounds.hpp"
#include "commlab/error.hpp"

namespace commlab {

std::size_t rank_gf2(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][w] & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || !(rows[r][w] & bit)) continue;
      for (std::size_t k = w; k < rows[r].size(); ++k) rows[r][k] ^= rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Bareiss fraction-free elimination; every division is exact.
std::size_t rank_rational(const std::vector<std::vector<std::int64_t>>& matrix) {
  using boost::multiprecision::cpp_int;
  const std::size_t m = matrix.size();
  if (m == 0) return 0;
  const std::size_t n = matrix.front().size();
  std::vector<std::vector<cpp_int>> a(m, std::vector<cpp_int>(n));
  for (std::size_t i = 0; i < m; ++i) {
    if (matrix[i].size() != n) throw InvalidInput("ragged matrix");
    for (std::size_t j = 0; j < n; ++j) a[i][j] = matrix[i][j];
  }
  cpp_int prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(a[rank], a[pivot]);
    for (std::size_t i = rank + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j)
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

std::size_t comm_matrix_rank(const ColoredFunction& f, Field field, std::optional<ColorId> color) {
  const auto& shape = f.shape();
  if (shape.arity() != 2) throw InvalidInput("communication matrix is two-party");
  if (!color && f.color_count() > 2)
    throw InvalidInput("function has " + std::to_string(f.color_count()) +
                       " colors; give a color to rank its indicator matrix");
  const std::size_t rows = shape.size(0), cols = shape.size(1);
  auto entry = [&](std::size_t x, std::size_t y) -> bool {
    const ColorId v = f.color(x * cols + y);
    return color ? v == *color : v == 1;
  };
  if (field == Field::gf2) {
    std::vector<std::vector<std::uint64_t>> packed(rows, std::vector<std::uint64_t>((cols + 63) / 64, 0));
    for (std::size_t x = 0; x < rows; ++x)
      for (std::size_t y = 0; y < cols; ++y)
        if (entry(x, y)) packed[x][y / 64] |= std::uint64_t{1} << (y % 64);
    return rank_gf2(std::move(packed), cols);
  }
  std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y) m[x][y] = entry(x, y) ? 1 : 0;
  return rank_rational(m);
}

}  // namespace commlab
