#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bhf/gf2.hpp"
#include "oracles.hpp"

using namespace bhf;

namespace {

std::vector<std::vector<int>> dense_rows(std::size_t n, const gf2::EdgeList& edges) {
  std::vector<std::vector<int>> rows(n, std::vector<int>(n, 0));
  for (auto [i, j] : edges) rows[i][j] ^= 1;
  return rows;
}

}  // namespace

TEST_CASE("kernel dimension matches dense rank", "[gf2]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t cols = 1 + rng() % 12, rows = 1 + rng() % 12;
    gf2::EdgeList edges;
    for (std::size_t k = 0; k < cols * rows / 3; ++k) edges.emplace_back(rng() % cols, rng() % rows);
    std::vector<std::vector<int>> m(cols, std::vector<int>(rows, 0));
    for (auto [i, j] : edges) m[i][j] ^= 1;
    const auto ker = gf2::kernel_of(cols, rows, edges);
    CHECK(ker.size() == cols - oracle::rank(m));
    for (const auto& v : ker) {
      std::vector<int> image(rows, 0);
      for (auto i : v.support())
        for (std::size_t j = 0; j < rows; ++j) image[j] ^= m[i][j];
      CHECK(std::none_of(image.begin(), image.end(), [](int x) { return x; }));
    }
    std::vector<std::vector<int>> kr;
    for (const auto& v : ker) {
      std::vector<int> row(cols, 0);
      for (auto i : v.support()) row[i] = 1;
      kr.push_back(row);
    }
    CHECK(oracle::rank(kr) == ker.size());
    CHECK(gf2::rank(ker) == ker.size());
  }
}

TEST_CASE("homology rank of a chain complex", "[gf2]") {
  // 0 -> 1 plus an isolated 2
  gf2::EdgeList edges = {{0, 1}};
  CHECK(gf2::homology_rank(3, edges) == 1);
  auto g = gf2::canonical_generator(3, edges);
  REQUIRE(g.has_value());
  CHECK(g->support() == std::vector<std::size_t>{2});
  auto rows = dense_rows(3, edges);
  CHECK(gf2::homology_rank(3, edges) == 3 - 2 * oracle::rank(rows));
}

TEST_CASE("bit vectors", "[gf2]") {
  gf2::BitVec v(130);
  v.set(3);
  v.set(129);
  CHECK(v.support() == std::vector<std::size_t>{3, 129});
  CHECK(v.first() == 3u);
  gf2::BitVec w = v;
  w ^= v;
  CHECK_FALSE(w.any());
}
