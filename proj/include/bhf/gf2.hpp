#pragma once

// Dense bit vectors over F2 and the small amount of linear algebra the
// knot-complex code needs: ranks and canonical homology representatives.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace bhf::gf2 {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    if (v) words_[i / 64] |= m; else words_[i / 64] &= ~m;
  }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }

  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }

  std::optional<std::size_t> first() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(words_[w]));
    }
    return std::nullopt;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Fully reduced row echelon basis; pivot of each row is its first set bit.
class Echelon {
 public:
  explicit Echelon(std::size_t n) : n_(n) {}

  // Returns true when v was independent of the current span.
  bool insert(BitVec v) {
    reduce(v);
    auto p = v.first();
    if (!p) return false;
    for (auto& [piv, row] : rows_)
      if (row.get(*p)) row ^= v;
    rows_.emplace_back(*p, std::move(v));
    std::sort(rows_.begin(), rows_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return true;
  }

  // Normal form of v modulo the span: zero on every pivot column.
  void reduce(BitVec& v) const {
    for (const auto& [piv, row] : rows_)
      if (v.get(piv)) v ^= row;
  }

  bool contains(BitVec v) const {
    reduce(v);
    return !v.any();
  }

  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return n_; }

 private:
  std::size_t n_;
  std::vector<std::pair<std::size_t, BitVec>> rows_;
};

// Differential given as an edge list i -> j on n basis vectors.
using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

inline std::vector<BitVec> boundary_columns(std::size_t n, const EdgeList& edges) {
  std::vector<BitVec> d(n, BitVec(n));
  for (auto [i, j] : edges) d[i].flip(j);
  return d;
}

// Basis of the kernel of a rows x cols matrix given by its column supports
// (edge (i, j): column i has a one in row j). Elimination on (d(e_i) | e_i).
inline std::vector<BitVec> kernel_of(std::size_t cols, std::size_t rows, const EdgeList& edges) {
  std::vector<BitVec> d(cols, BitVec(rows));
  for (auto [i, j] : edges) d[i].flip(j);
  std::vector<BitVec> kernel;
  std::vector<std::pair<std::size_t, std::pair<BitVec, BitVec>>> pivots;
  for (std::size_t i = 0; i < cols; ++i) {
    BitVec img = std::move(d[i]);
    BitVec src(cols);
    src.set(i);
    for (const auto& [p, row] : pivots) {
      if (img.get(p)) {
        img ^= row.first;
        src ^= row.second;
      }
    }
    if (auto p = img.first()) {
      pivots.emplace_back(*p, std::make_pair(std::move(img), std::move(src)));
    } else {
      kernel.push_back(std::move(src));
    }
  }
  return kernel;
}

inline std::vector<BitVec> kernel_basis(std::size_t n, const EdgeList& edges) {
  return kernel_of(n, n, edges);
}

inline std::size_t homology_rank(std::size_t n, const EdgeList& edges) {
  auto d = boundary_columns(n, edges);
  Echelon img(n);
  for (auto& c : d) img.insert(c);
  return n - 2 * img.rank();
}

// When homology has rank one, the unique nonzero class has a canonical
// representative: the normal form of any cycle modulo the reduced image basis.
inline std::optional<BitVec> canonical_generator(std::size_t n, const EdgeList& edges) {
  auto d = boundary_columns(n, edges);
  Echelon img(n);
  for (auto& c : d) img.insert(c);
  if (n - 2 * img.rank() != 1) return std::nullopt;
  for (auto z : kernel_basis(n, edges)) {
    img.reduce(z);
    if (z.any()) return z;
  }
  return std::nullopt;
}

// Rank of a list of vectors of equal length.
inline std::size_t rank(const std::vector<BitVec>& vs) {
  if (vs.empty()) return 0;
  Echelon e(vs.front().size());
  for (const auto& v : vs) e.insert(v);
  return e.rank();
}

inline EdgeList transpose(const EdgeList& edges) {
  EdgeList t;
  t.reserve(edges.size());
  for (auto [i, j] : edges) t.emplace_back(j, i);
  return t;
}

}  // namespace bhf::gf2
