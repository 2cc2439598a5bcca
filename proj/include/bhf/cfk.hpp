#pragma once

// CFK^- modeled as a finite, U-weighted, bigraded complex over F2.
//
// An arrow x -> U^r y stores r = u_power = n_w. With s = A(x) - A(y) the
// other basepoint multiplicity is n_z = r + s. Vertical arrows have n_w = 0,
// horizontal arrows have n_z = 0.
//
// tau convention: tau(C) = A(xi_v), the Alexander level of the generator
// surviving vertical simplification.

#include <algorithm>
#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bhf/gf2.hpp"
#include "bhf/torus_algebra.hpp"

namespace bhf {

struct Grading {
  int alexander = 0;
  int maslov = 0;
  friend bool operator==(const Grading&, const Grading&) = default;
};

struct KnotArrow {
  std::string from;
  std::string to;
  int u_power = 0;
  friend auto operator<=>(const KnotArrow&, const KnotArrow&) = default;
};

struct GradingShift {
  int alexander = 0;
  int maslov = 0;
  friend bool operator==(const GradingShift&, const GradingShift&) = default;
};

class KnotComplex {
 public:
  void add_generator(const std::string& name, int alexander, int maslov) {
    if (!gens_.emplace(name, Grading{alexander, maslov}).second)
      throw Error("duplicate generator '" + name + "'");
  }

  // Mod-2 insertion: adding an existing arrow removes it.
  void toggle_arrow(const std::string& from, const std::string& to, int u_power) {
    KnotArrow a{from, to, u_power};
    if (auto it = arrows_.find(a); it != arrows_.end()) arrows_.erase(it);
    else arrows_.insert(std::move(a));
  }

  void remove_generator(const std::string& name) {
    gens_.erase(name);
    std::erase_if(arrows_, [&](const KnotArrow& a) { return a.from == name || a.to == name; });
  }

  bool has(const std::string& name) const { return gens_.count(name) != 0; }
  const Grading& grading(const std::string& name) const {
    auto it = gens_.find(name);
    if (it == gens_.end()) throw Error("unknown generator '" + name + "'");
    return it->second;
  }
  int alexander(const std::string& name) const { return grading(name).alexander; }
  int maslov(const std::string& name) const { return grading(name).maslov; }

  const std::map<std::string, Grading>& generators() const { return gens_; }
  const std::set<KnotArrow>& arrows() const { return arrows_; }
  std::size_t size() const { return gens_.size(); }

  const std::optional<GradingShift>& shift() const { return shift_; }
  void set_shift(std::optional<GradingShift> s) { shift_ = s; }

  // s = A(from) - A(to)
  int alexander_drop(const KnotArrow& a) const { return alexander(a.from) - alexander(a.to); }
  int n_z(const KnotArrow& a) const { return a.u_power + alexander_drop(a); }
  bool is_vertical(const KnotArrow& a) const { return a.u_power == 0; }
  bool is_horizontal(const KnotArrow& a) const { return n_z(a) == 0; }

  int max_alexander() const {
    int m = std::numeric_limits<int>::min();
    for (const auto& [n, g] : gens_) m = std::max(m, g.alexander);
    return m;
  }
  int min_alexander() const {
    int m = std::numeric_limits<int>::max();
    for (const auto& [n, g] : gens_) m = std::min(m, g.alexander);
    return m;
  }

  friend bool operator==(const KnotComplex&, const KnotComplex&) = default;

 private:
  std::map<std::string, Grading> gens_;
  std::set<KnotArrow> arrows_;
  std::optional<GradingShift> shift_;
};

inline std::vector<std::string> validate(const KnotComplex& c) {
  std::vector<std::string> out;
  auto arrow_str = [](const KnotArrow& a) {
    std::ostringstream os;
    os << a.from << " -> U^" << a.u_power << " " << a.to;
    return os.str();
  };
  bool endpoints_ok = true;
  for (const auto& a : c.arrows()) {
    if (!c.has(a.from) || !c.has(a.to)) {
      out.push_back("unknown endpoint: " + arrow_str(a));
      endpoints_ok = false;
      continue;
    }
    if (a.u_power < 0) out.push_back("negative u_power: " + arrow_str(a));
    if (c.n_z(a) < 0) out.push_back("negative n_z: " + arrow_str(a));
    const int drop = c.maslov(a.from) - (c.maslov(a.to) - 2 * a.u_power);
    if (drop != 1) {
      out.push_back("maslov drop: " + arrow_str(a) + " drops " + std::to_string(drop));
    }
  }
  if (!endpoints_ok) return out;

  std::map<std::string, std::vector<const KnotArrow*>> outgoing;
  for (const auto& a : c.arrows()) outgoing[a.from].push_back(&a);
  for (const auto& [x, g] : c.generators()) {
    std::map<std::pair<std::string, int>, int> count;
    for (const KnotArrow* a : outgoing[x])
      for (const KnotArrow* b : outgoing[a->to]) ++count[{b->to, a->u_power + b->u_power}];
    for (const auto& [key, n] : count) {
      if (n % 2 != 0) {
        out.push_back("d^2 != 0: " + x + " -> U^" + std::to_string(key.second) + " " + key.first);
      }
    }
  }
  return out;
}

inline void require_valid(const KnotComplex& c) {
  if (!validate(c).empty()) throw Error("invalid complex");
}

// Generator x becomes x-bar with A = -A(x), M = M(x) - 2A(x); an arrow
// x -> U^r y with s = A(x) - A(y) becomes x-bar -> U^(r+s) y-bar.
inline KnotComplex flip(const KnotComplex& c) {
  require_valid(c);
  KnotComplex f;
  for (const auto& [name, g] : c.generators())
    f.add_generator(name, -g.alexander, g.maslov - 2 * g.alexander);
  for (const auto& a : c.arrows()) f.toggle_arrow(a.from, a.to, a.u_power + c.alexander_drop(a));
  f.set_shift(c.shift());
  return f;
}

inline bool is_reduced(const KnotComplex& c) {
  return std::none_of(c.arrows().begin(), c.arrows().end(), [&](const KnotArrow& a) {
    return a.u_power == 0 && c.alexander_drop(a) == 0;
  });
}

struct ReduceOptions {
  std::optional<std::uint64_t> seed;  // random cancellation order when set
};

// Gaussian elimination of grading-preserving arrows (u_power 0, same A).
inline KnotComplex reduce(KnotComplex c, ReduceOptions opts = {}) {
  std::optional<std::mt19937_64> rng;
  if (opts.seed) rng.emplace(*opts.seed);
  for (;;) {
    std::vector<KnotArrow> eligible;
    for (const auto& a : c.arrows())
      if (a.u_power == 0 && c.alexander_drop(a) == 0 && a.from != a.to) eligible.push_back(a);
    if (eligible.empty()) break;
    KnotArrow pick = eligible.front();
    if (rng) {
      std::uniform_int_distribution<std::size_t> dist(0, eligible.size() - 1);
      pick = eligible[dist(*rng)];
    }
    const std::string x = pick.from, y = pick.to;
    std::vector<KnotArrow> into_y, out_of_x;
    for (const auto& a : c.arrows()) {
      if (a.to == y && a.from != x && a.from != y) into_y.push_back(a);
      if (a.from == x && a.to != y && a.to != x) out_of_x.push_back(a);
    }
    c.remove_generator(x);
    c.remove_generator(y);
    for (const auto& a : into_y)
      for (const auto& b : out_of_x) c.toggle_arrow(a.from, b.to, a.u_power + b.u_power);
  }
  return c;
}

namespace detail {

// Filtered change of basis x <- x + U^k z.
inline void slide(KnotComplex& c, const std::string& x, const std::string& z, int k) {
  std::vector<KnotArrow> from_z, into_x;
  for (const auto& a : c.arrows()) {
    if (a.from == z) from_z.push_back(a);
  }
  for (const auto& a : from_z) c.toggle_arrow(x, a.to, a.u_power + k);
  for (const auto& a : c.arrows()) {
    if (a.to == x) into_x.push_back(a);
  }
  for (const auto& a : into_x) c.toggle_arrow(a.from, z, a.u_power + k);
}

inline bool each_touches_at_most_one(const KnotComplex& c, bool vertical) {
  std::map<std::string, int> touch;
  for (const auto& a : c.arrows()) {
    if (vertical ? c.is_vertical(a) : c.is_horizontal(a)) {
      if (++touch[a.from] > 1 || ++touch[a.to] > 1) return false;
    }
  }
  return true;
}

}  // namespace detail

inline bool is_vertically_simplified(const KnotComplex& c) {
  return detail::each_touches_at_most_one(c, true);
}
inline bool is_horizontally_simplified(const KnotComplex& c) {
  return detail::each_touches_at_most_one(c, false);
}

// Pairs vertical arrows shortest-first; every slide is filtered and
// Maslov-homogeneous, so the result is filtered isomorphic to the input.
inline KnotComplex vertical_simplify(KnotComplex c) {
  if (!is_reduced(c)) throw Error("vertical_simplify: complex is not reduced");
  std::set<std::string> paired;
  for (;;) {
    std::optional<KnotArrow> pivot;
    int best = std::numeric_limits<int>::max();
    for (const auto& a : c.arrows()) {
      if (!c.is_vertical(a) || paired.count(a.from) || paired.count(a.to)) continue;
      const int len = c.alexander_drop(a);
      if (len < best) {
        best = len;
        pivot = a;
      }
    }
    if (!pivot) break;
    const std::string x = pivot->from, y = pivot->to;
    std::vector<std::string> other_targets, other_sources;
    for (const auto& a : c.arrows()) {
      if (!c.is_vertical(a)) continue;
      if (a.from == x && a.to != y) other_targets.push_back(a.to);
    }
    for (const auto& t : other_targets) detail::slide(c, y, t, 0);
    for (const auto& a : c.arrows()) {
      if (!c.is_vertical(a)) continue;
      if (a.to == y && a.from != x) other_sources.push_back(a.from);
    }
    for (const auto& s : other_sources) detail::slide(c, s, x, 0);
    paired.insert(x);
    paired.insert(y);
  }
  return c;
}

// Horizontal simplification is vertical simplification of the flipped
// complex: flip carries slides x <- x + z to slides x <- x + U^k z.
inline KnotComplex horizontal_simplify(const KnotComplex& c) {
  return flip(vertical_simplify(flip(c)));
}

inline std::optional<KnotComplex> simultaneous_simplify(KnotComplex c, int max_passes = 64) {
  for (int pass = 0; pass < max_passes; ++pass) {
    if (is_vertically_simplified(c) && is_horizontally_simplified(c)) return c;
    c = vertical_simplify(std::move(c));
    if (is_vertically_simplified(c) && is_horizontally_simplified(c)) return c;
    c = horizontal_simplify(c);
  }
  if (is_vertically_simplified(c) && is_horizontally_simplified(c)) return c;
  return std::nullopt;
}

namespace detail {

inline std::vector<std::string> unpaired(const KnotComplex& c, bool vertical) {
  std::set<std::string> touched;
  for (const auto& a : c.arrows()) {
    if (vertical ? c.is_vertical(a) : c.is_horizontal(a)) {
      touched.insert(a.from);
      touched.insert(a.to);
    }
  }
  std::vector<std::string> out;
  for (const auto& [n, g] : c.generators())
    if (!touched.count(n)) out.push_back(n);
  return out;
}

}  // namespace detail

// Generator with no vertical arrows in a vertically simplified complex.
inline std::string xi_v(const KnotComplex& c) {
  auto u = detail::unpaired(c, true);
  if (u.size() != 1) throw Error("not a knot complex");
  return u.front();
}

inline std::string xi_h(const KnotComplex& c) {
  auto u = detail::unpaired(c, false);
  if (u.size() != 1) throw Error("not a knot complex");
  return u.front();
}

inline int tau(const KnotComplex& c) {
  require_valid(c);
  auto v = vertical_simplify(reduce(c));
  return v.alexander(xi_v(v));
}

// ---------------------------------------------------------------------------
// Sub/quotient complexes over F2.

enum class RangeMode { at, le, ge };
enum class Diff { dw, dz };

struct AlexanderRange {
  RangeMode mode = RangeMode::le;
  int s = std::numeric_limits<int>::max();

  bool contains(int a) const {
    switch (mode) {
      case RangeMode::at: return a == s;
      case RangeMode::le: return a <= s;
      case RangeMode::ge: return a >= s;
    }
    return false;
  }
  static AlexanderRange at(int s) { return {RangeMode::at, s}; }
  static AlexanderRange le(int s) { return {RangeMode::le, s}; }
  static AlexanderRange ge(int s) { return {RangeMode::ge, s}; }
  static AlexanderRange all() { return {RangeMode::le, std::numeric_limits<int>::max()}; }
};

// A finite F2 complex with named basis elements (sorted) and their levels.
struct F2Complex {
  std::vector<std::string> names;
  std::vector<int> alexander;
  gf2::EdgeList edges;

  std::size_t index_of(const std::string& n) const {
    auto it = std::lower_bound(names.begin(), names.end(), n);
    if (it == names.end() || *it != n) throw Error("unknown generator '" + n + "'");
    return static_cast<std::size_t>(it - names.begin());
  }
};

// d_w counts arrows with n_z = 0 (raising A by n_w); d_z counts arrows with
// n_w = 0 (lowering A by n_z). Both include the grading-preserving part.
inline F2Complex subquotient(const KnotComplex& c, AlexanderRange range, Diff diff) {
  F2Complex out;
  for (const auto& [n, g] : c.generators()) {
    if (range.contains(g.alexander)) {
      out.names.push_back(n);
      out.alexander.push_back(g.alexander);
    }
  }
  for (const auto& a : c.arrows()) {
    const bool keep = diff == Diff::dw ? c.is_horizontal(a) : c.is_vertical(a);
    if (!keep) continue;
    if (!range.contains(c.alexander(a.from)) || !range.contains(c.alexander(a.to))) continue;
    out.edges.emplace_back(out.index_of(a.from), out.index_of(a.to));
  }
  return out;
}

// Canonical cycle spanning H_*(complex) when it has rank one.
inline std::vector<std::string> homology_cycle(const F2Complex& fc) {
  auto z = gf2::canonical_generator(fc.names.size(), fc.edges);
  if (!z) throw Error("not a knot complex");
  std::vector<std::string> out;
  for (auto i : z->support()) out.push_back(fc.names[i]);
  return out;
}

// Canonical cocycle f (f o d = 0) dual to the rank-one homology.
inline std::vector<std::string> homology_cocycle(const F2Complex& fc) {
  auto z = gf2::canonical_generator(fc.names.size(), gf2::transpose(fc.edges));
  if (!z) throw Error("not a knot complex");
  std::vector<std::string> out;
  for (auto i : z->support()) out.push_back(fc.names[i]);
  return out;
}

}  // namespace bhf
