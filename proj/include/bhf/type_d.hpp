#pragma once

// Type D structures over the torus algebra. Arrows carry a single basis
// element and are stored mod 2 (toggling an existing arrow removes it).

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bhf/gf2.hpp"
#include "bhf/iso.hpp"
#include "bhf/torus_algebra.hpp"

namespace bhf {

using Tags = std::map<std::string, std::string>;
using NamePair = std::pair<std::string, std::string>;
using Bijection = std::map<std::string, std::string>;

struct DGenerator {
  Idem idem = Idem::i0;
  Tags tags;
  friend bool operator==(const DGenerator&, const DGenerator&) = default;
};

struct DArrow {
  std::string from;
  std::string to;
  Alg label = Alg::zero;
  friend auto operator<=>(const DArrow&, const DArrow&) = default;
};

class TypeDModule {
 public:
  void add_generator(const std::string& name, Idem idem, Tags tags = {}) {
    if (!gens_.emplace(name, DGenerator{idem, std::move(tags)}).second)
      throw Error("duplicate generator '" + name + "'");
  }

  void toggle_arrow(const std::string& from, const std::string& to, Alg label) {
    if (label == Alg::zero) return;
    DArrow a{from, to, label};
    if (auto it = arrows_.find(a); it != arrows_.end()) arrows_.erase(it);
    else arrows_.insert(std::move(a));
  }

  void remove_generator(const std::string& name) {
    gens_.erase(name);
    std::erase_if(arrows_, [&](const DArrow& a) { return a.from == name || a.to == name; });
  }

  bool has(const std::string& name) const { return gens_.count(name) != 0; }
  const DGenerator& generator(const std::string& name) const {
    auto it = gens_.find(name);
    if (it == gens_.end()) throw Error("unknown generator '" + name + "'");
    return it->second;
  }
  Idem idem(const std::string& name) const { return generator(name).idem; }
  const Tags& tags(const std::string& name) const { return generator(name).tags; }

  const std::map<std::string, DGenerator>& generators() const { return gens_; }
  const std::set<DArrow>& arrows() const { return arrows_; }
  std::size_t size() const { return gens_.size(); }

  std::size_t count(Idem i) const {
    return static_cast<std::size_t>(
        std::count_if(gens_.begin(), gens_.end(), [&](const auto& g) { return g.second.idem == i; }));
  }

  friend bool operator==(const TypeDModule&, const TypeDModule&) = default;

 private:
  std::map<std::string, DGenerator> gens_;
  std::set<DArrow> arrows_;
};

inline std::string arrow_string(const DArrow& a) {
  return a.from + " -" + std::string(to_string(a.label)) + "-> " + a.to;
}

inline std::vector<std::string> validate_d(const TypeDModule& m) {
  std::vector<std::string> out;
  std::map<std::string, std::vector<const DArrow*>> outgoing;
  for (const auto& a : m.arrows()) {
    if (!m.has(a.from) || !m.has(a.to)) {
      out.push_back("unknown endpoint: " + arrow_string(a));
      continue;
    }
    if (a.label == Alg::zero) {
      out.push_back("zero label: " + arrow_string(a));
      continue;
    }
    if (left_idem(a.label) != m.idem(a.from) || right_idem(a.label) != m.idem(a.to)) {
      out.push_back("idempotent mismatch: " + arrow_string(a));
      continue;
    }
    outgoing[a.from].push_back(&a);
  }
  for (const auto& [x, first] : outgoing) {
    std::map<std::pair<std::string, Alg>, int> paths;
    for (const DArrow* a : first) {
      auto it = outgoing.find(a->to);
      if (it == outgoing.end()) continue;
      for (const DArrow* b : it->second) {
        const Alg c = multiply(a->label, b->label);
        if (c != Alg::zero) paths[{b->to, c}] ^= 1;
      }
    }
    for (const auto& [key, parity] : paths)
      if (parity)
        out.push_back("d^2 != 0: " + x + " -> " + key.first + " via " +
                      std::string(to_string(key.second)));
  }
  return out;
}

namespace detail {

// Uniform view of a D arrow or DA action: from, input arguments, coefficient, to.
struct Act {
  std::string from;
  std::vector<Alg> args;
  Alg coeff = Alg::zero;
  std::string to;
};

// Gaussian elimination across the pair x -> y. The component x -> y is
// (idempotent + loop terms); its inverse is the geometric series in the loop
// terms, so each a -> y ... x -> b zig-zag contributes one product per word.
inline std::vector<Act> zigzag(const std::vector<Act>& into_y, const std::vector<Act>& loops,
                               const std::vector<Act>& out_of_x, std::size_t arity_cap) {
  std::vector<Act> result;
  for (const auto& in : into_y) {
    std::vector<std::pair<std::vector<Alg>, Alg>> frontier{{in.args, in.coeff}};
    std::vector<std::pair<std::vector<Alg>, Alg>> terms;
    while (!frontier.empty()) {
      std::vector<std::pair<std::vector<Alg>, Alg>> next;
      for (auto& [args, coeff] : frontier) {
        terms.emplace_back(args, coeff);
        for (const auto& l : loops) {
          const Alg c = multiply(coeff, l.coeff);
          if (c == Alg::zero) continue;
          auto a = args;
          a.insert(a.end(), l.args.begin(), l.args.end());
          if (a.size() > arity_cap) throw Error("cancellation exceeds arity cap");
          if (a.size() == args.size() && c == coeff)
            throw Error("cancellation does not terminate (idempotent loop)");
          next.emplace_back(std::move(a), c);
        }
      }
      frontier = std::move(next);
    }
    for (const auto& [args, coeff] : terms) {
      for (const auto& o : out_of_x) {
        const Alg c = multiply(coeff, o.coeff);
        if (c == Alg::zero) continue;
        auto a = args;
        a.insert(a.end(), o.args.begin(), o.args.end());
        if (a.size() > arity_cap) throw Error("cancellation exceeds arity cap");
        result.push_back(Act{in.from, std::move(a), c, o.to});
      }
    }
  }
  return result;
}

}  // namespace detail

inline TypeDModule cancel(const TypeDModule& m, const std::string& from, const std::string& to) {
  if (from == to || !m.has(from) || !m.has(to)) throw Error("cannot cancel " + from + " -> " + to);
  const Alg unit = idem_element(m.idem(from));
  if (!m.arrows().count(DArrow{from, to, unit}))
    throw Error("no idempotent arrow " + from + " -> " + to);
  std::vector<detail::Act> into_y, loops, out_of_x;
  for (const auto& a : m.arrows()) {
    if (a.to == to && a.from != from && a.from != to) into_y.push_back({a.from, {}, a.label, a.to});
    if (a.from == from && a.to == to && a.label != unit) loops.push_back({a.from, {}, a.label, a.to});
    if (a.from == from && a.to != to && a.to != from) out_of_x.push_back({a.from, {}, a.label, a.to});
  }
  TypeDModule r = m;
  r.remove_generator(from);
  r.remove_generator(to);
  for (const auto& act : detail::zigzag(into_y, loops, out_of_x, 0)) r.toggle_arrow(act.from, act.to, act.coeff);
  return r;
}

struct DReduceOptions {
  std::optional<std::uint64_t> seed;          // random order when set
  std::optional<std::vector<NamePair>> script;  // explicit order, then stop
};

struct DReduction {
  TypeDModule module;
  std::vector<NamePair> trace;
};

inline std::vector<NamePair> cancellable_d(const TypeDModule& m) {
  std::vector<NamePair> out;
  for (const auto& a : m.arrows())
    if (is_idempotent(a.label) && a.from != a.to) out.emplace_back(a.from, a.to);
  return out;
}

inline bool is_reduced_d(const TypeDModule& m) { return cancellable_d(m).empty(); }

inline DReduction reduce_d(const TypeDModule& m, const DReduceOptions& opts = {}) {
  DReduction r{m, {}};
  if (opts.script) {
    for (const auto& [x, y] : *opts.script) {
      r.module = cancel(r.module, x, y);
      r.trace.emplace_back(x, y);
    }
    return r;
  }
  std::optional<std::mt19937_64> rng;
  if (opts.seed) rng.emplace(*opts.seed);
  for (;;) {
    auto cands = cancellable_d(r.module);
    if (cands.empty()) break;
    std::size_t pick = 0;
    if (rng) pick = std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(*rng);
    r.module = cancel(r.module, cands[pick].first, cands[pick].second);
    r.trace.push_back(cands[pick]);
  }
  return r;
}

inline TypeDModule reduce(const TypeDModule& m) { return reduce_d(m).module; }

namespace detail {

inline LabeledGraph graph_of(const TypeDModule& m, std::vector<std::string>& names) {
  names.clear();
  std::map<std::string, int> index;
  LabeledGraph g;
  for (const auto& [n, gen] : m.generators()) {
    index[n] = static_cast<int>(names.size());
    names.push_back(n);
    g.vertex_label.push_back(static_cast<int>(gen.idem));
  }
  for (const auto& a : m.arrows())
    g.edges.emplace(index.at(a.from), index.at(a.to), static_cast<int>(a.label));
  return g;
}

}  // namespace detail

// Permutation-level isomorphism preserving idempotents and labels.
inline std::optional<Bijection> isomorphic_d(const TypeDModule& a, const TypeDModule& b) {
  std::vector<std::string> an, bn;
  auto ga = detail::graph_of(a, an);
  auto gb = detail::graph_of(b, bn);
  auto map = detail::find_isomorphism(ga, gb);
  if (!map) return std::nullopt;
  Bijection out;
  for (std::size_t i = 0; i < an.size(); ++i) out[an[i]] = bn[(*map)[i]];
  return out;
}

// A type D morphism f: M -> A (x) N, one term per (source, coefficient, target).
struct DMorphismTerm {
  std::string from;
  Alg coeff = Alg::zero;
  std::string to;
  friend auto operator<=>(const DMorphismTerm&, const DMorphismTerm&) = default;
};
using DMorphism = std::set<DMorphismTerm>;

namespace detail {

// Outputs of d(f) = mu(1 (x) f) delta_M + mu(1 (x) delta_N) f, keyed by
// (source, coefficient, target), mod 2.
inline std::map<DMorphismTerm, int> morphism_boundary(const TypeDModule& m, const TypeDModule& n,
                                                      const DMorphism& f) {
  std::map<std::string, std::vector<const DMorphismTerm*>> f_out;
  for (const auto& t : f) f_out[t.from].push_back(&t);
  std::map<std::string, std::vector<const DArrow*>> n_out;
  for (const auto& a : n.arrows()) n_out[a.from].push_back(&a);
  std::map<DMorphismTerm, int> out;
  for (const auto& a : m.arrows()) {
    auto it = f_out.find(a.to);
    if (it == f_out.end()) continue;
    for (const auto* t : it->second) {
      const Alg c = multiply(a.label, t->coeff);
      if (c != Alg::zero) out[{a.from, c, t->to}] ^= 1;
    }
  }
  for (const auto& t : f) {
    auto it = n_out.find(t.to);
    if (it == n_out.end()) continue;
    for (const auto* a : it->second) {
      const Alg c = multiply(t.coeff, a->label);
      if (c != Alg::zero) out[{t.from, c, a->to}] ^= 1;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline bool idempotent_part_invertible(const TypeDModule& m, const TypeDModule& n, const DMorphism& f) {
  for (Idem i : {Idem::i0, Idem::i1}) {
    std::vector<std::string> rows, cols;
    for (const auto& [name, g] : m.generators())
      if (g.idem == i) rows.push_back(name);
    for (const auto& [name, g] : n.generators())
      if (g.idem == i) cols.push_back(name);
    if (rows.size() != cols.size()) return false;
    std::map<std::string, std::size_t> col_index;
    for (std::size_t k = 0; k < cols.size(); ++k) col_index[cols[k]] = k;
    std::map<std::string, gf2::BitVec> mat;
    for (const auto& r : rows) mat.emplace(r, gf2::BitVec(cols.size()));
    for (const auto& t : f)
      if (t.coeff == idem_element(i) && mat.count(t.from)) mat.at(t.from).flip(col_index.at(t.to));
    std::vector<gf2::BitVec> vs;
    for (auto& [r, v] : mat) vs.push_back(v);
    if (gf2::rank(vs) != rows.size()) return false;
  }
  return true;
}

}  // namespace detail

// f is an isomorphism of type D structures: a cycle whose idempotent part is
// invertible (the chord part is nilpotent).
inline bool is_isomorphism_d(const TypeDModule& m, const TypeDModule& n, const DMorphism& f) {
  for (const auto& t : f) {
    if (!m.has(t.from) || !n.has(t.to) || t.coeff == Alg::zero) return false;
    if (left_idem(t.coeff) != m.idem(t.from) || right_idem(t.coeff) != n.idem(t.to)) return false;
  }
  return detail::morphism_boundary(m, n, f).empty() && detail::idempotent_part_invertible(m, n, f);
}

// Searches the space of cycles Hom(M, N) (solved exactly over F2) for one
// with invertible idempotent part, sampling seeded random combinations.
inline std::optional<DMorphism> find_isomorphism_d(const TypeDModule& m, const TypeDModule& n,
                                                   std::uint64_t seed = 0, int attempts = 512) {
  if (m.count(Idem::i0) != n.count(Idem::i0) || m.count(Idem::i1) != n.count(Idem::i1))
    return std::nullopt;
  std::vector<DMorphismTerm> vars;
  for (const auto& [x, gx] : m.generators())
    for (const auto& [y, gy] : n.generators())
      for (Alg a : kBasis)
        if (left_idem(a) == gx.idem && right_idem(a) == gy.idem) vars.push_back({x, a, y});

  std::map<DMorphismTerm, std::size_t> eq_index;
  gf2::EdgeList edges;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    for (const auto& [key, parity] : detail::morphism_boundary(m, n, DMorphism{vars[v]})) {
      auto [it, fresh] = eq_index.emplace(key, eq_index.size());
      edges.emplace_back(v, it->second);
    }
  }
  const auto kernel = gf2::kernel_of(vars.size(), eq_index.size(), edges);
  if (kernel.empty()) return std::nullopt;

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    gf2::BitVec pick(vars.size());
    for (const auto& k : kernel)
      if (coin(rng)) pick ^= k;
    auto as_morphism = [&](const gf2::BitVec& bits) {
      DMorphism f;
      for (auto v : bits.support()) f.insert(vars[v]);
      return f;
    };
    if (!detail::idempotent_part_invertible(m, n, as_morphism(pick))) continue;
    // greedy thinning so the witness stays readable
    for (bool improved = true; improved;) {
      improved = false;
      for (const auto& k : kernel) {
        gf2::BitVec next = pick;
        next ^= k;
        if (next.support().size() < pick.support().size() &&
            detail::idempotent_part_invertible(m, n, as_morphism(next))) {
          pick = next;
          improved = true;
        }
      }
    }
    return as_morphism(pick);
  }
  return std::nullopt;
}

inline std::map<Alg, int> label_inventory(const TypeDModule& m) {
  std::map<Alg, int> out;
  for (const auto& a : m.arrows()) ++out[a.label];
  return out;
}

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string to_dot(const TypeDModule& m) {
  std::ostringstream os;
  os << "digraph {\n";
  for (const auto& [n, g] : m.generators())
    os << "  " << dot_quote(n) << " [label=" << dot_quote(n + " (" + std::string(to_string(g.idem)) + ")")
       << "];\n";
  for (const auto& a : m.arrows())
    os << "  " << dot_quote(a.from) << " -> " << dot_quote(a.to) << " [label=" << dot_quote(std::string(to_string(a.label)))
       << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace bhf
