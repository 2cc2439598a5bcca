#pragma once

// Type DA bimodules over (A(T^2), A(T^2)), strictly unital: action inputs are
// chords only, an empty input list is the k = 0 (differential) part.

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bhf/type_d.hpp"

namespace bhf {

inline const std::string kTensorSep = "\xE2\x8A\x97";  // U+2297

struct DAGenerator {
  Idem left = Idem::i0;
  Idem right = Idem::i0;
  friend bool operator==(const DAGenerator&, const DAGenerator&) = default;
};

struct DAAction {
  std::string input;
  std::vector<Alg> args;
  Alg out_coeff = Alg::zero;
  std::string output;
  friend auto operator<=>(const DAAction&, const DAAction&) = default;
};

class TypeDAModule {
 public:
  void add_generator(const std::string& name, Idem left, Idem right) {
    if (!gens_.emplace(name, DAGenerator{left, right}).second)
      throw Error("duplicate generator '" + name + "'");
  }

  void toggle_action(DAAction a) {
    if (a.out_coeff == Alg::zero) return;
    if (auto it = actions_.find(a); it != actions_.end()) actions_.erase(it);
    else actions_.insert(std::move(a));
  }

  void remove_generator(const std::string& name) {
    gens_.erase(name);
    std::erase_if(actions_, [&](const DAAction& a) { return a.input == name || a.output == name; });
  }

  bool has(const std::string& name) const { return gens_.count(name) != 0; }
  const DAGenerator& generator(const std::string& name) const {
    auto it = gens_.find(name);
    if (it == gens_.end()) throw Error("unknown generator '" + name + "'");
    return it->second;
  }
  const std::map<std::string, DAGenerator>& generators() const { return gens_; }
  const std::set<DAAction>& actions() const { return actions_; }
  std::size_t size() const { return gens_.size(); }

  std::size_t max_arity() const {
    std::size_t k = 0;
    for (const auto& a : actions_) k = std::max(k, a.args.size());
    return k;
  }

  TypeDAModule renamed(const std::map<std::string, std::string>& names) const {
    auto rn = [&](const std::string& n) {
      auto it = names.find(n);
      return it == names.end() ? n : it->second;
    };
    TypeDAModule r;
    for (const auto& [n, g] : gens_) r.add_generator(rn(n), g.left, g.right);
    for (const auto& a : actions_) r.toggle_action({rn(a.input), a.args, a.out_coeff, rn(a.output)});
    return r;
  }

  friend bool operator==(const TypeDAModule&, const TypeDAModule&) = default;

 private:
  std::map<std::string, DAGenerator> gens_;
  std::set<DAAction> actions_;
};

inline std::string action_string(const DAAction& a) {
  std::string s = "m(" + a.input;
  for (Alg x : a.args) s += "," + std::string(to_string(x));
  return s + ") = " + std::string(to_string(a.out_coeff)) + "*" + a.output;
}

namespace detail {

// Idempotent constraints an action imposes, as (generator, side, value) or
// (generator, side) == (generator, side) equalities.
struct Slot {
  std::string gen;
  bool right;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

}  // namespace detail

// Builds a bimodule from an action table, inferring both idempotents of every
// generator by propagating the matching conditions.
inline TypeDAModule da_from_actions(const std::vector<std::string>& names,
                                    const std::vector<DAAction>& actions) {
  using detail::Slot;
  std::map<Slot, Idem> known;
  std::vector<std::pair<Slot, Slot>> equal;
  auto fix = [&](const Slot& s, Idem i) {
    auto [it, fresh] = known.emplace(s, i);
    if (!fresh && it->second != i) throw Error("inconsistent idempotents at '" + s.gen + "'");
  };
  for (const auto& a : actions) {
    fix({a.input, false}, left_idem(a.out_coeff));
    fix({a.output, false}, right_idem(a.out_coeff));
    if (a.args.empty()) {
      equal.push_back({{a.input, true}, {a.output, true}});
    } else {
      fix({a.input, true}, left_idem(a.args.front()));
      fix({a.output, true}, right_idem(a.args.back()));
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [s, t] : equal) {
      auto is = known.find(s), it = known.find(t);
      if (is != known.end() && it == known.end()) known[t] = is->second, changed = true;
      else if (it != known.end() && is == known.end()) known[s] = it->second, changed = true;
      else if (is != known.end() && is->second != it->second)
        throw Error("inconsistent idempotents at '" + s.gen + "'");
    }
  }
  TypeDAModule m;
  for (const auto& n : names) {
    auto l = known.find({n, false}), r = known.find({n, true});
    if (l == known.end() || r == known.end()) throw Error("cannot infer idempotents of '" + n + "'");
    m.add_generator(n, l->second, r->second);
  }
  for (const auto& a : actions) m.toggle_action(a);
  return m;
}

inline TypeDAModule builtin_tau_mu() {
  using enum Alg;
  return da_from_actions({"p", "q", "r"}, {
      {"p", {rho1}, rho1, "q"},
      {"p", {rho123}, rho123, "q"},
      {"p", {rho3, rho23}, rho3, "q"},
      {"q", {rho23}, rho23, "q"},
      {"r", {rho3}, iota1, "q"},
      {"p", {rho12}, rho123, "r"},
      {"p", {rho3, rho2}, rho3, "r"},
      {"q", {rho2}, rho23, "r"},
      {"r", {}, rho2, "p"},
  });
}

// The (p, rho1) entry is printed with a second input rho2 in the source
// table; only the single-input reading is idempotent-compatible.
inline TypeDAModule builtin_tau_lambda() {
  using enum Alg;
  return da_from_actions({"p", "q", "s"}, {
      {"q", {rho2, rho1}, rho2, "s"},
      {"q", {rho2, rho123}, rho23, "q"},
      {"p", {rho12}, rho12, "p"},
      {"p", {rho3}, rho3, "q"},
      {"s", {rho2}, iota0, "p"},
      {"q", {rho2, rho12}, rho2, "p"},
      {"p", {rho1}, rho12, "s"},
      {"p", {rho123}, rho123, "q"},
      {"s", {}, rho1, "q"},
      {"s", {rho23}, rho3, "q"},
  });
}

inline TypeDAModule builtin_identity() {
  TypeDAModule m;
  m.add_generator("i0", Idem::i0, Idem::i0);
  m.add_generator("i1", Idem::i1, Idem::i1);
  auto gen = [](Idem i) { return i == Idem::i0 ? std::string("i0") : std::string("i1"); };
  for (Alg a : kChords) m.toggle_action({gen(left_idem(a)), {a}, a, gen(right_idem(a))});
  return m;
}

// The elliptic involution bimodule. The left idempotent of x1, x3 is iota1 and
// of x2 iota0; all three x's have right idempotent iota0.
inline TypeDAModule builtin_H() {
  using enum Alg;
  return da_from_actions({"x1", "x2", "x3", "u", "v", "y1", "y2", "y3"}, {
      {"x3", {}, rho2, "x2"},
      {"x2", {}, rho1, "x1"},
      {"u", {}, rho1, "y1"},
      {"u", {}, rho3, "y2"},
      {"y2", {}, rho2, "y3"},
      {"y3", {}, rho1, "v"},
      {"x3", {rho12}, iota1, "x1"},
      {"y1", {rho23}, iota1, "v"},
      {"u", {rho23}, iota0, "y3"},
      {"x3", {rho1}, iota1, "y1"},
      {"y1", {rho2}, iota1, "x1"},
      {"u", {rho2}, iota0, "x2"},
      {"x3", {rho3}, iota1, "y2"},
      {"x2", {rho3}, iota0, "y3"},
      {"x1", {rho3}, iota1, "v"},
      {"x3", {rho123}, iota1, "v"},
  });
}

namespace detail {

using ActionIndex = std::map<std::pair<std::string, std::vector<Alg>>, std::vector<std::pair<Alg, std::string>>>;

inline ActionIndex index_actions(const TypeDAModule& m) {
  ActionIndex idx;
  for (const auto& a : m.actions()) idx[{a.input, a.args}].emplace_back(a.out_coeff, a.output);
  return idx;
}

}  // namespace detail

// Checks idempotent compatibility of every action and the A-infinity relation
// on every composable chord sequence of length <= bound (default 2k+1).
inline std::vector<std::string> validate_da(const TypeDAModule& m, std::optional<std::size_t> bound = {}) {
  std::vector<std::string> out;
  for (const auto& a : m.actions()) {
    bool ok = m.has(a.input) && m.has(a.output);
    if (ok) {
      const auto& gi = m.generator(a.input);
      const auto& go = m.generator(a.output);
      ok = left_idem(a.out_coeff) == gi.left && right_idem(a.out_coeff) == go.left;
      if (a.args.empty()) {
        ok = ok && gi.right == go.right;
      } else {
        ok = ok && left_idem(a.args.front()) == gi.right && right_idem(a.args.back()) == go.right;
        for (std::size_t i = 0; ok && i < a.args.size(); ++i) {
          ok = is_chord(a.args[i]);
          if (ok && i + 1 < a.args.size()) ok = right_idem(a.args[i]) == left_idem(a.args[i + 1]);
        }
      }
    }
    if (!ok) out.push_back("incompatible action: " + action_string(a));
  }
  if (!out.empty()) return out;

  const std::size_t L = bound.value_or(2 * m.max_arity() + 1);
  const auto idx = detail::index_actions(m);
  auto lookup = [&](const std::string& x, const std::vector<Alg>& args) -> const std::vector<std::pair<Alg, std::string>>* {
    auto it = idx.find({x, args});
    return it == idx.end() ? nullptr : &it->second;
  };

  for (const auto& [x, gx] : m.generators()) {
    std::vector<Alg> seq;
    std::function<void()> visit = [&] {
      std::map<std::pair<Alg, std::string>, int> total;
      for (std::size_t i = 0; i <= seq.size(); ++i) {
        std::vector<Alg> head(seq.begin(), seq.begin() + static_cast<long>(i));
        std::vector<Alg> tail(seq.begin() + static_cast<long>(i), seq.end());
        auto first = lookup(x, head);
        if (!first) continue;
        for (const auto& [c, y] : *first) {
          auto second = lookup(y, tail);
          if (!second) continue;
          for (const auto& [c2, z] : *second) {
            const Alg p = multiply(c, c2);
            if (p != Alg::zero) total[{p, z}] ^= 1;
          }
        }
      }
      for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
        const Alg p = multiply(seq[j], seq[j + 1]);
        if (p == Alg::zero) continue;
        std::vector<Alg> merged(seq.begin(), seq.begin() + static_cast<long>(j));
        merged.push_back(p);
        merged.insert(merged.end(), seq.begin() + static_cast<long>(j) + 2, seq.end());
        if (auto hit = lookup(x, merged))
          for (const auto& [c, z] : *hit) total[{c, z}] ^= 1;
      }
      for (const auto& [key, parity] : total) {
        if (!parity) continue;
        std::string s = "structure equation fails at m(" + x;
        for (Alg a : seq) s += "," + std::string(to_string(a));
        out.push_back(s + ") -> " + std::string(to_string(key.first)) + "*" + key.second);
      }
      if (seq.size() == L) return;
      const Idem need = seq.empty() ? gx.right : right_idem(seq.back());
      for (Alg a : kChords) {
        if (left_idem(a) != need) continue;
        seq.push_back(a);
        visit();
        seq.pop_back();
      }
    };
    visit();
  }
  return out;
}

namespace detail {

struct ChainStep {
  std::vector<Alg> args;
  std::vector<Alg> outputs;
  std::string end;
};

// All chains of `count` consecutive actions of m starting at c.
inline void action_chains(const TypeDAModule& m, const std::map<std::string, std::vector<const DAAction*>>& by_input,
                          const std::string& c, std::size_t count, ChainStep cur,
                          std::vector<ChainStep>& out) {
  if (count == 0) {
    out.push_back(std::move(cur));
    return;
  }
  auto it = by_input.find(c);
  if (it == by_input.end()) return;
  for (const DAAction* a : it->second) {
    ChainStep next = cur;
    next.args.insert(next.args.end(), a->args.begin(), a->args.end());
    next.outputs.push_back(a->out_coeff);
    next.end = a->output;
    action_chains(m, by_input, a->output, count - 1, std::move(next), out);
  }
}

}  // namespace detail

// B (left) box C (right). Sequences of C-actions feed their outputs into one
// B-action; an idempotent C output passes through as the identity of B.
inline TypeDAModule box_da_da(const TypeDAModule& b, const TypeDAModule& c) {
  TypeDAModule r;
  auto name = [](const std::string& x, const std::string& y) { return x + kTensorSep + y; };
  for (const auto& [bn, bg] : b.generators())
    for (const auto& [cn, cg] : c.generators())
      if (bg.right == cg.left) r.add_generator(name(bn, cn), bg.left, cg.right);
  if (r.size() == 0 && b.size() > 0 && c.size() > 0) throw Error("box_da_da: no idempotent-compatible pairs");

  std::map<std::string, std::vector<const DAAction*>> c_by_input;
  for (const auto& a : c.actions()) c_by_input[a.input].push_back(&a);
  const auto b_idx = detail::index_actions(b);
  const std::size_t kmax = std::max<std::size_t>(1, b.max_arity());

  for (const auto& [bn, bg] : b.generators()) {
    for (const auto& [cn, cg] : c.generators()) {
      if (bg.right != cg.left) continue;
      const std::string in = name(bn, cn);
      if (auto it = b_idx.find({bn, {}}); it != b_idx.end())
        for (const auto& [e, b2] : it->second) r.toggle_action({in, {}, e, name(b2, cn)});
      for (std::size_t k = 1; k <= kmax; ++k) {
        std::vector<detail::ChainStep> chains;
        detail::action_chains(c, c_by_input, cn, k, {{}, {}, cn}, chains);
        for (const auto& ch : chains) {
          const bool any_idem = std::any_of(ch.outputs.begin(), ch.outputs.end(), is_idempotent);
          if (any_idem) {
            if (k == 1) r.toggle_action({in, ch.args, idem_element(bg.left), name(bn, ch.end)});
            continue;
          }
          auto it = b_idx.find({bn, ch.outputs});
          if (it == b_idx.end()) continue;
          for (const auto& [e, b2] : it->second) r.toggle_action({in, ch.args, e, name(b2, ch.end)});
        }
      }
    }
  }
  return r;
}

// B box M: D arrows of M play the role of C-actions with no inputs.
inline TypeDModule box_da_d(const TypeDAModule& b, const TypeDModule& m) {
  TypeDModule r;
  auto name = [](const std::string& x, const std::string& y) { return x + kTensorSep + y; };
  for (const auto& [bn, bg] : b.generators())
    for (const auto& [mn, mg] : m.generators())
      if (bg.right == mg.idem) {
        Tags t = mg.tags;
        t["bimodule"] = bn;
        t["module"] = mn;
        r.add_generator(name(bn, mn), bg.left, std::move(t));
      }

  std::map<std::string, std::vector<const DArrow*>> m_out;
  for (const auto& a : m.arrows()) m_out[a.from].push_back(&a);
  const auto b_idx = detail::index_actions(b);
  const std::size_t kmax = std::max<std::size_t>(1, b.max_arity());

  std::function<void(const std::string&, const std::string&, const std::string&, std::vector<Alg>&)> walk;
  walk = [&](const std::string& in, const std::string& bn, const std::string& cur, std::vector<Alg>& labels) {
    if (!labels.empty()) {
      if (auto it = b_idx.find({bn, labels}); it != b_idx.end())
        for (const auto& [e, b2] : it->second) r.toggle_arrow(in, name(b2, cur), e);
    }
    if (labels.size() == kmax) return;
    auto it = m_out.find(cur);
    if (it == m_out.end()) return;
    for (const DArrow* a : it->second) {
      if (is_idempotent(a->label)) continue;
      labels.push_back(a->label);
      walk(in, bn, a->to, labels);
      labels.pop_back();
    }
  };

  for (const auto& [bn, bg] : b.generators()) {
    for (const auto& [mn, mg] : m.generators()) {
      if (bg.right != mg.idem) continue;
      const std::string in = name(bn, mn);
      if (auto it = b_idx.find({bn, {}}); it != b_idx.end())
        for (const auto& [e, b2] : it->second) r.toggle_arrow(in, name(b2, mn), e);
      if (auto it = m_out.find(mn); it != m_out.end())
        for (const DArrow* a : it->second)
          if (is_idempotent(a->label)) r.toggle_arrow(in, name(bn, a->to), idem_element(bg.left));
      std::vector<Alg> labels;
      walk(in, bn, mn, labels);
    }
  }
  return r;
}

struct DAReduceOptions {
  std::optional<std::vector<NamePair>> script;
  std::optional<std::uint64_t> seed;
  std::size_t arity_cap = 8;
};

inline TypeDAModule cancel_da(const TypeDAModule& m, const std::string& from, const std::string& to,
                              std::size_t arity_cap = 8) {
  if (from == to || !m.has(from) || !m.has(to))
    throw Error("cannot cancel " + from + " -> " + to);
  const Alg unit = idem_element(m.generator(from).left);
  if (!m.actions().count(DAAction{from, {}, unit, to}))
    throw Error("cannot cancel " + from + " -> " + to + ": no idempotent differential");
  std::vector<detail::Act> into_y, loops, out_of_x;
  for (const auto& a : m.actions()) {
    const detail::Act act{a.input, a.args, a.out_coeff, a.output};
    if (a.output == to && a.input != from && a.input != to) into_y.push_back(act);
    if (a.input == from && a.output == to && !(a.args.empty() && a.out_coeff == unit)) loops.push_back(act);
    if (a.input == from && a.output != to && a.output != from) out_of_x.push_back(act);
  }
  TypeDAModule r = m;
  r.remove_generator(from);
  r.remove_generator(to);
  for (auto& act : detail::zigzag(into_y, loops, out_of_x, arity_cap))
    r.toggle_action({act.from, std::move(act.args), act.coeff, act.to});
  return r;
}

inline std::vector<NamePair> cancellable_da(const TypeDAModule& m) {
  std::vector<NamePair> out;
  for (const auto& a : m.actions())
    if (a.args.empty() && is_idempotent(a.out_coeff) && a.input != a.output) out.emplace_back(a.input, a.output);
  return out;
}

inline TypeDAModule reduce_da(TypeDAModule m, const DAReduceOptions& opts = {}) {
  if (opts.script) {
    for (const auto& [x, y] : *opts.script) m = cancel_da(m, x, y, opts.arity_cap);
    return m;
  }
  std::optional<std::mt19937_64> rng;
  if (opts.seed) rng.emplace(*opts.seed);
  for (;;) {
    auto cands = cancellable_da(m);
    if (cands.empty()) return m;
    std::size_t pick = 0;
    if (rng) pick = std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(*rng);
    m = cancel_da(m, cands[pick].first, cands[pick].second, opts.arity_cap);
  }
}

namespace detail {

inline LabeledGraph graph_of(const TypeDAModule& m, std::vector<std::string>& names,
                             std::map<std::pair<std::vector<Alg>, Alg>, int>& labels) {
  names.clear();
  std::map<std::string, int> index;
  LabeledGraph g;
  for (const auto& [n, gen] : m.generators()) {
    index[n] = static_cast<int>(names.size());
    names.push_back(n);
    g.vertex_label.push_back(static_cast<int>(gen.left) * 2 + static_cast<int>(gen.right));
  }
  for (const auto& a : m.actions()) {
    auto [it, fresh] = labels.emplace(std::make_pair(a.args, a.out_coeff), static_cast<int>(labels.size()));
    g.edges.emplace(index.at(a.input), index.at(a.output), it->second);
  }
  return g;
}

}  // namespace detail

inline std::optional<Bijection> isomorphic_da(const TypeDAModule& a, const TypeDAModule& b) {
  std::vector<std::string> an, bn;
  std::map<std::pair<std::vector<Alg>, Alg>, int> labels;
  auto ga = detail::graph_of(a, an, labels);
  auto gb = detail::graph_of(b, bn, labels);
  auto map = detail::find_isomorphism(ga, gb);
  if (!map) return std::nullopt;
  Bijection out;
  for (std::size_t i = 0; i < an.size(); ++i) out[an[i]] = bn[(*map)[i]];
  return out;
}

inline std::string to_dot(const TypeDAModule& m) {
  std::ostringstream os;
  os << "digraph {\n";
  for (const auto& [n, g] : m.generators())
    os << "  " << dot_quote(n) << " [label="
       << dot_quote(n + " (" + std::string(to_string(g.left)) + "/" + std::string(to_string(g.right)) + ")") << "];\n";
  for (const auto& a : m.actions()) {
    std::string label;
    for (Alg x : a.args) label += std::string(to_string(x)) + ",";
    if (!label.empty()) label.back() = ' ';
    label += "-> " + std::string(to_string(a.out_coeff));
    os << "  " << dot_quote(a.input) << " -> " << dot_quote(a.output) << " [label=" << dot_quote(label) << "];\n";
  }
  os << "}\n";
  return os.str();
}

// ((((tau_mu box tau_lambda) box tau_mu) box tau_lambda) box tau_mu) box tau_lambda
inline TypeDAModule sixfold_tensor() {
  const auto mu = builtin_tau_mu();
  const auto la = builtin_tau_lambda();
  TypeDAModule t = box_da_da(mu, la);
  t = box_da_da(t, mu);
  t = box_da_da(t, la);
  t = box_da_da(t, mu);
  return box_da_da(t, la);
}

inline std::string tensor_name(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? kTensorSep : "") + parts[i];
  return s;
}

inline std::vector<NamePair> h_cancellation_script() {
  auto t = [](std::initializer_list<const char*> p) {
    return tensor_name(std::vector<std::string>(p.begin(), p.end()));
  };
  return {
      {t({"p", "p", "p", "s", "r", "p"}), t({"p", "p", "p", "p", "p", "p"})},
      {t({"p", "p", "p", "s", "r", "s"}), t({"p", "p", "p", "p", "p", "s"})},
      {t({"p", "s", "r", "s", "q", "q"}), t({"p", "p", "p", "s", "q", "q"})},
      {t({"p", "s", "r", "s", "r", "p"}), t({"p", "s", "r", "p", "p", "p"})},
      {t({"p", "s", "r", "s", "r", "s"}), t({"p", "s", "r", "p", "p", "s"})},
      {t({"q", "q", "r", "s", "r", "p"}), t({"q", "q", "r", "p", "p", "p"})},
      {t({"q", "q", "r", "s", "r", "s"}), t({"q", "q", "r", "p", "p", "s"})},
      {t({"r", "p", "p", "s", "r", "p"}), t({"r", "p", "p", "p", "p", "p"})},
      {t({"r", "p", "p", "s", "r", "s"}), t({"r", "p", "p", "p", "p", "s"})},
      {t({"r", "s", "q", "q", "r", "s"}), t({"q", "q", "r", "s", "q", "q"})},
      {t({"r", "s", "r", "s", "q", "q"}), t({"r", "p", "p", "s", "q", "q"})},
      {t({"r", "s", "r", "s", "r", "p"}), t({"r", "s", "r", "p", "p", "p"})},
      {t({"r", "s", "r", "s", "r", "s"}), t({"r", "s", "r", "p", "p", "s"})},
  };
}

inline std::map<std::string, std::string> h_renaming() {
  auto t = [](std::initializer_list<const char*> p) {
    return tensor_name(std::vector<std::string>(p.begin(), p.end()));
  };
  return {
      {t({"r", "s", "q", "q", "r", "p"}), "x3"}, {t({"q", "q", "q", "q", "r", "p"}), "x1"},
      {t({"p", "s", "q", "q", "r", "p"}), "x2"}, {t({"q", "q", "q", "q", "q", "q"}), "v"},
      {t({"p", "s", "q", "q", "r", "s"}), "u"},  {t({"p", "s", "q", "q", "q", "q"}), "y3"},
      {t({"r", "s", "q", "q", "q", "q"}), "y2"}, {t({"q", "q", "q", "q", "r", "s"}), "y1"},
  };
}

// Sixfold tensor reduced by the given script (or fully, when absent),
// renamed to x1..y3 where the generator names match.
inline TypeDAModule build_h(const std::optional<std::vector<NamePair>>& script) {
  DAReduceOptions opts;
  opts.script = script;
  auto r = reduce_da(sixfold_tensor(), opts);
  return r.renamed(h_renaming());
}

}  // namespace bhf
