#include <catch2/catch_amalgamated.hpp>

#include <deque>

#include "bhf/fixtures.hpp"
#include "bhf/io.hpp"
#include "bhf/ktd.hpp"
#include "bhf/type_da.hpp"
#include "oracles.hpp"

using namespace bhf;

namespace {

// Box product straight from the definition: for every path y -> a1 ... -> ak
// in M with chord labels and every action m(x; a1..ak) = b (x) x', add
// x(x)y -> b x'(x)yk. An idempotent arrow of M contributes only as a single
// input acting by the identity.
TypeDModule box_oracle(const TypeDAModule& b, const TypeDModule& m) {
  TypeDModule r;
  for (const auto& [x, g] : b.generators())
    for (const auto& [y, h] : m.generators())
      if (g.right == h.idem) r.add_generator(x + kTensorSep + y, g.left);
  const std::size_t kmax = std::max<std::size_t>(1, b.max_arity());
  struct Path {
    std::vector<Alg> labels;
    std::string end;
  };
  for (const auto& [x, g] : b.generators())
    for (const auto& [y, h] : m.generators()) {
      if (g.right != h.idem) continue;
      const std::string in = x + kTensorSep + y;
      std::deque<Path> queue{{{}, y}};
      while (!queue.empty()) {
        Path p = queue.front();
        queue.pop_front();
        for (const auto& act : b.actions())
          if (act.input == x && act.args == p.labels) r.toggle_arrow(in, act.output + kTensorSep + p.end, act.out_coeff);
        if (p.labels.size() == kmax) continue;
        for (const auto& a : m.arrows()) {
          if (a.from != p.end) continue;
          if (is_idempotent(a.label)) {
            if (p.labels.empty()) r.toggle_arrow(in, x + kTensorSep + a.to, idem_element(g.left));
            continue;
          }
          Path q = p;
          q.labels.push_back(a.label);
          q.end = a.to;
          queue.push_back(q);
        }
      }
    }
  return r;
}

std::vector<TypeDModule> d_fixtures() {
  std::vector<TypeDModule> out;
  for (const auto& c : oracle::knot_fixtures()) out.push_back(ktd_basefree(c));
  out.push_back(ktd_basis(fixtures::right_trefoil(), -1));
  out.push_back(ktd_basis(fixtures::unknot(), 0));
  for (int k = 1; k <= 3; ++k) out.push_back(fixtures::rho23_string(k));
  return out;
}

std::vector<TypeDAModule> bimodules() {
  return {builtin_tau_mu(), builtin_tau_lambda(), builtin_H(), builtin_identity()};
}

}  // namespace

TEST_CASE("built-in bimodules", "[type_da]") {
  const auto mu = builtin_tau_mu(), la = builtin_tau_lambda(), h = builtin_H(), id = builtin_identity();
  CHECK(mu.size() == 3);
  CHECK(mu.actions().size() == 9);
  CHECK(la.size() == 3);
  CHECK(la.actions().size() == 10);
  CHECK(h.size() == 8);
  CHECK(h.actions().size() == 16);
  CHECK(id.size() == 2);
  CHECK(id.actions().size() == 6);
  for (const auto& b : bimodules()) {
    INFO(to_dot(b));
    CHECK(validate_da(b).empty());
    CHECK(validate_da(b, 5).empty());
  }
  CHECK(h.generator("x1").left == Idem::i1);
  CHECK(h.generator("x2").left == Idem::i0);
  CHECK(h.generator("x1").right == Idem::i0);
}

TEST_CASE("validate_da catches a broken relation", "[type_da]") {
  auto h = builtin_H();
  h.toggle_action({"x3", {}, Alg::rho2, "x2"});
  CHECK_FALSE(validate_da(h).empty());
}

TEST_CASE("box with a type D structure matches the definition", "[type_da]") {
  for (const auto& b : bimodules())
    for (const auto& m : d_fixtures()) {
      const auto got = box_da_d(b, m);
      const auto want = box_oracle(b, m);
      CHECK(got.arrows() == want.arrows());
      CHECK(got.size() == want.size());
      CHECK(validate_d(got).empty());
    }
}

TEST_CASE("identity bimodule is a unit", "[type_da]") {
  const auto id = builtin_identity();
  for (const auto& m : d_fixtures()) {
    const auto boxed = reduce(box_da_d(id, m));
    CHECK(isomorphic_d(boxed, reduce(m)).has_value());
  }
  for (const auto& b : {builtin_tau_mu(), builtin_tau_lambda(), builtin_H()}) {
    CHECK(isomorphic_da(reduce_da(box_da_da(id, b)), b).has_value());
    CHECK(isomorphic_da(reduce_da(box_da_da(b, id)), b).has_value());
  }
}

TEST_CASE("box products associate", "[type_da]") {
  const std::vector<TypeDAModule> bs = {builtin_tau_mu(), builtin_tau_lambda(), builtin_H()};
  for (const auto& a : bs)
    for (const auto& b : bs)
      for (const auto& m : d_fixtures()) {
        const auto left = reduce(box_da_d(box_da_da(a, b), m));
        const auto right = reduce(box_da_d(a, box_da_d(b, m)));
        CHECK(validate_d(left).empty());
        CHECK(left.count(Idem::i0) == right.count(Idem::i0));
        CHECK(left.count(Idem::i1) == right.count(Idem::i1));
        CHECK((isomorphic_d(left, right) || find_isomorphism_d(left, right)));
      }
}

TEST_CASE("the two twists compose", "[type_da]") {
  const auto t = box_da_da(builtin_tau_mu(), builtin_tau_lambda());
  CHECK(t.size() == 5);
  CHECK(validate_da(t).empty());
  const auto six = sixfold_tensor();
  CHECK(six.size() == 34);
  CHECK(six.actions().size() == 131);
  CHECK(six.max_arity() == 4);
}

TEST_CASE("H from the sixfold tensor", "[type_da]") {
  const auto script = h_cancellation_script();
  CHECK(script.size() == 13);
  const auto scripted = build_h(script);
  CHECK(scripted.size() == 8);
  CHECK(scripted.actions().size() == 16);
  CHECK(validate_da(scripted).empty());
  CHECK(isomorphic_da(scripted, builtin_H()).has_value());
  CHECK(scripted == builtin_H());
  const auto unscripted = build_h(std::nullopt);
  CHECK(isomorphic_da(unscripted, builtin_H()).has_value());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    DAReduceOptions opts;
    opts.seed = seed;
    CHECK(isomorphic_da(reduce_da(sixfold_tensor(), opts), builtin_H()).has_value());
  }
}

TEST_CASE("the shipped script file matches", "[type_da]") {
  const auto pairs = io::parse_script(io::read_text(std::string(BHF_SOURCE_DIR) + "/fixtures/h_cancellations.script"));
  CHECK(pairs == h_cancellation_script());
}

TEST_CASE("H reverses a string of rho23 arrows", "[type_da]") {
  const auto h = builtin_H();
  for (int k = 1; k <= 6; ++k) {
    for (bool forward : {true, false}) {
      INFO("length " << k << (forward ? " forward" : " backward"));
      const auto in = fixtures::rho23_string(k, forward);
      const auto out = reduce(box_da_d(h, in));
      CHECK(oracle::d_squared_zero(out));
      // the middle is exactly the reversed string
      CHECK(oracle::over_y2(out) == fixtures::rho23_string(k, !forward));
      // two generators survive at each end, hooked on by rho1, rho2, rho3
      CHECK(out.size() == static_cast<std::size_t>(k + 5));
      CHECK(out.count(Idem::i0) == 2);
      CHECK(label_inventory(out).at(Alg::rho23) == k);
    }
  }
  for (int k = 2; k <= 6; ++k) {
    const auto out = reduce(box_da_d(h, oracle::rho23_loop(k)));
    CHECK(isomorphic_d(out, oracle::rho23_loop(k, false)).has_value());
  }
}

TEST_CASE("cancel_da honours the arity cap", "[type_da]") {
  CHECK_THROWS_AS(reduce_da(sixfold_tensor(), DAReduceOptions{std::nullopt, std::nullopt, 1}), Error);
  CHECK_THROWS_AS(cancel_da(builtin_H(), "x1", "v"), Error);
}

TEST_CASE("DA dot export", "[type_da]") {
  const auto dot = to_dot(builtin_identity());
  CHECK(dot.rfind("digraph {\n  \"i0\" [label=\"i0 (iota0/iota0)\"];\n", 0) == 0);
  CHECK(dot.find("\"i0\" -> \"i1\" [label=\"rho1 -> rho1\"];") != std::string::npos);
}
