#include <catch2/catch_amalgamated.hpp>

#include "bhf/fixtures.hpp"
#include "bhf/io.hpp"
#include "bhf/ktd.hpp"
#include "oracles.hpp"

using namespace bhf;

namespace {

std::string fixture(const std::string& name) { return io::read_text(std::string(BHF_SOURCE_DIR) + "/fixtures/" + name); }

bool mentions(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const Error& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("shipped complexes", "[io]") {
  const auto five = io::parse_cfk(fixture("five_generator.cfk.json"));
  CHECK(five.size() == 5);
  CHECK(five.arrows().size() == 5);
  CHECK(five == fixtures::five_generator_example());
  CHECK(io::parse_cfk(fixture("five_generator.cfk")) == five);
  CHECK(io::parse_cfk(fixture("unknot.cfk.json")) == fixtures::unknot());
  CHECK(io::parse_cfk(fixture("trefoil.cfk.json")) == fixtures::right_trefoil());
  CHECK(io::parse_cfk(fixture("left_trefoil.cfk.json")) == fixtures::left_trefoil());
  CHECK(io::parse_cfk(fixture("figure_eight.cfk.json")) == fixtures::figure_eight());
  for (const char* f : {"unknot.cfk.json", "trefoil.cfk.json", "left_trefoil.cfk.json", "figure_eight.cfk.json",
                        "five_generator.cfk.json"})
    CHECK(io::write_cfk(io::parse_cfk(fixture(f))) == fixture(f));
}

TEST_CASE("complex round trip with shift", "[io]") {
  auto c = oracle::staircase(3);
  c.set_shift(GradingShift{1, -2});
  const auto text = io::write_cfk(c);
  const auto back = io::parse_cfk(text);
  CHECK(back == c);
  CHECK(io::write_cfk(back) == text);
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("empty payload is the empty complex", "[io]") {
  const auto c = io::parse_cfk(R"({"format_version": "1", "kind": "cfk", "payload": {"generators": [], "arrows": []}})");
  CHECK(c.size() == 0);
  CHECK(c.arrows().empty());
}

TEST_CASE("line format", "[io]") {
  const auto c = io::parse_cfk("# comment\na: A=1 M=0\nb: A=0 M=-1\nc: A=-1 M=-2\nb -> c\nb -> U^1 a\n");
  CHECK(c == fixtures::right_trefoil());
  CHECK(mentions([] { io::parse_cfk("a: A=1 M=0\nnonsense here\n"); }, "line 2"));
}

TEST_CASE("modules round trip", "[io]") {
  TypeDModule one;
  one.add_generator("x", Idem::i0);
  one.add_generator("y", Idem::i1);
  one.toggle_arrow("x", "y", Alg::rho1);
  const auto text = io::write_typed(one);
  CHECK(io::parse_typed(text) == one);

  for (const auto& c : oracle::knot_fixtures()) {
    const auto d = ktd_basefree(c);
    const auto t = io::write_typed(d);
    const auto back = io::parse_typed(t);
    CHECK(back == d);
    CHECK(io::write_typed(back) == t);
  }
  for (const auto& b : {builtin_H(), builtin_tau_mu(), builtin_tau_lambda(), builtin_identity()}) {
    const auto t = io::write_typeda(b);
    const auto back = io::parse_typeda(t);
    CHECK(back == b);
    CHECK(io::write_typeda(back) == t);
  }
}

TEST_CASE("scripts", "[io]") {
  const auto pairs = io::parse_script(fixture("h_cancellations.script"));
  REQUIRE(pairs.size() == 13);
  CHECK(pairs.front().first == tensor_name({"p", "p", "p", "s", "r", "p"}));
  CHECK(io::parse_script(io::write_script(pairs)) == pairs);
  const std::string json = R"({"format_version": "1", "kind": "script", "payload": {"pairs": [["a", "b"]]}})";
  CHECK(io::parse_script(json) == std::vector<NamePair>{{"a", "b"}});
  CHECK(mentions([] { io::parse_script("a -> b\nc d\n"); }, "line 2"));
}

TEST_CASE("rejections", "[io]") {
  const std::string bad_label = R"({"format_version": "1", "kind": "type_d", "payload": {
    "generators": [{"name": "x", "idem": "iota0"}, {"name": "y", "idem": "iota1"}],
    "arrows": [{"from": "x", "to": "y", "label": "rho13"}]}})";
  CHECK(mentions([&] { io::parse_typed(bad_label); }, "rho13"));

  CHECK(mentions([] { io::parse_cfk(R"({"format_version": "2", "kind": "cfk", "payload": {}})"); }, "version"));
  CHECK(mentions([] { io::parse_cfk(R"({"format_version": "1", "kind": "cfk", "payload": {}, "extra": 1})"); },
                 "extra"));
  CHECK(mentions([] { io::parse_cfk(R"({"format_version": "1", "kind": "blob", "payload": {}})"); }, "blob"));
  CHECK(mentions([] { io::parse_cfk("{\n  \"format_version\": \"1\",\n  \"kind\": }"); }, "line 3"));

  const std::string mismatch = R"({"format_version": "1", "kind": "type_d", "payload": {
    "generators": [{"name": "x", "idem": "iota0"}, {"name": "y", "idem": "iota0"}],
    "arrows": [{"from": "x", "to": "y", "label": "rho1"}]}})";
  CHECK_NOTHROW(io::parse_typed(mismatch));
  CHECK_FALSE(validate_d(io::parse_typed(mismatch)).empty());
  io::ParseOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(io::parse_typed(mismatch, strict), Error);
}

TEST_CASE("document sniffing", "[io]") {
  CHECK(std::holds_alternative<KnotComplex>(io::parse_any(fixture("five_generator.cfk"))));
  CHECK(std::holds_alternative<KnotComplex>(io::parse_any(fixture("trefoil.cfk.json"))));
  CHECK(std::holds_alternative<TypeDModule>(io::parse_any(fixture("fig14.dmod.json"))));
  CHECK(std::holds_alternative<std::vector<NamePair>>(io::parse_any(fixture("h_cancellations.script"))));
  CHECK(std::holds_alternative<TypeDAModule>(io::parse_any(io::write_typeda(builtin_H()))));
}
