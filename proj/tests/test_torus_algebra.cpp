#include <catch2/catch_amalgamated.hpp>

#include "bhf/torus_algebra.hpp"
#include "oracles.hpp"

using namespace bhf;

TEST_CASE("products agree with the interval model", "[algebra]") {
  for (Alg a : kBasis)
    for (Alg b : kBasis) {
      INFO(to_string(a) << " * " << to_string(b));
      CHECK(multiply(a, b) == oracle::mult(a, b));
    }
}

TEST_CASE("the four nonzero chord products", "[algebra]") {
  CHECK(multiply(Alg::rho1, Alg::rho2) == Alg::rho12);
  CHECK(multiply(Alg::rho2, Alg::rho3) == Alg::rho23);
  CHECK(multiply(Alg::rho1, Alg::rho23) == Alg::rho123);
  CHECK(multiply(Alg::rho12, Alg::rho3) == Alg::rho123);
  CHECK(multiply(Alg::rho2, Alg::rho1) == Alg::zero);
  CHECK(multiply(Alg::rho3, Alg::rho2) == Alg::zero);
  CHECK(multiply(Alg::rho1, Alg::rho3) == Alg::zero);
  CHECK(multiply(Alg::rho12, Alg::rho23) == Alg::zero);
  int nonzero = 0;
  for (Alg a : kChords)
    for (Alg b : kChords)
      if (multiply(a, b) != Alg::zero) ++nonzero;
  CHECK(nonzero == 4);
}

TEST_CASE("associativity over all 512 triples", "[algebra]") {
  int triples = 0;
  for (Alg a : kBasis)
    for (Alg b : kBasis)
      for (Alg c : kBasis) {
        ++triples;
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
      }
  CHECK(triples == 512);
}

TEST_CASE("idempotents", "[algebra]") {
  CHECK(left_idem(Alg::rho1) == Idem::i0);
  CHECK(right_idem(Alg::rho1) == Idem::i1);
  CHECK(left_idem(Alg::rho2) == Idem::i1);
  CHECK(right_idem(Alg::rho2) == Idem::i0);
  CHECK(left_idem(Alg::rho3) == Idem::i0);
  CHECK(right_idem(Alg::rho3) == Idem::i1);
  CHECK(left_idem(Alg::rho12) == Idem::i0);
  CHECK(right_idem(Alg::rho12) == Idem::i0);
  CHECK(left_idem(Alg::rho23) == Idem::i1);
  CHECK(right_idem(Alg::rho23) == Idem::i1);
  for (Alg a : kBasis) {
    CHECK(multiply(idem_element(left_idem(a)), a) == a);
    CHECK(multiply(a, idem_element(right_idem(a))) == a);
    CHECK(static_cast<int>(left_idem(a)) == oracle::left_of(a));
    CHECK(static_cast<int>(right_idem(a)) == oracle::right_of(a));
  }
  CHECK(multiply(Alg::iota0, Alg::iota1) == Alg::zero);
  CHECK_THROWS_AS(left_idem(Alg::zero), Error);
}

TEST_CASE("label round trip and rejection", "[algebra]") {
  for (Alg a : kBasis) CHECK(parse_alg(to_string(a)) == a);
  CHECK_FALSE(parse_alg("rho13").has_value());
  CHECK(parse_idem("iota1") == Idem::i1);
  CHECK_FALSE(parse_idem("iota2").has_value());
}
