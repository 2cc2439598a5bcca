#pragma once

// Small knot complexes and modules used by tests, examples and the CLI.

#include <string>

#include "bhf/cfk.hpp"
#include "bhf/type_d.hpp"

namespace bhf::fixtures {

inline KnotComplex unknot() {
  KnotComplex c;
  c.add_generator("x", 0, 0);
  return c;
}

// Staircase with steps of length one; tau = 1.
inline KnotComplex right_trefoil() {
  KnotComplex c;
  c.add_generator("a", 1, 0);
  c.add_generator("b", 0, -1);
  c.add_generator("c", -1, -2);
  c.toggle_arrow("b", "c", 0);
  c.toggle_arrow("b", "a", 1);
  return c;
}

// Mirror staircase; tau = -1.
inline KnotComplex left_trefoil() {
  KnotComplex c;
  c.add_generator("a", 1, 2);
  c.add_generator("b", 0, 1);
  c.add_generator("c", -1, 0);
  c.toggle_arrow("a", "b", 0);
  c.toggle_arrow("c", "b", 1);
  return c;
}

// Box plus an isolated generator; tau = 0.
inline KnotComplex figure_eight() {
  KnotComplex c;
  c.add_generator("x", 0, 0);
  c.add_generator("y1", 1, 1);
  c.add_generator("y2", -1, -1);
  c.add_generator("z", 0, 0);
  c.add_generator("w", 0, 0);
  c.toggle_arrow("x", "y1", 1);
  c.toggle_arrow("x", "y2", 0);
  c.toggle_arrow("y1", "z", 0);
  c.toggle_arrow("y2", "z", 1);
  return c;
}

// Five generators with two arrows into c; not simultaneously simplified as given.
inline KnotComplex five_generator_example() {
  KnotComplex c;
  c.add_generator("a", 1, 1);
  c.add_generator("b", 1, 1);
  c.add_generator("c", 0, 0);
  c.add_generator("d", -1, -1);
  c.add_generator("e", 0, 0);
  c.toggle_arrow("a", "c", 0);
  c.toggle_arrow("b", "c", 0);
  c.toggle_arrow("d", "c", 1);
  c.toggle_arrow("e", "d", 0);
  c.toggle_arrow("e", "a", 1);
  return c;
}

// g_0 <- g_1 <- ... <- g_k joined by rho23 arrows pointing toward g_0 when
// `forward` is false, toward g_k when true.
inline TypeDModule rho23_string(int length, bool forward = true) {
  TypeDModule m;
  for (int i = 0; i <= length; ++i) m.add_generator("g" + std::to_string(i), Idem::i1);
  for (int i = 0; i < length; ++i) {
    const std::string a = "g" + std::to_string(i), b = "g" + std::to_string(i + 1);
    if (forward) m.toggle_arrow(a, b, Alg::rho23);
    else m.toggle_arrow(b, a, Alg::rho23);
  }
  return m;
}

}  // namespace bhf::fixtures
