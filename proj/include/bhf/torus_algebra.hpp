#pragma once

// The torus algebra A(T^2) over F2: two idempotents and six Reeb chords.
// Elements are atomic basis elements (or zero); sums never appear in a label.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bhf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Idem : std::uint8_t { i0 = 0, i1 = 1 };

enum class Alg : std::uint8_t {
  zero = 0,
  iota0,
  iota1,
  rho1,
  rho2,
  rho3,
  rho12,
  rho23,
  rho123,
};

inline constexpr std::array<Alg, 8> kBasis = {Alg::iota0, Alg::iota1, Alg::rho1,  Alg::rho2,
                                              Alg::rho3,  Alg::rho12, Alg::rho23, Alg::rho123};

inline constexpr std::array<Alg, 6> kChords = {Alg::rho1,  Alg::rho2,  Alg::rho3,
                                               Alg::rho12, Alg::rho23, Alg::rho123};

constexpr Alg idem_element(Idem i) { return i == Idem::i0 ? Alg::iota0 : Alg::iota1; }

constexpr bool is_idempotent(Alg a) { return a == Alg::iota0 || a == Alg::iota1; }

constexpr bool is_chord(Alg a) { return a != Alg::zero && !is_idempotent(a); }

namespace detail {

struct IdemPair {
  Idem left;
  Idem right;
};

constexpr IdemPair idems_of(Alg a) {
  switch (a) {
    case Alg::iota0: return {Idem::i0, Idem::i0};
    case Alg::iota1: return {Idem::i1, Idem::i1};
    case Alg::rho1: return {Idem::i0, Idem::i1};
    case Alg::rho2: return {Idem::i1, Idem::i0};
    case Alg::rho3: return {Idem::i0, Idem::i1};
    case Alg::rho12: return {Idem::i0, Idem::i0};
    case Alg::rho23: return {Idem::i1, Idem::i1};
    case Alg::rho123: return {Idem::i0, Idem::i1};
    case Alg::zero: break;
  }
  throw Error("no idempotent for zero");
}

}  // namespace detail

inline Idem left_idem(Alg a) { return detail::idems_of(a).left; }
inline Idem right_idem(Alg a) { return detail::idems_of(a).right; }

// Total multiplication. The only nonzero chord products are
// rho1*rho2, rho2*rho3, rho1*rho23 and rho12*rho3.
constexpr Alg multiply(Alg a, Alg b) {
  if (a == Alg::zero || b == Alg::zero) return Alg::zero;
  if (is_idempotent(a)) {
    return detail::idems_of(b).left == detail::idems_of(a).left ? b : Alg::zero;
  }
  if (is_idempotent(b)) {
    return detail::idems_of(a).right == detail::idems_of(b).left ? a : Alg::zero;
  }
  if (a == Alg::rho1 && b == Alg::rho2) return Alg::rho12;
  if (a == Alg::rho2 && b == Alg::rho3) return Alg::rho23;
  if (a == Alg::rho1 && b == Alg::rho23) return Alg::rho123;
  if (a == Alg::rho12 && b == Alg::rho3) return Alg::rho123;
  return Alg::zero;
}

constexpr std::string_view to_string(Alg a) {
  switch (a) {
    case Alg::zero: return "0";
    case Alg::iota0: return "iota0";
    case Alg::iota1: return "iota1";
    case Alg::rho1: return "rho1";
    case Alg::rho2: return "rho2";
    case Alg::rho3: return "rho3";
    case Alg::rho12: return "rho12";
    case Alg::rho23: return "rho23";
    case Alg::rho123: return "rho123";
  }
  return "?";
}

constexpr std::string_view to_string(Idem i) { return i == Idem::i0 ? "iota0" : "iota1"; }

inline std::optional<Alg> parse_alg(std::string_view s) {
  for (Alg a : {Alg::zero, Alg::iota0, Alg::iota1, Alg::rho1, Alg::rho2, Alg::rho3, Alg::rho12,
                Alg::rho23, Alg::rho123}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

inline std::optional<Idem> parse_idem(std::string_view s) {
  if (s == "iota0") return Idem::i0;
  if (s == "iota1") return Idem::i1;
  return std::nullopt;
}

}  // namespace bhf
