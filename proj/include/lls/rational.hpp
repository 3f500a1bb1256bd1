#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lls {

// Exact rational scalar. All lengths, values and solver arithmetic in this
// project go through Rat; nothing is ever rounded to floating point.
using Rat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Serializes as "p/q" in lowest terms, or "p" when the denominator is 1.
std::string rat_str(const Rat& r);

// Parses "p", "-p", "p/q". Rejects anything else (in particular decimal
// points and exponents), so documents can never smuggle floats in.
std::optional<Rat> rat_parse(std::string_view s);

Rat rat_parse_or_throw(std::string_view s, const std::string& where);

// A value of a rational function at a marked point: an element of P^1(kappa),
// i.e. either finite or the point at infinity (serialized "inf").
struct FnValue {
  bool infinite = false;
  Rat finite;  // meaningful iff !infinite

  static FnValue inf() { return FnValue{true, Rat(0)}; }
  static FnValue of(Rat v) { return FnValue{false, std::move(v)}; }

  bool operator==(const FnValue& o) const {
    return infinite == o.infinite && (infinite || finite == o.finite);
  }
  bool operator!=(const FnValue& o) const { return !(*this == o); }
  bool operator<(const FnValue& o) const {  // inf sorts last
    if (infinite != o.infinite) return !infinite;
    if (infinite) return false;
    return finite < o.finite;
  }
};

std::string fnvalue_str(const FnValue& v);
std::optional<FnValue> fnvalue_parse(std::string_view s);

}  // namespace lls
