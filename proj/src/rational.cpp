#include "lls/rational.hpp"

namespace lls {

std::string rat_str(const Rat& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::optional<boost::multiprecision::cpp_int> parse_int(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) return std::nullopt;
  boost::multiprecision::cpp_int v{std::string(s)};
  return neg ? -v : v;
}

}  // namespace

std::optional<Rat> rat_parse(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    auto n = parse_int(s);
    if (!n) return std::nullopt;
    return Rat(*n);
  }
  auto n = parse_int(s.substr(0, slash));
  auto d = parse_int(s.substr(slash + 1));
  if (!n || !d || *d <= 0) return std::nullopt;
  return Rat(*n, *d);
}

Rat rat_parse_or_throw(std::string_view s, const std::string& where) {
  auto r = rat_parse(s);
  if (!r) throw Error(where + ": malformed rational '" + std::string(s) + "'");
  return *r;
}

std::string fnvalue_str(const FnValue& v) {
  return v.infinite ? "inf" : rat_str(v.finite);
}

std::optional<FnValue> fnvalue_parse(std::string_view s) {
  if (s == "inf") return FnValue::inf();
  auto r = rat_parse(s);
  if (!r) return std::nullopt;
  return FnValue::of(*r);
}

}  // namespace lls
