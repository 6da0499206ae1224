#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace stratcoh {

// Small values live inline; no heap traffic until a value outgrows 128 bits.
using Integer = boost::multiprecision::cpp_int;

inline Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_value(a / gcd(a, b) * b);
}

/// a mod m mapped into [0, m).
inline std::uint64_t reduce_mod(const Integer& a, std::uint64_t m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

inline std::string to_string(const Integer& x) { return x.str(); }

Integer parse_integer(const std::string& text);

/// Rewrites a list of finite-cyclic orders into invariant-factor form: entries
/// > 1, each dividing the next. Entries equal to 1 are dropped; 0 (a free
/// summand) is not accepted here.
std::vector<Integer> normalize_torsion(std::vector<Integer> orders);

}  // namespace stratcoh
