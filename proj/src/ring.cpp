#include "stratcoh/ring.hpp"

#include "stratcoh/error.hpp"

namespace stratcoh {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring Ring::prime_field(std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::ParseError, "F_p requires a prime, got " + std::to_string(p));
  return Ring(Kind::Fp, p);
}

Ring Ring::parse(const std::string& text) {
  if (text == "Z") return integers();
  if (text == "Q") return rationals();
  std::string digits;
  if (text.rfind("Fp:", 0) == 0) digits = text.substr(3);
  else if (text.size() > 1 && text[0] == 'F') digits = text.substr(1);
  else throw Error(ErrorCode::ParseError, "unknown ring '" + text + "' (expected Z, Q or Fp:<p>)");
  Integer p = parse_integer(digits);
  if (p < 2 || p > 2147483647) throw Error(ErrorCode::ParseError, "prime out of range in '" + text + "'");
  return prime_field(static_cast<std::uint32_t>(p));
}

Integer Ring::normalize(const Integer& value) const {
  if (kind_ == Kind::Fp) return Integer(reduce_mod(value, p_));
  return value;
}

std::string Ring::to_string() const {
  switch (kind_) {
    case Kind::Z: return "Z";
    case Kind::Q: return "Q";
    case Kind::Fp: return "Fp:" + std::to_string(p_);
  }
  return "?";
}

}  // namespace stratcoh
