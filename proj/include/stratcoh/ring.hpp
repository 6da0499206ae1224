#pragma once

#include <cstdint>
#include <string>

#include "stratcoh/integer.hpp"

namespace stratcoh {

/// Coefficient ring: the integers, the rationals, or a prime field F_p.
class Ring {
 public:
  enum class Kind { Z, Q, Fp };

  static Ring integers() { return Ring(Kind::Z, 0); }
  static Ring rationals() { return Ring(Kind::Q, 0); }
  static Ring prime_field(std::uint32_t p);

  /// Accepts "Z", "Q", "Fp:<p>" and the shorthand "F<p>".
  static Ring parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::uint32_t characteristic() const { return p_; }
  bool is_field() const { return kind_ != Kind::Z; }
  bool is_integers() const { return kind_ == Kind::Z; }

  /// Canonical representative of an integer in this ring's storage: identity
  /// for Z and Q, reduction into [0, p) for F_p.
  Integer normalize(const Integer& value) const;

  std::string to_string() const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  Ring(Kind kind, std::uint32_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

}  // namespace stratcoh
