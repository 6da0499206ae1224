#include "stratcoh/integer.hpp"

#include <algorithm>
#include <cctype>

#include "stratcoh/error.hpp"

namespace stratcoh {

Integer parse_integer(const std::string& text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw Error(ErrorCode::ParseError, "not an integer: '" + text + "'");
  for (std::size_t k = i; k < text.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(text[k])))
      throw Error(ErrorCode::ParseError, "not an integer: '" + text + "'");
  return Integer(text);
}

std::vector<Integer> normalize_torsion(std::vector<Integer> orders) {
  std::vector<Integer> work;
  for (auto& o : orders) {
    Integer a = abs_value(o);
    if (a == 0) throw Error(ErrorCode::Internal, "free summand passed as torsion");
    if (a > 1) work.push_back(a);
  }
  // Pairwise (gcd, lcm) replacement converges to the invariant-factor chain.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < work.size(); ++i) {
      for (std::size_t j = i + 1; j < work.size(); ++j) {
        if (work[j] % work[i] != 0) {
          Integer g = gcd(work[i], work[j]);
          Integer l = lcm(work[i], work[j]);
          work[i] = g;
          work[j] = l;
          changed = true;
        }
      }
    }
  }
  std::erase_if(work, [](const Integer& x) { return x == 1; });
  std::sort(work.begin(), work.end());
  return work;
}

}  // namespace stratcoh
