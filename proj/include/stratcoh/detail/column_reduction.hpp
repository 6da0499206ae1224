#pragma once

// Left-to-right column reduction over a field, the engine behind field ranks
// and spectral-sequence pages. Columns are sparse vectors indexed by row
// *positions*; the pivot of a column is its largest position.

#include <cstdint>
#include <optional>
#include <stop_token>
#include <utility>
#include <vector>

#include "stratcoh/error.hpp"
#include "stratcoh/integer.hpp"

namespace stratcoh::detail {

/// Prime field arithmetic on machine words.
struct ModPField {
  using Value = std::uint64_t;
  std::uint64_t p;

  Value from(const Integer& x) const { return reduce_mod(x, p); }
  Value mul(Value a, Value b) const { return static_cast<Value>((static_cast<unsigned __int128>(a) * b) % p); }
  Value sub(Value a, Value b) const { return a >= b ? a - b : a + p - b; }
  Value inverse(Value a) const {
    // Fermat; p is prime.
    Value result = 1, base = a, e = p - 2;
    while (e) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
  Integer to_integer(Value v) const { return Integer(v); }
};

/// The rationals, represented fraction-free: a column is only ever known up to
/// a nonzero scalar, so combinations clear denominators and divide out the
/// common content afterwards.
struct RationalField {
  using Value = Integer;
  Value from(const Integer& x) const { return x; }
  Integer to_integer(const Value& v) const { return v; }
};

template <class Value>
using SparseColumn = std::vector<std::pair<std::size_t, Value>>;

namespace impl {

template <class Value, class Combine>
SparseColumn<Value> merge(const SparseColumn<Value>& a, const SparseColumn<Value>& b, Combine combine) {
  SparseColumn<Value> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      auto v = combine(&a[i].second, nullptr);
      if (v) out.emplace_back(a[i].first, std::move(*v));
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      auto v = combine(nullptr, &b[j].second);
      if (v) out.emplace_back(b[j].first, std::move(*v));
      ++j;
    } else {
      auto v = combine(&a[i].second, &b[j].second);
      if (v) out.emplace_back(a[i].first, std::move(*v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace impl

/// target -= (target.pivot / source.pivot) * source, applied identically to the
/// tracking vectors when present. Requires both pivots at the same position.
inline void eliminate(const ModPField& f, SparseColumn<std::uint64_t>& target,
                      const SparseColumn<std::uint64_t>& source,
                      SparseColumn<std::uint64_t>* target_track,
                      const SparseColumn<std::uint64_t>* source_track) {
  const auto factor = f.mul(target.back().second, f.inverse(source.back().second));
  auto combine = [&](const std::uint64_t* a, const std::uint64_t* b) -> std::optional<std::uint64_t> {
    std::uint64_t av = a ? *a : 0;
    std::uint64_t bv = b ? f.mul(factor, *b) : 0;
    std::uint64_t r = f.sub(av, bv);
    if (r == 0) return std::nullopt;
    return r;
  };
  target = impl::merge(target, source, combine);
  if (target_track) *target_track = impl::merge(*target_track, *source_track, combine);
}

inline void eliminate(const RationalField&, SparseColumn<Integer>& target, const SparseColumn<Integer>& source,
                      SparseColumn<Integer>* target_track, const SparseColumn<Integer>* source_track) {
  const Integer& a = target.back().second;
  const Integer& b = source.back().second;
  const Integer g = gcd(a, b);
  const Integer ta = b / g;  // multiplier for target
  const Integer sa = a / g;  // multiplier for source
  auto combine = [&](const Integer* x, const Integer* y) -> std::optional<Integer> {
    Integer r = 0;
    if (x) r = ta * *x;
    if (y) r -= sa * *y;
    if (r == 0) return std::nullopt;
    return r;
  };
  target = impl::merge(target, source, combine);
  if (target_track) *target_track = impl::merge(*target_track, *source_track, combine);
  Integer content = 0;
  for (auto& [pos, v] : target) content = gcd(content, v);
  if (target_track)
    for (auto& [pos, v] : *target_track) content = gcd(content, v);
  if (content > 1) {
    for (auto& [pos, v] : target) v /= content;
    if (target_track)
      for (auto& [pos, v] : *target_track) v /= content;
  }
}

template <class Field>
struct ColumnReduction {
  using Value = typename Field::Value;
  std::vector<SparseColumn<Value>> reduced;
  /// reduced[j] = D * tracking[j]; empty unless tracking was requested.
  std::vector<SparseColumn<Value>> tracking;
  /// Column owning each pivot row position, or -1.
  std::vector<long> pivot_owner;
};

template <class Field>
ColumnReduction<Field> reduce_columns(const Field& field, std::vector<SparseColumn<typename Field::Value>> columns,
                                      std::size_t row_positions, bool track, std::stop_token stop = {}) {
  using Value = typename Field::Value;
  ColumnReduction<Field> out;
  out.pivot_owner.assign(row_positions, -1);
  if (track) {
    out.tracking.resize(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) out.tracking[j].emplace_back(j, Value(1));
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if ((j & 255) == 0 && stop.stop_requested()) throw Error(ErrorCode::Cancelled, "column reduction interrupted");
    auto& col = columns[j];
    while (!col.empty()) {
      const long owner = out.pivot_owner[col.back().first];
      if (owner < 0) break;
      eliminate(field, col, columns[static_cast<std::size_t>(owner)], track ? &out.tracking[j] : nullptr,
                track ? &out.tracking[static_cast<std::size_t>(owner)] : nullptr);
    }
    if (!col.empty()) out.pivot_owner[col.back().first] = static_cast<long>(j);
  }
  out.reduced = std::move(columns);
  return out;
}

}  // namespace stratcoh::detail
