#pragma once

#include "hofa/rational.hpp"

#include <optional>
#include <vector>

namespace hofa {

using RatVec = std::vector<Rat>;
using IntVec = std::vector<BigInt>;

/// Rank over Q of a dense rational matrix (rows may be empty).
int rat_rank(std::vector<RatVec> rows);

/// True when target lies in the rational span of the given rows.
bool in_span(const std::vector<RatVec>& rows, const RatVec& target);

/// Row-echelon basis with pivot = LAST nonzero coordinate. Rows are primitive
/// integer vectors with positive pivot entry; every row inserted later is zero
/// at all earlier pivots, so membership solves forward-triangularly and the
/// representation is unique.
struct LastPivotBasis {
  std::size_t width = 0;
  std::vector<IntVec> rows;
  std::vector<std::size_t> pivots;

  explicit LastPivotBasis(std::size_t w) : width(w) {}

  std::size_t size() const { return rows.size(); }

  /// Inserts v if it enlarges the span; returns true on growth.
  bool insert(RatVec v);

  /// Residue of v after subtracting its projection onto the span.
  RatVec reduce(RatVec v) const;

  /// Unique coordinates of v in this basis, or nullopt if v is outside the
  /// span. Restricting to the first `prefix` rows tests a sub-flag.
  std::optional<RatVec> coordinates(const RatVec& v, std::size_t prefix) const;

  bool contains(const RatVec& v, std::size_t prefix) const { return coordinates(v, prefix).has_value(); }
};

/// Primitive-integer basis of {w : w . row = 0 for every row}; vectors are
/// normalized with first nonzero entry positive.
std::vector<IntVec> integer_kernel(const std::vector<RatVec>& rows, std::size_t width);

/// Clears denominators and the content; empty input stays empty. Sign fixed
/// so the entry at `sign_index` (must be nonzero) becomes positive.
IntVec primitive_integer(const RatVec& v, std::size_t sign_index);

}  // namespace hofa
