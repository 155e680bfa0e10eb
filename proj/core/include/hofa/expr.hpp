#pragma once

#include "hofa/domain.hpp"
#include "hofa/rational.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hofa {

/// Parse failure with the 0-based byte offset of the offending character.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

/// Phase polynomial P(n) = sum_k coeffs[k] * n^k with exact rational
/// coefficients, so e(P(n)) is computed from the exact fractional part.
struct PhasePoly {
  std::vector<Rat> coeffs;

  Rat eval(long n) const;
  bool operator==(const PhasePoly&) const = default;
};

enum class CondKind { ModEq, Bohr, Interval };

/// Indicator condition: n mod m == r, a Bohr condition |alpha*n|_{R/Z} <= delta,
/// or membership in an integer interval [a, b].
struct Cond {
  CondKind kind = CondKind::ModEq;
  long modulus = 1;
  long residue = 0;
  Rat alpha;
  Rat delta;
  long lo = 0;
  long hi = 0;

  bool operator==(const Cond&) const = default;
};

enum class RandomKind { Pm1, Unif01 };

enum class ExprKind { Const, Sum, Product, Phase, Indicator, Random, Clamp01 };

/// Expression AST. Sum children carry explicit signs; products are n-ary.
struct Expr {
  ExprKind kind = ExprKind::Const;
  Rat constant;                       // Const
  PhasePoly poly;                     // Phase
  Cond cond;                          // Indicator
  RandomKind random_kind = RandomKind::Pm1;  // Random
  std::uint64_t seed = 0;             // Random
  std::vector<Expr> children;         // Sum, Product, Clamp01
  std::vector<int> signs;             // Sum: +1 / -1 per child

  bool operator==(const Expr&) const = default;
};

/// Parses the documented expression grammar; throws ParseError with a byte
/// offset on malformed input or unknown identifiers.
Expr parse_expr(const std::string& text);

/// Canonical printer; parse_expr(print_expr(e)) reproduces e structurally.
std::string print_expr(const Expr& e);

/// Samples the expression over a domain (1-based arguments on intervals,
/// 0-based on cyclic domains). Random leaves are reproducible per seed.
SampledFunction eval_expr(const Expr& e, const DomainSpec& domain);

}  // namespace hofa
