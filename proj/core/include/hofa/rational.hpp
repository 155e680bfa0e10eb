#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hofa {

/// Exact rational scalar used wherever results are certified exactly
/// (coordinate algebra, flag linear algebra, phase polynomials).
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// True when the rational has denominator 1.
inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

/// Largest integer <= r.
BigInt rat_floor(const Rat& r);

/// Fractional part in [0, 1).
inline Rat rat_frac(const Rat& r) { return r - Rat(rat_floor(r)); }

/// Distance to the nearest integer, in [0, 1/2].
Rat rat_dist_to_int(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

/// Round to nearest integer (ties toward +infinity).
BigInt rat_round(const Rat& r);

/// Parses "p", "p/q" or a decimal literal ("0.5", "-3.25") exactly.
/// Throws std::invalid_argument on malformed input or zero denominator.
Rat rat_parse(const std::string& s);

/// Canonical text form: "p" when integral, else "p/q" in lowest terms.
std::string rat_print(const Rat& r);

/// Best rational approximation p/q to x with q <= qmax, via the
/// continued-fraction convergent/semiconvergent walk. Exact input, exact output.
Rat best_rational_approx(const Rat& x, const BigInt& qmax);

/// gcd of a list of integers (nonnegative result; 0 for the empty/zero list).
BigInt vec_gcd(const std::vector<BigInt>& v);

/// Solves sum_i m_i w_i = gcd(m) for integer w via iterated extended gcd.
/// Requires some m_i != 0.
std::vector<BigInt> bezout_vector(const std::vector<BigInt>& m);

/// Binomial coefficient C(n, k) for integer n (negative allowed), k >= 0.
Rat binomial(const Rat& n, unsigned k);

}  // namespace hofa
