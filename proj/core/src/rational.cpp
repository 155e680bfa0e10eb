#include "hofa/rational.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>
#include <cstdlib>

namespace hofa {

BigInt rat_floor(const Rat& r) {
  BigInt n = rat_num(r), d = rat_den(r);
  BigInt q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

Rat rat_dist_to_int(const Rat& r) {
  Rat f = rat_frac(r);
  Rat g = 1 - f;
  return f < g ? f : g;
}

BigInt rat_round(const Rat& r) { return rat_floor(r + Rat(1, 2)); }

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat rat_parse(const std::string& s) {
  std::string t = s;
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  Rat out;
  auto slash = t.find('/');
  auto dot = t.find('.');
  if (slash != std::string::npos) {
    std::string p = t.substr(0, slash), q = t.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) throw std::invalid_argument("malformed rational literal: " + s);
    BigInt num(p), den(q);
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    out = Rat(num, den);
  } else if (dot != std::string::npos) {
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) {
      throw std::invalid_argument("malformed decimal literal: " + s);
    }
    BigInt scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    BigInt num = BigInt(ip) * scale + (fp.empty() ? BigInt(0) : BigInt(fp));
    out = Rat(num, scale);
  } else {
    if (!all_digits(t)) throw std::invalid_argument("malformed integer literal: " + s);
    out = Rat(BigInt(t));
  }
  return neg ? Rat(-out) : out;
}

std::string rat_print(const Rat& r) {
  if (is_integer(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

Rat best_rational_approx(const Rat& x, const BigInt& qmax) {
  if (qmax < 1) throw std::invalid_argument("qmax must be >= 1");
  // Convergent recurrence on the continued fraction of x. The final partial
  // quotient is truncated to the largest value keeping the denominator
  // within qmax (best semiconvergent); ties resolve to the convergent side.
  BigInt p0 = 1, q0 = 0;  // h_{-1}/k_{-1}
  BigInt p1 = 0, q1 = 1;  // seeded so first step yields floor(x)/1
  Rat rem = x;
  BigInt bestp = rat_floor(x), bestq = 1;
  p1 = bestp;
  q1 = 1;
  p0 = 1;
  q0 = 0;
  if (rat_frac(x) == 0) return Rat(bestp);
  Rat frac = rat_frac(x);
  // p1/q1 = floor(x), p0/q0 = 1/0 sentinel.
  while (frac != 0) {
    Rat inv = Rat(1) / frac;
    BigInt a = rat_floor(inv);
    frac = rat_frac(inv);
    BigInt p2 = a * p1 + p0;
    BigInt q2 = a * q1 + q0;
    if (q2 > qmax) {
      // Largest admissible semiconvergent coefficient.
      BigInt t = (qmax - q0) / q1;
      if (t > 0) {
        BigInt ps = t * p1 + p0;
        BigInt qs = t * q1 + q0;
        Rat cand(ps, qs), best(p1, q1);
        if (rat_abs(x - cand) < rat_abs(x - best)) return cand;
      }
      return Rat(p1, q1);
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return Rat(p1, q1);
}

BigInt vec_gcd(const std::vector<BigInt>& v) {
  BigInt g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, x < 0 ? BigInt(-x) : x);
  return g;
}

std::vector<BigInt> bezout_vector(const std::vector<BigInt>& m) {
  // Fold ext-gcd left to right: g_i = gcd(g_{i-1}, m_i) = s*g_{i-1} + t*m_i.
  std::vector<BigInt> w(m.size(), 0);
  BigInt g = 0;
  std::size_t first = m.size();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0 && first == m.size()) first = i;
  }
  if (first == m.size()) throw std::invalid_argument("bezout_vector: all-zero input");
  g = m[first] < 0 ? BigInt(-m[first]) : m[first];
  w[first] = m[first] < 0 ? -1 : 1;
  for (std::size_t i = first + 1; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    BigInt a = g, b = m[i];
    // Extended gcd(a, b).
    BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      BigInt q = old_r / r;
      BigInt tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * s;
      old_s = s;
      s = tmp;
      tmp = old_t - q * t;
      old_t = t;
      t = tmp;
    }
    if (old_r < 0) {
      old_r = -old_r;
      old_s = -old_s;
      old_t = -old_t;
    }
    for (std::size_t j = 0; j <= i; ++j) w[j] *= old_s;
    w[i] = old_t;
    g = old_r;
  }
  return w;
}

Rat binomial(const Rat& n, unsigned k) {
  Rat acc = 1;
  for (unsigned i = 0; i < k; ++i) acc *= (n - Rat(i)) / Rat(i + 1);
  return acc;
}

}  // namespace hofa
