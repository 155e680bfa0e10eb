#include "hofa/expr.hpp"

#include <cctype>
#include <random>

namespace hofa {

Rat PhasePoly::eval(long n) const {
  Rat acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * n + coeffs[k];
  }
  return acc;
}

namespace {

/// Recursive-descent parser. Error offsets are 1-based byte positions; an
/// error at end of input reports len(text) + 1.
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (!at_end()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t p) const { throw ParseError(msg, p + 1); }

  bool at_end() const { return pos_ >= s_.size(); }
  char cur() const { return s_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(cur()))) ++pos_;
  }

  bool try_eat(char c) {
    skip_ws();
    if (at_end() || cur() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c, const std::string& what) {
    skip_ws();
    if (at_end() || cur() != c) fail("expected '" + std::string(1, c) + "' " + what);
    ++pos_;
  }

  bool peek_ident_start() {
    skip_ws();
    return !at_end() && (std::isalpha(static_cast<unsigned char>(cur())) || cur() == '_');
  }

  std::string parse_ident() {
    skip_ws();
    if (!peek_ident_start()) fail("expected identifier");
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  bool peek_number_start() {
    skip_ws();
    if (at_end()) return false;
    if (std::isdigit(static_cast<unsigned char>(cur()))) return true;
    if (cur() == '-' || cur() == '.') {
      std::size_t p = pos_ + 1;
      while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
      return p < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p])) || s_[p] == '.');
    }
    return false;
  }

  /// rational := ['-'] digits [('/' digits) | ('.' digits)]
  Rat parse_rational() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (!at_end() && cur() == '-') {
      neg = true;
      ++pos_;
      skip_ws();
    }
    std::size_t num_start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
    std::string intpart = s_.substr(num_start, pos_ - num_start);
    std::string text = intpart;
    if (!at_end() && cur() == '.') {
      ++pos_;
      std::size_t f = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
      text = (intpart.empty() ? "0" : intpart) + "." + s_.substr(f, pos_ - f);
      if (pos_ == f && intpart.empty()) fail_at("malformed number", start);
    } else if (!at_end() && cur() == '/') {
      ++pos_;
      std::size_t d = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
      if (pos_ == d) fail("expected denominator digits");
      text = intpart + "/" + s_.substr(d, pos_ - d);
      if (intpart.empty()) fail_at("malformed number", start);
    }
    if (intpart.empty() && text.empty()) fail_at("expected number", start);
    try {
      Rat r = rat_parse(text);
      return neg ? Rat(-r) : r;
    } catch (const std::invalid_argument& ex) {
      fail_at(ex.what(), start);
    }
  }

  long parse_integer(bool allow_negative) {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (allow_negative && !at_end() && cur() == '-') {
      neg = true;
      ++pos_;
    }
    std::size_t d = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
    if (pos_ == d) fail("expected integer");
    long v = 0;
    try {
      v = std::stol(s_.substr(d, pos_ - d));
    } catch (const std::exception&) {
      fail_at("integer out of range", start);
    }
    return neg ? -v : v;
  }

  std::uint64_t parse_seed() {
    skip_ws();
    std::size_t d = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(cur()))) ++pos_;
    if (pos_ == d) fail("expected integer seed");
    try {
      return std::stoull(s_.substr(d, pos_ - d));
    } catch (const std::exception&) {
      fail_at("seed out of range", d);
    }
  }

  Expr parse_sum() {
    Expr node;
    node.kind = ExprKind::Sum;
    int lead = +1;
    skip_ws();
    if (!at_end() && cur() == '-' && !peek_number_start()) {
      lead = -1;
      ++pos_;
    }
    node.children.push_back(parse_term());
    node.signs.push_back(lead);
    for (;;) {
      skip_ws();
      if (!at_end() && (cur() == '+' || cur() == '-')) {
        int sign = cur() == '+' ? +1 : -1;
        ++pos_;
        node.children.push_back(parse_term());
        node.signs.push_back(sign);
      } else {
        break;
      }
    }
    if (node.children.size() == 1 && node.signs[0] == 1) return node.children[0];
    return node;
  }

  Expr parse_term() {
    Expr node;
    node.kind = ExprKind::Product;
    node.children.push_back(parse_factor());
    while (try_eat('*')) node.children.push_back(parse_factor());
    if (node.children.size() == 1) return node.children[0];
    return node;
  }

  Expr parse_factor() {
    skip_ws();
    if (at_end()) fail("expected expression factor");
    if (cur() == '(') {
      ++pos_;
      Expr inner = parse_sum();
      expect(')', "to close group");
      return inner;
    }
    if (peek_number_start()) {
      Expr e;
      e.kind = ExprKind::Const;
      e.constant = parse_rational();
      return e;
    }
    std::size_t ident_pos = pos_;
    std::string id = parse_ident();
    if (id == "e") {
      expect('(', "after 'e'");
      Expr e;
      e.kind = ExprKind::Phase;
      e.poly = parse_poly();
      expect(')', "to close phase");
      return e;
    }
    if (id == "indicator") {
      expect('(', "after 'indicator'");
      Expr e;
      e.kind = ExprKind::Indicator;
      e.cond = parse_cond();
      expect(')', "to close indicator");
      return e;
    }
    if (id == "random") {
      expect('(', "after 'random'");
      std::size_t kind_pos = pos_;
      std::string dist = parse_ident();
      Expr e;
      e.kind = ExprKind::Random;
      if (dist == "pm1") {
        e.random_kind = RandomKind::Pm1;
      } else if (dist == "unif01") {
        e.random_kind = RandomKind::Unif01;
      } else {
        fail_at("unknown distribution '" + dist + "' (want pm1 or unif01)", kind_pos);
      }
      expect(',', "between distribution and seed");
      e.seed = parse_seed();
      expect(')', "to close random");
      return e;
    }
    if (id == "clamp01") {
      expect('(', "after 'clamp01'");
      Expr e;
      e.kind = ExprKind::Clamp01;
      e.children.push_back(parse_sum());
      expect(')', "to close clamp01");
      return e;
    }
    fail_at("unknown identifier '" + id + "'", ident_pos);
  }

  /// poly := pterm (('+'|'-') pterm)*; pterm := atom ('*' atom)* where atoms
  /// are rationals or 'n' ['^' k]; coefficients multiply, exponents add.
  PhasePoly parse_poly() {
    PhasePoly p;
    int sign = +1;
    skip_ws();
    if (!at_end() && cur() == '-' && !peek_number_start()) {
      sign = -1;
      ++pos_;
    }
    for (;;) {
      auto [coef, deg] = parse_poly_term();
      if (p.coeffs.size() <= deg) p.coeffs.resize(deg + 1, Rat(0));
      p.coeffs[deg] += sign * coef;
      skip_ws();
      if (!at_end() && (cur() == '+' || cur() == '-')) {
        sign = cur() == '+' ? +1 : -1;
        ++pos_;
      } else {
        break;
      }
    }
    while (!p.coeffs.empty() && p.coeffs.back() == 0) p.coeffs.pop_back();
    return p;
  }

  std::pair<Rat, std::size_t> parse_poly_term() {
    Rat coef = 1;
    std::size_t deg = 0;
    bool first = true;
    for (;;) {
      skip_ws();
      if (peek_number_start()) {
        coef *= parse_rational();
      } else if (peek_ident_start()) {
        std::size_t id_pos = pos_;
        std::string id = parse_ident();
        if (id != "n") fail_at("unknown variable '" + id + "' (polynomials use 'n')", id_pos);
        std::size_t k = 1;
        if (try_eat('^')) {
          long e = parse_integer(false);
          if (e < 1 || e > 64) fail("exponent out of range 1..64");
          k = static_cast<std::size_t>(e);
        }
        deg += k;
      } else if (first) {
        fail("expected polynomial term");
      } else {
        fail("expected rational or 'n' after '*'");
      }
      first = false;
      if (!try_eat('*')) break;
    }
    return {coef, deg};
  }

  Cond parse_cond() {
    skip_ws();
    std::size_t id_pos = pos_;
    std::string id = parse_ident();
    Cond c;
    if (id == "n") {
      std::size_t kw_pos = pos_;
      std::string kw = parse_ident();
      if (kw != "mod") fail_at("expected 'mod'", kw_pos);
      std::size_t mod_pos = pos_;
      c.kind = CondKind::ModEq;
      c.modulus = parse_integer(false);
      if (c.modulus < 1) fail_at("modulus must be >= 1", mod_pos);
      expect('=', "in '=='");
      expect('=', "in '=='");
      c.residue = parse_integer(true);
      return c;
    }
    if (id == "bohr") {
      expect('(', "after 'bohr'");
      c.kind = CondKind::Bohr;
      c.alpha = parse_rational();
      expect(';', "between frequency and radius");
      c.delta = parse_rational();
      if (c.delta < 0) fail("bohr radius must be nonnegative");
      expect(')', "to close bohr");
      return c;
    }
    if (id == "interval") {
      expect('(', "after 'interval'");
      c.kind = CondKind::Interval;
      c.lo = parse_integer(true);
      expect(',', "between interval endpoints");
      c.hi = parse_integer(true);
      expect(')', "to close interval");
      return c;
    }
    fail_at("unknown condition '" + id + "'", id_pos);
  }
};

std::string print_rat_token(const Rat& r) { return rat_print(r); }

std::string print_poly(const PhasePoly& p) {
  std::string out;
  bool any = false;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    const Rat& c = p.coeffs[k];
    if (c == 0) continue;
    Rat mag = rat_abs(c);
    bool neg = c < 0;
    if (!any) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (k == 0) {
      out += print_rat_token(mag);
    } else {
      std::string var = k == 1 ? "n" : "n^" + std::to_string(k);
      if (mag == 1) {
        out += var;
      } else {
        out += print_rat_token(mag) + "*" + var;
      }
    }
    any = true;
  }
  return any ? out : "0";
}

std::string print_cond(const Cond& c) {
  switch (c.kind) {
    case CondKind::ModEq:
      return "n mod " + std::to_string(c.modulus) + " == " + std::to_string(c.residue);
    case CondKind::Bohr:
      return "bohr(" + print_rat_token(c.alpha) + "; " + print_rat_token(c.delta) + ")";
    case CondKind::Interval:
      return "interval(" + std::to_string(c.lo) + ", " + std::to_string(c.hi) + ")";
  }
  return {};
}

std::string print_node(const Expr& e, bool parenthesize_sums) {
  switch (e.kind) {
    case ExprKind::Const:
      return print_rat_token(e.constant);
    case ExprKind::Phase:
      return "e(" + print_poly(e.poly) + ")";
    case ExprKind::Indicator:
      return "indicator(" + print_cond(e.cond) + ")";
    case ExprKind::Random:
      return std::string("random(") + (e.random_kind == RandomKind::Pm1 ? "pm1" : "unif01") + ", " +
             std::to_string(e.seed) + ")";
    case ExprKind::Clamp01:
      return "clamp01(" + print_node(e.children[0], false) + ")";
    case ExprKind::Product: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " * ";
        out += print_node(e.children[i], true);
      }
      return out;
    }
    case ExprKind::Sum: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        std::string part = print_node(e.children[i], false);
        if (i == 0) {
          out = e.signs[0] == 1 ? part : "-" + part;
        } else if (!part.empty() && part[0] == '-') {
          out += (e.signs[i] == 1 ? " - " : " + ") + part.substr(1);
        } else {
          out += (e.signs[i] == 1 ? " + " : " - ") + part;
        }
      }
      if (parenthesize_sums) return "(" + out + ")";
      return out;
    }
  }
  return {};
}

bool cond_holds(const Cond& c, long n) {
  switch (c.kind) {
    case CondKind::ModEq: {
      long m = c.modulus;
      long lhs = ((n % m) + m) % m;
      long rhs = ((c.residue % m) + m) % m;
      return lhs == rhs;
    }
    case CondKind::Bohr:
      return rat_dist_to_int(c.alpha * n) <= c.delta;
    case CondKind::Interval:
      return c.lo <= n && n <= c.hi;
  }
  return false;
}

std::vector<cd> eval_node(const Expr& e, const DomainSpec& d) {
  std::size_t n = d.size();
  std::vector<cd> out(n);
  switch (e.kind) {
    case ExprKind::Const: {
      cd v{to_double(e.constant), 0.0};
      std::fill(out.begin(), out.end(), v);
      break;
    }
    case ExprKind::Phase: {
      for (std::size_t i = 0; i < n; ++i) {
        Rat p = e.poly.eval(d.point(i));
        out[i] = e2pi(to_double(rat_frac(p)));
      }
      break;
    }
    case ExprKind::Indicator: {
      for (std::size_t i = 0; i < n; ++i) out[i] = cond_holds(e.cond, d.point(i)) ? cd{1, 0} : cd{0, 0};
      break;
    }
    case ExprKind::Random: {
      std::mt19937_64 eng(e.seed);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits = eng();
        if (e.random_kind == RandomKind::Pm1) {
          out[i] = (bits >> 63) ? cd{1, 0} : cd{-1, 0};
        } else {
          // 53 high bits -> dyadic rational in [0,1); identical on all
          // platforms, unlike std distribution adapters.
          out[i] = cd{static_cast<double>(bits >> 11) * 0x1.0p-53, 0.0};
        }
      }
      break;
    }
    case ExprKind::Clamp01: {
      out = eval_node(e.children[0], d);
      for (cd& v : out) v = cd{std::min(1.0, std::max(0.0, v.real())), 0.0};
      break;
    }
    case ExprKind::Product: {
      std::fill(out.begin(), out.end(), cd{1, 0});
      for (const Expr& ch : e.children) {
        std::vector<cd> part = eval_node(ch, d);
        for (std::size_t i = 0; i < n; ++i) out[i] *= part[i];
      }
      break;
    }
    case ExprKind::Sum: {
      for (std::size_t j = 0; j < e.children.size(); ++j) {
        std::vector<cd> part = eval_node(e.children[j], d);
        double s = e.signs[j];
        for (std::size_t i = 0; i < n; ++i) out[i] += s * part[i];
      }
      break;
    }
  }
  return out;
}

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

std::string print_expr(const Expr& e) { return print_node(e, false); }

SampledFunction eval_expr(const Expr& e, const DomainSpec& domain) {
  return make_sampled(domain, eval_node(e, domain));
}

}  // namespace hofa
