#include "hofa/forms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>

namespace hofa {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

RatVec to_ratvec(const std::vector<long>& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

RatVec row_of(const LinearFormSystem& psi, int i) { return to_ratvec(psi.rows[static_cast<std::size_t>(i)]); }

/// DFS assignment of the non-target forms into at most m classes none of
/// whose spans captures the target. Classes are opened in order (symmetry
/// breaking); spans tested exactly.
bool assign_classes(const std::vector<RatVec>& others, const RatVec& target, std::size_t k,
                    std::vector<std::vector<RatVec>>& classes, std::size_t open, std::size_t m) {
  if (k == others.size()) return true;
  std::size_t limit = std::min(open + 1, m);
  for (std::size_t c = 0; c < limit; ++c) {
    classes[c].push_back(others[k]);
    bool ok = !in_span(classes[c], target);
    if (ok && assign_classes(others, target, k + 1, classes, std::max(open, c + 1), m)) return true;
    classes[c].pop_back();
  }
  return false;
}

int min_classes_for(const LinearFormSystem& psi, int i) {
  std::vector<RatVec> others;
  for (int j = 0; j < psi.t; ++j) {
    if (j != i) others.push_back(row_of(psi, j));
  }
  RatVec target = row_of(psi, i);
  if (others.empty()) return 0;
  for (std::size_t m = 1; m < static_cast<std::size_t>(psi.t); ++m) {
    std::vector<std::vector<RatVec>> classes(m);
    if (assign_classes(others, target, 0, classes, 0, m)) return static_cast<int>(m);
  }
  // Singleton classes always succeed under pairwise independence.
  return psi.t - 1;
}

void enumerate_grid(int D, long lo, long hi, std::vector<long>& cur, const std::function<void(const std::vector<long>&)>& fn) {
  if (static_cast<int>(cur.size()) == D) {
    fn(cur);
    return;
  }
  for (long v = lo; v <= hi; ++v) {
    cur.push_back(v);
    enumerate_grid(D, lo, hi, cur, fn);
    cur.pop_back();
  }
}

RatVec power_vector(const LinearFormSystem& psi, const std::vector<long>& n, int j) {
  std::vector<long> vals = eval_forms(psi, n);
  RatVec out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    out[i] = Rat(boost::multiprecision::pow(BigInt(vals[i]), static_cast<unsigned>(j)));
  }
  return out;
}

void enumerate_multi_indices(int D, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == D - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    enumerate_multi_indices(D, total - v, cur, out);
    cur.pop_back();
  }
}

BigInt multinomial(int p, const std::vector<int>& e) {
  BigInt acc = 1;
  int rem = p;
  for (int part : e) {
    for (int i = 1; i <= part; ++i) {
      acc = acc * (rem - part + i) / i;
    }
    rem -= part;
  }
  return acc;
}

}  // namespace

LinearFormSystem parse_forms(const std::string& text) {
  std::vector<std::string> pieces;
  std::string cur;
  for (char c : text) {
    if (c == ';') {
      pieces.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  pieces.push_back(cur);
  std::vector<std::map<std::string, long>> terms;
  std::vector<std::string> var_order;
  std::vector<std::string> names;
  for (const std::string& raw : pieces) {
    std::string form = trim(raw);
    if (form.empty()) throw std::invalid_argument("empty form in forms list");
    names.push_back(form);
    std::map<std::string, long> coeffs;
    std::size_t p = 0;
    auto skip = [&] { while (p < form.size() && std::isspace(static_cast<unsigned char>(form[p]))) ++p; };
    bool first_term = true;
    while (true) {
      skip();
      if (p >= form.size()) {
        if (first_term) throw std::invalid_argument("empty form in forms list");
        break;
      }
      long sign = 1;
      if (form[p] == '+' || form[p] == '-') {
        sign = form[p] == '-' ? -1 : 1;
        ++p;
        skip();
      } else if (!first_term) {
        throw std::invalid_argument("expected '+' or '-' between terms in '" + form + "'");
      }
      long coef = 1;
      bool saw_digits = false;
      if (p < form.size() && std::isdigit(static_cast<unsigned char>(form[p]))) {
        std::size_t d = p;
        while (p < form.size() && std::isdigit(static_cast<unsigned char>(form[p]))) ++p;
        coef = std::stol(form.substr(d, p - d));
        saw_digits = true;
        skip();
        if (p < form.size() && form[p] == '*') {
          ++p;
          skip();
        }
      }
      std::string var;
      if (p < form.size() && (std::isalpha(static_cast<unsigned char>(form[p])) || form[p] == '_')) {
        std::size_t v = p;
        while (p < form.size() && (std::isalnum(static_cast<unsigned char>(form[p])) || form[p] == '_')) ++p;
        var = form.substr(v, p - v);
      }
      if (var.empty()) {
        if (!saw_digits) throw std::invalid_argument("malformed term in '" + form + "'");
        throw std::invalid_argument("constant terms are not supported (forms are homogeneous): '" + form + "'");
      }
      if (std::find(var_order.begin(), var_order.end(), var) == var_order.end()) var_order.push_back(var);
      coeffs[var] += sign * coef;
      first_term = false;
    }
    terms.push_back(std::move(coeffs));
  }
  LinearFormSystem psi;
  psi.D = static_cast<int>(var_order.size());
  psi.t = static_cast<int>(terms.size());
  psi.names = std::move(names);
  if (psi.D == 0) throw std::invalid_argument("forms use no variables");
  for (const auto& m : terms) {
    std::vector<long> row(var_order.size(), 0);
    for (std::size_t j = 0; j < var_order.size(); ++j) {
      auto it = m.find(var_order[j]);
      if (it != m.end()) row[j] = it->second;
    }
    psi.rows.push_back(std::move(row));
  }
  bool any_nonzero = false;
  for (const auto& r : psi.rows)
    for (long c : r) any_nonzero |= c != 0;
  if (!any_nonzero) throw std::invalid_argument("all forms are zero");
  return psi;
}

LinearFormSystem ap_system(int k) {
  if (k < 1) throw std::invalid_argument("ap_system: k >= 1");
  LinearFormSystem psi;
  psi.D = 2;
  psi.t = k;
  for (int i = 0; i < k; ++i) {
    psi.rows.push_back({1, i});
    psi.names.push_back(i == 0 ? "n" : (i == 1 ? "n+d" : "n+" + std::to_string(i) + "d"));
  }
  return psi;
}

LinearFormSystem parallelepiped_system(int k) {
  if (k < 1 || k > 10) throw std::invalid_argument("parallelepiped_system: k in 1..10");
  LinearFormSystem psi;
  psi.D = k + 1;
  psi.t = 1 << k;
  for (int w = 0; w < (1 << k); ++w) {
    std::vector<long> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;
    for (int b = 0; b < k; ++b) {
      if (w & (1 << b)) row[static_cast<std::size_t>(b) + 1] = 1;
    }
    psi.rows.push_back(std::move(row));
    psi.names.push_back("vertex" + std::to_string(w));
  }
  return psi;
}

std::vector<long> eval_forms(const LinearFormSystem& psi, const std::vector<long>& n) {
  if (n.size() != static_cast<std::size_t>(psi.D)) throw std::invalid_argument("eval_forms: argument dimension mismatch");
  std::vector<long> out(psi.rows.size(), 0);
  for (std::size_t i = 0; i < psi.rows.size(); ++i) {
    long acc = 0;
    for (std::size_t j = 0; j < n.size(); ++j) acc += psi.rows[i][j] * n[j];
    out[i] = acc;
  }
  return out;
}

bool pairwise_independent(const LinearFormSystem& psi) {
  for (std::size_t a = 0; a < psi.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < psi.rows.size(); ++b) {
      bool dependent = true;
      for (std::size_t i = 0; i < psi.rows[a].size() && dependent; ++i) {
        for (std::size_t j = i + 1; j < psi.rows[a].size() && dependent; ++j) {
          BigInt cross = BigInt(psi.rows[a][i]) * psi.rows[b][j] - BigInt(psi.rows[a][j]) * psi.rows[b][i];
          if (cross != 0) dependent = false;
        }
      }
      if (dependent) return false;
    }
  }
  return true;
}

int cs_complexity(const LinearFormSystem& psi) {
  if (psi.t > 12) throw std::invalid_argument("cs_complexity: t <= 12 enforced (exponential search)");
  if (!pairwise_independent(psi)) throw std::invalid_argument("cs_complexity requires pairwise independent forms");
  if (psi.t == 1) return 0;
  int worst = 0;
  for (int i = 0; i < psi.t; ++i) worst = std::max(worst, min_classes_for(psi, i));
  return worst - 1;
}

PowerFlag power_flag(const LinearFormSystem& psi, int s) {
  if (s < 1) throw std::invalid_argument("power_flag: s >= 1");
  if (s > 8) throw std::invalid_argument("power_flag: s too large");
  double grid_cost = std::pow(static_cast<double>(s) + 1.0, psi.D);
  if (grid_cost > 2e5) throw std::invalid_argument("power_flag: grid too large for D");

  std::vector<std::vector<long>> extra;  // saturation repair points
  for (int attempt = 0; attempt < 3; ++attempt) {
    PowerFlag flag;
    flag.s = s;
    flag.t = psi.t;
    flag.basis = LastPivotBasis(static_cast<std::size_t>(psi.t));
    for (int j = 1; j <= s; ++j) {
      auto feed = [&](const std::vector<long>& n) {
        if (flag.basis.insert(power_vector(psi, n, j))) flag.degrees.push_back(j);
      };
      std::vector<long> cur;
      enumerate_grid(psi.D, 0, j, cur, feed);
      for (int u = 0; u < psi.D; ++u) {
        std::vector<long> unit(static_cast<std::size_t>(psi.D), 0);
        unit[static_cast<std::size_t>(u)] = 1;
        feed(unit);
      }
      for (const auto& n : extra) feed(n);
      flag.dims.push_back(static_cast<int>(flag.basis.size()));
    }
    // Saturation: random integer points must not enlarge any level.
    std::mt19937 rng(0x5eedu);
    std::uniform_int_distribution<long> pick(-5, 5);
    bool saturated = true;
    for (int trial = 0; trial < 20 && saturated; ++trial) {
      std::vector<long> n(static_cast<std::size_t>(psi.D));
      for (long& x : n) x = pick(rng);
      for (int j = 1; j <= s && saturated; ++j) {
        if (!flag.basis.contains(power_vector(psi, n, j), flag.level_size(j))) {
          extra.push_back(n);
          saturated = false;
        }
      }
    }
    if (saturated) return flag;
  }
  throw std::logic_error("power_flag: interpolation grid failed to saturate");
}

bool flag_contains(const PowerFlag& flag, const RatVec& v, int level) {
  if (level < 1 || level > flag.s) throw std::invalid_argument("flag level out of range");
  return flag.basis.contains(v, flag.level_size(level));
}

std::vector<IntVec> flag_annihilator(const PowerFlag& flag, int level) {
  if (level < 1 || level > flag.s) throw std::invalid_argument("flag level out of range");
  std::vector<RatVec> rows;
  for (std::size_t j = 0; j < flag.level_size(level); ++j) {
    RatVec r(flag.basis.width);
    for (std::size_t i = 0; i < flag.basis.width; ++i) r[i] = Rat(flag.basis.rows[j][i]);
    rows.push_back(std::move(r));
  }
  return integer_kernel(rows, static_cast<std::size_t>(flag.t));
}

bool depolarisation_check(const LinearFormSystem& psi, int i,
                          const std::vector<std::vector<std::vector<long>>>& samples) {
  if (i < 1) throw std::invalid_argument("depolarisation_check: i >= 1");
  PowerFlag flag = power_flag(psi, i);
  for (const auto& sample : samples) {
    if (sample.empty() || sample.size() > static_cast<std::size_t>(i)) {
      throw std::invalid_argument("depolarisation_check: each sample needs 1..i argument vectors");
    }
    RatVec prod(static_cast<std::size_t>(psi.t), Rat(1));
    for (const auto& n : sample) {
      std::vector<long> vals = eval_forms(psi, n);
      for (std::size_t c = 0; c < prod.size(); ++c) prod[c] *= Rat(vals[c]);
    }
    if (!flag.basis.contains(prod, flag.level_size(i))) return false;
  }
  return true;
}

bool top_power_independence(const LinearFormSystem& psi, int s) {
  if (s < 0) throw std::invalid_argument("top_power_independence: s >= 0");
  int p = s + 1;
  std::vector<std::vector<int>> monos;
  std::vector<int> cur;
  enumerate_multi_indices(psi.D, p, cur, monos);
  std::vector<RatVec> matrix;
  for (const auto& row : psi.rows) {
    RatVec coeffs(monos.size());
    for (std::size_t m = 0; m < monos.size(); ++m) {
      BigInt c = multinomial(p, monos[m]);
      for (std::size_t j = 0; j < monos[m].size(); ++j) {
        c *= boost::multiprecision::pow(BigInt(row[j]), static_cast<unsigned>(monos[m][j]));
      }
      coeffs[m] = Rat(c);
    }
    matrix.push_back(std::move(coeffs));
  }
  return rat_rank(matrix) == psi.t;
}

long leibman_dim(const PowerFlag& flag, const std::vector<long>& groupDims) {
  if (groupDims.size() != flag.dims.size()) {
    throw std::invalid_argument("leibman_dim: filtration length does not match flag length");
  }
  for (std::size_t i = 1; i < groupDims.size(); ++i) {
    if (groupDims[i] > groupDims[i - 1]) throw std::invalid_argument("leibman_dim: dims must be nonincreasing");
  }
  long acc = 0;
  int prev = 0;
  for (std::size_t i = 0; i < groupDims.size(); ++i) {
    acc += groupDims[i] * (flag.dims[i] - prev);
    prev = flag.dims[i];
  }
  return acc;
}

}  // namespace hofa
