#include "hofa/exactla.hpp"

#include <stdexcept>

namespace hofa {

namespace {

/// Plain forward elimination; returns the echelon rows (first-pivot form).
std::vector<RatVec> eliminate(std::vector<RatVec> rows) {
  std::vector<RatVec> out;
  for (RatVec& r : rows) {
    for (const RatVec& b : out) {
      std::size_t p = 0;
      while (p < b.size() && b[p] == 0) ++p;
      if (p < b.size() && r[p] != 0) {
        Rat c = r[p] / b[p];
        for (std::size_t j = p; j < r.size(); ++j) r[j] -= c * b[j];
      }
    }
    bool nonzero = false;
    for (const Rat& x : r) {
      if (x != 0) {
        nonzero = true;
        break;
      }
    }
    if (nonzero) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

int rat_rank(std::vector<RatVec> rows) { return static_cast<int>(eliminate(std::move(rows)).size()); }

bool in_span(const std::vector<RatVec>& rows, const RatVec& target) {
  std::vector<RatVec> basis = eliminate(rows);
  RatVec r = target;
  for (const RatVec& b : basis) {
    std::size_t p = 0;
    while (p < b.size() && b[p] == 0) ++p;
    if (p < b.size() && r[p] != 0) {
      Rat c = r[p] / b[p];
      for (std::size_t j = p; j < r.size(); ++j) r[j] -= c * b[j];
    }
  }
  for (const Rat& x : r)
    if (x != 0) return false;
  return true;
}

IntVec primitive_integer(const RatVec& v, std::size_t sign_index) {
  BigInt lcm = 1;
  for (const Rat& x : v) {
    BigInt d = rat_den(x);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  IntVec out(v.size());
  std::vector<BigInt> nums(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(lcm);
    out[i] = rat_num(scaled);
    nums[i] = out[i];
  }
  BigInt g = vec_gcd(nums);
  if (g > 1) {
    for (BigInt& x : out) x /= g;
  }
  if (sign_index >= out.size() || out[sign_index] == 0) throw std::logic_error("primitive_integer: zero sign entry");
  if (out[sign_index] < 0) {
    for (BigInt& x : out) x = -x;
  }
  return out;
}

RatVec LastPivotBasis::reduce(RatVec v) const {
  if (v.size() != width) throw std::invalid_argument("basis width mismatch");
  for (std::size_t j = 0; j < rows.size(); ++j) {
    std::size_t p = pivots[j];
    if (v[p] == 0) continue;
    Rat c = v[p] / Rat(rows[j][p]);
    for (std::size_t i = 0; i < width; ++i) v[i] -= c * Rat(rows[j][i]);
  }
  return v;
}

bool LastPivotBasis::insert(RatVec v) {
  RatVec r = reduce(std::move(v));
  std::size_t pivot = width;
  for (std::size_t i = width; i-- > 0;) {
    if (r[i] != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot == width) return false;
  rows.push_back(primitive_integer(r, pivot));
  pivots.push_back(pivot);
  return true;
}

std::optional<RatVec> LastPivotBasis::coordinates(const RatVec& v, std::size_t prefix) const {
  if (v.size() != width) throw std::invalid_argument("basis width mismatch");
  if (prefix > rows.size()) throw std::invalid_argument("prefix exceeds basis size");
  RatVec r = v;
  RatVec coords(prefix, Rat(0));
  // Rows after j vanish at pivot j, so the first rows resolve first.
  for (std::size_t j = 0; j < prefix; ++j) {
    std::size_t p = pivots[j];
    if (r[p] == 0) continue;
    Rat c = r[p] / Rat(rows[j][p]);
    coords[j] = c;
    for (std::size_t i = 0; i < width; ++i) r[i] -= c * Rat(rows[j][i]);
  }
  for (const Rat& x : r)
    if (x != 0) return std::nullopt;
  return coords;
}

std::vector<IntVec> integer_kernel(const std::vector<RatVec>& rows, std::size_t width) {
  // Gauss-Jordan on the constraint matrix; free variables parameterize the
  // kernel.
  std::vector<RatVec> m;
  for (const RatVec& r : rows) {
    if (r.size() != width) throw std::invalid_argument("kernel width mismatch");
    m.push_back(r);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < m.size(); ++col) {
    std::size_t sel = rank;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[rank], m[sel]);
    Rat inv = Rat(1) / m[rank][col];
    for (std::size_t j = 0; j < width; ++j) m[rank][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][col] == 0) continue;
      Rat c = m[i][col];
      for (std::size_t j = 0; j < width; ++j) m[i][j] -= c * m[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(width, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<IntVec> kernel;
  for (std::size_t free = 0; free < width; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(width, Rat(0));
    v[free] = 1;
    for (std::size_t i = 0; i < rank; ++i) v[pivot_col[i]] = -m[i][free];
    std::size_t first_nonzero = 0;
    while (first_nonzero < width && v[first_nonzero] == 0) ++first_nonzero;
    kernel.push_back(primitive_integer(v, first_nonzero));
  }
  return kernel;
}

}  // namespace hofa
