#pragma once

#include "hofa/exactla.hpp"

#include <string>
#include <vector>

namespace hofa {

/// System of t integer linear forms on Z^D, one row of coefficients per form.
struct LinearFormSystem {
  int D = 1;
  int t = 1;
  std::vector<std::vector<long>> rows;
  std::vector<std::string> names;
};

/// Parses "n; n+d; n+2*d". Variables are mapped to coordinates in order of
/// first appearance; terms are [coef '*'] var or bare integers times nothing
/// (constant terms are rejected: the systems here are homogeneous).
LinearFormSystem parse_forms(const std::string& text);

/// k-term progression system (n, n+d, ..., n+(k-1)d) on Z^2.
LinearFormSystem ap_system(int k);

/// 2^k parallelepiped forms n + sum_i w_i h_i, w in {0,1}^k, on Z^{k+1}.
LinearFormSystem parallelepiped_system(int k);

std::vector<long> eval_forms(const LinearFormSystem& psi, const std::vector<long>& n);

/// True iff no two rows are rational multiples of each other.
bool pairwise_independent(const LinearFormSystem& psi);

/// Cauchy-Schwarz complexity: the least s such that, for every i, the other
/// t-1 forms split into at most s+1 classes whose rational spans all avoid
/// psi_i. Exact search; t <= 12 enforced.
int cs_complexity(const LinearFormSystem& psi);

/// Nested spans of coordinatewise powers Psi(n)^j, 1 <= j <= i <= s, with an
/// integral last-pivot row-echelon basis. dims[i-1] rows span level i; each
/// row carries the degree at which it entered.
struct PowerFlag {
  int s = 1;
  int t = 1;
  std::vector<int> dims;
  LastPivotBasis basis{0};
  std::vector<int> degrees;

  std::size_t level_size(int level) const { return static_cast<std::size_t>(dims.at(level - 1)); }
};

PowerFlag power_flag(const LinearFormSystem& psi, int s);

/// Membership of an exact vector in the level-i subspace of the flag.
bool flag_contains(const PowerFlag& flag, const RatVec& v, int level);

/// Primitive integer basis of the annihilator of the level-i subspace in Q^t.
std::vector<IntVec> flag_annihilator(const PowerFlag& flag, int level);

/// Each sample is a list of 1..i argument vectors; checks that the pointwise
/// product of the evaluated forms lies in the level-i subspace.
bool depolarisation_check(const LinearFormSystem& psi, int i,
                          const std::vector<std::vector<std::vector<long>>>& samples);

/// True iff the degree-(s+1) powers psi_i^{s+1} are linearly independent over
/// Q, read off in the monomial basis of degree-(s+1) forms on Z^D.
bool top_power_independence(const LinearFormSystem& psi, int s);

/// Dimension sum d_i * (m_i - m_{i-1}) over levels; groupDims must list the
/// filtration dims d_1 >= ... >= d_s of the target group.
long leibman_dim(const PowerFlag& flag, const std::vector<long>& groupDims);

}  // namespace hofa
