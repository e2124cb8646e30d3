#pragma once

// Exact minimum set cover over atom masks by branch-and-bound: a greedy
// cover gives the incumbent, the fractional-cover LP gives a root lower
// bound, and the search branches on the uncovered atom with fewest options.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <vector>

#include "l0/algebra.hpp"
#include "l0/lp.hpp"

namespace l0 {

inline constexpr std::size_t kMaxCoverFamily = 24;

struct CoverResult {
  bool coverable = false;
  int size = 0;
  std::vector<std::size_t> chosen;  // indices into the family
};

namespace detail {

inline std::vector<std::size_t> greedy_cover(const std::vector<Mask>& family, Mask target) {
  std::vector<std::size_t> chosen;
  Mask left = target;
  while (left != 0) {
    std::size_t best = family.size();
    int gain = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      int g = std::popcount(family[i] & left);
      if (g > gain) {
        gain = g;
        best = i;
      }
    }
    if (best == family.size()) return {};
    chosen.push_back(best);
    left &= ~family[best];
  }
  return chosen;
}

// max Σ_{a∈target} z_a  s.t.  Σ_{a∈S} z_a <= 1 for every S; equals the
// fractional cover number by LP duality.
inline Rational fractional_cover_bound(const std::vector<Mask>& family, Mask target) {
  std::vector<int> atoms;
  for (Mask t = target; t; t &= t - 1) atoms.push_back(std::countr_zero(t));
  RationalLP lp;
  lp.objective.assign(atoms.size(), 1);
  for (Mask s : family) {
    std::vector<Rational> row(atoms.size(), 0);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if ((s >> atoms[k]) & 1U) row[k] = 1;
    }
    lp.rows.push_back(std::move(row));
    lp.rhs.emplace_back(1);
  }
  return solve_lp(lp).value;
}

struct CoverSearch {
  const std::vector<Mask>& family;
  int floor = 0;  // proven lower bound; stop once the incumbent reaches it
  int best;
  std::vector<std::size_t> best_choice;
  std::vector<std::size_t> stack;

  void run(Mask left) {
    if (best <= floor) return;
    const int depth = static_cast<int>(stack.size());
    if (left == 0) {
      if (depth < best) {
        best = depth;
        best_choice = stack;
      }
      return;
    }
    int widest = 0;
    for (Mask s : family) widest = std::max(widest, std::popcount(s & left));
    if (widest == 0) return;
    const int remaining = std::popcount(left);
    if (depth + (remaining + widest - 1) / widest >= best) return;

    int pivot = -1;
    std::size_t fewest = family.size() + 1;
    for (Mask t = left; t; t &= t - 1) {
      int a = std::countr_zero(t);
      std::size_t options = 0;
      for (Mask s : family) options += (s >> a) & 1U;
      if (options < fewest) {
        fewest = options;
        pivot = a;
      }
    }
    std::vector<std::size_t> branch;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if ((family[i] >> pivot) & 1U) branch.push_back(i);
    }
    std::stable_sort(branch.begin(), branch.end(), [&](std::size_t x, std::size_t y) {
      return std::popcount(family[x] & left) > std::popcount(family[y] & left);
    });
    for (std::size_t i : branch) {
      stack.push_back(i);
      run(left & ~family[i]);
      stack.pop_back();
    }
  }
};

}  // namespace detail

/// Smallest number of family members whose join covers `target`.
inline CoverResult min_set_cover(const std::vector<Mask>& family, Mask target) {
  if (family.size() > kMaxCoverFamily) {
    throw CapacityError("cover family has " + std::to_string(family.size()) +
                        " sets; the maximum is " + std::to_string(kMaxCoverFamily));
  }
  CoverResult out;
  if (target == 0) {
    out.coverable = true;
    return out;
  }
  std::vector<Mask> restricted(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) restricted[i] = family[i] & target;

  auto greedy = detail::greedy_cover(restricted, target);
  if (greedy.empty()) return out;
  out.coverable = true;

  Rational lower = detail::fractional_cover_bound(restricted, target);
  Integer lower_int;
  mpz_cdiv_q(lower_int.get_mpz_t(), lower.get_num_mpz_t(), lower.get_den_mpz_t());
  if (lower_int == static_cast<long>(greedy.size())) {
    out.size = static_cast<int>(greedy.size());
    out.chosen = std::move(greedy);
    return out;
  }

  detail::CoverSearch search{restricted, static_cast<int>(lower_int.get_si()),
                             static_cast<int>(greedy.size()), greedy, {}};
  search.run(target);
  out.size = search.best;
  out.chosen = search.best_choice;
  std::sort(out.chosen.begin(), out.chosen.end());
  return out;
}

}  // namespace l0
