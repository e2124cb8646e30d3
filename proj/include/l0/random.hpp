#pragma once

// Seeded random instances for property checks. Every generator takes the
// engine by reference so a single seed fixes a whole run.

#include <random>
#include <vector>

#include "l0/algebra.hpp"
#include "l0/group.hpp"
#include "l0/pugroup.hpp"
#include "l0/submeasure.hpp"

namespace l0 {

using Rng = std::mt19937_64;

inline long uniform_long(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

/// Each atom gets a label drawn from `pool`.
inline PUFunc random_pufunc(const AlgebraPtr& alg, const GroupPtr& G, const std::vector<GroupElement>& pool,
                            Rng& rng) {
  LabelMap l;
  for (int i = 0; i < alg->size(); ++i) {
    l[pool[static_cast<std::size_t>(uniform_long(rng, 0, static_cast<long>(pool.size()) - 1))]] |= Mask{1} << i;
  }
  return {alg, G, l};
}

/// Every element of S(𝒜,G) for finite G, as atom labelings.
inline std::vector<PUFunc> all_pufuncs(const AlgebraPtr& alg, const GroupPtr& G) {
  std::vector<PUFunc> out;
  long count = 1;
  for (int i = 0; i < alg->size(); ++i) count *= G->order();
  for (long code = 0; code < count; ++code) {
    LabelMap l;
    long c = code;
    for (int i = 0; i < alg->size(); ++i) {
      l[GroupElement(c % G->order())] |= Mask{1} << i;
      c /= G->order();
    }
    out.emplace_back(alg, G, l);
  }
  return out;
}

inline Rational random_rational(Rng& rng, long max_num, long max_den) {
  return Rational(uniform_long(rng, 0, max_num), uniform_long(rng, 1, max_den));
}

/// A monotone table: φ(A) = max over a random upward-closed assignment.
inline SetFunc random_monotone(const AlgebraPtr& alg, Rng& rng, long max_num = 6, long max_den = 4) {
  std::vector<Rational> v(alg->element_count(), 0);
  for (Mask m = 1; m < v.size(); ++m) {
    Rational x = random_rational(rng, max_num, max_den);
    x.canonicalize();
    for (Mask t = m; t; t &= t - 1) {
      Mask below = m & ~(t & -t);
      if (v[below] > x) x = v[below];
    }
    v[m] = x;
  }
  return SetFunc::table(alg, std::move(v));
}

/// max of a few random measures: always a submeasure.
inline SetFunc random_max_of_measures(const AlgebraPtr& alg, Rng& rng, int parts = 2) {
  std::vector<std::vector<Rational>> w(static_cast<std::size_t>(parts));
  for (auto& p : w) {
    for (int i = 0; i < alg->size(); ++i) {
      Rational r = random_rational(rng, 4, 3);
      r.canonicalize();
      p.push_back(r);
    }
  }
  return SetFunc::max_of(alg, std::move(w));
}

inline VeeMonoidHom random_vee_hom(const AlgebraPtr& source, const AlgebraPtr& target, Rng& rng) {
  std::vector<Mask> images;
  for (int i = 0; i < source->size(); ++i) {
    images.push_back(static_cast<Mask>(uniform_long(rng, 0, static_cast<long>(target->top()))));
  }
  return VeeMonoidHom::from_atom_images(source, target, images);
}

}  // namespace l0
