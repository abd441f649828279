#pragma once

// Agreement between codewords and Plotkin-type length bounds.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "mpbound/error.hpp"
#include "mpbound/field.hpp"
#include "mpbound/matcodes.hpp"

namespace mpbound {

struct AgreeingPair {
  std::size_t i = 0, j = 0;
  std::size_t count = 0;
};

struct AgreeingTriple {
  std::size_t i = 0, j = 0, l = 0;
  std::size_t count = 0;
};

namespace detail {

inline void require_equal_lengths(std::span<const std::vector<Elem>> v) {
  for (const auto& x : v)
    if (x.size() != v.front().size()) throw DimensionError("vectors of different lengths");
}

}  // namespace detail

inline std::size_t agreement(std::span<const Elem> u, std::span<const Elem> v) { return u.size() - hamming(u, v); }

/// Pair agreeing on the most coordinates; ties go to the smallest (i, j).
inline AgreeingPair best_agreeing_pair(std::span<const std::vector<Elem>> v) {
  if (v.size() < 2) throw DimensionError("need at least two vectors");
  detail::require_equal_lengths(v);
  AgreeingPair best{0, 1, agreement(v[0], v[1])};
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const std::size_t c = agreement(v[i], v[j]);
      if (c > best.count) best = {i, j, c};
    }
  return best;
}

/// Triple agreeing on the most coordinates; ties go to the smallest (i, j, l).
inline AgreeingTriple best_agreeing_triple(std::span<const std::vector<Elem>> v) {
  if (v.size() < 3) throw DimensionError("need at least three vectors");
  detail::require_equal_lengths(v);
  const std::size_t t = v.front().size();
  auto count3 = [&](std::size_t i, std::size_t j, std::size_t l) {
    std::size_t c = 0;
    for (std::size_t s = 0; s < t; ++s) c += v[i][s] == v[j][s] && v[j][s] == v[l][s];
    return c;
  };
  AgreeingTriple best{0, 1, 2, count3(0, 1, 2)};
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      for (std::size_t l = j + 1; l < v.size(); ++l) {
        const std::size_t c = count3(i, j, l);
        if (c > best.count) best = {i, j, l, c};
      }
  return best;
}

/// count >= t/p - t/k, compared exactly.
inline bool pair_bound_holds(std::size_t count, std::size_t t, std::size_t p, std::size_t k) {
  return static_cast<std::int64_t>(count * p * k) >= static_cast<std::int64_t>(t * k) - static_cast<std::int64_t>(t * p);
}

/// count >= t/p^2 - 3t/(pk), compared exactly.
inline bool triple_bound_holds(std::size_t count, std::size_t t, std::size_t p, std::size_t k) {
  return static_cast<std::int64_t>(count * p * p * k) >=
         static_cast<std::int64_t>(t * k) - static_cast<std::int64_t>(3 * t * p);
}

/// 2N - 4N/(k+2): minimum length of k words over GF(2) at pairwise distance >= N.
inline Rational plotkin_min_length(std::int64_t big_n, std::int64_t k) {
  if (k <= 2) throw PreconditionError("Plotkin bound needs k > 2");
  return Rational(2 * big_n) - Rational(4 * big_n, k + 2);
}

/// N p k / (p k - k + p): the same bound over GF(p), equal to the GF(2) one at p = 2.
inline Rational plotkin_min_length(std::int64_t big_n, std::int64_t k, std::int64_t p) {
  if (k <= p) throw PreconditionError("Plotkin bound over GF(p) needs k > p");
  return Rational(big_n * p * k, p * k - k + p);
}

inline std::int64_t ceil_rational(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (q * r.denominator() < r.numerator()) ++q;
  return q;
}

inline std::size_t min_pairwise_distance(std::span<const std::vector<Elem>> v) {
  std::size_t best = SIZE_MAX;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::min(best, hamming(v[i], v[j]));
  return best;
}

inline bool check_pairwise_distance(std::span<const std::vector<Elem>> v, std::size_t big_n) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (hamming(v[i], v[j]) < big_n) return false;
  return true;
}

}  // namespace mpbound
