#pragma once

// Nonzero-point search for black-box polynomials.
//
// find_nonzero_assignment looks for any point where P does not vanish.
// find_sparse_assignment additionally bounds the number of nonzero
// coordinates by the degree bound d: a reduced polynomial that is not
// identically zero keeps a nonzero monomial on at most d variables, so such a
// point always exists. find_sparse_witness applies this in the coordinates of
// a dual basis, which turns sparsity into vanishing linear forms.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpbound/error.hpp"
#include "mpbound/field.hpp"
#include "mpbound/matspace.hpp"
#include "mpbound/rng.hpp"

namespace mpbound {

using PointEvaluator = std::function<Elem(std::span<const Elem>)>;
using MatsEvaluator = std::function<Elem(std::span<const Mat>)>;

struct SearchOptions {
  std::uint64_t seed = 0;
  std::size_t budget = 100000;                  // evaluations outside exhaustive sparse enumeration
  std::uint64_t exhaustive_limit = 10000000;    // max (support, values) candidates to enumerate
  std::vector<std::vector<Elem>> hints;         // tried first, in order
};

enum class SearchStrategy { Hint, Exhaustive, SupportReduction, RandomSubsets, Dense };

inline const char* to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::Hint: return "hint";
    case SearchStrategy::Exhaustive: return "exhaustive";
    case SearchStrategy::SupportReduction: return "support-reduction";
    case SearchStrategy::RandomSubsets: return "random-subsets";
    case SearchStrategy::Dense: return "dense";
  }
  return "?";
}

struct SparseAssignment {
  std::vector<Elem> point;
  std::vector<std::size_t> support;  // ascending
  std::size_t evaluations = 0;
  SearchStrategy strategy = SearchStrategy::Exhaustive;
};

namespace detail {

inline std::vector<std::size_t> support_of(std::span<const Elem> v) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.push_back(i);
  return s;
}

/// min(limit + 1, sum_{s <= d} C(nvars, s) (q-1)^s).
inline std::uint64_t sparse_candidate_count(std::size_t nvars, std::size_t d, std::uint64_t q, std::uint64_t limit) {
  std::uint64_t total = 0;
  long double binom = 1, scale = 1;
  for (std::size_t s = 0; s <= d && s <= nvars; ++s) {
    if (s > 0) {
      binom = binom * static_cast<long double>(nvars - s + 1) / static_cast<long double>(s);
      scale *= static_cast<long double>(q - 1);
    }
    const long double term = binom * scale;
    if (term > static_cast<long double>(limit) || total + static_cast<std::uint64_t>(term) > limit) return limit + 1;
    total += static_cast<std::uint64_t>(term + 0.5L);
  }
  return total;
}

/// Counts evaluations and enforces the budget.
class BudgetedEval {
 public:
  BudgetedEval(const PointEvaluator& p, std::size_t budget) : p_(p), budget_(budget) {}
  bool exhausted() const { return used_ >= budget_; }
  std::size_t used() const { return used_; }
  bool nonzero(std::span<const Elem> v) {
    ++used_;
    return !p_(v).is_zero();
  }
  void uncap() { budget_ = SIZE_MAX; }

 private:
  const PointEvaluator& p_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

inline bool enumerate_sparse(BudgetedEval& eval, std::size_t nvars, std::size_t d, std::uint64_t q,
                             std::vector<Elem>& out) {
  std::vector<Elem> point(nvars);
  for (std::size_t s = 0; s <= d && s <= nvars; ++s) {
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
      std::vector<std::uint32_t> vals(s, 1);
      while (true) {
        for (std::size_t i = 0; i < s; ++i) point[idx[i]].code = vals[i];
        if (eval.nonzero(point)) {
          out = point;
          return true;
        }
        // next value tuple, last position fastest
        std::size_t pos = s;
        while (pos > 0 && vals[pos - 1] + 1 == q) vals[--pos] = 1;
        if (pos == 0) break;
        ++vals[pos - 1];
      }
      for (auto i : idx) point[i] = Elem{};
      // next combination in lexicographic order
      std::size_t pos = s;
      while (pos > 0 && idx[pos - 1] == nvars - s + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < s; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return false;
}

/// Greedy support shrinking from a nonzero point. A variable is dropped when P
/// stays nonzero somewhere on the remaining coordinates; once no variable can
/// be dropped the support is the variable set of a monomial, hence <= deg P.
inline bool reduce_support(BudgetedEval& eval, std::vector<Elem>& point, std::size_t d, std::uint64_t q, Rng& rng) {
  constexpr std::uint64_t kRestrictedExhaustive = std::uint64_t{1} << 14;
  constexpr std::size_t kRestrictedSamples = 256;
  auto support = support_of(point);
  bool progress = true;
  while (support.size() > d && progress && !eval.exhausted()) {
    progress = false;
    const auto snapshot = support;
    for (std::size_t v : snapshot) {
      if (support.size() <= d || eval.exhausted()) break;
      if (point[v].is_zero()) continue;
      std::vector<Elem> trial = point;
      trial[v] = Elem{};
      bool found = eval.nonzero(trial);
      if (!found) {
        std::vector<std::size_t> rest;
        for (std::size_t s : support)
          if (s != v) rest.push_back(s);
        std::uint64_t space = 1;
        bool small = true;
        for (std::size_t i = 0; i < rest.size() && small; ++i) {
          space *= q;
          small = space <= kRestrictedExhaustive;
        }
        if (small) {
          for (std::uint64_t code = 1; code < space && !found && !eval.exhausted(); ++code) {
            std::uint64_t c = code;
            for (std::size_t s : rest) {
              trial[s].code = static_cast<std::uint32_t>(c % q);
              c /= q;
            }
            found = eval.nonzero(trial);
          }
        } else {
          for (std::size_t it = 0; it < kRestrictedSamples && !found && !eval.exhausted(); ++it) {
            for (std::size_t s : rest) trial[s].code = static_cast<std::uint32_t>(rng.below(q));
            found = eval.nonzero(trial);
          }
        }
      }
      if (found) {
        point = trial;
        support = support_of(point);
        progress = true;
      }
    }
  }
  return support.size() <= d;
}

}  // namespace detail

/// Any point with P != 0. Tries the hints, then enumerates F^nvars in index
/// order when it fits in the budget, otherwise samples seeded random points.
/// A degree bound below |F| guarantees random points succeed often.
inline std::vector<Elem> find_nonzero_assignment(const PointEvaluator& p, std::size_t nvars, std::size_t degree_bound,
                                                 const FieldCtx& ctx, const SearchOptions& opt = {}) {
  detail::BudgetedEval eval(p, opt.budget);
  for (const auto& h : opt.hints) {
    if (h.size() != nvars) throw DimensionError("hint has wrong arity");
    if (eval.nonzero(h)) return h;
  }
  const std::uint64_t q = ctx.size();
  std::uint64_t space = 1;
  bool fits = true;
  for (std::size_t i = 0; i < nvars && fits; ++i) {
    if (space > opt.budget / q) fits = false;
    space *= q;
  }
  std::vector<Elem> point(nvars);
  if (fits) {
    for (std::uint64_t code = 0; code < space && !eval.exhausted(); ++code) {
      std::uint64_t c = code;
      for (auto& e : point) {
        e.code = static_cast<std::uint32_t>(c % q);
        c /= q;
      }
      if (eval.nonzero(point)) return point;
    }
    throw NotFound("polynomial vanishes on all of F^" + std::to_string(nvars), eval.used());
  }
  Rng rng(opt.seed);
  while (!eval.exhausted()) {
    for (auto& e : point) e = random_elem(ctx, rng);
    if (eval.nonzero(point)) return point;
  }
  throw NotFound("no nonzero point found (degree bound " + std::to_string(degree_bound) + ", field size " +
                     std::to_string(q) + ")",
                 eval.used());
}

/// Point with P != 0 and at most min(d, nvars) nonzero coordinates.
///
/// Order: hints whose support already fits; exhaustive enumeration of supports
/// by size then lexicographically (all nonzero value tuples) when the candidate
/// count is within opt.exhaustive_limit; otherwise support reduction starting
/// from nonzero hints, then random d-subsets with random nonzero values, all
/// within opt.budget evaluations.
inline SparseAssignment find_sparse_assignment(const PointEvaluator& p, std::size_t nvars, std::size_t d,
                                               const FieldCtx& ctx, const SearchOptions& opt = {}) {
  const std::size_t dsup = std::min(d, nvars);
  const std::uint64_t q = ctx.size();
  detail::BudgetedEval eval(p, opt.budget);
  auto done = [&](std::vector<Elem> point, SearchStrategy how) {
    SparseAssignment out;
    out.support = detail::support_of(point);
    out.point = std::move(point);
    out.evaluations = eval.used();
    out.strategy = how;
    return out;
  };

  std::vector<std::vector<Elem>> live_hints;
  for (const auto& h : opt.hints) {
    if (h.size() != nvars) throw DimensionError("hint has wrong arity");
    if (!eval.nonzero(h)) continue;
    if (detail::support_of(h).size() <= dsup) return done(h, SearchStrategy::Hint);
    live_hints.push_back(h);
  }

  if (dsup == nvars) {
    SearchOptions dense = opt;
    dense.hints.clear();
    dense.budget = opt.budget > eval.used() ? opt.budget - eval.used() : 0;
    auto pt = find_nonzero_assignment(p, nvars, d, ctx, dense);
    return done(std::move(pt), SearchStrategy::Dense);
  }

  if (detail::sparse_candidate_count(nvars, dsup, q, opt.exhaustive_limit) <= opt.exhaustive_limit) {
    eval.uncap();
    std::vector<Elem> pt;
    if (detail::enumerate_sparse(eval, nvars, dsup, q, pt)) return done(std::move(pt), SearchStrategy::Exhaustive);
    throw NotFound("polynomial vanishes on every point of support <= " + std::to_string(dsup), eval.used());
  }

  Rng rng(opt.seed);
  for (auto& h : live_hints) {
    if (eval.exhausted()) break;
    if (detail::reduce_support(eval, h, dsup, q, rng)) return done(std::move(h), SearchStrategy::SupportReduction);
  }
  std::vector<std::size_t> order(nvars);
  std::vector<Elem> point(nvars);
  while (!eval.exhausted()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < dsup; ++i) std::swap(order[i], order[i + rng.below(nvars - i)]);
    std::fill(point.begin(), point.end(), Elem{});
    for (std::size_t i = 0; i < dsup; ++i) point[order[i]].code = static_cast<std::uint32_t>(1 + rng.below(q - 1));
    if (eval.nonzero(point)) return done(point, SearchStrategy::RandomSubsets);
  }
  throw NotFound("no nonzero point with support <= " + std::to_string(dsup) + " within budget", eval.used());
}

/// k matrices spanned by few dual-basis elements, with forms vanishing on all of them.
struct VanishWitness {
  std::vector<Mat> mats;
  std::vector<std::size_t> vanishing;  // forms (see producer) vanishing on every matrix
  std::vector<std::size_t> support;    // dual coordinates used, as j * n^2 + i for matrix j, dual i
  std::vector<std::size_t> basis;      // indices of the independent forms behind the duals
  std::size_t evaluations = 0;
  SearchStrategy strategy = SearchStrategy::Exhaustive;
};

/// Sparse nonzero point of P(a_1, ..., a_k) in the coordinates a_j = sum_i alpha_{ij} b_i.
///
/// `duals` are the n^2 matrices b_i dual to independent forms mu_i; hints are
/// k-tuples of matrices, converted to alpha-coordinates via mu_i(a_j). The
/// witness lists, as `vanishing`, the indices i with mu_i(a_j) = 0 for all j;
/// at least n^2 - d of them when d < n^2.
inline VanishWitness find_sparse_witness(const MatsEvaluator& p, std::size_t d, std::span<const Mat> duals,
                                         std::size_t k, const SearchOptions& opt = {},
                                         const std::vector<std::vector<Mat>>& hints = {}) {
  if (duals.empty()) throw DimensionError("empty dual basis");
  const FieldCtx ctx = duals.front().ctx();
  const std::size_t n = duals.front().rows();
  const std::size_t nn = n * n;
  if (duals.size() != nn) throw DimensionError("dual basis must have n^2 matrices");
  // forms dual to the b_i: rows of B^{-1}, B having columns vec(b_i)
  Mat b(ctx, nn, nn);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t r = 0; r < nn; ++r) b(r, i) = duals[i].entries()[r];
  const Mat binv = inverse(b);
  auto coords = [&](const Mat& a) {
    std::vector<Elem> alpha(nn);
    for (std::size_t i = 0; i < nn; ++i) {
      Elem s{};
      for (std::size_t r = 0; r < nn; ++r) s = ctx.add(s, ctx.mul(binv(i, r), a.entries()[r]));
      alpha[i] = s;
    }
    return alpha;
  };
  auto to_mats = [&](std::span<const Elem> alpha) {
    std::vector<Mat> mats(k, Mat(ctx, n, n));
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < nn; ++i) {
        const Elem c = alpha[j * nn + i];
        if (c.is_zero()) continue;
        auto dst = mats[j].entries();
        const auto src = duals[i].entries();
        for (std::size_t r = 0; r < nn; ++r) dst[r] = ctx.add(dst[r], ctx.mul(c, src[r]));
      }
    return mats;
  };

  SearchOptions inner = opt;
  for (const auto& h : hints) {
    if (h.size() != k) throw DimensionError("hint must hold k matrices");
    std::vector<Elem> alpha;
    for (const auto& a : h) {
      const auto c = coords(a);
      alpha.insert(alpha.end(), c.begin(), c.end());
    }
    inner.hints.push_back(std::move(alpha));
  }
  const PointEvaluator in_alpha = [&](std::span<const Elem> alpha) {
    const auto mats = to_mats(alpha);
    return p(mats);
  };
  const auto found = find_sparse_assignment(in_alpha, k * nn, d, ctx, inner);

  VanishWitness w;
  w.mats = to_mats(found.point);
  w.support = found.support;
  w.evaluations = found.evaluations;
  w.strategy = found.strategy;
  if (p(w.mats).is_zero()) throw Error("sparse witness failed re-evaluation");
  for (std::size_t i = 0; i < nn; ++i) {
    bool zero = true;
    for (const auto& a : w.mats) zero = zero && coords(a)[i].is_zero();
    if (zero) w.vanishing.push_back(i);
  }
  return w;
}

}  // namespace mpbound
