#pragma once

// Matrix families with invertible differences or invertible commutators, and
// many forms vanishing on all members.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpbound/embed.hpp"
#include "mpbound/error.hpp"
#include "mpbound/field.hpp"
#include "mpbound/matspace.hpp"
#include "mpbound/rng.hpp"
#include "mpbound/search.hpp"

namespace mpbound {

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace detail {

/// min(p^e, cap).
inline std::uint64_t saturating_pow(std::uint64_t p, std::uint64_t e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > cap / p) return cap;
    r *= p;
  }
  return std::min(r, cap);
}

inline Elem difference_product(std::span<const Mat> a) {
  const FieldCtx& f = a.front().ctx();
  Elem prod = f.one();
  for (std::size_t i = 0; i < a.size() && !prod.is_zero(); ++i)
    for (std::size_t j = i + 1; j < a.size() && !prod.is_zero(); ++j) prod = f.mul(prod, det(a[i] - a[j]));
  return prod;
}

inline Elem commutator_product(std::span<const Mat> a) {
  if (a.size() < 3) return a.empty() ? Elem{1} : a.front().ctx().one();
  const FieldCtx& f = a.front().ctx();
  Elem prod = f.one();
  for (std::size_t l = 2; l < a.size() && !prod.is_zero(); ++l)
    for (std::size_t j = 1; j < l && !prod.is_zero(); ++j)
      for (std::size_t i = 0; i < j && !prod.is_zero(); ++i)
        prod = f.mul(prod, det(commutator(a[i] - a[l], a[j] - a[l])));
  return prod;
}

inline std::vector<std::size_t> vanishing_on_all(std::span<const LinForm> forms, std::span<const Mat> mats) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    bool zero = true;
    for (const auto& a : mats) zero = zero && eval_form(forms[i], a).is_zero();
    if (zero) out.push_back(i);
  }
  return out;
}

inline std::size_t count_in(std::span<const std::size_t> sorted, std::span<const std::size_t> items) {
  std::size_t c = 0;
  for (auto i : items) c += std::binary_search(sorted.begin(), sorted.end(), i);
  return c;
}

struct FamilyProblem {
  std::vector<std::size_t> basis;
  std::vector<Mat> duals;
};

inline FamilyProblem prepare(std::span<const LinForm> forms, std::size_t n) {
  FamilyProblem fp;
  fp.basis = select_independent(forms);
  if (fp.basis.size() != n * n)
    throw PreconditionError("forms span dimension " + std::to_string(fp.basis.size()) + ", need n^2 = " +
                            std::to_string(n * n));
  std::vector<LinForm> indep;
  for (auto i : fp.basis) indep.push_back(forms[i]);
  fp.duals = dual_basis(indep, n);
  return fp;
}

}  // namespace detail

/// phi of the first k elements of GF(p^n) in enumeration order.
inline std::vector<Mat> invertible_difference_family(std::size_t n, std::size_t k, const FieldCtx& ctx) {
  if (!ctx.is_prime_field()) throw PreconditionError("family construction needs a prime field");
  if (n == 0 || k == 0) throw DimensionError("n and k must be positive");
  if (detail::saturating_pow(ctx.p(), n, std::uint64_t{1} << 40) < k) throw PreconditionError("k must be at most p^n");
  const FieldCtx ext = make_context(ctx.p(), n);
  std::vector<Mat> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(embed_elem(ext, Elem{static_cast<std::uint32_t>(i)}));
  if (detail::difference_product(out).is_zero()) throw Error("embedded family has a singular difference");
  return out;
}

/// k matrices with invertible pairwise differences on which at least
/// n^2 - C(k,2) n of the independent forms vanish.
///
/// `vanishing` indexes into `forms` (all of them, not only the independent
/// ones); `basis` lists the independent forms used for the dual basis.
inline VanishWitness vanish_family(std::span<const LinForm> forms, std::size_t n, std::size_t k, const FieldCtx& ctx,
                                   const SearchOptions& opt = {}) {
  if (k < 1) throw DimensionError("k must be positive");
  const auto hint = invertible_difference_family(n, k, ctx);
  const auto fp = detail::prepare(forms, n);
  const std::size_t d = choose(k, 2) * n;
  const MatsEvaluator p = [](std::span<const Mat> a) { return detail::difference_product(a); };
  VanishWitness w = find_sparse_witness(p, d, fp.duals, k, opt, {hint});
  w.basis = fp.basis;
  w.vanishing = detail::vanishing_on_all(forms, w.mats);
  if (detail::difference_product(w.mats).is_zero()) throw Error("family has a singular difference");
  if (d < n * n && detail::count_in(w.vanishing, w.basis) < n * n - d)
    throw Error("family has too few vanishing independent forms");
  return w;
}

/// k matrices whose triple commutators [a_i - a_l, a_j - a_l] (i < j < l) are
/// invertible, with at least n^2 - 2 C(k,3) n vanishing independent forms.
///
/// Existence comes from M_2(GF(p^{n/2})) embedded blockwise; a random tuple
/// there serves as the search hint.
inline VanishWitness commutator_family(std::size_t n, std::size_t k, std::span<const LinForm> forms,
                                       const FieldCtx& ctx, const SearchOptions& opt = {}) {
  if (!ctx.is_prime_field()) throw PreconditionError("family construction needs a prime field");
  if (n == 0 || n % 2 != 0) throw PreconditionError("commutator families need even n");
  const std::uint64_t triples = choose(k, 3);
  if (detail::saturating_pow(ctx.p(), n / 2, std::uint64_t{1} << 40) <= 4 * triples)
    throw PreconditionError("commutator families need p^(n/2) > 4 C(k,3)");
  const auto fp = detail::prepare(forms, n);
  std::vector<std::vector<Mat>> hints;
  if (triples > 0) {
    const FieldCtx ext = make_context(ctx.p(), n / 2);
    Rng rng(opt.seed);
    constexpr std::size_t kMaxAttempts = 10000;
    constexpr std::size_t kHints = 8;
    for (std::size_t it = 0; it < kMaxAttempts && hints.size() < kHints; ++it) {
      std::vector<Mat> small;
      for (std::size_t i = 0; i < k; ++i) small.push_back(random_matrix(ext, 2, 2, rng));
      if (detail::commutator_product(small).is_zero()) continue;
      // translating every member by -a_k keeps all commutators and zeroes a_k
      const Mat shift = small.back();
      std::vector<Mat> big;
      for (const auto& a : small) big.push_back(embed_block(a - shift, n / 2));
      hints.push_back(std::move(big));
    }
    if (hints.empty()) throw NotFound("no commutator family in M_2(GF(p^(n/2)))", kMaxAttempts);
  }
  const std::size_t d = 2 * triples * n;
  const MatsEvaluator p = [](std::span<const Mat> a) { return detail::commutator_product(a); };
  VanishWitness w = find_sparse_witness(p, d, fp.duals, k, opt, hints);
  w.basis = fp.basis;
  w.vanishing = detail::vanishing_on_all(forms, w.mats);
  if (detail::commutator_product(w.mats).is_zero()) throw Error("family has a singular commutator");
  if (d < n * n && detail::count_in(w.vanishing, w.basis) < n * n - d)
    throw Error("family has too few vanishing independent forms");
  return w;
}

}  // namespace mpbound
