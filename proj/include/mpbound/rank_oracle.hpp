#pragma once

// Brute-force bilinear rank of tiny 3-tensors.
//
// T has rank <= r iff the span of its slices T[:, :, l] (as d1 x d2 matrices)
// lies in the span of r rank-1 matrices u v^T. The search picks rank-1
// matrices as increasing index sequences and prunes when the uncovered part of
// the slice span exceeds the remaining budget.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpbound/circuits.hpp"
#include "mpbound/error.hpp"
#include "mpbound/field.hpp"
#include "mpbound/matspace.hpp"

namespace mpbound {

struct Tensor3 {
  FieldCtx ctx;
  std::size_t d1 = 0, d2 = 0, d3 = 0;
  std::vector<Elem> entries;  // (i, j, l) row-major

  Tensor3() = default;
  Tensor3(FieldCtx c, std::size_t a, std::size_t b, std::size_t l)
      : ctx(c), d1(a), d2(b), d3(l), entries(a * b * l) {}

  Elem& at(std::size_t i, std::size_t j, std::size_t l) { return entries[(i * d2 + j) * d3 + l]; }
  Elem at(std::size_t i, std::size_t j, std::size_t l) const { return entries[(i * d2 + j) * d3 + l]; }
  bool is_zero() const {
    for (auto e : entries)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

struct RankOneTerm {
  std::vector<Elem> u, v, w;
};

using TensorDecomp = std::vector<RankOneTerm>;

inline Tensor3 tensor_from_terms(const FieldCtx& ctx, std::size_t d1, std::size_t d2, std::size_t d3,
                                 const TensorDecomp& terms) {
  Tensor3 t(ctx, d1, d2, d3);
  for (const auto& term : terms) {
    if (term.u.size() != d1 || term.v.size() != d2 || term.w.size() != d3) throw DimensionError("rank-1 term has wrong arity");
    for (std::size_t i = 0; i < d1; ++i) {
      if (term.u[i].is_zero()) continue;
      for (std::size_t j = 0; j < d2; ++j) {
        const Elem uv = ctx.mul(term.u[i], term.v[j]);
        if (uv.is_zero()) continue;
        for (std::size_t l = 0; l < d3; ++l) t.at(i, j, l) = ctx.add(t.at(i, j, l), ctx.mul(uv, term.w[l]));
      }
    }
  }
  return t;
}

/// Entry (x_a, y_b, out) is the coefficient of x_a y_b in that output of MP_n.
inline Tensor3 mp_tensor(std::size_t n, const FieldCtx& ctx) {
  if (n == 0) throw DimensionError("n must be positive");
  const std::size_t nn = n * n;
  Tensor3 t(ctx, nn, nn, nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) t.at(i * n + k, k * n + j, i * n + j) = ctx.one();
  return t;
}

inline Tensor3 tensor_from_decomp(const BilinearDecomp& d) {
  d.validate();
  TensorDecomp terms;
  for (const auto& t : d.triples) terms.push_back({t.u.coeffs, t.v.coeffs, t.w});
  return tensor_from_terms(d.ctx, d.dims.n1 * d.dims.n2, d.dims.n2 * d.dims.n3, d.dims.n1 * d.dims.n3, terms);
}

/// T[i][j][l] = 1 iff i + j = l: coefficients of (a0 + a1 X)(b0 + b1 X).
inline Tensor3 karatsuba_tensor(const FieldCtx& ctx) {
  Tensor3 t(ctx, 2, 2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) t.at(i, j, i + j) = ctx.one();
  return t;
}

enum class RankStatus { Found, ExhaustedNo, TimedOut };

inline const char* to_string(RankStatus s) {
  switch (s) {
    case RankStatus::Found: return "found";
    case RankStatus::ExhaustedNo: return "exhausted";
    case RankStatus::TimedOut: return "timed-out";
  }
  return "?";
}

struct RankDecision {
  RankStatus status = RankStatus::TimedOut;
  TensorDecomp decomposition;  // when found
  std::uint64_t nodes = 0;
};

namespace detail {

inline std::vector<std::vector<Elem>> projective_points(const FieldCtx& f, std::size_t len) {
  std::vector<std::vector<Elem>> out;
  const std::uint64_t q = f.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < len; ++i) total *= q;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::vector<Elem> v(len);
    std::uint64_t c = code;
    for (auto& e : v) {
      e.code = static_cast<std::uint32_t>(c % q);
      c /= q;
    }
    std::size_t first = 0;
    while (v[first].is_zero()) ++first;
    if (v[first] == f.one()) out.push_back(std::move(v));
  }
  return out;
}

/// Row rank of the mode-`mode` flattening.
inline std::size_t flattening_rank(const Tensor3& t, int mode) {
  const std::size_t dims[3] = {t.d1, t.d2, t.d3};
  const std::size_t rows = dims[mode], cols = t.entries.size() / rows;
  std::vector<Elem> m(rows * cols);
  std::vector<std::size_t> count(rows, 0);
  for (std::size_t i = 0; i < t.d1; ++i)
    for (std::size_t j = 0; j < t.d2; ++j)
      for (std::size_t l = 0; l < t.d3; ++l) {
        const std::size_t idx[3] = {i, j, l};
        const std::size_t r = idx[mode];
        m[r * cols + count[r]++] = t.at(i, j, l);
      }
  return row_reduce(t.ctx, m, rows, cols).size();
}

/// Solves sum_i x_i cols[i] = target; cols independent.
inline std::optional<std::vector<Elem>> solve_in_span(const FieldCtx& f, const std::vector<std::vector<Elem>>& cols,
                                                      const std::vector<Elem>& target) {
  const std::size_t len = target.size(), k = cols.size();
  std::vector<Elem> m(len * (k + 1));
  for (std::size_t r = 0; r < len; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r * (k + 1) + c] = cols[c][r];
    m[r * (k + 1) + k] = target[r];
  }
  const auto pivots = row_reduce(f, m, len, k + 1);
  std::vector<Elem> x(k);
  for (std::size_t r = pivots.size(); r-- > 0;) {
    const std::size_t pc = pivots[r];
    if (pc == k) return std::nullopt;
    Elem acc = m[r * (k + 1) + k];
    for (std::size_t c = pc + 1; c < k; ++c) acc = f.sub(acc, f.mul(m[r * (k + 1) + c], x[c]));
    x[pc] = f.mul(acc, f.inv(m[r * (k + 1) + pc]));
  }
  return x;
}

class RankSearch {
 public:
  RankSearch(const Tensor3& t, std::size_t budget, std::chrono::steady_clock::time_point deadline)
      : t_(t), f_(t.ctx), budget_(budget), deadline_(deadline), len_(t.d1 * t.d2) {
    for (const auto& u : projective_points(f_, t.d1))
      for (const auto& v : projective_points(f_, t.d2)) {
        std::vector<Elem> m(len_);
        for (std::size_t i = 0; i < t.d1; ++i)
          for (std::size_t j = 0; j < t.d2; ++j) m[i * t.d2 + j] = f_.mul(u[i], v[j]);
        cand_.push_back({u, v, std::move(m)});
      }
    for (std::size_t l = 0; l < t.d3; ++l) {
      std::vector<Elem> s(len_);
      for (std::size_t i = 0; i < t.d1; ++i)
        for (std::size_t j = 0; j < t.d2; ++j) s[i * t.d2 + j] = t.at(i, j, l);
      slices_.push_back(std::move(s));
    }
  }

  RankDecision run() {
    RankDecision out;
    IncrementalBasis chosen(f_, len_), joint(f_, len_);
    for (const auto& s : slices_) joint.insert(s);
    std::vector<std::size_t> picks;
    const int r = dfs(chosen, joint, picks, 0);
    out.nodes = nodes_;
    if (r < 0) {
      out.status = RankStatus::TimedOut;
    } else if (r == 0) {
      out.status = RankStatus::ExhaustedNo;
    } else {
      out.status = RankStatus::Found;
      out.decomposition = recover(result_);
    }
    return out;
  }

 private:
  struct Candidate {
    std::vector<Elem> u, v, flat;
  };

  // 1 found, 0 exhausted, -1 timed out
  int dfs(const IncrementalBasis& chosen, const IncrementalBasis& joint, std::vector<std::size_t>& picks,
          std::size_t start) {
    if ((++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) return -1;
    const std::size_t residual = joint.dim() - chosen.dim();
    if (residual == 0) {
      result_ = picks;
      return 1;
    }
    const std::size_t remaining = budget_ - picks.size();
    if (residual > remaining) return 0;
    const bool tight = residual == remaining;
    for (std::size_t c = start; c < cand_.size(); ++c) {
      const auto& flat = cand_[c].flat;
      if (chosen.contains(flat)) continue;
      if (tight && !joint.contains(flat)) continue;
      IncrementalBasis next_chosen = chosen, next_joint = joint;
      next_chosen.insert(flat);
      next_joint.insert(flat);
      if (next_joint.dim() - next_chosen.dim() > remaining - 1) continue;
      picks.push_back(c);
      const int r = dfs(next_chosen, next_joint, picks, c + 1);
      picks.pop_back();
      if (r != 0) return r;
    }
    return 0;
  }

  TensorDecomp recover(const std::vector<std::size_t>& picks) const {
    std::vector<std::vector<Elem>> cols;
    for (auto c : picks) cols.push_back(cand_[c].flat);
    TensorDecomp terms;
    for (auto c : picks) terms.push_back({cand_[c].u, cand_[c].v, std::vector<Elem>(t_.d3)});
    for (std::size_t l = 0; l < t_.d3; ++l) {
      const auto x = solve_in_span(f_, cols, slices_[l]);
      if (!x) throw Error("rank search: slice outside the chosen span");
      for (std::size_t i = 0; i < picks.size(); ++i) terms[i].w[l] = (*x)[i];
    }
    if (!(tensor_from_terms(f_, t_.d1, t_.d2, t_.d3, terms) == t_)) throw Error("rank search: decomposition does not verify");
    return terms;
  }

  const Tensor3& t_;
  FieldCtx f_;
  std::size_t budget_;
  std::chrono::steady_clock::time_point deadline_;
  std::size_t len_;
  std::vector<Candidate> cand_;
  std::vector<std::vector<Elem>> slices_;
  std::vector<std::size_t> result_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

inline void require_rank_searchable(const Tensor3& t) {
  if (t.d1 == 0 || t.d2 == 0 || t.d3 == 0) throw DimensionError("tensor dims must be positive");
  if (t.entries.size() != t.d1 * t.d2 * t.d3) throw DimensionError("tensor entry count does not match dims");
  long double size = 1;
  for (std::size_t i = 0; i < t.d1 + t.d2; ++i) size *= static_cast<long double>(t.ctx.size());
  if (size > static_cast<long double>(std::uint64_t{1} << 20)) throw PreconditionError("tensor too large for rank search");
}

/// Complete search for a decomposition with at most `budget` terms.
inline RankDecision rank_decide(const Tensor3& t, std::size_t budget, double time_limit_seconds = 60.0) {
  require_rank_searchable(t);
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(time_limit_seconds));
  return detail::RankSearch(t, budget, deadline).run();
}

struct RankInterval {
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::size_t flattening = 0;      // lower bound before any search
  bool upper_witnessed = false;    // upper comes from an explicit decomposition
  std::optional<TensorDecomp> witness;

  bool exact() const { return lower == upper; }
};

/// Decides r = lower, lower + 1, ... until a decomposition is found or time
/// runs out. The start is the largest flattening rank; `known_upper` caps the
/// search from a decomposition already in hand.
inline RankInterval tensor_rank(const Tensor3& t, double time_limit_seconds = 60.0,
                                std::optional<std::size_t> known_upper = std::nullopt) {
  require_rank_searchable(t);
  RankInterval out;
  out.flattening = std::max({detail::flattening_rank(t, 0), detail::flattening_rank(t, 1), detail::flattening_rank(t, 2)});
  out.lower = out.flattening;
  out.upper = std::min({t.d1 * t.d2, t.d1 * t.d3, t.d2 * t.d3});
  if (known_upper && *known_upper <= out.upper) {
    out.upper = *known_upper;
    out.upper_witnessed = true;
  }
  const auto start = std::chrono::steady_clock::now();
  while (out.lower < out.upper) {
    const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (used >= time_limit_seconds) break;
    auto dec = rank_decide(t, out.lower, time_limit_seconds - used);
    if (dec.status == RankStatus::Found) {
      out.upper = out.lower;
      out.upper_witnessed = true;
      out.witness = std::move(dec.decomposition);
    } else if (dec.status == RankStatus::ExhaustedNo) {
      ++out.lower;
    } else {
      break;
    }
  }
  if (out.exact() && !out.witness) {
    const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto dec = rank_decide(t, out.upper, std::max(0.0, time_limit_seconds - used));
    if (dec.status == RankStatus::Found) {
      out.witness = std::move(dec.decomposition);
      out.upper_witnessed = true;
    }
  }
  return out;
}

}  // namespace mpbound
