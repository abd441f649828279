#pragma once

// Linear codes of matrices: maps Gamma from n x n matrices to F^m with
// weight(Gamma(a)) >= n * rank(a). Codes arise from the x-forms of a bilinear
// decomposition, or from the output coefficients of a quadratic circuit.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "mpbound/circuits.hpp"
#include "mpbound/error.hpp"
#include "mpbound/matspace.hpp"
#include "mpbound/rng.hpp"

namespace mpbound {

using Rational = boost::rational<std::int64_t>;

struct MatrixCode {
  FieldCtx ctx;
  std::size_t n = 0;
  std::vector<LinForm> forms;

  std::size_t m() const { return forms.size(); }
};

/// Enumerate every matrix.
struct Exhaustive {};
/// Draw `count` uniform matrices (or triples) from a seeded stream.
struct Sampled {
  std::size_t count = 0;
  std::uint64_t seed = 0;
};
using CheckMode = std::variant<Exhaustive, Sampled>;

struct CodeViolation {
  Mat matrix;
  std::size_t weight = 0;
  std::size_t rank = 0;
};

struct CodeReport {
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  std::vector<CodeViolation> violations;  // first kMaxListed only
  std::optional<Rational> min_ratio;      // over matrices of nonzero rank
  std::optional<Mat> min_ratio_witness;

  static constexpr std::size_t kMaxListed = 64;

  bool ok() const { return violation_count == 0; }
};

inline std::vector<Elem> encode(const MatrixCode& code, const Mat& a) {
  if (a.rows() != code.n || a.cols() != code.n) throw DimensionError("matrix size does not match code");
  std::vector<Elem> out;
  out.reserve(code.m());
  for (const auto& f : code.forms) out.push_back(eval_form(f, a));
  return out;
}

inline std::size_t weight(std::span<const Elem> v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Elem e) { return !e.is_zero(); }));
}

inline std::size_t hamming(std::span<const Elem> u, std::span<const Elem> v) {
  if (u.size() != v.size()) throw DimensionError("hamming distance of vectors with different lengths");
  std::size_t d = 0;
  for (std::size_t i = 0; i < u.size(); ++i) d += u[i] != v[i];
  return d;
}

/// Gamma(x) = (u_1(x), ..., u_m(x)); the y-forms are ignored.
inline MatrixCode code_from_bilinear(const BilinearDecomp& d) {
  if (!d.dims.square()) throw DimensionError("matrix codes need square decompositions");
  if (const auto rep = verify_mp(d); !rep) throw PreconditionError("decomposition does not compute MP_n: " + rep.first_discrepancy);
  MatrixCode code{d.ctx, d.dims.n1, {}};
  for (const auto& t : d.triples) code.forms.push_back(t.u);
  return code;
}

/// gamma_k(z) = sum_{i,j} alpha^{(k)}_{ij} z_{ij}.
inline MatrixCode code_from_quadratic(const QuadCircuit& q) {
  if (const auto rep = verify_quadratic(q); !rep) throw PreconditionError("circuit does not compute MP_n: " + rep.first_discrepancy);
  MatrixCode code{q.ctx, q.n, {}};
  for (const auto& g : q.triples) code.forms.push_back(LinForm{q.ctx, g.alpha});
  return code;
}

/// Tests weight(Gamma(a)) >= n * rank(a) matrix by matrix.
inline CodeReport check_rank_distance(const MatrixCode& code, const CheckMode& mode) {
  CodeReport report;
  auto visit = [&](const Mat& a) {
    ++report.checked;
    const std::size_t r = rank(a);
    if (r == 0) return;
    const std::size_t w = weight(encode(code, a));
    const Rational ratio(static_cast<std::int64_t>(w), static_cast<std::int64_t>(code.n * r));
    if (!report.min_ratio || ratio < *report.min_ratio) {
      report.min_ratio = ratio;
      report.min_ratio_witness = a;
    }
    if (w < code.n * r) {
      ++report.violation_count;
      if (report.violations.size() < CodeReport::kMaxListed) report.violations.push_back({a, w, r});
    }
  };
  if (std::holds_alternative<Exhaustive>(mode)) {
    const auto count = matrix_count(code.ctx, code.n, code.n);
    if (!count || *count > (std::uint64_t{1} << 24)) throw PreconditionError("matrix space too large for exhaustive check");
    for (std::uint64_t i = 0; i < *count; ++i) visit(matrix_from_index(code.ctx, code.n, code.n, i));
  } else {
    const auto& s = std::get<Sampled>(mode);
    Rng rng(s.seed);
    for (std::size_t i = 0; i < s.count; ++i) visit(random_matrix(code.ctx, code.n, code.n, rng));
  }
  return report;
}

/// sum_k a_k(x,y) b_k(x,y) gamma_k(z) == trace(x y z^T).
///
/// Exhaustive mode compares coefficients: the right side's coefficient of
/// x_s y_t z_o is trace(e_s e_t e_o^T); the left side must also have no
/// xx- or yy-terms. Sampled mode evaluates both sides at random triples.
inline bool trace_identity_check(const QuadCircuit& q, const CheckMode& mode) {
  q.validate();
  const auto& f = q.ctx;
  const std::size_t n = q.n, nn = n * n, nv = 2 * nn;
  if (std::holds_alternative<Sampled>(mode)) {
    const auto& s = std::get<Sampled>(mode);
    Rng rng(s.seed);
    for (std::size_t it = 0; it < s.count; ++it) {
      const Mat x = random_matrix(f, n, n, rng), y = random_matrix(f, n, n, rng), z = random_matrix(f, n, n, rng);
      const auto xy = detail::concat(x, y);
      Elem lhs{};
      for (const auto& g : q.triples) {
        const Elem gz = eval_form(LinForm{f, g.alpha}, z);
        lhs = f.add(lhs, f.mul(gz, f.mul(eval_form(g.a, xy), eval_form(g.b, xy))));
      }
      if (lhs != trace(x * y * transpose(z))) return false;
    }
    return true;
  }
  // symmetric coefficient of z_s z_t (s <= t, over the xy variables) times z_o
  std::vector<Elem> lhs(nv * nv * nn);
  for (const auto& g : q.triples)
    for (std::size_t s = 0; s < nv; ++s)
      for (std::size_t t = 0; t < nv; ++t) {
        const Elem ab = f.mul(g.a.coeffs[s], g.b.coeffs[t]);
        if (ab.is_zero()) continue;
        const std::size_t lo = std::min(s, t), hi = std::max(s, t);
        for (std::size_t o = 0; o < nn; ++o) {
          auto& c = lhs[(lo * nv + hi) * nn + o];
          c = f.add(c, f.mul(ab, g.alpha[o]));
        }
      }
  for (std::size_t s = 0; s < nv; ++s)
    for (std::size_t t = s; t < nv; ++t)
      for (std::size_t o = 0; o < nn; ++o) {
        Elem rhs{};
        if (s < nn && t >= nn) {
          const Mat es = Mat::unit(f, n, n, s / n, s % n);
          const Mat et = Mat::unit(f, n, n, (t - nn) / n, (t - nn) % n);
          const Mat eo = Mat::unit(f, n, n, o / n, o % n);
          rhs = trace(es * et * transpose(eo));
        }
        if (lhs[(s * nv + t) * nn + o] != rhs) return false;
      }
  return true;
}

struct DerivativeSpanReport {
  std::size_t lhs_dim = 0;        // dim span of the 2n^2 discrete derivatives
  std::size_t k = 0;              // weight(Gamma(z0))
  std::size_t expected_dim = 0;   // 2n * rank(z0)
  std::size_t gate_span_dim = 0;  // dim span{a_k, b_k : gamma_k(z0) != 0}
  bool derivatives_match = false; // finite differences equal (z0 y^T)_{ij}, (x^T z0)_{ij}
  bool contained = false;         // every derivative lies in the gate span
  bool ok = false;                // lhs_dim <= 2k
};

/// Discrete-derivative span argument for one z0, computed from the circuit.
///
/// The restricted sum S(x,y) = sum_k gamma_k(z0) a_k(x,y) b_k(x,y) is
/// differenced along every x_{ij} and y_{ij}. Each difference is affine; its
/// linear part is read off by evaluating S at unit points.
inline DerivativeSpanReport derivative_span_check(const QuadCircuit& q, const Mat& z0) {
  if (const auto rep = verify_quadratic(q); !rep) throw PreconditionError("circuit does not compute MP_n: " + rep.first_discrepancy);
  if (z0.rows() != q.n || z0.cols() != q.n) throw DimensionError("z0 size does not match circuit");
  detail::require_same_field(q.ctx, z0.ctx());
  const auto& f = q.ctx;
  const std::size_t n = q.n, nn = n * n, nv = 2 * nn;

  std::vector<Elem> scale;
  for (const auto& g : q.triples) scale.push_back(eval_form(LinForm{f, g.alpha}, z0));
  DerivativeSpanReport rep;
  rep.k = weight(scale);
  rep.expected_dim = 2 * n * rank(z0);

  auto restricted_sum = [&](std::span<const Elem> v) {
    Elem s{};
    for (std::size_t k = 0; k < q.m(); ++k)
      if (!scale[k].is_zero())
        s = f.add(s, f.mul(scale[k], f.mul(eval_form(q.triples[k].a, v), eval_form(q.triples[k].b, v))));
    return s;
  };
  std::vector<Elem> point(nv);
  const Elem s0 = restricted_sum(point);
  std::vector<Elem> s_unit(nv);
  for (std::size_t s = 0; s < nv; ++s) {
    point[s] = f.one();
    s_unit[s] = restricted_sum(point);
    point[s] = f.zero();
  }

  IncrementalBasis pd_span(f, nv);
  IncrementalBasis gate_span(f, nv);
  for (std::size_t k = 0; k < q.m(); ++k)
    if (!scale[k].is_zero()) {
      gate_span.insert(q.triples[k].a.coeffs);
      gate_span.insert(q.triples[k].b.coeffs);
    }
  rep.gate_span_dim = gate_span.dim();
  rep.derivatives_match = true;
  rep.contained = true;
  for (std::size_t dir = 0; dir < nv; ++dir) {
    // D(v) = S(v + e_dir) - S(v); constant D(0) and linear part D(e_s) - D(0)
    const Elem constant = f.sub(s_unit[dir], s0);
    std::vector<Elem> form(nv);
    for (std::size_t s = 0; s < nv; ++s) {
      point[s] = f.add(point[s], f.one());
      point[dir] = f.add(point[dir], f.one());
      const Elem shifted = restricted_sum(point);
      point[s] = f.zero();
      point[dir] = f.zero();
      form[s] = f.sub(f.sub(shifted, s_unit[s]), constant);
    }
    // closed forms: d/dx_{ij} -> (z0 y^T)_{ij}, d/dy_{ij} -> (x^T z0)_{ij}
    std::vector<Elem> direct(nv);
    const std::size_t i = (dir % nn) / n, j = (dir % nn) % n;
    for (std::size_t l = 0; l < n; ++l) {
      if (dir < nn)
        direct[nn + j * n + l] = z0(i, l);
      else
        direct[l * n + i] = z0(l, j);
    }
    if (!constant.is_zero() || form != direct) rep.derivatives_match = false;
    if (!gate_span.contains(form)) rep.contained = false;
    pd_span.insert(form);
  }
  rep.lhs_dim = pd_span.dim();
  rep.ok = rep.lhs_dim <= 2 * rep.k;
  return rep;
}

}  // namespace mpbound
