#pragma once

// Bilinear decompositions and quadratic circuits for matrix product, held in
// the one-layer normal form: m product gates, each a product of two linear
// forms, and every output a linear combination of the gate values.

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mpbound/error.hpp"
#include "mpbound/field.hpp"
#include "mpbound/matspace.hpp"

namespace mpbound {

/// x is n1 x n2, y is n2 x n3, the product is n1 x n3.
struct Shape {
  std::size_t n1 = 0, n2 = 0, n3 = 0;

  bool square() const { return n1 == n2 && n2 == n3; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// One product gate u(x) * v(y) feeding output (i, j) with weight w[i*n3 + j].
struct BilinearTriple {
  LinForm u;
  LinForm v;
  std::vector<Elem> w;

  friend bool operator==(const BilinearTriple&, const BilinearTriple&) = default;
};

struct BilinearDecomp {
  FieldCtx ctx;
  Shape dims;
  std::vector<BilinearTriple> triples;

  std::size_t m() const { return triples.size(); }

  /// Throws unless every triple has the arity implied by dims and lives in ctx.
  void validate() const {
    if (dims.n1 == 0 || dims.n2 == 0 || dims.n3 == 0) throw DimensionError("decomposition dims must be positive");
    if (triples.empty()) throw DimensionError("decomposition needs at least one product gate");
    for (const auto& t : triples) {
      if (!(t.u.ctx == ctx) || !(t.v.ctx == ctx)) throw DimensionError("triple form lives in a different field");
      if (t.u.nvars() != dims.n1 * dims.n2 || t.v.nvars() != dims.n2 * dims.n3 || t.w.size() != dims.n1 * dims.n3)
        throw DimensionError("triple arity does not match decomposition dims");
    }
  }

  friend bool operator==(const BilinearDecomp&, const BilinearDecomp&) = default;
};

/// Gate a(x, y) * b(x, y) over the 2n^2 variables (x row-major, then y row-major).
struct QuadTriple {
  LinForm a;
  LinForm b;
  std::vector<Elem> alpha;

  friend bool operator==(const QuadTriple&, const QuadTriple&) = default;
};

struct QuadCircuit {
  FieldCtx ctx;
  std::size_t n = 0;
  std::vector<QuadTriple> triples;

  std::size_t m() const { return triples.size(); }

  void validate() const {
    if (n == 0) throw DimensionError("circuit size must be positive");
    if (triples.empty()) throw DimensionError("circuit needs at least one product gate");
    for (const auto& t : triples) {
      if (!(t.a.ctx == ctx) || !(t.b.ctx == ctx)) throw DimensionError("gate form lives in a different field");
      if (t.a.nvars() != 2 * n * n || t.b.nvars() != 2 * n * n || t.alpha.size() != n * n)
        throw DimensionError("gate arity does not match circuit size");
    }
  }

  friend bool operator==(const QuadCircuit&, const QuadCircuit&) = default;
};

/// Outcome of a formal verification; names the first wrong coefficient.
struct VerifyReport {
  bool ok = false;
  std::string first_discrepancy;

  explicit operator bool() const { return ok; }
};

/// The naive n^3-gate algorithm; triples ordered by (i, j, k).
inline BilinearDecomp naive_decomp(std::size_t n, FieldCtx ctx) {
  if (n == 0) throw DimensionError("n must be positive");
  BilinearDecomp d{ctx, {n, n, n}, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        BilinearTriple t{LinForm::coordinate(ctx, n * n, i * n + k), LinForm::coordinate(ctx, n * n, k * n + j),
                         std::vector<Elem>(n * n)};
        t.w[i * n + j] = ctx.one();
        d.triples.push_back(std::move(t));
      }
  return d;
}

/// Strassen's seven-product scheme for 2 x 2 matrices.
///
///   M1 = (x11 + x22)(y11 + y22)   M5 = (x11 + x12) y22
///   M2 = (x21 + x22) y11          M6 = (x21 - x11)(y11 + y12)
///   M3 = x11 (y12 - y22)          M7 = (x12 - x22)(y21 + y22)
///   M4 = x22 (y21 - y11)
///
///   z11 = M1 + M4 - M5 + M7   z12 = M3 + M5
///   z21 = M2 + M4             z22 = M1 - M2 + M3 + M6
inline BilinearDecomp strassen_decomp(FieldCtx ctx) {
  // coefficient rows over (11, 12, 21, 22)
  const int u[7][4] = {{1, 0, 0, 1}, {0, 0, 1, 1}, {1, 0, 0, 0}, {0, 0, 0, 1},
                       {1, 1, 0, 0}, {-1, 0, 1, 0}, {0, 1, 0, -1}};
  const int v[7][4] = {{1, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, -1}, {-1, 0, 1, 0},
                       {0, 0, 0, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}};
  const int w[7][4] = {{1, 0, 0, 1}, {0, 0, 1, -1}, {0, 1, 0, 1}, {1, 0, 1, 0},
                       {-1, 1, 0, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
  auto row = [&](const int (&r)[4]) {
    std::vector<Elem> out;
    for (int c : r) out.push_back(ctx.from_int(c));
    return out;
  };
  BilinearDecomp d{ctx, {2, 2, 2}, {}};
  for (int r = 0; r < 7; ++r) d.triples.push_back({LinForm{ctx, row(u[r])}, LinForm{ctx, row(v[r])}, row(w[r])});
  return d;
}

namespace detail {

inline std::string idx2(std::size_t flat, std::size_t cols) {
  return std::to_string(flat / cols + 1) + "," + std::to_string(flat % cols + 1);
}

}  // namespace detail

/// Formal check: coefficient of x_a y_b in output o equals the matrix-product tensor.
inline VerifyReport verify_mp(const BilinearDecomp& d) {
  try {
    d.validate();
  } catch (const Error& e) {
    return {false, e.what()};
  }
  const auto& f = d.ctx;
  const auto [n1, n2, n3] = d.dims;
  const std::size_t nx = n1 * n2, ny = n2 * n3, no = n1 * n3;
  std::vector<Elem> coeff(nx * ny * no);
  for (const auto& t : d.triples)
    for (std::size_t a = 0; a < nx; ++a) {
      if (t.u.coeffs[a].is_zero()) continue;
      for (std::size_t b = 0; b < ny; ++b) {
        if (t.v.coeffs[b].is_zero()) continue;
        const Elem uv = f.mul(t.u.coeffs[a], t.v.coeffs[b]);
        for (std::size_t o = 0; o < no; ++o)
          if (!t.w[o].is_zero()) {
            auto& c = coeff[(a * ny + b) * no + o];
            c = f.add(c, f.mul(uv, t.w[o]));
          }
      }
    }
  for (std::size_t a = 0; a < nx; ++a)
    for (std::size_t b = 0; b < ny; ++b)
      for (std::size_t o = 0; o < no; ++o) {
        const std::size_t i = a / n2, k = a % n2, kk = b / n3, j = b % n3;
        const bool expected = k == kk && o == i * n3 + j;
        const Elem got = coeff[(a * ny + b) * no + o];
        if (got != (expected ? f.one() : f.zero())) {
          std::ostringstream os;
          os << "coefficient of x[" << detail::idx2(a, n2) << "]*y[" << detail::idx2(b, n3) << "] in output ["
             << detail::idx2(o, n3) << "] is " << f.format(got) << ", expected " << (expected ? 1 : 0);
          return {false, os.str()};
        }
      }
  return {true, {}};
}

/// Formal check of a quadratic circuit, comparing symmetric monomial coefficients.
inline VerifyReport verify_quadratic(const QuadCircuit& q) {
  try {
    q.validate();
  } catch (const Error& e) {
    return {false, e.what()};
  }
  const auto& f = q.ctx;
  const std::size_t n = q.n, nn = n * n, nv = 2 * nn;
  // coefficient of z_s z_t (s <= t) in output o
  std::vector<Elem> coeff(nv * nv * nn);
  auto at = [&](std::size_t s, std::size_t t, std::size_t o) -> Elem& { return coeff[(s * nv + t) * nn + o]; };
  for (const auto& g : q.triples)
    for (std::size_t s = 0; s < nv; ++s) {
      if (g.a.coeffs[s].is_zero()) continue;
      for (std::size_t t = 0; t < nv; ++t) {
        if (g.b.coeffs[t].is_zero()) continue;
        const Elem ab = f.mul(g.a.coeffs[s], g.b.coeffs[t]);
        const std::size_t lo = std::min(s, t), hi = std::max(s, t);
        for (std::size_t o = 0; o < nn; ++o)
          if (!g.alpha[o].is_zero()) at(lo, hi, o) = f.add(at(lo, hi, o), f.mul(ab, g.alpha[o]));
      }
    }
  auto name = [&](std::size_t s) {
    return s < nn ? "x[" + detail::idx2(s, n) + "]" : "y[" + detail::idx2(s - nn, n) + "]";
  };
  for (std::size_t s = 0; s < nv; ++s)
    for (std::size_t t = s; t < nv; ++t)
      for (std::size_t o = 0; o < nn; ++o) {
        bool expected = false;
        if (s < nn && t >= nn) {
          const std::size_t i = s / n, k = s % n, kk = (t - nn) / n, j = (t - nn) % n;
          expected = k == kk && o == i * n + j;
        }
        const Elem got = at(s, t, o);
        if (got != (expected ? f.one() : f.zero())) {
          std::ostringstream os;
          os << "coefficient of " << name(s) << "*" << name(t) << " in output [" << detail::idx2(o, n) << "] is "
             << f.format(got) << ", expected " << (expected ? 1 : 0);
          return {false, os.str()};
        }
      }
  return {true, {}};
}

inline Mat evaluate(const BilinearDecomp& d, const Mat& x, const Mat& y) {
  if (x.rows() != d.dims.n1 || x.cols() != d.dims.n2 || y.rows() != d.dims.n2 || y.cols() != d.dims.n3)
    throw DimensionError("inputs do not match decomposition dims");
  detail::require_same_field(d.ctx, x.ctx());
  detail::require_same_field(d.ctx, y.ctx());
  const auto& f = d.ctx;
  Mat out(f, d.dims.n1, d.dims.n3);
  for (const auto& t : d.triples) {
    const Elem g = f.mul(eval_form(t.u, x), eval_form(t.v, y));
    if (g.is_zero()) continue;
    for (std::size_t o = 0; o < t.w.size(); ++o) out.entries()[o] = f.add(out.entries()[o], f.mul(g, t.w[o]));
  }
  return out;
}

namespace detail {

inline std::vector<Elem> concat(const Mat& x, const Mat& y) {
  std::vector<Elem> xy(x.entries().begin(), x.entries().end());
  xy.insert(xy.end(), y.entries().begin(), y.entries().end());
  return xy;
}

}  // namespace detail

inline Mat evaluate_quadratic(const QuadCircuit& q, const Mat& x, const Mat& y) {
  if (x.rows() != q.n || x.cols() != q.n || y.rows() != q.n || y.cols() != q.n)
    throw DimensionError("inputs do not match circuit size");
  detail::require_same_field(q.ctx, x.ctx());
  detail::require_same_field(q.ctx, y.ctx());
  const auto& f = q.ctx;
  const auto xy = detail::concat(x, y);
  Mat out(f, q.n, q.n);
  for (const auto& g : q.triples) {
    const Elem v = f.mul(eval_form(g.a, xy), eval_form(g.b, xy));
    if (v.is_zero()) continue;
    for (std::size_t o = 0; o < g.alpha.size(); ++o) out.entries()[o] = f.add(out.entries()[o], f.mul(v, g.alpha[o]));
  }
  return out;
}

/// Rewrites x*y as (x*c)*(c^{-1}*y): u'(x) = u(x c), v'(y) = v(c^{-1} y).
inline BilinearDecomp sandwich(const BilinearDecomp& d, const Mat& c) {
  d.validate();
  const std::size_t n2 = d.dims.n2;
  if (c.rows() != n2 || c.cols() != n2) throw DimensionError("sandwich matrix must be n2 x n2");
  detail::require_same_field(d.ctx, c.ctx());
  const Mat cinv = inverse(c);
  const auto& f = d.ctx;
  const std::size_t n1 = d.dims.n1, n3 = d.dims.n3;
  BilinearDecomp out{f, d.dims, {}};
  out.triples.reserve(d.m());
  for (const auto& t : d.triples) {
    BilinearTriple s{LinForm::zero(f, n1 * n2), LinForm::zero(f, n2 * n3), t.w};
    // coefficient of x_{i,l} is sum_k u_{i,k} c_{l,k}
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t l = 0; l < n2; ++l) {
        Elem acc{};
        for (std::size_t k = 0; k < n2; ++k) acc = f.add(acc, f.mul(t.u.coeffs[i * n2 + k], c(l, k)));
        s.u.coeffs[i * n2 + l] = acc;
      }
    // coefficient of y_{l,j} is sum_i v_{i,j} cinv_{i,l}
    for (std::size_t l = 0; l < n2; ++l)
      for (std::size_t j = 0; j < n3; ++j) {
        Elem acc{};
        for (std::size_t i = 0; i < n2; ++i) acc = f.add(acc, f.mul(t.v.coeffs[i * n3 + j], cinv(i, l)));
        s.v.coeffs[l * n3 + j] = acc;
      }
    out.triples.push_back(std::move(s));
  }
  return out;
}

/// Views a square bilinear decomposition as a quadratic circuit.
inline QuadCircuit to_quadratic(const BilinearDecomp& d) {
  d.validate();
  if (!d.dims.square()) throw DimensionError("quadratic circuits need square shapes");
  const std::size_t n = d.dims.n1, nn = n * n;
  QuadCircuit q{d.ctx, n, {}};
  for (const auto& t : d.triples) {
    QuadTriple g{LinForm::zero(d.ctx, 2 * nn), LinForm::zero(d.ctx, 2 * nn), t.w};
    std::copy(t.u.coeffs.begin(), t.u.coeffs.end(), g.a.coeffs.begin());
    std::copy(t.v.coeffs.begin(), t.v.coeffs.end(), g.b.coeffs.begin() + static_cast<std::ptrdiff_t>(nn));
    q.triples.push_back(std::move(g));
  }
  return q;
}

}  // namespace mpbound
