#pragma once

// Regular representation GF(p^n) -> M_n(GF(p)) in the power basis
// 1, t, ..., t^{n-1}, and its blockwise extension M_k(GF(p^n)) -> M_{kn}(GF(p)).

#include <cstddef>

#include "mpbound/field.hpp"
#include "mpbound/matspace.hpp"

namespace mpbound {

/// Column j is the coefficient vector of x * t^j.
inline Mat embed_elem(const FieldCtx& ext, Elem x) {
  if (!ext.contains(x)) throw Error("element not in extension field");
  const std::size_t n = ext.degree();
  const FieldCtx base = make_context(ext.p(), 1);
  Mat out(base, n, n);
  Elem power = ext.one();
  const Elem t = ext.generator();
  for (std::size_t j = 0; j < n; ++j) {
    const auto c = ext.coeffs(ext.mul(x, power));
    for (std::size_t i = 0; i < n; ++i) out(i, j) = Elem{c[i]};
    power = ext.mul(power, t);
  }
  return out;
}

/// Replaces every entry a_{ij} of a k x k matrix over GF(p^n) by the block phi(a_{ij}).
inline Mat embed_block(const Mat& a, std::size_t n) {
  const FieldCtx& ext = a.ctx();
  if (ext.degree() != n) throw DimensionError("extension degree does not match block size");
  const FieldCtx base = make_context(ext.p(), 1);
  Mat out(base, a.rows() * n, a.cols() * n);
  for (std::size_t bi = 0; bi < a.rows(); ++bi)
    for (std::size_t bj = 0; bj < a.cols(); ++bj) {
      const Mat block = embed_elem(ext, a(bi, bj));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(bi * n + i, bj * n + j) = block(i, j);
    }
  return out;
}

}  // namespace mpbound
