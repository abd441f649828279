#pragma once

// Exact arithmetic in GF(p) and GF(p^d).
//
// An element is stored as the integer code sum_i c_i p^i of its coefficient
// vector (c_0, ..., c_{d-1}) in the power basis of the context modulus root t.
// Contexts are interned: make_context(p, d) always hands back the same
// immutable field data for the same (p, d).

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpbound/error.hpp"

namespace mpbound {

/// Field element; meaningful only together with its FieldCtx.
struct Elem {
  std::uint32_t code = 0;

  bool is_zero() const noexcept { return code == 0; }
  friend bool operator==(Elem, Elem) = default;
  friend auto operator<=>(Elem, Elem) = default;
};

namespace detail {

/// Caps for precomputed tables and for full enumeration.
inline constexpr std::uint64_t kLogTableLimit = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kCodeLimit = std::uint64_t{1} << 32;

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t f = 2; f * f <= p; ++f)
    if (p % f == 0) return false;
  return true;
}

using Poly = std::vector<std::uint32_t>;  // ascending degree, mod p

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Remainder of a modulo a monic polynomial m.
inline Poly poly_rem(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      const std::uint64_t sub = lead * m[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

/// True when monic f has no monic factor of degree 1..deg(f)/2.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg <= 1) return true;
  for (std::size_t dd = 1; dd <= deg / 2; ++dd) {
    // every monic polynomial of degree dd
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < dd; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g(dd + 1, 0);
      std::uint64_t rest = idx;
      for (std::size_t i = 0; i < dd; ++i) {
        g[i] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      g[dd] = 1;
      if (poly_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

/// Lexicographically smallest monic irreducible of degree d, comparing
/// coefficient vectors (c_0, c_1, ..., c_{d-1}) with c_0 most significant.
inline Poly smallest_irreducible(std::uint32_t p, std::uint32_t d) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < d; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f(d + 1, 0);
    std::uint64_t rest = idx;
    for (std::uint32_t i = d; i-- > 0;) {  // c_{d-1} least significant
      f[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    f[d] = 1;
    if (is_irreducible(f, p)) return f;
  }
  throw Error("no irreducible polynomial found");  // unreachable for prime p
}

struct FieldData {
  std::uint32_t p = 2;
  std::uint32_t d = 1;
  std::uint64_t q = 2;
  Poly modulus;
  std::vector<std::uint64_t> pow_p;  // p^0 .. p^d
  std::vector<std::uint32_t> exp;    // size q-1, only when tables are built
  std::vector<std::uint32_t> log;    // size q

  Poly coeffs(std::uint32_t code) const {
    Poly c(d);
    for (std::uint32_t i = 0; i < d; ++i) {
      c[i] = code % p;
      code /= p;
    }
    return c;
  }

  std::uint32_t encode(const Poly& c) const {
    std::uint64_t code = 0;
    for (std::uint32_t i = 0; i < c.size() && i < d; ++i) code += c[i] * pow_p[i];
    return static_cast<std::uint32_t>(code);
  }

  std::uint32_t poly_mul(std::uint32_t a, std::uint32_t b) const {
    const Poly ca = coeffs(a), cb = coeffs(b);
    Poly prod(2 * d - 1, 0);
    for (std::uint32_t i = 0; i < d; ++i) {
      if (ca[i] == 0) continue;
      for (std::uint32_t j = 0; j < d; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p);
    }
    return encode(poly_rem(std::move(prod), modulus, p));
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (d == 1) return static_cast<std::uint32_t>((std::uint64_t{a} + b) % p);
    if (p == 2) return a ^ b;
    std::uint64_t out = 0;
    for (std::uint32_t i = 0; i < d; ++i) {
      out += ((a % p + b % p) % p) * pow_p[i];
      a /= p;
      b /= p;
    }
    return static_cast<std::uint32_t>(out);
  }

  std::uint32_t neg(std::uint32_t a) const {
    if (p == 2) return a;
    if (d == 1) return a == 0 ? 0 : p - a;
    std::uint64_t out = 0;
    for (std::uint32_t i = 0; i < d; ++i) {
      const std::uint32_t c = a % p;
      out += ((p - c) % p) * pow_p[i];
      a /= p;
    }
    return static_cast<std::uint32_t>(out);
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    if (d == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p);
    if (!log.empty()) return exp[(std::uint64_t{log[a]} + log[b]) % (q - 1)];
    return poly_mul(a, b);
  }

  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw Error("inverse of zero field element");
    if (!log.empty()) return exp[(q - 1 - log[a]) % (q - 1)];
    return pow(a, q - 2);
  }

  void build_tables() {
    for (std::uint32_t g = 1; g < q; ++g) {
      std::vector<std::uint32_t> e;
      e.reserve(q - 1);
      std::uint32_t x = 1;
      do {
        e.push_back(x);
        x = poly_mul(x, g);
      } while (x != 1 && e.size() < q);
      if (e.size() == q - 1) {
        exp = std::move(e);
        log.assign(q, 0);
        for (std::uint32_t i = 0; i < q - 1; ++i) log[exp[i]] = i;
        return;
      }
    }
  }
};

inline const FieldData* intern_field(std::uint32_t p, std::uint32_t d) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FieldData>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{p, d}];
  if (!slot) {
    auto data = std::make_unique<FieldData>();
    data->p = p;
    data->d = d;
    data->pow_p.assign(d + 1, 1);
    for (std::uint32_t i = 1; i <= d; ++i) data->pow_p[i] = data->pow_p[i - 1] * p;
    data->q = data->pow_p[d];
    data->modulus = d == 1 ? Poly{0, 1} : smallest_irreducible(p, d);
    if (d > 1 && data->q <= kLogTableLimit) data->build_tables();
    slot = std::move(data);
  }
  return slot.get();
}

}  // namespace detail

/// Handle to an interned finite field GF(p^d). Cheap to copy; immutable.
class FieldCtx {
 public:
  FieldCtx() = default;

  std::uint32_t p() const { return data_->p; }
  std::uint32_t degree() const { return data_->d; }
  std::uint64_t size() const { return data_->q; }
  bool valid() const { return data_ != nullptr; }
  bool is_prime_field() const { return data_->d == 1; }

  /// Monic modulus, d+1 coefficients in ascending degree (X for prime fields).
  const std::vector<std::uint32_t>& modulus() const { return data_->modulus; }

  Elem zero() const { return {}; }
  Elem one() const { return {1}; }
  /// Root t of the modulus (the element X); zero for prime fields.
  Elem generator() const { return data_->d == 1 ? Elem{0} : Elem{static_cast<std::uint32_t>(data_->p)}; }

  /// Image of an integer under Z -> GF(p) -> GF(p^d).
  Elem from_int(std::int64_t v) const {
    const std::int64_t p = data_->p;
    return {static_cast<std::uint32_t>(((v % p) + p) % p)};
  }

  Elem from_coeffs(std::span<const std::uint32_t> c) const {
    if (c.size() != data_->d) throw DimensionError("coefficient count does not match field degree");
    for (auto x : c)
      if (x >= data_->p) throw Error("coefficient not reduced mod p");
    return {data_->encode(detail::Poly(c.begin(), c.end()))};
  }

  std::vector<std::uint32_t> coeffs(Elem a) const { return data_->coeffs(a.code); }

  bool contains(Elem a) const { return a.code < data_->q; }

  Elem add(Elem a, Elem b) const { return {data_->add(a.code, b.code)}; }
  Elem neg(Elem a) const { return {data_->neg(a.code)}; }
  Elem sub(Elem a, Elem b) const { return {data_->add(a.code, data_->neg(b.code))}; }
  Elem mul(Elem a, Elem b) const { return {data_->mul(a.code, b.code)}; }
  Elem inv(Elem a) const { return {data_->inv(a.code)}; }
  Elem pow(Elem a, std::uint64_t e) const { return {data_->pow(a.code, e)}; }

  /// All p^d elements in increasing code order (0, 1, ..., t, t+1, ...).
  std::vector<Elem> enumerate() const {
    if (data_->q > detail::kEnumerationLimit) throw PreconditionError("field too large to enumerate");
    std::vector<Elem> out(data_->q);
    for (std::uint32_t i = 0; i < data_->q; ++i) out[i].code = i;
    return out;
  }

  /// Decimal for prime fields, colon-separated ascending coefficients otherwise.
  std::string format(Elem a) const {
    if (data_->d == 1) return std::to_string(a.code);
    std::string out;
    const auto c = coeffs(a);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ':';
      out += std::to_string(c[i]);
    }
    return out;
  }

  Elem parse(std::string_view text) const {
    std::vector<std::uint32_t> c;
    std::size_t pos = 0;
    while (true) {
      const std::size_t end = std::min(text.find(':', pos), text.size());
      const std::string_view part = text.substr(pos, end - pos);
      std::uint32_t v = 0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
        throw Error("malformed field element '" + std::string(text) + "'");
      c.push_back(v);
      if (end == text.size()) break;
      pos = end + 1;
    }
    if (c.size() != data_->d) throw Error("field element '" + std::string(text) + "' has wrong coefficient count");
    return from_coeffs(c);
  }

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.data_ == b.data_; }

 private:
  explicit FieldCtx(const detail::FieldData* data) : data_(data) {}
  friend FieldCtx make_context(std::uint64_t p, std::uint64_t d);

  const detail::FieldData* data_ = nullptr;
};

/// GF(p^d) with the lexicographically smallest monic irreducible modulus.
inline FieldCtx make_context(std::uint64_t p, std::uint64_t d) {
  if (!detail::is_prime(p)) throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
  if (d < 1) throw PreconditionError("extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    q *= p;
    if (q >= detail::kCodeLimit) throw PreconditionError("field order exceeds 2^32");
  }
  return FieldCtx(detail::intern_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(d)));
}

}  // namespace mpbound
