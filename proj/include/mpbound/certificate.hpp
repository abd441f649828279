#pragma once

// Lower-bound certificates on the number of product gates, the pipelines that
// produce them, and an independent checker.
//
// A gf2_code certificate bounds the length of a matrix code: r forms vanish on
// a family with invertible differences, and the remaining coordinates carry k
// words at pairwise distance >= n^2, so they number at least the Plotkin
// length. A gfp_bilinear certificate ends in a Blaser step: matrices a, b with
// [a, b] invertible and t forms vanishing on I, a, b give m >= t + 1.5 n^2.
// The Blaser inequality itself is trusted; everything else is recomputed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpbound/agreement.hpp"
#include "mpbound/circuits.hpp"
#include "mpbound/error.hpp"
#include "mpbound/families.hpp"
#include "mpbound/matcodes.hpp"
#include "mpbound/matspace.hpp"
#include "mpbound/search.hpp"

namespace mpbound {

enum class CertKind { Gf2Code, GfpBilinear };

inline const char* to_string(CertKind k) { return k == CertKind::Gf2Code ? "gf2_code" : "gfp_bilinear"; }

struct Gf2Step {
  std::size_t k = 0;
  std::vector<std::size_t> independent;
  std::vector<Mat> family;
  std::vector<std::size_t> vanishing;  // r = vanishing.size()
  std::size_t min_distance = 0;        // over the non-vanishing coordinates
  Rational plotkin{0};
};

struct InvStep {
  std::size_t k = 0;
  std::vector<Mat> family;
  std::vector<std::size_t> vanishing;
  std::size_t i = 0, j = 0;
  std::size_t agree = 0;  // agreement of the pair on the non-vanishing coordinates
  Mat c;                  // family[i] - family[j]
  std::vector<std::size_t> vanish_on_c;
};

struct CommutatorStep {
  std::size_t k = 0;
  std::vector<Mat> family;  // over the sandwiched forms
  std::vector<std::size_t> vanishing;
  std::vector<std::size_t> vanish_on_identity;
  std::size_t i = 0, j = 0, l = 0;
  std::size_t agree = 0;  // agreement of the triple on vanish_on_identity
};

struct BlaserStep {
  Mat a, b;
  std::vector<std::size_t> vanishing;  // forms vanishing on I, a and b
};

struct BoundCertificate {
  CertKind kind = CertKind::Gf2Code;
  FieldCtx ctx;
  std::size_t n = 0;
  std::size_t m_actual = 0;
  std::uint64_t seed = 0;
  std::vector<LinForm> code;              // gf2_code: the code forms
  std::optional<BilinearDecomp> circuit;  // gfp_bilinear: circuit before sandwiching
  std::optional<Gf2Step> gf2;
  std::optional<InvStep> inv;
  std::optional<CommutatorStep> commutator;
  std::optional<BlaserStep> blaser;
  std::size_t t = 0;
  std::int64_t bound = 0;
};

struct CheckResult {
  bool ok = true;
  std::vector<std::string> failures;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
  explicit operator bool() const { return ok; }
};

namespace detail {

inline std::vector<LinForm> u_forms(const BilinearDecomp& d) {
  std::vector<LinForm> out;
  for (const auto& t : d.triples) out.push_back(t.u);
  return out;
}

inline std::vector<std::size_t> complement(std::span<const std::size_t> sorted, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i)
    if (!std::binary_search(sorted.begin(), sorted.end(), i)) out.push_back(i);
  return out;
}

inline std::vector<std::vector<Elem>> restricted_encodings(std::span<const LinForm> forms, std::span<const Mat> mats,
                                                           std::span<const std::size_t> coords) {
  std::vector<std::vector<Elem>> out;
  for (const auto& a : mats) {
    std::vector<Elem> v;
    for (auto c : coords) v.push_back(eval_form(forms[c], a));
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<std::size_t> vanishing_on_identity(std::span<const LinForm> forms, std::size_t n, const FieldCtx& f) {
  const Mat id = Mat::identity(f, n);
  return vanishing_on_all(forms, std::span<const Mat>(&id, 1));
}

inline std::int64_t blaser_constant(std::size_t n) { return static_cast<std::int64_t>((3 * n * n + 1) / 2); }

}  // namespace detail

/// Blaser step on a verifying decomposition: t forms vanish on I, a, b.
inline BoundCertificate blaser_certificate(const BilinearDecomp& d, const Mat& a, const Mat& b) {
  if (!d.dims.square()) throw DimensionError("certificates need square decompositions");
  if (const auto rep = verify_mp(d); !rep) throw PreconditionError("decomposition does not compute MP_n: " + rep.first_discrepancy);
  const std::size_t n = d.dims.n1;
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n) throw DimensionError("a, b must be n x n");
  detail::require_same_field(d.ctx, a.ctx());
  detail::require_same_field(d.ctx, b.ctx());
  if (!is_invertible(commutator(a, b))) throw PreconditionError("commutator [a,b] is singular");
  const auto forms = detail::u_forms(d);
  const Mat id = Mat::identity(d.ctx, n);
  const std::vector<Mat> mats{id, a, b};
  BoundCertificate cert;
  cert.kind = CertKind::GfpBilinear;
  cert.ctx = d.ctx;
  cert.n = n;
  cert.m_actual = d.m();
  cert.circuit = d;
  cert.blaser = BlaserStep{a, b, detail::vanishing_on_all(forms, mats)};
  cert.t = cert.blaser->vanishing.size();
  cert.bound = static_cast<std::int64_t>(cert.t) + detail::blaser_constant(n);
  return cert;
}

/// Length bound for a matrix code from a family with invertible differences.
inline BoundCertificate gf2_pipeline(const MatrixCode& code, std::size_t k, std::uint64_t seed = 0,
                                     const SearchOptions& search = {}) {
  const auto& f = code.ctx;
  if (!f.is_prime_field()) throw PreconditionError("pipelines need a prime field");
  if (k <= f.p()) throw PreconditionError("Plotkin step needs k > p");
  const std::size_t n = code.n, nn = n * n;
  SearchOptions opt = search;
  opt.seed = seed;
  const VanishWitness w = vanish_family(code.forms, n, k, f, opt);

  Gf2Step step;
  step.k = k;
  step.independent = w.basis;
  step.family = w.mats;
  step.vanishing = w.vanishing;
  const auto coords = detail::complement(step.vanishing, code.m());
  const auto words = detail::restricted_encodings(code.forms, step.family, coords);
  step.min_distance = min_pairwise_distance(words);
  if (!check_pairwise_distance(words, nn))
    throw Error("distance step failed: restricted codewords at distance " + std::to_string(step.min_distance) +
                " < n^2; the code violates the rank-distance property");
  step.plotkin = plotkin_min_length(static_cast<std::int64_t>(nn), static_cast<std::int64_t>(k), f.p());

  BoundCertificate cert;
  cert.kind = CertKind::Gf2Code;
  cert.ctx = f;
  cert.n = n;
  cert.m_actual = code.m();
  cert.seed = seed;
  cert.code = code.forms;
  cert.t = step.vanishing.size();
  cert.bound = static_cast<std::int64_t>(cert.t) + ceil_rational(step.plotkin);
  cert.gf2 = std::move(step);
  return cert;
}

/// Invertible c = a_i - a_j from a family with invertible differences, where
/// (i, j) is the pair agreeing most outside the common vanishing forms.
inline InvStep inv_step(std::span<const LinForm> forms, std::size_t n, std::size_t k, const FieldCtx& f,
                        const SearchOptions& opt = {}) {
  if (k < 2) throw PreconditionError("invertible-matrix step needs k >= 2");
  const VanishWitness w = vanish_family(forms, n, k, f, opt);
  InvStep inv;
  inv.k = k;
  inv.family = w.mats;
  inv.vanishing = w.vanishing;
  const auto coords = detail::complement(inv.vanishing, forms.size());
  const auto words = detail::restricted_encodings(forms, inv.family, coords);
  if (!check_pairwise_distance(words, n * n)) throw Error("inv step: codewords closer than n^2");
  const auto pair = best_agreeing_pair(words);
  inv.i = pair.i;
  inv.j = pair.j;
  inv.agree = pair.count;
  inv.c = inv.family[pair.i] - inv.family[pair.j];
  if (!is_invertible(inv.c)) throw Error("inv step: difference is singular");
  inv.vanish_on_c = detail::vanishing_on_all(forms, std::span<const Mat>(&inv.c, 1));
  return inv;
}

/// Invertible-matrix step, sandwiching, commutator family, then the Blaser step.
inline BoundCertificate gfp_pipeline(const BilinearDecomp& d, std::size_t k1, std::size_t k2, std::uint64_t seed = 0,
                                     const SearchOptions& search = {}) {
  const auto& f = d.ctx;
  if (!f.is_prime_field()) throw PreconditionError("pipelines need a prime field");
  if (!d.dims.square()) throw DimensionError("pipelines need square decompositions");
  const std::size_t n = d.dims.n1;
  if (n % 2 != 0) throw PreconditionError("k-commutator step needs even n");
  if (k1 < 2) throw PreconditionError("invertible-matrix step needs k1 >= 2");
  if (k2 < 3) throw PreconditionError("commutator step needs k2 >= 3");
  if (detail::saturating_pow(f.p(), n / 2, std::uint64_t{1} << 40) <= 4 * choose(k2, 3))
    throw PreconditionError("k-commutator step needs p^(n/2) > 4 C(k2,3)");
  if (const auto rep = verify_mp(d); !rep) throw PreconditionError("decomposition does not compute MP_n: " + rep.first_discrepancy);
  SearchOptions opt = search;
  opt.seed = seed;

  const auto forms = detail::u_forms(d);
  InvStep inv = inv_step(forms, n, k1, f, opt);

  // sandwiched forms vanish on I exactly where the old ones vanish on c
  const BilinearDecomp sd = sandwich(d, inv.c);
  const auto sforms = detail::u_forms(sd);
  CommutatorStep cs;
  cs.k = k2;
  cs.vanish_on_identity = detail::vanishing_on_identity(sforms, n, f);
  if (cs.vanish_on_identity != inv.vanish_on_c) throw Error("sandwich step: vanishing set not transported to I");
  const VanishWitness w2 = commutator_family(n, k2, sforms, f, opt);
  cs.family = w2.mats;
  cs.vanishing = w2.vanishing;
  const auto triple_words = detail::restricted_encodings(sforms, cs.family, cs.vanish_on_identity);
  if (triple_words.front().empty()) {
    cs.i = 0, cs.j = 1, cs.l = 2, cs.agree = 0;
  } else {
    const auto tr = best_agreeing_triple(triple_words);
    cs.i = tr.i, cs.j = tr.j, cs.l = tr.l, cs.agree = tr.count;
  }
  const Mat a = cs.family[cs.i] - cs.family[cs.l];
  const Mat b = cs.family[cs.j] - cs.family[cs.l];

  BoundCertificate cert = blaser_certificate(sd, a, b);
  cert.circuit = d;
  cert.seed = seed;
  cert.inv = std::move(inv);
  cert.commutator = std::move(cs);
  return cert;
}

/// Recomputes every claimed quantity of a certificate from its witnesses.
inline CheckResult check_certificate(const BoundCertificate& cert) {
  CheckResult res;
  const auto& f = cert.ctx;
  const std::size_t n = cert.n, nn = n * n;
  auto square_n = [&](const Mat& a) { return a.rows() == n && a.cols() == n && a.ctx() == f; };
  auto all_square = [&](std::span<const Mat> v) {
    for (const auto& a : v)
      if (!square_n(a)) return false;
    return true;
  };
  auto sorted_indices = [](std::span<const std::size_t> v, std::size_t m) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] >= m || (i > 0 && v[i] <= v[i - 1])) return false;
    return true;
  };

  if (cert.kind == CertKind::Gf2Code) {
    res.require(cert.gf2.has_value(), "missing code step");
    if (!res) return res;
    const auto& s = *cert.gf2;
    res.require(cert.code.size() == cert.m_actual, "gate count differs from code length");
    for (const auto& form : cert.code) res.require(form.ctx == f && form.nvars() == nn, "code form has wrong shape");
    res.require(s.family.size() == s.k && s.k > f.p(), "family size must be k > p");
    res.require(all_square(s.family), "family matrix has wrong shape");
    if (!res) return res;
    res.require(!detail::difference_product(s.family).is_zero(), "family has a singular difference");
    res.require(sorted_indices(s.vanishing, cert.code.size()), "vanishing indices malformed");
    res.require(sorted_indices(s.independent, cert.code.size()), "independent indices malformed");
    if (!res) return res;
    res.require(s.independent == select_independent(cert.code), "independent forms differ from greedy selection");
    res.require(s.vanishing == detail::vanishing_on_all(cert.code, s.family), "vanishing set does not recompute");
    const auto coords = detail::complement(s.vanishing, cert.code.size());
    const auto words = detail::restricted_encodings(cert.code, s.family, coords);
    res.require(min_pairwise_distance(words) == s.min_distance, "minimum distance does not recompute");
    res.require(check_pairwise_distance(words, nn), "restricted codewords closer than n^2");
    const Rational pl = plotkin_min_length(static_cast<std::int64_t>(nn), static_cast<std::int64_t>(s.k), f.p());
    res.require(pl == s.plotkin, "Plotkin length does not recompute");
    res.require(static_cast<std::int64_t>(coords.size()) >= ceil_rational(pl), "fewer coordinates than the Plotkin length");
    res.require(cert.t == s.vanishing.size(), "t differs from vanishing count");
    res.require(cert.bound == static_cast<std::int64_t>(s.vanishing.size()) + ceil_rational(pl), "bound does not recompute");
  } else {
    res.require(cert.circuit.has_value() && cert.blaser.has_value(), "missing circuit or Blaser step");
    if (!res) return res;
    const auto& d = *cert.circuit;
    res.require(d.ctx == f && d.dims == Shape{n, n, n}, "circuit shape differs from certificate");
    res.require(d.m() == cert.m_actual, "gate count differs from circuit");
    if (!res) return res;
    const auto rep = verify_mp(d);
    res.require(rep.ok, "circuit does not compute MP_n: " + rep.first_discrepancy);
    BilinearDecomp final_circuit = d;
    if (cert.inv) {
      const auto& s = *cert.inv;
      const auto forms = detail::u_forms(d);
      res.require(s.family.size() == s.k && s.k >= 2 && all_square(s.family), "inv family malformed");
      res.require(square_n(s.c), "sandwich matrix malformed");
      if (!res) return res;
      res.require(!detail::difference_product(s.family).is_zero(), "inv family has a singular difference");
      res.require(s.vanishing == detail::vanishing_on_all(forms, s.family), "inv vanishing set does not recompute");
      res.require(s.i < s.j && s.j < s.k, "inv pair malformed");
      if (!res) return res;
      const auto coords = detail::complement(s.vanishing, forms.size());
      const auto words = detail::restricted_encodings(forms, s.family, coords);
      res.require(check_pairwise_distance(words, nn), "inv codewords closer than n^2");
      res.require(agreement(words[s.i], words[s.j]) == s.agree, "inv agreement does not recompute");
      res.require(s.c == s.family[s.i] - s.family[s.j], "sandwich matrix is not the pair difference");
      res.require(is_invertible(s.c), "sandwich matrix is singular");
      res.require(s.vanish_on_c == detail::vanishing_on_all(forms, std::span<const Mat>(&s.c, 1)),
                  "forms vanishing on c do not recompute");
      if (!res) return res;
      final_circuit = sandwich(d, s.c);
    }
    const auto sforms = detail::u_forms(final_circuit);
    const auto& b = *cert.blaser;
    res.require(square_n(b.a) && square_n(b.b), "Blaser matrices malformed");
    if (!res) return res;
    if (cert.commutator) {
      const auto& s = *cert.commutator;
      res.require(s.family.size() == s.k && s.k >= 3 && all_square(s.family), "commutator family malformed");
      res.require(s.i < s.j && s.j < s.l && s.l < s.k, "commutator triple malformed");
      if (!res) return res;
      res.require(!detail::commutator_product(s.family).is_zero(), "commutator family has a singular commutator");
      res.require(s.vanishing == detail::vanishing_on_all(sforms, s.family), "commutator vanishing set does not recompute");
      res.require(s.vanish_on_identity == detail::vanishing_on_identity(sforms, n, f), "forms vanishing on I do not recompute");
      if (cert.inv) res.require(s.vanish_on_identity == cert.inv->vanish_on_c, "sandwich did not move the vanishing set to I");
      const auto words = detail::restricted_encodings(sforms, s.family, s.vanish_on_identity);
      std::size_t agree = 0;
      for (std::size_t c = 0; c < s.vanish_on_identity.size(); ++c)
        agree += words[s.i][c] == words[s.j][c] && words[s.j][c] == words[s.l][c];
      res.require(agree == s.agree, "triple agreement does not recompute");
      res.require(b.a == s.family[s.i] - s.family[s.l] && b.b == s.family[s.j] - s.family[s.l],
                  "Blaser matrices are not the triple differences");
    }
    res.require(is_invertible(commutator(b.a, b.b)), "commutator [a,b] is singular");
    const Mat id = Mat::identity(f, n);
    const std::vector<Mat> mats{id, b.a, b.b};
    res.require(b.vanishing == detail::vanishing_on_all(sforms, mats), "Blaser vanishing set does not recompute");
    res.require(cert.t == b.vanishing.size(), "t differs from vanishing count");
    res.require(cert.bound == static_cast<std::int64_t>(cert.t) + detail::blaser_constant(n), "bound does not recompute");
  }
  res.require(cert.bound <= static_cast<std::int64_t>(cert.m_actual), "bound exceeds the gate count");
  return res;
}

}  // namespace mpbound
