#pragma once

// One runner per lemma: exhaustive checks at small sizes, seeded samples above.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mpbound/agreement.hpp"
#include "mpbound/certificate.hpp"
#include "mpbound/circuits.hpp"
#include "mpbound/embed.hpp"
#include "mpbound/families.hpp"
#include "mpbound/field.hpp"
#include "mpbound/matcodes.hpp"
#include "mpbound/matspace.hpp"
#include "mpbound/rng.hpp"
#include "mpbound/search.hpp"

namespace mpbound {

struct LemmaResult {
  std::string name;
  bool passed = true;
  std::uint64_t instances = 0;
  std::string detail;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;           // random instances for sampled checks
  std::uint64_t embed_max_order = 4096;     // exhaustive embedding checks for p^n up to this
};

namespace detail {

class Tally {
 public:
  explicit Tally(std::string name) { r_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++r_.instances;
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    if (r_.passed) r_.detail = what;
    r_.passed = false;
  }
  void note(const std::string& s) {
    if (r_.passed) r_.detail += (r_.detail.empty() ? "" : "; ") + s;
  }
  void count(std::uint64_t n) { r_.instances += n; }
  LemmaResult result() const { return r_; }

 private:
  LemmaResult r_;
};

template <class F>
LemmaResult guarded(const std::string& name, F body) {
  Tally t(name);
  try {
    body(t);
  } catch (const std::exception& e) {
    t.fail(std::string("exception: ") + e.what());
  }
  return t.result();
}

inline std::vector<LinForm> coordinate_forms(const FieldCtx& f, std::size_t n) {
  std::vector<LinForm> out;
  for (std::size_t i = 0; i < n * n; ++i) out.push_back(LinForm::coordinate(f, n * n, i));
  return out;
}

/// n^2 independent random forms followed by `extra` random ones.
inline std::vector<LinForm> random_forms(const FieldCtx& f, std::size_t n, std::size_t extra, Rng& rng) {
  const std::size_t nn = n * n;
  while (true) {
    std::vector<LinForm> out;
    for (std::size_t i = 0; i < nn + extra; ++i) {
      LinForm form = LinForm::zero(f, nn);
      for (auto& c : form.coeffs) c = random_elem(f, rng);
      out.push_back(std::move(form));
    }
    if (select_independent(std::span<const LinForm>(out.data(), nn)).size() == nn) return out;
  }
}

inline Elem eval_linear_product(const FieldCtx& f, const std::vector<std::vector<Elem>>& factors,
                                std::span<const Elem> x) {
  Elem prod = f.one();
  for (const auto& l : factors) {
    Elem s{};
    for (std::size_t i = 0; i < x.size(); ++i) s = f.add(s, f.mul(l[i], x[i]));
    prod = f.mul(prod, s);
  }
  return prod;
}

inline std::vector<std::vector<Elem>> random_nonzero_linear(const FieldCtx& f, std::size_t count, std::size_t nvars,
                                                            Rng& rng) {
  std::vector<std::vector<Elem>> out;
  while (out.size() < count) {
    std::vector<Elem> l(nvars);
    bool nonzero = false;
    for (auto& e : l) {
      e = random_elem(f, rng);
      nonzero = nonzero || !e.is_zero();
    }
    if (nonzero) out.push_back(std::move(l));
  }
  return out;
}

inline std::string fmt_matrix(const Mat& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < a.cols(); ++j) s += (j ? " " : "") + a.ctx().format(a(i, j));
  }
  return s + "]";
}

/// Calls visit on every k-tuple of vectors in F^t, vectors indexed by their code.
template <class Visit>
void for_each_tuple(std::uint64_t q, std::size_t t, std::size_t k, Visit visit) {
  std::uint64_t per = 1;
  for (std::size_t i = 0; i < t; ++i) per *= q;
  std::vector<std::vector<Elem>> all(per, std::vector<Elem>(t));
  for (std::uint64_t c = 0; c < per; ++c) {
    std::uint64_t r = c;
    for (auto& e : all[c]) {
      e.code = static_cast<std::uint32_t>(r % q);
      r /= q;
    }
  }
  std::vector<std::uint64_t> idx(k, 0);
  std::vector<std::vector<Elem>> tuple(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) tuple[i] = all[idx[i]];
    visit(tuple);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] + 1 == per) idx[--pos] = 0;
    if (pos == 0) break;
    ++idx[pos - 1];
  }
}

}  // namespace detail

/// Nonzero low-degree polynomials have a nonzero point, and the search finds one.
inline LemmaResult run_schwartz(const SuiteConfig& cfg) {
  return detail::guarded("schwartz", [&](detail::Tally& t) {
    const FieldCtx f2 = make_context(2, 1);
    const PointEvaluator x1x2 = [&](std::span<const Elem> x) { return f2.mul(x[0], x[1]); };
    const auto pt = find_nonzero_assignment(x1x2, 2, 2, f2);
    t.check(pt == std::vector<Elem>{Elem{1}, Elem{1}}, "x1*x2 over GF(2) did not give (1,1)");
    const PointEvaluator det2 = [&](std::span<const Elem> x) {
      return det(Mat(f2, 2, 2, std::vector<Elem>(x.begin(), x.end())));
    };
    const auto inv = find_nonzero_assignment(det2, 4, 2, f2);
    t.check(is_invertible(Mat(f2, 2, 2, inv)), "det search returned a singular matrix");
    const PointEvaluator zero = [](std::span<const Elem>) { return Elem{}; };
    bool not_found = false;
    try {
      find_nonzero_assignment(zero, 3, 1, f2);
    } catch (const NotFound&) {
      not_found = true;
    }
    t.check(not_found, "zero polynomial did not raise NotFound");

    Rng rng(cfg.seed);
    const std::vector<std::pair<int, int>> fields{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}};
    const std::uint64_t per_field = std::max<std::uint64_t>(1, cfg.samples / 400);
    for (auto [p, d] : fields) {
      const FieldCtx f = make_context(p, d);
      for (std::uint64_t it = 0; it < per_field; ++it) {
        const std::size_t nvars = 1 + rng.below(5);
        const std::size_t deg = rng.below(f.size());  // < |F|
        const auto factors = detail::random_nonzero_linear(f, deg, nvars, rng);
        const PointEvaluator p_eval = [&](std::span<const Elem> x) { return detail::eval_linear_product(f, factors, x); };
        SearchOptions opt;
        opt.seed = rng.next();
        const auto point = find_nonzero_assignment(p_eval, nvars, deg, f, opt);
        t.check(!p_eval(point).is_zero(), "returned point is a zero of P");
      }
    }
  });
}

/// A nonzero polynomial of degree d has a nonzero point of support <= d.
inline LemmaResult run_solution(const SuiteConfig& cfg) {
  return detail::guarded("solution", [&](detail::Tally& t) {
    Rng rng(cfg.seed + 1);
    std::uint64_t skipped = 0;
    const std::uint64_t per_field = std::max<std::uint64_t>(1, cfg.samples / 200);
    for (auto [p, maxvars] : std::vector<std::pair<int, std::size_t>>{{2, 8}, {3, 5}}) {
      const FieldCtx f = make_context(p, 1);
      const std::uint64_t q = f.size();
      for (std::uint64_t it = 0; it < per_field; ++it) {
        const std::size_t nvars = 2 + rng.below(maxvars - 1);
        const std::size_t deg = 1 + rng.below(nvars);
        std::vector<std::vector<std::vector<Elem>>> terms(1 + rng.below(3));
        for (auto& term : terms) term = detail::random_nonzero_linear(f, deg, nvars, rng);
        const PointEvaluator p_eval = [&](std::span<const Elem> x) {
          Elem s{};
          for (const auto& term : terms) s = f.add(s, detail::eval_linear_product(f, term, x));
          return s;
        };
        // brute force: is P nonzero, and what is the smallest support of a nonzero point
        std::uint64_t space = 1;
        for (std::size_t i = 0; i < nvars; ++i) space *= q;
        std::size_t min_support = nvars + 1;
        std::vector<Elem> x(nvars);
        for (std::uint64_t c = 0; c < space; ++c) {
          std::uint64_t r = c;
          std::size_t support = 0;
          for (auto& e : x) {
            e.code = static_cast<std::uint32_t>(r % q);
            r /= q;
            support += !e.is_zero();
          }
          if (support < min_support && !p_eval(x).is_zero()) min_support = support;
        }
        if (min_support > nvars) {
          ++skipped;
          continue;
        }
        t.check(min_support <= deg, "nonzero polynomial of degree " + std::to_string(deg) +
                                        " has no nonzero point of support <= degree");
        SearchOptions opt;
        opt.seed = rng.next();
        const auto found = find_sparse_assignment(p_eval, nvars, deg, f, opt);
        t.check(found.support.size() <= deg && !p_eval(found.point).is_zero(), "sparse search returned a bad point");
      }
    }
    t.note("skipped " + std::to_string(skipped) + " identically-zero samples");
  });
}

/// For independent forms and a family polynomial of degree d, n^2 - d forms vanish on a witness.
inline LemmaResult run_general_vanish(const SuiteConfig& cfg) {
  return detail::guarded("general_vanish", [&](detail::Tally& t) {
    Rng rng(cfg.seed + 2);
    const FieldCtx f2 = make_context(2, 1);
    const auto std2 = detail::coordinate_forms(f2, 2);
    const MatsEvaluator det_diff = [](std::span<const Mat> a) { return det(a[0] - a[1]); };
    const auto w = find_sparse_witness(det_diff, 2, dual_basis(std2, 2), 2);
    t.check(w.support.size() == 2 && w.mats[0] - w.mats[1] == Mat::identity(f2, 2) &&
                w.vanishing == std::vector<std::size_t>{1, 2},
            "det(a1 - a2) witness does not differ by I with forms x12, x21 vanishing");
    const MatsEvaluator one = [&](std::span<const Mat>) { return f2.one(); };
    const auto w1 = find_sparse_witness(one, 0, dual_basis(std2, 2), 2);
    t.check(w1.support.empty() && w1.vanishing.size() == 4, "constant polynomial witness is not empty");

    for (int p : {2, 3})
      for (std::size_t n : {2u, 3u})
        for (std::size_t rep = 0; rep < 6; ++rep) {
          const FieldCtx f = make_context(p, 1);
          const auto forms = detail::random_forms(f, n, rep, rng);
          SearchOptions opt;
          opt.seed = rng.next();
          const auto v = vanish_family(forms, n, 2, f, opt);
          std::size_t indep_vanishing = 0;
          for (auto i : v.basis) indep_vanishing += std::binary_search(v.vanishing.begin(), v.vanishing.end(), i);
          t.check(indep_vanishing >= n * n - n && v.support.size() <= n, "too few vanishing forms or support too large");
          for (auto i : v.vanishing)
            for (const auto& a : v.mats) t.check(eval_form(forms[i], a).is_zero(), "listed form does not vanish");
        }
  });
}

/// phi is linear, multiplicative, injective, phi(1) = I, and nonzero elements map to invertible matrices.
inline LemmaResult run_embed(const SuiteConfig& cfg) {
  return detail::guarded("embed", [&](detail::Tally& t) {
    std::uint64_t fields = 0, literal_pairs = 0;
    for (std::uint64_t p = 2; p <= cfg.embed_max_order; ++p) {
      if (!detail::is_prime(p)) continue;
      std::uint64_t q = p;
      for (std::size_t n = 1; q <= cfg.embed_max_order; ++n, q *= p) {
        const FieldCtx ext = make_context(p, n);
        const FieldCtx base = make_context(p, 1);
        ++fields;
        // phi(x) as a flat n x n array of small integers
        std::vector<std::uint32_t> phi(q * n * n);
        for (std::uint32_t x = 0; x < q; ++x) {
          const Mat m = embed_elem(ext, Elem{x});
          for (std::size_t e = 0; e < n * n; ++e) phi[x * n * n + e] = m.entries()[e].code;
        }
        auto phi_of = [&](std::uint32_t x) {
          std::vector<Elem> v(n * n);
          for (std::size_t e = 0; e < n * n; ++e) v[e].code = phi[x * n * n + e];
          return Mat(base, n, n, std::move(v));
        };
        t.check(phi_of(1) == Mat::identity(base, n), "phi(1) != I");
        t.check(phi_of(0).is_zero(), "phi(0) != 0");
        // linearity: phi(x) = sum_i c_i(x) phi(t^i)
        std::vector<std::uint32_t> basis_code(n, 1);  // t^i has code p^i
        for (std::size_t i = 1; i < n; ++i) basis_code[i] = basis_code[i - 1] * static_cast<std::uint32_t>(p);
        for (std::uint32_t x = 0; x < q; ++x) {
          const auto c = ext.coeffs(Elem{x});
          bool ok = true;
          for (std::size_t e = 0; e < n * n && ok; ++e) {
            std::uint64_t s = 0;
            for (std::size_t i = 0; i < n; ++i) s += static_cast<std::uint64_t>(c[i]) * phi[basis_code[i] * n * n + e];
            ok = s % p == phi[x * n * n + e];
          }
          t.check(ok, "phi is not linear at x = " + ext.format(Elem{x}));
        }
        // multiplicativity, as phi(x) vec(z) = vec(x z) for all x, z
        std::vector<std::uint32_t> digits(q * n);
        for (std::uint32_t z = 0; z < q; ++z) {
          std::uint32_t r = z;
          for (std::size_t i = 0; i < n; ++i) {
            digits[z * n + i] = r % static_cast<std::uint32_t>(p);
            r /= static_cast<std::uint32_t>(p);
          }
        }
        // for n = 1, phi(x) = [x] and the pairwise check would restate field multiplication
        bool mult_ok = n > 1 || phi[1] == 1;
        const auto p32 = static_cast<std::uint32_t>(p);
        for (std::uint32_t x = 0; x < q && mult_ok && n > 1; ++x) {
          const std::uint32_t* px = &phi[x * n * n];
          for (std::uint32_t z = 0; z < q && mult_ok; ++z) {
            const std::uint32_t* dxz = &digits[ext.mul(Elem{x}, Elem{z}).code * n];
            const std::uint32_t* dz = &digits[z * n];
            for (std::size_t i = 0; i < n && mult_ok; ++i) {
              std::uint32_t s = 0;
              for (std::size_t j = 0; j < n; ++j) s += px[i * n + j] * dz[j];
              mult_ok = s % p32 == dxz[i];
            }
          }
        }
        t.check(mult_ok, "phi(x) vec(z) != vec(xz) over GF(" + std::to_string(p) + "^" + std::to_string(n) + ")");
        t.count(n > 1 ? q * q : q);
        // literal phi(xy) = phi(x) phi(y) on small fields
        if (n > 1 && q <= 256) {
          for (std::uint32_t x = 0; x < q; ++x)
            for (std::uint32_t y = 0; y < q; ++y) {
              ++literal_pairs;
              if (!(phi_of(x) * phi_of(y) == phi_of(ext.mul(Elem{x}, Elem{y}).code)) ||
                  !(phi_of(x) + phi_of(y) == phi_of(ext.add(Elem{x}, Elem{y}).code)))
                t.fail("phi not a ring map at x = " + ext.format(Elem{x}) + ", y = " + ext.format(Elem{y}));
            }
        }
        // injectivity and nonzero => invertible
        std::set<std::vector<std::uint32_t>> seen;
        for (std::uint32_t x = 0; x < q; ++x) {
          seen.insert(std::vector<std::uint32_t>(phi.begin() + x * n * n, phi.begin() + (x + 1) * n * n));
          if (x != 0) t.check(n == 1 ? phi[x] != 0 : !det(phi_of(x)).is_zero(), "phi(x) singular for nonzero x");
        }
        t.check(seen.size() == q, "phi is not injective over GF(" + std::to_string(p) + "^" + std::to_string(n) + ")");
      }
    }
    t.note(std::to_string(fields) + " fields with p^n <= " + std::to_string(cfg.embed_max_order) + ", " +
           std::to_string(literal_pairs) + " literal pairs");
  });
}

/// Among k vectors some pair agrees on >= t/p - t/k coordinates, some triple on >= t/p^2 - 3t/(pk).
inline LemmaResult run_intersect(const SuiteConfig& cfg) {
  return detail::guarded("intersect", [&](detail::Tally& t) {
    auto pair_case = [&](std::uint64_t p, std::size_t tlen, std::size_t k) {
      std::uint64_t bad = 0, seen = 0;
      detail::for_each_tuple(p, tlen, k, [&](const std::vector<std::vector<Elem>>& v) {
        ++seen;
        bad += !pair_bound_holds(best_agreeing_pair(v).count, tlen, p, k);
      });
      t.count(seen);
      if (bad) t.fail("pair bound fails over GF(" + std::to_string(p) + ")^" + std::to_string(tlen) + ", k = " + std::to_string(k));
    };
    for (std::size_t tlen = 1; tlen <= 5; ++tlen)
      for (std::size_t k = 3; k <= 4; ++k) pair_case(2, tlen, k);
    for (std::size_t tlen = 1; tlen <= 3; ++tlen) pair_case(3, tlen, 4);
    for (std::size_t tlen = 1; tlen <= 4; ++tlen) {
      std::uint64_t bad = 0, seen = 0;
      detail::for_each_tuple(2, tlen, 5, [&](const std::vector<std::vector<Elem>>& v) {
        ++seen;
        bad += !triple_bound_holds(best_agreeing_triple(v).count, tlen, 2, 5);
      });
      t.count(seen);
      if (bad) t.fail("triple bound fails over GF(2)^" + std::to_string(tlen) + ", k = 5");
    }
    Rng rng(cfg.seed + 3);
    for (std::uint64_t it = 0; it < cfg.samples; ++it) {
      const std::uint64_t p = it % 2 == 0 ? 2 : 3;
      const bool triple = it % 4 >= 2;
      const std::size_t tlen = 1 + rng.below(16);
      const std::size_t k = triple ? 2 * p + 1 + rng.below(4) : p + 1 + rng.below(6);
      std::vector<std::vector<Elem>> v(k, std::vector<Elem>(tlen));
      for (auto& w : v)
        for (auto& e : w) e.code = static_cast<std::uint32_t>(rng.below(p));
      if (triple)
        t.check(triple_bound_holds(best_agreeing_triple(v).count, tlen, p, k), "random triple instance violates bound");
      else
        t.check(pair_bound_holds(best_agreeing_pair(v).count, tlen, p, k), "random pair instance violates bound");
    }
  });
}

/// k words at pairwise distance >= N need length >= 2N - 4N/(k+2) (GF(2)) or its GF(p) analogue.
inline LemmaResult run_dist(const SuiteConfig&) {
  return detail::guarded("dist", [&](detail::Tally& t) {
    t.check(plotkin_min_length(4, 3) == Rational(24, 5), "Plotkin length for N=4, k=3 is not 24/5");
    const FieldCtx f2 = make_context(2, 1);
    auto word = [&](std::string_view s) {
      std::vector<Elem> v;
      for (char c : s) v.push_back(f2.from_int(c - '0'));
      return v;
    };
    const std::vector<std::vector<Elem>> neg{word("00000"), word("11110"), word("00111")};
    t.check(!check_pairwise_distance(neg, 4), "distance checker accepted a pair at distance 3");
    auto plotkin_case = [&](std::uint64_t p, std::size_t tlen, std::size_t k) {
      std::uint64_t bad = 0, seen = 0;
      detail::for_each_tuple(p, tlen, k, [&](const std::vector<std::vector<Elem>>& v) {
        const std::size_t big_n = min_pairwise_distance(v);
        if (big_n == 0) return;
        ++seen;
        const Rational need = p == 2 ? plotkin_min_length(static_cast<std::int64_t>(big_n), static_cast<std::int64_t>(k))
                                     : plotkin_min_length(static_cast<std::int64_t>(big_n), static_cast<std::int64_t>(k),
                                                          static_cast<std::int64_t>(p));
        bad += Rational(static_cast<std::int64_t>(tlen)) < need;
      });
      t.count(seen);
      if (bad) t.fail("length below Plotkin bound over GF(" + std::to_string(p) + ")^" + std::to_string(tlen));
    };
    for (std::size_t tlen = 1; tlen <= 5; ++tlen)
      for (std::size_t k = 3; k <= 4; ++k) plotkin_case(2, tlen, k);
    for (std::size_t tlen = 1; tlen <= 3; ++tlen) plotkin_case(3, tlen, 4);
  });
}

/// Families with invertible differences on which n^2 - C(k,2) n forms vanish.
inline LemmaResult run_k_vanish(const SuiteConfig& cfg) {
  return detail::guarded("k-vanish", [&](detail::Tally& t) {
    const FieldCtx f2 = make_context(2, 1);
    const auto fam = invertible_difference_family(2, 4, f2);
    t.check(!detail::difference_product(fam).is_zero(), "GF(4) family has a singular difference");
    for (int p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {3, 2}, {4, 2}, {2, 3}}) {
        std::vector<std::vector<LinForm>> sources{detail::coordinate_forms(f, n), detail::u_forms(naive_decomp(n, f))};
        if (n == 2) sources.push_back(detail::u_forms(strassen_decomp(f)));
        for (const auto& forms : sources) {
          SearchOptions opt;
          opt.seed = cfg.seed;
          const auto w = vanish_family(forms, n, k, f, opt);
          const std::size_t d = choose(k, 2) * n;
          t.check(w.mats.size() == k && !detail::difference_product(w.mats).is_zero(), "singular difference");
          t.check(d >= n * n || detail::count_in(w.vanishing, w.basis) >= n * n - d,
                  "fewer than n^2 - C(k,2) n vanishing forms at n = " + std::to_string(n) + ", k = " + std::to_string(k));
          for (auto i : w.vanishing)
            for (const auto& a : w.mats) t.check(eval_form(forms[i], a).is_zero(), "listed form does not vanish");
        }
      }
    }
  });
}

/// weight(Gamma(x)) >= n rank(x) for codes from verifying circuits.
inline LemmaResult run_code(const SuiteConfig& cfg) {
  return detail::guarded("code", [&](detail::Tally& t) {
    for (int p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      const Mat c = Mat::from_ints(f, 2, 2, {1, 1, 0, 1});
      const std::vector<BilinearDecomp> circuits{naive_decomp(2, f), strassen_decomp(f), sandwich(strassen_decomp(f), c)};
      for (const auto& d : circuits) {
        for (const auto& code : {code_from_bilinear(d), code_from_quadratic(to_quadratic(d))}) {
          const auto rep = check_rank_distance(code, Exhaustive{});
          t.count(rep.checked);
          if (!rep.ok()) t.fail("rank-distance violation at " + detail::fmt_matrix(rep.violations.front().matrix));
        }
      }
    }
    const std::uint64_t samples = std::max<std::uint64_t>(1, cfg.samples / 10);
    for (int p : {2, 3, 5}) {
      const FieldCtx f = make_context(p, 1);
      const auto d = naive_decomp(3, f);
      for (const auto& code : {code_from_bilinear(d), code_from_quadratic(to_quadratic(d))}) {
        const auto rep = check_rank_distance(code, Sampled{samples, cfg.seed});
        t.count(rep.checked);
        if (!rep.ok()) t.fail("rank-distance violation at n = 3 over GF(" + std::to_string(p) + ")");
      }
    }
    // pairwise form d_H(Gamma(a), Gamma(b)) >= n rank(a - b)
    Rng rng(cfg.seed + 4);
    const FieldCtx f3 = make_context(3, 1);
    const auto code = code_from_bilinear(naive_decomp(3, f3));
    for (std::size_t it = 0; it < 1000; ++it) {
      const Mat a = random_matrix(f3, 3, 3, rng), b = random_matrix(f3, 3, 3, rng);
      t.check(hamming(encode(code, a), encode(code, b)) >= 3 * rank(a - b), "pairwise distance below n rank(a - b)");
    }
  });
}

/// sum_k a_k b_k gamma_k(z) = trace(x y z^T).
inline LemmaResult run_trace(const SuiteConfig& cfg) {
  return detail::guarded("trace", [&](detail::Tally& t) {
    for (int p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      t.check(trace_identity_check(to_quadratic(naive_decomp(2, f)), Exhaustive{}), "formal identity fails for naive n=2");
      t.check(trace_identity_check(to_quadratic(strassen_decomp(f)), Exhaustive{}), "formal identity fails for Strassen");
    }
    for (int p : {2, 3, 5}) {
      const FieldCtx f = make_context(p, 1);
      t.check(trace_identity_check(to_quadratic(strassen_decomp(f)), Sampled{1000, cfg.seed}), "sampled identity fails for Strassen");
      t.check(trace_identity_check(to_quadratic(naive_decomp(3, f)), Sampled{1000, cfg.seed}), "sampled identity fails for n=3");
    }
  });
}

/// Discrete derivatives span 2n rank(z0) dimensions, at most 2k.
inline LemmaResult run_derivative(const SuiteConfig&) {
  return detail::guarded("derivative", [&](detail::Tally& t) {
    for (int p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      for (const auto& d : {naive_decomp(2, f), strassen_decomp(f)}) {
        const auto q = to_quadratic(d);
        const auto count = *matrix_count(f, 2, 2);
        for (std::uint64_t i = 0; i < count; ++i) {
          const Mat z0 = matrix_from_index(f, 2, 2, i);
          const auto rep = derivative_span_check(q, z0);
          t.check(rep.lhs_dim == rep.expected_dim && rep.ok && rep.derivatives_match && rep.contained,
                  "derivative span check fails at z0 = " + detail::fmt_matrix(z0));
        }
      }
    }
  });
}

/// An invertible c on which the vanishing forms plus the best pair's agreements vanish.
inline LemmaResult run_inv(const SuiteConfig& cfg) {
  return detail::guarded("inv", [&](detail::Tally& t) {
    for (int p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      std::vector<BilinearDecomp> circuits{strassen_decomp(f)};
      for (std::size_t n = 2; n <= 4; ++n) circuits.push_back(naive_decomp(n, f));
      for (const auto& d : circuits) {
        const std::size_t n = d.dims.n1;
        const std::size_t k = static_cast<std::size_t>(p) + 2;
        SearchOptions opt;
        opt.seed = cfg.seed;
        const auto forms = detail::u_forms(d);
        const InvStep s = inv_step(forms, n, k, f, opt);
        const std::size_t rest = forms.size() - s.vanishing.size();
        t.check(is_invertible(s.c), "c is singular");
        t.check(s.vanish_on_c.size() >= s.vanishing.size() + s.agree, "forms vanishing on c undercounted");
        t.check(pair_bound_holds(s.agree, rest, p, k), "pair agreement below t/p - t/k");
        const BilinearDecomp sd = sandwich(d, s.c);
        t.check(verify_mp(sd).ok, "sandwiched circuit does not verify");
        t.check(detail::vanishing_on_identity(detail::u_forms(sd), n, f) == s.vanish_on_c,
                "sandwiched forms do not vanish on I");
      }
    }
  });
}

namespace detail {

inline void commutator_case(Tally& t, std::uint64_t p, std::size_t n, std::size_t k, const std::vector<LinForm>& forms,
                            std::uint64_t seed) {
  const FieldCtx f = make_context(p, 1);
  SearchOptions opt;
  opt.seed = seed;
  const auto w = commutator_family(n, k, forms, f, opt);
  const std::string where = " at p = " + std::to_string(p) + ", n = " + std::to_string(n) + ", k = " + std::to_string(k);
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t i = 0; i < j; ++i)
        t.check(is_invertible(commutator(w.mats[i] - w.mats[l], w.mats[j] - w.mats[l])), "singular commutator" + where);
  const std::size_t d = 2 * choose(k, 3) * n;
  t.check(d >= n * n || count_in(w.vanishing, w.basis) >= n * n - d, "too few vanishing forms" + where);
  for (auto i : w.vanishing)
    for (const auto& a : w.mats) t.check(eval_form(forms[i], a).is_zero(), "listed form does not vanish" + where);
}

}  // namespace detail

/// a, b with [a, b] invertible and n^2 - 2n vanishing forms.
inline LemmaResult run_2_commutator(const SuiteConfig& cfg) {
  return detail::guarded("2-commutator", [&](detail::Tally& t) {
    for (auto [p, n] : std::vector<std::pair<std::uint64_t, std::size_t>>{{5, 2}, {7, 2}, {3, 4}, {2, 6}}) {
      const FieldCtx f = make_context(p, 1);
      detail::commutator_case(t, p, n, 3, detail::coordinate_forms(f, n), cfg.seed);
      detail::commutator_case(t, p, n, 3, detail::u_forms(naive_decomp(n, f)), cfg.seed);
    }
  });
}

/// k matrices whose triple commutators are all invertible.
inline LemmaResult run_k_commutator(const SuiteConfig& cfg) {
  return detail::guarded("k-commutator", [&](detail::Tally& t) {
    for (auto [p, n, k] : std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>>{
             {17, 2, 4}, {5, 4, 4}, {7, 4, 5}, {3, 4, 3}, {2, 6, 3}}) {
      const FieldCtx f = make_context(p, 1);
      detail::commutator_case(t, p, n, k, detail::coordinate_forms(f, n), cfg.seed);
    }
    bool refused = false;
    try {
      commutator_family(3, 3, detail::coordinate_forms(make_context(3, 1), 3), make_context(3, 1));
    } catch (const PreconditionError&) {
      refused = true;
    }
    t.check(refused, "odd n was not refused");
  });
}

/// For every a, b with [a, b] invertible, t + ceil(1.5 n^2) <= m.
inline LemmaResult run_bla(const SuiteConfig&) {
  return detail::guarded("bla", [&](detail::Tally& t) {
    for (int p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      for (const auto& d : {strassen_decomp(f), naive_decomp(2, f)}) {
        const auto forms = detail::u_forms(d);
        const auto count = *matrix_count(f, 2, 2);
        const Mat id = Mat::identity(f, 2);
        std::vector<Mat> all;
        for (std::uint64_t i = 0; i < count; ++i) all.push_back(matrix_from_index(f, 2, 2, i));
        std::vector<std::size_t> on_id = detail::vanishing_on_all(forms, std::span<const Mat>(&id, 1));
        for (const auto& a : all)
          for (const auto& b : all) {
            if (!is_invertible(commutator(a, b))) continue;
            std::size_t tv = 0;
            for (auto r : on_id) tv += eval_form(forms[r], a).is_zero() && eval_form(forms[r], b).is_zero();
            t.check(static_cast<std::int64_t>(tv) + detail::blaser_constant(2) <= static_cast<std::int64_t>(d.m()),
                    "Blaser bound exceeds m at a = " + detail::fmt_matrix(a) + ", b = " + detail::fmt_matrix(b));
          }
      }
    }
  });
}

struct LemmaEntry {
  std::string name;
  std::function<LemmaResult(const SuiteConfig&)> run;
};

inline const std::vector<LemmaEntry>& lemma_registry() {
  static const std::vector<LemmaEntry> registry{
      {"schwartz", run_schwartz},   {"solution", run_solution},         {"general_vanish", run_general_vanish},
      {"embed", run_embed},         {"intersect", run_intersect},       {"dist", run_dist},
      {"k-vanish", run_k_vanish},   {"code", run_code},                 {"trace", run_trace},
      {"derivative", run_derivative}, {"inv", run_inv},                 {"2-commutator", run_2_commutator},
      {"k-commutator", run_k_commutator}, {"bla", run_bla},
  };
  return registry;
}

inline std::string format_lemma_line(const LemmaResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS " : "FAIL ") << r.name << " instances=" << r.instances;
  if (!r.detail.empty()) out << " (" << r.detail << ")";
  return out.str();
}

}  // namespace mpbound
