// Acceptance run: one PASS/FAIL line per criterion, each under its time limit.

#include <chrono>
#include <cstdlib>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpbound/mpbound.hpp"

using namespace mpbound;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::string summary;  // one line, deterministic
  std::string report;   // full deterministic report, compared by the determinism check
};

Outcome from_tally(const LemmaResult& r, std::string report = {}) {
  Outcome o;
  o.passed = r.passed;
  o.summary = format_lemma_line(r);
  o.report = o.summary + "\n" + report;
  return o;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

BilinearDecomp load_decomp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  return read_decomp(in);
}

// 1. naive n = 1..4 and Strassen verify; every single-coefficient change is caught.
Outcome circuits_criterion() {
  std::ostringstream rep;
  const auto r = detail::guarded("circuits", [&](detail::Tally& t) {
    for (std::uint64_t p : {2, 3, 5}) {
      const FieldCtx f = make_context(p, 1);
      std::vector<std::pair<std::string, BilinearDecomp>> all;
      for (std::size_t n = 1; n <= 4; ++n) all.emplace_back("naive" + std::to_string(n), naive_decomp(n, f));
      all.emplace_back("strassen", strassen_decomp(f));
      for (auto& [name, d] : all) {
        const auto where = name + " over GF(" + std::to_string(p) + ")";
        t.check(verify_mp(d).ok, where + " does not verify");
        std::uint64_t caught = 0, tried = 0;
        auto sweep = [&](Elem& slot) {
          const Elem orig = slot;
          for (std::uint64_t delta = 1; delta < p; ++delta) {
            slot = f.add(orig, f.from_int(static_cast<std::int64_t>(delta)));
            ++tried;
            caught += !verify_mp(d).ok;
          }
          slot = orig;
        };
        for (auto& tr : d.triples) {
          for (auto& e : tr.u.coeffs) sweep(e);
          for (auto& e : tr.v.coeffs) sweep(e);
          for (auto& e : tr.w) sweep(e);
        }
        t.count(tried);
        if (caught != tried) t.fail(where + ": " + std::to_string(tried - caught) + " corruptions undetected");
        rep << where << " gates " << d.m() << " corruptions " << tried << " detected " << caught << "\n";
      }
    }
  });
  return from_tally(r, rep.str());
}

// 2. embedding properties for every p^n <= 2^12.
Outcome embed_criterion() {
  SuiteConfig cfg;
  cfg.embed_max_order = 4096;
  return from_tally(run_embed(cfg));
}

// 3. weight(Gamma(x)) >= n rank(x).
Outcome code_criterion() {
  std::ostringstream rep;
  const auto r = detail::guarded("code", [&](detail::Tally& t) {
    auto run = [&](const std::string& where, const MatrixCode& code, const CheckMode& mode) {
      const auto c = check_rank_distance(code, mode);
      t.count(c.checked);
      if (!c.ok()) t.fail(where + ": " + std::to_string(c.violation_count) + " violations");
      rep << where << " checked " << c.checked << " violations " << c.violation_count;
      if (c.min_ratio) rep << " min_ratio " << c.min_ratio->numerator() << "/" << c.min_ratio->denominator();
      rep << "\n";
    };
    for (std::uint64_t p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      const std::string gf = " over GF(" + std::to_string(p) + ")";
      for (const auto& [name, d] : {std::pair{"naive2", naive_decomp(2, f)}, std::pair{"strassen", strassen_decomp(f)}}) {
        run(std::string(name) + gf + " bilinear", code_from_bilinear(d), Exhaustive{});
        run(std::string(name) + gf + " quadratic", code_from_quadratic(to_quadratic(d)), Exhaustive{});
      }
    }
    for (std::uint64_t p : {2, 3, 5}) {
      const FieldCtx f = make_context(p, 1);
      const auto d = naive_decomp(3, f);
      const std::string gf = " over GF(" + std::to_string(p) + ")";
      run("naive3" + gf + " bilinear", code_from_bilinear(d), Sampled{10000, 0});
      run("naive3" + gf + " quadratic", code_from_quadratic(to_quadratic(d)), Sampled{10000, 0});
    }
  });
  return from_tally(r, rep.str());
}

// 4. trace identity and the discrete-derivative span.
Outcome quadratic_criterion() {
  std::ostringstream rep;
  const auto r = detail::guarded("quadratic", [&](detail::Tally& t) {
    for (std::uint64_t p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      const std::string gf = " over GF(" + std::to_string(p) + ")";
      t.check(trace_identity_check(to_quadratic(naive_decomp(2, f)), Exhaustive{}), "formal trace identity fails for naive2" + gf);
      t.check(trace_identity_check(to_quadratic(strassen_decomp(f)), Exhaustive{}), "formal trace identity fails for strassen" + gf);
    }
    for (std::uint64_t p : {2, 3, 5}) {
      const FieldCtx f = make_context(p, 1);
      const std::string gf = " over GF(" + std::to_string(p) + ")";
      t.check(trace_identity_check(to_quadratic(strassen_decomp(f)), Sampled{1000, 0}),
              "sampled trace identity fails for strassen" + gf);
      t.check(trace_identity_check(to_quadratic(naive_decomp(3, f)), Sampled{1000, 0}),
              "sampled trace identity fails for naive3" + gf);
    }
    for (std::uint64_t p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      for (const auto& [name, d] : {std::pair{"naive2", naive_decomp(2, f)}, std::pair{"strassen", strassen_decomp(f)}}) {
        const auto q = to_quadratic(d);
        const auto count = *matrix_count(f, 2, 2);
        std::uint64_t good = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
          const auto s = derivative_span_check(q, matrix_from_index(f, 2, 2, i));
          const bool ok = s.lhs_dim == s.expected_dim && s.ok && s.derivatives_match && s.contained;
          good += ok;
          t.check(ok, std::string("derivative span fails for ") + name + " at z0 index " + std::to_string(i));
        }
        rep << name << " over GF(" << p << ") derivative z0 " << count << " exact " << good << "\n";
      }
    }
  });
  return from_tally(r, rep.str());
}

// 5. pair and triple agreement bounds.
Outcome intersect_criterion() {
  SuiteConfig cfg;
  cfg.samples = 100000;
  return from_tally(run_intersect(cfg));
}

// 6. vanish and commutator families.
Outcome family_criterion() {
  std::ostringstream rep;
  const auto r = detail::guarded("families", [&](detail::Tally& t) {
    for (std::uint64_t p : {2, 3}) {
      const FieldCtx f = make_context(p, 1);
      for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {3, 2}, {4, 2}, {2, 3}}) {
        for (const auto& [fname, forms] : {std::pair{"coordinate", detail::coordinate_forms(f, n)},
                                           std::pair{"naive-u", detail::u_forms(naive_decomp(n, f))}}) {
          const auto w = vanish_family(forms, n, k, f);
          const auto where = std::string(fname) + " p=" + std::to_string(p) + " n=" + std::to_string(n) +
                             " k=" + std::to_string(k);
          for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
              t.check(is_invertible(w.mats[i] - w.mats[j]), "singular difference at " + where);
          for (auto i : w.vanishing)
            for (const auto& a : w.mats) t.check(eval_form(forms[i], a).is_zero(), "listed form does not vanish at " + where);
          const std::size_t d = choose(k, 2) * n;
          const std::size_t need = d < n * n ? n * n - d : 0;
          const std::size_t got = detail::count_in(w.vanishing, w.basis);
          t.check(got >= need, "too few vanishing forms at " + where);
          rep << "vanish " << where << " vanishing " << got << " need " << need << " strategy " << to_string(w.strategy)
              << "\n";
        }
      }
    }
    for (auto [p, n, k] : std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>>{{3, 4, 3}, {2, 6, 3}}) {
      const FieldCtx f = make_context(p, 1);
      const auto forms = detail::coordinate_forms(f, n);
      const auto w = commutator_family(n, k, forms, f);
      const auto where = "p=" + std::to_string(p) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
      for (std::size_t l = 0; l < k; ++l)
        for (std::size_t j = 0; j < l; ++j)
          for (std::size_t i = 0; i < j; ++i)
            t.check(is_invertible(commutator(w.mats[i] - w.mats[l], w.mats[j] - w.mats[l])), "singular commutator at " + where);
      for (auto i : w.vanishing)
        for (const auto& a : w.mats) t.check(eval_form(forms[i], a).is_zero(), "listed form does not vanish at " + where);
      const std::size_t d = 2 * choose(k, 3) * n;
      const std::size_t need = d < n * n ? n * n - d : 0;
      const std::size_t got = detail::count_in(w.vanishing, w.basis);
      t.check(got >= need, "too few vanishing forms at " + where);
      rep << "commutator " << where << " vanishing " << got << " need " << need << " strategy " << to_string(w.strategy)
          << " evaluations " << w.evaluations << "\n";
    }
  });
  return from_tally(r, rep.str());
}

// 7. t <= 1 for every pair with invertible commutator, Strassen over GF(2).
Outcome blaser_criterion() {
  std::ostringstream rep;
  const auto r = detail::guarded("bla", [&](detail::Tally& t) {
    const FieldCtx f = make_context(2, 1);
    const auto d = strassen_decomp(f);
    const auto forms = detail::u_forms(d);
    const Mat id = Mat::identity(f, 2);
    const auto on_id = detail::vanishing_on_all(forms, std::span<const Mat>(&id, 1));
    std::uint64_t pairs = 0, invertible = 0;
    std::size_t max_t = 0;
    for (std::uint64_t i = 0; i < 16; ++i)
      for (std::uint64_t j = 0; j < 16; ++j) {
        ++pairs;
        const Mat a = matrix_from_index(f, 2, 2, i), b = matrix_from_index(f, 2, 2, j);
        if (!is_invertible(commutator(a, b))) continue;
        ++invertible;
        std::size_t tv = 0;
        for (auto q : on_id) tv += eval_form(forms[q], a).is_zero() && eval_form(forms[q], b).is_zero();
        max_t = std::max(max_t, tv);
        t.check(static_cast<std::int64_t>(tv) + detail::blaser_constant(2) <= static_cast<std::int64_t>(d.m()),
                "t + 6 > 7 at pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    rep << "pairs " << pairs << " invertible_commutator " << invertible << " max_t " << max_t << "\n";
  });
  return from_tally(r, rep.str());
}

// 8. pipelines on the shipped circuits, certificates written then re-checked from disk.
Outcome pipeline_criterion(const fs::path& data, const fs::path& out) {
  std::ostringstream rep;
  const auto r = detail::guarded("pipelines", [&](detail::Tally& t) {
    fs::create_directories(out);
    auto finish = [&](const std::string& name, const BoundCertificate& cert, std::size_t m) {
      const fs::path path = out / (name + ".cert");
      {
        std::ofstream f(path, std::ios::binary);
        write_certificate(f, cert);
      }
      std::ifstream in(path);
      const auto back = read_certificate(in);
      const auto chk = check_certificate(back);
      t.check(chk.ok, name + ": certificate rejected" + (chk.failures.empty() ? "" : ": " + chk.failures.front()));
      t.check(back.bound <= static_cast<std::int64_t>(m), name + ": bound exceeds gate count");
      rep << name << " kind " << to_string(cert.kind) << " t " << cert.t << " bound " << cert.bound << " gates " << m
          << (chk.ok ? " ok" : " rejected") << "\n";
    };
    for (const char* name : {"naive2_gf2", "naive3_gf2", "naive4_gf2", "naive2_gf3", "naive3_gf3", "naive4_gf3",
                             "strassen_gf2", "strassen_gf3", "strassen_gf5"}) {
      const auto d = load_decomp(data / (std::string(name) + ".mpd"));
      t.check(verify_mp(d).ok, std::string(name) + " does not verify");
      const std::size_t k = std::max<std::size_t>(3, d.ctx.p() + 1);
      finish(std::string(name) + ".gf2", gf2_pipeline(code_from_bilinear(d), k), d.m());
    }
    for (const char* name : {"naive4_gf3", "naive6_gf2"}) {
      const auto d = load_decomp(data / (std::string(name) + ".mpd"));
      t.check(verify_mp(d).ok, std::string(name) + " does not verify");
      finish(std::string(name) + ".gfp", gfp_pipeline(d, 4, 3), d.m());
    }
  });
  return from_tally(r, rep.str());
}

// 9. rank oracle ground truth.
Outcome rank_criterion() {
  std::ostringstream rep;
  const auto r = detail::guarded("rank", [&](detail::Tally& t) {
    const FieldCtx f2 = make_context(2, 1);
    const auto kt = karatsuba_tensor(f2);
    const auto no = rank_decide(kt, 2);
    const auto yes = rank_decide(kt, 3);
    t.check(no.status == RankStatus::ExhaustedNo, "Karatsuba budget 2 not refuted");
    t.check(yes.status == RankStatus::Found, "Karatsuba budget 3 not found");
    if (yes.status == RankStatus::Found)
      t.check(tensor_from_terms(f2, kt.d1, kt.d2, kt.d3, yes.decomposition) == kt, "Karatsuba witness does not rebuild");
    rep << "karatsuba budget2 " << to_string(no.status) << " nodes " << no.nodes << " budget3 " << to_string(yes.status)
        << "\n";

    const auto mp2 = mp_tensor(2, f2);
    const auto s = strassen_decomp(f2);
    t.check(tensor_from_decomp(s) == mp2, "Strassen tensor differs from MP_2");
    const auto iv = tensor_rank(mp2, 0.0, s.m());
    t.check(iv.upper <= 7, "MP_2 upper bound above 7");
    rep << "mp2 strassen witness gates " << s.m() << " upper " << iv.upper << "\n";

    Rng rng(9);
    auto nonzero = [&](std::size_t len) {
      while (true) {
        std::vector<Elem> v(len);
        bool any = false;
        for (auto& e : v) any |= !(e = random_elem(f2, rng)).is_zero();
        if (any) return v;
      }
    };
    std::uint64_t agree = 0;
    for (int it = 0; it < 100; ++it) {
      const std::size_t want = it < 50 ? 1 : 2;
      const std::size_t d1 = 2 + rng.below(2), d2 = 2 + rng.below(2), d3 = 2 + rng.below(2);
      TensorDecomp terms;
      std::vector<std::vector<Elem>> us, vs, ws;
      while (terms.size() < want) {
        RankOneTerm term{nonzero(d1), nonzero(d2), nonzero(d3)};
        // a second term independent in every mode has rank exactly 2
        if (!terms.empty() && (term.u == terms[0].u || term.v == terms[0].v || term.w == terms[0].w)) continue;
        terms.push_back(std::move(term));
      }
      const auto tt = tensor_from_terms(f2, d1, d2, d3, terms);
      const auto ri = tensor_rank(tt);
      const bool ok = ri.exact() && ri.lower == want && ri.witness &&
                      tensor_from_terms(f2, d1, d2, d3, *ri.witness) == tt;
      agree += ok;
      t.check(ok, "oracle disagrees on constructed rank-" + std::to_string(want) + " instance " + std::to_string(it));
    }
    rep << "random constructed instances 100 agree " << agree << "\n";
  });
  return from_tally(r, rep.str());
}

struct Criterion {
  std::string id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string data_dir = "data", out_dir = "acceptance_out";
  bool optional = true;
  double optional_limit = 600;
  app.add_option("--data", data_dir, "directory with the shipped circuits");
  app.add_option("--out", out_dir, "directory for emitted certificates");
  app.add_option("--optional-limit", optional_limit, "seconds for the optional MP_2 budget-6 refutation");
  app.add_flag("!--skip-optional", optional, "skip the optional MP_2 budget-6 refutation");
  CLI11_PARSE(app, argc, argv);
  const fs::path data(data_dir), out(out_dir);

  auto suite = [&](const fs::path& cert_dir) {
    return std::vector<Criterion>{
        {"1", "circuit verification", 1, circuits_criterion},
        {"2", "embedding lemma", 30, embed_criterion},
        {"3", "code property", 300, code_criterion},
        {"4", "quadratic machinery", 300, quadratic_criterion},
        {"5", "agreement bounds", 300, intersect_criterion},
        {"6", "family constructions", 300, family_criterion},
        {"7", "Blaser consistency", 60, blaser_criterion},
        {"8", "pipelines", 600, [=] { return pipeline_criterion(data, cert_dir); }},
        {"9", "rank oracle", 120, rank_criterion},
    };
  };

  bool all_passed = true;
  std::vector<std::string> first_reports;
  for (const auto& c : suite(out / "run1")) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.passed && in_time;
    all_passed = all_passed && pass;
    first_reports.push_back(o.report);
    std::cout << (pass ? "PASS " : "FAIL ") << c.id << " " << c.title << ": " << o.summary << " [" << std::fixed
              << std::setprecision(2) << secs << " s, limit " << std::setprecision(0) << c.limit_seconds << " s"
              << (in_time ? "" : ", over limit") << "]" << std::endl;
    if (!o.passed || std::getenv("MPBOUND_ACCEPTANCE_VERBOSE")) std::cout << o.report;
  }

  {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> diffs;
    const auto again = suite(out / "run2");
    for (std::size_t i = 0; i < again.size(); ++i)
      if (again[i].run().report != first_reports[i]) diffs.push_back(again[i].id);
    for (const auto& entry : fs::directory_iterator(out / "run1")) {
      const auto twin = out / "run2" / entry.path().filename();
      if (!fs::exists(twin) || read_file(entry.path()) != read_file(twin)) diffs.push_back(entry.path().filename().string());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_passed = all_passed && diffs.empty();
    std::cout << (diffs.empty() ? "PASS " : "FAIL ") << "10 determinism: reports of criteria 1-9 and "
              << std::distance(fs::directory_iterator(out / "run1"), fs::directory_iterator{})
              << " certificates byte-identical on rerun";
    for (const auto& d : diffs) std::cout << " differs:" << d;
    std::cout << " [" << std::fixed << std::setprecision(2) << secs << " s]" << std::endl;
  }

  if (optional) {
    const auto start = std::chrono::steady_clock::now();
    const auto dec = rank_decide(mp_tensor(2, make_context(2, 1)), 6, optional_limit);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = dec.status == RankStatus::ExhaustedNo;
    std::cout << (pass ? "PASS " : "INFO ") << "9-optional MP_2 over GF(2) budget 6: " << to_string(dec.status)
              << " nodes=" << dec.nodes << " (not gating) [" << std::fixed << std::setprecision(2) << secs << " s]"
              << std::endl;
  }

  std::cout << (all_passed ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << std::endl;
  return all_passed ? 0 : 1;
}
