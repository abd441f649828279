#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mpbound/mpbound.hpp"

namespace {

using namespace mpbound;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string field = "2";
  std::size_t n = 2;
  std::optional<std::size_t> k;
  std::size_t k1 = 4;
  std::size_t k2 = 3;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> budget;
  double time_limit = 60.0;
  std::string kind;
  std::string input;
  std::string output;
  std::string c;
};

FieldCtx parse_field_spec(const std::string& spec) {
  const auto caret = spec.find('^');
  try {
    std::size_t used = 0;
    const unsigned long p = std::stoul(spec.substr(0, caret), &used);
    if (used != spec.substr(0, caret).size()) throw UsageError("bad --field '" + spec + "'");
    unsigned long d = 1;
    if (caret != std::string::npos) {
      d = std::stoul(spec.substr(caret + 1), &used);
      if (used != spec.size() - caret - 1) throw UsageError("bad --field '" + spec + "'");
    }
    return make_context(p, d);
  } catch (const std::logic_error&) {
    throw UsageError("bad --field '" + spec + "'");
  }
}

std::string opt_text(const std::optional<std::uint64_t>& v, const char* fallback) {
  return v ? std::to_string(*v) : fallback;
}

/// One line holding every setting the subcommand reads, defaults included.
void echo_config(const RunConfig& c, const std::string& extra) {
  std::ostringstream o;
  o << "# mpbound " << c.subcommand << extra;
  if (!c.input.empty()) o << " input=" << c.input;
  const std::string& s = c.subcommand;
  if (s == "bound" || s == "family") o << " kind=" << c.kind;
  if (s == "family" || s == "gen") o << " field=" << c.field << " n=" << c.n;
  if (s == "bound" || s == "family") o << " k=" << opt_text(c.k, "auto");
  if (s == "bound") o << " k1=" << c.k1 << " k2=" << c.k2;
  if (s == "bound" || s == "family" || s == "lemmas" || s == "code-check") o << " seed=" << c.seed;
  if (s == "lemmas") o << " samples=" << opt_text(c.samples, "default");
  if (s == "code-check") o << " mode=" << (c.exhaustive ? "exhaustive" : "samples:" + opt_text(c.samples, "10000"));
  if (s == "bound" || s == "family" || s == "rank") o << " budget=" << opt_text(c.budget, "default");
  if (s == "rank") o << " time_limit=" << c.time_limit;
  if (s == "sandwich") o << " c=\"" << c.c << '"';
  if (!c.output.empty()) o << " out=" << c.output;
  std::cout << o.str() << '\n';
}

Document load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return read_document(in);
}

template <class T>
const T& expect(const Document& doc, const std::string& what) {
  if (const T* v = std::get_if<T>(&doc)) return *v;
  throw UsageError("input is not " + what);
}

template <class Writer>
void emit(const std::string& path, Writer write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  write(out);
  if (!out) throw Error("write to '" + path + "' failed");
}

std::string join(std::span<const Elem> v, const FieldCtx& f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + f.format(v[i]);
  return s;
}

SearchOptions search_options(const RunConfig& c) {
  SearchOptions opt;
  opt.seed = c.seed;
  if (c.budget) opt.budget = *c.budget;
  return opt;
}

int cmd_verify(const RunConfig& c) {
  const Document doc = load(c.input);
  VerifyReport r;
  std::size_t m = 0;
  if (const auto* d = std::get_if<BilinearDecomp>(&doc)) {
    r = verify_mp(*d);
    m = d->m();
  } else if (const auto* q = std::get_if<QuadCircuit>(&doc)) {
    r = verify_quadratic(*q);
    m = q->m();
  } else {
    throw UsageError("verify needs an MPDECOMP or MPQUAD file");
  }
  if (r.ok) {
    std::cout << "VERIFIED GATES " << m << '\n';
    return kOk;
  }
  std::cout << "NOT VERIFIED: " << r.first_discrepancy << '\n';
  return kFailed;
}

int finish_certificate(const RunConfig& c, const BoundCertificate& cert) {
  const CheckResult check = check_certificate(cert);
  for (const auto& f : check.failures) std::cout << "CHECK FAILED: " << f << '\n';
  if (!check.ok) return kFailed;
  if (!c.output.empty()) emit(c.output, [&](std::ostream& o) { write_certificate(o, cert); });
  std::cout << "t " << cert.t << '\n';
  std::cout << "BOUND " << cert.bound << " GATES " << cert.m_actual << " OK\n";
  return kOk;
}

int cmd_bound(const RunConfig& c) {
  const Document doc = load(c.input);
  VerifyReport r;
  if (const auto* d = std::get_if<BilinearDecomp>(&doc))
    r = verify_mp(*d);
  else if (const auto* q = std::get_if<QuadCircuit>(&doc))
    r = verify_quadratic(*q);
  else
    throw UsageError("bound needs an MPDECOMP or MPQUAD file");
  if (!r.ok) {
    std::cout << "NOT VERIFIED: " << r.first_discrepancy << '\n';
    return kFailed;
  }
  const SearchOptions opt = search_options(c);
  if (c.kind == "gf2") {
    const MatrixCode code = std::holds_alternative<BilinearDecomp>(doc)
                                ? code_from_bilinear(std::get<BilinearDecomp>(doc))
                                : code_from_quadratic(std::get<QuadCircuit>(doc));
    const std::size_t k = c.k ? *c.k : std::max<std::size_t>(3, code.ctx.p() + 1);
    return finish_certificate(c, gf2_pipeline(code, k, c.seed, opt));
  }
  const auto& d = expect<BilinearDecomp>(doc, "a bilinear decomposition (gfp needs MPDECOMP)");
  return finish_certificate(c, gfp_pipeline(d, c.k1, c.k2, c.seed, opt));
}

int cmd_check(const RunConfig& c) {
  const Document doc = load(c.input);
  const auto& cert = expect<BoundCertificate>(doc, "a certificate");
  const CheckResult r = check_certificate(cert);
  if (r.ok) {
    std::cout << "CERTIFICATE OK BOUND " << cert.bound << " GATES " << cert.m_actual << '\n';
    return kOk;
  }
  for (const auto& f : r.failures) std::cout << "CHECK FAILED: " << f << '\n';
  std::cout << "CERTIFICATE REJECTED\n";
  return kFailed;
}

int cmd_lemmas(const RunConfig& c, const std::string& scope) {
  SuiteConfig cfg;
  cfg.seed = c.seed;
  if (c.samples) cfg.samples = *c.samples;
  bool matched = false;
  bool all_pass = true;
  for (const auto& entry : lemma_registry()) {
    if (scope != "all" && scope != entry.name) continue;
    matched = true;
    const LemmaResult r = entry.run(cfg);
    all_pass = all_pass && r.passed;
    std::cout << format_lemma_line(r) << '\n';
  }
  if (!matched) throw UsageError("unknown lemma '" + scope + "'");
  return all_pass ? kOk : kFailed;
}

int cmd_rank(const RunConfig& c) {
  const Document doc = load(c.input);
  Tensor3 t;
  std::optional<std::size_t> known;
  if (const auto* d = std::get_if<BilinearDecomp>(&doc)) {
    t = tensor_from_decomp(*d);
    known = d->m();
  } else if (const auto* tt = std::get_if<Tensor3>(&doc)) {
    t = *tt;
  } else {
    throw UsageError("rank needs a TENSOR or MPDECOMP file");
  }
  if (c.budget) {
    const RankDecision dec = rank_decide(t, *c.budget, c.time_limit);
    std::cout << "DECIDE " << *c.budget << ' ' << to_string(dec.status) << " nodes=" << dec.nodes << '\n';
    return dec.status == RankStatus::TimedOut ? kFailed : kOk;
  }
  const RankInterval r = tensor_rank(t, c.time_limit, known);
  if (r.exact())
    std::cout << "RANK " << r.lower << " (exact)\n";
  else
    std::cout << "RANK [" << r.lower << ", " << r.upper << "] (lower: "
              << (r.lower > r.flattening ? "complete search" : "flattening") << ", upper: "
              << (r.upper_witnessed ? "witness" : "trivial") << ")\n";
  if (r.witness)
    for (const auto& term : *r.witness)
      std::cout << "term u " << join(term.u, t.ctx) << " | v " << join(term.v, t.ctx) << " | w " << join(term.w, t.ctx)
                << '\n';
  return kOk;
}

int cmd_family(const RunConfig& c) {
  FieldCtx f = parse_field_spec(c.field);
  std::size_t n = c.n;
  std::vector<LinForm> forms;
  if (!c.input.empty()) {
    const Document doc = load(c.input);
    const auto& d = expect<BilinearDecomp>(doc, "a bilinear decomposition");
    if (!d.dims.square()) throw UsageError("family needs a square decomposition");
    f = d.ctx;
    n = d.dims.n1;
    for (const auto& t : d.triples) forms.push_back(t.u);
  } else {
    for (std::size_t i = 0; i < n * n; ++i) forms.push_back(LinForm::coordinate(f, n * n, i));
  }
  const SearchOptions opt = search_options(c);
  const std::size_t k = c.k.value_or(c.kind == "vanish" ? 2 : 3);
  const VanishWitness w = c.kind == "vanish" ? vanish_family(forms, n, k, f, opt) : commutator_family(n, k, forms, f, opt);
  for (std::size_t j = 0; j < w.mats.size(); ++j) std::cout << "a" << j + 1 << ' ' << join(w.mats[j].entries(), f) << '\n';
  std::cout << "vanishing " << w.vanishing.size();
  for (auto i : w.vanishing) std::cout << ' ' << i;
  std::cout << "\nstrategy " << to_string(w.strategy) << " evaluations " << w.evaluations << '\n';
  return kOk;
}

int cmd_sandwich(const RunConfig& c) {
  const Document doc = load(c.input);
  const auto& d = expect<BilinearDecomp>(doc, "a bilinear decomposition");
  std::istringstream in(c.c);
  std::vector<Elem> entries;
  for (std::string tok; in >> tok;) entries.push_back(d.ctx.parse(tok));
  if (entries.size() != d.dims.n2 * d.dims.n2) throw UsageError("--c needs n2^2 entries");
  const BilinearDecomp out = sandwich(d, Mat(d.ctx, d.dims.n2, d.dims.n2, entries));
  const VerifyReport r = verify_mp(out);
  if (!r.ok) {
    std::cout << "NOT VERIFIED: " << r.first_discrepancy << '\n';
    return kFailed;
  }
  emit(c.output, [&](std::ostream& o) { write_decomp(o, out); });
  if (!c.output.empty()) std::cout << "SANDWICHED GATES " << out.m() << " VERIFIED\n";
  return kOk;
}

int cmd_code_check(const RunConfig& c) {
  const Document doc = load(c.input);
  MatrixCode code;
  if (const auto* d = std::get_if<BilinearDecomp>(&doc))
    code = code_from_bilinear(*d);
  else if (const auto* q = std::get_if<QuadCircuit>(&doc))
    code = code_from_quadratic(*q);
  else
    throw UsageError("code-check needs an MPDECOMP or MPQUAD file");
  CheckMode mode = Exhaustive{};
  if (!c.exhaustive) mode = Sampled{c.samples.value_or(10000), c.seed};
  const CodeReport r = check_rank_distance(code, mode);
  std::cout << "CHECKED " << r.checked << " VIOLATIONS " << r.violation_count;
  if (r.min_ratio) std::cout << " MIN_RATIO " << r.min_ratio->numerator() << '/' << r.min_ratio->denominator();
  std::cout << '\n';
  for (const auto& v : r.violations)
    std::cout << "violation weight " << v.weight << " rank " << v.rank << " matrix " << join(v.matrix.entries(), code.ctx)
              << '\n';
  return r.ok() ? kOk : kFailed;
}

int cmd_gen(const RunConfig& c, const std::string& what) {
  const FieldCtx f = parse_field_spec(c.field);
  if (what == "naive") {
    emit(c.output, [&](std::ostream& o) { write_decomp(o, naive_decomp(c.n, f)); });
  } else if (what == "strassen") {
    emit(c.output, [&](std::ostream& o) { write_decomp(o, strassen_decomp(f)); });
  } else if (what == "naive-quad") {
    emit(c.output, [&](std::ostream& o) { write_quad(o, to_quadratic(naive_decomp(c.n, f))); });
  } else if (what == "karatsuba") {
    emit(c.output, [&](std::ostream& o) { write_tensor(o, karatsuba_tensor(f)); });
  } else if (what == "mp-tensor") {
    emit(c.output, [&](std::ostream& o) { write_tensor(o, mp_tensor(c.n, f)); });
  } else {
    throw UsageError("unknown generator '" + what + "'");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix multiplication lower-bound toolkit over finite fields"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string scope = "all";
  std::string generator;

  auto add_search = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "random seed");
    s->add_option("--budget", cfg.budget, "search evaluation budget");
  };

  auto* verify = app.add_subcommand("verify", "check a circuit computes the matrix product");
  verify->add_option("path", cfg.input)->required();

  auto* bound = app.add_subcommand("bound", "run a lower-bound pipeline and emit a certificate");
  bound->add_option("path", cfg.input)->required();
  bound->add_option("--kind", cfg.kind, "gf2 (default) or gfp")->check(CLI::IsMember({"gf2", "gfp"}));
  bound->add_option("--k", cfg.k, "family size for gf2 (default max(3, p+1))");
  bound->add_option("--k1", cfg.k1, "invertible-difference family size for gfp");
  bound->add_option("--k2", cfg.k2, "commutator family size for gfp");
  bound->add_option("--out", cfg.output, "certificate path");
  add_search(bound);

  auto* check = app.add_subcommand("check", "re-verify a certificate file");
  check->add_option("path", cfg.input)->required();

  auto* lemmas = app.add_subcommand("lemmas", "run the lemma verification suite");
  lemmas->add_option("scope", scope, "all or one lemma name");
  lemmas->add_option("--seed", cfg.seed);
  lemmas->add_option("--samples", cfg.samples, "random instances per sampled check");

  auto* rank = app.add_subcommand("rank", "exact tensor rank or a proven interval");
  rank->add_option("path", cfg.input)->required();
  rank->add_option("--budget", cfg.budget, "decide rank <= budget only");
  rank->add_option("--time-limit", cfg.time_limit, "seconds");

  auto* family = app.add_subcommand("family", "construct a matrix family with many vanishing forms");
  family->add_option("path", cfg.input, "decomposition whose u-forms are used (default: coordinates)");
  family->add_option("--kind", cfg.kind, "vanish (default) or commutator")->check(CLI::IsMember({"vanish", "commutator"}));
  family->add_option("--field", cfg.field, "p or p^d");
  family->add_option("--n", cfg.n);
  family->add_option("--k", cfg.k);
  add_search(family);

  auto* sw = app.add_subcommand("sandwich", "rewrite a decomposition through x c, c^-1 y");
  sw->add_option("path", cfg.input)->required();
  sw->add_option("--c", cfg.c, "entries of c, row-major")->required();
  sw->add_option("--out", cfg.output);

  auto* code = app.add_subcommand("code-check", "check weight(code(x)) >= n rank(x)");
  code->add_option("path", cfg.input)->required();
  auto* ex = code->add_flag("--exhaustive", cfg.exhaustive, "enumerate every matrix");
  code->add_option("--samples", cfg.samples)->excludes(ex);
  code->add_option("--seed", cfg.seed);

  auto* gen = app.add_subcommand("gen", "write a standard circuit or tensor");
  gen->add_option("what", generator, "naive | strassen | naive-quad | karatsuba | mp-tensor")->required();
  gen->add_option("--field", cfg.field, "p or p^d");
  gen->add_option("--n", cfg.n);
  gen->add_option("--out", cfg.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  try {
    if (cfg.subcommand == "bound" && cfg.kind.empty()) cfg.kind = "gf2";
    if (cfg.subcommand == "family" && cfg.kind.empty()) cfg.kind = "vanish";
    if (cfg.subcommand == "gen" && cfg.output.empty()) throw UsageError("gen needs --out");
    std::string extra;
    if (cfg.subcommand == "lemmas") extra = " " + scope;
    if (cfg.subcommand == "gen") extra = " " + generator;
    echo_config(cfg, extra);
    if (cfg.subcommand == "verify") return cmd_verify(cfg);
    if (cfg.subcommand == "bound") return cmd_bound(cfg);
    if (cfg.subcommand == "check") return cmd_check(cfg);
    if (cfg.subcommand == "lemmas") return cmd_lemmas(cfg, scope);
    if (cfg.subcommand == "rank") return cmd_rank(cfg);
    if (cfg.subcommand == "family") return cmd_family(cfg);
    if (cfg.subcommand == "sandwich") return cmd_sandwich(cfg);
    if (cfg.subcommand == "code-check") return cmd_code_check(cfg);
    return cmd_gen(cfg, generator);
  } catch (const mpbound::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return kUsage;
  } catch (const NotFound& e) {
    std::cerr << "not found: " << e.what() << '\n';
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
}
