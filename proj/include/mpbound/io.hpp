#pragma once

// Line-oriented text formats: MPDECOMP v1, MPQUAD v1, TENSOR v1 and
// CERTIFICATE v1. Tokens are whitespace separated, '#' starts a comment,
// field elements use FieldCtx::format, matrices and forms are row-major.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mpbound/certificate.hpp"
#include "mpbound/circuits.hpp"
#include "mpbound/error.hpp"
#include "mpbound/field.hpp"
#include "mpbound/matspace.hpp"
#include "mpbound/rank_oracle.hpp"

namespace mpbound {

namespace detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) {
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      Line line{number, {}};
      for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
      if (!line.tokens.empty()) lines_.push_back(std::move(line));
    }
    last_line_ = number;
  }

  bool done() const { return pos_ >= lines_.size(); }
  std::size_t line_number() const { return done() ? last_line_ : lines_[pos_].number; }
  const std::string& peek_keyword() const {
    if (done()) fail("unexpected end of input");
    return lines_[pos_].tokens.front();
  }

  /// Consumes a line starting with `keyword`; returns the remaining tokens.
  std::vector<std::string> expect(std::string_view keyword) {
    if (done()) fail("unexpected end of input, expected '" + std::string(keyword) + "'");
    auto& line = lines_[pos_];
    if (line.tokens.front() != keyword) fail("expected '" + std::string(keyword) + "', found '" + line.tokens.front() + "'");
    ++pos_;
    return {line.tokens.begin() + 1, line.tokens.end()};
  }

  std::vector<std::string> expect(std::string_view keyword, std::size_t count) {
    auto t = expect(keyword);
    if (t.size() != count)
      fail_at(lines_[pos_ - 1].number, "'" + std::string(keyword) + "' needs " + std::to_string(count) + " values, found " +
                                           std::to_string(t.size()));
    return t;
  }

  std::size_t previous_line() const { return pos_ == 0 ? 0 : lines_[pos_ - 1].number; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_number(), what); }
  [[noreturn]] static void fail_at(std::size_t line, const std::string& what) { throw ParseError(line, what); }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::size_t last_line_ = 0;
};

inline std::uint64_t parse_uint(const LineReader& r, const std::string& tok) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) LineReader::fail_at(r.previous_line(), "expected a non-negative integer, found '" + tok + "'");
  return v;
}

inline std::int64_t parse_int(const LineReader& r, const std::string& tok) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) LineReader::fail_at(r.previous_line(), "expected an integer, found '" + tok + "'");
  return v;
}

inline void expect_header(LineReader& r, std::string_view name) {
  const auto t = r.expect(name, 1);
  if (t[0] != "v1") LineReader::fail_at(r.previous_line(), "unsupported " + std::string(name) + " version '" + t[0] + "'");
}

inline FieldCtx parse_field_line(LineReader& r) {
  const auto t = r.expect("field");
  if (t.size() < 2) LineReader::fail_at(r.previous_line(), "'field' needs p and d");
  const std::uint64_t p = parse_uint(r, t[0]), d = parse_uint(r, t[1]);
  FieldCtx f;
  try {
    f = make_context(p, d);
  } catch (const Error& e) {
    LineReader::fail_at(r.previous_line(), e.what());
  }
  if (d == 1) {
    if (t.size() != 2) LineReader::fail_at(r.previous_line(), "prime field takes no modulus");
  } else {
    if (t.size() != d + 3) LineReader::fail_at(r.previous_line(), "modulus needs d + 1 coefficients");
    for (std::size_t i = 0; i <= d; ++i)
      if (parse_uint(r, t[2 + i]) != f.modulus()[i])
        LineReader::fail_at(r.previous_line(), "modulus is not the canonical one for GF(" + std::to_string(p) + "^" +
                                                   std::to_string(d) + ")");
  }
  return f;
}

inline std::string field_line(const FieldCtx& f) {
  std::string s = "field " + std::to_string(f.p()) + " " + std::to_string(f.degree());
  if (f.degree() > 1)
    for (auto c : f.modulus()) s += " " + std::to_string(c);
  return s;
}

inline std::vector<Elem> parse_elems(const LineReader& r, const FieldCtx& f, const std::vector<std::string>& toks,
                                     std::size_t from = 0) {
  std::vector<Elem> out;
  for (std::size_t i = from; i < toks.size(); ++i) {
    try {
      out.push_back(f.parse(toks[i]));
    } catch (const Error& e) {
      LineReader::fail_at(r.previous_line(), e.what());
    }
  }
  return out;
}

inline std::vector<Elem> expect_elems(LineReader& r, const FieldCtx& f, std::string_view keyword, std::size_t count) {
  return parse_elems(r, f, r.expect(keyword, count));
}

inline void write_elems(std::ostream& out, const FieldCtx& f, std::span<const Elem> v) {
  for (auto e : v) out << ' ' << f.format(e);
}

inline std::vector<std::size_t> expect_indices(LineReader& r, std::string_view keyword) {
  const auto t = r.expect(keyword);
  if (t.empty()) LineReader::fail_at(r.previous_line(), "'" + std::string(keyword) + "' needs a count");
  const std::uint64_t count = parse_uint(r, t[0]);
  if (t.size() != count + 1) LineReader::fail_at(r.previous_line(), "index count does not match list length");
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < t.size(); ++i) out.push_back(parse_uint(r, t[i]));
  return out;
}

inline void write_indices(std::ostream& out, std::string_view keyword, std::span<const std::size_t> v) {
  out << keyword << ' ' << v.size();
  for (auto i : v) out << ' ' << i;
  out << '\n';
}

inline Mat expect_matrix(LineReader& r, const FieldCtx& f, std::string_view keyword, std::size_t n) {
  return Mat(f, n, n, expect_elems(r, f, keyword, n * n));
}

inline void write_matrix(std::ostream& out, std::string_view keyword, const Mat& a) {
  out << keyword;
  write_elems(out, a.ctx(), a.entries());
  out << '\n';
}

inline Shape parse_dims(LineReader& r) {
  const auto t = r.expect("dims", 3);
  Shape s{parse_uint(r, t[0]), parse_uint(r, t[1]), parse_uint(r, t[2])};
  if (s.n1 == 0 || s.n2 == 0 || s.n3 == 0) LineReader::fail_at(r.previous_line(), "dims must be positive");
  return s;
}

inline void parse_triples(LineReader& r, BilinearDecomp& d, std::size_t m) {
  const std::size_t nx = d.dims.n1 * d.dims.n2, ny = d.dims.n2 * d.dims.n3, nw = d.dims.n1 * d.dims.n3;
  for (std::size_t k = 0; k < m; ++k) {
    r.expect("triple", 0);
    BilinearTriple t;
    t.u = LinForm{d.ctx, expect_elems(r, d.ctx, "u", nx)};
    t.v = LinForm{d.ctx, expect_elems(r, d.ctx, "v", ny)};
    t.w = expect_elems(r, d.ctx, "w", nw);
    d.triples.push_back(std::move(t));
  }
}

inline void write_triples(std::ostream& out, const BilinearDecomp& d) {
  for (const auto& t : d.triples) {
    out << "triple\nu";
    write_elems(out, d.ctx, t.u.coeffs);
    out << "\nv";
    write_elems(out, d.ctx, t.v.coeffs);
    out << "\nw";
    write_elems(out, d.ctx, t.w);
    out << '\n';
  }
}

}  // namespace detail

inline void write_decomp(std::ostream& out, const BilinearDecomp& d) {
  d.validate();
  out << "MPDECOMP v1\n" << detail::field_line(d.ctx) << '\n';
  out << "dims " << d.dims.n1 << ' ' << d.dims.n2 << ' ' << d.dims.n3 << '\n';
  out << "rank " << d.m() << '\n';
  detail::write_triples(out, d);
}

inline BilinearDecomp read_decomp(std::istream& in) {
  detail::LineReader r(in);
  detail::expect_header(r, "MPDECOMP");
  BilinearDecomp d;
  d.ctx = detail::parse_field_line(r);
  d.dims = detail::parse_dims(r);
  const std::size_t m = detail::parse_uint(r, r.expect("rank", 1)[0]);
  if (m == 0) detail::LineReader::fail_at(r.previous_line(), "rank must be positive");
  detail::parse_triples(r, d, m);
  if (!r.done()) r.fail("trailing content after last triple");
  return d;
}

inline void write_quad(std::ostream& out, const QuadCircuit& q) {
  q.validate();
  out << "MPQUAD v1\n" << detail::field_line(q.ctx) << '\n';
  out << "dims " << q.n << ' ' << q.n << ' ' << q.n << '\n';
  out << "rank " << q.m() << '\n';
  for (const auto& g : q.triples) {
    out << "triple\na";
    detail::write_elems(out, q.ctx, g.a.coeffs);
    out << "\nb";
    detail::write_elems(out, q.ctx, g.b.coeffs);
    out << "\nalpha";
    detail::write_elems(out, q.ctx, g.alpha);
    out << '\n';
  }
}

inline QuadCircuit read_quad(std::istream& in) {
  detail::LineReader r(in);
  detail::expect_header(r, "MPQUAD");
  QuadCircuit q;
  q.ctx = detail::parse_field_line(r);
  const Shape s = detail::parse_dims(r);
  if (!s.square()) detail::LineReader::fail_at(r.previous_line(), "quadratic circuits need dims n n n");
  q.n = s.n1;
  const std::size_t m = detail::parse_uint(r, r.expect("rank", 1)[0]);
  if (m == 0) detail::LineReader::fail_at(r.previous_line(), "rank must be positive");
  const std::size_t nn = q.n * q.n;
  for (std::size_t k = 0; k < m; ++k) {
    r.expect("triple", 0);
    QuadTriple g;
    g.a = LinForm{q.ctx, detail::expect_elems(r, q.ctx, "a", 2 * nn)};
    g.b = LinForm{q.ctx, detail::expect_elems(r, q.ctx, "b", 2 * nn)};
    g.alpha = detail::expect_elems(r, q.ctx, "alpha", nn);
    q.triples.push_back(std::move(g));
  }
  if (!r.done()) r.fail("trailing content after last triple");
  return q;
}

inline void write_tensor(std::ostream& out, const Tensor3& t) {
  out << "TENSOR v1\n" << detail::field_line(t.ctx) << '\n';
  out << "dims " << t.d1 << ' ' << t.d2 << ' ' << t.d3 << '\n';
  for (std::size_t i = 0; i < t.d1; ++i)
    for (std::size_t j = 0; j < t.d2; ++j) {
      out << "entries";
      for (std::size_t l = 0; l < t.d3; ++l) out << ' ' << t.ctx.format(t.at(i, j, l));
      out << '\n';
    }
}

inline Tensor3 read_tensor(std::istream& in) {
  detail::LineReader r(in);
  detail::expect_header(r, "TENSOR");
  const FieldCtx f = detail::parse_field_line(r);
  const Shape s = detail::parse_dims(r);
  Tensor3 t(f, s.n1, s.n2, s.n3);
  for (std::size_t i = 0; i < t.d1; ++i)
    for (std::size_t j = 0; j < t.d2; ++j) {
      const auto row = detail::expect_elems(r, f, "entries", t.d3);
      for (std::size_t l = 0; l < t.d3; ++l) t.at(i, j, l) = row[l];
    }
  if (!r.done()) r.fail("trailing content after tensor entries");
  return t;
}

inline void write_certificate(std::ostream& out, const BoundCertificate& c) {
  out << "CERTIFICATE v1\n";
  out << "kind " << to_string(c.kind) << '\n';
  out << detail::field_line(c.ctx) << '\n';
  out << "n " << c.n << '\n';
  out << "gates " << c.m_actual << '\n';
  out << "seed " << c.seed << '\n';
  if (c.kind == CertKind::Gf2Code) {
    const auto& s = *c.gf2;
    out << "STEP code\n";
    for (const auto& f : c.code) {
      out << "form";
      detail::write_elems(out, c.ctx, f.coeffs);
      out << '\n';
    }
    out << "STEP independent\n";
    detail::write_indices(out, "indices", s.independent);
    out << "STEP vanish_family\nk " << s.k << '\n';
    for (const auto& a : s.family) detail::write_matrix(out, "matrix", a);
    detail::write_indices(out, "vanishing", s.vanishing);
    out << "STEP distance\nmin_distance " << s.min_distance << '\n';
    out << "STEP plotkin\nplotkin " << s.plotkin.numerator() << '/' << s.plotkin.denominator() << '\n';
  } else {
    out << "STEP circuit\n";
    out << "rank " << c.circuit->m() << '\n';
    detail::write_triples(out, *c.circuit);
    if (c.inv) {
      const auto& s = *c.inv;
      out << "STEP inv\nk " << s.k << '\n';
      for (const auto& a : s.family) detail::write_matrix(out, "matrix", a);
      detail::write_indices(out, "vanishing", s.vanishing);
      out << "pair " << s.i << ' ' << s.j << '\n';
      out << "agree " << s.agree << '\n';
      detail::write_matrix(out, "c", s.c);
      detail::write_indices(out, "vanish_on_c", s.vanish_on_c);
      out << "STEP sandwich\n";
      detail::write_matrix(out, "c", s.c);
    }
    if (c.commutator) {
      const auto& s = *c.commutator;
      out << "STEP commutator_family\nk " << s.k << '\n';
      for (const auto& a : s.family) detail::write_matrix(out, "matrix", a);
      detail::write_indices(out, "vanishing", s.vanishing);
      detail::write_indices(out, "vanish_on_identity", s.vanish_on_identity);
      out << "triple " << s.i << ' ' << s.j << ' ' << s.l << '\n';
      out << "agree " << s.agree << '\n';
    }
    const auto& b = *c.blaser;
    out << "STEP blaser\n";
    detail::write_matrix(out, "a", b.a);
    detail::write_matrix(out, "b", b.b);
    detail::write_indices(out, "vanishing", b.vanishing);
  }
  out << "t " << c.t << '\n';
  out << "BOUND " << c.bound << '\n';
}

inline BoundCertificate read_certificate(std::istream& in) {
  detail::LineReader r(in);
  detail::expect_header(r, "CERTIFICATE");
  BoundCertificate c;
  const std::string kind = r.expect("kind", 1)[0];
  if (kind == "gf2_code")
    c.kind = CertKind::Gf2Code;
  else if (kind == "gfp_bilinear")
    c.kind = CertKind::GfpBilinear;
  else
    detail::LineReader::fail_at(r.previous_line(), "unknown certificate kind '" + kind + "'");
  c.ctx = detail::parse_field_line(r);
  c.n = detail::parse_uint(r, r.expect("n", 1)[0]);
  if (c.n == 0) detail::LineReader::fail_at(r.previous_line(), "n must be positive");
  c.m_actual = detail::parse_uint(r, r.expect("gates", 1)[0]);
  c.seed = detail::parse_uint(r, r.expect("seed", 1)[0]);
  const std::size_t n = c.n, nn = n * n;
  auto step = [&](std::string_view name) {
    const auto t = r.expect("STEP", 1);
    if (t[0] != name) detail::LineReader::fail_at(r.previous_line(), "expected STEP " + std::string(name) + ", found '" + t[0] + "'");
  };
  auto next_step_is = [&](std::string_view name) {
    if (r.done() || r.peek_keyword() != "STEP") return false;
    detail::LineReader probe = r;
    return probe.expect("STEP", 1)[0] == name;
  };
  auto family = [&](std::size_t k) {
    std::vector<Mat> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(detail::expect_matrix(r, c.ctx, "matrix", n));
    return out;
  };

  if (c.kind == CertKind::Gf2Code) {
    Gf2Step s;
    step("code");
    while (!r.done() && r.peek_keyword() == "form") c.code.push_back(LinForm{c.ctx, detail::expect_elems(r, c.ctx, "form", nn)});
    step("independent");
    s.independent = detail::expect_indices(r, "indices");
    step("vanish_family");
    s.k = detail::parse_uint(r, r.expect("k", 1)[0]);
    s.family = family(s.k);
    s.vanishing = detail::expect_indices(r, "vanishing");
    step("distance");
    s.min_distance = detail::parse_uint(r, r.expect("min_distance", 1)[0]);
    step("plotkin");
    const std::string pl = r.expect("plotkin", 1)[0];
    const auto slash = pl.find('/');
    if (slash == std::string::npos) detail::LineReader::fail_at(r.previous_line(), "plotkin needs num/den");
    const std::int64_t num = detail::parse_int(r, pl.substr(0, slash)), den = detail::parse_int(r, pl.substr(slash + 1));
    if (den <= 0) detail::LineReader::fail_at(r.previous_line(), "plotkin denominator must be positive");
    s.plotkin = Rational(num, den);
    c.gf2 = std::move(s);
  } else {
    step("circuit");
    BilinearDecomp d;
    d.ctx = c.ctx;
    d.dims = Shape{n, n, n};
    const std::size_t m = detail::parse_uint(r, r.expect("rank", 1)[0]);
    detail::parse_triples(r, d, m);
    c.circuit = std::move(d);
    if (next_step_is("inv")) {
      step("inv");
      InvStep s;
      s.k = detail::parse_uint(r, r.expect("k", 1)[0]);
      s.family = family(s.k);
      s.vanishing = detail::expect_indices(r, "vanishing");
      const auto pr = r.expect("pair", 2);
      s.i = detail::parse_uint(r, pr[0]);
      s.j = detail::parse_uint(r, pr[1]);
      s.agree = detail::parse_uint(r, r.expect("agree", 1)[0]);
      s.c = detail::expect_matrix(r, c.ctx, "c", n);
      s.vanish_on_c = detail::expect_indices(r, "vanish_on_c");
      step("sandwich");
      if (!(detail::expect_matrix(r, c.ctx, "c", n) == s.c))
        detail::LineReader::fail_at(r.previous_line(), "sandwich matrix differs from the inv step");
      c.inv = std::move(s);
    }
    if (next_step_is("commutator_family")) {
      step("commutator_family");
      CommutatorStep s;
      s.k = detail::parse_uint(r, r.expect("k", 1)[0]);
      s.family = family(s.k);
      s.vanishing = detail::expect_indices(r, "vanishing");
      s.vanish_on_identity = detail::expect_indices(r, "vanish_on_identity");
      const auto tr = r.expect("triple", 3);
      s.i = detail::parse_uint(r, tr[0]);
      s.j = detail::parse_uint(r, tr[1]);
      s.l = detail::parse_uint(r, tr[2]);
      s.agree = detail::parse_uint(r, r.expect("agree", 1)[0]);
      c.commutator = std::move(s);
    }
    step("blaser");
    BlaserStep b;
    b.a = detail::expect_matrix(r, c.ctx, "a", n);
    b.b = detail::expect_matrix(r, c.ctx, "b", n);
    b.vanishing = detail::expect_indices(r, "vanishing");
    c.blaser = std::move(b);
  }
  c.t = detail::parse_uint(r, r.expect("t", 1)[0]);
  c.bound = detail::parse_int(r, r.expect("BOUND", 1)[0]);
  if (!r.done()) r.fail("trailing content after BOUND");
  return c;
}

/// Any of the four formats, chosen by the header line.
using Document = std::variant<BilinearDecomp, QuadCircuit, Tensor3, BoundCertificate>;

inline Document read_document(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream probe(text);
  detail::LineReader r(probe);
  if (r.done()) throw ParseError(1, "empty input");
  const std::string head = r.peek_keyword();
  std::istringstream body(text);
  if (head == "MPDECOMP") return read_decomp(body);
  if (head == "MPQUAD") return read_quad(body);
  if (head == "TENSOR") return read_tensor(body);
  if (head == "CERTIFICATE") return read_certificate(body);
  r.fail("unknown file header '" + head + "'");
}

}  // namespace mpbound
