#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "plateau/builders.hpp"
#include "plateau/cyclotomic.hpp"
#include "plateau/error.hpp"
#include "plateau/ff.hpp"
#include "plateau/forms.hpp"
#include "plateau/function.hpp"
#include "plateau/spectral_design.hpp"
#include "plateau/walsh.hpp"

namespace plateau {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFunctionSchema = "plateau-function/1";
inline constexpr const char* kReportSchema = "plateau-report/1";
inline constexpr const char* kDesignSchema = "plateau-design/1";
inline constexpr const char* kSpectrumSchema = "plateau-spectrum/1";

namespace io_detail {

inline const Json& at(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorKind::invalid_argument, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return at(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T dflt) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return dflt;
  return get<T>(j, key);
}

}  // namespace io_detail

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, "cannot write " + path.string());
  out << j.dump(1) << '\n';
}

// ---- fields, spaces, elements ----

inline Json to_json(const FieldCtx& F) {
  Json j;
  j["p"] = F.p();
  j["m"] = F.m();
  j["modulus"] = F.modulus_high();
  j["generator"] = F.coords(F.generator());
  return j;
}

inline FieldCtx field_from_json(const Json& j) {
  using namespace io_detail;
  const auto p = get<std::uint32_t>(j, "p");
  const auto high = get<std::vector<std::uint32_t>>(j, "modulus");
  if (j.contains("m"))
    require(get<unsigned>(j, "m") + 1 == high.size(), ErrorKind::invalid_argument, "m disagrees with the modulus");
  std::optional<FieldElem> gen;
  if (j.contains("generator") && !j["generator"].is_null()) {
    const auto c = get<std::vector<std::uint32_t>>(j, "generator");
    require(c.size() + 1 == high.size(), ErrorKind::invalid_argument, "generator has the wrong length");
    std::uint32_t v = 0;
    for (auto x : c) v = v * p + x;
    gen = FieldElem{v};
  }
  return FieldCtx::from_high(p, high, gen);
}

/// An index, {"pow": e} (generator power), {"coords": [...]} or {"zero": true}.
inline FieldElem elem_from_json(const FieldCtx& F, const Json& j) {
  using namespace io_detail;
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    require(v >= 0 && v < F.size(), ErrorKind::invalid_argument, "field element index out of range");
    return FieldElem{static_cast<std::uint32_t>(v)};
  }
  if (j.contains("pow")) return F.gen_pow(get<std::int64_t>(j, "pow"));
  if (j.contains("coords")) return F.from_coords(get<std::vector<std::uint32_t>>(j, "coords"));
  if (j.contains("zero")) return F.zero();
  fail(ErrorKind::invalid_argument, "unrecognized field element " + j.dump());
}

inline std::vector<FieldElem> elems_from_json(const FieldCtx& F, const Json& j) {
  require(j.is_array(), ErrorKind::invalid_argument, "expected a list of field elements");
  std::vector<FieldElem> out;
  for (const auto& e : j) out.push_back(elem_from_json(F, e));
  return out;
}

inline Json to_json(const SpaceDesc& sp) {
  Json j;
  j["p"] = sp.p();
  Json comps = Json::array();
  for (const auto& c : sp.components()) {
    Json cj;
    if (c.kind == SpaceComponent::Kind::field) {
      cj["kind"] = "field";
      cj["field"] = to_json(*c.field);
    } else {
      cj["kind"] = "vector";
      cj["n"] = c.degree;
    }
    comps.push_back(cj);
  }
  j["components"] = comps;
  return j;
}

inline SpaceDesc space_from_json(const Json& j) {
  using namespace io_detail;
  const auto p = get<std::uint32_t>(j, "p");
  std::vector<SpaceDesc> parts;
  for (const auto& c : at(j, "components")) {
    const auto kind = get<std::string>(c, "kind");
    if (kind == "field") {
      auto F = field_from_json(at(c, "field"));
      require(F.p() == p, ErrorKind::invalid_argument, "field component over another prime");
      parts.push_back(SpaceDesc::fld(F));
    } else if (kind == "vector") {
      parts.push_back(SpaceDesc::vec(p, get<unsigned>(c, "n")));
    } else {
      fail(ErrorKind::invalid_argument, "unknown space component kind '" + kind + "'");
    }
  }
  require(!parts.empty(), ErrorKind::invalid_argument, "space has no components");
  return SpaceDesc::product(parts);
}

// ---- functions ----

inline Json to_json(const GenFunction& f) {
  Json j;
  j["schema"] = kFunctionSchema;
  j["p"] = f.p();
  j["k"] = f.k();
  j["space"] = to_json(f.space());
  j["table"] = f.table();
  return j;
}

inline GenFunction function_from_table_json(const Json& j) {
  using namespace io_detail;
  const auto p = get<std::uint32_t>(j, "p");
  const auto k = get<unsigned>(j, "k");
  SpaceDesc sp = j.contains("space") ? space_from_json(at(j, "space")) : SpaceDesc::vec(p, get<unsigned>(j, "n"));
  require(sp.p() == p, ErrorKind::invalid_argument, "space and function over different primes");
  auto table = get<std::vector<std::uint32_t>>(j, "table");
  require(table.size() == sp.size(), ErrorKind::invalid_argument, "table length differs from the domain size");
  return GenFunction(sp, k, std::move(table));
}

inline Json to_json(const ResiduePoly& P) {
  Json terms = Json::array();
  for (const auto& t : P.terms) terms.push_back(Json{{"coef", t.coef}, {"exps", t.exps}});
  return Json{{"vars", P.vars}, {"terms", terms}};
}

/// Polynomial text such as "2*x1^2 + x1*x3 - (x2 + 1)^3". Variables are a
/// name followed by a 1-based index; the name itself is ignored.
inline ResiduePoly parse_poly_text(const std::string& text, unsigned vars) {
  struct Parser {
    const std::string& s;
    unsigned vars;
    std::size_t i = 0;

    void ws() {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    [[noreturn]] void bad(const std::string& what) {
      fail(ErrorKind::invalid_argument, "polynomial '" + s + "': " + what + " at offset " + std::to_string(i));
    }
    std::uint64_t number() {
      ws();
      if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) bad("expected a number");
      std::uint64_t v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
      return v;
    }
    ResiduePoly pow(const ResiduePoly& b, std::uint64_t e) {
      ResiduePoly r = ResiduePoly::constant(vars, 1);
      for (std::uint64_t k = 0; k < e; ++k) r = r * b;
      return r;
    }
    ResiduePoly atom() {
      ws();
      if (i >= s.size()) bad("unexpected end");
      if (s[i] == '(') {
        ++i;
        auto r = sum();
        ws();
        if (i >= s.size() || s[i] != ')') bad("expected ')'");
        ++i;
        return r;
      }
      if (std::isdigit(static_cast<unsigned char>(s[i])))
        return ResiduePoly::constant(vars, static_cast<std::int64_t>(number()));
      if (std::isalpha(static_cast<unsigned char>(s[i]))) {
        while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
        const auto idx = number();
        if (idx < 1 || idx > vars) bad("variable index outside 1.." + std::to_string(vars));
        return ResiduePoly::monomial(vars, static_cast<unsigned>(idx - 1));
      }
      bad("unexpected character");
    }
    ResiduePoly factor() {
      auto b = atom();
      ws();
      if (i < s.size() && s[i] == '^') {
        ++i;
        return pow(b, number());
      }
      return b;
    }
    ResiduePoly term() {
      auto r = factor();
      while (true) {
        ws();
        if (i < s.size() && s[i] == '*') {
          ++i;
          r = r * factor();
        } else if (i < s.size() && (s[i] == '(' || std::isalpha(static_cast<unsigned char>(s[i])))) {
          r = r * factor();
        } else {
          return r;
        }
      }
    }
    ResiduePoly sum() {
      ws();
      bool neg = false;
      if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
      auto r = term();
      if (neg) r = r * ResiduePoly::constant(vars, -1);
      while (true) {
        ws();
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
          const bool minus = s[i++] == '-';
          auto t = term();
          r = r + (minus ? t * ResiduePoly::constant(vars, -1) : t);
        } else {
          return r;
        }
      }
    }
  };
  Parser P{text, vars};
  auto r = P.sum();
  P.ws();
  if (P.i != text.size()) P.bad("trailing input");
  r.validate();
  return r;
}

inline ResiduePoly poly_from_json(const Json& j, unsigned vars) {
  using namespace io_detail;
  if (j.is_null()) return ResiduePoly::zero(vars);
  if (j.is_string()) return parse_poly_text(j.get<std::string>(), vars);
  if (j.is_number_integer()) return ResiduePoly::constant(vars, j.get<std::int64_t>());
  ResiduePoly r{get<unsigned>(j, "vars"), {}};
  require(r.vars == vars, ErrorKind::invalid_argument, "polynomial has the wrong number of variables");
  for (const auto& t : at(j, "terms"))
    r.terms.push_back({get<std::int64_t>(t, "coef"), get<std::vector<unsigned>>(t, "exps")});
  r.validate();
  return r;
}

inline Json to_json(const Permutation& P) { return Json{{"table", P.table()}}; }

/// "identity", {"table": [...]}, or {"monomial": e}.
inline Permutation perm_from_json(const FieldCtx& F, const Json& j) {
  using namespace io_detail;
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "identity")) return Permutation::identity(F.size());
  if (j.contains("monomial")) return Permutation::monomial(F, get<std::uint64_t>(j, "monomial"));
  auto t = get<std::vector<std::uint32_t>>(j, "table");
  require(t.size() == F.size(), ErrorKind::invalid_argument, "permutation table has the wrong size");
  return Permutation(std::move(t));
}

/// {"c": [coords], "b": b} or {"c_field": [elem per field component], "b": b}.
inline AffineForm affine_from_json(const SpaceDesc& sp, const Json& j) {
  using namespace io_detail;
  if (j.is_null()) return AffineForm{};
  AffineForm a;
  a.b = get_or<std::uint32_t>(j, "b", 0);
  require(a.b < sp.p(), ErrorKind::invalid_argument, "affine constant outside F_p");
  if (j.contains("c_field")) {
    const auto& list = at(j, "c_field");
    require(list.is_array() && list.size() == sp.components().size(), ErrorKind::invalid_argument,
            "c_field needs one entry per space component");
    Point pt;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& comp = sp.components()[i];
      if (comp.kind == SpaceComponent::Kind::field) {
        auto c = comp.field->coords(elem_from_json(*comp.field, list[i]));
        pt.insert(pt.end(), c.begin(), c.end());
      } else {
        auto c = list[i].get<std::vector<std::uint32_t>>();
        require(c.size() == comp.degree, ErrorKind::invalid_argument, "vector coefficient has the wrong length");
        pt.insert(pt.end(), c.begin(), c.end());
      }
    }
    a.c = sp.lex_index(pt);
  } else {
    auto c = get<std::vector<std::uint32_t>>(j, "c");
    require(c.size() == sp.n(), ErrorKind::invalid_argument, "affine coefficient has the wrong length");
    for (auto v : c) require(v < sp.p(), ErrorKind::invalid_argument, "affine coefficient outside F_p");
    a.c = sp.lex_index(c);
  }
  return a;
}

inline Json to_json(const SpaceDesc& sp, const AffineForm& a) { return Json{{"c", sp.lex_elem(a.c)}, {"b", a.b}}; }

/// Function specification used in parameter files.
///   {"kind": "table", ...GenFunction fields}
///   {"kind": "poly", "p", "n", "k", "poly": text}        coordinates as integers in [0, p)
///   {"kind": "trace", "field", "k"?, "terms": [{"coef", "exp"}], "power"?, "mult"?}
///   {"kind": "psap", "field", "alpha", "G"?}
///   {"kind": "digits", "parts": [spec, ...]}               most significant first
///   {"kind": "file", "path": relative path}
inline GenFunction function_from_json(const Json& j, const std::filesystem::path& base = {}) {
  using namespace io_detail;
  const std::string kind = j.contains("kind") ? get<std::string>(j, "kind") : std::string("table");
  if (kind == "table") return function_from_table_json(j);
  if (kind == "file") return function_from_table_json(read_json_file(base / get<std::string>(j, "path")));
  if (kind == "poly") {
    const auto p = get<std::uint32_t>(j, "p");
    const auto n = get<unsigned>(j, "n");
    const auto k = get_or<unsigned>(j, "k", 1);
    const auto P = poly_from_json(at(j, "poly"), n);
    const std::uint64_t q = ipow(p, k);
    return GenFunction::from_point(SpaceDesc::vec(p, n), k, [&](const Point& x) { return P.eval(x, q); });
  }
  if (kind == "trace") {
    const auto F = field_from_json(at(j, "field"));
    const auto k = get_or<unsigned>(j, "k", 1);
    const auto power = get_or<unsigned>(j, "power", 1);
    const auto mult = get_or<std::int64_t>(j, "mult", 1);
    std::vector<std::pair<FieldElem, std::uint64_t>> terms;
    for (const auto& t : at(j, "terms"))
      terms.emplace_back(t.contains("coef") ? elem_from_json(F, t["coef"]) : F.one(), get<std::uint64_t>(t, "exp"));
    return GenFunction::from_index(SpaceDesc::fld(F), k, [&](std::uint64_t i) {
      const FieldElem x{static_cast<std::uint32_t>(i)};
      FieldElem acc = F.zero();
      for (const auto& [c, e] : terms) acc = F.add(acc, F.mul(c, F.pow(x, e)));
      return mult * static_cast<std::int64_t>(ipow(F.trace(acc), power));
    });
  }
  if (kind == "psap") {
    const auto F = field_from_json(at(j, "field"));
    PSapBentSpec spec{F, {elem_from_json(F, at(j, "alpha"))}, perm_from_json(F, j.value("G", Json()))};
    spec.validate();
    return spec.component(spec.alphas[0]);
  }
  if (kind == "digits") {
    std::vector<GenFunction> parts;
    for (const auto& part : at(j, "parts")) parts.push_back(function_from_json(part, base));
    for (const auto& d : parts) require(d.k() == 1, ErrorKind::invalid_argument, "digit functions must be p-ary");
    return digit_compose(parts);
  }
  fail(ErrorKind::invalid_argument, "unknown function kind '" + kind + "'");
}

inline std::vector<GenFunction> functions_from_json(const Json& j, const std::filesystem::path& base) {
  require(j.is_array() && !j.empty(), ErrorKind::invalid_argument, "expected a non-empty list of functions");
  std::vector<GenFunction> out;
  for (const auto& e : j) out.push_back(function_from_json(e, base));
  return out;
}

/// Values of F_p^t -> Z_{p^k}: a list in lexicographic order or a polynomial text.
inline std::vector<std::uint32_t> outer_from_json(const Json& j, std::uint32_t p, unsigned t, unsigned k) {
  const std::uint64_t size = ipow(p, t), q = ipow(p, k);
  if (j.is_null()) return std::vector<std::uint32_t>(size, 0);
  if (j.is_array()) {
    auto v = j.get<std::vector<std::uint32_t>>();
    require(v.size() == size, ErrorKind::invalid_argument, "g needs p^t values");
    for (auto x : v) require(x < q, ErrorKind::invalid_argument, "g value outside Z_{p^k}");
    return v;
  }
  const auto P = poly_from_json(j, t);
  const auto sp = SpaceDesc::vec(p, t);
  std::vector<std::uint32_t> v(size);
  for (std::uint64_t i = 0; i < size; ++i) v[i] = P.eval(sp.lex_elem(i), q);
  return v;
}

inline Matrix matrix_from_json(std::uint32_t p, const Json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::invalid_argument, "expected a list of matrix rows");
  std::vector<Point> rows;
  for (const auto& r : j) {
    auto row = r.get<Point>();
    for (auto v : row) require(v < p, ErrorKind::invalid_argument, "matrix entry outside F_p");
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(p, rows);
}

inline std::vector<Point> points_from_json(std::uint32_t p, const Json& j) {
  std::vector<Point> out;
  for (const auto& r : j) {
    auto pt = r.get<Point>();
    for (auto v : pt) require(v < p, ErrorKind::invalid_argument, "coordinate outside F_p");
    out.push_back(std::move(pt));
  }
  return out;
}

// ---- designs, reports, spectra, errors ----

inline Json to_json(const SpectralDesign& d) {
  const auto sp = d.space();
  Json support = Json::array();
  for (auto w : d.support) support.push_back(sp.lex_elem(w));
  Json mu = Json::array();
  for (auto u : d.mu) mu.push_back(to_string(u));
  Json j;
  j["schema"] = kDesignSchema;
  j["n"] = d.n;
  j["s"] = d.s;
  j["p"] = d.p;
  j["k"] = d.k;
  j["support"] = support;
  j["d"] = to_json(d.d);
  j["mu"] = mu;
  return j;
}

inline SpectralDesign design_from_json(const Json& j) {
  using namespace io_detail;
  SpectralDesign d;
  d.n = get<unsigned>(j, "n");
  d.s = get<unsigned>(j, "s");
  d.p = get<std::uint32_t>(j, "p");
  d.k = get<unsigned>(j, "k");
  require(d.s <= d.n, ErrorKind::invalid_argument, "s exceeds n");
  d.d = function_from_table_json(at(j, "d"));
  const auto sp = SpaceDesc::vec(d.p, d.n);
  for (const auto& w : at(j, "support")) {
    auto pt = w.get<Point>();
    require(pt.size() == d.n, ErrorKind::invalid_argument, "support point has the wrong length");
    d.support.push_back(sp.lex_index(pt));
  }
  for (const auto& u : at(j, "mu")) d.mu.push_back(parse_unit(u.get<std::string>()));
  d.validate();
  return d;
}

inline Json report_to_json(const PlateauReport& r, const GenFunction& f, std::optional<std::int64_t> parseval = {}) {
  Json mu = Json::array();
  for (auto u : r.mu) mu.push_back(to_string(u));
  Json j;
  j["schema"] = kReportSchema;
  j["p"] = r.p;
  j["k"] = r.k;
  j["n"] = r.n;
  j["plateaued"] = true;
  j["s"] = r.s;
  j["bent"] = r.bent();
  j["regularity"] = to_string(r.regularity);
  j["mu_constant"] = r.mu_constant ? Json(to_string(*r.mu_constant)) : Json();
  j["balance"] = r.balance_label();
  j["support_size"] = r.support.size();
  j["table_digest"] = table_digest(f);
  if (parseval) {
    j["parseval_sum"] = *parseval;
    j["parseval_ok"] = *parseval == static_cast<std::int64_t>(ipow(r.p, 2 * r.n));
  }
  j["support"] = r.support;
  j["dual"] = r.dual;
  j["mu"] = mu;
  return j;
}

inline Json not_plateaued_report(const GenFunction& f, const Error& e) {
  Json j;
  j["schema"] = kReportSchema;
  j["p"] = f.p();
  j["k"] = f.k();
  j["n"] = f.n();
  j["plateaued"] = false;
  j["reason"] = e.what();
  j["witness"] = e.witness();
  j["table_digest"] = table_digest(f);
  return j;
}

inline Json to_json(const WalshSpectrum& w) {
  Json values = Json::array();
  for (const auto& v : w.values) values.push_back(v.coeffs());
  Json j;
  j["schema"] = kSpectrumSchema;
  j["p"] = w.space.p();
  j["k"] = w.k;
  j["space"] = to_json(w.space);
  j["table"] = values;
  return j;
}

inline Json error_to_json(const Error& e) {
  return Json{{"error", Json{{"kind", to_string(e.kind())}, {"message", e.what()}, {"witness", e.witness()}}}};
}

}  // namespace plateau
