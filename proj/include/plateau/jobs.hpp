#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "plateau/analysis.hpp"
#include "plateau/builders.hpp"
#include "plateau/io.hpp"
#include "plateau/spectral_design.hpp"

namespace plateau {

inline constexpr std::uint64_t kDefaultMaxDomain = 531441;  // 3^12
inline constexpr const char* kAnalysisSchema = "plateau-analysis/1";

struct ConstructResult {
  std::string theorem;
  std::vector<GenFunction> functions;  // main output first
  std::optional<SpectralDesign> design;
  std::optional<PlateauReport> report;  // of functions[0]
  Json details = Json::object();
  // kept for example-level checks
  std::optional<IndirectSum> indirect;
  std::optional<Cor2Prediction> prediction;
  std::optional<Thm7Result> vectorial;
  std::optional<WrpResult> wrp;
  std::vector<PlateauReport> input_reports;
};

namespace jobs_detail {

inline void guard(std::uint64_t size, std::uint64_t max_domain) {
  require(size <= max_domain, ErrorKind::size_guard,
          "output domain of " + std::to_string(size) + " points exceeds the size guard of " +
              std::to_string(max_domain) + " (raise --max-domain)",
          {size});
}

inline PSapBentSpec psap_from_json(const Json& j) {
  using namespace io_detail;
  const auto F = field_from_json(at(j, "field"));
  PSapBentSpec spec{F, elems_from_json(F, at(j, "alpha")), perm_from_json(F, j.value("G", Json()))};
  spec.validate();
  return spec;
}

inline Json units_json(const std::vector<Unit>& us) {
  Json a = Json::array();
  for (auto u : us) a.push_back(to_string(u));
  return a;
}

inline void indirect_details(ConstructResult& out, const IndirectSumSpec& S, IndirectSum sum) {
  const bool u_const = std::all_of(sum.u.begin(), sum.u.end(), [&](Unit x) { return x == sum.u.front(); });
  out.details["u_constant"] = u_const ? Json(to_string(sum.u.front())) : Json();
  Json fr = Json::array();
  for (const auto& r : sum.f_reports)
    fr.push_back(Json{{"s", r.s},
                      {"regularity", to_string(r.regularity)},
                      {"mu_constant", r.mu_constant ? Json(to_string(*r.mu_constant)) : Json()}});
  out.details["f"] = fr;
  if (sum.report.bent()) {
    auto pred = corollary2_dual_and_regularity(S, sum);
    out.details["dual_prediction_verified"] = true;
    out.details["condition1"] = pred.condition1;
    out.details["condition2"] = pred.condition2;
    out.details["condition3"] = pred.condition3;
    out.details["predicted_weakly_regular"] = pred.predicted_weakly_regular;
    out.prediction = std::move(pred);
  }
  out.functions = {sum.h};
  out.report = sum.report;
  out.indirect = std::move(sum);
}

}  // namespace jobs_detail

/// Builds the construction named by params["theorem"]; base resolves file references.
inline ConstructResult construct(const Json& params, const std::filesystem::path& base, const Exec& exec = {},
                                 std::uint64_t max_domain = kDefaultMaxDomain) {
  using namespace io_detail;
  using namespace jobs_detail;
  ConstructResult out;
  out.theorem = get<std::string>(params, "theorem");
  const auto& th = out.theorem;

  if (th == "T1") {
    AffineSupportSpec spec;
    spec.g = function_from_json(at(params, "g"), base);
    const auto p = spec.g.p();
    spec.M = matrix_from_json(p, at(params, "M"));
    spec.E_basis = points_from_json(p, at(params, "E_basis"));
    spec.t = params.contains("t") ? params["t"].get<Point>() : Point(spec.M.rows(), 0);
    guard(ipow(p, spec.M.cols()), max_domain);
    auto r = theorem1_construct(spec, exec);
    out.details["E_size"] = r.E.elements.size();
    out.functions = {r.f};
    out.design = r.design;
    out.report = r.report;
  } else if (th == "T2") {
    Thm2Params P;
    P.k = get<unsigned>(params, "k");
    P.ctx = field_from_json(at(params, "field"));
    const auto& F = P.ctx;
    const auto V = detail::field_square(F);
    P.alphas = elems_from_json(F, at(params, "alpha"));
    P.pi = perm_from_json(F, params.value("pi", Json()));
    P.g = params.contains("g") && !params["g"].is_null() ? function_from_json(params["g"], base)
                                                         : GenFunction::constant(SpaceDesc::fld(F), P.k, 0);
    for (const auto& t : at(params, "t")) {
      Thm2T ti;
      ti.c = get_or<std::vector<std::uint32_t>>(t, "c", std::vector<std::uint32_t>(F.m() - 1, 0));
      if (t.contains("g") && !t["g"].is_null()) {
        auto gi = function_from_json(t["g"], base);
        require(gi.space() == SpaceDesc::fld(F) && gi.k() == 1, ErrorKind::invalid_argument,
                "t_i.g must be a p-ary function on the field");
        ti.gi = gi.table();
      } else {
        ti.gi.assign(F.size(), 0);
      }
      ti.A = affine_from_json(V, t.value("A", Json()));
      P.ts.push_back(std::move(ti));
    }
    const unsigned s = static_cast<unsigned>(P.ts.size());
    for (const auto& h : at(params, "h")) {
      Thm2H hj;
      hj.d = get_or<std::vector<std::uint32_t>>(h, "d", std::vector<std::uint32_t>(s, 0));
      hj.F = poly_from_json(h.value("F", Json()), s);
      hj.L = affine_from_json(V, at(h, "L"));
      P.hs.push_back(std::move(hj));
    }
    guard(ipow(F.p(), s + 2 * F.m()), max_domain);
    auto r = theorem2_build(P, exec);
    Json I = Json::array();
    for (auto i : r.x2_only) I.push_back(i + 1);
    out.details["I"] = I;
    out.functions = {r.f};
    out.design = r.design;
    out.report = r.report;
  } else if (th == "T3") {
    Thm3Params P;
    P.g = function_from_json(at(params, "g"), base);
    P.k = get<unsigned>(params, "k");
    const unsigned t = P.g.k();
    require(t >= 2, ErrorKind::invalid_argument, "g must take values in Z_{p^t} with t >= 2");
    P.G = poly_from_json(params.value("G", Json()), t - 1);
    for (const auto& f : params.value("F", Json::array())) P.F.push_back(poly_from_json(f, t - 1));
    const unsigned s = static_cast<unsigned>(P.F.size());
    for (const auto& h : at(params, "H")) P.H.push_back(poly_from_json(h, s));
    for (const auto& l : at(params, "L")) P.L.push_back(affine_from_json(P.g.space(), l));
    guard(ipow(P.g.p(), s + P.g.n()), max_domain);
    auto r = theorem3_build(P, exec);
    out.functions = {r.f};
    out.design = r.design;
    out.report = r.report;
  } else if (th == "T4") {
    Thm4Params P;
    P.g = functions_from_json(at(params, "g"), base);
    const auto& V = P.g.front().space();
    for (const auto& t : params.value("t", Json::array()))
      P.ts.push_back({get<std::vector<std::uint32_t>>(t, "c"), affine_from_json(V, t.value("A", Json()))});
    const unsigned s = static_cast<unsigned>(P.ts.size());
    for (const auto& h : at(params, "h"))
      P.hs.push_back(
          {get_or<std::vector<std::uint32_t>>(h, "d", std::vector<std::uint32_t>(s, 0)), affine_from_json(V, at(h, "L"))});
    guard(ipow(V.p(), s + V.n()), max_domain);
    auto r = theorem4_build(P, exec);
    out.functions = {r.f};
    out.design = r.design;
    out.report = r.report;
  } else if (th == "T5" || th == "C3") {
    IndirectSumSpec S;
    S.f_family = functions_from_json(at(params, "f"), base);
    if (th == "T5") {
      S.g_list = functions_from_json(at(params, "g"), base);
    } else {
      Cor3Spec C{psap_from_json(params), S.f_family, {}};
      S = corollary3_spec(C);
    }
    require(S.g_list.size() >= 2, ErrorKind::invalid_argument, "need g_0, ..., g_t with t >= 1");
    const unsigned t = static_cast<unsigned>(S.g_list.size() - 1);
    S.g_outer = outer_from_json(params.value("g_outer", Json()), S.g_list.front().p(), t, S.f_family.front().k());
    guard(S.f_family.front().size() * S.g_list.front().size(), max_domain);
    auto sum = theorem5_build(S, exec);
    indirect_details(out, S, std::move(sum));
  } else if (th == "T6") {
    Thm6Params P;
    P.g = psap_from_json(params);
    const auto p = P.g.ctx.p();
    std::uint64_t vr = 0;
    if (params.contains("eq22")) {
      for (const auto& e : params["eq22"]) {
        Eq22Spec spec{function_from_json(at(e, "b"), base), matrix_from_json(p, at(e, "M")),
                      points_from_json(p, at(e, "E_basis"))};
        vr = ipow(p, spec.M.cols());
        P.eq22.push_back(std::move(spec));
      }
    } else {
      P.f_family = functions_from_json(at(params, "f"), base);
      vr = P.f_family.front().size();
    }
    const unsigned t = static_cast<unsigned>(P.g.alphas.size() - 1);
    P.g_outer = outer_from_json(params.value("g_outer", Json()), p, t, 1);
    guard(vr * P.g.ctx.size() * P.g.ctx.size(), max_domain);
    auto r = theorem6_wrp_build(P, exec);
    out.details["wrp_member"] = r.wrp.member;
    out.details["h_exp"] = r.wrp.h_exp ? Json(*r.wrp.h_exp) : Json();
    out.wrp = r.wrp;
    out.functions = {r.sum.h};
    out.report = r.sum.report;
    out.indirect = std::move(r.sum);
  } else if (th == "T7") {
    Thm7Params P{psap_from_json(params), functions_from_json(at(params, "f"), base)};
    guard(P.f.front().size() * P.g.ctx.size() * P.g.ctx.size(), max_domain);
    auto r = theorem7_vectorial_build(P, exec);
    for (const auto& f : P.f) out.input_reports.push_back(classify(f, exec));
    Json comps = Json::array();
    for (const auto& e : r.components)
      comps.push_back(Json{{"a", e.a}, {"s", e.s ? Json(*e.s) : Json()}, {"regularity", to_string(e.regularity)}});
    out.details["components"] = comps;
    out.details["s"] = r.s;
    out.details["r"] = r.r;
    out.functions = r.H;
    out.vectorial = std::move(r);
  } else if (th == "P3") {
    Prop3Params P;
    P.f_family = functions_from_json(at(params, "f"), base);
    const auto p = P.f_family.front().p();
    P.M = matrix_from_json(p, at(params, "M"));
    P.pi = points_from_json(p, at(params, "pi"));
    guard(ipow(p, P.M.cols()), max_domain);
    auto r = prop3_glue(P, exec);
    out.functions = {r.F};
    out.report = r.report;
  } else {
    fail(ErrorKind::invalid_argument, "unknown theorem id '" + th + "' (expected T1..T7, P3 or C3)");
  }
  return out;
}

struct VerifyResult {
  bool plateaued = false;
  Json report;
  std::optional<PlateauReport> plateau;
};

/// Classification plus the Parseval check.
inline VerifyResult verify(const GenFunction& f, const Exec& exec = {}, std::uint64_t max_domain = kDefaultMaxDomain) {
  jobs_detail::guard(f.size(), max_domain);
  const auto w = walsh_transform(f, exec);
  const auto ps = parseval_sum(w);
  try {
    auto rep = classify(w, exec);
    auto j = report_to_json(rep, f, ps);
    return {true, std::move(j), std::move(rep)};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_plateaued) throw;
    auto j = not_plateaued_report(f, e);
    j["parseval_sum"] = ps;
    j["parseval_ok"] = ps == static_cast<std::int64_t>(ipow(f.p(), 2 * f.n()));
    return {false, std::move(j), std::nullopt};
  }
}

/// Every predicate that applies to f, with witnesses.
inline Json analyze(const GenFunction& f, const Exec& exec = {}, std::uint64_t max_domain = kDefaultMaxDomain) {
  jobs_detail::guard(f.size(), max_domain);
  Json j;
  j["schema"] = kAnalysisSchema;
  j["p"] = f.p();
  j["k"] = f.k();
  j["n"] = f.n();
  j["table_digest"] = table_digest(f);
  const auto rep = try_classify(f, exec);
  j["plateaued"] = rep.has_value();
  if (rep) {
    j["s"] = rep->s;
    j["regularity"] = to_string(rep->regularity);
    j["mu_constant"] = rep->mu_constant ? Json(to_string(*rep->mu_constant)) : Json();
    j["balance"] = rep->balance_label();
    j["support_size"] = rep->support.size();
    j["affine_support"] = is_affine_support(f.p(), f.n(), rep->support);
    j["support_has_zero_and_basis"] = support_has_zero_and_basis(f.p(), f.n(), rep->support);
    // field components are read through their coordinates with the dot product
    const bool standard = f.space().standard();
    const auto sm = standard ? support_matrix_analyze(f.p(), f.n(), SpaceDesc::vec(f.p(), f.n() - rep->s), rep->support)
                             : support_matrix_analyze(f.with_space(SpaceDesc::vec(f.p(), f.n())), exec);
    j["support_matrix"] = Json{{"coordinate_view", !standard},
                               {"columns", sm.matrix.columns.size()},
                               {"affine_columns", sm.affine_column_count},
                               {"column_affine", sm.column_affine}};
  }
  const auto ls = linear_structures(f, exec);
  j["linear_structures"] = Json{{"count", ls.size()}, {"points", ls}};
  if (f.k() == 1) j["partially_bent"] = partially_bent_test(f, exec);
  const auto w3 = third_derivative_witness(f);
  j["degree_at_most_two"] = !w3.has_value();
  j["third_derivative_witness"] =
      w3 ? Json{{"directions", w3->directions}, {"point", w3->point}} : Json();
  if (f.p() % 2 == 1 && f.k() == 1) {
    const auto w = wrp_membership(f, exec);
    j["wrp"] = Json{{"member", w.member}, {"h_exp", w.h_exp ? Json(*w.h_exp) : Json()}, {"reason", w.reason}};
  }
  if (f.k() == 1 && f.size() <= max_domain) {
    const auto g = gmm_line_obstruction(f, exec, max_domain);
    j["gmm_lines"] = Json{{"obstructed", g.obstructed},
                          {"lines_checked", g.lines_checked},
                          {"surviving_lines", g.surviving_lines}};
  }
  return j;
}

}  // namespace plateau
