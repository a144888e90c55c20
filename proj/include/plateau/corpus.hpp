#pragma once

#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>

#include "plateau/jobs.hpp"

namespace plateau {

inline constexpr const char* kReproduceSchema = "plateau-reproduce/1";
inline constexpr int kExampleCount = 11;
inline constexpr std::uint64_t kStoredTableLimit = 59049;  // larger outputs are stored by digest only

inline std::filesystem::path default_corpus_root() {
  if (const char* env = std::getenv("PLATEAU_CORPUS"); env && *env) return env;
#ifdef PLATEAU_DEFAULT_CORPUS
  return PLATEAU_DEFAULT_CORPUS;
#else
  return "corpus";
#endif
}

inline std::filesystem::path example_params_path(const std::filesystem::path& root, int n) {
  return root / "params" / ("ex" + std::to_string(n) + ".json");
}

inline std::filesystem::path example_expected_path(const std::filesystem::path& root, int n) {
  return root / "expected" / ("ex" + std::to_string(n) + ".json");
}

inline std::filesystem::path example_table_path(const std::filesystem::path& root, int n) {
  return root / "expected" / ("ex" + std::to_string(n) + ".table.json");
}

namespace corpus_detail {

inline std::vector<std::uint64_t> affine_set(const SpaceDesc& sp, const Point& t, const std::vector<Point>& basis) {
  std::set<std::uint64_t> pts{sp.lex_index(t)};
  for (const auto& b : basis) {
    const auto bi = sp.lex_index(b);
    std::set<std::uint64_t> next = pts;
    for (auto x : pts) {
      auto y = x;
      for (std::uint32_t c = 1; c < sp.p(); ++c) next.insert(y = sp.add(y, bi));
    }
    pts.swap(next);
  }
  return {pts.begin(), pts.end()};
}

inline Json unit_or_null(const std::optional<Unit>& u) { return u ? Json(to_string(*u)) : Json(); }

}  // namespace corpus_detail

/// Example-specific properties of a built construction.
inline Json example_claims(int n, const Json& params, const ConstructResult& r, const Exec& exec = {}) {
  using namespace corpus_detail;
  Json c = Json::object();
  const auto& f = r.functions.front();
  if (r.report) {
    const auto& rep = *r.report;
    c["plateaued"] = true;
    c["s"] = rep.s;
    c["regularity"] = to_string(rep.regularity);
    c["mu_constant"] = unit_or_null(rep.mu_constant);
    c["support_size"] = rep.support.size();
    c["affine_support"] = is_affine_support(f.p(), f.n(), rep.support);
  }
  if (r.design) c["affine_columns"] = support_matrix_analyze(*r.design).affine_column_count;

  switch (n) {
    case 1:
    case 2: {
      const auto t = params["t"].get<Point>();
      const auto E = points_from_json(f.p(), params["E_basis"]);
      std::vector<Point> basis;
      const auto M = matrix_from_json(f.p(), params["M"]);
      for (const auto& e : E) basis.push_back(M.left_apply(e));
      c["support_is_t_plus_EM"] = affine_set(f.space(), t, basis) == r.report->support;
      break;
    }
    case 3:
      c["bent"] = r.report->bent();
      break;
    case 4:
    case 5:
      c["x2_only"] = r.details["I"];
      [[fallthrough]];
    case 6:
    case 7:
      if (n == 5 || n == 7) {
        c["linear_structures"] = linear_structures(f, exec).size();
        c["support_has_zero_and_basis"] = support_has_zero_and_basis(f.p(), f.n(), r.design->support);
      }
      break;
    case 8:
      break;
    case 9: {
      c["bent"] = r.report->bent();
      c["condition1"] = r.details["condition1"];
      c["condition2"] = r.details["condition2"];
      c["condition3"] = r.details["condition3"];
      c["predicted_weakly_regular"] = r.details["predicted_weakly_regular"];
      Json fr = Json::array();
      for (const auto& e : r.indirect->f_reports) fr.push_back(unit_or_null(e.mu_constant));
      c["f_mu"] = fr;
      const auto g = gmm_line_obstruction(f, exec, f.size());
      c["gmm_lines_checked"] = g.lines_checked;
      c["gmm_obstructed"] = g.obstructed;
      break;
    }
    case 10:
      c["wrp_member"] = r.wrp->member;
      c["wrp_h_exp"] = r.wrp->h_exp ? Json(*r.wrp->h_exp) : Json();
      c["partially_bent"] = partially_bent_test(f, exec);
      c["degree_at_most_two"] = !third_derivative_witness(f).has_value();
      break;
    case 11: {
      const auto& v = *r.vectorial;
      unsigned wr = 0, nwr = 0, plateaued = 0;
      std::set<unsigned> levels;
      for (const auto& e : v.components) {
        if (!e.s) continue;
        ++plateaued;
        levels.insert(*e.s);
        if (e.regularity == Regularity::non_weakly_regular) ++nwr;
        else ++wr;
      }
      c["components"] = v.components.size();
      c["plateaued_components"] = plateaued;
      c["s_levels"] = Json(std::vector<unsigned>(levels.begin(), levels.end()));
      c["weakly_regular_components"] = wr;
      c["non_weakly_regular_components"] = nwr;
      Json fr = Json::array();
      for (const auto& g : r.input_reports) fr.push_back(unit_or_null(g.mu_constant));
      c["f_mu"] = fr;
      break;
    }
    default:
      break;
  }
  return c;
}

struct ReproduceResult {
  Json summary;
  ConstructResult built;
  std::optional<Json> expected;
  std::optional<bool> table_matches;
  bool matches = false;
  std::vector<std::string> mismatched_keys;
};

inline Json reproduce_summary(int n, const ConstructResult& r, const Json& claims) {
  Json outs = Json::array();
  for (const auto& f : r.functions)
    outs.push_back(Json{{"p", f.p()}, {"k", f.k()}, {"n", f.n()}, {"table_digest", table_digest(f)}});
  Json j;
  j["schema"] = kReproduceSchema;
  j["example"] = n;
  j["theorem"] = r.theorem;
  j["functions"] = outs;
  j["claims"] = claims;
  return j;
}

inline ReproduceResult reproduce(int n, const std::filesystem::path& root, const Exec& exec = {},
                                 std::uint64_t max_domain = kDefaultMaxDomain) {
  require(n >= 1 && n <= kExampleCount, ErrorKind::invalid_argument,
          "example number must be in 1.." + std::to_string(kExampleCount));
  const auto ppath = example_params_path(root, n);
  const auto params = read_json_file(ppath);
  const auto limit = std::max<std::uint64_t>(max_domain, params.value("max_domain", std::uint64_t{0}));
  ReproduceResult out;
  out.built = construct(params, ppath.parent_path(), exec, limit);
  out.summary = reproduce_summary(n, out.built, example_claims(n, params, out.built, exec));
  const auto epath = example_expected_path(root, n);
  if (std::filesystem::exists(epath)) {
    out.expected = read_json_file(epath);
    for (const auto& [key, value] : out.summary.items())
      if (!out.expected->contains(key) || (*out.expected)[key] != value) out.mismatched_keys.push_back(key);
    for (const auto& [key, value] : out.expected->items())
      if (!out.summary.contains(key)) out.mismatched_keys.push_back(key);
    out.matches = out.mismatched_keys.empty();
  }
  if (const auto tpath = example_table_path(root, n); std::filesystem::exists(tpath)) {
    out.table_matches = function_from_table_json(read_json_file(tpath)) == out.built.functions.front();
    if (!*out.table_matches) {
      out.matches = false;
      out.mismatched_keys.push_back("table");
    }
  }
  return out;
}

/// Freezes the current summary (and small truth tables) as the expected artifacts.
inline void bless(int n, const std::filesystem::path& root, const ReproduceResult& r) {
  write_json_file(example_expected_path(root, n), r.summary);
  const auto& f = r.built.functions.front();
  if (f.size() <= kStoredTableLimit) write_json_file(example_table_path(root, n), to_json(f));
}

}  // namespace plateau
