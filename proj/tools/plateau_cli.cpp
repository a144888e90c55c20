#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "plateau/corpus.hpp"

using namespace plateau;
namespace fs = std::filesystem;

namespace {

enum Exit : int {
  ok = 0,
  io_error = 2,
  invalid = 3,
  precondition_failed = 4,
  not_plateaued = 5,
  internal_error = 6,
  size_guard_hit = 7,
  reproduce_mismatch = 8,
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::io: return io_error;
    case ErrorKind::precondition:
    case ErrorKind::not_plateau_form: return precondition_failed;
    case ErrorKind::not_plateaued: return not_plateaued;
    case ErrorKind::size_guard: return size_guard_hit;
    case ErrorKind::internal:
    case ErrorKind::inconsistent_spectrum:
    case ErrorKind::overflow: return internal_error;
    default: return invalid;
  }
}

struct Options {
  std::string theorem;
  std::string params;
  std::string input;
  std::string out;
  std::string corpus;
  std::string example = "all";
  unsigned threads = 1;
  std::uint64_t max_domain = kDefaultMaxDomain;
  bool bless = false;
};

void emit(const Options& o, const std::string& name, const Json& j) {
  if (o.out.empty()) {
    std::cout << j.dump(1) << "\n";
    return;
  }
  write_json_file(fs::path(o.out) / name, j);
}

std::string line_for(const Json& rep) {
  std::string s = "p=" + rep["p"].dump() + " k=" + rep["k"].dump() + " n=" + rep["n"].dump();
  if (rep.value("plateaued", false)) {
    s += " plateaued s=" + rep["s"].dump() + " " + rep["regularity"].get<std::string>();
    if (!rep["mu_constant"].is_null()) s += " mu=" + rep["mu_constant"].get<std::string>();
    s += " |S|=" + rep["support_size"].dump();
  } else {
    s += " not plateaued";
  }
  return s;
}

int run_construct(const Options& o) {
  const Exec exec{o.threads};
  auto params = read_json_file(o.params);
  if (!o.theorem.empty()) {
    if (!params.contains("theorem")) params["theorem"] = o.theorem;
    require(params["theorem"] == o.theorem, ErrorKind::invalid_argument,
            "--theorem " + o.theorem + " disagrees with the parameter file (" + params["theorem"].dump() + ")");
  }
  const auto limit = std::max<std::uint64_t>(o.max_domain, params.value("max_domain", std::uint64_t{0}));
  const auto r = construct(params, fs::path(o.params).parent_path(), exec, limit);
  const bool many = r.functions.size() > 1;
  Json summary{{"schema", "plateau-construct/1"}, {"theorem", r.theorem}, {"details", r.details}};
  Json outs = Json::array();
  for (std::size_t i = 0; i < r.functions.size(); ++i) {
    const auto name = many ? "function_" + std::to_string(i + 1) + ".json" : std::string("function.json");
    if (!o.out.empty()) write_json_file(fs::path(o.out) / name, to_json(r.functions[i]));
    outs.push_back(Json{{"file", name}, {"table_digest", table_digest(r.functions[i])}});
  }
  summary["functions"] = outs;
  if (r.design && !o.out.empty()) write_json_file(fs::path(o.out) / "design.json", to_json(*r.design));
  if (!many) {
    const auto v = verify(r.functions.front(), exec, limit);
    auto brief = v.report;
    for (const char* key : {"support", "dual", "mu"}) brief.erase(key);
    summary["report"] = brief;
    if (!o.out.empty()) write_json_file(fs::path(o.out) / "report.json", v.report);
    std::cout << r.theorem << ": " << line_for(v.report) << "\n";
  } else {
    std::cout << r.theorem << ": " << r.functions.size() << " functions, "
              << r.details["components"].size() << " nonzero combinations checked\n";
  }
  emit(o, "construct.json", summary);
  return ok;
}

GenFunction load_input(const Options& o) {
  return function_from_json(read_json_file(o.input), fs::path(o.input).parent_path());
}

int run_verify(const Options& o) {
  const auto f = load_input(o);
  const auto v = verify(f, Exec{o.threads}, o.max_domain);
  emit(o, "report.json", v.report);
  std::cerr << line_for(v.report) << (v.report["parseval_ok"].get<bool>() ? "" : " PARSEVAL FAILED") << "\n";
  if (!v.plateaued) {
    Json err{{"error", Json{{"kind", "not_plateaued"}, {"message", v.report["reason"]}, {"witness", v.report["witness"]}}}};
    std::cerr << err.dump() << "\n";
    return not_plateaued;
  }
  return v.report["parseval_ok"].get<bool>() ? ok : internal_error;
}

int run_analyze(const Options& o) {
  const auto f = load_input(o);
  const auto j = analyze(f, Exec{o.threads}, o.max_domain);
  emit(o, "analysis.json", j);
  std::cerr << "plateaued=" << j["plateaued"].dump();
  if (j.value("plateaued", false)) std::cerr << " regularity=" << j["regularity"].get<std::string>();
  if (j.contains("gmm_lines")) std::cerr << " gmm_obstructed=" << j["gmm_lines"]["obstructed"].dump();
  std::cerr << "\n";
  return ok;
}

int run_spectrum(const Options& o) {
  const auto f = load_input(o);
  require(f.size() <= o.max_domain, ErrorKind::size_guard, "domain exceeds the size guard", {f.size()});
  emit(o, "spectrum.json", to_json(walsh_transform(f, Exec{o.threads})));
  return ok;
}

int run_reproduce(const Options& o) {
  const fs::path root = o.corpus.empty() ? default_corpus_root() : fs::path(o.corpus);
  std::vector<int> which;
  if (o.example == "all") {
    for (int n = 1; n <= kExampleCount; ++n) which.push_back(n);
  } else {
    try {
      which.push_back(std::stoi(o.example));
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "--example must be a number in 1.." + std::to_string(kExampleCount) + " or 'all'");
    }
  }
  int status = ok;
  for (int n : which) {
    const auto r = reproduce(n, root, Exec{o.threads}, o.max_domain);
    if (!o.out.empty()) {
      const auto dir = fs::path(o.out) / ("ex" + std::to_string(n));
      const bool many = r.built.functions.size() > 1;
      for (std::size_t i = 0; i < r.built.functions.size(); ++i)
        write_json_file(dir / (many ? "function_" + std::to_string(i + 1) + ".json" : std::string("function.json")),
                        to_json(r.built.functions[i]));
      if (r.built.report) write_json_file(dir / "report.json", report_to_json(*r.built.report, r.built.functions.front()));
      if (r.built.design) write_json_file(dir / "design.json", to_json(*r.built.design));
      write_json_file(dir / "summary.json", r.summary);
    }
    if (o.bless) {
      bless(n, root, r);
      std::cout << "example " << n << ": blessed\n";
      continue;
    }
    if (!r.expected) {
      std::cout << "example " << n << ": no expected artifact\n";
      status = reproduce_mismatch;
    } else if (r.matches) {
      std::cout << "example " << n << ": ok (" << r.summary["claims"].dump() << ")\n";
    } else {
      std::string keys;
      for (const auto& k : r.mismatched_keys) keys += (keys.empty() ? "" : ", ") + k;
      std::cout << "example " << n << ": MISMATCH in " << keys << "\n";
      status = reproduce_mismatch;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and verify generalized plateaued functions"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory (stdout when omitted)");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--max-domain", o.max_domain, "Largest domain size accepted");
  };

  auto* construct_cmd = app.add_subcommand("construct", "Build a function from a parameter file");
  construct_cmd->add_option("--theorem", o.theorem, "T1..T7, P3 or C3")
      ->check(CLI::IsMember({"T1", "T2", "T3", "T4", "T5", "T6", "T7", "P3", "C3"}));
  construct_cmd->add_option("--params", o.params, "Parameter JSON")->required()->check(CLI::ExistingFile);
  common(construct_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Classify a truth table and check Parseval");
  verify_cmd->add_option("input", o.input, "Function JSON")->required();
  common(verify_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Run every applicable predicate");
  analyze_cmd->add_option("input", o.input, "Function JSON")->required();
  common(analyze_cmd);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Dump the Walsh spectrum");
  spectrum_cmd->add_option("input", o.input, "Function JSON")->required();
  common(spectrum_cmd);

  auto* reproduce_cmd = app.add_subcommand("reproduce", "Rebuild corpus examples and diff against expected");
  reproduce_cmd->add_option("--example", o.example, "Example number or 'all'");
  reproduce_cmd->add_option("--corpus", o.corpus, "Corpus root (default: $PLATEAU_CORPUS)");
  reproduce_cmd->add_flag("--bless", o.bless, "Overwrite the expected artifacts");
  common(reproduce_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*construct_cmd) return run_construct(o);
    if (*verify_cmd) return run_verify(o);
    if (*analyze_cmd) return run_analyze(o);
    if (*spectrum_cmd) return run_spectrum(o);
    if (*reproduce_cmd) return run_reproduce(o);
  } catch (const Error& e) {
    const auto j = error_to_json(e);
    std::cerr << j.dump() << "\n";
    if (!o.out.empty()) {
      try {
        write_json_file(fs::path(o.out) / "error.json", j);
      } catch (const Error&) {
      }
    }
    return exit_code(e.kind());
  } catch (const Json::exception& e) {
    std::cerr << error_to_json(Error(ErrorKind::invalid_argument, std::string("malformed JSON: ") + e.what())).dump()
              << "\n";
    return invalid;
  }
  return internal_error;
}
