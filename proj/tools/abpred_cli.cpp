// Copyright 2026 The abpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// abpred: construct, transform, verify and export ABPs and formulas.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage, parse or
// precondition error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abpred/abpred.hpp"

namespace {

using nlohmann::json;
using namespace abpred;

constexpr std::uint64_t kDefaultSeed = 20260101;
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::string& path) {
  auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, path + ": " + e.what());
  }
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::string sibling_path(const std::string& out, const std::string& tag) {
  const std::string ext = ".json";
  std::string stem = out;
  if (stem.size() > ext.size() && stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) {
    stem.resize(stem.size() - ext.size());
  }
  return stem + "." + tag + ".json";
}

// ---------------------------------------------------------------- documents

template <Field F>
UnlayeredAbp<F> load_unlayered(const F& field, const json& doc) {
  auto h = read_header(doc);
  if (h.kind == "unlayered") return unlayered_from_json(field, doc);
  if (h.kind == "layered") return layered_from_json(field, doc).dag();
  if (h.kind == "multilayered") return multilayered_from_json(field, doc).to_unlayered();
  throw ParseError(0, "expected an ABP document, got '" + h.kind + "'");
}

/// Polynomial computed by any ABP, formula or polynomial document.
template <Field F>
SparsePoly<F> document_polynomial(const F& field, const json& doc) {
  auto h = read_header(doc);
  if (h.kind == "formula") return expand(formula_document_from_json(field, doc));
  if (h.kind == "poly") return poly_document_from_json(field, doc);
  return computed_polynomial(load_unlayered(field, doc));
}

/// Re-serializes a document through the library types.
template <Field F>
json reserialize(const F& field, const json& doc) {
  auto h = read_header(doc);
  if (h.kind == "unlayered") return to_json(unlayered_from_json(field, doc));
  if (h.kind == "layered") return to_json(layered_from_json(field, doc));
  if (h.kind == "multilayered") return to_json(multilayered_from_json(field, doc));
  if (h.kind == "formula") return to_json(formula_document_from_json(field, doc));
  if (h.kind == "poly") return to_json(poly_document_from_json(field, doc));
  if (h.kind == "ledger") return to_json(ledger_document_from_json(field, doc));
  throw ParseError(0, "unknown document kind '" + h.kind + "'");
}

json report_json(const CheckReport& r, std::uint64_t seed) {
  auto j = r.to_json();
  j["seed"] = seed;
  return j;
}

// ---------------------------------------------------------------- transforms

struct TransformParams {
  std::string pipeline;
  std::optional<std::int64_t> target;
  std::optional<double> ambient_n;
  std::optional<int> delta;
  std::optional<std::int64_t> degree_bound;
  std::uint64_t seed = kDefaultSeed;

  json to_json() const {
    json j{{"pipeline", pipeline}, {"seed", seed}};
    j["target"] = target ? json(*target) : json(nullptr);
    j["n"] = ambient_n ? json(*ambient_n) : json(nullptr);
    j["delta"] = delta ? json(*delta) : json(nullptr);
    j["degree_bound"] = degree_bound ? json(*degree_bound) : json(nullptr);
    return j;
  }

  static TransformParams from_json(const json& j) {
    TransformParams p;
    p.pipeline = j.at("pipeline").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("target").is_null()) p.target = j.at("target").get<std::int64_t>();
    if (!j.at("n").is_null()) p.ambient_n = j.at("n").get<double>();
    if (!j.at("delta").is_null()) p.delta = j.at("delta").get<int>();
    if (!j.at("degree_bound").is_null()) p.degree_bound = j.at("degree_bound").get<std::int64_t>();
    return p;
  }
};

struct TransformArtifacts {
  json output;
  json ledger;
  json report;
  bool pass = true;
};

template <Field F>
TransformArtifacts run_transform(const F& field, const json& input, const TransformParams& params) {
  const auto header = read_header(input);
  const Ring<F> ring{field, header.variables};
  TransformArtifacts out;
  SparsePoly<F> f_in(ring);
  SparsePoly<F> f_out(ring);
  ErrorLedger<F> ledger(ring);
  json report;

  auto need_target = [&]() -> std::int64_t {
    if (!params.target) throw UsageError(params.pipeline + " needs --target");
    return *params.target;
  };

  if (params.pipeline == "reduce-layers") {
    const auto target = need_target();
    if (target < 1) throw UsageError("--target must be positive");
    auto abp = multilayered_from_json(field, input);
    auto r = reduce_layers_below(abp, static_cast<std::size_t>(target));
    f_in = computed_polynomial(abp);
    f_out = computed_polynomial(r.abp);
    out.output = to_json(r.abp);
    ledger = std::move(r.ledger);
    report = r.report.to_json();
  } else if (params.pipeline == "depth-reduce-unlayered") {
    auto abp = load_unlayered(field, input);
    const double n = params.ambient_n.value_or(static_cast<double>(header.variables));
    const int delta = params.delta.value_or(abp.label_degree_bound());
    auto r = depth_reduce_full(abp, n, delta);
    f_in = computed_polynomial(abp);
    f_out = computed_polynomial(r.abp);
    out.output = to_json(r.abp);
    ledger = std::move(r.ledger);
    report = r.report.to_json();
    report["cut_vertices"] = r.cut_vertices;
  } else if (params.pipeline == "decompose-formula") {
    auto f = formula_document_from_json(field, input);
    auto dec = decompose_formula(f, params.degree_bound);
    f_in = expand(f);
    f_out = expand(dec.reduced);
    out.output = to_json(dec.reduced);
    ledger = std::move(dec.ledger);
    report = {{"pipeline", "decompose-formula"},
              {"summary",
               {{"degree_bound", dec.degree_bound},
                {"threshold", dec.threshold},
                {"input_size", dec.input_size},
                {"output_size", formula_size(dec.reduced)},
                {"formal_degree_out", formal_degree(dec.reduced)},
                {"pair_count", dec.pair_count},
                {"extracted", dec.extracted},
                {"extracted_formal_degree", dec.extracted_formal_degree},
                {"pair_degrees", dec.pair_degrees},
                {"disjoint", dec.disjoint}}}};
  } else if (params.pipeline == "reduce-formula-degree") {
    const auto target = need_target();
    auto f = formula_document_from_json(field, input);
    auto r = reduce_formula_degree(f, target);
    f_in = expand(f);
    f_out = expand(r.formula);
    out.output = to_json(r.formula);
    ledger = std::move(r.ledger);
    report = r.report.to_json();
  } else {
    throw UsageError("unknown pipeline '" + params.pipeline + "'");
  }

  const Degree cap = std::max<Degree>(0, static_cast<Degree>(header.variables) - 1);
  auto check = check_ledger(f_in, f_out, ledger, cap);
  out.pass = check.pass;
  out.ledger = to_json(ledger);
  report["params"] = params.to_json();
  report["seed"] = params.seed;
  report["field"] = field.describe();
  report["ledger_check"] = check.to_json();
  report["pass"] = check.pass;
  out.report = std::move(report);
  return out;
}

TransformArtifacts run_transform(const json& input, const TransformParams& params) {
  auto h = read_header(input);
  return with_field(h.field, [&](const auto& field) { return run_transform(field, input, params); });
}

// ---------------------------------------------------------------- verify

std::vector<SparsePoly<RationalField>> random_perturbations(std::size_t n, std::uint32_t big_d, std::mt19937_64& rng) {
  RationalField field;
  Ring<RationalField> ring{field, n};
  std::vector<Monomial> monomials;
  Monomial m(n, 0);
  // Every monomial of degree at most D - 1, by odometer over exponents.
  while (true) {
    if (monomial_degree(m) <= static_cast<Degree>(big_d) - 1) monomials.push_back(m);
    std::size_t i = 0;
    while (i < n && m[i] + 1 > big_d - 1) m[i++] = 0;
    if (i == n) break;
    ++m[i];
  }
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::vector<SparsePoly<RationalField>> g;
  for (std::size_t i = 0; i < n; ++i) {
    SparsePoly<RationalField> gi(ring);
    for (const auto& mono : monomials) gi.add_term(mono, field.from_int(coeff(rng)));
    g.push_back(std::move(gi));
  }
  return g;
}

std::vector<std::uint64_t> parse_primes(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw UsageError("malformed prime list '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("--primes must list at least one prime");
  return out;
}

struct Options {
  std::string field = "p=101";
  std::size_t n = 3;
  int delta = 1;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t budget = 0;
  std::string out;
  std::uint32_t k = 3;
  std::size_t d = 2;
  std::uint64_t p = 5;
  std::optional<std::int64_t> target;
  std::optional<double> ambient_n;
  std::optional<std::int64_t> degree_bound;
  std::string form = "abp";
  std::string input;
  std::string output;
  std::string ledger;
  std::string report;
  std::string expect;
  std::string poly_text;
  std::string primes = "5,7,11,13";
  std::size_t samples = 5;
  bool highlight = false;
};

int finish(const json& report, const std::string& out) {
  write_text(out, render(report));
  return report.value("pass", false) ? kExitPass : kExitFail;
}

int cmd_construct(const std::string& kind, const Options& o) {
  auto cfg = FieldConfig::parse(o.field);
  json doc = with_field(cfg, [&](const auto& field) -> json {
    if (kind == "powersum") {
      if (o.form == "abp") return to_json(power_sum_abp(field, o.n, o.k, o.delta));
      if (o.form == "formula") return to_json(power_sum_formula(field, o.n, o.k));
      if (o.form == "poly") return to_json(power_sum_poly(field, o.n, o.k));
      throw UsageError("--form must be abp, formula or poly");
    }
    if (kind == "esym-brute") return to_json(esym_brute(field, o.n, o.d));
    if (kind == "esym-benor") return to_json(esym_ben_or_formula(field, o.n, o.d));
    throw UsageError("unknown construction '" + kind + "'");
  });
  write_text(o.out, render(doc));
  return kExitPass;
}

int cmd_transform(const std::string& pipeline, const Options& o) {
  if (o.input.empty()) throw UsageError("transform needs --input");
  if (o.out.empty()) throw UsageError("transform needs --out");
  TransformParams params{pipeline, o.target, o.ambient_n, std::nullopt, o.degree_bound, o.seed};
  if (o.delta != 1) params.delta = o.delta;
  auto artifacts = run_transform(read_json(o.input), params);
  write_text(o.out, render(artifacts.output));
  write_text(o.ledger.empty() ? sibling_path(o.out, "ledger") : o.ledger, render(artifacts.ledger));
  write_text(o.report.empty() ? sibling_path(o.out, "report") : o.report, render(artifacts.report));
  return artifacts.pass ? kExitPass : kExitFail;
}

CheckReport verify_transform(const Options& o) {
  for (const auto* path : {&o.input, &o.output, &o.ledger, &o.report}) {
    if (path->empty()) throw UsageError("verify transform needs --input, --output, --ledger and --report");
  }
  const json input = read_json(o.input);
  const std::string output_text = read_file(o.output);
  const std::string ledger_text = read_file(o.ledger);
  const std::string report_text = read_file(o.report);
  const json saved_report = read_json(o.report);
  auto params = TransformParams::from_json(saved_report.at("params"));

  CheckReport r{"transform", {{"pipeline", params.pipeline}, {"params", params.to_json()}}, true, {}, {}, {}};
  auto redo = run_transform(input, params);
  const bool output_same = render(redo.output) == output_text;
  const bool ledger_same = render(redo.ledger) == ledger_text;
  const bool report_same = render(redo.report) == report_text;
  if (!output_same) r.fail("recomputed output differs from " + o.output);
  if (!ledger_same) r.fail("recomputed ledger differs from " + o.ledger);
  if (!report_same) r.fail("recomputed report differs from " + o.report);

  // Exact reconstruction from the files alone.
  auto h = read_header(input);
  bool exact = with_field(h.field, [&](const auto& field) {
    auto f_in = document_polynomial(field, input);
    auto f_out = document_polynomial(field, json::parse(output_text));
    auto ledger = ledger_document_from_json(field, json::parse(ledger_text));
    const Degree cap = std::max<Degree>(0, static_cast<Degree>(h.variables) - 1);
    auto check = check_ledger(f_in, f_out, ledger, cap);
    for (const auto& f : check.failures) r.fail("ledger: " + f);
    return check.pass;
  });
  if (!redo.pass) r.fail("recomputed pipeline fails its own ledger check");
  r.counters = {{"output_identical", output_same},
                {"ledger_identical", ledger_same},
                {"report_identical", report_same},
                {"reconstruction_exact", exact}};
  return r;
}

CheckReport verify_ledger(const Options& o) {
  if (o.input.empty() || o.output.empty() || o.ledger.empty()) {
    throw UsageError("verify ledger needs --input, --output and --ledger");
  }
  const json input = read_json(o.input);
  auto h = read_header(input);
  return with_field(h.field, [&](const auto& field) {
    auto f_in = document_polynomial(field, input);
    auto f_out = document_polynomial(field, read_json(o.output));
    auto ledger = ledger_document_from_json(field, read_json(o.ledger));
    const Degree cap = o.degree_bound.value_or(std::max<Degree>(0, static_cast<Degree>(h.variables) - 1));
    return check_ledger(f_in, f_out, ledger, cap);
  });
}

CheckReport verify_computes(const Options& o) {
  if (o.input.empty() || o.expect.empty()) throw UsageError("verify computes needs --input and --expect");
  const json input = read_json(o.input);
  auto h = read_header(input);
  CheckReport r{"computes", {{"input", o.input}, {"expect", o.expect}}, true, {}, {}, {}};
  with_field(h.field, [&](const auto& field) {
    using Fld = std::decay_t<decltype(field)>;
    Ring<Fld> ring{field, h.variables};
    auto expected = parse_poly(ring, o.expect);
    auto computed = document_polynomial(field, input);
    r.counters["computed"] = to_text(computed);
    if (!(computed == expected)) r.fail("computed polynomial " + to_text(computed) + " differs from the expected one");
    if (h.kind == "unlayered" || h.kind == "layered" || h.kind == "multilayered") {
      auto abp = load_unlayered(field, input);
      auto brute = brute_force_paths(abp, abp.source(), abp.sink(), o.budget ? o.budget : kDefaultPathBudget);
      const bool agree = brute == computed;
      r.counters["brute_force_agrees"] = agree;
      if (!agree) r.fail("explicit path enumeration disagrees with the path-sum recurrence");
      auto problems = validate(abp);
      for (const auto& p : problems) r.fail("invalid ABP: " + p);
    }
  });
  return r;
}

CheckReport verify_roundtrip(const Options& o) {
  if (o.input.empty()) throw UsageError("verify roundtrip needs --input");
  const json input = read_json(o.input);
  auto h = read_header(input);
  CheckReport r{"roundtrip", {{"input", o.input}}, true, {}, {}, {}};
  json again = with_field(h.field, [&](const auto& field) { return reserialize(field, input); });
  json twice = with_field(h.field, [&](const auto& field) { return reserialize(field, again); });
  r.counters = {{"identical", again == input}, {"stable", again == twice}};
  if (again != input) r.fail("re-imported document differs from the file");
  if (again != twice) r.fail("serialization is not stable under a second round trip");
  return r;
}

CheckReport verify_euler(const Options& o) {
  std::string text = o.poly_text;
  if (text.empty() && o.input.empty()) throw UsageError("verify euler needs --poly or --input");
  auto cfg = FieldConfig::parse(o.field);
  std::optional<json> doc;
  if (text.empty()) {
    doc = read_json(o.input);
    cfg = read_header(*doc).field;
  }
  CheckReport r{"euler", {{"field", cfg.describe()}}, true, {}, {}, {}};
  with_field(cfg, [&](const auto& field) {
    using Fld = std::decay_t<decltype(field)>;
    SparsePoly<Fld> a = doc ? document_polynomial(field, *doc) : parse_poly(Ring<Fld>{field, o.n}, text);
    r.params["polynomial"] = to_text(a);
    auto e = euler_check(a);
    r.counters = {{"degree", e.degree}, {"holds", e.holds}, {"degenerate", e.degenerate}};
    if (e.degenerate) r.warnings.push_back("the characteristic divides the degree, so both sides vanish");
    if (!e.holds) r.fail("sum x_i dA/dx_i differs from t*A");
  });
  return r;
}

CheckReport verify_esym_identity(const Options& o) {
  auto cfg = FieldConfig::parse(o.field);
  CheckReport r{"esym-identity", {{"n", o.n}, {"d", o.d}, {"field", cfg.describe()}}, true, {}, {}, {}};
  with_field(cfg, [&](const auto& field) {
    auto per = esym_derivative_identity_check(field, o.n, o.d);
    bool summed = esym_summed_identity_check(field, o.n, o.d);
    r.counters = {{"per_variable_holds", per.holds}, {"failing_variables", per.failing}, {"summed_holds", summed}};
    if (!per.holds) r.fail("per-variable derivative identity fails");
    if (!summed) r.fail("summed derivative identity fails");
  });
  return r;
}

CheckReport verify_benor(const Options& o) {
  auto cfg = FieldConfig::parse(o.field);
  CheckReport r{"benor", {{"n", o.n}, {"d", o.d}, {"field", cfg.describe()}}, true, {}, {}, {}};
  with_field(cfg, [&](const auto& field) {
    auto f = esym_ben_or_formula(field, o.n, o.d);
    const bool equal = expand(f) == esym_brute(field, o.n, o.d);
    const auto leaves = variable_leaves(f, f.root()).size();
    r.counters = {{"expansion_equal", equal}, {"variable_leaves", leaves}, {"size", formula_size(f)}};
    if (!equal) r.fail("expansion differs from the brute-force esym");
    if (leaves != o.n * (o.n + 1)) r.fail("variable-leaf count is not n(n+1)");
  });
  return r;
}

int cmd_verify(const std::string& check, const Options& o) {
  const std::uint64_t budget = o.budget ? o.budget : kDefaultPointBudget;
  CheckReport r;
  if (check == "esym-singular") {
    r = singular_support_esym(o.n, o.d, o.p, budget);
  } else if (check == "esym-singular-perturbed") {
    r = singular_support_esym_perturbed(o.n, o.d, o.p, o.seed, budget);
  } else if (check == "powersum-singular") {
    std::mt19937_64 rng(o.seed);
    auto primes = parse_primes(o.primes);
    r = CheckReport{"powersum-singular", {{"n", o.n}, {"D", o.k}, {"primes", primes}, {"samples", o.samples}},
                    true, {}, {}, {}};
    json runs = json::array();
    for (std::size_t s = 0; s < o.samples; ++s) {
      auto run = power_sum_singular_check(o.n, o.k, random_perturbations(o.n, o.k, rng), primes, budget);
      if (!run.pass) {
        for (const auto& f : run.failures) r.fail(f);
      }
      if (r.warnings.empty()) r.warnings = run.warnings;
      runs.push_back({{"g", run.params.at("g")}, {"counters", run.counters}, {"pass", run.pass}});
    }
    r.counters = {{"runs", runs}};
  } else if (check == "transform") {
    r = verify_transform(o);
  } else if (check == "ledger") {
    r = verify_ledger(o);
  } else if (check == "computes") {
    r = verify_computes(o);
  } else if (check == "roundtrip") {
    r = verify_roundtrip(o);
  } else if (check == "euler") {
    r = verify_euler(o);
  } else if (check == "esym-identity") {
    r = verify_esym_identity(o);
  } else if (check == "benor") {
    r = verify_benor(o);
  } else {
    throw UsageError("unknown check '" + check + "'");
  }
  return finish(report_json(r, o.seed), o.out);
}

int cmd_export_dot(const Options& o) {
  if (o.input.empty()) throw UsageError("export-dot needs --input");
  const json input = read_json(o.input);
  auto h = read_header(input);
  std::string dot = with_field(h.field, [&](const auto& field) -> std::string {
    DotHighlight mark;
    if (o.highlight) {
      auto abp = load_unlayered(field, input);
      const double n = o.ambient_n.value_or(static_cast<double>(h.variables));
      auto round = depth_reduce_once(abp, n);
      mark.vertices.insert(round.cut_vertices.begin(), round.cut_vertices.end());
      mark.edges.insert(round.removed_edges.begin(), round.removed_edges.end());
    }
    if (h.kind == "layered") return to_dot(layered_from_json(field, input), mark);
    if (h.kind == "multilayered") return to_dot(multilayered_from_json(field, input), mark);
    return to_dot(load_unlayered(field, input), mark);
  });
  write_text(o.out, dot);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abpred: algebraic branching program and formula transformations"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--field", o.field, "p=<prime> or rational")->capture_default_str();
    cmd->add_option("--n", o.n, "number of variables")->capture_default_str();
    cmd->add_option("--delta", o.delta, "label degree bound")->capture_default_str();
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--budget", o.budget, "enumeration budget (0 = default)");
    cmd->add_option("--out", o.out, "output file (stdout if omitted)");
  };

  std::string what;
  auto* construct = app.add_subcommand("construct", "build a hard polynomial as an ABP, formula or polynomial");
  construct->add_option("kind", what, "powersum | esym-brute | esym-benor")
      ->required()
      ->check(CLI::IsMember({"powersum", "esym-brute", "esym-benor"}));
  add_common(construct);
  construct->add_option("--k", o.k, "power-sum exponent");
  construct->add_option("--d", o.d, "esym degree");
  construct->add_option("--form", o.form, "powersum output: abp | formula | poly")->capture_default_str();

  auto* transform = app.add_subcommand("transform", "run a reduction pipeline");
  transform->add_option("pipeline", what, "reduce-layers | depth-reduce-unlayered | decompose-formula | reduce-formula-degree")
      ->required()
      ->check(CLI::IsMember({"reduce-layers", "depth-reduce-unlayered", "decompose-formula", "reduce-formula-degree"}));
  add_common(transform);
  transform->add_option("--input", o.input, "input document")->required();
  transform->add_option("--target", o.target, "target layer count or formal degree");
  transform->add_option("--ambient-n", o.ambient_n, "ambient n for depth reduction (default: variable count)");
  transform->add_option("--degree-bound", o.degree_bound, "degree bound d for decompose-formula");
  transform->add_option("--ledger", o.ledger, "ledger file (default: <out>.ledger.json)");
  transform->add_option("--report", o.report, "report file (default: <out>.report.json)");

  auto* verify = app.add_subcommand("verify", "run a check and emit a JSON report");
  verify->add_option("check", what,
                     "esym-singular | esym-singular-perturbed | powersum-singular | transform | ledger | computes | "
                     "roundtrip | euler | esym-identity | benor")
      ->required();
  add_common(verify);
  verify->add_option("--k", o.k, "power D for powersum-singular");
  verify->add_option("--d", o.d, "esym degree");
  verify->add_option("--p", o.p, "prime for enumeration checks");
  verify->add_option("--primes", o.primes, "comma-separated primes for powersum-singular")->capture_default_str();
  verify->add_option("--samples", o.samples, "random perturbations for powersum-singular")->capture_default_str();
  verify->add_option("--input", o.input, "input document");
  verify->add_option("--output", o.output, "transform output document");
  verify->add_option("--ledger", o.ledger, "ledger document");
  verify->add_option("--report", o.report, "transform report");
  verify->add_option("--expect", o.expect, "expected polynomial in text form");
  verify->add_option("--poly", o.poly_text, "polynomial in text form");
  verify->add_option("--degree-bound", o.degree_bound, "remainder degree cap for the ledger check");

  auto* dot = app.add_subcommand("export-dot", "render an ABP as Graphviz DOT");
  add_common(dot);
  dot->add_option("--input", o.input, "ABP document")->required();
  dot->add_flag("--highlight", o.highlight, "mark one depth-reduction round: cut vertices and removed edges");
  dot->add_option("--ambient-n", o.ambient_n, "ambient n for --highlight (default: variable count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (construct->parsed()) return cmd_construct(what, o);
    if (transform->parsed()) return cmd_transform(what, o);
    if (verify->parsed()) return cmd_verify(what, o);
    if (dot->parsed()) return cmd_export_dot(o);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed document: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
