/// hofa: command-line front end for the uniformity-norm toolkit.
///
/// One subcommand per run, one report per run. Reports are JSON objects with
/// a leading "schema" key ("hofa/<subcommand>/v1") and go to stdout unless
/// --out redirects them to a file. Exit codes: 0 success, 2 parameter or
/// expression validation error, 3 assertion or contract failure (including
/// failed selftest criteria), 4 file I/O or input-file format error.
///
/// Configuration precedence: command-line flags beat HOFA_* environment
/// variables, which beat the key=value config file named by --config.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hofa/decompose.hpp"
#include "hofa/domain.hpp"
#include "hofa/expr.hpp"
#include "hofa/forms.hpp"
#include "hofa/gowers.hpp"
#include "hofa/io.hpp"
#include "hofa/nilgroup.hpp"
#include "hofa/orbits.hpp"
#include "hofa/parallel.hpp"
#include "hofa/patterns.hpp"
#include "hofa/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using hofa::cd;
using ordered_json = nlohmann::ordered_json;

/// Options shared by every subcommand; bound at the top-level app and
/// reachable after the subcommand name as well.
struct CommonOpts {
  std::string out;
  int threads = 0;
  bool deterministic = false;
};

ordered_json json_complex(cd z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

ordered_json json_domain(const hofa::DomainSpec& d) {
  return ordered_json{{"kind", d.kind == hofa::DomainKind::Cyclic ? "cyclic" : "interval"}, {"N", d.N}};
}

ordered_json json_group(const hofa::FilteredGroup& G) {
  return ordered_json{
      {"dim", G.dim}, {"step", G.step}, {"filtrationDims", G.filtrationDims}, {"labels", G.labels}};
}

ordered_json json_forms(const hofa::LinearFormSystem& psi) {
  return ordered_json{{"names", psi.names}, {"rows", psi.rows}, {"D", psi.D}, {"t", psi.t}};
}

/// Writes the report to --out, or pretty-prints it to stdout when --out is
/// empty.
void emit_report(const ordered_json& j, const std::string& out) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (out.empty()) {
    std::cout << text;
  } else {
    hofa::spit_file(out, text);
  }
}

hofa::DomainKind parse_kind(const std::string& s) {
  if (s == "cyclic") return hofa::DomainKind::Cyclic;
  if (s == "interval") return hofa::DomainKind::Interval;
  throw std::invalid_argument("--domain must be 'cyclic' or 'interval', got '" + s + "'");
}

long parse_ntilde(const std::string& s) {
  std::string low = s;
  for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "auto" || low.empty()) return 0;
  std::size_t used = 0;
  long v = std::stol(s, &used);
  if (used != s.size() || v < 1) {
    throw std::invalid_argument("--ntilde must be AUTO or a positive integer, got '" + s + "'");
  }
  return v;
}

/// Loads one function from --input (file) or synthesizes it from --expr on
/// the given domain. Exactly one of the two sources must be present.
hofa::SampledFunction load_function(const std::string& input, const std::string& expr,
                                    const std::string& domainStr, long N) {
  if (!input.empty() && !expr.empty()) {
    throw std::invalid_argument("pass either --input or --expr, not both");
  }
  if (!input.empty()) {
    std::optional<hofa::DomainKind> hint;
    if (!domainStr.empty()) hint = parse_kind(domainStr);
    return hofa::read_function(input, hint);
  }
  if (expr.empty()) throw std::invalid_argument("one of --input or --expr is required");
  if (N < 1) throw std::invalid_argument("--expr needs --N >= 1 to fix the domain size");
  hofa::DomainSpec d{domainStr == "interval" ? hofa::DomainKind::Interval : hofa::DomainKind::Cyclic, N};
  return hofa::eval_expr(hofa::parse_expr(expr), d);
}

std::vector<long> parse_long_list(const std::string& text, const std::string& flag) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

/// Default demo orbit data: one irrational level-1 coordinate per dimension,
/// fractional parts of square roots of the first primes.
hofa::PolySeq<double> default_sequence(const hofa::FilteredGroup& G) {
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  if (G.dim > 10) throw std::invalid_argument("default sequence supports dim <= 10; pass --seq");
  hofa::Coords<double> v(static_cast<std::size_t>(G.dim), 0.0);
  for (int j = 0; j < G.dim; ++j) {
    double r = std::sqrt(static_cast<double>(primes[j]));
    v[static_cast<std::size_t>(j)] = r - std::floor(r);
  }
  std::vector<hofa::Coords<double>> taylor{hofa::Coords<double>(static_cast<std::size_t>(G.dim), 0.0), v};
  return hofa::make_poly_seq(G, taylor);
}

/// Loads a polynomial sequence from a JSON file; a file without a "group"
/// key inherits the --group spec.
hofa::PolySeq<double> load_sequence(const std::string& path, const std::string& groupSpec) {
  nlohmann::json j = nlohmann::json::parse(hofa::slurp_file(path));
  if (!j.contains("group")) j["group"] = groupSpec;
  return hofa::poly_seq_from_json(j);
}

bool is_ap_rows(const hofa::LinearFormSystem& psi) {
  if (psi.D != 2) return false;
  for (int i = 0; i < psi.t; ++i) {
    if (psi.rows[static_cast<std::size_t>(i)] != std::vector<long>{1, static_cast<long>(i)}) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Configuration precedence. Command-line flags win outright; HOFA_* variables
// fill options the command line left unset; the key=value config file fills
// whatever remains. CLI11's own config hooks order env below the file, so the
// chain is applied manually after parsing.
// ---------------------------------------------------------------------------

struct ConfigBinding {
  CLI::Option* opt = nullptr;
  std::string env;
  std::string key;
  bool isFlag = false;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Reads a key=value file with '#' comments and optional [section] headers;
/// sectioned keys are returned as "section.key".
std::map<std::string, std::string> load_config(const std::string& path) {
  std::map<std::string, std::string> out;
  if (path.empty()) return out;
  std::stringstream ss(hofa::slurp_file(path));
  std::string line, section;
  long lineNo = 0;
  while (std::getline(ss, line)) {
    ++lineNo;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineNo) + " is not key=value: '" +
                                  line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineNo) + " has an empty key");
    }
    out[section.empty() ? key : section + "." + key] = value;
  }
  return out;
}

bool truthy(const std::string& v) {
  return !(v.empty() || v == "0" || v == "false" || v == "off" || v == "no");
}

/// Fills unset options from the environment, then from the config map.
void apply_bindings(const std::vector<ConfigBinding>& bindings,
                    const std::map<std::string, std::string>& cfg) {
  for (const ConfigBinding& b : bindings) {
    if (b.opt->count() > 0) continue;
    std::string value;
    bool found = false;
    if (const char* e = std::getenv(b.env.c_str()); e != nullptr && *e != '\0') {
      value = e;
      found = true;
    } else if (auto it = cfg.find(b.key); it != cfg.end()) {
      value = it->second;
      found = true;
    }
    if (!found) continue;
    if (b.isFlag) {
      if (!truthy(value)) continue;
      b.opt->add_result("true");
    } else {
      b.opt->add_result(value);
    }
    b.opt->run_callback();
  }
}

// ---------------------------------------------------------------------------
// Subcommand handlers. Each returns the process exit code and emits exactly
// one report.
// ---------------------------------------------------------------------------

struct GowersArgs {
  std::string input, expr, domain;
  long N = 0;
  int k = 0;
  std::string ntilde = "AUTO";
  bool allowLargeK = false;
};

int run_gowers(const GowersArgs& a, const CommonOpts& common) {
  if (a.k < 1) throw std::invalid_argument("--k must be at least 1");
  hofa::SampledFunction f = load_function(a.input, a.expr, a.domain, a.N);
  hofa::GowersOptions opts;
  opts.ntilde = parse_ntilde(a.ntilde);
  opts.allow_large_k = a.allowLargeK;
  opts.deterministic = common.deterministic;
  hofa::GowersResult r = hofa::gowers_norm(f, a.k, opts);
  ordered_json rep{{"schema", "hofa/gowers/v1"},
                   {"k", r.k},
                   {"domain", json_domain(r.domain)},
                   {"ntilde", opts.ntilde == 0 ? ordered_json("auto") : ordered_json(opts.ntilde)},
                   {"norm", r.norm},
                   {"power", r.power},
                   {"clamped", r.clamped}};
  emit_report(rep, common.out);
  return 0;
}

struct CountArgs {
  std::string forms;
  std::vector<std::string> inputs, exprs;
  std::string domain = "cyclic";
  long N = 0;
  bool profile = false;
  std::string profileCsv;
};

int run_count(const CountArgs& a, const CommonOpts& common) {
  hofa::LinearFormSystem psi = hofa::parse_forms(a.forms);
  if (!a.inputs.empty() && !a.exprs.empty()) {
    throw std::invalid_argument("pass --input files or --expr expressions, not both");
  }
  std::vector<hofa::SampledFunction> fs;
  if (!a.inputs.empty()) {
    for (const std::string& p : a.inputs) fs.push_back(load_function(p, "", a.domain, a.N));
  } else {
    for (const std::string& e : a.exprs) fs.push_back(load_function("", e, a.domain, a.N));
  }
  if (fs.empty()) throw std::invalid_argument("one of --input or --expr is required");
  if (fs.size() == 1) fs.resize(static_cast<std::size_t>(psi.t), fs.front());
  if (fs.size() != static_cast<std::size_t>(psi.t)) {
    throw std::invalid_argument("got " + std::to_string(fs.size()) + " functions for " +
                                std::to_string(psi.t) + " forms (pass one, or one per form)");
  }

  hofa::DomainKind kind = parse_kind(a.domain);
  long N = fs.front().domain.N;
  hofa::PatternDomain box = kind == hofa::DomainKind::Cyclic
                                ? hofa::cyclic_pattern_domain(N)
                                : (is_ap_rows(psi) ? hofa::ap_pattern_domain(N)
                                                   : hofa::interval_pattern_domain(N));
  bool wantProfile = a.profile || !a.profileCsv.empty();
  hofa::PatternReport r = hofa::make_pattern_report(fs, psi, box, wantProfile);

  ordered_json rep{{"schema", "hofa/count/v1"},
                   {"forms", json_forms(psi)},
                   {"domain", ordered_json{{"kind", a.domain}, {"N", N}}},
                   {"value", json_complex(r.value)},
                   {"minGowers", r.minGowers},
                   {"gowersK", r.gowersK},
                   {"metadata", r.metadata}};
  if (wantProfile) {
    std::map<long, long> counts = hofa::ap_profile_counts(fs.front(), psi.t);
    ordered_json prof = ordered_json::array();
    for (const auto& [d, density] : r.perDifference) {
      prof.push_back(ordered_json{{"d", d}, {"count", counts[d]}, {"density", density}});
    }
    rep["profile"] = std::move(prof);
    if (!a.profileCsv.empty()) {
      std::string csv = "d,count,density\n";
      for (const auto& [d, density] : r.perDifference) {
        csv += std::to_string(d) + "," + std::to_string(counts[d]) + "," + std::to_string(density) + "\n";
      }
      hofa::spit_file(a.profileCsv, csv);
    }
  }
  emit_report(rep, common.out);
  return 0;
}

int run_csc(const std::string& forms, const CommonOpts& common) {
  hofa::LinearFormSystem psi = hofa::parse_forms(forms);
  bool indep = hofa::pairwise_independent(psi);
  ordered_json rep{{"schema", "hofa/csc/v1"},
                   {"forms", json_forms(psi)},
                   {"pairwiseIndependent", indep},
                   {"complexity", indep ? ordered_json(hofa::cs_complexity(psi)) : ordered_json(nullptr)}};
  emit_report(rep, common.out);
  return 0;
}

int run_flag(const std::string& forms, int s, const CommonOpts& common) {
  hofa::LinearFormSystem psi = hofa::parse_forms(forms);
  if (s == 0) s = hofa::cs_complexity(psi);
  if (s < 1) throw std::invalid_argument("--s must be at least 1");
  hofa::PowerFlag flag = hofa::power_flag(psi, s);

  ordered_json basis = ordered_json::array();
  for (std::size_t j = 0; j < flag.basis.rows.size(); ++j) {
    ordered_json row = ordered_json::array();
    for (const auto& v : flag.basis.rows[j]) row.push_back(v.convert_to<long long>());
    basis.push_back(std::move(row));
  }
  ordered_json annihilators = ordered_json::array();
  for (int level = 1; level <= s; ++level) {
    ordered_json vecs = ordered_json::array();
    for (const auto& vec : hofa::flag_annihilator(flag, level)) {
      ordered_json row = ordered_json::array();
      for (const auto& v : vec) row.push_back(v.convert_to<long long>());
      vecs.push_back(std::move(row));
    }
    annihilators.push_back(ordered_json{{"level", level}, {"vectors", std::move(vecs)}});
  }
  ordered_json rep{{"schema", "hofa/flag/v1"},
                   {"forms", json_forms(psi)},
                   {"s", flag.s},
                   {"dims", flag.dims},
                   {"degrees", flag.degrees},
                   {"basis", std::move(basis)},
                   {"annihilators", std::move(annihilators)}};
  emit_report(rep, common.out);
  return 0;
}

int run_leibman(const std::string& groupSpec, const std::string& forms, const CommonOpts& common) {
  hofa::FilteredGroup G = hofa::group_from_spec(groupSpec);
  hofa::LinearFormSystem psi = hofa::parse_forms(forms);
  hofa::LeibmanGroup LG = hofa::leibman_group(G, psi);
  ordered_json rep{{"schema", "hofa/leibman/v1"},
                   {"group", json_group(G)},
                   {"forms", json_forms(psi)},
                   {"flagDims", LG.flag.dims},
                   {"dimension", LG.dimension}};
  emit_report(rep, common.out);
  return 0;
}

struct EquidistArgs {
  std::string group = "heisenberg";
  std::string seq;
  long N = 2000;
  double delta = 0.05;
  long maxComplexity = 10;
};

int run_equidist(const EquidistArgs& a, const CommonOpts& common) {
  if (a.N < 1) throw std::invalid_argument("--N must be at least 1");
  if (a.delta <= 0.0) throw std::invalid_argument("--delta must be positive");
  hofa::PolySeq<double> seq = a.seq.empty() ? default_sequence(hofa::group_from_spec(a.group))
                                            : load_sequence(a.seq, a.group);
  double disc = hofa::orbit_discrepancy(seq, a.N);
  std::optional<hofa::EquidistWitness> w = hofa::equidist_witness(seq, a.N, a.delta, a.maxComplexity);
  ordered_json rep{{"schema", "hofa/equidist/v1"},
                   {"group", json_group(seq.group)},
                   {"N", a.N},
                   {"delta", a.delta},
                   {"maxComplexity", a.maxComplexity},
                   {"discrepancy", disc},
                   {"equidistributed", !w.has_value()}};
  if (w) {
    rep["witness"] = ordered_json{{"level", w->eta.level},
                                  {"m", w->eta.m},
                                  {"complexity", w->eta.complexity()},
                                  {"cinfNorm", w->cinfNorm},
                                  {"discrepancy", w->discrepancy}};
  } else {
    rep["witness"] = nullptr;
  }
  emit_report(rep, common.out);
  return 0;
}

struct CountLemmaArgs {
  std::string forms;
  std::string group = "heisenberg";
  std::string seq;
  std::string character;
  long N = 2000;
  double samples = 1e6;
  std::uint64_t seed = 7;
};

int run_count_lemma(const CountLemmaArgs& a, const CommonOpts& common) {
  if (a.N < 1) throw std::invalid_argument("--N must be at least 1");
  if (!(a.samples >= 1.0) || a.samples > 1e9) {
    throw std::invalid_argument("--samples must lie in [1, 1e9]");
  }
  hofa::LinearFormSystem psi = hofa::parse_forms(a.forms);
  hofa::PolySeq<double> seq = a.seq.empty() ? default_sequence(hofa::group_from_spec(a.group))
                                            : load_sequence(a.seq, a.group);
  const hofa::FilteredGroup& G = seq.group;

  std::vector<long> m;
  if (a.character.empty()) {
    m.assign(static_cast<std::size_t>(G.dim), 0);
    m.front() += 1;
    m.back() += 1;
  } else {
    m = parse_long_list(a.character, "--character");
    if (m.size() != static_cast<std::size_t>(G.dim)) {
      throw std::invalid_argument("--character needs " + std::to_string(G.dim) + " entries");
    }
  }
  auto factor = [m](const hofa::Coords<double>& x) {
    double phase = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) phase += static_cast<double>(m[j]) * x[j];
    return hofa::e2pi(phase);
  };
  std::vector<std::function<cd(const hofa::Coords<double>&)>> factors(
      static_cast<std::size_t>(psi.t), factor);

  hofa::CountingReport r = hofa::counting_residual(factors, seq, psi, a.N, {}, {},
                                                   static_cast<long>(a.samples), a.seed);
  ordered_json rep{{"schema", "hofa/count-lemma/v1"},
                   {"forms", json_forms(psi)},
                   {"group", json_group(G)},
                   {"N", a.N},
                   {"samples", static_cast<long>(a.samples)},
                   {"seed", a.seed},
                   {"character", m},
                   {"empirical", json_complex(r.empirical)},
                   {"haar", json_complex(r.haar)},
                   {"stderr", r.haarStderr},
                   {"residual", r.residual},
                   {"points", r.points},
                   {"volume", r.volume},
                   {"latticeIndex", r.latticeIndex}};
  emit_report(rep, common.out);
  return 0;
}

struct DecomposeArgs {
  std::string input, expr, domain;
  long N = 0;
  int s = 1;
  double eps = 0.1;
  std::string growth = "exponential";
  std::string report;
  long cap = 10000;
  std::uint64_t seed = 0x5eedf00dULL;
  int harmonics = 0;
  long Q = 64;
};

int run_decompose(const DecomposeArgs& a, const CommonOpts& common) {
  hofa::SampledFunction f = load_function(a.input, a.expr, a.domain, a.N);
  hofa::GrowthFunction growth = hofa::growth_from_spec(a.growth);
  std::unique_ptr<hofa::CorrelationOracle> oracle;
  if (a.s == 1) {
    oracle = std::make_unique<hofa::FourierOracleS1>();
  } else if (a.s == 2) {
    oracle = std::make_unique<hofa::QuadraticOracleS2>(a.Q);
  } else {
    throw std::invalid_argument("--s must be 1 or 2 (no inverse oracle is shipped for s >= 3)");
  }
  hofa::RegularizeOptions opts;
  opts.complexityCap = a.cap;
  opts.seed = a.seed;
  opts.harmonicsPerGenerator = a.harmonics;
  hofa::DecompositionResult r = hofa::regularize(f, a.s, a.eps, growth, *oracle, opts);

  bool withinBudgets = r.l2Sml <= r.smlBudget + 1e-9 && r.ukUnf <= r.unfBudget + 1e-9;
  bool pass = !r.budgetOverflow && r.nilIn01 && r.nilPlusSmlIn01 && withinBudgets &&
              r.additivityError <= 1e-9;
  ordered_json rounds = ordered_json::array();
  for (const hofa::RoundInfo& ri : r.rounds) {
    rounds.push_back(ordered_json{{"round", ri.round},
                                  {"M", ri.mParam},
                                  {"delta", ri.deltaUsed},
                                  {"energyBefore", ri.energyBefore},
                                  {"energyAfter", ri.energyAfter},
                                  {"gap", ri.gap},
                                  {"cellsBefore", ri.cellsBefore},
                                  {"cellsAfter", ri.cellsAfter},
                                  {"weakSteps", ri.weakSteps},
                                  {"frequencies", ri.frequencies},
                                  {"projectionResidual", ri.projectionResidual}});
  }
  ordered_json rep{{"schema", "hofa/decompose/v1"},
                   {"s", a.s},
                   {"eps", a.eps},
                   {"growth", growth.name},
                   {"domain", json_domain(f.domain)},
                   {"M", r.M},
                   {"factorComplexity", r.factorComplexity},
                   {"nilComplexity", r.nilComplexity},
                   {"norms", ordered_json{{"l2Sml", r.l2Sml},
                                          {"ukUnf", r.ukUnf},
                                          {"smlBudget", r.smlBudget},
                                          {"unfBudget", r.unfBudget}}},
                   {"certificates", ordered_json{{"nilIn01", r.nilIn01},
                                                 {"nilPlusSmlIn01", r.nilPlusSmlIn01},
                                                 {"withinBudgets", withinBudgets},
                                                 {"additivityError", r.additivityError},
                                                 {"budgetOverflow", r.budgetOverflow}}},
                   {"pass", pass},
                   {"roundsUsed", r.roundsUsed},
                   {"rounds", std::move(rounds)}};
  emit_report(rep, a.report.empty() ? common.out : a.report);
  if (!pass) {
    std::cerr << "hofa decompose: budgets or certificates failed (see report)" << std::endl;
    return 3;
  }
  return 0;
}

struct BhkArgs {
  int k = 0;
  std::string construction;
  long N = 0;
  double eps = 0.05;
};

int run_bhk(const BhkArgs& a, const CommonOpts& common) {
  std::string construction = a.construction;
  if (construction.empty()) construction = a.k == 4 ? "heisenberg" : "bohr";
  long N = a.N != 0 ? a.N : (a.k == 4 ? 3000 : 5000);
  hofa::BhkReport r = hofa::bhk_verify_synthetic(a.k, construction, a.eps, N);
  bool countOk = r.weightedCount >= r.threshold;
  bool pass = countOk && (!r.positivityChecked || r.positivityOk);
  ordered_json rep{{"schema", "hofa/bhk/v1"},
                   {"k", r.k},
                   {"N", r.N},
                   {"eps", r.eps},
                   {"construction", r.construction},
                   {"alpha", r.alpha},
                   {"weightedCount", r.weightedCount},
                   {"threshold", r.threshold},
                   {"countOk", countOk},
                   {"goodFraction", r.goodFraction},
                   {"weight", ordered_json{{"mean", r.weightMean},
                                           {"sup", r.weightSup},
                                           {"support", r.weightSupport}}},
                   {"positivity", ordered_json{{"checked", r.positivityChecked},
                                               {"ok", r.positivityOk},
                                               {"margin", r.positivityMargin}}},
                   {"pass", pass}};
  emit_report(rep, common.out);
  if (!pass) {
    std::cerr << "hofa bhk: weighted count or positivity fell below the claim" << std::endl;
    return 3;
  }
  return 0;
}

struct GwArgs {
  std::string forms;
  int s = 1;
  long N = 512;
  std::string weights = "1.0,0.8,0.6,0.45,0.3";
  double alpha = 0.3819660112501051;
};

int run_gw_check(const GwArgs& a, const CommonOpts& common) {
  if (a.s < 1) throw std::invalid_argument("--s must be at least 1");
  if (a.N < 2) throw std::invalid_argument("--N must be at least 2");
  hofa::LinearFormSystem psi = hofa::parse_forms(a.forms);
  std::vector<double> weights = parse_double_list(a.weights, "--weights");
  for (double w : weights) {
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("--weights entries must lie in [0, 1]");
  }

  // Family members mix a fixed bounded structured profile with a quadratic
  // phase whose uniformity norm is small, so the structured weight controls
  // both the progression count and the U^{s+1} norm.
  hofa::DomainSpec d{hofa::DomainKind::Cyclic, a.N};
  const double tau = 2.0 * std::acos(-1.0);
  std::vector<hofa::SampledFunction> family;
  for (double w : weights) {
    std::vector<cd> v(d.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double n = static_cast<double>(d.point(static_cast<long>(i)));
      double structured = 0.5 + 0.5 * std::cos(tau * 3.0 * n / static_cast<double>(a.N));
      v[i] = w * structured + (1.0 - w) * hofa::e2pi(a.alpha * n * n);
    }
    family.push_back(hofa::make_sampled(d, std::move(v)));
  }

  hofa::GwReport r = hofa::gw_statement_check(psi, a.s, family);
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < r.norms.size(); ++i) {
    entries.push_back(ordered_json{{"weight", weights[i]}, {"norm", r.norms[i]}, {"lambda", r.lambdas[i]}});
  }
  ordered_json rep{{"schema", "hofa/gw-check/v1"},
                   {"forms", json_forms(psi)},
                   {"s", r.s},
                   {"N", a.N},
                   {"alpha", a.alpha},
                   {"hypothesis", r.hypothesis},
                   {"skipReason", r.skipReason},
                   {"entries", std::move(entries)},
                   {"spearman", r.spearman},
                   {"maxRatio", r.maxRatio}};
  emit_report(rep, common.out);
  return 0;
}

int run_selftest(const CommonOpts& common) {
  std::vector<hofa::SelfTestResult> results = hofa::run_selftests();
  bool allPass = true;
  ordered_json criteria = ordered_json::array();
  for (const hofa::SelfTestResult& r : results) {
    allPass = allPass && r.pass;
    std::printf("%s %-24s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                r.seconds);
    criteria.push_back(ordered_json{{"name", r.name},
                                    {"claim", r.claim},
                                    {"pass", r.pass},
                                    {"detail", r.detail},
                                    {"seconds", r.seconds}});
  }
  std::printf("%s %zu criteria\n", allPass ? "PASS" : "FAIL", results.size());
  if (!common.out.empty()) {
    ordered_json rep{{"schema", "hofa/selftest/v1"}, {"pass", allPass}, {"criteria", std::move(criteria)}};
    emit_report(rep, common.out);
  }
  return allPass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational higher-order Fourier analysis toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts common;
  std::string configPath;
  std::vector<ConfigBinding> bindings;
  CLI::Option* outOpt =
      app.add_option("--out,-o", common.out, "write the JSON report to this file instead of stdout");
  CLI::Option* threadsOpt =
      app.add_option("--threads", common.threads, "worker threads for data-parallel loops (0 = hardware)")
          ->check(CLI::NonNegativeNumber);
  CLI::Option* detOpt = app.add_flag(
      "--deterministic", common.deterministic,
      "serial reductions and fixed summation order; identical runs give byte-identical reports");
  app.add_option("--config", configPath,
                 "key=value configuration file (flags > HOFA_* environment > file)");
  bindings.push_back({outOpt, "HOFA_OUT", "out", false});
  bindings.push_back({threadsOpt, "HOFA_THREADS", "threads", false});
  bindings.push_back({detOpt, "HOFA_DETERMINISTIC", "deterministic", true});

  GowersArgs gowersArgs;
  CLI::App* gowersCmd = app.add_subcommand("gowers", "uniformity norm U^k of a sampled function");
  gowersCmd->fallthrough();
  gowersCmd->add_option("--input", gowersArgs.input, "function file (.json or .csv)");
  gowersCmd->add_option("--expr", gowersArgs.expr, "synthesize the function from an expression");
  gowersCmd->add_option("--N", gowersArgs.N, "domain size for --expr");
  gowersCmd->add_option("--k", gowersArgs.k, "norm order (k >= 1)")->required();
  gowersCmd->add_option("--domain", gowersArgs.domain, "cyclic or interval (overrides file inference)");
  gowersCmd->add_option("--ntilde", gowersArgs.ntilde, "embedding modulus for interval norms (AUTO = 2^k N)");
  gowersCmd->add_flag("--allow-large-k", gowersArgs.allowLargeK, "permit k > 4 (cost grows as N^k)");

  CountArgs countArgs;
  CLI::App* countCmd = app.add_subcommand("count", "multilinear pattern average over a linear-forms box");
  countCmd->fallthrough();
  countCmd->add_option("--forms", countArgs.forms, "forms list, e.g. \"n; n+d; n+2d\"")->required();
  countCmd->add_option("--input", countArgs.inputs, "function file(s): one, or one per form");
  countCmd->add_option("--expr", countArgs.exprs, "expression(s): one, or one per form");
  countCmd->add_option("--N", countArgs.N, "domain size for --expr");
  countCmd->add_option("--domain", countArgs.domain, "cyclic (default) or interval box");
  countCmd->add_flag("--profile", countArgs.profile, "per-difference progression profile (interval indicator)");
  countCmd->add_option("--profile-csv", countArgs.profileCsv, "also export the profile as d,count,density CSV");

  std::string cscForms;
  CLI::App* cscCmd = app.add_subcommand("csc", "Cauchy-Schwarz complexity of a linear-forms system");
  cscCmd->fallthrough();
  cscCmd->add_option("--forms", cscForms, "forms list")->required();

  std::string flagForms;
  int flagS = 0;
  CLI::App* flagCmd = app.add_subcommand("flag", "power-flag subspaces, basis, and annihilators");
  flagCmd->fallthrough();
  flagCmd->add_option("--forms", flagForms, "forms list")->required();
  flagCmd->add_option("--s", flagS, "flag depth (default: the system's complexity)");

  std::string leibGroup = "heisenberg";
  std::string leibForms;
  CLI::App* leibCmd = app.add_subcommand("leibman", "Leibman group of a forms system on a filtered group");
  leibCmd->fallthrough();
  leibCmd->add_option("--group", leibGroup, "circle | torus(m) | heisenberg | JSON file");
  leibCmd->add_option("--forms", leibForms, "forms list")->required();

  EquidistArgs eqArgs;
  CLI::App* eqCmd = app.add_subcommand("equidist", "orbit equidistribution test with character witness");
  eqCmd->fallthrough();
  eqCmd->add_option("--group", eqArgs.group, "group spec used when --seq has no group of its own");
  eqCmd->add_option("--seq", eqArgs.seq, "polynomial sequence JSON file (default: demo irrational orbit)");
  eqCmd->add_option("--N", eqArgs.N, "orbit length");
  eqCmd->add_option("--delta", eqArgs.delta, "discrepancy threshold");
  eqCmd->add_option("--max-complexity", eqArgs.maxComplexity, "witness character complexity cap");

  CountLemmaArgs clArgs;
  CLI::App* clCmd = app.add_subcommand("count-lemma", "empirical vs Haar orbit averages over a forms box");
  clCmd->fallthrough();
  clCmd->add_option("--forms", clArgs.forms, "forms list")->required();
  clCmd->add_option("--group", clArgs.group, "group spec used when --seq has no group of its own");
  clCmd->add_option("--seq", clArgs.seq, "polynomial sequence JSON file (default: demo irrational orbit)");
  clCmd->add_option("--character", clArgs.character, "integer frequency vector of the test character");
  clCmd->add_option("--N", clArgs.N, "box scale");
  bindings.push_back({clCmd->add_option("--samples", clArgs.samples,
                                        "Haar Monte Carlo samples (accepts 1e6)"),
                      "HOFA_SAMPLES", "count-lemma.samples", false});
  bindings.push_back(
      {clCmd->add_option("--seed", clArgs.seed, "Monte Carlo seed"), "HOFA_SEED", "count-lemma.seed", false});

  DecomposeArgs decArgs;
  CLI::App* decCmd = app.add_subcommand("decompose", "arithmetic regularity decomposition f = nil + sml + unf");
  decCmd->fallthrough();
  decCmd->add_option("--input", decArgs.input, "function file (real values in [0,1])");
  decCmd->add_option("--expr", decArgs.expr, "synthesize the function from an expression");
  decCmd->add_option("--N", decArgs.N, "domain size for --expr");
  decCmd->add_option("--domain", decArgs.domain, "cyclic or interval");
  decCmd->add_option("--s", decArgs.s, "uniformity degree: 1 (Fourier oracle) or 2 (quadratic demo oracle)");
  decCmd->add_option("--eps", decArgs.eps, "accuracy parameter in (0, 1]");
  decCmd->add_option("--growth", decArgs.growth, "linear | exponential | tower, optionally name:value");
  decCmd->add_option("--report", decArgs.report, "report file (alias for --out)");
  decCmd->add_option("--cap", decArgs.cap, "factor cell budget");
  bindings.push_back({decCmd->add_option("--seed", decArgs.seed, "level-set threshold seed"), "HOFA_SEED",
                      "decompose.seed", false});
  decCmd->add_option("--harmonics", decArgs.harmonics, "harmonics per generator in the structured fit");
  decCmd->add_option("--Q", decArgs.Q, "modulus cap for the s=2 demo oracle");

  BhkArgs bhkArgs;
  CLI::App* bhkCmd = app.add_subcommand("bhk", "weighted multiple-recurrence check on a synthetic set");
  bhkCmd->fallthrough();
  bhkCmd->add_option("--k", bhkArgs.k, "progression length (3 or 4; k >= 5 is rejected)")->required();
  bhkCmd->add_option("--construction", bhkArgs.construction,
                     "bohr:alpha=..,delta=..,noise=.. or heisenberg:a=..,b=..,level=..");
  bhkCmd->add_option("--N", bhkArgs.N, "set size (default 5000 for k=3, 3000 for k=4)");
  bhkCmd->add_option("--eps", bhkArgs.eps, "count tolerance");

  GwArgs gwArgs;
  CLI::App* gwCmd = app.add_subcommand("gw-check", "pattern count vs uniformity norm over a test family");
  gwCmd->fallthrough();
  gwCmd->add_option("--forms", gwArgs.forms, "forms list")->required();
  gwCmd->add_option("--s", gwArgs.s, "claimed complexity for the norm index s+1");
  gwCmd->add_option("--N", gwArgs.N, "cyclic domain size");
  gwCmd->add_option("--weights", gwArgs.weights, "structured-component weights in [0, 1]");
  gwCmd->add_option("--alpha", gwArgs.alpha, "quadratic phase frequency of the unstructured fill");

  CLI::App* selftestCmd = app.add_subcommand("selftest", "run the acceptance criteria suite");
  selftestCmd->fallthrough();

  try {
    app.parse(argc, argv);
    if (configPath.empty()) {
      if (const char* e = std::getenv("HOFA_CONFIG"); e != nullptr) configPath = e;
    }
    apply_bindings(bindings, load_config(configPath));
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const hofa::IOError& e) {
    std::cerr << "hofa: io error: " << e.what() << std::endl;
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hofa: " << e.what() << std::endl;
    return 2;
  }

  if (common.threads > 0) hofa::set_worker_count(static_cast<unsigned>(common.threads));
  if (common.deterministic) hofa::set_deterministic_mode(true);

  try {
    if (app.got_subcommand(gowersCmd)) return run_gowers(gowersArgs, common);
    if (app.got_subcommand(countCmd)) return run_count(countArgs, common);
    if (app.got_subcommand(cscCmd)) return run_csc(cscForms, common);
    if (app.got_subcommand(flagCmd)) return run_flag(flagForms, flagS, common);
    if (app.got_subcommand(leibCmd)) return run_leibman(leibGroup, leibForms, common);
    if (app.got_subcommand(eqCmd)) return run_equidist(eqArgs, common);
    if (app.got_subcommand(clCmd)) return run_count_lemma(clArgs, common);
    if (app.got_subcommand(decCmd)) return run_decompose(decArgs, common);
    if (app.got_subcommand(bhkCmd)) return run_bhk(bhkArgs, common);
    if (app.got_subcommand(gwCmd)) return run_gw_check(gwArgs, common);
    if (app.got_subcommand(selftestCmd)) return run_selftest(common);
  } catch (const hofa::IOError& e) {
    std::cerr << "hofa: io error: " << e.what() << std::endl;
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "hofa: input file error: " << e.what() << std::endl;
    return 4;
  } catch (const hofa::ParseError& e) {
    std::cerr << "hofa: expression error at position " << e.offset << ": " << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hofa: " << e.what() << std::endl;
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "hofa: " << e.what() << std::endl;
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "hofa: internal invariant failed: " << e.what() << std::endl;
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "hofa: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hofa: unexpected failure: " << e.what() << std::endl;
    return 3;
  }
  return 2;
}
