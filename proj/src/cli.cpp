#include "wielandt/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "wielandt/parallel.hpp"
#include "wielandt/random.hpp"

namespace wielandt::cli {

namespace {

constexpr std::size_t kMaxFailuresInReport = 50;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Shortest "%.*g" text that parses back to the same double.
std::string fmt_exact(double v) {
  for (int digits = 15; digits < 17; ++digits) {
    const std::string s = fmt(v, digits);
    if (std::strtod(s.c_str(), nullptr) == v) return s;
  }
  return fmt(v, 17);
}

double snap(double p) {
  const double r = std::round(p);
  return std::abs(p - r) <= 1e-12 ? r : p;
}

void require_usage_bounds(double m, double big_m) {
  if (!std::isfinite(m) || !(m > 0)) throw UsageError("m must be a positive number");
  if (!std::isfinite(big_m) || big_m < m) throw UsageError("M must be ≥ m");
}

json dims_json(const Dims& d) { return {{"N", d.big_n}, {"n", d.n}, {"d", d.d}, {"k", d.k}}; }

json manifest(const std::string& subcommand, json config, std::uint64_t seed, const std::string& started) {
  return {{"subcommand", subcommand}, {"config", std::move(config)}, {"seed", seed},
          {"version", kVersion},       {"started_at", started},       {"finished_at", utc_now()}};
}

// ---------------------------------------------------------------------------
// verify

struct Entry {
  std::string name;
  double margin;
  bool pass;
};

struct TrialOutcome {
  std::vector<Entry> entries;
  std::vector<json> failures;
};

struct Stats {
  long long runs = 0;
  long long failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  long long worst_trial = -1;
};

class TrialRecorder {
 public:
  TrialRecorder(TrialOutcome& out, std::size_t trial) : out_(out), trial_(trial) {}

  void add(const CheckReport& r) { add(r.check, r.margin, r.passed(), [&] { return report_to_json(r); }); }

  template <typename Detail>
  void add(const std::string& name, double margin, bool pass, Detail&& detail) {
    out_.entries.push_back({name, margin, pass});
    if (!pass) {
      json j = detail();
      j["trial"] = trial_;
      out_.failures.push_back(std::move(j));
    }
  }

 private:
  TrialOutcome& out_;
  std::size_t trial_;
};

struct VerifyInputs {
  std::optional<PositiveMap> map;
  std::optional<HermMatrix> op;
};

Instance verify_instance(const VerifyConfig& cfg, const VerifyInputs& in, std::uint64_t s) {
  Dims dims = cfg.dims;
  if (!in.op && !in.map) return gen_instance(s, dims, cfg.m, cfg.big_m, cfg.force_endpoints);
  HermMatrix a = in.op ? *in.op : gen_operator(sub_seed(s, "a"), dims.big_n, cfg.m, cfg.big_m, cfg.force_endpoints);
  auto [x, y] = gen_isometry_pair(sub_seed(s, "pair"), a.dim(), dims.n);
  PositiveMap phi = in.map ? *in.map : random_unital_cp(sub_seed(s, "map"), dims.n, dims.d, dims.k);
  return Instance{std::move(a), cfg.m, cfg.big_m, std::move(x), std::move(y), std::move(phi), s};
}

void verify_lemmas(const VerifyConfig& cfg, const Instance& inst, std::uint64_t s, std::size_t trial,
                   TrialRecorder& rec) {
  Rng rng(sub_seed(s, "lemma-inputs"));

  // Block equivalence, with every third trial just inside and just outside the boundary.
  const auto xdim = static_cast<Eigen::Index>(1 + rng.next() % 4);
  const CMatrix x = rng.gaussian(xdim, xdim) * rng.uniform(0.1, 3.0);
  const double norm = op_norm(x);
  double t = rng.uniform(0.0, 2.0 * norm);
  if (trial % 3 == 1) t = norm + 1e-6;
  if (trial % 3 == 2) t = std::max(0.0, norm - 1e-6);
  const auto be = check_lemma_block_equivalence(x, t, cfg.tol);
  rec.add("lemma_block_equivalence", t - norm, be.agree(), [&] {
    return json{{"check", "lemma_block_equivalence"}, {"t", t},           {"norm", norm},
                {"abs_leq", be.abs_leq},              {"norm_leq", be.norm_leq}, {"block_psd", be.block_psd}};
  });

  const auto sdim = static_cast<Eigen::Index>(2 + rng.next() % 5);
  const auto pair = gen_square_order_pair(sub_seed(s, "square-order"), sdim, cfg.m, cfg.big_m);
  rec.add(check_lemma_square_order(pair.a, pair.b, cfg.m, cfg.big_m, cfg.tol));

  const auto fdim = static_cast<Eigen::Index>(2 + rng.next() % 5);
  const HermMatrix pa = rng.uniform(0.1, 10.0) * gen_psd(sub_seed(s, "fact-a"), fdim);
  const HermMatrix pb = rng.uniform(0.1, 10.0) * gen_psd(sub_seed(s, "fact-b"), fdim);
  rec.add(check_fact_norm_anticommutator(pa, pb, cfg.tol));

  const auto vectors = gen_isometry_pair(sub_seed(s, "vectors"), inst.ambient(), 1);
  rec.add(check_scalar_wielandt(vectors.x.matrix().col(0), vectors.y.matrix().col(0), inst.a, cfg.m, cfg.big_m,
                                cfg.tol));
}

void verify_trial(const VerifyConfig& cfg, const VerifyInputs& in, std::size_t trial, TrialOutcome& out) {
  TrialRecorder rec(out, trial);
  const std::uint64_t s = sub_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  try {
    const Instance inst = verify_instance(cfg, in, s);
    rec.add(check_bhatia_davis(inst, cfg.tol));

    for (double p : cfg.ps) {
      const GammaParts g = gamma(inst, p);
      const LhsValues lhs = lhs_values(g);
      for (int which = 1; which <= 3; ++which) {
        TheoremReports tr = check_theorem(g, lhs, inst.m, inst.big_m, which, cfg.tol);
        for (CheckReport* r : {&tr.abs_form, &tr.sym_form}) {
          r->seed = s;
          r->dims = std::array<Eigen::Index, 3>{inst.ambient(), inst.n(), inst.d()};
          r->m = inst.m;
          r->big_m = inst.big_m;
          rec.add(*r);
        }
        // A Loewner verdict on the |.| form must carry over to the symmetric
        // form and to the norm form.
        const bool lift = !tr.abs_form.loewner_pass ||
                          (tr.sym_form.loewner_pass && tr.abs_form.norm_pass && tr.sym_form.norm_pass);
        rec.add("lift_consistency", 0.0, lift, [&] {
          return json{{"check", "lift_consistency"}, {"theorem", which}, {"p", p}, {"seed", s}};
        });
      }
      for (int which : {2, 3}) rec.add(check_gamma_norm(g, inst.m, inst.big_m, which, cfg.tol));
      rec.add(check_sym_part_norm(g, cfg.tol));

      const auto chain = check_proof_chain(g, inst.m, inst.big_m, cfg.tol);
      rec.add("proof_chain", chain.links[3] - chain.links[0], chain.passed(), [&] {
        return json{{"check", "proof_chain"}, {"p", p}, {"seed", s}, {"links", chain.links}, {"holds", chain.holds}};
      });
      if (p <= 1) {
        CheckReport r = check_power_order(g, inst.m, inst.big_m, cfg.tol);
        r.seed = s;
        rec.add(r);
      }
    }
    verify_lemmas(cfg, inst, s, trial, rec);
  } catch (const Error& e) {
    rec.add("evaluation_error", 0.0, false, [&] {
      return json{{"check", "evaluation_error"}, {"seed", s}, {"error", e.what()}};
    });
  }
}

json verify_config_json(const VerifyConfig& cfg) {
  return {{"trials", cfg.trials},
          {"dims", dims_json(cfg.dims)},
          {"m", cfg.m},
          {"M", cfg.big_m},
          {"p", cfg.ps},
          {"seed", cfg.seed},
          {"tol", cfg.tol},
          {"force_endpoints", cfg.force_endpoints},
          {"map", cfg.map_path ? json(*cfg.map_path) : json(nullptr)},
          {"operator", cfg.operator_path ? json(*cfg.operator_path) : json(nullptr)}};
}

}  // namespace

std::vector<double> parse_p_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid number \"" + s + "\" in p list \"" + text + "\"");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("invalid number \"" + s + "\" in p list");
    return v;
  };

  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("p grid must be start:stop:step");
    const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (!(step > 0) || stop < start) throw UsageError("p grid needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw UsageError("p grid has too many points");
    for (long i = 0; i < count; ++i) out.push_back(snap(start + static_cast<double>(i) * step));
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(snap(number(part)));
  }
  if (out.empty()) throw UsageError("p list is empty");
  for (double p : out)
    if (!(p > 0)) throw UsageError("p must be > 0");
  return out;
}

void VerifyConfig::validate() const {
  if (trials < 1) throw UsageError("--trials must be >= 1");
  require_usage_bounds(m, big_m);
  if (!(tol >= 0)) throw UsageError("--tol must be >= 0");
  if (ps.empty()) throw UsageError("p list is empty");
  for (double p : ps)
    if (!(p > 0) || !std::isfinite(p)) throw UsageError("p must be > 0");
  try {
    dims.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

VerifyResult run_verify(const VerifyConfig& cfg) {
  const std::string started = utc_now();
  cfg.validate();

  VerifyInputs in;
  // generated maps are Stinespring maps, CP by construction
  json map_certificate = to_string(MapCertificate::CertifiedCP);
  try {
    if (cfg.operator_path) {
      in.op = HermMatrix(matrix_from_json(read_json_file(*cfg.operator_path)));
      if (in.op->dim() != cfg.dims.big_n)
        throw UsageError("operator dimension " + std::to_string(in.op->dim()) + " does not match --N " +
                         std::to_string(cfg.dims.big_n));
      const auto e = herm_eig(*in.op);
      const double scale = std::max(1.0, cfg.big_m);
      if (e.values(0) < cfg.m - 1e-10 * scale || e.values(e.values.size() - 1) > cfg.big_m + 1e-10 * scale)
        throw UsageError("spectrum of the supplied operator is outside [m, M]");
    }
    if (cfg.map_path) {
      in.map = map_from_json(read_json_file(*cfg.map_path));
      if (in.map->in_dim() != cfg.dims.n) throw UsageError("map input dimension does not match --n");
      map_certificate = to_string(classify_map(*in.map, 1000, cfg.seed));
    }
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const auto count = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(count);
  parallel_for(count, cfg.threads, [&](std::size_t i, unsigned) { verify_trial(cfg, in, i, outcomes[i]); });

  std::map<std::string, Stats> stats;
  VerifyResult result;
  double worst = std::numeric_limits<double>::infinity();
  json failures = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    for (const Entry& e : outcomes[i].entries) {
      Stats& st = stats[e.name];
      ++st.runs;
      ++result.checks;
      if (!e.pass) {
        ++st.failures;
        ++result.failures;
      }
      if (e.margin < st.worst_margin) {
        st.worst_margin = e.margin;
        st.worst_trial = static_cast<long long>(i);
      }
      worst = std::min(worst, e.margin);
    }
    for (auto& f : outcomes[i].failures)
      if (failures.size() < kMaxFailuresInReport) failures.push_back(std::move(f));
  }

  json summary = json::object();
  for (const auto& [name, st] : stats)
    summary[name] = {{"runs", st.runs},
                     {"failures", st.failures},
                     {"worst_margin", st.worst_margin},
                     {"worst_trial", st.worst_trial}};

  json bounds = json::array();
  json notes = json::array();
  for (double p : cfg.ps) {
    const auto cmp = compare_bounds(cfg.m, cfg.big_m, p);
    bounds.push_back({{"p", p},
                      {"thm1", cmp.values[0]},
                      {"thm2", cmp.values[1]},
                      {"thm3", cmp.values[2]},
                      {"tightest", "thm" + std::to_string(cmp.tightest)}});
    if (!cmp.chain_holds_p)
      notes.push_back({{"kind", "bound_ordering_exponent"},
                       {"p", p},
                       {"thm2", cmp.values[1]},
                       {"rhs_exponent_p", cmp.chain_rhs_p},
                       {"holds_exponent_p", cmp.chain_holds_p},
                       {"rhs_exponent_2p", cmp.chain_rhs_2p},
                       {"holds_exponent_2p", cmp.chain_holds_2p},
                       {"note", "thm2 >= ((M-m)/(M+m))^p fails here; thm2 >= ((M-m)/(M+m))^(2p) holds"}});
  }

  result.exit_code = result.failures == 0 ? kPass : kVerificationFailure;
  json man = manifest("verify", verify_config_json(cfg), cfg.seed, started);
  man["counters"] = {{"checks", result.checks},
                     {"passes", result.checks - result.failures},
                     {"failures", result.failures},
                     {"worst_margin", worst}};
  result.report = {{"schema", kSchema}, {"manifest", std::move(man)}, {"summary", std::move(summary)},
                   {"failures", std::move(failures)}, {"bounds", std::move(bounds)}, {"notes", std::move(notes)},
                   {"map_certificate", map_certificate}};
  return result;
}

std::string run_bounds(const BoundsConfig& cfg) {
  require_usage_bounds(cfg.m, cfg.big_m);
  if (cfg.ps.empty()) throw UsageError("p grid is empty");
  std::ostringstream out;
  out << "# p_star=" << (cfg.big_m > cfg.m ? fmt(crossover_threshold(cfg.m, cfg.big_m)) : std::string("undefined"))
      << '\n';
  out << "m,M,p,thm1,thm2,thm3,tightest\n";
  for (double p : cfg.ps) {
    const auto cmp = compare_bounds(cfg.m, cfg.big_m, p);
    out << fmt_exact(cfg.m) << ',' << fmt_exact(cfg.big_m) << ',' << fmt_exact(p) << ',' << fmt_exact(cmp.values[0])
        << ',' << fmt_exact(cmp.values[1]) << ',' << fmt_exact(cmp.values[2]) << ",thm" << cmp.tightest << '\n';
  }
  return out.str();
}

SearchResult run_search_command(const SearchConfig& cfg) {
  const std::string started = utc_now();
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const SearchRecord rec = run_search(cfg);
  const double threshold = 1.0 + 10.0 * cfg.tol;

  SearchResult out;
  out.discovery = rec.best_value > threshold;
  out.exit_code = out.discovery ? kDiscovery : kPass;
  json man = manifest("search", config_to_json(cfg), cfg.seed, started);
  man["counters"] = {{"trials", rec.trials_done}, {"failed_trials", rec.failed_trials},
                     {"refine_accepted", static_cast<long long>(rec.trace.size()) - 1}};
  out.report = {{"schema", kSchema},
                {"manifest", std::move(man)},
                {"result", search_to_json(rec, cfg)},
                {"discovery_threshold", threshold},
                {"discovery", out.discovery}};
  if (out.discovery)
    out.witness = json{{"schema", kSchema},
                       {"objective", to_string(cfg.objective)},
                       {"value", rec.best_value},
                       {"p", cfg.objective == Objective::Conjecture ? json(nullptr) : json(cfg.p)},
                       {"instance", instance_to_json(rec.best_instance)}};
  return out;
}

ExtremalSummary run_extremal(double m, double big_m, double p) {
  require_usage_bounds(m, big_m);
  if (!(p > 0) || !std::isfinite(p)) throw UsageError("p must be > 0");
  ExtremalSummary s;
  s.m = m;
  s.big_m = big_m;
  s.p = snap(p);
  s.degenerate = !(big_m > m);

  const CMatrix eye = CMatrix::Identity(2, 2);
  const Instance inst = s.degenerate
                            ? Instance{HermMatrix::scalar(2, m), m, big_m, Isometry(eye.col(0)), Isometry(eye.col(1)),
                                       PositiveMap::identity(1), 0}
                            : extremal_instance(m, big_m);
  const double c = wielandt_factor(m, big_m);
  const GammaParts g1 = gamma(inst, 1.0);
  s.lhs = g1.s(0, 0).real();
  s.rhs = c * c * g1.t(0, 0).real();

  const GammaParts g = gamma(inst, s.p);
  s.gamma = g.gamma(0, 0).real();
  s.half_abs = lhs_values(g).half_abs_norm;
  s.gamma_norm = op_norm(g.gamma);
  for (int i = 0; i < 3; ++i) {
    s.bounds[i] = bound_theorem(i + 1, m, big_m, s.p);
    s.margins[i] = s.bounds[i] - s.half_abs;
  }
  return s;
}

std::string format_extremal(const ExtremalSummary& s) {
  std::ostringstream out;
  out << "extremal instance  m=" << fmt(s.m) << "  M=" << fmt(s.big_m) << "  p=" << fmt(s.p) << '\n';
  if (s.degenerate) out << "degenerate: m = M, so A = m I, X*AY = 0 and Gamma = 0\n";
  const double a = (s.big_m + s.m) / 2, b = (s.big_m - s.m) / 2;
  out << "A = [[" << fmt(s.degenerate ? s.m : a) << ", " << fmt(s.degenerate ? 0.0 : b) << "], ["
      << fmt(s.degenerate ? 0.0 : b) << ", " << fmt(s.degenerate ? s.m : a) << "]]  X = e1  Y = e2  Phi = identity\n";
  out << "Phi(X*AY) Phi(Y*AY)^-1 Phi(Y*AX) = " << fmt(s.lhs, 17) << '\n';
  out << "((M-m)/(M+m))^2 Phi(X*AX)        = " << fmt(s.rhs, 17) << '\n';
  out << "difference                       = " << fmt(s.rhs - s.lhs, 3) << '\n';
  out << "Gamma                            = " << fmt(s.gamma, 17) << '\n';
  out << "|Gamma + Gamma*| / 2             = " << fmt(s.half_abs, 17) << '\n';
  out << "|Gamma|                          = " << fmt(s.gamma_norm, 17) << '\n';
  for (int i = 0; i < 3; ++i)
    out << "thm" << i + 1 << " bound = " << fmt(s.bounds[i], 17) << "  margin = " << fmt(s.margins[i], 6) << '\n';
  return out.str();
}

json without_timestamps(json report) {
  if (report.contains("manifest")) {
    report["manifest"].erase("started_at");
    report["manifest"].erase("finished_at");
  }
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for operator Wielandt inequalities", "wielandt-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  VerifyConfig vcfg;
  vcfg.threads = default_threads();
  std::string v_p = "0.5,1,2";
  long long v_big_n = 0;
  std::string v_out;
  std::string v_map, v_op;
  auto* verify = app.add_subcommand("verify", "Run every inequality check on seeded random instances");
  verify->add_option("--trials", vcfg.trials, "Number of instances")->capture_default_str();
  verify->add_option("--N", v_big_n, "Ambient dimension (default 2n)");
  verify->add_option("--n", vcfg.dims.n, "Rank of X and Y")->capture_default_str();
  verify->add_option("--d", vcfg.dims.d, "Output dimension of the map")->capture_default_str();
  verify->add_option("--k", vcfg.dims.k, "Stinespring ancilla dimension")->capture_default_str();
  verify->add_option("--m", vcfg.m, "Lower spectral bound")->capture_default_str();
  verify->add_option("--M", vcfg.big_m, "Upper spectral bound")->capture_default_str();
  verify->add_option("--p", v_p, "Exponents: comma list or start:stop:step")->capture_default_str();
  verify->add_option("--seed", vcfg.seed, "Base seed")->capture_default_str();
  verify->add_option("--tol", vcfg.tol, "Relative tolerance")->capture_default_str();
  verify->add_option("--out", v_out, "Write the JSON report here");
  verify->add_flag("--loose", "Do not force the extreme eigenvalues of A onto m and M");
  verify->add_option("--map", v_map, "Use this map (JSON) for every instance");
  verify->add_option("--operator", v_op, "Use this operator A (JSON matrix) for every instance");

  BoundsConfig bcfg;
  std::string b_grid = "1:1:1", b_csv;
  auto* bounds = app.add_subcommand("bounds", "Tabulate the three bound families over a p grid");
  bounds->add_option("--m", bcfg.m, "Lower spectral bound")->capture_default_str();
  bounds->add_option("--M", bcfg.big_m, "Upper spectral bound")->capture_default_str();
  bounds->add_option("--p-grid", b_grid, "start:stop:step or comma list")->capture_default_str();
  bounds->add_option("--csv", b_csv, "Write the table here instead of stdout");

  SearchConfig scfg;
  scfg.threads = default_threads();
  std::string s_objective = "conjecture", s_dims = "4,2,2,2", s_out;
  auto* search = app.add_subcommand("search", "Search for large conjecture or tightness ratios");
  search->add_option("--objective", s_objective, "conjecture | tightness_thm1 | tightness_thm2 | tightness_thm3")
      ->capture_default_str();
  search->add_option("--trials", scfg.trials, "Random instances")->capture_default_str();
  search->add_option("--refine-steps", scfg.refine_steps, "Local refinement proposals")->capture_default_str();
  search->add_option("--seed", scfg.seed, "Base seed")->capture_default_str();
  search->add_option("--dims", s_dims, "N,n,d,k")->capture_default_str();
  search->add_option("--m", scfg.m, "Lower spectral bound")->capture_default_str();
  search->add_option("--M", scfg.big_m, "Upper spectral bound")->capture_default_str();
  search->add_option("--p", scfg.p, "Exponent for tightness objectives")->capture_default_str();
  search->add_option("--tol", scfg.tol, "Relative tolerance")->capture_default_str();
  search->add_option("--out", s_out, "Write the JSON result here");

  double e_m = 1, e_big_m = 2, e_p = 1;
  auto* extremal = app.add_subcommand("extremal", "Show the equality case of the operator Wielandt inequality");
  extremal->add_option("--m", e_m, "Lower spectral bound")->capture_default_str();
  extremal->add_option("--M", e_big_m, "Upper spectral bound")->capture_default_str();
  extremal->add_option("--p", e_p, "Exponent")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*verify) {
      vcfg.ps = parse_p_list(v_p);
      vcfg.dims.big_n = v_big_n > 0 ? v_big_n : 2 * vcfg.dims.n;
      vcfg.force_endpoints = verify->count("--loose") == 0;
      if (!v_map.empty()) vcfg.map_path = v_map;
      if (!v_op.empty()) vcfg.operator_path = v_op;
      const VerifyResult r = run_verify(vcfg);
      if (!v_out.empty()) write_json_file(v_out, r.report);
      for (const auto& [name, st] : r.report["summary"].items())
        out << name << ": " << st["runs"].get<long long>() << " runs, " << st["failures"].get<long long>()
            << " failures, worst margin " << fmt(st["worst_margin"].get<double>(), 6) << '\n';
      for (const auto& note : r.report["notes"])
        out << "note (p=" << fmt(note["p"].get<double>()) << "): " << note["note"].get<std::string>() << '\n';
      out << (r.failures == 0 ? "PASS" : "FAIL") << ": " << r.checks << " checks, " << r.failures << " failures\n";
      return r.exit_code;
    }
    if (*bounds) {
      bcfg.ps = parse_p_list(b_grid);
      const std::string csv = run_bounds(bcfg);
      if (b_csv.empty()) {
        out << csv;
      } else {
        std::ofstream f(b_csv);
        if (!f) throw UsageError("cannot write " + b_csv);
        f << csv;
      }
      return kPass;
    }
    if (*search) {
      const auto objective = parse_objective(s_objective);
      if (!objective) throw UsageError("unknown objective \"" + s_objective + "\"");
      scfg.objective = *objective;
      std::vector<long long> d;
      std::stringstream ss(s_dims);
      for (std::string part; std::getline(ss, part, ',');) {
        try {
          d.push_back(std::stoll(part));
        } catch (const std::exception&) {
          throw UsageError("--dims must be N,n,d,k");
        }
      }
      if (d.size() != 4) throw UsageError("--dims must be N,n,d,k");
      scfg.dims = Dims{d[0], d[1], d[2], d[3]};
      scfg.p = snap(scfg.p);
      if (scfg.trials < 1) throw UsageError("--trials must be >= 1");
      const SearchResult r = run_search_command(scfg);
      if (!s_out.empty()) write_json_file(s_out, r.report);
      out << "objective " << s_objective << ": best value " << fmt(r.report["result"]["best_value"].get<double>(), 17)
          << " over " << scfg.trials << " trials\n";
      if (r.discovery) {
        const std::string path = s_out.empty() ? std::string("search.witness.json") : s_out + ".witness.json";
        write_json_file(path, *r.witness);
        out << "DISCOVERY: value above " << fmt(r.report["discovery_threshold"].get<double>(), 17)
            << "; witness written to " << path << '\n';
      }
      return r.exit_code;
    }
    if (*extremal) {
      out << format_extremal(run_extremal(e_m, e_big_m, e_p));
      return kPass;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace wielandt::cli
