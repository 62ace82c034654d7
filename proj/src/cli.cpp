#include "sudlerlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sudlerlab/constants.hpp"
#include "sudlerlab/errors.hpp"
#include "sudlerlab/ostrowski.hpp"
#include "sudlerlab/parse.hpp"
#include "sudlerlab/perturbed_limit.hpp"
#include "sudlerlab/sudler_eval.hpp"

namespace sudlerlab {

namespace {

using json = nlohmann::ordered_json;

enum class Format { table, json, csv };

struct RunConfig {
  unsigned precision_bits = 0;  // 0: chosen per table
  ScanConfig scan;
  Format format = Format::table;
  bool relaxed = false;

  double tolerance(double strict) const { return relaxed ? strict * 1e3 : strict; }
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string num(long double v) { return num(static_cast<double>(v)); }

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

// Column-aligned plain text.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      width.resize(std::max(width.size(), r.size()), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) line += "  ";
        line += r[i];
        if (i + 1 < r.size()) line.append(width[i] - r[i].size(), ' ');
      }
      out << line << '\n';
    }
  }

  void print_csv(std::ostream& out) const {
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

void emit(const RunConfig& cfg, std::ostream& out, const TextTable& table, const json& doc) {
  switch (cfg.format) {
    case Format::json:
      out << doc.dump(2) << '\n';
      break;
    case Format::csv:
      table.print_csv(out);
      break;
    case Format::table:
      table.print(out);
      break;
  }
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ParseError("expected a range lo..hi", 0);
  try {
    const auto lo = std::stoul(text.substr(0, dots));
    const auto hi = std::stoul(text.substr(dots + 2));
    if (hi < lo) throw ParseError("range end below its start", dots);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ParseError("range bounds must be nonnegative integers", 0);
  }
}

std::vector<std::optional<double>> parse_c_list(const std::string& text) {
  std::vector<std::optional<double>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (item == "inf" || item == "max") {
      out.push_back(std::nullopt);
    } else {
      double v = 0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !(v > 0))
        throw ParseError("exponent list items are positive numbers or 'inf'", start);
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string c_label(const std::optional<double>& c) { return c ? num(*c) : "inf"; }

json c_json(const std::optional<double>& c) { return c ? json(*c) : json("inf"); }

ConvergentTable table_for(const ParsedNumber& x, std::size_t k_max, const RunConfig& cfg) {
  if (const auto* r = std::get_if<Rational>(&x)) return build_convergents(*r, k_max, cfg.precision_bits);
  return build_convergents(std::get<QuadraticIrrational>(x), k_max, cfg.precision_bits);
}

QuadraticIrrational require_quadratic(const std::string& text) {
  const ParsedNumber x = parse_number(text);
  if (const auto* q = std::get_if<QuadraticIrrational>(&x)) return *q;
  throw ParseError("expected a periodic expansion such as [1; (1)]", 0);
}

Target target_of(const ParsedNumber& x, const RunConfig& cfg) {
  if (const auto* r = std::get_if<Rational>(&x)) return *r;
  return IrrationalTarget{std::get<QuadraticIrrational>(x),
                          cfg.precision_bits ? cfg.precision_bits : 256u};
}

std::string target_label(const ParsedNumber& x) {
  if (const auto* r = std::get_if<Rational>(&x)) return r->to_string();
  return std::get<QuadraticIrrational>(x).to_string();
}

// Table deep enough for the spectral fit.
ConvergentTable spectral_table(const QuadraticIrrational& a, std::size_t k_max) {
  return build_convergents(a, std::max(k_max, a.s() + 3 * a.p() + 2));
}

// ---- cf -------------------------------------------------------------------

int cmd_cf(const std::string& text, std::size_t k_max, const RunConfig& cfg, std::ostream& out) {
  const ParsedNumber x = parse_number(text);
  const ConvergentTable t = table_for(x, k_max, cfg);

  TextTable tab({"k", "a", "p", "q", "delta"});
  json doc;
  doc["input"] = text;
  doc["canonical"] = target_label(x);
  json rows = json::array();
  for (std::size_t k = 0; k <= t.k_max(); ++k) {
    const auto& e = t[k];
    const double d = e.delta.to_double();
    tab.add({std::to_string(k), std::to_string(e.a), e.p.get_str(), e.q.get_str(), num(d)});
    rows.push_back({{"k", k}, {"a", e.a}, {"p", e.p.get_str()}, {"q", e.q.get_str()}, {"delta", jnum(d)}});
  }
  doc["precision_bits"] = t.precision_bits();

  std::ostringstream summary;
  if (const auto* r = std::get_if<Rational>(&x)) {
    json digits = json::array();
    std::string line = "digits:";
    for (const auto& d : cf_of_rational(*r)) {
      digits.push_back(d.get_str());
      line += " " + d.get_str();
    }
    doc["digits"] = digits;
    summary << line << '\n';
  } else {
    const auto& a = std::get<QuadraticIrrational>(x);
    const ConvergentTable deep = spectral_table(a, t.k_max());
    const SpectralData sd = spectral(a, deep);
    const K0Report k0 = observed_k0(a, deep, sd);
    json spec;
    spec["eta"] = jnum(sd.eta.to_double());
    spec["lambda"] = jnum(sd.lambda);
    spec["trace"] = sd.trace.get_str();
    spec["det"] = sd.det;
    spec["kappa"] = jnum(sd.kappa);
    spec["mean_partial_quotient"] = jnum(avg_partial_quotient(a));
    spec["k0"] = k0.k0 ? json(*k0.k0) : json("undetermined");
    summary << "lambda: " << num(sd.lambda) << "\neta: " << num(sd.eta.to_double())
            << "\nkappa: " << num(sd.kappa) << "\nk0: "
            << (k0.k0 ? std::to_string(*k0.k0) : "undetermined") << '\n';
    json residues = json::array();
    for (std::size_t r = 1; r <= sd.p; ++r) {
      const IntervalSpec I = interval_I(a, sd, r);
      residues.push_back({{"r", r},
                          {"C", jnum(sd.C[r - 1].to_double())},
                          {"D", jnum(sd.D[r - 1].to_double())},
                          {"E", jnum(sd.E[r - 1].to_double())},
                          {"B", jnum(sd.B[r - 1].to_double())},
                          {"alpha_r", sd.alpha_rev[r - 1].to_string()},
                          {"interval", {jnum(I.lo), jnum(I.hi)}}});
      summary << "r=" << r << ": B=" << num(sd.B_of(r)) << " C=" << num(sd.C[r - 1].to_double())
              << " D=" << num(sd.D[r - 1].to_double())
              << " E=" << num(sd.E[r - 1].to_double()) << " alpha_r=" << sd.alpha_rev[r - 1].to_string()
              << " I=[" << num(I.lo) << ", " << num(I.hi) << "]\n";
    }
    spec["residues"] = residues;
    doc["spectral"] = spec;
  }
  doc["convergents"] = rows;

  emit(cfg, out, tab, doc);
  if (cfg.format == Format::table) out << summary.str();
  return kExitOk;
}

// ---- jones / sudler -------------------------------------------------------

int cmd_jones(const std::string& text, const RunConfig& cfg, std::ostream& out) {
  const Rational x = parse_rational(text);
  const double logJ = static_cast<double>(jones_F(x, cfg.scan));
  const bool show = logJ < std::log(1e300);
  json doc{{"x", x.to_string()}, {"logJ", jnum(logJ)}, {"J", show ? json(std::exp(logJ)) : json(nullptr)}};
  TextTable tab({"x", "logJ", "J"});
  tab.add({x.to_string(), num(logJ), show ? num(std::exp(logJ)) : "-"});
  emit(cfg, out, tab, doc);
  return kExitOk;
}

int cmd_sudler(const std::string& text, std::uint64_t n_max, const RunConfig& cfg,
               std::ostream& out) {
  const ParsedNumber x = parse_number(text);
  const LogProductStream s = sudler_stream(target_of(x, cfg), n_max, cfg.scan);
  const std::string label = target_label(x);
  TextTable tab({"N", "logP"});
  json doc = json::array();
  for (std::uint64_t N = 0; N <= n_max; ++N) {
    const double v = static_cast<double>(s.values[N]);
    if (cfg.format == Format::json)
      doc.push_back({{"target", label}, {"N", N}, {"logP", jnum(v)}});
    else
      tab.add({std::to_string(N), num(v)});
  }
  emit(cfg, out, tab, doc);
  return kExitOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyOptions {
  std::string suite;
  std::size_t random = 1000;
  std::uint64_t bmax = 100000;
  std::uint64_t seed = 1;
  bool exhaustive = false;
  std::string alpha = "[1; (1)]";
  std::size_t from_k = 0;
  std::size_t upto_k = 0;
  double budget = 1e8;
};

struct Record {
  std::string name;
  double value;
  double residual;
  double bound;
  bool pass;
};

std::vector<SmallFraction> fraction_corpus(const VerifyOptions& o) {
  std::vector<SmallFraction> out;
  if (o.exhaustive) {
    for (std::int64_t b = 1; b <= static_cast<std::int64_t>(o.bmax); ++b)
      for (std::int64_t a = 0; a < b; ++a)
        if (std::gcd(a, b) == 1) out.push_back({a, b});
    return out;
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::int64_t> pick_b(1, static_cast<std::int64_t>(o.bmax));
  while (out.size() < o.random) {
    const std::int64_t b = pick_b(rng);
    std::uniform_int_distribution<std::int64_t> pick_a(0, b - 1);
    const std::int64_t a = pick_a(rng);
    if (std::gcd(a, b) == 1) out.push_back({a, b});
  }
  return out;
}

std::string frac_label(const SmallFraction& f) {
  return std::to_string(f.a) + "/" + std::to_string(f.b);
}

void identity_suite(const VerifyOptions& o, const RunConfig& cfg, std::vector<Record>& records,
                    std::vector<std::string>& counterexamples) {
  const auto corpus = fraction_corpus(o);
  double worst_reflection = 0, worst_last = 0, worst_average = 0;
  double bound_reflection = 0, bound_last = 0, bound_average = 0;
  bool ok_reflection = true, ok_last = true, ok_average = true;
  for (const auto& f : corpus) {
    const auto b = static_cast<std::uint64_t>(f.b);
    const double tol = cfg.tolerance(identity_tolerance(double(b)));
    const double tol_avg = tol / 10;
    const double tol_last = tol / 100;
    bound_reflection = std::max(bound_reflection, tol);
    bound_last = std::max(bound_last, tol_last);
    bound_average = std::max(bound_average, tol_avg);
    const auto v = prefix_values(log_source(f), b - 1, cfg.scan);
    const long double log_b = std::log(static_cast<long double>(b));
    double refl = 0;
    long double sum = 0;
    for (std::uint64_t N = 0; N < b; ++N) {
      refl = std::max(refl, static_cast<double>(std::fabs(v[N] + v[b - N - 1] - log_b)));
      sum += v[N];
    }
    const double last = std::fabs(std::expm1(static_cast<double>(v[b - 1] - log_b)));
    const double avg = static_cast<double>(std::fabs(sum / static_cast<long double>(b) - log_b / 2));
    worst_reflection = std::max(worst_reflection, refl);
    worst_last = std::max(worst_last, last);
    worst_average = std::max(worst_average, avg);
    auto flag = [&](bool& ok, double value, double bound, const char* what) {
      if (value <= bound) return;
      ok = false;
      if (counterexamples.size() < 10)
        counterexamples.push_back(frac_label(f) + " " + what + " residual " + num(value));
    };
    if (o.suite == "reflection") {
      flag(ok_reflection, refl, tol, "reflection");
      flag(ok_last, last, tol_last, "last term");
    } else {
      flag(ok_average, avg, tol_avg, "average");
    }
  }
  const double n = static_cast<double>(corpus.size());
  if (o.suite == "reflection") {
    records.push_back({"reflection", n, worst_reflection, bound_reflection, ok_reflection});
    records.push_back({"last term", n, worst_last, bound_last, ok_last});
  } else {
    records.push_back({"average log", n, worst_average, bound_average, ok_average});
  }
}

int cmd_verify(const VerifyOptions& o, const RunConfig& cfg, std::ostream& out) {
  std::vector<Record> records;
  std::vector<std::string> counterexamples;

  if (o.suite == "reflection" || o.suite == "average") {
    identity_suite(o, cfg, records, counterexamples);
  } else if (o.suite == "cotangent") {
    const QuadraticIrrational a = require_quadratic(o.alpha);
    const std::size_t hi = o.upto_k ? o.upto_k : 15;
    const ConvergentTable t = build_convergents(a, hi, cfg.precision_bits);
    double cost = 0;
    for (std::size_t k = std::max<std::size_t>(o.from_k, 1); k <= hi; ++k) cost += t[k].q.get_d();
    if (cost > o.budget) throw BudgetError("cotangent sweep exceeds the factor budget");
    for (std::size_t k = std::max<std::size_t>(o.from_k, 1); k <= hi; ++k) {
      const CotangentReport r = cotangent_sweep(t, k, cfg.scan);
      records.push_back({"k=" + std::to_string(k), static_cast<double>(r.max_abs),
                         static_cast<double>(r.max_abs) / r.bound, r.bound, r.within});
    }
  } else if (o.suite == "transfer") {
    const QuadraticIrrational a = require_quadratic(o.alpha);
    const std::size_t lo = std::max<std::size_t>(o.from_k ? o.from_k : 5, 1);
    const std::size_t hi = o.upto_k ? o.upto_k : 12;
    const ConvergentTable t = build_convergents(a, hi, cfg.precision_bits);
    double cost = 0;
    for (std::size_t k = lo; k <= hi; ++k) cost += 2 * t[k].q.get_d();
    if (cost > o.budget) throw BudgetError("transfer sweep exceeds the factor budget");
    double fitted = 0;
    for (std::size_t k = lo; k <= hi; ++k) {
      const TransferReport r = transfer_sweep(t, k, cfg.scan);
      fitted = std::max(fitted, r.ratio);
      records.push_back({"k=" + std::to_string(k), static_cast<double>(r.residual), r.ratio,
                         r.bound, r.ratio <= 50});
    }
    records.push_back({"fitted constant", fitted, fitted, 50, fitted <= 50});
  } else if (o.suite == "factorization") {
    const QuadraticIrrational a = require_quadratic(o.alpha);
    const std::size_t hi = o.upto_k ? o.upto_k : 10;
    const ConvergentTable t = build_convergents(a, std::max<std::size_t>(hi, 2), cfg.precision_bits);
    if (t[hi].q.get_d() > o.budget) throw BudgetError("factorization sweep exceeds the factor budget");
    const double tol = cfg.tolerance(1e-8);
    const double worst = static_cast<double>(factorization_sweep(t, t[hi].q.get_ui(), cfg.scan));
    records.push_back({"N < q_" + std::to_string(hi), t[hi].q.get_d(), worst, tol, worst <= tol});
  } else if (o.suite == "bounds") {
    const QuadraticIrrational a = require_quadratic(o.alpha);
    const ConvergentTable t = spectral_table(a, 30);
    const SpectralData sd = spectral(a, t);
    const K0Report k0 = observed_k0(a, t, sd);
    const std::size_t lo = (k0.k0 ? *k0.k0 : a.s() + 1) + 2;
    const std::size_t hi = budget_k_hi(a, lo, o.budget);
    EstimateOptions eo;
    eo.budget = o.budget;
    eo.scan = cfg.scan;
    for (const auto& rep : estimate_K(a, {1.0, 2.0, std::nullopt}, lo, hi, eo))
      for (const auto& b : rep.bounds)
        if (!b.informational)
          records.push_back({"c=" + c_label(rep.c) + " " + b.name, b.lhs, b.lhs - b.rhs, b.rhs, b.pass});
  } else {
    throw ParseError("unknown suite '" + o.suite + "'", 0);
  }

  bool pass = true;
  for (const auto& r : records) pass = pass && r.pass;

  TextTable tab({"name", "value", "residual", "bound", "pass"});
  json recs = json::array();
  for (const auto& r : records) {
    tab.add({r.name, num(r.value), num(r.residual), num(r.bound), r.pass ? "yes" : "no"});
    recs.push_back({{"name", r.name},
                    {"value", jnum(r.value)},
                    {"residual", jnum(r.residual)},
                    {"bound", jnum(r.bound)},
                    {"pass", r.pass}});
  }
  json doc{{"suite", o.suite}, {"pass", pass}, {"records", recs}, {"counterexamples", counterexamples}};
  emit(cfg, out, tab, doc);
  if (cfg.format == Format::table) {
    for (const auto& c : counterexamples) out << "counterexample: " << c << '\n';
    out << "suite " << o.suite << ": " << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? kExitOk : kExitSuiteFailed;
}

// ---- estimate-k -----------------------------------------------------------

int cmd_estimate(const std::string& text, const std::string& c_text, const std::string& k_text,
                 double budget, const RunConfig& cfg, std::ostream& out) {
  const QuadraticIrrational a = require_quadratic(text);
  const auto cs = parse_c_list(c_text);
  std::size_t lo = 0, hi = 0;
  if (!k_text.empty()) {
    std::tie(lo, hi) = parse_range(k_text);
  } else {
    const ConvergentTable t = spectral_table(a, 30);
    const SpectralData sd = spectral(a, t);
    const K0Report k0 = observed_k0(a, t, sd);
    lo = (k0.k0 ? *k0.k0 : a.s() + 1) + 2;
    hi = budget_k_hi(a, lo, budget);
  }
  EstimateOptions eo;
  eo.budget = budget;
  eo.scan = cfg.scan;
  const auto reports = estimate_K(a, cs, lo, hi, eo);

  json doc = json::array();
  TextTable tab({"c", "K_hat", "intercept", "band", "slope_band", "window", "unstable"});
  std::ostringstream details;
  for (const auto& r : reports) {
    json bounds = json::array();
    for (const auto& b : r.bounds) {
      bounds.push_back({{"name", b.name},
                        {"lhs", jnum(b.lhs)},
                        {"rhs", jnum(b.rhs)},
                        {"pass", b.pass},
                        {"informational", b.informational}});
      details << "c=" << c_label(r.c) << "  " << b.name << ": " << num(b.lhs) << " <= " << num(b.rhs)
              << "  " << (b.pass ? "pass" : "fail") << (b.informational ? " (observational)" : "")
              << '\n';
    }
    json values = json::array();
    for (const double v : r.per_k_values) values.push_back(jnum(v));
    doc.push_back({{"alpha", r.alpha.to_string()},
                   {"c", c_json(r.c)},
                   {"K_hat", jnum(r.K_hat)},
                   {"intercept", jnum(r.intercept)},
                   {"k_window", {r.k_lo, r.k_hi}},
                   {"per_k_values", values},
                   {"fit_residual_band", jnum(r.fit_residual_band)},
                   {"slope_band", jnum(r.slope_band)},
                   {"unstable", r.unstable},
                   {"bounds", bounds}});
    tab.add({c_label(r.c), num(r.K_hat), num(r.intercept), num(r.fit_residual_band),
             num(r.slope_band), std::to_string(r.k_lo) + ".." + std::to_string(r.k_hi),
             r.unstable ? "yes" : "no"});
  }
  emit(cfg, out, tab, doc);
  if (cfg.format == Format::table) out << details.str();
  return kExitOk;
}

// ---- limitfn --------------------------------------------------------------

struct LimitOptions {
  std::string alpha;
  std::size_t r = 1;
  std::optional<double> from, to;
  std::size_t points = 200;
  std::uint64_t n_trunc = std::uint64_t{1} << 16;
  double tail_tolerance = 1e-6;
  bool convergence = false;
  std::string m_range = "3..10";
};

int cmd_limitfn(const LimitOptions& o, const RunConfig& cfg, std::ostream& out) {
  const QuadraticIrrational a = require_quadratic(o.alpha);
  LimitOptions opt = o;
  std::size_t m_hi = 0;
  std::size_t m_lo = 0;
  if (opt.convergence) std::tie(m_lo, m_hi) = parse_range(opt.m_range);
  const std::size_t depth = a.s() + (m_hi + 1) * a.p() + a.p();
  const ConvergentTable t = spectral_table(a, std::max<std::size_t>(depth, 30));
  const SpectralData sd = spectral(a, t);
  LimitFunctionSpec spec = make_limit_spec(sd, opt.r);
  spec.n_trunc = opt.n_trunc;
  spec.tail_tolerance = opt.tail_tolerance;
  const LimitFunction G(spec);
  const IntervalSpec I = interval_I(a, sd, opt.r);
  const double lo = opt.from.value_or(I.lo);
  const double hi = opt.to.value_or(I.hi);

  std::vector<double> grid;
  const std::size_t n = std::max<std::size_t>(opt.points, 1);
  for (std::size_t i = 0; i < n; ++i)
    grid.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));

  if (opt.convergence) {
    std::vector<std::int64_t> ms;
    for (std::size_t m = m_lo; m <= m_hi; ++m) ms.push_back(static_cast<std::int64_t>(m));
    const auto rows = convergence_report(t, sd, G, grid, ms, cfg.scan);
    TextTable tab({"m", "q_k", "sup_error", "rate_envelope"});
    json doc = json::array();
    for (const auto& r : rows) {
      tab.add({std::to_string(r.m), r.q_k.get_str(), num(r.sup_error), num(r.rate_envelope)});
      doc.push_back({{"m", r.m},
                     {"q_k", r.q_k.get_str()},
                     {"sup_error", jnum(r.sup_error)},
                     {"rate_envelope", jnum(r.rate_envelope)}});
    }
    RunConfig c = cfg;
    if (c.format == Format::table) c.format = Format::csv;
    emit(c, out, tab, doc);
    return kExitOk;
  }

  const double zero = -G.B();
  if (zero >= lo && zero <= hi && std::find(grid.begin(), grid.end(), zero) == grid.end()) {
    grid.push_back(zero);
    std::sort(grid.begin(), grid.end());
  }
  TextTable tab({"x", "G", "tail_bound"});
  json doc = json::array();
  for (const double x : grid) {
    const LimitValue v = G(x);
    tab.add({num(x), num(v.value), num(v.tail_bound)});
    doc.push_back({{"x", jnum(x)}, {"G", jnum(v.value)}, {"tail_bound", jnum(v.tail_bound)}});
  }
  RunConfig c = cfg;
  if (c.format == Format::table) c.format = Format::csv;
  emit(c, out, tab, doc);
  return kExitOk;
}

// ---- vol41 / h-sequence ---------------------------------------------------

int cmd_vol41(unsigned panels, const RunConfig& cfg, std::ostream& out) {
  const double v = vol_41(panels);
  const double refined = vol_41(2 * panels);
  const double over = v / (2 * std::numbers::pi);
  TextTable tab({"vol", "vol_over_2pi", "step_halving_change"});
  tab.add({num(v), num(over), num(std::fabs(refined - v))});
  json doc{{"vol", jnum(v)}, {"vol_over_2pi", jnum(over)}, {"step_halving_change", jnum(std::fabs(refined - v))}};
  emit(cfg, out, tab, doc);
  return kExitOk;
}

int cmd_h_sequence(const std::string& text, std::size_t k_max, const RunConfig& cfg,
                   std::ostream& out) {
  const QuadraticIrrational a = require_quadratic(text);
  const auto steps = zagier_h_sequence(a, k_max, cfg.scan);
  TextTable tab({"k", "h", "cesaro_mean"});
  json doc = json::array();
  for (const auto& s : steps) {
    tab.add({std::to_string(s.k), num(s.h), num(s.cesaro_mean)});
    doc.push_back({{"k", s.k}, {"h", jnum(static_cast<double>(s.h))}, {"cesaro_mean", jnum(static_cast<double>(s.cesaro_mean))}});
  }
  emit(cfg, out, tab, doc);
  return kExitOk;
}

template <class T>
std::optional<T> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  T out{};
  const std::string_view s(v);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError(std::string("environment variable ") + name + " is not a number", 0);
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sudler products, the figure-eight quantum invariant and their growth constants"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  unsigned precision_bits = 0;
  std::uint64_t chunk_size = cfg.scan.chunk_size;
  int workers = 1;
  bool as_json = false, as_csv = false;
  std::string profile = "strict";

  auto* opt_bits = app.add_option("--precision-bits", precision_bits, "Working precision in bits (>= 64)");
  app.add_option("--chunk-size", chunk_size, "Factors per scan chunk")->check(CLI::PositiveNumber);
  auto* opt_workers = app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* fj = app.add_flag("--json", as_json, "JSON output");
  auto* fc = app.add_flag("--csv", as_csv, "CSV output");
  fj->excludes(fc);
  app.add_option("--tolerance-profile", profile, "strict or relaxed (tolerances x 1e3)")
      ->check(CLI::IsMember({"strict", "relaxed"}));

  std::string text, c_text = "inf", k_text, suite;
  std::size_t k_max = 10;
  std::uint64_t n_max = 0;
  double budget = 1e8;
  unsigned panels = 8;
  VerifyOptions vo;
  LimitOptions lo;

  auto* cf = app.add_subcommand("cf", "Continued fraction, convergents and spectral data");
  cf->add_option("alpha", text, "a/b or [a0; a1, (b1, ..., bp)]")->required();
  cf->add_option("--k-max", k_max, "Deepest convergent");

  auto* jones = app.add_subcommand("jones", "log J of the figure-eight knot at e(a/b)");
  jones->add_option("x", text, "a/b")->required();

  auto* sudler = app.add_subcommand("sudler", "log P_N for N = 0..n");
  sudler->add_option("target", text, "a/b or periodic expansion")->required();
  sudler->add_option("--n", n_max, "Largest N")->required();

  auto* verify = app.add_subcommand("verify", "Run an identity or bound suite");
  verify->add_option("suite", vo.suite, "reflection, average, cotangent, transfer, factorization, bounds")
      ->required()
      ->check(CLI::IsMember({"reflection", "average", "cotangent", "transfer", "factorization", "bounds"}));
  verify->add_option("--random", vo.random, "Random fractions");
  verify->add_option("--bmax", vo.bmax, "Largest denominator")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vo.seed, "Random seed");
  verify->add_flag("--exhaustive", vo.exhaustive, "Every reduced fraction up to --bmax");
  verify->add_option("--alpha", vo.alpha, "Quadratic irrational");
  verify->add_option("--from-k", vo.from_k, "First convergent index");
  verify->add_option("--upto-k", vo.upto_k, "Last convergent index");
  verify->add_option("--budget", vo.budget, "Factor budget");

  auto* estimate = app.add_subcommand("estimate-k", "Fit the growth constants along convergents");
  estimate->add_option("alpha", text, "Quadratic irrational")->required();
  estimate->add_option("--c", c_text, "Comma-separated exponents, 'inf' for the maximum");
  estimate->add_option("--k", k_text, "Fit window lo..hi");
  estimate->add_option("--budget", budget, "Factor budget over the window");

  auto* limitfn = app.add_subcommand("limitfn", "Sweep the limit function of a residue class");
  limitfn->add_option("alpha", lo.alpha, "Quadratic irrational")->required();
  limitfn->add_option("--r", lo.r, "Residue class")->check(CLI::PositiveNumber);
  limitfn->add_option("--from", lo.from, "Grid start (default: interval start)");
  limitfn->add_option("--to", lo.to, "Grid end (default: interval end)");
  limitfn->add_option("--points", lo.points, "Grid points");
  limitfn->add_option("--n-trunc", lo.n_trunc, "Initial truncation");
  limitfn->add_option("--tail-tolerance", lo.tail_tolerance, "Tail tolerance");
  limitfn->add_flag("--convergence", lo.convergence, "Compare against perturbed products instead");
  limitfn->add_option("--m", lo.m_range, "Block range for --convergence");

  auto* vol = app.add_subcommand("vol41", "Hyperbolic volume of the figure-eight knot");
  vol->add_option("--panels", panels, "Gauss panels")->check(CLI::PositiveNumber);

  auto* hseq = app.add_subcommand("h-sequence", "Increments of log J along convergents of [0; (a)]");
  hseq->add_option("alpha", text, "[0; (a)]")->required();
  hseq->add_option("--k-max", k_max, "Deepest convergent");

  std::vector<const char*> argv{"sudlerlab"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    if (auto v = env_number<unsigned>("SUDLERLAB_PRECISION_BITS")) precision_bits = *v;
    if (auto v = env_number<int>("SUDLERLAB_WORKERS")) workers = *v;
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  (void)opt_bits;
  (void)opt_workers;

  if (precision_bits != 0 && precision_bits < 64) {
    err << "error: --precision-bits must be at least 64\n";
    return kExitUsage;
  }
  if (workers < 1) {
    err << "error: --workers must be at least 1\n";
    return kExitUsage;
  }
  cfg.precision_bits = precision_bits;
  cfg.scan.chunk_size = chunk_size;
  cfg.scan.workers = workers;
  cfg.format = as_json ? Format::json : (as_csv ? Format::csv : Format::table);
  cfg.relaxed = profile == "relaxed";

  try {
    if (*cf) return cmd_cf(text, k_max, cfg, out);
    if (*jones) return cmd_jones(text, cfg, out);
    if (*sudler) return cmd_sudler(text, n_max, cfg, out);
    if (*verify) return cmd_verify(vo, cfg, out);
    if (*estimate) return cmd_estimate(text, c_text, k_text, budget, cfg, out);
    if (*limitfn) return cmd_limitfn(lo, cfg, out);
    if (*vol) return cmd_vol41(panels, cfg, out);
    if (*hseq) return cmd_h_sequence(text, k_max, cfg, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CanonicalFormError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace sudlerlab
