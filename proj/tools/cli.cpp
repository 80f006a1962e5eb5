#include "cli.hpp"

#include "embezzle/classifier.hpp"
#include "embezzle/protocol.hpp"
#include "embezzle/state.hpp"
#include "embezzle/trunc_rep.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace embezzle::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace cl = embezzle::classify;
using trunc::TruncatedRep;
using words::Element;
using words::Monomial;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string dec(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

Json integer_json(const Integer& z) { return z.fits_slong_p() ? Json(z.get_si()) : Json(z.get_str()); }

// One result, rendered as json, csv or pretty from the same values.
struct Report {
  Json summary = Json::object();
  std::vector<std::pair<std::string, Json>> tables;
  Json extra = Json::object();  // json-only detail, e.g. per-n report objects
  bool has_checks = false;
  bool pass = true;

  Json& table(const std::string& name) {
    for (auto& [k, rows] : tables)
      if (k == name) return rows;
    tables.emplace_back(name, Json::array());
    return tables.back().second;
  }
  void require(bool ok) {
    has_checks = true;
    pass = pass && ok;
  }
};

std::string cell_text(const Json& v) {
  switch (v.type()) {
    case Json::value_t::string:
      return v.get<std::string>();
    case Json::value_t::number_float:
      return dec(v.get<double>());
    case Json::value_t::null:
      return "";
    case Json::value_t::array:
      if (std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); })) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : ",") + cell_text(e);
        return s;
      }
      return v.dump();
    default:
      return v.dump();
  }
}

std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

std::vector<std::string> columns_of(const Json& rows) {
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (const auto& [k, v] : row.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  return cols;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_json(const Report& r, std::ostream& os) {
  Json j = r.summary;
  for (const auto& [k, v] : r.extra.items()) j[k] = v;
  if (!r.tables.empty()) {
    Json t = Json::object();
    for (const auto& [name, rows] : r.tables) t[name] = rows;
    j["tables"] = t;
  }
  if (r.has_checks) j["pass"] = r.pass;
  os << j.dump(2) << "\n";
}

// A single table is written as is; several share one header with a leading
// "table" column; no table means one row of summary values.
void write_csv(const Report& r, std::ostream& os) {
  Json rows = Json::array();
  if (r.tables.empty()) {
    Json row = r.summary;
    if (r.has_checks) row["pass"] = r.pass;
    rows.push_back(row);
  } else if (r.tables.size() == 1) {
    rows = r.tables[0].second;
  } else {
    for (const auto& [name, t] : r.tables)
      for (const auto& row : t) {
        Json tagged = {{"table", name}};
        for (const auto& [k, v] : row.items()) tagged[k] = v;
        rows.push_back(tagged);
      }
  }
  auto cols = columns_of(rows);
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << csv_field(cols[k]);
  os << "\r\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < cols.size(); ++k)
      os << (k ? "," : "") << csv_field(row.contains(cols[k]) ? cell_text(row[cols[k]]) : "");
    os << "\r\n";
  }
}

void write_pretty(const Report& r, std::ostream& os) {
  for (const auto& [k, v] : r.summary.items()) os << k << ": " << cell_text(v) << "\n";
  for (const auto& [name, rows] : r.tables) {
    os << "\n[" << name << "]\n";
    auto cols = columns_of(rows);
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) width[k] = display_width(cols[k]);
    for (const auto& row : rows) {
      auto& line = cells.emplace_back();
      for (std::size_t k = 0; k < cols.size(); ++k) {
        line.push_back(row.contains(cols[k]) ? cell_text(row[cols[k]]) : "");
        width[k] = std::max(width[k], display_width(line.back()));
      }
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (std::size_t k = 0; k < line.size(); ++k) {
        os << line[k];
        if (k + 1 < line.size()) os << std::string(width[k] - display_width(line[k]) + 2, ' ');
      }
      os << "\n";
    };
    emit(cols);
    for (const auto& line : cells) emit(line);
  }
  if (r.has_checks) os << "\nresult: " << (r.pass ? "pass" : "FAIL") << "\n";
}

struct Config {
  std::string format = "pretty";
  std::string output;
  std::uint64_t seed = 1;
  double tol = 0;

  unsigned d = 0;
  std::string alpha2;

  std::string expr;
  std::size_t max_len = 0;
  std::string n_range;
  std::string check = "residuals";
  unsigned L = 2;
  unsigned span = 0;
  bool random_basis = false;
  std::string advisory;
  std::uint64_t trial_bound = FactorLimits{}.trial_bound;
  std::string poly;
  std::string m_range = "1..10";
  std::string q;
};

double tol_or(const Config& c, double fallback) { return c.tol > 0 ? c.tol : fallback; }

SchmidtSpec make_spec(const Config& c) {
  if (c.alpha2.empty()) return SchmidtSpec::uniform(c.d ? c.d : 2);
  auto s = SchmidtSpec::parse(c.alpha2);
  if (c.d && c.d != s.d())
    throw UsageError("--d " + std::to_string(c.d) + " does not match the " + std::to_string(s.d()) +
                     " Schmidt coefficients given");
  return s;
}

long parse_long(std::string_view s, const std::string& what) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(what + ": cannot read '" + std::string(s) + "'");
  return v;
}

// "5" or "2..8"
std::pair<long, long> parse_range(const std::string& text, const std::string& what, long min) {
  std::string_view t = text;
  auto dots = t.find("..");
  long lo = parse_long(t.substr(0, dots), what);
  long hi = dots == std::string_view::npos ? lo : parse_long(t.substr(dots + 2), what);
  if (lo < min) throw UsageError(what + " must be at least " + std::to_string(min) + ", got " + std::to_string(lo));
  if (hi < lo) throw UsageError(what + " range " + text + " is empty");
  return {lo, hi};
}

Json scalar_json(const words::Scalar& s) {
  auto one = [](const words::ScalarKey& k, const Rational& c) {
    Json j = {{"r", c.get_str()}, {"s", k.radicand.get_str()}};
    if (!k.exps.empty()) j["alpha"] = k.exps;
    return j;
  };
  if (s.is_zero()) return {{"r", "0"}, {"s", "1"}};
  if (s.terms().size() == 1) return one(s.terms().begin()->first, s.terms().begin()->second);
  Json arr = Json::array();
  for (const auto& [k, c] : s.terms()) arr.push_back(one(k, c));
  return arr;
}

Json element_json(const Element& e) {
  Json terms = Json::array();
  for (const auto& [m, c] : e.terms())
    terms.push_back({{"mu", m.mu.to_string(e.d())}, {"nu", m.nu.to_string(e.d())}, {"coeff", scalar_json(c)}});
  return {{"terms", terms}};
}

Json interval_json(const cl::RootInterval& r) { return Json::array({r.lo.get_str(), r.hi.get_str()}); }

Json poly_json(const cl::PolySpec& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs) a.push_back(integer_json(c));
  return a;
}

Json lambda_json(const cl::Lambda& l) {
  Json j = Json::object();
  if (l.rational) j["rational"] = l.rational->get_str();
  j["poly"] = poly_json(l.poly);
  j["interval"] = interval_json(l.interval);
  j["decimal"] = dec(l.value);
  return j;
}

// ---- state ----

Report cmd_state_eval(const Config& c) {
  if (c.expr.empty()) throw UsageError("state eval needs --expr");
  auto spec = make_spec(c);
  Report r;
  r.summary["command"] = "state eval";
  r.summary["spectrum"] = spec.describe();
  const bool bipartite = c.expr.find('W') != std::string::npos;
  if (bipartite) {
    auto x = words::parse_bielement(c.expr, spec.d());
    auto v = words::s_bipartite(x, spec);
    auto f = words::flip_reduce(x, spec);
    auto v2 = words::omega(f, spec);
    r.summary["expr"] = x.to_string();
    r.summary["exact"] = v.to_string();
    r.summary["decimal"] = dec(v.to_double());
    r.summary["flip_reduce"] = f.to_string();
    r.summary["flip_value"] = v2.to_string();
    r.require(v == v2);
  } else {
    auto e = words::parse_element(c.expr, spec.d());
    auto v = words::omega(e, spec);
    r.summary["expr"] = e.to_string();
    r.summary["exact"] = v.to_string();
    r.summary["decimal"] = dec(v.to_double());
    r.extra["element"] = element_json(e);
  }
  return r;
}

Report cmd_state_table(const Config& c) {
  auto spec = make_spec(c);
  const std::size_t L = c.max_len ? c.max_len : 3;
  Report r;
  r.summary["command"] = "state table";
  r.summary["spectrum"] = spec.describe();
  r.summary["max_len"] = L;
  auto& rows = r.table("omega");
  for (const auto& m : words::monomials_up_to(spec.d(), L)) {
    auto v = words::omega(Element::monomial(spec.d(), m.mu, m.nu), spec);
    rows.push_back({{"monomial", words::monomial_to_string(m, spec.d())},
                    {"mu", m.mu.to_string(spec.d())},
                    {"nu", m.nu.to_string(spec.d())},
                    {"exact", v.to_string()},
                    {"decimal", dec(v.to_double())}});
  }
  return r;
}

// ---- simulate ----

// Closed forms for the canonical instance at depth n.
double expected_vector(const std::vector<double>& a, unsigned n, Eigen::Index i, Eigen::Index j) {
  return i == j ? a[static_cast<std::size_t>(i)] / std::sqrt(n + 1.0) : 0.0;
}
double expected_inner(const std::vector<double>& a, unsigned n, Eigen::Index i, Eigen::Index j) {
  return i == j ? -a[static_cast<std::size_t>(i)] / (n + 1.0) : 0.0;
}

std::string pair_label(const char* name, Eigen::Index i, Eigen::Index j) {
  return std::string(name) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

Report cmd_simulate(const Config& c) {
  auto spec = make_spec(c);
  auto [lo, hi] = parse_range(c.n_range.empty() ? "2..6" : c.n_range, "--n", 1);
  const std::vector<std::string> known = {"residuals", "convergence", "conjugation", "structure", "kms"};
  std::vector<std::string> checks;
  if (c.check == "all") {
    checks = known;
  } else {
    std::stringstream ss(c.check);
    for (std::string item; std::getline(ss, item, ',');) {
      if (std::find(known.begin(), known.end(), item) == known.end())
        throw UsageError("unknown check '" + item + "'; expected residuals, convergence, conjugation, structure, kms or all");
      checks.push_back(item);
    }
  }
  auto wants = [&](const char* k) { return std::find(checks.begin(), checks.end(), k) != checks.end(); };
  // residual law pinned at 1e-10, the exact-target checks at 1e-12
  const double tol_res = tol_or(c, 1e-10), tol = tol_or(c, 1e-12);
  const std::size_t max_len = c.max_len ? c.max_len : 2;
  const unsigned d = spec.d();

  Report r;
  r.has_checks = true;
  r.summary["command"] = "simulate";
  r.summary["spectrum"] = spec.describe();
  const bool per_n = wants("residuals") || wants("convergence") || wants("conjugation") || wants("structure");
  if (per_n) r.summary["n"] = std::to_string(lo) + ".." + std::to_string(hi);
  r.summary["checks"] = checks;
  if (c.tol > 0) r.summary["tol"] = c.tol;

  std::vector<Monomial> monos;
  std::vector<ExactValue> exact;
  if (wants("convergence")) {
    for (auto& m : words::monomials_up_to(d, std::min<std::size_t>(max_len, static_cast<std::size_t>(lo)))) {
      exact.push_back(words::omega(Element::monomial(d, m.mu, m.nu), spec));
      monos.push_back(m);
    }
  }

  std::vector<double> xs, full;
  for (long nl = lo; per_n && nl <= hi; ++nl) {
    const auto n = static_cast<unsigned>(nl);
    auto rep = TruncatedRep::build(spec, n);
    const auto& a = rep.alpha();
    if (wants("residuals")) {
      auto rr = trunc::embezzle_residual(rep);
      auto& rows = r.table("residuals");
      auto row = [&](const std::string& metric, double v, double e) {
        const double diff = std::abs(v - e);
        r.require(diff <= tol_res);
        rows.push_back({{"n", n}, {"metric", metric}, {"value", v}, {"expected", e}, {"abs_diff", diff}});
      };
      for (Eigen::Index i = 0; i < rr.vector.rows(); ++i)
        for (Eigen::Index j = 0; j < rr.vector.cols(); ++j) row(pair_label("vector", i, j), rr.vector(i, j), expected_vector(a, n, i, j));
      for (Eigen::Index i = 0; i < rr.inner.rows(); ++i)
        for (Eigen::Index j = 0; j < rr.inner.cols(); ++j) row(pair_label("inner", i, j), rr.inner(i, j), expected_inner(a, n, i, j));
      row("full", rr.full, 1 / std::sqrt(n + 1.0));
      xs.push_back(n + 1.0);
      full.push_back(rr.full);
    }
    if (wants("convergence")) {
      auto& rows = r.table("convergence");
      for (std::size_t k = 0; k < monos.size(); ++k) {
        const auto& m = monos[k];
        const double rv = trunc::rep_state(rep, m);
        const double ev = exact[k].to_double();
        const double closed = ev * (n + 1.0 - static_cast<double>(m.mu.size())) / (n + 1.0);
        const double bound = static_cast<double>(std::max(m.mu.size(), m.nu.size())) / (n + 1.0);
        const double diff = std::abs(rv - ev);
        r.require(std::abs(rv - closed) <= tol && diff <= bound + tol);
        rows.push_back({{"n", n},
                        {"monomial", words::monomial_to_string(m, d)},
                        {"rep_value", rv},
                        {"exact_value", ev},
                        {"abs_diff", diff},
                        {"bound", bound}});
      }
    }
    if (wants("conjugation")) {
      const unsigned L = std::min(c.L, n);
      auto cr = trunc::modular_conjugation_check(rep, L);
      r.require(cr.max_defect <= tol);
      r.table("conjugation").push_back({{"n", n}, {"L", L}, {"monomials", cr.entries.size()}, {"max_defect", cr.max_defect}});
    }
    if (wants("structure")) {
      auto s = trunc::check_structure(rep);
      r.require(s.max() <= tol);
      r.table("structure").push_back({{"n", n},
                                      {"psi_norm_defect", s.psi_norm_defect},
                                      {"isometry_defect", s.isometry_defect},
                                      {"orthogonality_defect", s.orthogonality_defect},
                                      {"range_defect", s.range_defect},
                                      {"commutator", s.commutator}});
    }
  }
  if (xs.size() >= 3) {
    const double slope = trunc::loglog_slope(xs, full);
    r.summary["residual_slope"] = slope;
    r.require(std::abs(slope + 0.5) <= 0.05);
  }
  if (wants("kms")) {
    auto k = words::kms_verify(spec, c.L);
    r.summary["kms"] = k.pass ? "pass" : "fail";
    r.summary["kms_L"] = c.L;
    r.summary["kms_checked"] = k.checked;
    if (k.counterexample) {
      const auto& ce = *k.counterexample;
      r.summary["kms_counterexample"] = words::monomial_to_string(ce.a, d) + " , " + words::monomial_to_string(ce.x, d) +
                                        ": " + ce.lhs + " != " + ce.rhs;
    }
    r.require(k.pass);
  }
  return r;
}

// ---- protocol ----

Json report_json(const protocol::ConditionReport& c) {
  Json pp = Json::array();
  for (Eigen::Index i = 0; i < c.inner.rows(); ++i)
    for (Eigen::Index j = 0; j < c.inner.cols(); ++j) pp.push_back(Json::array({i, j, c.inner(i, j)}));
  return {{"condition", "inner-product"}, {"max_abs", c.max_abs}, {"per_pair", pp}, {"n", c.n},
          {"full", c.full}, {"consistent", c.consistent}};
}

Eigen::MatrixXd random_orthogonal(unsigned d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  for (unsigned j = 0; j < d; ++j)
    if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1;
  return q;
}

Report cmd_protocol_check(const Config& c) {
  auto spec = make_spec(c);
  auto [lo, hi] = parse_range(c.n_range.empty() ? "2..6" : c.n_range, "--n", 1);
  const double tol = tol_or(c, 1e-10);
  const unsigned d = spec.d();
  Report r;
  r.summary["command"] = "protocol check";
  r.summary["spectrum"] = spec.describe();
  r.summary["n"] = std::to_string(lo) + ".." + std::to_string(hi);
  r.summary["basis"] = c.random_basis ? "random (seed " + std::to_string(c.seed) + ")" : "canonical";

  std::optional<protocol::SchmidtNormalization> sn;
  if (c.random_basis) {
    std::mt19937_64 rng(c.seed);
    Eigen::MatrixXd uf = random_orthogonal(d, rng), ug = random_orthogonal(d, rng);
    Eigen::VectorXd al = Eigen::Map<const Eigen::VectorXd>(spec.alpha().data(), d);
    Eigen::MatrixXd phi = uf.transpose() * al.asDiagonal() * ug;
    sn = protocol::schmidt_normalize(phi);
  }

  Json reports = Json::array();
  auto& rows = r.table("residuals");
  for (long nl = lo; nl <= hi; ++nl) {
    const auto n = static_cast<unsigned>(nl);
    auto rep = std::make_shared<const TruncatedRep>(TruncatedRep::build(spec, n));
    auto inst = protocol::canonical_instance(rep);
    if (sn) inst = protocol::conjugate(inst, *sn);
    auto cr = protocol::bipartite_check(inst);
    r.require(cr.consistent);
    reports.push_back(report_json(cr));
    const auto& a = rep->alpha();
    auto row = [&](const std::string& metric, double v, double e) {
      const double diff = std::abs(v - e);
      r.require(diff <= tol);
      rows.push_back({{"n", n}, {"metric", metric}, {"value", v}, {"expected", e}, {"abs_diff", diff}});
    };
    row("full", cr.full, 1 / std::sqrt(n + 1.0));
    row("max_abs", cr.max_abs, a[0] / (n + 1.0));
    for (Eigen::Index i = 0; i < cr.inner.rows(); ++i)
      for (Eigen::Index j = 0; j < cr.inner.cols(); ++j) row(pair_label("inner", i, j), cr.inner(i, j), expected_inner(a, n, i, j));
    for (Eigen::Index i = 0; i < cr.vector.rows(); ++i)
      for (Eigen::Index j = 0; j < cr.vector.cols(); ++j) row(pair_label("vector", i, j), cr.vector(i, j), expected_vector(a, n, i, j));
  }
  r.extra["reports"] = reports;
  return r;
}

std::size_t bob_dim_limit() {
  protocol::BobOptions o;
  if (std::getenv("EMBEZZLE_MAX_CELLS"))
    return static_cast<std::size_t>(std::sqrt(trunc::BuildLimits::from_env().max_cells));
  return o.max_doubled_dim;
}

Report cmd_protocol_build_bob(const Config& c) {
  auto spec = make_spec(c);
  auto [lo, hi] = parse_range(c.n_range.empty() ? "2..3" : c.n_range, "--n", 1);
  const double tol = tol_or(c, 1e-9);
  Report r;
  r.summary["command"] = "protocol build-bob";
  r.summary["spectrum"] = spec.describe();
  r.summary["n"] = std::to_string(lo) + ".." + std::to_string(hi);
  protocol::BobOptions opt;
  opt.max_doubled_dim = bob_dim_limit();
  Json reports = Json::array();
  for (long nl = lo; nl <= hi; ++nl) {
    const auto n = static_cast<unsigned>(nl);
    opt.span_len = c.span ? std::min(c.span, n) : 0;
    auto b = protocol::build_bob(std::make_shared<const TruncatedRep>(TruncatedRep::build(spec, n)), opt);
    auto cr = protocol::bipartite_check(b.instance);
    r.require(b.shift_match <= tol && b.t_on_psi_match <= tol && b.commutation_defect <= tol &&
              b.contraction_defect <= tol && (!b.full_span || b.projection_defect <= tol) && cr.consistent);
    r.table("build").push_back({{"n", n},
                                {"span_len", b.span_len},
                                {"span_dim", b.span_dim},
                                {"condition_number", b.condition},
                                {"shift_match", b.shift_match},
                                {"t_on_psi_match", b.t_on_psi_match},
                                {"commutation_defect", b.commutation_defect},
                                {"contraction_defect", b.contraction_defect},
                                {"projection_defect", b.projection_defect},
                                {"inner_residual_max", b.inner_residual_max},
                                {"full_residual", cr.full}});
    reports.push_back(report_json(cr));
  }
  r.extra["reports"] = reports;
  return r;
}

Report cmd_protocol_halmos(const Config& c) {
  auto spec = make_spec(c);
  auto [lo, hi] = parse_range(c.n_range.empty() ? "4..8" : c.n_range, "--n", 2);
  const double tol = tol_or(c, 1e-9);
  Report r;
  r.summary["command"] = "protocol halmos";
  r.summary["spectrum"] = spec.describe();
  r.summary["n"] = std::to_string(lo) + ".." + std::to_string(hi);
  std::vector<double> ns, qf;
  double prev = INFINITY;
  for (long nl = lo; nl <= hi; ++nl) {
    const auto n = static_cast<unsigned>(nl);
    auto rep = TruncatedRep::build(spec, n);
    auto h = protocol::halmos_unitary(rep);
    auto m = protocol::marginal_equivalence_check(h, rep);
    r.require(h.interior_defect <= tol && h.co_isometry_defect <= tol && h.halving_defect <= tol);
    r.require(1 - h.zeta_norm <= 1 / std::sqrt(n + 1.0));
    r.require(h.quasi_free_residual <= prev);
    prev = h.quasi_free_residual;
    ns.push_back(n);
    qf.push_back(h.quasi_free_residual);
    r.table("halmos").push_back({{"n", n},
                                 {"halving", h.prepend_halving ? "prepend" : "index"},
                                 {"interior_defect", h.interior_defect},
                                 {"short_word_defect", h.short_word_defect},
                                 {"co_isometry_defect", h.co_isometry_defect},
                                 {"halving_defect", h.halving_defect},
                                 {"zeta_norm", h.zeta_norm},
                                 {"quasi_free_residual", h.quasi_free_residual},
                                 {"marginal_max_deviation", m.max_deviation}});
  }
  if (ns.size() >= 3) r.summary["quasi_free_slope"] = trunc::loglog_slope(ns, qf);
  return r;
}

// ---- classify / lambda ----

std::vector<double> parse_floats(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || !(x > 0)) throw UsageError("--advisory: cannot read '" + item + "'");
    v.push_back(x);
  }
  if (v.size() < 2) throw UsageError("--advisory needs at least two values");
  return v;
}

Report cmd_classify(const Config& c) {
  Report r;
  r.summary["command"] = "classify";
  if (!c.advisory.empty()) {
    if (!c.alpha2.empty()) throw UsageError("--advisory and --alpha2 are exclusive");
    auto fits = cl::advisory_fits(parse_floats(c.advisory));
    r.summary["advisory"] = true;
    r.summary["note"] = "nearest exponent-form fits; floating-point input gives no type verdict";
    auto& rows = r.table("fits");
    for (const auto& f : fits) {
      std::string m;
      for (auto e : f.m) m += (m.empty() ? "" : ",") + std::to_string(e);
      rows.push_back({{"m", m}, {"lambda", f.lambda}, {"max_rel_error", f.max_rel_error}});
    }
    return r;
  }
  if (c.alpha2.empty()) throw UsageError("classify needs --alpha2 (or --advisory for floating-point input)");
  auto spec = make_spec(c);
  auto t = cl::classify(spec, FactorLimits{c.trial_bound});
  r.summary["spectrum"] = spec.describe();
  r.summary["verdict"] = t.dense ? "dense" : "countable";
  r.summary["type"] = t.type_name();
  if (t.dense) {
    r.summary["witness"] = Json::array({t.witness.first, t.witness.second});
  } else {
    r.summary["lambda"] = lambda_json(t.lambda);
    r.summary["m"] = t.m;
    r.summary["certificate"] = t.certificate.to_string();
    r.summary["certificate_verified"] = t.certificate_verified;
  }
  return r;
}

Report cmd_lambda_root(const Config& c) {
  if (c.poly.empty()) throw UsageError("lambda root needs --poly");
  auto p = cl::PolySpec::parse(c.poly);
  auto root = cl::unique_root(p, tol_or(c, 1e-12));
  Report r;
  r.summary["command"] = "lambda root";
  r.summary["poly"] = p.to_string();
  r.summary["coeffs"] = poly_json(p);
  r.summary["d"] = p.d();
  r.summary["m"] = p.exponents();
  if (root.lo == root.hi) r.summary["rational"] = root.lo.get_str();
  r.summary["interval"] = interval_json(root);
  r.summary["decimal"] = dec(root.midpoint);
  return r;
}

Report cmd_lambda_family(const Config& c) {
  auto [lo, hi] = parse_range(c.m_range, "--m", 1);
  const long d = c.d ? c.d : 2;
  Report r;
  r.summary["command"] = "lambda family";
  r.summary["d"] = d;
  auto& rows = r.table("family");
  std::vector<cl::RootInterval> roots;
  for (long m = lo; m <= hi; ++m) {
    auto root = cl::family_lambda(m, d, tol_or(c, 1e-12));
    rows.push_back({{"m", m},
                    {"poly", cl::family_poly(m, d).to_string()},
                    {"lambda", root.midpoint},
                    {"lo", root.lo.get_str()},
                    {"hi", root.hi.get_str()}});
    roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  double gap = INFINITY;
  for (std::size_t k = 1; k < roots.size(); ++k) {
    r.require(roots[k - 1].hi < roots[k].lo);
    gap = std::min(gap, roots[k].midpoint - roots[k - 1].midpoint);
  }
  if (roots.size() > 1) {
    r.summary["min_gap"] = gap;
    r.summary["distinct"] = r.pass;
  }
  return r;
}

Report cmd_lambda_excluded(const Config& c) {
  if (c.q.empty()) throw UsageError("lambda excluded needs --q");
  Integer q;
  if (q.set_str(c.q, 10) != 0 || q < 1) throw UsageError("--q must be a positive integer, got '" + c.q + "'");
  auto v = cl::excluded_lambda_check(q);
  Report r;
  r.summary["command"] = "lambda excluded";
  r.summary["q"] = integer_json(v.q);
  r.summary["poly"] = v.poly.to_string();
  r.summary["irreducible"] = v.irreducible;
  Json roots = Json::array();
  for (int k = 0; k < 2; ++k)
    roots.push_back({{"interval", interval_json(v.roots[k])}, {"decimal", dec(v.roots[k].midpoint)},
                     {"closed_form", dec(v.closed_form[k])}});
  r.summary["roots"] = roots;
  r.summary["verdict"] = v.excluded ? "excluded: two roots in (0,1)" : "not excluded";
  return r;
}

std::string generator_text(const cl::HGroup& h) {
  std::string c;
  if (h.c != 1) c = h.c.get_den() == 1 ? "·" + h.c.get_str() : "·(" + h.c.get_str() + ")";
  if (!h.lambda.rational) return "2π" + c + "/(−ln λ)";
  Rational inv = 1 / *h.lambda.rational;
  return "2π" + c + "/" + (inv.get_den() == 1 ? "ln " + inv.get_str() : "ln(" + inv.get_str() + ")");
}

Report cmd_lambda_hgroup(const Config& c) {
  auto spec = make_spec(c);
  auto h = cl::h_group(spec, FactorLimits{c.trial_bound});
  Report r;
  r.summary["command"] = "lambda hgroup";
  r.summary["spectrum"] = spec.describe();
  r.summary["trivial"] = h.trivial;
  if (!h.trivial) {
    r.summary["generator"] = generator_text(h);
    r.summary["c"] = h.c.get_str();
    r.summary["decimal"] = dec(h.generator);
    r.summary["lambda"] = lambda_json(h.lambda);
    r.summary["m"] = h.m;
  }
  return r;
}

void add_spec_options(CLI::App* sub, Config& c) {
  sub->add_option("--d", c.d, "local dimension")->check(CLI::Range(2u, 64u));
  sub->add_option("--alpha2,--spectrum", c.alpha2,
                  "squared Schmidt coefficients: \"1/2,1/4,1/4\", \"m=1,2\" or \"lambda-poly=x^2+x-1;m=1,2\"");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Exact and truncated computations for embezzling states"};
  app.name("embezzle");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", c.format, "json, csv or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("--output,-o", c.output, "write to this file instead of stdout");
  app.add_option("--seed", c.seed, "seed for randomized bases");
  app.add_option("--tol", c.tol, "override the check tolerance")->check(CLI::PositiveNumber);

  auto* state = app.add_subcommand("state", "evaluate the state on elements");
  state->require_subcommand(1);
  auto* eval = state->add_subcommand("eval", "exact value of one element or bipartite tensor");
  add_spec_options(eval, c);
  eval->add_option("--expr", c.expr, "e.g. \"V[01;01]\" or \"V[0;-]⊗W[0;-]\"")->required();
  auto* table = state->add_subcommand("table", "values on every monomial up to a length");
  add_spec_options(table, c);
  table->add_option("--max-len", c.max_len, "word length cap (default 3)")->check(CLI::Range(1, 8));

  auto* sim = app.add_subcommand("simulate", "truncated-model sweeps against closed forms");
  add_spec_options(sim, c);
  sim->add_option("--n", c.n_range, "depth or range a..b (default 2..6)");
  sim->add_option("--check", c.check, "residuals, convergence, conjugation, structure, kms, all (comma list allowed)");
  sim->add_option("--L", c.L, "word length cap for kms and conjugation (default 2)")->check(CLI::Range(0, 6));
  sim->add_option("--max-len", c.max_len, "monomial length cap for convergence (default 2)")->check(CLI::Range(0, 6));

  auto* proto = app.add_subcommand("protocol", "embezzling protocol checks");
  proto->require_subcommand(1);
  auto* bob = proto->add_subcommand("build-bob", "reconstruct Bob's operators from commutation");
  add_spec_options(bob, c);
  bob->add_option("--n", c.n_range, "depth or range (default 2..3)");
  bob->add_option("--span", c.span, "span word length (default n)");
  auto* halmos = proto->add_subcommand("halmos", "Halmos dilation and marginal checks");
  add_spec_options(halmos, c);
  halmos->add_option("--n", c.n_range, "depth or range (default 4..8)");
  auto* pcheck = proto->add_subcommand("check", "bipartite residual report");
  add_spec_options(pcheck, c);
  pcheck->add_option("--n", c.n_range, "depth or range (default 2..6)");
  pcheck->add_flag("--random-basis", c.random_basis, "conjugate by random orthogonal bases drawn from --seed");

  auto* cls = app.add_subcommand("classify", "type of the minimal embezzling factor");
  add_spec_options(cls, c);
  cls->add_option("--advisory", c.advisory, "floating-point spectrum; report exponent fits only");
  cls->add_option("--trial-bound", c.trial_bound, "trial-division bound for factorization");

  auto* lam = app.add_subcommand("lambda", "lambda polynomials and the H group");
  lam->require_subcommand(1);
  auto* root = lam->add_subcommand("root", "unique root in (0,1) of an admissible polynomial");
  root->add_option("--poly", c.poly, "e.g. \"x^2+x-1\" or \"-1,1,1\"")->required();
  auto* family = lam->add_subcommand("family", "roots of x^m + (d-1) x^2 - 1");
  family->add_option("--d", c.d, "local dimension (default 2)")->check(CLI::Range(2u, 64u));
  family->add_option("--m", c.m_range, "exponent or range (default 1..10)");
  auto* excl = lam->add_subcommand("excluded", "check a lambda = 1/2 + 1/sqrt(q) exclusion");
  excl->add_option("--q", c.q, "positive integer")->required();
  auto* hg = lam->add_subcommand("hgroup", "generator of the H group");
  add_spec_options(hg, c);
  hg->add_option("--trial-bound", c.trial_bound, "trial-division bound for factorization");

  std::vector<const char*> argv{"embezzle"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  Report r;
  try {
    if (eval->parsed()) r = cmd_state_eval(c);
    else if (table->parsed()) r = cmd_state_table(c);
    else if (sim->parsed()) r = cmd_simulate(c);
    else if (bob->parsed()) r = cmd_protocol_build_bob(c);
    else if (halmos->parsed()) r = cmd_protocol_halmos(c);
    else if (pcheck->parsed()) r = cmd_protocol_check(c);
    else if (cls->parsed()) r = cmd_classify(c);
    else if (root->parsed()) r = cmd_lambda_root(c);
    else if (family->parsed()) r = cmd_lambda_family(c);
    else if (excl->parsed()) r = cmd_lambda_excluded(c);
    else if (hg->parsed()) r = cmd_lambda_hgroup(c);
  } catch (const trunc::ResourceGuard& e) {
    err << "resource guard: " << e.what() << "\n";
    return kResource;
  } catch (const FactorizationError& e) {
    err << e.what() << "\n";
    return kResource;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }

  std::ostringstream buf;
  if (c.format == "json") write_json(r, buf);
  else if (c.format == "csv") write_csv(r, buf);
  else write_pretty(r, buf);

  if (c.output.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << c.output << " for writing\n";
      return kUsage;
    }
    f << buf.str();
  }
  return r.has_checks && !r.pass ? kCheckFailed : kOk;
}

}  // namespace embezzle::cli
