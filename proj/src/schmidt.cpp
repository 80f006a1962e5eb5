#include "embezzle/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace embezzle {

namespace {

Rational bisect_root(const QPoly& P, Rational lo, Rational hi, const Rational& width) {
  // P(lo) < 0 < P(hi)
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    int s = sign(P.eval(mid));
    if (s == 0) return mid;
    (s < 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

long floor_div2(long e) { return e >= 0 ? e / 2 : -((-e + 1) / 2); }

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (b <= s.size()) {
    std::size_t e = s.find(sep, b);
    if (e == std::string_view::npos) e = s.size();
    out.emplace_back(s.substr(b, e - b));
    b = e + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::shared_ptr<const LambdaField> LambdaField::make(std::vector<long> m) {
  auto f = std::make_shared<LambdaField>();
  f->m = std::move(m);
  QPoly p = QPoly::monomial(-1, 0);
  for (long k : f->m) p += QPoly::monomial(1, static_cast<std::size_t>(k));
  f->p = p;
  f->P = p.substitute_square();
  std::vector<Rational> q(f->P.coeffs().begin() + 1, f->P.coeffs().end());
  f->t_inverse = QPoly(std::move(q));
  Rational width(1, 1);
  width /= Rational(Integer(1) << 64);
  Rational t = bisect_root(f->P, 0, 1, width);
  f->t_lo = t - width;
  f->t_hi = t + width;
  f->t = t.get_d();
  return f;
}

QPoly LambdaField::power(long k) const {
  QPoly base = k >= 0 ? QPoly::monomial(1, 1) : t_inverse;
  unsigned long e = static_cast<unsigned long>(k >= 0 ? k : -k);
  QPoly acc = QPoly::monomial(1, 0);
  while (e) {
    if (e & 1) acc = (acc * base) % P;
    base = (base * base) % P;
    e >>= 1;
  }
  return acc;
}

ExactValue::ExactValue(std::shared_ptr<const LambdaField> f, QPoly rem)
    : field_(std::move(f)), rem_(std::move(rem) % field_->P) {}

bool ExactValue::is_zero() const {
  if (is_radical()) return rad_.is_zero();
  if (rem_.is_zero()) return true;
  QPoly g = gcd(rem_, field_->P);
  if (g.degree() <= 0) return false;
  return count_roots(g, 0, 1) > 0;
}

double ExactValue::to_double() const {
  if (is_radical()) return rad_.to_double();
  return rem_.eval(field_->t);
}

std::string ExactValue::to_string() const {
  if (is_radical()) return rad_.to_string();
  if (rem_.is_zero()) return "0";
  std::string out;
  for (int k = rem_.degree(); k >= 0; --k) {
    const Rational& c = rem_.coeffs()[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    Rational mag = abs(c);
    out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    std::string sym;
    if (k == 2)
      sym = "λ";
    else if (k % 2 == 0 && k > 0)
      sym = "λ^" + std::to_string(k / 2);
    else if (k % 2 == 1)
      sym = "λ^(" + std::to_string(k) + "/2)";
    if (sym.empty())
      out += mag.get_str();
    else
      out += (mag == 1 ? "" : mag.get_str() + "·") + sym;
  }
  return out;
}

std::pair<ExactValue, ExactValue> ExactValue::unify(const ExactValue& o) const {
  auto lift = [](const ExactValue& r, const std::shared_ptr<const LambdaField>& f) {
    if (!r.rad_.is_rational()) throw std::invalid_argument("cannot combine a square root of an integer with an algebraic lambda");
    return ExactValue(f, QPoly::monomial(r.rad_.rational_part(), 0));
  };
  if (is_radical() && o.is_radical()) return {*this, o};
  if (is_radical()) return {lift(*this, o.field_), o};
  if (o.is_radical()) return {*this, lift(o, field_)};
  if (field_ != o.field_ && field_->m != o.field_->m) throw std::invalid_argument("exact values from different number fields");
  return {*this, o};
}

ExactValue ExactValue::operator+(const ExactValue& o) const {
  auto [a, b] = unify(o);
  if (a.is_radical()) return ExactValue(a.rad_ + b.rad_);
  return ExactValue(a.field_, a.rem_ + b.rem_);
}

ExactValue ExactValue::operator-(const ExactValue& o) const {
  auto [a, b] = unify(o);
  if (a.is_radical()) return ExactValue(a.rad_ - b.rad_);
  return ExactValue(a.field_, a.rem_ - b.rem_);
}

ExactValue ExactValue::operator*(const ExactValue& o) const {
  auto [a, b] = unify(o);
  if (a.is_radical()) return ExactValue(a.rad_ * b.rad_);
  return ExactValue(a.field_, a.rem_ * b.rem_);
}

SchmidtSpec SchmidtSpec::from_squares(std::vector<Rational> squares, const FactorLimits& limits) {
  if (squares.size() < 2) throw std::invalid_argument("Schmidt data needs d >= 2");
  Rational sum = 0;
  for (auto& q : squares) {
    q.canonicalize();
    if (q <= 0) throw std::invalid_argument("Schmidt coefficients must be positive, got " + q.get_str());
    sum += q;
  }
  if (sum != 1) throw std::invalid_argument("squared Schmidt coefficients sum to " + sum.get_str() + ", not 1");
  SchmidtSpec s;
  s.perm_.resize(squares.size());
  std::iota(s.perm_.begin(), s.perm_.end(), 0);
  std::stable_sort(s.perm_.begin(), s.perm_.end(),
                   [&](std::size_t a, std::size_t b) { return squares[a] > squares[b]; });
  for (std::size_t k : s.perm_) s.squares_.push_back(squares[k]);
  for (auto& q : s.squares_) {
    s.roots_.push_back(Radical::sqrt_of(q, limits));
    s.alpha_.push_back(std::sqrt(q.get_d()));
  }
  return s;
}

SchmidtSpec SchmidtSpec::from_exponents(std::vector<long> m, std::optional<Rational> lambda,
                                        std::optional<QPoly> lambda_poly) {
  if (m.size() < 2) throw std::invalid_argument("Schmidt data needs d >= 2");
  for (long k : m)
    if (k < 1) throw std::invalid_argument("exponents must be positive integers");
  std::vector<std::size_t> perm(m.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return m[a] < m[b]; });
  std::vector<long> sorted;
  for (std::size_t k : perm) sorted.push_back(m[k]);

  QPoly p = QPoly::monomial(-1, 0);
  for (long k : sorted) p += QPoly::monomial(1, static_cast<std::size_t>(k));

  if (lambda_poly) {
    if (lambda_poly->is_zero()) throw std::invalid_argument("lambda polynomial is zero");
    QPoly g = gcd(*lambda_poly, p);
    if (g.degree() < 1 || count_roots(g, 0, 1) == 0)
      throw std::invalid_argument("lambda polynomial " + lambda_poly->to_string() +
                                  " does not vanish at the root of " + p.to_string());
  }
  if (!lambda) {
    // A rational root of p must be 1/b with b dividing the leading coefficient.
    Integer lead = p.lead().get_num();
    for (Integer b = 2; b <= lead; ++b)
      if (lead % b == 0 && p.eval(Rational(1, b)) == 0) {
        lambda = Rational(1, b);
        break;
      }
  }
  if (lambda) {
    if (*lambda <= 0 || *lambda >= 1) throw std::invalid_argument("lambda must lie in (0,1)");
    if (p.eval(*lambda) != 0)
      throw std::invalid_argument("sum of lambda^m_i is " + Rational(p.eval(*lambda) + 1).get_str() + ", not 1");
    std::vector<Rational> sq;
    for (long k : sorted) sq.push_back(pow(*lambda, k));
    SchmidtSpec s = from_squares(std::move(sq));
    s.perm_ = perm;
    return s;
  }
  SchmidtSpec s;
  s.perm_ = std::move(perm);
  s.field_ = LambdaField::make(sorted);
  for (long k : sorted) s.alpha_.push_back(std::pow(s.field_->t, static_cast<double>(k)));
  return s;
}

SchmidtSpec SchmidtSpec::uniform(unsigned d) {
  return from_squares(std::vector<Rational>(d, Rational(1, d)));
}

SchmidtSpec SchmidtSpec::parse(std::string_view text) {
  if (text.find('=') == std::string_view::npos) {
    std::vector<Rational> sq;
    for (auto& tok : split(text, ',')) sq.push_back(parse_rational(tok));
    return from_squares(std::move(sq));
  }
  std::optional<std::vector<long>> m;
  std::optional<Rational> lambda;
  std::optional<QPoly> poly;
  for (auto& field : split(text, ';')) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value in '" + field + "'");
    std::string key = trim(field.substr(0, eq)), val = trim(field.substr(eq + 1));
    if (key == "m") {
      m.emplace();
      for (auto& tok : split(val, ',')) {
        Rational q = parse_rational(tok);
        if (q.get_den() != 1) throw std::invalid_argument("exponent '" + tok + "' is not an integer");
        m->push_back(q.get_num().get_si());
      }
    } else if (key == "lambda") {
      lambda = parse_rational(val);
    } else if (key == "lambda-poly") {
      poly = QPoly::parse(val);
    } else {
      throw std::invalid_argument("unknown spectrum key '" + key + "'");
    }
  }
  if (!m) throw std::invalid_argument("exponent form needs m=...");
  return from_exponents(std::move(*m), lambda, poly);
}

const std::vector<long>& SchmidtSpec::exponents() const { return field().m; }

const LambdaField& SchmidtSpec::field() const {
  if (!field_) throw std::logic_error("spectrum is in rational form");
  return *field_;
}

ExactValue SchmidtSpec::evaluate(const words::Scalar& s) const {
  if (rational_form()) {
    RadicalSum acc;
    for (auto& [key, c] : s.terms()) {
      if (key.exps.size() > d()) throw std::out_of_range("alpha index beyond d");
      Radical r{c, key.radicand};
      for (std::size_t i = 0; i < key.exps.size(); ++i) {
        long e = key.exps[i];
        long q = floor_div2(e);
        r.coeff *= pow(squares_[i], q);
        if (e - 2 * q) r = r * roots_[i];
      }
      acc += RadicalSum(r);
    }
    return acc;
  }
  QPoly acc;
  for (auto& [key, c] : s.terms()) {
    if (key.exps.size() > d()) throw std::out_of_range("alpha index beyond d");
    if (key.radicand != 1)
      throw std::domain_error("square roots of integers are not represented over an algebraic lambda");
    long k = 0;
    for (std::size_t i = 0; i < key.exps.size(); ++i) k += key.exps[i] * field_->m[i];
    acc += field_->power(k) * c;
  }
  return ExactValue(field_, acc);
}

ExactValue SchmidtSpec::alpha_value(std::size_t i) const { return evaluate(words::Scalar::alpha(i)); }

double SchmidtSpec::to_double(const words::Scalar& s) const {
  double acc = 0;
  for (auto& [key, c] : s.terms()) {
    double v = c.get_d() * std::sqrt(key.radicand.get_d());
    for (std::size_t i = 0; i < key.exps.size(); ++i) v *= std::pow(alpha_[i], static_cast<double>(key.exps[i]));
    acc += v;
  }
  return acc;
}

bool SchmidtSpec::equal(const words::Scalar& a, const words::Scalar& b) const {
  if (a == b) return true;
  return evaluate(a - b).is_zero();
}

std::string SchmidtSpec::describe() const {
  std::ostringstream os;
  if (rational_form()) {
    os << "alpha^2 = (";
    for (std::size_t i = 0; i < squares_.size(); ++i) os << (i ? ", " : "") << squares_[i].get_str();
    os << ")";
  } else {
    os << "alpha_i = lambda^(m_i/2), m = (";
    for (std::size_t i = 0; i < field_->m.size(); ++i) os << (i ? ", " : "") << field_->m[i];
    os << "), lambda root of " << field_->p.to_string();
  }
  return os.str();
}

}  // namespace embezzle
