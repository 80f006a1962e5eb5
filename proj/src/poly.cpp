#include "embezzle/poly.hpp"

#include <cctype>
#include <stdexcept>

namespace embezzle {

QPoly::QPoly(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }

QPoly QPoly::monomial(const Rational& c, std::size_t k) {
  std::vector<Rational> v(k + 1, Rational(0));
  v[k] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

namespace {

struct PolyLexer {
  std::string_view s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool at_end() {
    skip();
    return i >= s.size();
  }
  std::string number() {
    skip();
    std::size_t b = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/' || s[i] == '.'))
      ++i;
    return std::string(s.substr(b, i - b));
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial '" + std::string(s) + "': " + why);
  }
};

}  // namespace

QPoly QPoly::parse(std::string_view text) {
  bool has_var = text.find('x') != std::string_view::npos;
  if (!has_var) {
    std::vector<Rational> c;
    std::size_t b = 0;
    while (b <= text.size()) {
      std::size_t e = text.find(',', b);
      if (e == std::string_view::npos) e = text.size();
      c.push_back(parse_rational(text.substr(b, e - b)));
      b = e + 1;
    }
    return QPoly(std::move(c));
  }
  PolyLexer lx{text};
  QPoly out;
  bool first = true;
  while (!lx.at_end()) {
    Rational sgn = 1;
    if (lx.eat('-'))
      sgn = -1;
    else if (!lx.eat('+') && !first)
      lx.fail("expected '+' or '-'");
    first = false;
    std::string num = lx.number();
    Rational c = num.empty() ? Rational(1) : parse_rational(num);
    std::size_t k = 0;
    bool star = lx.eat('*');
    if (lx.eat('x')) {
      k = 1;
      if (lx.eat('^')) {
        std::string e = lx.number();
        if (e.empty() || e.find_first_of("/.") != std::string::npos) lx.fail("bad exponent");
        k = std::stoul(e);
      }
    } else if (star || num.empty()) {
      lx.fail("expected a term");
    }
    out += monomial(sgn * c, k);
  }
  return out;
}

Rational QPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double QPoly::eval(double x) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return QPoly(std::move(d));
}

QPoly QPoly::monic() const {
  if (is_zero()) return {};
  return *this * (Rational(1) / lead());
}

QPoly QPoly::substitute_square() const {
  if (is_zero()) return {};
  std::vector<Rational> v(2 * c_.size() - 1, Rational(0));
  for (std::size_t k = 0; k < c_.size(); ++k) v[2 * k] = c_[k];
  return QPoly(std::move(v));
}

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return QPoly(std::move(v));
}

QPoly operator*(QPoly a, const Rational& s) {
  for (auto& c : a.c_) c *= s;
  a.trim();
  return a;
}

QPoly QPoly::operator-() const { return *this * Rational(-1); }

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  QPoly r = *this;
  int dd = divisor.degree();
  if (r.degree() < dd) return {QPoly{}, r};
  std::vector<Rational> q(static_cast<std::size_t>(r.degree() - dd + 1), Rational(0));
  const Rational inv = Rational(1) / divisor.lead();
  while (!r.is_zero() && r.degree() >= dd) {
    int shift = r.degree() - dd;
    Rational f = r.lead() * inv;
    q[static_cast<std::size_t>(shift)] = f;
    for (int k = 0; k <= dd; ++k) r.c_[static_cast<std::size_t>(k + shift)] -= f * divisor.c_[static_cast<std::size_t>(k)];
    r.trim();
  }
  return {QPoly(std::move(q)), r};
}

std::string QPoly::to_string(std::string_view var) const {
  if (is_zero()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = c_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    if (k == 0 || mag != 1) out += mag.get_str();
    if (k >= 1) {
      if (mag != 1 && mag.get_den() != 1) out += "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

int sign(const Rational& q) { return sgn(q); }

std::vector<QPoly> sturm_sequence(const QPoly& p) {
  std::vector<QPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    QPoly r = seq[seq.size() - 2] % seq.back();
    // Positive rescaling keeps signs and stops coefficient blowup.
    if (!r.is_zero()) r = r * (Rational(1) / abs(r.lead()));
    seq.push_back(-r);
  }
  seq.pop_back();
  return seq;
}

namespace {

int sign_changes(const std::vector<QPoly>& seq, const Rational& x) {
  int changes = 0, prev = 0;
  for (const auto& q : seq) {
    int s = sign(q.eval(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int count_roots(const QPoly& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) throw std::domain_error("count_roots of the zero polynomial");
  if (a >= b) return 0;
  // Reduce to the squarefree part so multiple roots at an endpoint count once.
  QPoly q = p;
  if (q.degree() > 0) q = q.divmod(gcd(q, q.derivative())).first;
  auto seq = sturm_sequence(q);
  return sign_changes(seq, a) - sign_changes(seq, b);
}

}  // namespace embezzle
