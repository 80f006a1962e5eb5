#include "embezzle/radical.hpp"

#include <cmath>
#include <stdexcept>

namespace embezzle {

std::pair<Integer, Integer> merge_radicands(const Integer& a, const Integer& b) {
  Integer g = gcd(a, b);
  Integer r = (a / g) * (b / g);
  return {r, g};
}

Radical Radical::sqrt_of(const Rational& q, const FactorLimits& limits) {
  if (q < 0) throw std::domain_error("square root of a negative rational");
  if (q == 0) return {};
  // sqrt(p/q) = sqrt(p*q)/q
  Integer pq = q.get_num() * q.get_den();
  auto [s, k] = squarefree_decompose(pq, limits);
  Rational c(k, q.get_den());
  c.canonicalize();
  return {c, s};
}

Radical Radical::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero radical");
  // 1/(c sqrt r) = sqrt r / (c r)
  Rational c = Rational(1) / (coeff * radicand);
  return {c, radicand};
}

double Radical::to_double() const { return coeff.get_d() * std::sqrt(radicand.get_d()); }

std::string Radical::to_string() const { return RadicalSum(*this).to_string(); }

Radical operator*(const Radical& a, const Radical& b) {
  auto [r, g] = merge_radicands(a.radicand, b.radicand);
  Rational c = a.coeff * b.coeff * g;
  if (c == 0) return {};
  return {c, r};
}

RadicalSum::RadicalSum(const Rational& q) { add_term(1, q); }

RadicalSum::RadicalSum(const Radical& r) { add_term(r.radicand, r.coeff); }

void RadicalSum::add_term(const Integer& radicand, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(radicand, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

bool RadicalSum::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational RadicalSum::rational_part() const {
  auto it = terms_.find(Integer(1));
  return it == terms_.end() ? Rational(0) : it->second;
}

RadicalSum& RadicalSum::operator+=(const RadicalSum& o) {
  for (auto& [r, c] : o.terms_) add_term(r, c);
  return *this;
}

RadicalSum& RadicalSum::operator-=(const RadicalSum& o) {
  for (auto& [r, c] : o.terms_) add_term(r, -c);
  return *this;
}

RadicalSum& RadicalSum::operator*=(const RadicalSum& o) {
  RadicalSum out;
  for (auto& [ra, ca] : terms_)
    for (auto& [rb, cb] : o.terms_) {
      auto [r, g] = merge_radicands(ra, rb);
      out.add_term(r, ca * cb * g);
    }
  *this = std::move(out);
  return *this;
}

RadicalSum RadicalSum::operator-() const {
  RadicalSum out;
  for (auto& [r, c] : terms_) out.terms_.emplace(r, -c);
  return out;
}

double RadicalSum::to_double() const {
  double s = 0;
  for (auto& [r, c] : terms_) s += c.get_d() * std::sqrt(r.get_d());
  return s;
}

std::string RadicalSum::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [r, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (r == 1) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "·";
      out += "√" + r.get_str();
    }
  }
  return out;
}

}  // namespace embezzle
