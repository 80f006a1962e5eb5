#include "embezzle/scalar.hpp"

namespace embezzle::words {

namespace {

void trim(std::vector<long>& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

}  // namespace

Scalar::Scalar(const Rational& q) { add_term(ScalarKey{}, q); }

Scalar::Scalar(const RadicalSum& r) {
  for (auto& [rad, c] : r.terms()) add_term(ScalarKey{rad, {}}, c);
}

Scalar Scalar::alpha(std::size_t i, long power) {
  ScalarKey k;
  k.exps.assign(i + 1, 0);
  k.exps[i] = power;
  trim(k.exps);
  return monomial(1, std::move(k));
}

Scalar Scalar::alpha_word(const Word& w, unsigned d, long power) {
  ScalarKey k;
  k.exps = letter_counts(w, d);
  for (auto& e : k.exps) e *= power;
  trim(k.exps);
  return monomial(1, std::move(k));
}

Scalar Scalar::monomial(const Rational& c, ScalarKey key) {
  trim(key.exps);
  Scalar s;
  s.add_term(key, c);
  return s;
}

bool Scalar::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first == ScalarKey{} && terms_.begin()->second == 1;
}

void Scalar::add_term(const ScalarKey& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  Scalar out;
  for (auto& [ka, ca] : terms_)
    for (auto& [kb, cb] : o.terms_) {
      auto [rad, g] = merge_radicands(ka.radicand, kb.radicand);
      ScalarKey k{rad, ka.exps};
      if (kb.exps.size() > k.exps.size()) k.exps.resize(kb.exps.size(), 0);
      for (std::size_t i = 0; i < kb.exps.size(); ++i) k.exps[i] += kb.exps[i];
      trim(k.exps);
      out.add_term(k, ca * cb * g);
    }
  *this = std::move(out);
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar out;
  for (auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

std::string key_to_string(const ScalarKey& key, const Rational& coeff, bool with_sign) {
  std::string out;
  Rational mag = abs(coeff);
  if (with_sign && coeff < 0) out += "-";
  std::vector<std::string> factors;
  if (mag != 1 || (key.radicand == 1 && key.exps.empty())) factors.push_back(mag.get_str());
  if (key.radicand != 1) factors.push_back("√" + key.radicand.get_str());
  for (std::size_t i = 0; i < key.exps.size(); ++i) {
    if (key.exps[i] == 0) continue;
    std::string f = "α" + std::to_string(i);
    if (key.exps[i] != 1) f += "^" + std::to_string(key.exps[i]);
    factors.push_back(f);
  }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (k) out += "·";
    out += factors[k];
  }
  return out;
}

std::string Scalar::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [k, c] : terms_) {
    if (!first) out += c < 0 ? " - " : " + ";
    out += key_to_string(k, c, first);
    first = false;
  }
  return out;
}

}  // namespace embezzle::words
