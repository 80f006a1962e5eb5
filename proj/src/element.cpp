#include "embezzle/element.hpp"

#include <cctype>

namespace embezzle::words {

std::optional<Monomial> mul(const Monomial& a, const Monomial& b) {
  // (V_mu V_nu^*)(V_beta V_gamma^*)
  if (b.mu.starts_with(a.nu)) return Monomial{a.mu + b.mu.drop(a.nu.size()), b.nu};
  if (a.nu.starts_with(b.mu)) return Monomial{a.mu, b.nu + a.nu.drop(b.mu.size())};
  return std::nullopt;
}

Element Element::identity(unsigned d) { return monomial(d, {}, {}); }

Element Element::monomial(unsigned d, Word mu, Word nu, const Scalar& c) {
  Element e(d);
  for (Letter a : mu.letters())
    if (a >= d) throw std::out_of_range("letter out of range");
  for (Letter a : nu.letters())
    if (a >= d) throw std::out_of_range("letter out of range");
  e.add({std::move(mu), std::move(nu)}, c);
  return e;
}

std::size_t Element::max_right_length() const {
  std::size_t k = 0;
  for (auto& [m, c] : terms_) k = std::max(k, m.nu.size());
  return k;
}

void Element::check(unsigned other) const {
  if (other != d_)
    throw DimensionMismatch("elements over d=" + std::to_string(d_) + " and d=" + std::to_string(other));
}

void Element::add(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Element& Element::operator+=(const Element& o) {
  check(o.d_);
  for (auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  check(o.d_);
  for (auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

Element operator*(const Scalar& s, const Element& a) {
  Element out(a.d_);
  for (auto& [m, c] : a.terms_) out.add(m, s * c);
  return out;
}

Element mul(const Element& a, const Element& b) {
  if (a.d() != b.d())
    throw DimensionMismatch("mul over d=" + std::to_string(a.d()) + " and d=" + std::to_string(b.d()));
  Element out(a.d());
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms())
      if (auto m = mul(ma, mb)) out.add(*m, ca * cb);
  return out;
}

Element adjoint(const Element& a) {
  Element out(a.d());
  for (auto& [m, c] : a.terms()) out.add(m.adjoint(), c);
  return out;
}

Element expand_to_depth(const Element& a, std::size_t K) {
  if (K < a.max_right_length())
    throw std::invalid_argument("expand_to_depth: K=" + std::to_string(K) +
                                " is below an existing right-word length " +
                                std::to_string(a.max_right_length()));
  Element out(a.d());
  for (auto& [m, c] : a.terms())
    for (const Word& tau : words_of_length(a.d(), K - m.nu.size()))
      out.add({m.mu + tau, m.nu + tau}, c);
  return out;
}

bool equals(const Element& a, const Element& b) {
  if (a.d() != b.d()) throw DimensionMismatch("equals over different d");
  std::size_t K = std::max(a.max_right_length(), b.max_right_length());
  return expand_to_depth(a, K) == expand_to_depth(b, K);
}

std::string monomial_to_string(const Monomial& m, unsigned d, char tag) {
  return std::string(1, tag) + "[" + m.mu.to_string(d) + ";" + m.nu.to_string(d) + "]";
}

namespace {

// Coefficient prefix for a term, including the separator that precedes it.
std::string term_prefix(const Scalar& c, bool first) {
  if (c.terms().size() == 1) {
    auto& [k, q] = *c.terms().begin();
    std::string sep = first ? (q < 0 ? "-" : "") : (q < 0 ? " - " : " + ");
    if (k == ScalarKey{} && abs(q) == 1) return sep;
    return sep + key_to_string(k, q, false) + "*";
  }
  return (first ? "" : " + ") + std::string("(") + c.to_string() + ")*";
}

class Parser {
 public:
  Parser(std::string_view s, unsigned d) : s_(s), d_(d) {}

  Element element() {
    Element out(d_);
    for_each_term([&](const Scalar& c) {
      Monomial m;
      if (peek_tag('V')) m = bracket('V');
      out.add(m, c);
    });
    return out;
  }

  BiElement bielement() {
    BiElement out(d_);
    for_each_term([&](const Scalar& c) {
      BiMonomial m;
      if (peek_tag('V')) {
        m.alice = bracket('V');
        if (tensor()) m.bob = bracket('W');
      } else if (peek_tag('W')) {
        m.bob = bracket('W');
      }
      out.add(m, c);
    });
    return out;
  }

 private:
  template <class F>
  void for_each_term(F&& emit) {
    skip();
    if (done()) fail("empty expression");
    bool first = true;
    while (!done()) {
      Scalar sign = 1;
      if (eat("-"))
        sign = -1;
      else if (!eat("+") && !first)
        fail("expected '+' or '-'");
      first = false;
      Scalar c = sign;
      if (!peek_tag('V') && !peek_tag('W')) {
        c = c * product();
        // no trailing monomial means coefficient times identity
        if ((eat("*") || eat("·")) && !peek_tag('V') && !peek_tag('W')) fail("expected a monomial after '*'");
      }
      emit(c);
      skip();
    }
  }

  Scalar product() {
    Scalar acc = factor();
    while (true) {
      std::size_t save = i_;
      if (!(eat("*") || eat("·"))) break;
      if (peek_tag('V') || peek_tag('W')) {
        i_ = save;
        break;
      }
      acc = acc * factor();
    }
    return acc;
  }

  Scalar factor() {
    skip();
    if (eat("(")) {
      Scalar sum;
      bool first = true;
      while (!eat(")")) {
        if (done()) fail("unclosed '('");
        Scalar sign = 1;
        if (eat("-"))
          sign = -1;
        else if (!eat("+") && !first)
          fail("expected '+' or '-' inside parentheses");
        first = false;
        sum += sign * product();
      }
      return sum;
    }
    if (eat("√") || eat("sqrt")) {
      bool paren = eat("(");
      Integer r(digits(), 10);
      if (paren && !eat(")")) fail("expected ')'");
      return Scalar(RadicalSum(Radical::sqrt_of(Rational(r))));
    }
    if (eat("α") || eat("a")) {
      std::size_t i = std::stoul(digits());
      if (i >= d_) fail("alpha index out of range");
      long p = 1;
      if (eat("^")) {
        bool neg = eat("-");
        p = std::stol(digits());
        if (neg) p = -p;
      }
      return Scalar::alpha(i, p);
    }
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '/' || s_[i_] == '.'))
      ++i_;
    if (b == i_) fail("expected a coefficient");
    return Scalar(parse_rational(s_.substr(b, i_ - b)));
  }

  std::string digits() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (b == i_) fail("expected digits");
    return std::string(s_.substr(b, i_ - b));
  }

  Monomial bracket(char tag) {
    skip();
    if (!eat(std::string(1, tag)) || !eat("[")) fail(std::string("expected ") + tag + "[");
    auto semi = s_.find(';', i_);
    auto close = s_.find(']', i_);
    if (semi == std::string_view::npos || close == std::string_view::npos || semi > close)
      fail("malformed monomial");
    Word mu = parse_word(trim(s_.substr(i_, semi - i_)), d_);
    Word nu = parse_word(trim(s_.substr(semi + 1, close - semi - 1)), d_);
    i_ = close + 1;
    return {std::move(mu), std::move(nu)};
  }

  bool tensor() { return eat("⊗") || eat("(x)") || eat("(X)"); }

  static std::string_view trim(std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  }

  bool peek_tag(char tag) {
    skip();
    return i_ + 1 < s_.size() && s_[i_] == tag && s_[i_ + 1] == '[';
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip();
    return i_ >= s_.size();
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("cannot parse '" + std::string(s_) + "' at offset " +
                                std::to_string(i_) + ": " + why);
  }

  std::string_view s_;
  unsigned d_;
  std::size_t i_ = 0;
};

}  // namespace

std::string Element::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, c] : terms_) {
    out += term_prefix(c, first) + monomial_to_string(m, d_);
    first = false;
  }
  return out;
}

Element parse_element(std::string_view text, unsigned d) { return Parser(text, d).element(); }

BiElement BiElement::simple(unsigned d, Monomial alice, Monomial bob, const Scalar& c) {
  BiElement e(d);
  e.add({std::move(alice), std::move(bob)}, c);
  return e;
}

void BiElement::add(const BiMonomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

BiElement& BiElement::operator+=(const BiElement& o) {
  if (o.d_ != d_) throw DimensionMismatch("bielements over different d");
  for (auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

std::string BiElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& [m, c] : terms_) {
    out += term_prefix(c, first) + monomial_to_string(m.alice, d_) + "(x)" +
           monomial_to_string(m.bob, d_, 'W');
    first = false;
  }
  return out;
}

BiElement parse_bielement(std::string_view text, unsigned d) { return Parser(text, d).bielement(); }

}  // namespace embezzle::words
