#include "embezzle/word.hpp"

#include <cctype>
#include <stdexcept>

namespace embezzle::words {

bool Word::starts_with(const Word& prefix) const {
  if (prefix.size() > size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k)
    if (l_[k] != prefix.l_[k]) return false;
  return true;
}

Word Word::drop(std::size_t k) const {
  if (k >= l_.size()) return {};
  return Word(std::vector<Letter>(l_.begin() + static_cast<std::ptrdiff_t>(k), l_.end()));
}

Word Word::take(std::size_t k) const {
  if (k >= l_.size()) return *this;
  return Word(std::vector<Letter>(l_.begin(), l_.begin() + static_cast<std::ptrdiff_t>(k)));
}

Word operator+(const Word& a, const Word& b) {
  std::vector<Letter> v;
  v.reserve(a.size() + b.size());
  v.insert(v.end(), a.l_.begin(), a.l_.end());
  v.insert(v.end(), b.l_.begin(), b.l_.end());
  return Word(std::move(v));
}

std::string Word::to_string(unsigned d) const {
  if (l_.empty()) return "-";
  std::string out;
  for (std::size_t k = 0; k < l_.size(); ++k) {
    if (d > 10) {
      if (k) out += ',';
      out += std::to_string(l_[k]);
    } else {
      out += static_cast<char>('0' + l_[k]);
    }
  }
  return out;
}

Word parse_word(std::string_view text, unsigned d) {
  auto bad = [&](const std::string& why) {
    return std::invalid_argument("word '" + std::string(text) + "': " + why);
  };
  if (text == "-" || text.empty()) return {};
  std::vector<Letter> v;
  if (d <= 10) {
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad("expected digits");
      Letter x = static_cast<Letter>(c - '0');
      if (x >= d) throw bad("letter out of range for d=" + std::to_string(d));
      v.push_back(x);
    }
  } else {
    std::size_t b = 0;
    while (b <= text.size()) {
      std::size_t e = text.find(',', b);
      if (e == std::string_view::npos) e = text.size();
      auto tok = text.substr(b, e - b);
      if (tok.empty()) throw bad("empty letter");
      unsigned long x = 0;
      for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw bad("expected integers");
        x = x * 10 + static_cast<unsigned long>(c - '0');
        if (x >= d) throw bad("letter out of range for d=" + std::to_string(d));
      }
      v.push_back(static_cast<Letter>(x));
      b = e + 1;
    }
  }
  return Word(std::move(v));
}

std::vector<Word> words_of_length(unsigned d, std::size_t len) {
  std::vector<Word> out{Word{}};
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<Word> next;
    next.reserve(out.size() * d);
    for (const auto& w : out)
      for (Letter a = 0; a < d; ++a) next.push_back(w + Word{a});
    out = std::move(next);
  }
  return out;
}

std::vector<Word> words_up_to(unsigned d, std::size_t max_len) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    auto layer = words_of_length(d, len);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::vector<long> letter_counts(const Word& w, unsigned d) {
  std::vector<long> c(d, 0);
  for (Letter a : w.letters()) {
    if (a >= d) throw std::out_of_range("letter out of range");
    ++c[a];
  }
  return c;
}

}  // namespace embezzle::words
