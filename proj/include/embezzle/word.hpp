#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace embezzle::words {

using Letter = std::uint32_t;

// Finite word over the alphabet {0, ..., d-1}.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : l_(letters) {}
  explicit Word(std::vector<Letter> letters) : l_(std::move(letters)) {}

  std::size_t size() const { return l_.size(); }
  bool empty() const { return l_.empty(); }
  Letter operator[](std::size_t k) const { return l_[k]; }
  const std::vector<Letter>& letters() const { return l_; }

  bool starts_with(const Word& prefix) const;
  // Letters from position k on.
  Word drop(std::size_t k) const;
  Word take(std::size_t k) const;

  friend Word operator+(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

  // Digits when d <= 10, comma-separated letters otherwise; "-" is empty.
  std::string to_string(unsigned d) const;

 private:
  std::vector<Letter> l_;
};

Word parse_word(std::string_view text, unsigned d);

// Every word of length <= max_len, ordered by (length, lexicographic).
std::vector<Word> words_up_to(unsigned d, std::size_t max_len);
std::vector<Word> words_of_length(unsigned d, std::size_t len);

// Per-letter occurrence counts, length d.
std::vector<long> letter_counts(const Word& w, unsigned d);

// V_mu V_nu^*
struct Monomial {
  Word mu;
  Word nu;

  Monomial adjoint() const { return {nu, mu}; }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

}  // namespace embezzle::words
