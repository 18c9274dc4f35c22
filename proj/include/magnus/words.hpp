#ifndef MAGNUS_WORDS_HPP
#define MAGNUS_WORDS_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace magnus {

// Raised for malformed words, group specs and other user input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One signed letter s_{gen+1}^{sign}. Generator indices are 0-based in code
// and 1-based in the text form.
struct Letter {
  int gen = 0;
  int sign = 1;

  Letter inverse() const { return {gen, -sign}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

// Freely reduced word over r free generators. Stored letter by letter so
// that prefix scans cost O(1) per step.
class Word {
 public:
  Word() = default;
  explicit Word(int rank) : rank_(rank) {}

  // Free reduction of an arbitrary token stream; throws std::out_of_range
  // when a generator index falls outside 0..rank-1.
  static Word reduce(int rank, std::span<const Letter> tokens);
  static Word generator_power(int rank, int gen, std::int64_t power = 1);

  int rank() const { return rank_; }
  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  // Subwords of a reduced word are reduced.
  Word prefix(std::size_t length) const;
  Word suffix_from(std::size_t start) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  int rank_ = 0;
  std::vector<Letter> letters_;
};

Word word_multiply(const Word& u, const Word& v);
Word word_inverse(const Word& u);
Word commutator(const Word& u, const Word& v);  // u v u^-1 v^-1
Word word_power(const Word& u, std::int64_t k);
// Right conjugation u^v = v^-1 u v.
Word conjugate(const Word& u, const Word& v);

// Text grammar:
//   word     := factor*
//   factor   := atom ('^' exponent)*
//   atom     := 'sK' | '[' word ',' word ']' | '(' word ')' | 'e' | '1'
//   exponent := integer | atom        (atom exponent means conjugation)
// Whitespace separates tokens and is otherwise ignored.
Word parse_word(std::string_view text, int rank);

// Text form with runs collapsed: "s1^2 s2^-1". Empty word prints as "".
std::string to_string(const Word& w);

}  // namespace magnus

#endif  // MAGNUS_WORDS_HPP
