#include "magnus/words.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace magnus {

Word Word::reduce(int rank, std::span<const Letter> tokens) {
  Word out(rank);
  out.letters_.reserve(tokens.size());
  for (const Letter& l : tokens) {
    if (l.gen < 0 || l.gen >= rank) {
      throw std::out_of_range("generator index s" + std::to_string(l.gen + 1) +
                              " out of range for rank " + std::to_string(rank));
    }
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
    if (!out.letters_.empty() && out.letters_.back() == l.inverse()) {
      out.letters_.pop_back();
    } else {
      out.letters_.push_back(l);
    }
  }
  return out;
}

Word Word::generator_power(int rank, int gen, std::int64_t power) {
  const Letter l{gen, power < 0 ? -1 : 1};
  std::vector<Letter> tokens(static_cast<std::size_t>(power < 0 ? -power : power), l);
  return reduce(rank, tokens);
}

Word Word::prefix(std::size_t length) const {
  Word out(rank_);
  out.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(length));
  return out;
}

Word Word::suffix_from(std::size_t start) const {
  Word out(rank_);
  out.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(start), letters_.end());
  return out;
}

static void require_same_rank(const Word& u, const Word& v) {
  if (u.rank() != v.rank()) {
    throw std::invalid_argument("rank mismatch: " + std::to_string(u.rank()) + " vs " +
                                std::to_string(v.rank()));
  }
}

Word word_multiply(const Word& u, const Word& v) {
  require_same_rank(u, v);
  std::vector<Letter> tokens(u.letters().begin(), u.letters().end());
  tokens.insert(tokens.end(), v.letters().begin(), v.letters().end());
  return Word::reduce(u.rank(), tokens);
}

Word word_inverse(const Word& u) {
  std::vector<Letter> tokens;
  tokens.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) tokens.push_back(it->inverse());
  return Word::reduce(u.rank(), tokens);
}

Word commutator(const Word& u, const Word& v) {
  return word_multiply(word_multiply(u, v), word_multiply(word_inverse(u), word_inverse(v)));
}

Word conjugate(const Word& u, const Word& v) {
  return word_multiply(word_multiply(word_inverse(v), u), v);
}

Word word_power(const Word& u, std::int64_t k) {
  const Word base = k < 0 ? word_inverse(u) : u;
  const std::int64_t n = k < 0 ? -k : k;
  std::vector<Letter> tokens;
  tokens.reserve(base.size() * static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) tokens.insert(tokens.end(), base.letters().begin(), base.letters().end());
  return Word::reduce(u.rank(), tokens);
}

namespace {

class WordParser {
 public:
  WordParser(std::string_view text, int rank) : text_(text), rank_(rank) {}

  Word parse() {
    Word w = parse_word_until("");
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("word parse error at offset " + std::to_string(pos_) + ": " + msg + " in \"" +
                     std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end_or(std::string_view stops) {
    skip_ws();
    return pos_ >= text_.size() || stops.find(text_[pos_]) != std::string_view::npos;
  }

  Word parse_word_until(std::string_view stops) {
    Word acc(rank_);
    while (!at_end_or(stops)) acc = word_multiply(acc, parse_factor());
    return acc;
  }

  Word parse_factor() {
    Word w = parse_atom();
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '^') return w;
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+' ||
                                  std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
        w = word_power(w, parse_integer());
      } else {
        w = conjugate(w, parse_atom());
      }
    }
  }

  std::int64_t parse_integer() {
    const std::size_t start = pos_;
    if (text_[pos_] == '-' || text_[pos_] == '+') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view digits = text_.substr(start, pos_ - start);
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) fail("bad integer");
    return value;
  }

  Word parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected generator, '[' or '('");
    const char c = text_[pos_];
    if (c == 's' || c == 'S') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected generator number after 's'");
      int k = 0;
      std::from_chars(text_.data() + start, text_.data() + pos_, k);
      if (k < 1 || k > rank_) fail("generator s" + std::to_string(k) + " out of range 1.." + std::to_string(rank_));
      return Word::generator_power(rank_, k - 1, 1);
    }
    if (c == 'e' || c == '1') {
      ++pos_;
      return Word(rank_);
    }
    if (c == '(') {
      ++pos_;
      Word w = parse_word_until(")");
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word u = parse_word_until(",");
      expect(',');
      Word v = parse_word_until("]");
      expect(']');
      return commutator(u, v);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view text_;
  int rank_;
  std::size_t pos_ = 0;
};

}  // namespace

Word parse_word(std::string_view text, int rank) {
  if (rank < 1) throw ParseError("word rank must be at least 1");
  return WordParser(text, rank).parse();
}

std::string to_string(const Word& w) {
  std::string out;
  const auto letters = w.letters();
  for (std::size_t i = 0; i < letters.size();) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const std::int64_t run = static_cast<std::int64_t>(j - i) * letters[i].sign;
    if (!out.empty()) out += ' ';
    out += 's' + std::to_string(letters[i].gen + 1);
    if (run != 1) out += '^' + std::to_string(run);
    i = j;
  }
  return out;
}

}  // namespace magnus
