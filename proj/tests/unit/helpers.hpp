#ifndef MAGNUS_TEST_HELPERS_HPP
#define MAGNUS_TEST_HELPERS_HPP

#include <random>

#include "magnus/words.hpp"

namespace testing {

inline magnus::Word random_word(std::mt19937_64& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), gen(0, rank - 1), coin(0, 1);
  std::vector<magnus::Letter> t;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) t.push_back({gen(rng), coin(rng) ? 1 : -1});
  return magnus::Word::reduce(rank, t);
}

inline magnus::Word w(const char* text, int rank = 2) { return magnus::parse_word(text, rank); }

}  // namespace testing

#endif
