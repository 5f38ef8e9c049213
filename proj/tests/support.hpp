#pragma once

#include <random>

#include "lclavg/lcl.hpp"

namespace lclavg::testing {

// Random small spec: 1 or 2 inputs, 2 or 3 outputs, each candidate multiset kept with probability p.
inline LclSpec random_spec(std::mt19937_64& rng, std::size_t max_degree, double p_white, double p_black) {
  std::bernoulli_distribution coin_w(p_white), coin_b(p_black);
  const int ni = std::uniform_int_distribution<int>(1, 2)(rng);
  const int no = std::uniform_int_distribution<int>(2, 3)(rng);
  std::vector<std::string> in, out;
  for (int i = 0; i < ni; ++i) in.push_back("i" + std::to_string(i));
  for (int i = 0; i < no; ++i) out.push_back("o" + std::to_string(i));
  const int codes = ni * no;
  auto pair_of = [&](int c) { return IoPair{c / no, c % no}; };
  std::vector<Multiset> white, black;
  // All multisets of size d over the codes, as non-decreasing sequences.
  for (std::size_t d = 0; d <= max_degree; ++d) {
    std::vector<int> seq(d, 0);
    for (;;) {
      if (coin_w(rng)) {
        Multiset m;
        for (int c : seq) m.push_back(pair_of(c));
        white.push_back(m);
      }
      int i = static_cast<int>(d) - 1;
      while (i >= 0 && seq[i] == codes - 1) --i;
      if (i < 0) break;
      ++seq[i];
      for (std::size_t j = i + 1; j < d; ++j) seq[j] = seq[i];
    }
  }
  for (int a = 0; a < codes; ++a)
    for (int b = a; b < codes; ++b)
      if (coin_b(rng)) black.push_back({pair_of(a), pair_of(b)});
  return LclSpec(in, out, white, black);
}

// Random path for the 3-coloring spec. Every node keeps at least two available colors: singleton
// incoming sets at one node all share the same color.
inline PathInstance random_3col_path(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len,
                                     std::size_t max_incoming_per_node, std::size_t max_incoming_total,
                                     bool singletons = true) {
  PathInstance p;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(min_len, max_len)(rng);
  std::size_t total = 0;
  static const LabelSet sets[] = {0b011, 0b101, 0b110, 0b111};
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Incoming> ins;
    const Label single = std::uniform_int_distribution<int>(0, 2)(rng);
    const std::size_t c = std::uniform_int_distribution<std::size_t>(0, max_incoming_per_node)(rng);
    for (std::size_t i = 0; i < c && total < max_incoming_total; ++i, ++total)
      ins.push_back({singletons && std::bernoulli_distribution(0.25)(rng)
                         ? singleton(single)
                         : sets[std::uniform_int_distribution<int>(0, 3)(rng)],
                     0, 0});
    p.incoming.push_back(ins);
  }
  return p;
}

}  // namespace lclavg::testing
