#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace lore {

struct SignTest {
  std::size_t wins = 0;
  std::size_t losses = 0;
  std::size_t ties = 0;
  double p_value = 1.0;  // P(X >= wins), X ~ Binomial(wins + losses, 1/2)
};

/// Upper tail of Binomial(n, 1/2) at k, summed in log space.
[[nodiscard]] inline double binomial_half_upper_tail(std::size_t n, std::size_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  double p = 0.0;
  for (std::size_t i = k; i <= n; ++i) {
    const double log_term = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
                            std::lgamma(static_cast<double>(n - i) + 1.0) - static_cast<double>(n) * std::log(2.0);
    p += std::exp(log_term);
  }
  return p;
}

/// Paired one-sided sign test of H1: a tends to exceed b. Ties are dropped.
[[nodiscard]] inline SignTest sign_test_greater(std::span<const double> a, std::span<const double> b) {
  SignTest st;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] > b[i]) {
      ++st.wins;
    } else if (a[i] < b[i]) {
      ++st.losses;
    } else {
      ++st.ties;
    }
  }
  st.p_value = binomial_half_upper_tail(st.wins + st.losses, st.wins);
  return st;
}

}  // namespace lore
