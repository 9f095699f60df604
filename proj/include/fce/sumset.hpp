#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

namespace fce {

// Sorted set of distinct positive integers (the frequency support M).
class FrequencySet {
 public:
  explicit FrequencySet(std::vector<int> elements);
  FrequencySet(std::initializer_list<int> elements)
      : FrequencySet(std::vector<int>(elements)) {}

  const std::vector<int>& elements() const { return elements_; }
  int max() const { return elements_.back(); }
  int gcd() const;

 private:
  std::vector<int> elements_;
};

// { |s - t| : s, t in kM } intersected with [0, range_limit], where kM is the
// k-fold sumset M + ... + M. Uses kM - kM = k(M - M): the difference set is
// folded k times, clipped to |x| <= range_limit + max(M) after each fold.
// Requires k >= 1 and range_limit >= max(M).
std::vector<int> sumset_support(const FrequencySet& m, int k, int range_limit);

struct SumsetLimit {
  int gcd{1};  // gcd(M)
  // Smallest k <= k_max with support(k) == support(k + 1) == gcd(M) Z in range.
  std::optional<int> stabilization_k;
  // gcd of all pairwise differences: the lattice kM - kM actually fills.
  // Equals gcd(M) exactly when the stabilization can happen.
  int difference_gcd{0};
};

SumsetLimit sumset_gcd_limit(const FrequencySet& m, int k_max, int range_limit);

}  // namespace fce
