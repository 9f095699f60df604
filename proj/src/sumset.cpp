#include "fce/sumset.hpp"

#include "fce/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

namespace fce {

namespace {

// Symmetric subset of [-limit, limit] stored as a dense mask.
class Lattice {
 public:
  explicit Lattice(int limit) : limit_(limit), mask_(2 * limit + 1, 0) {}

  void insert(int x) {
    if (std::abs(x) <= limit_) mask_[x + limit_] = 1;
  }
  bool contains(int x) const { return std::abs(x) <= limit_ && mask_[x + limit_] != 0; }

  Lattice plus(const std::vector<int>& steps) const {
    Lattice out(limit_);
    for (int x = -limit_; x <= limit_; ++x) {
      if (!contains(x)) continue;
      for (int d : steps) out.insert(x + d);
    }
    return out;
  }

  std::vector<int> nonnegative_up_to(int range) const {
    std::vector<int> out;
    for (int x = 0; x <= std::min(range, limit_); ++x) {
      if (contains(x)) out.push_back(x);
    }
    return out;
  }

 private:
  int limit_;
  std::vector<char> mask_;
};

std::vector<int> differences(const FrequencySet& m) {
  std::vector<int> out;
  for (int a : m.elements()) {
    for (int b : m.elements()) out.push_back(a - b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_range(const FrequencySet& m, int range_limit) {
  if (range_limit < m.max()) {
    throw PreconditionViolation("sumset: range_limit " + std::to_string(range_limit) +
                                " is below max(M) = " + std::to_string(m.max()));
  }
}

}  // namespace

FrequencySet::FrequencySet(std::vector<int> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (elements_.empty()) throw PreconditionViolation("FrequencySet: empty");
  if (elements_.front() < 1) throw PreconditionViolation("FrequencySet: elements must be >= 1");
}

int FrequencySet::gcd() const {
  int g = 0;
  for (int m : elements_) g = std::gcd(g, m);
  return g;
}

std::vector<int> sumset_support(const FrequencySet& m, int k, int range_limit) {
  if (k < 1) throw PreconditionViolation("sumset_support: k must be >= 1");
  check_range(m, range_limit);
  const auto steps = differences(m);
  // 0 is in M - M, so every fold only grows the set and any difference inside
  // the range has a path of partial sums staying within max(M) of it.
  Lattice current(range_limit + m.max());
  for (int d : steps) current.insert(d);
  for (int fold = 1; fold < k; ++fold) current = current.plus(steps);
  return current.nonnegative_up_to(range_limit);
}

SumsetLimit sumset_gcd_limit(const FrequencySet& m, int k_max, int range_limit) {
  if (k_max < 1) throw PreconditionViolation("sumset_gcd_limit: k_max must be >= 1");
  check_range(m, range_limit);
  SumsetLimit out;
  out.gcd = m.gcd();
  const auto steps = differences(m);
  for (int d : steps) out.difference_gcd = std::gcd(out.difference_gcd, std::abs(d));

  std::vector<int> target;
  for (int x = 0; x <= range_limit; x += out.gcd) target.push_back(x);

  Lattice current(range_limit + m.max());
  for (int d : steps) current.insert(d);
  bool previous_matched = current.nonnegative_up_to(range_limit) == target;
  for (int k = 1; k <= k_max; ++k) {
    Lattice next = current.plus(steps);
    const bool next_matches = next.nonnegative_up_to(range_limit) == target;
    if (previous_matched && next_matches) {
      out.stabilization_k = k;
      break;
    }
    previous_matched = next_matches;
    current = std::move(next);
  }
  return out;
}

}  // namespace fce
