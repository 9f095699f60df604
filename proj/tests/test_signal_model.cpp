#include "fce/errors.hpp"
#include "fce/signal_model.hpp"
#include "fce/spectral.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fce;
using oracle::kPi;

namespace {

TrigPolynomial gcd3_signal() {
  return TrigPolynomial::real_cosine({{6, 0.8}, {9, 1.4}, {33, 0.9}}, 1.0);
}

TrigPolynomial random_poly(std::mt19937_64& gen, int terms, int max_freq) {
  std::uniform_int_distribution<int> freq(1, max_freq);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Term> t;
  while (static_cast<int>(t.size()) < terms) {
    const int m = freq(gen);
    if (std::any_of(t.begin(), t.end(), [m](const Term& x) { return x.frequency == m; })) continue;
    t.push_back({m, cplx(u(gen), u(gen))});
  }
  return TrigPolynomial(std::move(t));
}

double modulus(const TrigPolynomial& p, double t) { return std::abs(evaluate(p, t)); }

}  // namespace

TEST_CASE("construction normalizes terms") {
  TrigPolynomial p({{3, 1.0}, {1, 2.0}, {3, -1.0}, {2, 0.0}, {1, 1.0}});
  REQUIRE(p.terms().size() == 1);
  CHECK(p.terms()[0].frequency == 1);
  CHECK(p.terms()[0].amplitude == cplx(3.0, 0.0));
  CHECK_THROWS_AS(TrigPolynomial({{0, 1.0}}), PreconditionViolation);
  CHECK_THROWS_AS(TrigPolynomial({{1, 0.0}}), PreconditionViolation);
  CHECK_THROWS_AS(TrigPolynomial({}), PreconditionViolation);
  CHECK_THROWS_AS(TrigPolynomial({{1, 1.0}}, -1.0), PreconditionViolation);
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(TrigPolynomial({{1, 1.0}}), 0.0) == cplx(1.0, 0.0));
  CHECK(evaluate(gcd3_signal(), 0.0).real() == doctest::Approx(3.1).epsilon(1e-15));
  const cplx z = evaluate(TrigPolynomial({{1, 1.0}, {2, 1.0}}), kPi);
  CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("evaluate matches term-by-term sum and is periodic") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ut(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const TrigPolynomial p = random_poly(gen, 6, 40);
    std::vector<std::pair<int, cplx>> terms;
    for (const Term& t : p.terms()) terms.emplace_back(t.frequency, t.amplitude);
    const double t = ut(gen);
    CHECK(std::abs(evaluate(p, t) - oracle::eval(terms, t, p.period(), false)) < 1e-12);
    CHECK(std::abs(evaluate(p, t) - evaluate(p, t + p.period())) < 1e-12);
  }
}

TEST_CASE("sample examples") {
  const TrigPolynomial c = TrigPolynomial::real_cosine({{1, 1.0}}, 1.0);
  const SampledSignal s = sample(c, 512.0, 1.0);
  CHECK(s.size() == 512);
  CHECK(s.samples()[0] == 1.0);

  const SampledSignal q = sample(c, 4.0, 1.0);
  REQUIRE(q.size() == 4);
  const double want[] = {1.0, 0.0, -1.0, 0.0};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(q.samples()[i] - want[i]) < 1e-12);

  CHECK_THROWS_AS(sample(c, 2.0, 1.0), NyquistViolation);
  CHECK_THROWS_AS(sample(c, 512.0, 0.0), PreconditionViolation);
}

TEST_CASE("sampled {6, 9, 33} cosine sum has support {6, 9, 33}") {
  const SampledSignal s = sample(gcd3_signal(), 512.0, 1.0);
  const auto bins = oracle::direct_dft(s.samples());
  for (std::size_t l = 0; l < bins.size(); ++l) {
    const bool in_support = l == 6 || l == 9 || l == 33;
    if (in_support) {
      CHECK(std::abs(bins[l]) > 0.5);
    } else {
      CHECK(std::abs(bins[l]) < 1e-12);
    }
  }
}

TEST_CASE("sample and DFT recover amplitudes") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Term> t = random_poly(gen, 5, 60).terms();
    const TrigPolynomial p = TrigPolynomial::real_cosine(t, 1.0);
    const Spectrum spec = dft(sample(p, 256.0, 1.0));
    for (const Term& term : p.terms()) {
      const cplx got = spec.bins[term.frequency];
      CHECK(std::abs(got - term.amplitude) <= 1e-10 * std::abs(term.amplitude));
    }
  }
}

TEST_CASE("sup_norm examples") {
  CHECK(sup_norm(TrigPolynomial({{1, 1.0}})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sup_norm(TrigPolynomial({{1, 1.0}, {2, 1.0}})) == doctest::Approx(2.0).epsilon(1e-12));

  const TrigPolynomial p = gcd3_signal();
  double brute = 0.0;
  const int n = 10000000;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double v = 0.8 * std::cos(2 * kPi * 6 * t) + 1.4 * std::cos(2 * kPi * 9 * t) +
                     0.9 * std::cos(2 * kPi * 33 * t);
    brute = std::max(brute, std::abs(v));
  }
  const double s = sup_norm(p);
  CHECK(std::abs(s - brute) < 1e-8);
  CHECK(s >= brute - 1e-12);
}

TEST_CASE("sup_norm is amplitude homogeneous") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const TrigPolynomial p = random_poly(gen, 5, 30);
    const cplx c(u(gen), u(gen));
    CHECK(sup_norm(p.scaled(c)) == doctest::Approx(std::abs(c) * sup_norm(p)).epsilon(1e-10));
  }
}

TEST_CASE("find_global_maxima: two exponentials") {
  const PeakSet ps = find_global_maxima(TrigPolynomial({{1, 1.0}, {2, 1.0}}));
  REQUIRE(ps.peaks.size() == 1);
  const double loc = ps.peaks[0].location;
  CHECK(std::min(loc, 2 * kPi - loc) < 1e-9);
  CHECK(ps.peaks[0].value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ps.peaks[0].second_derivative == doctest::Approx(-0.5).epsilon(1e-8));
  // finite differences of g(t) = 2|cos(t/2)| on a 1e-6 grid
  const double h = 1e-6;
  const auto g = [](double t) { return 2.0 * std::abs(std::cos(t / 2)); };
  const double fd = (g(h) - 2 * g(0.0) + g(-h)) / (h * h);
  CHECK(fd == doctest::Approx(-0.5).epsilon(1e-3));
}

TEST_CASE("find_global_maxima: |cos t| has two peaks") {
  const PeakSet ps = find_global_maxima(TrigPolynomial::real_cosine({{1, 1.0}}));
  REQUIRE(ps.peaks.size() == 2);
  std::vector<double> locs{ps.peaks[0].location, ps.peaks[1].location};
  std::sort(locs.begin(), locs.end());
  CHECK(std::min(locs[0], 2 * kPi - locs[1]) < 1e-9);
  CHECK(std::abs(std::max(locs[0], locs[1]) - kPi) < 1e-9);
  for (const Peak& pk : ps.peaks) {
    CHECK(pk.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pk.second_derivative == doctest::Approx(-1.0).epsilon(1e-8));
  }
}

TEST_CASE("find_global_maxima: random polynomials against finite differences") {
  std::mt19937_64 gen(23);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const TrigPolynomial p = random_poly(gen, 5, 12);
    PeakSet ps;
    try {
      ps = find_global_maxima(p);
    } catch (const DegenerateMaximum&) {
      continue;
    }
    REQUIRE(!ps.peaks.empty());
    for (const Peak& pk : ps.peaks) {
      const double t = pk.location;
      CHECK(t >= 0.0);
      CHECK(t < p.period());
      CHECK(pk.value >= ps.sup_norm * (1 - 1e-9));
      // p' changes sign from + to - across t
      const double d = 1e-5;
      const auto pp = [&](double x) { return std::norm(evaluate(p, x)); };
      const auto dp = [&](double x) { return (pp(x + d) - pp(x - d)) / (2 * d); };
      CHECK(dp(t - 1e-3) > 0.0);
      CHECK(dp(t + 1e-3) < 0.0);
      const double h = 1e-4;
      const double fd = (modulus(p, t + h) - 2 * modulus(p, t) + modulus(p, t - h)) / (h * h);
      CHECK(fd < 0.0);
      CHECK(pk.second_derivative == doctest::Approx(fd).epsilon(1e-4));
      ++checked;
    }
    for (std::size_t i = 0; i < ps.peaks.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.peaks.size(); ++j) {
        CHECK(std::abs(ps.peaks[i].location - ps.peaks[j].location) > 1e-6 * p.period());
      }
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("find_global_maxima errors") {
  CHECK_THROWS_AS(find_global_maxima(TrigPolynomial({{3, cplx(0.2, 1.0)}})), ConstantModulus);
  // cos t - cos(3t) / 9 has g''(0) = -1 + 1 = 0
  const TrigPolynomial flat = TrigPolynomial::real_cosine({{1, 1.0}, {3, -1.0 / 9.0}});
  CHECK_THROWS_AS(find_global_maxima(flat), DegenerateMaximum);
}

TEST_CASE("support_gcd examples and Euclid cross-check") {
  std::vector<cplx> bins(40, 0.0);
  bins[6] = 1.0;
  bins[9] = 0.5;
  bins[33] = 0.2;
  CHECK(support_gcd(bins, 1e-9) == 3);
  std::vector<cplx> five(8, 0.0);
  five[5] = 1.0;
  CHECK(support_gcd(five, 0.0) == 5);
  std::vector<cplx> coprime(8, 0.0);
  coprime[2] = coprime[3] = 1.0;
  CHECK(support_gcd(coprime, 0.0) == 1);
  CHECK_THROWS_AS(support_gcd(std::vector<cplx>(8, 0.0), 0.0), EmptySupport);
  std::vector<cplx> dc_only(8, 0.0);
  dc_only[0] = 1.0;
  CHECK_THROWS_AS(support_gcd(dc_only, 0.0), EmptySupport);

  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> pick(1, 199);
  std::uniform_int_distribution<int> mult(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cplx> c(200, 0.0);
    const int g = mult(gen);
    int fold = 0;
    for (int i = 0; i < 4; ++i) {
      const int k = std::max(1, pick(gen) / g) * g;
      if (k >= 200) continue;
      c[k] = 1.0;
      fold = oracle::euclid(fold, k);
    }
    if (fold == 0) continue;
    const int got = support_gcd(c, 0.5);
    CHECK(got == fold);
    for (int k = 1; k < 200; ++k) {
      if (std::abs(c[k]) > 0.5) CHECK(k % got == 0);
    }
  }
}

TEST_CASE("support_gcd_relative ignores leakage") {
  std::vector<cplx> bins(40, 1e-12);
  bins[6] = 1.0;
  bins[9] = 0.5;
  CHECK(support_gcd_relative(bins) == 3);
}

TEST_CASE("sampled signal invariants") {
  CHECK_THROWS_AS(SampledSignal({1.0}, 10.0), PreconditionViolation);
  CHECK_THROWS_AS(SampledSignal({1.0, 2.0}, 0.0), PreconditionViolation);
  const SampledSignal s({1.0, 2.0, 3.0, 4.0}, 2.0, 0.5);
  CHECK(s.duration() == 2.0);
  CHECK(s.start_time() == 0.5);
}
