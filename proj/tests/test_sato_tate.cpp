#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "kloostat/kloosterman.hpp"
#include "kloostat/prime.hpp"
#include "kloostat/prime_context.hpp"
#include "kloostat/reference.hpp"
#include "kloostat/sato_tate.hpp"

using namespace kloostat;
using std::numbers::pi;

namespace {

// Composite Simpson quadrature of (2/pi) sin^2 over the window.
double measure_quadrature(double alpha, double beta) {
  const int steps = 1 << 14;  // even
  const long double h = (static_cast<long double>(beta) - alpha) / steps;
  const auto f = [](long double g) {
    const long double s = std::sin(g);
    return 2.0L / 3.141592653589793238462643383279502884L * s * s;
  };
  long double acc = f(alpha) + f(beta);
  for (int i = 1; i < steps; ++i) acc += f(alpha + i * h) * (i % 2 ? 4.0L : 2.0L);
  return static_cast<double>(acc * h / 3.0L);
}

AngleTable angles_for(std::uint64_t p) {
  const PrimeContext ctx(p);
  return angles(kloosterman_table_batch(ctx));
}

}  // namespace

TEST_CASE("window validation") {
  CHECK_THROWS_AS(Window(0.5, 0.5), validation_error);
  CHECK_THROWS_AS(Window(-0.1, 1.0), validation_error);
  CHECK_THROWS_AS(Window(0.0, 3.2), validation_error);
  CHECK_NOTHROW(Window(0.0, pi));
}

TEST_CASE("sato tate measure fixtures and quadrature oracle") {
  CHECK(sato_tate_measure(Window(0.0, pi)) == Catch::Approx(1.0).margin(1e-15));
  CHECK(sato_tate_measure(Window(0.0, pi / 2)) == Catch::Approx(0.5).margin(1e-15));
  CHECK(sato_tate_measure(Window(pi / 3, 2 * pi / 3)) ==
        Catch::Approx(0.6089977810442295).margin(1e-12));

  std::mt19937_64 gen(2);
  for (int i = 0; i < 25; ++i) {
    const double a = static_cast<double>(uniform_below(gen, 1000)) / 1000.0 * (pi - 0.01);
    const double b =
        a + 0.005 + static_cast<double>(uniform_below(gen, 1000)) / 1000.0 * (pi - a - 0.005);
    const Window w(a, std::min(b, pi));
    CHECK(sato_tate_measure(w) == Catch::Approx(measure_quadrature(w.alpha, w.beta)).margin(1e-12));
  }
}

TEST_CASE("measure monotone in the window") {
  CHECK(sato_tate_measure(Window(0.0, 1.0)) < sato_tate_measure(Window(0.0, 1.5)));
  CHECK(sato_tate_measure(Window(0.5, 2.0)) < sato_tate_measure(Window(0.2, 2.0)));
}

TEST_CASE("window counts at p = 5") {
  const AngleTable at = angles_for(5);
  CHECK(window_count(at, Window(0.0, pi)) == 4);
  CHECK(window_count(at, Window(0.0, pi / 2)) == 3);
  CHECK(window_count(at, Window(0.0, 0.1)) == 0);
  CHECK(window_count(at, Window(2.3, 2.4)) == 1);  // only a = 2
}

TEST_CASE("full window count is p - 1") {
  for (std::uint64_t p : {5ull, 101ull, 1009ull})
    CHECK(window_count(angles_for(p), Window(0.0, pi)) == p - 1);
}

TEST_CASE("count additivity at non-angle cuts") {
  const AngleTable at = angles_for(101);
  // cuts chosen off the computed angle values
  const double a = 0.7312345, b = 1.6123456, c = 2.4987654;
  CHECK(window_count(at, Window(a, b)) + window_count(at, Window(b, c)) ==
        window_count(at, Window(a, c)) + window_count(at, Window(b, b + 1e-12)));
  CHECK(window_count(at, Window(b, b + 1e-12)) == 0);
}

TEST_CASE("one-sided deviation at p = 5") {
  // frozen by breakpoint scan: attained just below psi(2) = 2.3798100672
  CHECK(niederreiter_deviation(angles_for(5)) == Catch::Approx(1.5824726386).margin(1e-9));
}

TEST_CASE("deviation lower bound from the full window") {
  for (std::uint64_t p : {5ull, 101ull, 1009ull})
    CHECK(niederreiter_deviation(angles_for(p)) >= 1.0);
}

TEST_CASE("deviation envelope at p = 101") {
  CHECK(niederreiter_deviation(angles_for(101)) <= 10.0 * std::pow(101.0, 0.75));
}

TEST_CASE("two-sided deviation brackets the one-sided value") {
  const AngleTable at = angles_for(101);
  const double one = niederreiter_deviation(at);
  const double two = niederreiter_deviation_two_sided(at);
  CHECK(two >= one - 1e-12);
  CHECK(two <= 2.0 * one + 1e-12);

  const AngleTable big = angles_for(10007);
  CHECK_THROWS_AS(niederreiter_deviation_two_sided(big), validation_error);
  CHECK_NOTHROW(niederreiter_deviation_two_sided(at, 101));
}

TEST_CASE("scaled subset count fixtures at p = 5") {
  const PrimeContext ctx(5);
  const AngleTable at = angles(kloosterman_table_naive(ctx));
  const Window half(0.0, pi / 2);
  CHECK(scaled_subset_count(ctx, at, 1, 4, half) == 3);  // M = p-1 recovers the count
  CHECK(scaled_subset_count(ctx, at, 1, 2, half) == 1);
  CHECK(scaled_subset_count(ctx, at, 2, 2, half) == 2);
  CHECK_THROWS_AS(scaled_subset_count(ctx, at, 0, 2, half), validation_error);
  CHECK_THROWS_AS(scaled_subset_count(ctx, at, 1, 5, half), validation_error);
}

TEST_CASE("star discrepancy fixtures") {
  CHECK(star_discrepancy({0.5}) == 0.5);
  CHECK(star_discrepancy({0.25, 0.75}) == 0.25);
  for (std::size_t n : {1, 4, 10, 33}) {
    std::vector<double> centered(n);
    for (std::size_t i = 1; i <= n; ++i)
      centered[i - 1] = (2.0 * static_cast<double>(i) - 1.0) / (2.0 * static_cast<double>(n));
    CHECK(star_discrepancy(centered) ==
          Catch::Approx(1.0 / (2.0 * static_cast<double>(n))).margin(1e-15));
  }
  CHECK_THROWS_AS(star_discrepancy({}), validation_error);
  CHECK_THROWS_AS(star_discrepancy({0.2, 1.0}), validation_error);
  CHECK_THROWS_AS(star_discrepancy({-0.1}), validation_error);
}

TEST_CASE("star discrepancy equals brute force") {
  std::mt19937_64 gen(77);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + uniform_below(gen, 200);
    std::vector<double> pts(n);
    for (auto& x : pts)
      x = static_cast<double>(uniform_below(gen, std::uint64_t{1} << 53)) /
          static_cast<double>(std::uint64_t{1} << 53);
    if (i % 5 == 0 && n > 2) pts[1] = pts[0];  // exercise ties
    REQUIRE(star_discrepancy(pts) == reference::star_discrepancy_brute(pts));
  }
}

TEST_CASE("discrepancy of the full window at p = 5") {
  const PrimeContext ctx(5);
  const AngleTable at = angles(kloosterman_table_naive(ctx));
  // points {1/5, 2/5, 3/5, 4/5}
  CHECK(discrepancy_of_window(ctx, at, 1, Window(0.0, pi)) == Catch::Approx(0.2).margin(1e-15));
}

TEST_CASE("full-window discrepancy is invariant under the lambda permutation") {
  const PrimeContext ctx(101);
  const AngleTable at = angles(kloosterman_table_batch(ctx));
  const double base = discrepancy_of_window(ctx, at, 1, Window(0.0, pi));
  for (std::uint64_t lam : {2ull, 7ull, 55ull, 100ull})
    CHECK(discrepancy_of_window(ctx, at, lam, Window(0.0, pi)) == base);
}

TEST_CASE("discrepancy rejects empty windows and lambda = 0") {
  const PrimeContext ctx(5);
  const AngleTable at = angles(kloosterman_table_naive(ctx));
  CHECK_THROWS_AS(discrepancy_of_window(ctx, at, 1, Window(0.0, 0.1)), empty_window_error);
  CHECK_THROWS_AS(discrepancy_of_window(ctx, at, 0, Window(0.0, pi)), validation_error);
}

TEST_CASE("exp sum fixtures at p = 5") {
  const PrimeContext ctx(5);
  const AngleTable at = angles(kloosterman_table_naive(ctx));
  CHECK(std::abs(exp_sum(ctx, at, 1, Window(0.0, pi / 2))) ==
        Catch::Approx(0.6180339887498949).margin(1e-12));
  CHECK(std::abs(exp_sum(ctx, at, 2, Window(0.0, pi / 2))) ==
        Catch::Approx(1.618033988749895).margin(1e-12));
  CHECK_THROWS_AS(exp_sum(ctx, at, 0, Window(0.0, pi)), validation_error);
}

TEST_CASE("full window exp sum is -1") {
  const PrimeContext ctx(101);
  const AngleTable at = angles(kloosterman_table_batch(ctx));
  std::mt19937_64 gen(5);
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t lam = 1 + uniform_below(gen, 100);
    const cplx s = exp_sum(ctx, at, lam, Window(0.0, pi));
    CHECK(std::abs(s - cplx{-1.0, 0.0}) <
          101.0 * std::numeric_limits<double>::epsilon() * 8);
  }
}

TEST_CASE("exp sum scan fixtures at p = 5") {
  const PrimeContext ctx(5);
  const AngleTable at = angles(kloosterman_table_naive(ctx));
  const std::vector<std::uint64_t> all{1, 2, 3, 4};
  const std::vector<Window> full{Window(0.0, pi)};
  CHECK(exp_sum_scan(ctx, at, all, full).max_abs == Catch::Approx(1.0).margin(1e-12));

  const std::vector<std::uint64_t> two{1, 2};
  const std::vector<Window> half{Window(0.0, pi / 2)};
  CHECK(exp_sum_scan(ctx, at, two, half).max_abs ==
        Catch::Approx(1.618033988749895).margin(1e-12));
  CHECK_THROWS_AS(exp_sum_scan(ctx, at, {}, half), validation_error);
}

TEST_CASE("character sums") {
  PrimeContext::Options opt;
  opt.build_dlog = true;
  const PrimeContext ctx5(5, opt);
  const AngleTable at5 = angles(kloosterman_table_naive(ctx5));

  // quadratic character of {1, 3, 4}: +1, -1, +1
  const cplx t = character_sum(ctx5, at5, 2, Window(0.0, pi / 2));
  CHECK(t.real() == Catch::Approx(1.0).margin(1e-12));
  CHECK(t.imag() == Catch::Approx(0.0).margin(1e-12));

  CHECK_THROWS_AS(character_sum(ctx5, at5, 0, Window(0.0, pi)), validation_error);
  CHECK_THROWS_AS(character_sum(ctx5, at5, 4, Window(0.0, pi)), validation_error);

  const PrimeContext ctx101(101, opt);
  const AngleTable at101 = angles(kloosterman_table_batch(ctx101));
  for (std::uint64_t k : {1ull, 2ull, 50ull, 99ull}) {
    const cplx full = character_sum(ctx101, at101, k, Window(0.0, pi));
    CHECK(std::abs(full) < 101.0 * std::numeric_limits<double>::epsilon() * 8);
  }
}

TEST_CASE("quadratic counts at p = 5") {
  const PrimeContext ctx(5);
  const AngleTable at = angles(kloosterman_table_naive(ctx));
  CHECK(quadratic_count(ctx, at, Window(0.0, pi)) == 4);
  CHECK(quadratic_count(ctx, at, Window(0.0, pi / 2)) == 4);
  CHECK(quadratic_count(ctx, at, Window(2.3, 2.4)) == 0);
}

TEST_CASE("quadratic count equals the legendre identity") {
  const PrimeContext ctx(101);
  const AngleTable at = angles(kloosterman_table_batch(ctx));
  for (const Window& w : {Window(0.0, pi / 2), Window(0.3, 1.7), Window(2.0, 3.0)}) {
    const std::vector<std::uint8_t> ind = window_indicator(at, w);
    std::uint64_t expect = 0;  // each residue b has 1 + legendre(b) square roots
    for (std::uint64_t b = 1; b < 101; ++b) {
      if (!ind[b]) continue;
      const std::uint64_t ls = mod_pow(b, 50, 101);
      expect += 1 + (ls == 1 ? 1 : -1);
    }
    CHECK(quadratic_count(ctx, at, w) == expect);
  }
}

TEST_CASE("scaled count scan stays under the eq-2 shape") {
  const PrimeContext ctx(1009);
  const AngleTable at = angles(kloosterman_table_batch(ctx));
  std::vector<std::uint64_t> ms;
  for (std::uint64_t m = 50; m <= 1008; m += 100) ms.push_back(m);
  const ScaledCountScan scan = scaled_count_scan(ctx, at, 7, Window(0.0, pi / 2), ms);
  CHECK(scan.max_abs_dev > 0.0);
  CHECK(scan.max_ratio <= 10.0);
  CHECK_THROWS_AS(scaled_count_scan(ctx, at, 0, Window(0.0, pi), ms), validation_error);
}
