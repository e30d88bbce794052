#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "kloostat/prime.hpp"
#include "kloostat/prime_context.hpp"

using namespace kloostat;

namespace {

// Trial-division oracle, independent of the strong-pseudoprime path.
bool is_prime_trial(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("is_prime fixtures") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK_FALSE(is_prime(100));
  CHECK(is_prime(101));
  CHECK(is_prime(2147483647ull));  // 2^31 - 1, checked against trial division below
  CHECK(is_prime_trial(2147483647ull));
  CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("is_prime agrees with trial division up to 20000") {
  for (std::uint64_t m = 0; m < 20000; ++m) {
    INFO("m = " << m);
    REQUIRE(is_prime(m) == is_prime_trial(m));
  }
}

TEST_CASE("mod_inverse fixtures and involution") {
  CHECK(mod_inverse(1, 7) == 1);
  CHECK(mod_inverse(2, 5) == 3);
  CHECK(mod_inverse(3, 7) == 5);
  CHECK_THROWS_AS(mod_inverse(0, 7), validation_error);
  CHECK_THROWS_AS(mod_inverse(14, 7), validation_error);

  const std::uint64_t p = 10007;
  for (std::uint64_t a = 1; a < p; ++a) {
    const std::uint64_t b = mod_inverse(a, p);
    REQUIRE(b >= 1);
    REQUIRE(b <= p - 1);
    REQUIRE(mod_mul(a, b, p) == 1);
    REQUIRE(mod_inverse(b, p) == a);
  }
}

TEST_CASE("find_generator fixtures") {
  CHECK(find_generator(3) == 2);
  CHECK(find_generator(5) == 2);
  CHECK(find_generator(7) == 3);
  CHECK(find_generator(101) == 2);
  CHECK_THROWS_AS(find_generator(100), validation_error);
}

TEST_CASE("prime context validates input") {
  CHECK_THROWS_AS(PrimeContext(4), validation_error);
  CHECK_THROWS_AS(PrimeContext(2), validation_error);
  CHECK_THROWS_AS(PrimeContext(0), validation_error);
  PrimeContext::Options opt;
  opt.size_cap = 100;
  CHECK_THROWS_AS(PrimeContext(101, opt), validation_error);
  opt.size_cap = PrimeContext::hard_cap * 2;
  CHECK_THROWS_AS(PrimeContext((std::uint64_t{1} << 31) + 11, opt), validation_error);
}

TEST_CASE("bit length exponent") {
  CHECK(PrimeContext(5).n() == 2);
  CHECK(PrimeContext(17).n() == 4);
  CHECK(PrimeContext(65537).n() == 16);
  const PrimeContext ctx(10007);
  const std::uint64_t p = ctx.p();
  CHECK((std::uint64_t{1} << ctx.n()) <= p);
  CHECK(p < (std::uint64_t{1} << (ctx.n() + 1)));
}

TEST_CASE("inverse table matches euclid") {
  PrimeContext::Options opt;
  opt.build_inverses = true;
  const PrimeContext ctx(1009, opt);
  REQUIRE(ctx.has_inverses());
  for (std::uint64_t a = 1; a < 1009; ++a) {
    REQUIRE(ctx.inverse(a) == mod_inverse(a, 1009));
    REQUIRE(mod_mul(a, ctx.inverse(a), 1009) == 1);
  }
  CHECK_THROWS_AS(ctx.inverse(0), validation_error);
}

TEST_CASE("dlog table and power map are mutually inverse") {
  PrimeContext::Options opt;
  opt.build_dlog = true;
  const PrimeContext ctx(1009, opt);
  REQUIRE(ctx.has_dlog());
  REQUIRE(ctx.generator().has_value());
  const std::uint64_t g = *ctx.generator();

  std::vector<bool> hit(1008, false);
  for (std::uint64_t a = 1; a < 1009; ++a) {
    const std::uint64_t j = ctx.dlog(a);
    REQUIRE(j <= 1007);
    REQUIRE_FALSE(hit[j]);  // bijection onto {0..p-2}
    hit[j] = true;
    REQUIRE(mod_pow(g, j, 1009) == a);
  }
}

TEST_CASE("eval_ep fixtures") {
  const PrimeContext ctx(5);
  const cplx one = ctx.ep(0);
  CHECK(one.real() == Catch::Approx(1.0));
  CHECK(one.imag() == Catch::Approx(0.0).margin(1e-15));

  const cplx fifth = ctx.ep(1);
  CHECK(fifth.real() == Catch::Approx(0.30901699437494745).epsilon(1e-12));
  CHECK(fifth.imag() == Catch::Approx(0.9510565162951535).epsilon(1e-12));

  // periodicity: callers reduce mod p, ep does the same reduction
  CHECK(ctx.ep(6) == ctx.ep(1));
}

TEST_CASE("eval_ep unit modulus and table agreement") {
  PrimeContext::Options opt;
  opt.build_roots = true;
  const PrimeContext with_table(101, opt);
  const PrimeContext without(101);
  for (std::uint64_t z = 0; z < 101; ++z) {
    CHECK(std::abs(std::abs(with_table.ep(z)) - 1.0) < 4e-16);
    CHECK(with_table.ep(z) == without.ep(z));
  }
}

TEST_CASE("geometric cancellation of e_p over a full period") {
  for (std::uint64_t p : {5ull, 101ull, 1009ull}) {
    const PrimeContext ctx(p);
    cplx s{0.0, 0.0};
    for (std::uint64_t z = 0; z < p; ++z) s += ctx.ep(z);
    CHECK(std::abs(s) < static_cast<double>(p) * std::numeric_limits<double>::epsilon());
  }
}
