#include <doctest.h>

#include <cmath>
#include <set>

#include "liq/rng.hpp"
#include "liq/sim.hpp"
#include "liq/stats.hpp"

using namespace liq;

TEST_CASE("threefry known-answer vectors") {
    using B = rng::Threefry2x64::Block;
    const B zero = rng::Threefry2x64::encrypt({0, 0}, {0, 0});
    CHECK(zero[0] == 0xc2b6e3a8c2c69865ULL);
    CHECK(zero[1] == 0x6f81ed42f350084dULL);

    const B ones = rng::Threefry2x64::encrypt(
        {0xffffffffffffffffULL, 0xffffffffffffffffULL},
        {0xffffffffffffffffULL, 0xffffffffffffffffULL});
    CHECK(ones[0] == 0xe02cb7c4d95d277aULL);
    CHECK(ones[1] == 0xd06633d0893b8b68ULL);
}

TEST_CASE("streams are deterministic and keyed") {
    rng::Stream a(42, 7, 0), b(42, 7, 0);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // distinct path or substream keys give distinct draws
    rng::Stream c(42, 8, 0), d(42, 7, 1);
    rng::Stream base(42, 7, 0);
    int same_c = 0, same_d = 0;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t x = base.next_u64();
        if (x == c.next_u64()) ++same_c;
        if (x == d.next_u64()) ++same_d;
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("uniform and normal moments") {
    rng::Stream s(123, 0, 0);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);        // se ~ 0.00065
    CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.005);

    rng::Stream g(321, 0, 0);
    double m1 = 0, m2 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = g.normal();
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    CHECK(std::abs(m1 / n) < 0.02);
    CHECK(std::abs(m2 / n - 1.0) < 0.03);
    CHECK(std::abs(m4 / n - 3.0) < 0.2);
}

TEST_CASE("exponential mean matches the rate") {
    rng::Stream s(77, 3, 1);
    const double rate = 2.5;
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += s.exponential(rate);
    CHECK(std::abs(sum / n - 1.0 / rate) < 0.01);
}

TEST_CASE("poisson fill count matches theta (T - t0)") {
    const double theta = 2.0;
    const int runs = 100000;
    long count = 0;
    for (int r = 0; r < runs; ++r) {
        rng::Stream clock(9, static_cast<std::uint64_t>(r), rng::kSubstreamPoisson);
        count += static_cast<long>(sample_fill_times(theta, 0.0, 1.0, clock).size());
    }
    const double mean = static_cast<double>(count) / runs;
    // Poisson(2): sd = sqrt(2), se = sqrt(2/1e5) ~ 0.0045
    CHECK(std::abs(mean - 2.0) < 3.0 * 0.00448);
}

TEST_CASE("theta = 0 yields no fills; a first draw past T yields none") {
    rng::Stream clock(1, 1, rng::kSubstreamPoisson);
    CHECK(sample_fill_times(0.0, 0.0, 1.0, clock).empty());

    // tiny intensity: first exponential draw overshoots the horizon a.s.
    rng::Stream slow(1, 2, rng::kSubstreamPoisson);
    CHECK(sample_fill_times(1e-12, 0.0, 1.0, slow).empty());
}

TEST_CASE("pairwise sum is order-stable and exact on integers") {
    std::vector<double> v(1001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    CHECK(stats::pairwise_sum(v) == 1000.0 * 1001.0 / 2.0);
}
