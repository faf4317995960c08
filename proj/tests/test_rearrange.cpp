#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lorcross/grid.hpp"
#include "lorcross/io.hpp"
#include "lorcross/rearrange.hpp"

using namespace lorcross;

TEST_CASE("decreasing rearrangement sorts mass into a step function") {
    std::vector<double> v{0.5, 2.0, 1.0, 0.0};
    StepFunction s = rearrange_1d(v);
    CHECK(s.values == std::vector<double>{2.0, 1.0, 0.5, 0.0});
    CHECK(s.value_at(0.0) == 2.0);
    CHECK(s.value_at(0.26) == 1.0);
    CHECK(s.value_at(0.99) == 0.0);
    CHECK_THROWS_AS(s.value_at(1.0), std::domain_error);

    std::vector<double> neg{1.0, -0.5};
    CHECK_THROWS_AS(rearrange_1d(neg), std::domain_error);
}

TEST_CASE("indicator of a box rearranges to the indicator of a prefix") {
    GridFunction box = make_from_generator("gen:rect:0.25", 1, {16, 1, 1});
    std::vector<double> mags(box.samples.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(box.samples[i]);
    StepFunction s = rearrange_1d(mags);
    CHECK(s.value_at(0.2499) == 1.0);
    CHECK(s.value_at(0.25) == 0.0);
}

TEST_CASE("iterated rearrangement of a 2x2 grid gives the corner-sorted table") {
    // Samples (axis 1 fastest): f(0,0)=1 f(1,0)=3 f(0,1)=2 f(1,1)=4.
    // Axis 1 first: rows (1,3),(2,4) -> (3,1),(4,2); then columns
    // (3,4),(1,2) -> (4,3),(2,1).  Row-major result: 4,2,3,1.
    std::vector<double> vals{1.0, 3.0, 2.0, 4.0};
    IteratedRearrangement r = iterated_rearrangement(vals, 2, {2, 2, 1});
    CHECK(r.values == std::vector<double>{4.0, 2.0, 3.0, 1.0});
    double t0[2] = {0.0, 0.0};
    CHECK(r.value_at(std::span<const double>(t0, 2)) == 4.0);
    double t1[2] = {0.6, 0.0};
    CHECK(r.value_at(std::span<const double>(t1, 2)) == 2.0);
    double t2[2] = {0.0, 0.7};
    CHECK(r.value_at(std::span<const double>(t2, 2)) == 3.0);
    double t3[2] = {0.6, 0.7};
    CHECK(r.value_at(std::span<const double>(t3, 2)) == 1.0);
}

TEST_CASE("iterated rearrangement is equimeasurable and monotone per axis") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SplitMix64 rng(seed);
        GridFunction f = GridFunction::zeros(3, {4, 4, 4});
        for (auto& v : f.samples) v = {rng.sym(), rng.sym()};
        IteratedRearrangement r = iterated_rearrangement(f);

        std::vector<double> a(f.samples.size()), b = r.values;
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.samples[i]);
        std::sort(a.begin(), a.end());
        std::vector<double> c = b;
        std::sort(c.begin(), c.end());
        CHECK(a == c);  // same multiset, exactly

        auto at = [&](int i1, int i2, int i3) {
            return b[static_cast<std::size_t>(i1) + 4ull * (i2 + 4ull * i3)];
        };
        for (int i3 = 0; i3 < 4; ++i3)
            for (int i2 = 0; i2 < 4; ++i2)
                for (int i1 = 0; i1 < 4; ++i1) {
                    if (i1 + 1 < 4) CHECK(at(i1, i2, i3) >= at(i1 + 1, i2, i3));
                    if (i2 + 1 < 4) CHECK(at(i1, i2, i3) >= at(i1, i2 + 1, i3));
                    if (i3 + 1 < 4) CHECK(at(i1, i2, i3) >= at(i1, i2, i3 + 1));
                }
    }
}

TEST_CASE("distribution function counts strict exceedances") {
    std::vector<double> v{0.0, 1.0, 1.0, 2.0};
    CHECK(distribution_function(v, 0.5) == doctest::Approx(0.75));
    CHECK(distribution_function(v, 1.0) == doctest::Approx(0.25));
    CHECK(distribution_function(v, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("maximal average takes the corner box of the iterated rearrangement") {
    // separable positive table: the rearranged table is the outer product of
    // the sorted factors, so corner averages factor too
    const double a[4] = {2.0, 5.0, 3.0, 7.0};  // sorted: 7 5 3 2
    const double b[4] = {1.0, 4.0, 2.0, 8.0};  // sorted: 8 4 2 1
    GridFunction f = GridFunction::zeros(2, {4, 4, 1});
    for (int i2 = 0; i2 < 4; ++i2)
        for (int i1 = 0; i1 < 4; ++i1)
            f.samples[f.index({i1, i2, 0})] = cplx{a[i1] * b[i2], 0.0};

    double t_corner[2] = {0.25, 0.25};
    CHECK(maximal_average(f, std::span<const double>(t_corner, 2)) == doctest::Approx(56.0));
    double t_row[2] = {0.5, 0.25};
    CHECK(maximal_average(f, std::span<const double>(t_row, 2)) == doctest::Approx(48.0));
    double t_col[2] = {0.25, 0.5};
    CHECK(maximal_average(f, std::span<const double>(t_col, 2)) == doctest::Approx(42.0));
    double t_all[2] = {1.0, 1.0};
    CHECK(maximal_average(f, std::span<const double>(t_all, 2)) ==
          doctest::Approx(4.25 * 3.75));

    double bad[2] = {0.3, 1.0};
    CHECK_THROWS_AS(maximal_average(f, std::span<const double>(bad, 2)), std::domain_error);
}
