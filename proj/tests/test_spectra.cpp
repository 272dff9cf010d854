#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "perpconj/error.hpp"
#include "perpconj/region.hpp"
#include "perpconj/spectra.hpp"
#include "support.hpp"

using namespace perpconj;
using Catch::Matchers::WithinAbs;

TEST_CASE("closed forms for small orders", "[spectra]") {
    const auto s1 = eigenvalues(SquareMatrix(1, std::vector<double>{-3.0}));
    REQUIRE(s1.size() == 1);
    CHECK(s1.values[0] == std::complex<double>(-3.0, 0.0));

    // rotation generator: +-i
    const auto rot = eigenvalues(SquareMatrix(2, {0.0, -1.0, 1.0, 0.0}));
    REQUIRE(rot.size() == 2);
    CHECK_THAT(rot.values[0].imag(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(rot.values[1].imag(), WithinAbs(1.0, 1e-15));

    const auto diag = eigenvalues(SquareMatrix(2, {2.0, 0.0, 0.0, -2.0}));
    CHECK(diag.values[0].real() == -2.0);
    CHECK(diag.values[1].real() == 2.0);
}

TEST_CASE("eigenvalues agree with Eigen on random matrices", "[spectra][property]") {
    Rng rng(11);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            SquareMatrix m(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-3, 3);
            }
            const auto ours = eigenvalues(m);
            const auto ref = testing_support::eigen_spectrum(testing_support::to_eigen(m));
            INFO("n=" << n << " trial=" << trial);
            CHECK(spectrum_distance(ours, ref) < 1e-9);
        }
    }
}

TEST_CASE("similarity preserves the spectrum", "[spectra][property]") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3;
        SquareMatrix a(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = rng.uniform(-2, 2);
                p(i, j) = rng.uniform(-2, 2) + (i == j ? 4.0 : 0.0);
            }
        }
        const auto b = p * a * inverse(p);
        CHECK(spectrum_distance(eigenvalues(a), eigenvalues(b)) < 1e-9);
    }
}

TEST_CASE("linear solve and inverse", "[spectra]") {
    const SquareMatrix m(3, {4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0});
    const std::vector<double> rhs{1.0, 2.0, 3.0};
    const auto x = solve_linear(m, rhs);
    const auto back = m * x;
    for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(back[i], WithinAbs(rhs[i], 1e-14));

    const auto id = m * inverse(m);
    CHECK((id - SquareMatrix::identity(3)).max_abs() < 1e-14);

    const SquareMatrix singular(2, {1.0, 2.0, 2.0, 4.0});
    CHECK_THROWS_AS(solve_linear(singular, std::vector<double>{1.0, 1.0}), SingularMatrix);
    CHECK(smallest_relative_pivot(singular) == 0.0);
    CHECK(smallest_relative_pivot(SquareMatrix::identity(2)) == 1.0);
}

TEST_CASE("spectrum distance is a bottleneck matching", "[spectra]") {
    Spectrum a{{{1.0, 0.0}, {2.0, 0.0}}};
    Spectrum b{{{2.0, 0.0}, {1.1, 0.0}}};
    CHECK_THAT(spectrum_distance(a, b), WithinAbs(0.1, 1e-15));
    Spectrum c{{{0.0, 1.0}, {0.0, -1.0}}};
    Spectrum d{{{0.0, -1.0}, {0.0, 1.0}}};
    CHECK(spectrum_distance(c, d) == 0.0);
    Spectrum e{{{1.0, 0.0}}};
    CHECK_THROWS_AS(spectrum_distance(a, e), ValidationError);
}

TEST_CASE("norms", "[spectra]") {
    const SquareMatrix m(2, {1.0, -2.0, 3.0, 4.0});
    CHECK(m.norm_inf() == 7.0);
    CHECK(m.max_abs() == 4.0);
    CHECK(m.all_finite());
}
