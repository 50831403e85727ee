#include <cmath>
#include <random>

#include "doctest.h"
#include "specpol/numrange.hpp"
#include "specpol/operators.hpp"
#include "test_support.hpp"

using namespace specpol;
using specpol::testing::multiset_distance;

TEST_CASE("diag_alternating entries") {
    auto t = diag_alternating();
    CHECK(t.origin() == 0);
    auto w = t.window(0, 2);
    CHECK(w == ComplexMatrix::diagonal(std::vector<cplx>{0.0, cplx(1, -1), cplx(2, 4)}));
    CHECK(t.entry(1, 1) == cplx(1, -1));
    CHECK(t.entry(2, 2) == cplx(2, 4));
    CHECK(t.entry(0, 1) == cplx{});
}

TEST_CASE("ex1 block models") {
    auto [t, s] = ex1_models();
    CHECK(t.block(2) == ComplexMatrix::from_rows({{4, 0}, {0, 1}}));
    for (index_t n : {1, 7, 40}) CHECK(s.block(n) == ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
    CHECK((t + s).block(1) == ComplexMatrix::from_rows({{1, 1}, {1, 1}}));
    // Flat interleaving: block 2 sits at indices 3, 4.
    CHECK(t.entry(3, 3) == cplx(4));
    CHECK(t.entry(4, 4) == cplx(1));
    CHECK(s.entry(2, 3) == cplx{});
    CHECK(t.unit_range(2, 1) == std::pair<index_t, index_t>{3, 6});
}

TEST_CASE("delay operator blocks and spectra") {
    auto a = delay_operator();
    CHECK(a.block(1) == ComplexMatrix::from_rows({{1, 0}, {1, 1}}));
    auto e3 = general_eig(a.block(3));
    CHECK(multiset_distance(e3.values, {1.0, 9.0}) < 1e-14);
    for (index_t n : {1, 5, 12}) {
        auto e = general_eig(a.window(1, 2 * n));
        std::vector<cplx> expect;
        for (index_t k = 1; k <= n; ++k) {
            expect.emplace_back(static_cast<double>(k * k));
            expect.emplace_back(1.0);
        }
        CHECK(multiset_distance(e.values, expect) < 1e-10);
    }
    for (index_t n = 1; n <= 20; ++n) {
        auto b = a.block(n);
        CHECK(b(0, 1) == cplx{});
        CHECK(b(0, 0) == cplx(static_cast<double>(n * n)));
        CHECK(b(1, 1) == cplx(1.0));
    }
}

TEST_CASE("property: window consistency and adjoint duality") {
    auto [t, s] = ex1_models();
    std::vector<OperatorModel> models{diag_alternating(), t + s, delay_operator(), free_jacobi(), identity_ramp()};
    for (const auto& op : models) {
        const index_t o = op.origin();
        auto big = op.window(o, o + 19);
        for (index_t m = o; m <= o + 10; m += 3)
            for (index_t M = m; M <= o + 19; M += 4) {
                auto w = op.window(m, M);
                CHECK(w == big.block(static_cast<std::size_t>(m - o), static_cast<std::size_t>(m - o),
                                     static_cast<std::size_t>(M - m + 1), static_cast<std::size_t>(M - m + 1)));
                CHECK(op.adjoint().window(m, M) == w.adjoint());
            }
        for (index_t i = o; i < o + 12; ++i)
            for (index_t j = o; j < o + 12; ++j)
                if (std::abs(i - j) > static_cast<index_t>(op.bandwidth())) CHECK(op.entry(i, j) == cplx{});
    }
}

TEST_CASE("property: diag_alternating tail hull has min Re equal to the start") {
    auto t = diag_alternating();
    for (index_t m : {0, 1, 11, 64, 500}) {
        auto w = t.window(m, m + 40);
        std::vector<cplx> d;
        for (std::size_t i = 0; i < w.rows(); ++i) d.push_back(w(i, i));
        double minre = 1e300;
        for (auto v : convex_hull(d)) minre = std::min(minre, v.real());
        CHECK(minre == static_cast<double>(m));
    }
}

TEST_CASE("advection_diffusion models") {
    auto c = advdiff_constant();
    CHECK(c.q1(3.7) == cplx(-2));
    CHECK(c.q0(-1.2) == cplx(0));
    auto g = advdiff_gaussian();
    CHECK(g.q0(0.0) == cplx(0));
    CHECK(g.q0(1.0).real() == doctest::Approx(20 * std::sin(1.0) * std::exp(-1.0)));
    CHECK_THROWS_AS(advection_diffusion([](double) { return cplx(-2); }, [](double x) { return cplx(1.0 / x); },
                                        -2.0, 0.0),
                    LimitMismatch);
    CHECK_THROWS_AS(advection_diffusion([](double) { return cplx(-1); }, [](double) { return cplx(0); }, -2.0, 0.0),
                    LimitMismatch);
}

TEST_CASE("symbol_eval") {
    auto p = SymbolSpec::advection_diffusion(-2.0, 0.0);
    CHECK(symbol_eval(p, 1.0) == cplx(1, -2));
    CHECK(symbol_eval(p, -1.0) == cplx(1, 2));
    auto q = SymbolSpec::advection_diffusion(-2.0, cplx(5, 1));
    CHECK(symbol_eval(q, 0.0) == cplx(5, 1));
    CHECK(limiting_symbol(advdiff_gaussian()).coeffs == p.coeffs);
    CHECK_THROWS_AS(SymbolSpec::from_coefficients({0.0, 0.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SymbolSpec::from_coefficients({0.0, 1.0}), std::invalid_argument);
    // Re p_2(xi) = xi^2 > 0 off the origin.
    for (double xi = -5; xi <= 5; xi += 0.25)
        if (xi != 0.0) CHECK((p.principal() * xi * xi).real() > 0);
}

TEST_CASE("airy_witness") {
    for (cplx lambda : {cplx(1), cplx(2, 3), cplx(0.5, -1)}) {
        auto w = airy_witness(lambda, 20, airy_grid(lambda, 20, 1e-3));
        CHECK(std::abs(w.rayleigh_value - lambda) <= 0.01);
        CHECK(w.rayleigh_value.real() >= -1e-9);
        CHECK(std::abs(w.norm_sq - 1.0) <= 0.01);
        CHECK(0.5 * (w.centers[0] + w.centers[1]) == doctest::Approx(lambda.imag()));
    }
    auto up = airy_witness(cplx(1, 2), 20, airy_grid(cplx(1, 2), 20, 1e-3));
    CHECK(up.centers[0] == doctest::Approx(-20));
    CHECK(up.centers[1] == doctest::Approx(24));
    auto down = airy_witness(cplx(1, -2), 20, airy_grid(cplx(1, -2), 20, 1e-3));
    CHECK(down.centers[0] == doctest::Approx(-24));
    CHECK(down.centers[1] == doctest::Approx(20));

    CHECK_THROWS_AS(airy_witness(1.0, 20, Grid(-5, 5, 1000)), GridTooCoarse);
    CHECK_THROWS_AS(airy_witness(cplx(10), 20, airy_grid(cplx(10), 20, 0.5)), GridTooCoarse);
    CHECK_THROWS_AS(airy_witness(cplx(0, 1), 20, Grid(-30, 30, 1000)), std::invalid_argument);
}

TEST_CASE("grid") {
    Grid g = Grid::symmetric(9, 99);
    CHECK(g.step() == doctest::Approx(0.18));
    CHECK(g.node(0) == -9);
    CHECK_THROWS_AS(Grid(0, 1, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1, 0, 100), std::invalid_argument);
}
