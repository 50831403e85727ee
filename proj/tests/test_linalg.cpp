#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "specpol/linalg.hpp"
#include "test_support.hpp"

using namespace specpol;
using specpol::testing::multiset_distance;
using specpol::testing::random_hermitian;
using specpol::testing::random_matrix;
using specpol::testing::random_unit;

TEST_CASE("hermitian_eig: diagonal matrix returns the standard basis") {
    auto d = ComplexMatrix::from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    auto e = hermitian_eig(d);
    REQUIRE(e.values.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(e.values[k].real() == doctest::Approx(k + 1).epsilon(1e-14));
        CHECK(std::abs((*e.vectors)[k][k]) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("hermitian_eig: 2x2 characteristic polynomial") {
    // [[n^2, 1], [1, 1]] with n = 2: roots of t^2 - 5t + 3.
    auto m = ComplexMatrix::from_rows({{4, 1}, {1, 1}});
    auto e = hermitian_eig(m);
    CHECK(e.values[0].real() == doctest::Approx((5.0 - std::sqrt(13.0)) / 2.0).epsilon(1e-14));
    CHECK(e.values[1].real() == doctest::Approx((5.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-14));

    auto s = hermitian_eig(ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
    CHECK(s.values[0].real() == doctest::Approx(-1.0));
    CHECK(s.values[1].real() == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig: rejects non-Hermitian input") {
    auto m = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
    CHECK_THROWS_AS(hermitian_eig(m), NotHermitian);
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("general_eig: triangular block, nilpotent, and companion matrix") {
    auto tri = general_eig(ComplexMatrix::from_rows({{1, 0}, {3, 9}}));
    CHECK(std::abs(tri.values[0] - cplx(1)) < 1e-14);
    CHECK(std::abs(tri.values[1] - cplx(9)) < 1e-14);

    auto jordan = general_eig(ComplexMatrix::from_rows({{0, 1}, {0, 0}}));
    CHECK(std::abs(jordan.values[0]) < 1e-14);
    CHECK(std::abs(jordan.values[1]) < 1e-14);

    // z^2 + a1 z + a0 with a1 = -(3+i), a0 = 2+2i; oracle: quadratic formula.
    const cplx a1(-3, -1), a0(2, 2);
    auto comp = ComplexMatrix::from_rows({{0, -a0}, {1, -a1}});
    const cplx disc = std::sqrt(a1 * a1 - 4.0 * a0);
    std::vector<cplx> roots{(-a1 + disc) / 2.0, (-a1 - disc) / 2.0};
    auto e = general_eig(comp, 1e-10, true);
    CHECK(multiset_distance(e.values, roots) < 1e-13);
    for (double r : e.residuals) CHECK(r < 1e-10);
}

TEST_CASE("general_eig: values sorted lexicographically") {
    auto m = ComplexMatrix::diagonal(std::vector<cplx>{{2, 1}, {1, 5}, {2, -1}, {1, -5}});
    auto e = general_eig(m);
    std::vector<cplx> expect{{1, -5}, {1, 5}, {2, -1}, {2, 1}};
    for (std::size_t i = 0; i < 4; ++i) CHECK(e.values[i] == expect[i]);
}

TEST_CASE("general_eig: symmetrizable tridiagonal path matches dense QR") {
    // Non-symmetric real tridiagonal with positive sub*super products.
    const std::size_t n = 12;
    ComplexMatrix t(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        t(i, i) = 2.0 + 0.1 * static_cast<double>(i);
        if (i + 1 < n) {
            t(i, i + 1) = -1.5;
            t(i + 1, i) = -0.5 - 0.01 * static_cast<double>(i);
        }
    }
    auto fast = general_eig(t);
    // Same matrix with one imaginary zero perturbed off the fast path.
    ComplexMatrix dense = t;
    dense(0, n - 1) = cplx(0.0, 1e-300);
    auto slow = general_eig(dense);
    CHECK(multiset_distance(fast.values, slow.values) < 1e-10);
    for (auto v : fast.values) CHECK(v.imag() == 0.0);
}

TEST_CASE("rayleigh: conjugate-linear in the second slot") {
    auto d = ComplexMatrix::from_rows({{0, 0}, {0, 1}});
    CHECK(std::abs(rayleigh(d, UnitVector::basis(2, 0))) == 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(rayleigh(d, UnitVector::checked({r, r})) - 0.5) < 1e-15);

    auto m = ComplexMatrix::from_rows({{100, 0}, {10, 1}});
    const double s = 1.0 / std::sqrt(1.01);
    auto x = UnitVector::normalize({cplx(0, -0.1) * s, s});
    CHECK(std::abs(rayleigh(m, x) - cplx(2, -1) / 1.01) < 1e-13);

    CHECK_THROWS_AS(rayleigh(m, UnitVector::basis(3, 0)), DimensionMismatch);
}

TEST_CASE("orthonormal_complement_basis") {
    std::vector<std::vector<cplx>> e1{{1, 0}};
    auto c = orthonormal_complement_basis(e1, 2);
    REQUIRE(c.size() == 1);
    CHECK(std::abs(c[0][0]) < 1e-15);
    CHECK(std::abs(std::abs(c[0][1]) - 1.0) < 1e-15);

    const double r = 1.0 / std::sqrt(2.0);
    std::vector<std::vector<cplx>> diag{{r, r}};
    auto c2 = orthonormal_complement_basis(diag, 2);
    REQUIRE(c2.size() == 1);
    CHECK(std::abs(inner(c2[0].components(), std::vector<cplx>{r, -r})) == doctest::Approx(1.0));

    std::mt19937 rng(7);
    std::vector<std::vector<cplx>> three;
    for (int k = 0; k < 3; ++k) {
        auto u = random_unit(8, rng);
        three.emplace_back(u.components().begin(), u.components().end());
    }
    auto c3 = orthonormal_complement_basis(three, 8);
    REQUIRE(c3.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(std::abs(inner(c3[i].components(), c3[j].components()) - (i == j ? 1.0 : 0.0)) < 1e-10);
        for (const auto& v : three) CHECK(std::abs(inner(c3[i].components(), v)) < 1e-10);
    }

    // Full-rank input leaves nothing.
    std::vector<std::vector<cplx>> both{{1, 0}, {0, 1}};
    CHECK(orthonormal_complement_basis(both, 2).empty());
}

TEST_CASE("compress") {
    auto d = ComplexMatrix::from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    std::vector<UnitVector> b13{UnitVector::basis(3, 0), UnitVector::basis(3, 2)};
    auto c = compress(d, b13);
    CHECK(c == ComplexMatrix::from_rows({{1, 0}, {0, 3}}));

    std::mt19937 rng(3);
    auto m = random_matrix(4, rng);
    std::vector<UnitVector> full;
    for (std::size_t k = 0; k < 4; ++k) full.push_back(UnitVector::basis(4, k));
    CHECK(compress(m, full) == m);

    const double r = 1.0 / std::sqrt(2.0);
    auto c1 = compress(ComplexMatrix::from_rows({{1, 0}, {2, 4}}), std::vector<UnitVector>{UnitVector::checked({r, r})});
    CHECK(std::abs(c1(0, 0) - 3.5) < 1e-14);

    std::vector<UnitVector> bad{UnitVector::basis(3, 0), UnitVector::basis(3, 0)};
    CHECK_THROWS_AS(compress(d, bad), BasisNotOrthonormal);
}

TEST_CASE("property: eigenpair residuals, solver agreement, trace, Rayleigh") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 9) * 4;
        auto h = random_hermitian(n, rng);
        auto he = hermitian_eig(h);
        auto ge = general_eig(h, 1e-10, true);
        const double fro = h.frobenius();
        for (double r : he.residuals) CHECK(r <= 1e-10 * (1.0 + fro));
        for (double r : ge.residuals) CHECK(r <= 1e-10 * (1.0 + fro));
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(he.values[k] - ge.values[k]) < 1e-8);
            CHECK(std::abs(rayleigh(h, (*he.vectors)[k]) - he.values[k]) < 1e-8);
        }

        auto m = random_matrix(n, rng);
        auto me = general_eig(m, 1e-10, true);
        cplx sum{};
        for (auto v : me.values) sum += v;
        CHECK(std::abs(sum - m.trace()) <= 1e-8 * (1.0 + std::abs(m.trace())));
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(me.residuals[k] <= 1e-10 * (1.0 + m.frobenius()));
            CHECK(std::abs(rayleigh(m, (*me.vectors)[k]) - me.values[k]) < 1e-8);
        }
    }
}

TEST_CASE("property: compression tower") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 9, k = 5, j = 3;
        auto m = random_matrix(n, rng);
        std::vector<std::vector<cplx>> raw1, raw2;
        for (std::size_t i = 0; i < k; ++i) {
            auto u = random_unit(n, rng);
            raw1.emplace_back(u.components().begin(), u.components().end());
        }
        for (std::size_t i = 0; i < j; ++i) {
            auto u = random_unit(k, rng);
            raw2.emplace_back(u.components().begin(), u.components().end());
        }
        auto b1 = orthonormalize(raw1);
        auto b2 = orthonormalize(raw2);
        std::vector<UnitVector> b12;
        for (const auto& c : b2) {
            std::vector<cplx> v(n);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t i = 0; i < n; ++i) v[i] += c[a] * b1[a][i];
            b12.push_back(UnitVector::normalize(std::move(v)));
        }
        auto lhs = compress(compress(m, b1), b2);
        auto rhs = compress(m, b12);
        CHECK((lhs - rhs).max_abs() < 1e-10);
    }
}

TEST_CASE("general_eig: lower-triangular block-diagonal keeps exact diagonal") {
    // Defective eigenvalue 1 (Jordan block) must still come out exactly.
    const std::size_t blocks = 30;
    ComplexMatrix a(2 * blocks, 2 * blocks);
    for (std::size_t n = 1; n <= blocks; ++n) {
        const double nn = static_cast<double>(n);
        a(2 * n - 2, 2 * n - 2) = nn * nn;
        a(2 * n - 1, 2 * n - 2) = nn;
        a(2 * n - 1, 2 * n - 1) = 1.0;
    }
    auto e = general_eig(a);
    std::vector<cplx> expect;
    for (std::size_t n = 1; n <= blocks; ++n) {
        expect.emplace_back(static_cast<double>(n * n));
        expect.emplace_back(1.0);
    }
    CHECK(multiset_distance(e.values, expect) < 1e-12);
}
