#include <cmath>
#include <numbers>

#include "doctest.h"
#include "specpol/truncation1d.hpp"

using namespace specpol;

namespace {

DiffOp1D laplacian() {
    DiffOp1D op;
    op.label = "laplacian";
    op.q1 = [](double) { return cplx{}; };
    op.q0 = [](double) { return cplx{}; };
    op.q1_prime = [](double) { return cplx{}; };
    return op;
}

DiffOp1D potential(std::function<cplx(double)> q0, std::function<cplx(double)> q1 = {}) {
    auto op = laplacian();
    op.q0 = std::move(q0);
    if (q1) {
        op.q1 = std::move(q1);
        op.q1_prime = {};
    }
    return op;
}

cplx nearest(const std::vector<cplx>& values, cplx z) {
    cplx best = values.front();
    for (auto v : values)
        if (std::abs(v - z) < std::abs(best - z)) best = v;
    return best;
}

}  // namespace

TEST_CASE("discretize: laplacian on [0, pi]") {
    for (std::size_t n : {50, 100, 400}) {
        const Grid grid(0.0, std::numbers::pi, n);
        const auto d = discretize(laplacian(), grid);
        const double h = grid.step();
        CHECK(d.diag[0].real() == doctest::Approx(2.0 / (h * h)));
        CHECK(d.sub[0].real() == doctest::Approx(-1.0 / (h * h)));
        CHECK(d.super[0].real() == doctest::Approx(-1.0 / (h * h)));
        const auto m = d.matrix();
        CHECK((m - m.adjoint()).max_abs() == 0.0);
        const auto ev = d.eigenvalues();
        for (auto z : ev) CHECK(z.real() > 0.0);
        for (std::size_t k = 1; k <= 3; ++k)
            CHECK(std::abs(ev[k - 1].real() - double(k * k)) <= 4.0 * double(k * k * k * k) * h * h);
    }
}

TEST_CASE("discretize: constant advection-diffusion stencil") {
    const auto grid = Grid::symmetric(9.0, 900);
    const auto d = discretize(advdiff_constant(), grid);
    const double h = grid.step();
    for (std::size_t j = 0; j + 1 < d.size(); ++j) {
        CHECK(d.sub[j] == cplx(-1.0 / (h * h) + 1.0 / h));
        CHECK(d.super[j] == cplx(-1.0 / (h * h) - 1.0 / h));
    }
    CHECK(d.diag[17] == cplx(2.0 / (h * h)));
    const auto ev = d.eigenvalues();
    CHECK(ev.front().real() == doctest::Approx(1.0 + std::numbers::pi * std::numbers::pi / 324.0).epsilon(1e-4));
    const auto dense = general_eig(d.matrix()).values;
    CHECK(std::abs(dense.front() - ev.front()) < 1e-8);
}

TEST_CASE("discretize: complex coefficients use the dense path") {
    auto op = potential([](double x) { return cplx(0.0, x); });
    const auto d = discretize(op, Grid::symmetric(2.0, 40));
    const auto banded = d.eigenvalues();
    const auto dense = general_eig(d.matrix()).values;
    REQUIRE(banded.size() == dense.size());
    for (std::size_t i = 0; i < banded.size(); ++i) CHECK(std::abs(banded[i] - dense[i]) < 1e-8);
}

TEST_CASE("exact_constant_spectrum") {
    CHECK(exact_constant_spectrum(9.0, 1)[0] == doctest::Approx(1.030462).epsilon(1e-6));
    CHECK(exact_constant_spectrum(std::numbers::pi / 2.0, 1)[0] == doctest::Approx(2.0));
    CHECK(exact_constant_spectrum(1e6, 5)[4] == doctest::Approx(1.0));
    CHECK(exact_constant_spectrum(9.0, 5).size() == 5);
    CHECK_THROWS_AS(exact_constant_spectrum(0.0, 3), std::invalid_argument);
}

TEST_CASE("truncated_spectrum: constant model matches the exact spectrum") {
    TruncationSchedule sched;
    sched.s = {9.0};
    sched.nodes = 2000;
    const auto run = truncated_spectrum(advdiff_constant(), sched, true);
    REQUIRE(run.levels.size() == 1);
    const auto kept = run.levels[0].retained_eigenvalues();
    REQUIRE(kept.size() >= 5);
    const auto exact = exact_constant_spectrum(9.0, 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(std::abs(kept[k].real() - exact[k]) <= 1e-3 * exact[k]);
        CHECK(kept[k].real() == doctest::Approx(std::array{1.03048073, 1.12186217, 1.27416431, 1.48738678,
                                                           1.76152906}[k]).epsilon(1e-7));
    }
    for (auto z : kept) {
        CHECK(std::abs(z.imag()) <= 1e-6);
        CHECK(z.real() >= 1.0 - 1e-3);
    }
    CHECK(kept.size() < run.levels[0].eigenvalues.size());
}

TEST_CASE("truncated_spectrum: Gaussian model has a persistent eigenvalue") {
    TruncationSchedule sched;
    sched.s = {6.0, 7.0, 8.0, 9.0};
    const auto run = truncated_spectrum(advdiff_gaussian(), sched, true);
    std::vector<double> lows;
    for (const auto& level : run.levels) {
        CHECK(level.n == static_cast<std::size_t>(std::ceil(100.0 * level.s)));
        const auto kept = level.retained_eigenvalues();
        const auto z = nearest(kept, -3.25);
        CHECK(std::abs(z.imag()) < 1e-9);
        lows.push_back(z.real());
    }
    CHECK(lows[0] == doctest::Approx(-3.25358015).epsilon(1e-7));
    CHECK(lows[3] == doctest::Approx(-3.25358068).epsilon(1e-7));
    CHECK(std::abs(lows[2] - lows[3]) <= 1e-3);
}

TEST_CASE("truncated_spectrum: schedule validation") {
    TruncationSchedule sched;
    CHECK_THROWS_AS(sched.validate(), std::invalid_argument);
    sched.s = {3.0, 2.0};
    CHECK_THROWS_AS(sched.validate(), std::invalid_argument);
    sched.s = {1.0, 2.0};
    CHECK(sched.nodes_for(9.0) == 900);
    CHECK(sched.nodes_for(50.0) == kMaxNodes);
}

TEST_CASE("liouville_transform and essinf_potential") {
    const auto c = liouville_transform(advdiff_constant());
    for (double x : {-5.0, 0.0, 3.3}) {
        CHECK(c.q0(x) == cplx(1.0));
        CHECK(c.q1(x) == cplx{});
    }
    CHECK(c.c0 == cplx(1.0));
    CHECK(c.c1 == cplx{});
    CHECK(essinf_potential(advdiff_constant()) == doctest::Approx(1.0));

    const auto g = liouville_transform(advdiff_gaussian());
    for (double x : {-1.0, 0.3, 2.0})
        CHECK(std::abs(g.q0(x) - (advdiff_gaussian().q0(x) + 1.0)) < 1e-12);
    CHECK(essinf_potential(advdiff_gaussian()) == doctest::Approx(-6.933059221709).epsilon(1e-9));

    auto shifted = potential([](double) { return cplx(2.5); });
    CHECK(essinf_potential(shifted) == doctest::Approx(2.5));
    CHECK(liouville_transform(shifted).q0(1.0) == cplx(2.5));

    auto smooth = potential([](double) { return cplx{}; }, [](double x) { return cplx(std::sin(x)); });
    CHECK(liouville_transform(smooth).q0(0.7).real() ==
          doctest::Approx(-0.5 * std::cos(0.7) + 0.25 * std::sin(0.7) * std::sin(0.7)).epsilon(1e-8));

    auto complex_drift = potential([](double) { return cplx{}; }, [](double) { return cplx(0.0, 1.0); });
    CHECK_THROWS_AS(liouville_transform(complex_drift), ComplexQ1);
    CHECK_THROWS_AS(essinf_potential(complex_drift), ComplexQ1);
}

TEST_CASE("truncation_We: limiting symbol region") {
    const ClipBox box{-5.0, 30.0, -12.0, 12.0};
    const auto r = truncation_We(advdiff_constant(), box);
    REQUIRE_FALSE(r.empty);
    CHECK(contains(r, cplx(4.0, 0.0)));
    CHECK(contains(r, cplx(10.0, 6.0)));
    CHECK_FALSE(contains(r, cplx(4.0, 6.0)));
    CHECK_FALSE(contains(r, cplx(-3.25, 0.0)));
    CHECK(r.min_re() == doctest::Approx(0.0).epsilon(1e-9));

    auto flat = laplacian();
    const auto line = truncation_We(flat, box);
    CHECK(line.min_re() == doctest::Approx(0.0));
    CHECK(line.max_re() == doctest::Approx(30.0));

    auto moved = flat;
    moved.c0 = 3.0;
    CHECK(truncation_We(moved, box).min_re() == doctest::Approx(3.0));

    const auto full = truncation_We(advdiff_constant());
    CHECK(contains(full, cplx(100.0, 19.9)));
    CHECK_FALSE(contains(full, cplx(50.0, 15.0)));
}

TEST_CASE("property: Liouville isospectrality") {
    TruncationSchedule sched;
    sched.s = {4.0, 6.0};
    for (const auto& op : {advdiff_constant(), advdiff_gaussian()}) {
        const auto a = truncated_spectrum(op, sched, true);
        const auto b = truncated_spectrum(liouville_transform(op), sched, true);
        for (std::size_t k = 0; k < sched.s.size(); ++k) {
            const auto ka = a.levels[k].retained_eigenvalues();
            const auto kb = b.levels[k].retained_eigenvalues();
            REQUIRE(ka.size() >= 5);
            for (std::size_t i = 0; i < 5; ++i) {
                const double tol = 5.0 * kDiscretizationTol * (1.0 + std::abs(ka[i]));
                CHECK(std::abs(ka[i] - nearest(kb, ka[i])) <= tol);
            }
        }
    }
}

TEST_CASE("property: Hermitian surrogate bound and Dirichlet monotonicity") {
    TruncationSchedule sched;
    sched.s = {3.0, 4.0, 5.0, 6.0};
    const auto op = advdiff_gaussian();
    const double floor = essinf_potential(op);
    const auto run = truncated_spectrum(liouville_transform(op), sched, true);
    for (const auto& level : run.levels)
        for (auto z : level.retained_eigenvalues()) CHECK(z.real() >= floor - 1e-6);
    for (std::size_t k = 1; k < run.levels.size(); ++k) {
        const auto prev = run.levels[k - 1].retained_eigenvalues();
        const auto cur = run.levels[k].retained_eigenvalues();
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(cur[i].real() <= prev[i].real() + kDiscretizationTol * (1.0 + std::abs(prev[i])));
    }
}

TEST_CASE("property: second-order convergence") {
    const auto op = advdiff_constant();
    std::vector<double> values;
    for (std::size_t n : {100, 200, 400, 800})
        values.push_back(discretize(op, Grid::symmetric(5.0, n)).eigenvalues()[2].real());
    for (std::size_t i = 0; i + 2 < values.size(); ++i) {
        const double rate = std::log2(std::abs(values[i] - values[i + 1]) / std::abs(values[i + 1] - values[i + 2]));
        CHECK(rate >= 1.7);
        CHECK(rate <= 2.3);
    }
}
