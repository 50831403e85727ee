#include "specpol/truncation1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "specpol/essrange.hpp"
#include "specpol/parallel.hpp"

namespace specpol {

namespace {

constexpr double kDerivativeStep = 1e-5;

cplx central_derivative(const CoefFn& f, double x) {
    return (f(x + kDerivativeStep) - f(x - kDerivativeStep)) / (2.0 * kDerivativeStep);
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return std::min({fc, fd, f(0.5 * (a + b))});
}

/// Largest |value| spanned by the clip box, used to size the xi-grid.
double clip_scale(const ClipBox& clip) {
    return std::max({std::abs(clip.re_min), std::abs(clip.re_max), std::abs(clip.im_min), std::abs(clip.im_max)});
}

}  // namespace

ComplexMatrix DirichletDiscretization::matrix() const {
    const std::size_t n = size();
    ComplexMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        m(j, j) = diag[j];
        if (j + 1 < n) {
            m(j + 1, j) = sub[j];
            m(j, j + 1) = super[j];
        }
    }
    return m;
}

std::vector<cplx> DirichletDiscretization::eigenvalues() const { return tridiagonal_eigenvalues(sub, diag, super); }

DirichletDiscretization discretize(const DiffOp1D& op, const Grid& grid) {
    DirichletDiscretization d;
    d.grid = grid;
    d.label = op.label;
    const std::size_t n = grid.n;
    const double h = grid.step();
    const double inv_h2 = 1.0 / (h * h);
    d.diag.resize(n);
    d.sub.resize(n - 1);
    d.super.resize(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.node(j + 1);
        const cplx q1 = op.q1(x);
        d.diag[j] = 2.0 * inv_h2 + op.q0(x);
        if (j > 0) d.sub[j - 1] = -inv_h2 - q1 / (2.0 * h);
        if (j + 1 < n) d.super[j] = -inv_h2 + q1 / (2.0 * h);
    }
    return d;
}

void TruncationSchedule::validate() const {
    if (s.empty()) throw std::invalid_argument("truncation schedule: no interval half-widths");
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (!(s[k] > 0.0)) throw std::invalid_argument("truncation schedule: s must be positive");
        if (k > 0 && s[k] <= s[k - 1]) throw std::invalid_argument("truncation schedule: s must increase");
    }
    if (!(density > 0.0)) throw std::invalid_argument("truncation schedule: density must be positive");
}

std::size_t TruncationSchedule::nodes_for(double s_value) const {
    if (nodes) return *nodes;
    const auto n = static_cast<std::size_t>(std::ceil(density * 2.0 * s_value));
    return std::clamp<std::size_t>(n, 16, max_nodes);
}

std::vector<cplx> TruncationLevel::retained_eigenvalues() const {
    std::vector<cplx> out;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        if (retained[i]) out.push_back(eigenvalues[i]);
    return out;
}

TruncationRun truncated_spectrum(const DiffOp1D& op, const TruncationSchedule& sched, bool refine, double tol) {
    sched.validate();
    TruncationRun run;
    run.label = op.label;
    run.levels.resize(sched.s.size());
    parallel_for(sched.s.size(), [&](std::size_t k) {
        TruncationLevel& level = run.levels[k];
        level.s = sched.s[k];
        level.n = sched.nodes_for(level.s);
        const auto grid = Grid::symmetric(level.s, level.n);
        level.h = grid.step();
        level.eigenvalues = discretize(op, grid).eigenvalues();
        level.retained.assign(level.eigenvalues.size(), true);
        if (!refine) return;
        const auto fine = discretize(op, Grid::symmetric(level.s, 2 * level.n)).eigenvalues();
        for (std::size_t i = 0; i < level.eigenvalues.size(); ++i) {
            const cplx z = level.eigenvalues[i];
            double best = std::numeric_limits<double>::infinity();
            for (auto w : fine) best = std::min(best, std::abs(z - w));
            level.retained[i] = best <= tol * (1.0 + std::abs(z));
        }
    });
    return run;
}

DiffOp1D liouville_transform(const DiffOp1D& op, double check_extent) {
    for (double x = -check_extent; x <= check_extent; x += 0.25) {
        const cplx q1 = op.q1(x);
        if (std::abs(q1.imag()) > 1e-12 * (1.0 + std::abs(q1)))
            throw ComplexQ1("liouville_transform: q1(" + std::to_string(x) + ") is not real in '" + op.label + "'");
    }
    if (std::abs(op.c1.imag()) > 1e-12) throw ComplexQ1("liouville_transform: limit c1 is not real");
    DiffOp1D out;
    out.label = op.label + " (Liouville)";
    out.q1 = [](double) { return cplx{}; };
    out.q1_prime = [](double) { return cplx{}; };
    out.q0 = [q0 = op.q0, q1 = op.q1, q1p = op.q1_prime](double x) {
        const double a = q1(x).real();
        const double da = (q1p ? q1p(x) : central_derivative(q1, x)).real();
        return q0(x) - 0.5 * da + 0.25 * a * a;
    };
    out.c1 = 0.0;
    out.c0 = op.c0 + 0.25 * op.c1 * op.c1;
    return out;
}

std::vector<double> exact_constant_spectrum(double s, std::size_t k_max) {
    if (!(s > 0.0)) throw std::invalid_argument("exact_constant_spectrum: s must be positive");
    std::vector<double> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double kk = static_cast<double>(k);
        out.push_back(1.0 + std::numbers::pi * std::numbers::pi * kk * kk / (4.0 * s * s));
    }
    return out;
}

double essinf_potential(const DiffOp1D& op, double extent, double step) {
    if (!(extent > 0.0) || !(step > 0.0))
        throw std::invalid_argument("essinf_potential: extent and step must be positive");
    const auto t = liouville_transform(op, extent);
    auto f = [&](double x) { return t.q0(x).real(); };
    const auto half = static_cast<long long>(std::ceil(extent / step));
    double best = std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (long long k = -half; k <= half; ++k) {
        const double x = std::clamp(static_cast<double>(k) * step, -extent, extent);
        const double v = f(x);
        if (v < best) {
            best = v;
            arg = x;
        }
    }
    const double lo = std::max(-extent, arg - step), hi = std::min(extent, arg + step);
    return std::min(best, golden_minimize(f, lo, hi));
}

ConvexRegion truncation_We(const DiffOp1D& op, const ClipBox& clip) {
    const auto sym = limiting_symbol(op);
    double extent = std::max(4.0, 2.0 * std::sqrt(clip_scale(clip) + std::abs(op.c0)) + std::abs(op.c1));
    for (int attempt = 0;; ++attempt) {
        try {
            return symbol_We(sym, extent, extent / 4000.0, clip);
        } catch (const GridInsufficient&) {
            if (attempt >= 8) throw;
            extent *= 2.0;
        }
    }
}

}  // namespace specpol
