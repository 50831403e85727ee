#include "specpol/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specpol {

const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::banded: return "banded";
        case ModelKind::block2x2: return "block2x2";
        case ModelKind::diagonal: return "diagonal";
    }
    return "unknown";
}

OperatorModel OperatorModel::banded(std::string label, EntryRule rule, std::size_t bandwidth, index_t origin) {
    OperatorModel m;
    m.kind_ = ModelKind::banded;
    m.label_ = std::move(label);
    m.rule_ = std::move(rule);
    m.bandwidth_ = bandwidth;
    m.origin_ = origin;
    return m;
}

OperatorModel OperatorModel::diagonal(std::string label, std::function<cplx(index_t)> d, index_t origin) {
    OperatorModel m;
    m.kind_ = ModelKind::diagonal;
    m.label_ = std::move(label);
    m.rule_ = [d = std::move(d)](index_t i, index_t j) { return i == j ? d(i) : cplx{}; };
    m.bandwidth_ = 0;
    m.origin_ = origin;
    return m;
}

OperatorModel OperatorModel::block2x2(std::string label, BlockRule rule) {
    OperatorModel m;
    m.kind_ = ModelKind::block2x2;
    m.label_ = std::move(label);
    m.rule_ = [rule = std::move(rule)](index_t i, index_t j) {
        const index_t bi = (i + 1) / 2, bj = (j + 1) / 2;
        if (bi != bj) return cplx{};
        const auto b = rule(bi);
        return b[static_cast<std::size_t>(((i - 1) % 2) * 2 + (j - 1) % 2)];
    };
    m.bandwidth_ = 1;
    m.origin_ = 1;
    return m;
}

std::pair<index_t, index_t> OperatorModel::unit_range(index_t m, index_t w) const {
    const index_t bs = unit_size();
    return {origin_ + (m - origin_) * bs, origin_ + (m + w - origin_ + 1) * bs - 1};
}

cplx OperatorModel::entry(index_t i, index_t j) const {
    if (i < origin_ || j < origin_) return {};
    const index_t d = i > j ? i - j : j - i;
    if (d > static_cast<index_t>(bandwidth_)) return {};
    return rule_(i, j);
}

ComplexMatrix OperatorModel::window(index_t m, index_t M) const {
    if (m < origin_ || M < m)
        throw std::invalid_argument("window: invalid index range [" + std::to_string(m) + ", " + std::to_string(M) +
                                    "]");
    const auto n = static_cast<std::size_t>(M - m + 1);
    ComplexMatrix w(n, n);
    const auto bw = static_cast<index_t>(bandwidth_);
    for (index_t i = m; i <= M; ++i)
        for (index_t j = std::max(m, i - bw); j <= std::min(M, i + bw); ++j)
            w(static_cast<std::size_t>(i - m), static_cast<std::size_t>(j - m)) = rule_(i, j);
    return w;
}

ComplexMatrix OperatorModel::block(index_t n) const {
    if (kind_ != ModelKind::block2x2) throw std::logic_error("block: model '" + label_ + "' is not a block model");
    return window(2 * n - 1, 2 * n);
}

OperatorModel OperatorModel::adjoint() const {
    OperatorModel a = *this;
    a.label_ = label_ + "*";
    a.rule_ = [r = rule_](index_t i, index_t j) { return std::conj(r(j, i)); };
    return a;
}

OperatorModel operator+(const OperatorModel& a, const OperatorModel& b) {
    if (a.kind_ != b.kind_ || a.origin_ != b.origin_)
        throw std::invalid_argument("operator+: incompatible models '" + a.label_ + "' and '" + b.label_ + "'");
    OperatorModel s = a;
    s.label_ = a.label_ + "+" + b.label_;
    s.rule_ = [ra = a.rule_, rb = b.rule_, ba = a.bandwidth_, bb = b.bandwidth_](index_t i, index_t j) {
        const auto d = static_cast<std::size_t>(i > j ? i - j : j - i);
        cplx v{};
        if (d <= ba) v += ra(i, j);
        if (d <= bb) v += rb(i, j);
        return v;
    };
    s.bandwidth_ = std::max(a.bandwidth_, b.bandwidth_);
    s.adjoint_available_ = a.adjoint_available_ && b.adjoint_available_;
    return s;
}

OperatorModel OperatorModel::with_rule(std::string label, EntryRule rule, std::size_t bandwidth) const {
    OperatorModel m = *this;
    m.label_ = std::move(label);
    m.rule_ = std::move(rule);
    m.bandwidth_ = bandwidth;
    return m;
}

OperatorModel diag_alternating() {
    return OperatorModel::diagonal(
        "diag_alternating",
        [](index_t n) {
            const double x = static_cast<double>(n);
            return cplx(x, (n % 2 == 0 ? 1.0 : -1.0) * x * x);
        },
        0);
}

std::pair<OperatorModel, OperatorModel> ex1_models() {
    auto t = OperatorModel::block2x2("T", [](index_t n) {
        const double x = static_cast<double>(n);
        return std::array<cplx, 4>{x * x, 0.0, 0.0, 1.0};
    });
    auto s = OperatorModel::block2x2("S", [](index_t) { return std::array<cplx, 4>{0.0, 1.0, 1.0, 0.0}; });
    return {std::move(t), std::move(s)};
}

OperatorModel delay_operator() {
    return OperatorModel::block2x2("delay", [](index_t n) {
        const double x = static_cast<double>(n);
        return std::array<cplx, 4>{x * x, 0.0, x, 1.0};
    });
}

OperatorModel free_jacobi() {
    return OperatorModel::banded(
        "free_jacobi", [](index_t i, index_t j) { return i == j ? cplx{} : cplx{1.0}; }, 1);
}

OperatorModel identity_ramp() {
    return OperatorModel::diagonal("ramp", [](index_t n) { return cplx(static_cast<double>(n)); });
}

DiffOp1D advection_diffusion(CoefFn q1, CoefFn q0, cplx c1, cplx c0, std::string label, double check_at,
                             double tol) {
    for (double x : {-check_at, check_at}) {
        if (std::abs(q1(x) - c1) > tol)
            throw LimitMismatch("q1(" + std::to_string(x) + ") differs from the declared limit");
        if (std::abs(q0(x) - c0) > tol)
            throw LimitMismatch("q0(" + std::to_string(x) + ") differs from the declared limit");
    }
    return DiffOp1D{std::move(label), std::move(q1), std::move(q0), {}, c1, c0};
}

DiffOp1D advdiff_constant() {
    auto op = advection_diffusion([](double) { return cplx(-2.0); }, [](double) { return cplx(0.0); }, -2.0, 0.0,
                                  "advdiff-const");
    op.q1_prime = [](double) { return cplx(0.0); };
    return op;
}

DiffOp1D advdiff_gaussian() {
    auto op = advection_diffusion(
        [](double) { return cplx(-2.0); },
        [](double x) { return cplx(20.0 * std::sin(x) * std::exp(-x * x)); }, -2.0, 0.0, "advdiff-gauss");
    op.q1_prime = [](double) { return cplx(0.0); };
    return op;
}

SymbolSpec SymbolSpec::from_coefficients(std::vector<cplx> coeffs) {
    if (coeffs.size() < 3 || (coeffs.size() - 1) % 2 != 0)
        throw std::invalid_argument("symbol: need an even order >= 2");
    SymbolSpec s;
    s.coeffs = std::move(coeffs);
    const auto order = static_cast<int>(s.order());
    for (double xi : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0})
        if ((s.principal() * std::pow(xi, order)).real() <= 0.0)
            throw std::invalid_argument("symbol: principal part is not strongly elliptic");
    return s;
}

SymbolSpec SymbolSpec::advection_diffusion(cplx c1, cplx c0) {
    return from_coefficients({c0, cplx(0, 1) * c1, 1.0});
}

SymbolSpec limiting_symbol(const DiffOp1D& op) { return SymbolSpec::advection_diffusion(op.c1, op.c0); }

cplx symbol_eval(const SymbolSpec& sym, double xi) {
    cplx acc{};
    for (auto it = sym.coeffs.rbegin(); it != sym.coeffs.rend(); ++it) acc = acc * xi + *it;
    return acc;
}

Grid::Grid(double a_, double b_, std::size_t n_) : a(a_), b(b_), n(n_) {
    if (!(b > a)) throw std::invalid_argument("grid: empty interval");
    if (n < 16) throw std::invalid_argument("grid: need at least 16 interior nodes");
}

Grid Grid::with_step(double a, double b, double h) {
    const auto cells = static_cast<std::size_t>(std::llround((b - a) / h));
    return Grid(a, b, cells > 1 ? cells - 1 : 0);
}

namespace {

double bump(double y) { return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0; }

double bump_prime(double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    const double d = 1.0 - y * y;
    return bump(y) * (-2.0 * y / (d * d));
}

/// (int psi^2, int psi'^2) over (-1, 1); trapezoid is spectrally accurate
/// for this flat-ended integrand.
std::pair<double, double> bump_integrals() {
    static const auto vals = [] {
        const int n = 20000;
        const double h = 2.0 / n;
        double i0 = 0.0, i1 = 0.0;
        for (int j = 1; j < n; ++j) {
            const double y = -1.0 + j * h;
            i0 += bump(y) * bump(y);
            i1 += bump_prime(y) * bump_prime(y);
        }
        return std::pair{i0 * h, i1 * h};
    }();
    return vals;
}

struct BumpLayout {
    double amplitude;
    double radius;
    std::array<double, 2> centers;
};

BumpLayout airy_layout(cplx lambda, double n) {
    const double u = lambda.real(), v = lambda.imag();
    if (!(u > 0.0)) throw std::invalid_argument("airy_witness: need Re lambda > 0");
    const auto [i0, i1] = bump_integrals();
    const double r = std::sqrt(i1 / (u * i0));
    const double amp = std::sqrt(1.0 / (2.0 * r * i0));
    // Centers v -+ D keep the mean position at v; widen D if bumps overlap.
    const double d = std::max(n + std::abs(v), r);
    return {amp, r, {v - d, v + d}};
}

}  // namespace

Grid airy_grid(cplx lambda, double n, double h) {
    const auto lay = airy_layout(lambda, n);
    return Grid::with_step(lay.centers[0] - lay.radius - 1.0, lay.centers[1] + lay.radius + 1.0, h);
}

AiryWitness airy_witness(cplx lambda, double n, const Grid& grid) {
    const auto lay = airy_layout(lambda, n);
    if (lay.centers[0] - lay.radius < grid.a || lay.centers[1] + lay.radius > grid.b)
        throw GridTooCoarse("airy_witness: grid does not cover both bumps");
    AiryWitness w;
    w.centers = lay.centers;
    w.radius = lay.radius;
    w.x.resize(grid.n);
    w.f.resize(grid.n);
    const double h = grid.step();
    double nf = 0.0, nd = 0.0, mx = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.node(j + 1);
        double f = 0.0, df = 0.0;
        for (double c : lay.centers) {
            const double y = (x - c) / lay.radius;
            f += lay.amplitude * bump(y);
            df += lay.amplitude * bump_prime(y) / lay.radius;
        }
        w.x[j] = x;
        w.f[j] = f;
        nf += f * f;
        nd += df * df;
        mx += x * f * f;
    }
    w.norm_sq = nf * h;
    if (std::abs(w.norm_sq - 1.0) > 0.01)
        throw GridTooCoarse("airy_witness: ||f||^2 = " + std::to_string(w.norm_sq) + " on step " + std::to_string(h));
    w.rayleigh_value = cplx(nd * h, mx * h);
    return w;
}

}  // namespace specpol
