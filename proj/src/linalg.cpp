#include "specpol/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace specpol {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& m, const char* who) {
    if (!m.square() || m.rows() == 0)
        throw DimensionMismatch(std::string(who) + ": matrix must be square and non-empty");
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix / UnitVector
// ---------------------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{}) {}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    std::vector<std::vector<cplx>> tmp;
    for (const auto& r : rows) tmp.emplace_back(r);
    return from_rows(tmp);
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("ComplexMatrix: empty input");
    ComplexMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw std::invalid_argument("ComplexMatrix: ragged rows");
        for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    if (!m.all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
    return m;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double ComplexMatrix::max_abs() const {
    double r = 0.0;
    for (auto z : data_) r = std::max(r, std::abs(z));
    return r;
}

double ComplexMatrix::frobenius() const {
    double s = 0.0;
    for (auto z : data_) s += std::norm(z);
    return std::sqrt(s);
}

cplx ComplexMatrix::trace() const {
    cplx t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                                   std::size_t ncols) const {
    if (row0 + nrows > rows_ || col0 + ncols > cols_) throw DimensionMismatch("block out of range");
    ComplexMatrix b(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> x) const {
    if (x.size() != cols_) throw DimensionMismatch("apply: vector length " + std::to_string(x.size()) +
                                                   " vs " + std::to_string(cols_) + " columns");
    std::vector<cplx> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx s{};
        const cplx* row = &data_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("operator+");
    ComplexMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("operator-");
    ComplexMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("operator*");
    ComplexMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix c = a;
    for (auto& z : c.data_) z *= s;
    return c;
}

UnitVector UnitVector::normalize(std::vector<cplx> v) {
    const double n = specpol::norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("UnitVector: cannot normalize zero vector");
    for (auto& z : v) z /= n;
    return UnitVector(std::move(v));
}

UnitVector UnitVector::checked(std::vector<cplx> v) {
    if (std::abs(specpol::norm(v) - 1.0) > 1e-12) throw std::invalid_argument("UnitVector: norm differs from 1");
    return UnitVector(std::move(v));
}

UnitVector UnitVector::basis(std::size_t dim, std::size_t k) {
    std::vector<cplx> v(dim);
    v.at(k) = 1.0;
    return UnitVector(std::move(v));
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw DimensionMismatch("inner: length mismatch");
    cplx s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

double norm(std::span<const cplx> x) {
    // Scaled accumulation keeps large-entry windows (n^2 ~ 1e8) from overflowing.
    double scale = 0.0;
    for (auto z : x) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (auto z : x) s += std::norm(z / scale);
    return scale * std::sqrt(s);
}

void sort_lexicographic(std::vector<cplx>& values) {
    std::stable_sort(values.begin(), values.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

cplx rayleigh(const ComplexMatrix& m, std::span<const cplx> x) {
    if (!m.square() || m.cols() != x.size()) throw DimensionMismatch("rayleigh: dimension mismatch");
    return inner(m.apply(x), x);
}

cplx rayleigh(const ComplexMatrix& m, const UnitVector& x) { return rayleigh(m, x.components()); }

// ---------------------------------------------------------------------------
// Hermitian eigensolver
// ---------------------------------------------------------------------------

namespace {

/// Unitary reduction Q* A Q = D T D* with T real symmetric tridiagonal and D a
/// diagonal phase matrix. Q is kept as a product of Householder reflectors.
struct HermitianTridiagonal {
    std::size_t n = 0;
    std::vector<double> diag;
    std::vector<double> off;         // off[i] couples i and i+1
    std::vector<cplx> phase;         // D
    std::vector<std::vector<cplx>> reflectors;  // reflector k acts on [k+1, n)

    /// x <- Q D x
    void back_transform(std::vector<cplx>& x) const {
        for (std::size_t i = 0; i < n; ++i) x[i] *= phase[i];
        for (std::size_t k = reflectors.size(); k-- > 0;) {
            const auto& u = reflectors[k];
            if (u.empty()) continue;
            cplx s{};
            for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * x[k + 1 + i];
            s *= 2.0;
            for (std::size_t i = 0; i < u.size(); ++i) x[k + 1 + i] -= s * u[i];
        }
    }
};

HermitianTridiagonal tridiagonalize(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    HermitianTridiagonal t;
    t.n = n;
    t.reflectors.resize(n > 2 ? n - 2 : 0);
    std::vector<cplx> p(n), q(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        std::vector<cplx> u(len);
        bool tail_zero = true;
        for (std::size_t i = 0; i < len; ++i) {
            u[i] = a(k + 1 + i, k);
            if (i > 0 && u[i] != cplx{}) tail_zero = false;
        }
        if (tail_zero) continue;
        const double xnorm = norm(u);
        const cplx x0 = u[0];
        const cplx ph = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
        const cplx alpha = -ph * xnorm;
        u[0] -= alpha;
        const double un = norm(u);
        for (auto& z : u) z /= un;

        // A22 <- H A22 H with H = I - 2uu*: p = 2 A22 u, K = u*p, q = p - K u.
        for (std::size_t i = 0; i < len; ++i) {
            cplx s{};
            for (std::size_t j = 0; j < len; ++j) s += a(k + 1 + i, k + 1 + j) * u[j];
            p[i] = 2.0 * s;
        }
        cplx kk{};
        for (std::size_t i = 0; i < len; ++i) kk += std::conj(u[i]) * p[i];
        const double kr = kk.real();
        for (std::size_t i = 0; i < len; ++i) q[i] = p[i] - kr * u[i];
        for (std::size_t i = 0; i < len; ++i)
            for (std::size_t j = 0; j < len; ++j)
                a(k + 1 + i, k + 1 + j) -= u[i] * std::conj(q[j]) + q[i] * std::conj(u[j]);

        a(k + 1, k) = alpha;
        a(k, k + 1) = std::conj(alpha);
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = 0.0;
            a(k, i) = 0.0;
        }
        t.reflectors[k] = std::move(u);
    }
    t.diag.resize(n);
    t.off.assign(n, 0.0);
    t.phase.assign(n, cplx{1.0});
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx e = a(i + 1, i);
        const double ae = std::abs(e);
        t.off[i] = ae;
        t.phase[i + 1] = ae > 0.0 ? t.phase[i] * (e / ae) : t.phase[i];
    }
    return t;
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
/// matrix; rotations are accumulated into `z` (column-major n x n) if given.
void tql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n);
    e[n - 1] = 0.0;
    const std::size_t max_sweeps = 100 * std::max<std::size_t>(n, 1);
    std::size_t sweeps = 0;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m != l) {
                if (++sweeps > max_sweeps) throw NoConvergence("tridiagonal QL exceeded sweep budget");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                std::size_t i = m;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        double* zi = z->data() + i * n;
                        double* zi1 = z->data() + (i + 1) * n;
                        for (std::size_t k = 0; k < n; ++k) {
                            f = zi1[k];
                            zi1[k] = s * zi[k] + c * f;
                            zi[k] = c * zi[k] - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

/// Solves (T - shift I) x = b for symmetric tridiagonal T by LU with partial
/// pivoting; zero pivots are replaced by `tiny`.
std::vector<double> solve_shifted_tridiagonal(const std::vector<double>& d, const std::vector<double>& e,
                                              double shift, std::vector<double> b, double tiny) {
    const std::size_t n = d.size();
    if (n == 1) {
        double piv = d[0] - shift;
        if (std::abs(piv) < tiny) piv = tiny;
        return {b[0] / piv};
    }
    std::vector<double> dl(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n - 1));
    std::vector<double> du = dl;
    std::vector<double> dd(n), du2(n, 0.0);
    std::vector<bool> swapped(n, false);
    for (std::size_t i = 0; i < n; ++i) dd[i] = d[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(dd[i]) >= std::abs(dl[i])) {
            if (std::abs(dd[i]) < tiny) dd[i] = tiny;
            const double fact = dl[i] / dd[i];
            dl[i] = fact;
            dd[i + 1] -= fact * du[i];
        } else {
            const double fact = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = temp - fact * dd[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if (std::abs(dd[n - 1]) < tiny) dd[n - 1] = tiny;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (swapped[i]) std::swap(b[i], b[i + 1]);
        b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= dd[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    return b;
}

/// Number of eigenvalues of the symmetric tridiagonal (d, e) below x.
std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x, double tiny) {
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = d[i] - x - (i > 0 ? e[i - 1] * e[i - 1] / q : 0.0);
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

/// Top eigenvalue by bisection on the Sturm sequence.
double largest_tridiagonal_eigenvalue(const std::vector<double>& d, const std::vector<double>& e) {
    const std::size_t n = d.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    const double tiny = kEps * std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
    for (int it = 0; it < 200 && hi - lo > 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + tiny; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(d, e, mid, tiny) < n) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

void require_hermitian(const ComplexMatrix& m) {
    require_square(m, "hermitian_eig");
    if (!m.all_finite()) throw std::invalid_argument("hermitian_eig: non-finite entry");
    double asym = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
    if (asym > 1e-12) throw NotHermitian("max |M - M*| = " + std::to_string(asym));
}

double eigen_residual(const ComplexMatrix& m, cplx lambda, std::span<const cplx> v) {
    auto mv = m.apply(v);
    for (std::size_t i = 0; i < mv.size(); ++i) mv[i] -= lambda * v[i];
    return norm(mv);
}

}  // namespace

std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off) {
    if (off.size() + 1 < diag.size()) throw DimensionMismatch("tridiagonal: off-diagonal too short");
    tql(diag, off, nullptr);
    std::sort(diag.begin(), diag.end());
    return diag;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m, double /*tol*/) {
    require_hermitian(m);
    const std::size_t n = m.rows();
    HermitianTridiagonal t = tridiagonalize(m);
    std::vector<double> z(n * n, 0.0);  // column k of Z stored at z[k*n ...]
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    std::vector<double> d = t.diag, e = t.off;
    tql(d, e, &z);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    EigenDecomposition out;
    std::vector<UnitVector> vecs;
    for (std::size_t k : order) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = z[k * n + i];
        t.back_transform(v);
        auto uv = UnitVector::normalize(std::move(v));
        out.values.emplace_back(d[k], 0.0);
        out.residuals.push_back(eigen_residual(m, d[k], uv.components()));
        vecs.push_back(std::move(uv));
    }
    out.vectors = std::move(vecs);
    return out;
}

TopEigenpair hermitian_top_eigenpair(const ComplexMatrix& m) {
    require_hermitian(m);
    const std::size_t n = m.rows();
    if (n == 2) {
        const double a = m(0, 0).real(), d = m(1, 1).real();
        const cplx b = m(0, 1);
        const double delta = 0.5 * (a - d);
        const double r = std::hypot(delta, std::abs(b));
        std::vector<cplx> v = delta >= 0.0 ? std::vector<cplx>{r + delta, std::conj(b)}
                                           : std::vector<cplx>{b, r - delta};
        if (r == 0.0) v = {1.0, 0.0};
        return {0.5 * (a + d) + r, UnitVector::normalize(std::move(v))};
    }
    if (n == 2) {
        const double a = m(0, 0).real(), d = m(1, 1).real();
        const cplx b = m(0, 1);
        const double delta = 0.5 * (a - d);
        const double r = std::hypot(delta, std::abs(b));
        std::vector<cplx> v = delta >= 0.0 ? std::vector<cplx>{r + delta, std::conj(b)}
                                           : std::vector<cplx>{b, r - delta};
        if (r == 0.0) v = {1.0, 0.0};
        return {0.5 * (a + d) + r, UnitVector::normalize(std::move(v))};
    }
    HermitianTridiagonal t = tridiagonalize(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(t.diag[i]) + 2.0 * std::abs(t.off[i]));
    scale = std::max(scale, std::numeric_limits<double>::min());
    const double tiny = kEps * scale;
    const double top = largest_tridiagonal_eigenvalue(t.diag, t.off);

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
    for (int it = 0; it < 3; ++it) {
        x = solve_shifted_tridiagonal(t.diag, t.off, top, std::move(x), tiny);
        double s = 0.0;
        for (double v : x) s = std::max(s, std::abs(v));
        for (double& v : x) v /= s;
    }
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i];
    t.back_transform(v);
    return {top, UnitVector::normalize(std::move(v))};
}

// ---------------------------------------------------------------------------
// General eigensolver
// ---------------------------------------------------------------------------

namespace {

/// Eigenvalues of a tridiagonal matrix that is diagonally similar to a real
/// symmetric one (real diagonal, sub*super real and >= 0). Returns nullopt
/// when the structure is absent.
std::optional<std::vector<cplx>> symmetrizable_tridiagonal_eigenvalues(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) {
        if (a(i, i).imag() != 0.0) return std::nullopt;
        for (std::size_t j = 0; j < n; ++j)
            if ((j + 1 < i || j > i + 1) && a(i, j) != cplx{}) return std::nullopt;
    }
    std::vector<double> d(n), e(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx sup = a(i, i + 1), sub = a(i + 1, i);
        if (sup.imag() != 0.0 || sub.imag() != 0.0) return std::nullopt;
        const double prod = sup.real() * sub.real();
        if (prod < 0.0) return std::nullopt;
        e[i] = std::sqrt(prod);
    }
    auto vals = symmetric_tridiagonal_eigenvalues(std::move(d), std::move(e));
    return std::vector<cplx>(vals.begin(), vals.end());
}

void swap_index(ComplexMatrix& a, std::size_t i, std::size_t j) {
    if (i == j) return;
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
}

/// Permutes to isolate eigenvalues (rows/columns with zero off-diagonal part
/// inside the active range), then scales the remaining block by powers of two.
/// Returns the active range [lo, hi].
std::pair<std::size_t, std::size_t> balance(ComplexMatrix& a) {
    const std::size_t n = a.rows();
    std::size_t lo = 0, hi = n - 1;
    bool found = true;
    while (found && hi > lo) {
        found = false;
        for (std::size_t jj = hi + 1; jj-- > lo;) {
            bool zero = true;
            for (std::size_t c = lo; c <= hi && zero; ++c)
                if (c != jj && a(jj, c) != cplx{}) zero = false;
            if (zero) {
                swap_index(a, jj, hi);
                if (hi == lo) return {lo, hi};
                --hi;
                found = true;
                break;
            }
        }
    }
    found = true;
    while (found && hi > lo) {
        found = false;
        for (std::size_t jj = lo; jj <= hi; ++jj) {
            bool zero = true;
            for (std::size_t r = lo; r <= hi && zero; ++r)
                if (r != jj && a(r, jj) != cplx{}) zero = false;
            if (zero) {
                swap_index(a, jj, lo);
                ++lo;
                found = true;
                break;
            }
        }
    }
    if (hi <= lo) return {lo, hi};

    constexpr double radix = 2.0, sqrdx = 4.0;
    bool done = false;
    for (int pass = 0; !done && pass < 100; ++pass) {
        done = true;
        for (std::size_t i = lo; i <= hi; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
    return {lo, hi};
}

void hessenberg_reduce(ComplexMatrix& b) {
    const std::size_t m = b.rows();
    for (std::size_t k = 0; k + 2 < m; ++k) {
        const std::size_t len = m - k - 1;
        std::vector<cplx> u(len);
        for (std::size_t i = 0; i < len; ++i) u[i] = b(k + 1 + i, k);
        double tail = 0.0;
        for (std::size_t i = 1; i < len; ++i) tail = std::max(tail, std::abs(u[i]));
        if (tail == 0.0) continue;
        const double xnorm = norm(u);
        const cplx x0 = u[0];
        const cplx ph = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
        const cplx alpha = -ph * xnorm;
        u[0] -= alpha;
        const double un = norm(u);
        for (auto& z : u) z /= un;
        // Left: rows k+1.., columns k..
        for (std::size_t j = k; j < m; ++j) {
            cplx s{};
            for (std::size_t i = 0; i < len; ++i) s += std::conj(u[i]) * b(k + 1 + i, j);
            s *= 2.0;
            for (std::size_t i = 0; i < len; ++i) b(k + 1 + i, j) -= s * u[i];
        }
        // Right: all rows, columns k+1..
        for (std::size_t i = 0; i < m; ++i) {
            cplx s{};
            for (std::size_t j = 0; j < len; ++j) s += b(i, k + 1 + j) * u[j];
            s *= 2.0;
            for (std::size_t j = 0; j < len; ++j) b(i, k + 1 + j) -= s * std::conj(u[j]);
        }
        b(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < m; ++i) b(i, k) = 0.0;
    }
}

/// Shifted complex QR on an upper Hessenberg matrix; eigenvalues only.
std::vector<cplx> hessenberg_qr(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    std::vector<cplx> eig(n);
    if (n == 0) return eig;
    const std::size_t max_iter = 40 * std::max<std::size_t>(n, 10);
    auto abs1 = [](cplx z) { return std::abs(z.real()) + std::abs(z.imag()); };
    double hnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) hnorm = std::max(hnorm, abs1(h(i, j)));
    const double small = std::numeric_limits<double>::min() * static_cast<double>(n);

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    std::size_t iter = 0;
    while (hi >= 0) {
        std::ptrdiff_t l = hi;
        for (; l > 0; --l) {
            double tst = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
            if (tst == 0.0) tst = hnorm;
            if (abs1(h(l, l - 1)) <= kEps * tst || abs1(h(l, l - 1)) <= small) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            eig[hi] = h(hi, hi);
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > max_iter) throw NoConvergence("Hessenberg QR exceeded iteration budget");

        cplx shift;
        if (iter % 10 == 0) {
            shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real()) + cplx(0.0, 0.75 * std::abs(h(hi, hi - 1).imag()));
        } else {
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
            const cplx half_tr = 0.5 * (a + d);
            const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
            const cplx r1 = half_tr + disc, r2 = half_tr - disc;
            shift = std::abs(r1 - d) <= std::abs(r2 - d) ? r1 : r2;
        }

        const std::size_t lo = static_cast<std::size_t>(l), top = static_cast<std::size_t>(hi);
        for (std::size_t k = lo; k < top; ++k) {
            cplx x, y;
            if (k == lo) {
                x = h(k, k) - shift;
                y = h(k + 1, k);
            } else {
                x = h(k, k - 1);
                y = h(k + 1, k - 1);
            }
            const double ax = std::abs(x), ay = std::abs(y);
            const double nrm = std::hypot(ax, ay);
            if (nrm == 0.0) continue;
            double c;
            cplx s;
            if (ax == 0.0) {
                c = 0.0;
                s = std::conj(y) / ay;
            } else {
                c = ax / nrm;
                s = (x / ax) * std::conj(y) / nrm;
            }
            const std::size_t jstart = k == lo ? k : k - 1;
            for (std::size_t j = jstart; j <= top; ++j) {
                const cplx p = h(k, j), q = h(k + 1, j);
                h(k, j) = c * p + s * q;
                h(k + 1, j) = -std::conj(s) * p + c * q;
            }
            const std::size_t iend = std::min(k + 2, top);
            for (std::size_t i = lo; i <= iend; ++i) {
                const cplx p = h(i, k), q = h(i, k + 1);
                h(i, k) = c * p + std::conj(s) * q;
                h(i, k + 1) = -s * p + c * q;
            }
            if (k > lo) h(k + 1, k - 1) = 0.0;
        }
    }
    return eig;
}

/// Unit eigenvector for `lambda` by inverse iteration with dense LU.
std::vector<cplx> inverse_iteration(const ComplexMatrix& m, cplx lambda) {
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= lambda;
    const double scale = std::max(m.max_abs(), 1.0);
    const double tiny = kEps * scale;
    std::vector<std::size_t> piv(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        piv[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        if (std::abs(a(k, k)) < tiny) a(k, k) = tiny;
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            a(i, k) = f;
            if (f == cplx{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = cplx(1.0 + 0.013 * static_cast<double>(i % 11), 0.007 * static_cast<double>(i % 5));
    for (int it = 0; it < 3; ++it) {
        for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[piv[k]]);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) x[i] -= a(i, k) * x[k];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k) x[i] -= a(i, k) * x[k];
            x[i] /= a(i, i);
        }
        const double nx = norm(x);
        for (auto& z : x) z /= nx;
    }
    return x;
}

}  // namespace

std::vector<cplx> tridiagonal_eigenvalues(std::span<const cplx> sub, std::span<const cplx> diag,
                                          std::span<const cplx> super) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    if (sub.size() + 1 != n || super.size() + 1 != n)
        throw DimensionMismatch("tridiagonal_eigenvalues: band lengths do not match");
    bool symmetric = true;
    std::vector<double> d(n), e(n, 0.0);
    for (std::size_t i = 0; i < n && symmetric; ++i) {
        symmetric = diag[i].imag() == 0.0;
        d[i] = diag[i].real();
    }
    for (std::size_t i = 0; i + 1 < n && symmetric; ++i) {
        const double prod = sub[i].real() * super[i].real();
        symmetric = sub[i].imag() == 0.0 && super[i].imag() == 0.0 && prod >= 0.0;
        e[i] = symmetric ? std::sqrt(prod) : 0.0;
    }
    std::vector<cplx> values;
    if (symmetric) {
        auto vals = symmetric_tridiagonal_eigenvalues(std::move(d), std::move(e));
        values.assign(vals.begin(), vals.end());
    } else {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = diag[i];
            if (i + 1 < n) {
                m(i + 1, i) = sub[i];
                m(i, i + 1) = super[i];
            }
        }
        return general_eig(m).values;
    }
    sort_lexicographic(values);
    return values;
}

EigenDecomposition general_eig(const ComplexMatrix& m, double /*tol*/, bool want_vectors) {
    require_square(m, "general_eig");
    if (!m.all_finite()) throw std::invalid_argument("general_eig: non-finite entry");
    const std::size_t n = m.rows();

    std::vector<cplx> values;
    if (auto fast = symmetrizable_tridiagonal_eigenvalues(m)) {
        values = std::move(*fast);
    } else {
        ComplexMatrix a = m;
        const auto [lo, hi] = balance(a);
        values.reserve(n);
        for (std::size_t i = 0; i < lo; ++i) values.push_back(a(i, i));
        for (std::size_t i = hi + 1; i < n; ++i) values.push_back(a(i, i));
        if (hi >= lo) {
            ComplexMatrix b = a.block(lo, lo, hi - lo + 1, hi - lo + 1);
            hessenberg_reduce(b);
            auto inner_vals = hessenberg_qr(b);
            values.insert(values.end(), inner_vals.begin(), inner_vals.end());
        }
    }
    sort_lexicographic(values);

    EigenDecomposition out;
    out.values = std::move(values);
    if (want_vectors) {
        std::vector<UnitVector> vecs;
        for (cplx lambda : out.values) {
            auto v = UnitVector::normalize(inverse_iteration(m, lambda));
            out.residuals.push_back(eigen_residual(m, lambda, v.components()));
            vecs.push_back(std::move(v));
        }
        out.vectors = std::move(vecs);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orthonormalization and compression
// ---------------------------------------------------------------------------

namespace {

/// Removes the components of w along every q (two passes); returns the
/// remaining norm.
double project_out(std::vector<cplx>& w, std::span<const UnitVector> qs) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : qs) {
            const cplx c = inner(w, q.components());
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
        }
    return norm(w);
}

}  // namespace

std::vector<UnitVector> orthonormalize(std::span<const std::vector<cplx>> vectors, double drop_tol) {
    std::vector<UnitVector> q;
    for (const auto& v : vectors) {
        const double n0 = norm(v);
        if (n0 == 0.0) continue;
        std::vector<cplx> w = v;
        const double r = project_out(w, q);
        if (r < drop_tol * n0) continue;
        q.push_back(UnitVector::normalize(std::move(w)));
    }
    return q;
}

std::vector<UnitVector> orthonormal_complement_basis(std::span<const std::vector<cplx>> vectors,
                                                     std::size_t ambient_dim, double tol) {
    for (const auto& v : vectors)
        if (v.size() != ambient_dim) throw DimensionMismatch("orthonormal_complement_basis: vector length");
    std::vector<UnitVector> q = orthonormalize(vectors, tol);
    const std::size_t span_dim = q.size();
    if (span_dim >= ambient_dim) return {};

    // Greedy pivoting: always extend with the coordinate vector that has the
    // largest component outside the current span.
    std::vector<double> outside(ambient_dim, 1.0);
    for (const auto& v : q)
        for (std::size_t k = 0; k < ambient_dim; ++k) outside[k] -= std::norm(v[k]);
    std::vector<bool> used(ambient_dim, false);
    std::vector<UnitVector> complement;
    while (q.size() < ambient_dim) {
        std::size_t best = ambient_dim;
        for (std::size_t k = 0; k < ambient_dim; ++k)
            if (!used[k] && (best == ambient_dim || outside[k] > outside[best])) best = k;
        if (best == ambient_dim || outside[best] < 1e-3 / static_cast<double>(ambient_dim)) break;
        used[best] = true;
        std::vector<cplx> w(ambient_dim);
        w[best] = 1.0;
        const double r = project_out(w, q);
        if (r < 1e-6) continue;
        auto u = UnitVector::normalize(std::move(w));
        for (std::size_t k = 0; k < ambient_dim; ++k) outside[k] -= std::norm(u[k]);
        q.push_back(u);
        complement.push_back(std::move(u));
    }
    return complement;
}

std::vector<UnitVector> orthonormal_complement_basis(std::span<const UnitVector> vectors,
                                                     std::size_t ambient_dim, double tol) {
    std::vector<std::vector<cplx>> raw;
    raw.reserve(vectors.size());
    for (const auto& v : vectors) raw.emplace_back(v.components().begin(), v.components().end());
    return orthonormal_complement_basis(std::span<const std::vector<cplx>>(raw), ambient_dim, tol);
}

ComplexMatrix compress(const ComplexMatrix& m, std::span<const UnitVector> basis, double ortho_tol) {
    require_square(m, "compress");
    const std::size_t k = basis.size();
    for (const auto& b : basis)
        if (b.dim() != m.cols()) throw DimensionMismatch("compress: basis vector length");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            const cplx g = inner(basis[j].components(), basis[i].components());
            const double target = i == j ? 1.0 : 0.0;
            if (std::abs(g - target) > ortho_tol)
                throw BasisNotOrthonormal("Gram entry (" + std::to_string(i) + "," + std::to_string(j) +
                                          ") deviates by " + std::to_string(std::abs(g - target)));
        }
    std::vector<std::vector<cplx>> mb;
    mb.reserve(k);
    for (const auto& b : basis) mb.push_back(m.apply(b.components()));
    ComplexMatrix c(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) c(i, j) = inner(mb[j], basis[i].components());
    return c;
}

}  // namespace specpol
