#include "airykit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airykit {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch");
}

double hypot2(double a, double b) { return std::hypot(a, b); }

} // namespace

Matrix& Matrix::operator+=(const Matrix& other)
{
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other)
{
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s)
{
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul shape mismatch");
    Matrix c(a.rows(), b.cols(), 0.0);
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double* ci = c.data() + i * m;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a(i, p);
            if (aip == 0.0) continue;
            const double* bp = b.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
        }
    }
    return c;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

LuFactorization lu_factor(Matrix a)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("lu_factor: matrix not square");
    const std::size_t n = a.rows();
    LuFactorization f;
    f.pivots.resize(n);
    f.min_abs_pivot = std::numeric_limits<double>::infinity();
    f.max_abs_pivot = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        f.pivots[k] = static_cast<int>(piv);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            f.sign = -f.sign;
        }
        const double pivot = a(k, k);
        f.min_abs_pivot = std::min(f.min_abs_pivot, std::abs(pivot));
        f.max_abs_pivot = std::max(f.max_abs_pivot, std::abs(pivot));
        if (pivot == 0.0) {
            f.singular = true;
            continue;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a(i, k) / pivot;
            a(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    if (n == 0) f.min_abs_pivot = 0.0;
    f.lu = std::move(a);
    return f;
}

double LuFactorization::determinant() const
{
    if (singular) return 0.0;
    double d = sign;
    for (std::size_t i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
}

double LuFactorization::log_abs_determinant() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < lu.rows(); ++i) s += std::log(std::abs(lu(i, i)));
    return s;
}

int LuFactorization::determinant_sign() const
{
    int s = sign;
    for (std::size_t i = 0; i < lu.rows(); ++i)
        if (lu(i, i) < 0.0) s = -s;
    return singular ? 0 : s;
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const
{
    const std::size_t n = lu.rows();
    if (b.size() != n) throw std::invalid_argument("LuFactorization::solve: size mismatch");
    if (singular) throw std::runtime_error("LuFactorization::solve: singular matrix");
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        std::swap(x[k], x[static_cast<std::size_t>(pivots[k])]);
        // nothing else; forward substitution below uses strictly lower L
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
        x[i] = s / lu(i, i);
    }
    return x;
}

double determinant(const Matrix& a) { return lu_factor(a).determinant(); }

std::vector<double> singular_values(Matrix a)
{
    // One-sided Jacobi on columns of A: rotations orthogonalize column pairs.
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) {
        Matrix t(n, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) t(j, i) = a(i, j);
        return singular_values(std::move(t));
    }
    const int max_sweeps = 60;
    const double tol = 1e-14;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= tol * std::sqrt(app * aqq) + 1e-300) continue;
                off = std::max(off, std::abs(apq));
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double vp = a(i, p), vq = a(i, q);
                    a(i, p) = c * vp - s * vq;
                    a(i, q) = s * vp + c * vq;
                }
            }
        }
        if (off == 0.0) break;
    }
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e)
{
    // Implicit-shift QL (EISPACK tql1 lineage), eigenvalues only.
    const std::size_t n = d.size();
    if (n == 0) return {};
    if (e.size() + 1 != n) throw std::invalid_argument("tridiagonal_eigenvalues: size mismatch");
    e.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 80)
                    throw std::runtime_error("tridiagonal_eigenvalues: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i], b = c * e[i];
                    r = hypot2(f, g);
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
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> symmetric_eigenvalues(Matrix a)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("symmetric_eigenvalues: not square");
    const std::size_t n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};
    // Householder reduction to tridiagonal form (values only).
    std::vector<double> d(n), e(n, 0.0);
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i;
        double scale = 0.0;
        for (std::size_t k = 0; k < l; ++k) scale += std::abs(a(i, k));
        if (scale == 0.0 || l == 1) {
            e[i] = a(i, l - 1);
            continue;
        }
        double h = 0.0;
        for (std::size_t k = 0; k < l; ++k) {
            a(i, k) /= scale;
            h += a(i, k) * a(i, k);
        }
        double f = a(i, l - 1);
        double g = f >= 0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l - 1) = f - g;
        double tau = 0.0;
        std::vector<double> p(l, 0.0);
        for (std::size_t j = 0; j < l; ++j) {
            g = 0.0;
            for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
            for (std::size_t k = j + 1; k < l; ++k) g += a(k, j) * a(i, k);
            p[j] = g / h;
            tau += p[j] * a(i, j);
        }
        const double hh = tau / (2.0 * h);
        for (std::size_t j = 0; j < l; ++j) p[j] -= hh * a(i, j);
        for (std::size_t j = 0; j < l; ++j) {
            const double fi = a(i, j), pj = p[j];
            for (std::size_t k = 0; k <= j; ++k) a(j, k) -= fi * p[k] + pj * a(i, k);
        }
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
    std::vector<double> sub(e.begin() + 1, e.end());
    return tridiagonal_eigenvalues(std::move(d), std::move(sub));
}

std::vector<double> hermitian_eigenvalues(std::vector<std::complex<double>> a, std::size_t n)
{
    using C = std::complex<double>;
    if (a.size() != n * n) throw std::invalid_argument("hermitian_eigenvalues: size mismatch");
    auto at = [&](std::size_t i, std::size_t j) -> C& { return a[i * n + j]; };
    if (n == 0) return {};
    std::vector<double> d(n, 0.0), e(n > 1 ? n - 1 : 0, 0.0);
    // Householder reduction A <- H A H with complex reflectors; the
    // tridiagonal produced has real diagonal and |.| off-diagonals (phases
    // can be absorbed, eigenvalues unchanged).
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(at(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) {
            e[k] = 0.0;
            continue;
        }
        C x0 = at(k + 1, k);
        const double ax0 = std::abs(x0);
        const C phase = ax0 > 0 ? x0 / ax0 : C(1.0, 0.0);
        const C alpha = -phase * xnorm;
        // v = x - alpha e1
        std::vector<C> v(n, C(0, 0));
        for (std::size_t i = k + 1; i < n; ++i) v[i] = at(i, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) {
            e[k] = std::abs(alpha);
            continue;
        }
        // A <- (I - 2 v v*/v*v) A (I - 2 v v*/v*v)
        std::vector<C> w(n, C(0, 0)); // w = A v
        for (std::size_t i = k; i < n; ++i) {
            C s(0, 0);
            for (std::size_t j = k + 1; j < n; ++j) s += at(i, j) * v[j];
            w[i] = s;
        }
        const double beta = 2.0 / vnorm2;
        C vw(0, 0);
        for (std::size_t i = k + 1; i < n; ++i) vw += std::conj(v[i]) * w[i];
        // A <- A - beta v (w* ) - beta w v* + beta^2 (v* w) v v*
        for (std::size_t i = k; i < n; ++i) {
            for (std::size_t j = k; j < n; ++j) {
                C upd = beta * v[i] * std::conj(w[j]) + beta * w[i] * std::conj(v[j]) -
                        beta * beta * vw * v[i] * std::conj(v[j]);
                at(i, j) -= upd;
            }
        }
        e[k] = std::abs(at(k + 1, k));
        at(k + 1, k) = e[k];
        at(k, k + 1) = e[k];
    }
    if (n >= 2) e[n - 2] = std::abs(at(n - 1, n - 2));
    for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i).real();
    return tridiagonal_eigenvalues(std::move(d), std::move(e));
}

} // namespace airykit
