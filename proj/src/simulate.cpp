#include "airykit/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "airykit/rng.hpp"

namespace airykit {

// --- random matrix edges -------------------------------------------------------

std::vector<double> sample_matrix_edge(Ensemble ensemble, int N, int n_samples,
                                       std::uint64_t seed)
{
    if (N < 50 || n_samples < 1)
        throw std::invalid_argument("sample_matrix_edge: need N >= 50, n_samples >= 1");
    std::vector<double> out(n_samples);
    const double n13 = std::cbrt(static_cast<double>(N));
    for (int s = 0; s < n_samples; ++s) {
        CounterRng rng(seed, static_cast<std::uint64_t>(s) + 1);
        double lmax;
        if (ensemble == Ensemble::goe) {
            // density ~ e^{-tr A^2 / 4N}: off-diagonal variance N, diagonal 2N
            Matrix a(N, N);
            const double sd_off = std::sqrt(static_cast<double>(N));
            const double sd_diag = std::sqrt(2.0 * N);
            for (int i = 0; i < N; ++i) {
                a(i, i) = sd_diag * rng.next_normal();
                for (int j = i + 1; j < N; ++j) {
                    const double v = sd_off * rng.next_normal();
                    a(i, j) = v;
                    a(j, i) = v;
                }
            }
            const std::vector<double> ev = symmetric_eigenvalues(std::move(a));
            lmax = ev.back();
        } else {
            // density ~ e^{-tr A^2 / 2N}: component variance N/2, diagonal N
            std::vector<std::complex<double>> a(static_cast<std::size_t>(N) * N);
            const double sd_off = std::sqrt(0.5 * N);
            const double sd_diag = std::sqrt(static_cast<double>(N));
            for (int i = 0; i < N; ++i) {
                a[static_cast<std::size_t>(i) * N + i] = sd_diag * rng.next_normal();
                for (int j = i + 1; j < N; ++j) {
                    const std::complex<double> v(sd_off * rng.next_normal(),
                                                 sd_off * rng.next_normal());
                    a[static_cast<std::size_t>(i) * N + j] = v;
                    a[static_cast<std::size_t>(j) * N + i] = std::conj(v);
                }
            }
            const std::vector<double> ev = hermitian_eigenvalues(std::move(a), N);
            lmax = ev.back();
        }
        out[s] = (lmax - 2.0 * N) / n13;
    }
    return out;
}

double ks_distance(std::vector<double> samples, const std::vector<double>& grid,
                   const std::vector<double>& cdf)
{
    if (samples.empty() || grid.size() != cdf.size() || grid.size() < 2)
        throw std::invalid_argument("ks_distance: bad input");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    auto cdf_at = [&](double x) {
        if (x <= grid.front()) return cdf.front();
        if (x >= grid.back()) return cdf.back();
        const auto it = std::upper_bound(grid.begin(), grid.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
        const double w = (x - grid[i]) / (grid[i + 1] - grid[i]);
        return cdf[i] + w * (cdf[i + 1] - cdf[i]);
    };
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf_at(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// --- LPP ------------------------------------------------------------------------

namespace {

// one geometric weight; q = 1/2 uses the trailing-zero trick
inline long geometric_weight(CounterRng& rng, double q)
{
    if (q == 0.5) {
        const std::uint64_t u = rng.next_u64();
        return u == 0 ? 64 : std::countr_zero(u);
    }
    return rng.next_geometric(q);
}

} // namespace

std::vector<long> lpp_point_to_point(const LppEnvironment& env)
{
    const int N = env.N;
    if (N < 1 || N > 4000) throw std::invalid_argument("lpp_point_to_point: N out of range");
    if (!(env.q > 0.0 && env.q < 1.0))
        throw std::invalid_argument("lpp_point_to_point: q must be in (0,1)");
    std::vector<long> L(static_cast<std::size_t>(N) * N, 0);
    for (int i = 0; i < N; ++i) {
        CounterRng rng(env.seed, 0x10000000ULL + static_cast<std::uint64_t>(i));
        for (int j = 0; j < N; ++j) {
            const long w = geometric_weight(rng, env.q);
            const long up = i > 0 ? L[static_cast<std::size_t>(i - 1) * N + j] : 0;
            const long left = j > 0 ? L[static_cast<std::size_t>(i) * N + j - 1] : 0;
            L[static_cast<std::size_t>(i) * N + j] = w + std::max(up, left);
        }
    }
    return L;
}

long lpp_brute_force(const std::vector<long>& w, int n)
{
    if (static_cast<int>(w.size()) != n * n)
        throw std::invalid_argument("lpp_brute_force: size mismatch");
    long best = 0;
    // enumerate all monotone paths from (0,0) to (n-1,n-1)
    std::function<void(int, int, long)> go = [&](int i, int j, long acc) {
        acc += w[static_cast<std::size_t>(i) * n + j];
        if (i == n - 1 && j == n - 1) {
            best = std::max(best, acc);
            return;
        }
        if (i + 1 < n) go(i + 1, j, acc);
        if (j + 1 < n) go(i, j + 1, acc);
    };
    go(0, 0, 0);
    return best;
}

LppLineSample lpp_line_and_endpoint(const LppEnvironment& env)
{
    // Origin-rooted (droplet) passage times L(i, j) for i, j >= 1, marched
    // along anti-diagonals d = i + j up to the line through (N, N); the
    // point-to-line time is the maximum of the profile along d = 2N and
    // kappa is its leftmost maximizer location.
    const int N = env.N;
    if (N < 2 || N > 4000)
        throw std::invalid_argument("lpp_line_and_endpoint: N out of range");
    // prev[i] = L(i, d - i) on the current anti-diagonal
    std::vector<long> prev(2 * N + 1, 0), cur(2 * N + 1, 0);
    for (int d = 2; d <= 2 * N; ++d) {
        CounterRng rng(env.seed, 0x20000000ULL + static_cast<std::uint64_t>(d));
        const int ilo = std::max(1, d - 2 * N + 1), ihi = std::min(d - 1, 2 * N - 1);
        for (int i = ilo; i <= ihi; ++i) {
            const long w = geometric_weight(rng, env.q);
            // predecessors (i-1, j) and (i, j-1) both sit on diagonal d-1
            const long up = prev[i - 1];   // (i-1, j)
            const long left = prev[i];     // (i, j-1)
            cur[i] = w + std::max(up, left);
        }
        if (ilo > 1) cur[ilo - 1] = 0;
        std::swap(prev, cur);
    }
    LppLineSample s;
    long best = -1;
    for (int u = -(N - 1); u <= N - 1; ++u) { // endpoint (N+u, N-u)
        const long v = prev[N + u];
        if (v > best) {
            best = v;
            s.kappa = u;
        }
    }
    s.line_max = best;
    s.point_val = prev[N];
    return s;
}

std::vector<LppLineSample> lpp_line_samples(int N, double q, int n_samples, std::uint64_t seed)
{
    std::vector<LppLineSample> out(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        LppEnvironment env{N, q, seed + 0x5851f42d4c957f2dULL * (s + 1)};
        out[s] = lpp_line_and_endpoint(env);
    }
    return out;
}

std::pair<double, double> standardize(std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= n;
    const double sd = std::sqrt(var);
    for (double& x : xs) x = (x - mean) / sd;
    return {mean, sd};
}

// --- finite Eynard-Mehta ----------------------------------------------------------

Matrix FiniteDPP::m_matrix() const
{
    Matrix acc = phi;
    for (const Matrix& wi : w) acc = acc * wi;
    return acc * psi;
}

namespace {

Matrix inverse(const Matrix& a)
{
    const std::size_t n = a.rows();
    LuFactorization lu = lu_factor(a);
    if (lu.singular) throw std::invalid_argument("eynard_mehta: singular M");
    Matrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        const std::vector<double> col = lu.solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

} // namespace

std::vector<std::vector<Matrix>> eynard_mehta_kernel(const FiniteDPP& dpp)
{
    const std::size_t n = dpp.spaces.size();
    if (dpp.w.size() + 1 != n) throw std::invalid_argument("eynard_mehta: W count mismatch");
    const Matrix minv = inverse(dpp.m_matrix());

    // right_i = W_i ... W_{n-1} Psi, left_j = Phi W_1 ... W_{j-1}
    std::vector<Matrix> right(n), left(n);
    right[n - 1] = dpp.psi;
    for (std::size_t i = n - 1; i-- > 0;) right[i] = dpp.w[i] * right[i + 1];
    left[0] = dpp.phi;
    for (std::size_t j = 1; j < n; ++j) left[j] = left[j - 1] * dpp.w[j - 1];

    std::vector<std::vector<Matrix>> k(n, std::vector<Matrix>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Matrix block = right[i] * (minv * left[j]);
            if (i < j) {
                Matrix trans = dpp.w[i];
                for (std::size_t l = i + 1; l < j; ++l) trans = trans * dpp.w[l];
                block -= trans;
            }
            k[i][j] = std::move(block);
        }
    }
    return k;
}

double eynard_mehta_gap_probability(const FiniteDPP& dpp, const std::vector<double>& z_levels)
{
    const std::size_t n = dpp.spaces.size();
    if (z_levels.size() != n) throw std::invalid_argument("eynard_mehta: z level count");
    const auto k = eynard_mehta_kernel(dpp);
    std::vector<std::size_t> offset(n, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        offset[i] = total;
        total += dpp.spaces[i].size();
    }
    Matrix a = Matrix::identity(total);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t ai = 0; ai < dpp.spaces[i].size(); ++ai) {
            if (dpp.spaces[i][ai] <= z_levels[i]) continue;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t bj = 0; bj < dpp.spaces[j].size(); ++bj) {
                    if (dpp.spaces[j][bj] <= z_levels[j]) continue;
                    a(offset[i] + ai, offset[j] + bj) -= k[i][j](ai, bj);
                }
        }
    return lu_factor(std::move(a)).determinant();
}

double eynard_mehta_correlation(const FiniteDPP& dpp,
                                const std::vector<std::pair<int, int>>& points)
{
    const auto k = eynard_mehta_kernel(dpp);
    const std::size_t c = points.size();
    Matrix sub(c, c);
    for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = 0; b < c; ++b)
            sub(a, b) = k[points[a].first][points[b].first](points[a].second,
                                                            points[b].second);
    return determinant(sub);
}

namespace {

void combinations(int n, int k, std::vector<std::vector<int>>* out)
{
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            out->push_back(idx);
            return;
        }
        for (int i = start; i < n; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

double config_weight(const FiniteDPP& dpp, const std::vector<std::vector<int>>& sel)
{
    const std::size_t n = dpp.spaces.size();
    const int k = dpp.k;
    Matrix first(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) first(i, j) = dpp.phi(i, sel[0][j]);
    double wgt = determinant(first);
    for (std::size_t t = 0; t + 1 < n; ++t) {
        Matrix trans(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) trans(i, j) = dpp.w[t](sel[t][i], sel[t + 1][j]);
        wgt *= determinant(trans);
    }
    Matrix last(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) last(i, j) = dpp.psi(sel[n - 1][j], i);
    return wgt * determinant(last);
}

} // namespace

std::map<std::vector<int>, double> enumerate_dpp_measure(const FiniteDPP& dpp)
{
    const std::size_t n = dpp.spaces.size();
    std::vector<std::vector<std::vector<int>>> choices(n);
    double total_count = 1;
    for (std::size_t t = 0; t < n; ++t) {
        combinations(static_cast<int>(dpp.spaces[t].size()), dpp.k, &choices[t]);
        total_count *= static_cast<double>(choices[t].size());
    }
    if (total_count > 1e6)
        throw std::invalid_argument("enumerate_dpp_measure: configuration count exceeds 1e6");

    const double z = determinant(dpp.m_matrix());
    std::map<std::vector<int>, double> out;
    std::vector<int> key;
    std::vector<std::vector<int>> sel(n);
    double mass = 0.0;
    std::function<void(std::size_t)> rec = [&](std::size_t t) {
        if (t == n) {
            const double p = config_weight(dpp, sel) / z;
            if (p < -1e-12)
                throw std::runtime_error("enumerate_dpp_measure: negative probability, "
                                         "inadmissible instance");
            key.clear();
            for (const auto& s : sel) key.insert(key.end(), s.begin(), s.end());
            out[key] += p;
            mass += p;
            return;
        }
        for (const auto& c : choices[t]) {
            sel[t] = c;
            rec(t + 1);
        }
    };
    rec(0);
    if (std::abs(mass - 1.0) > 1e-10)
        throw std::runtime_error("enumerate_dpp_measure: total mass " + std::to_string(mass));
    return out;
}

double enumerate_gap_probability(const FiniteDPP& dpp, const std::vector<double>& z_levels)
{
    const auto measure = enumerate_dpp_measure(dpp);
    const std::size_t n = dpp.spaces.size();
    double p = 0.0;
    for (const auto& [key, prob] : measure) {
        bool ok = true;
        std::size_t pos = 0;
        for (std::size_t t = 0; t < n && ok; ++t) {
            double top = -1e300;
            for (int a = 0; a < dpp.k; ++a)
                top = std::max(top, dpp.spaces[t][key[pos + a]]);
            pos += dpp.k;
            ok = top <= z_levels[t];
        }
        if (ok) p += prob;
    }
    return p;
}

double enumerate_correlation(const FiniteDPP& dpp,
                             const std::vector<std::pair<int, int>>& points)
{
    const auto measure = enumerate_dpp_measure(dpp);
    double p = 0.0;
    for (const auto& [key, prob] : measure) {
        bool all = true;
        for (const auto& [t, x] : points) {
            bool found = false;
            for (int a = 0; a < dpp.k && !found; ++a)
                found = key[static_cast<std::size_t>(t) * dpp.k + a] == x;
            if (!found) {
                all = false;
                break;
            }
        }
        if (all) p += prob;
    }
    return p;
}

FiniteDPP toy_random_walk_dpp(int n_times, int space_size, int k)
{
    FiniteDPP dpp;
    dpp.k = k;
    dpp.spaces.assign(n_times, {});
    for (int t = 0; t < n_times; ++t)
        for (int x = 0; x < space_size; ++x) dpp.spaces[t].push_back(x);
    // monomial boundary data and up-or-stay walk steps (totally nonnegative)
    dpp.phi = Matrix(k, space_size);
    dpp.psi = Matrix(space_size, k);
    for (int i = 0; i < k; ++i)
        for (int x = 0; x < space_size; ++x) {
            dpp.phi(i, x) = std::pow(static_cast<double>(x + 1), i);
            dpp.psi(x, i) = std::pow(static_cast<double>(x + 1), i);
        }
    for (int t = 0; t + 1 < n_times; ++t) {
        Matrix w(space_size, space_size, 0.0);
        for (int x = 0; x < space_size; ++x) {
            w(x, x) = 1.0;
            if (x + 1 < space_size) w(x, x + 1) = 1.0;
        }
        dpp.w.push_back(std::move(w));
    }
    return dpp;
}

} // namespace airykit
