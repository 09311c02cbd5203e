#include "airykit/airy.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace airykit {

namespace {

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3).
constexpr double kAi0 = 0.35502805388781723926;
constexpr double kAip0 = -0.25881940379280679840;

constexpr double kTableLo = -256.0;
constexpr double kTableHi = 14.0;
constexpr double kTableStep = 0.125;
constexpr double kAsymSwitch = 12.0; // use the asymptotic series beyond this

// Asymptotic series e^{-zeta} expansions, DLMF 9.7: u_0 = v_0 = 1,
// u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k), v_k = u_k (6k+1)/(1-6k).
// Valid to ~e^{-2 zeta} relative error; we only call it for zeta >= 27.
struct AsymResult {
    double scaled_ai;  // e^{+zeta} Ai(x)
    double scaled_aip; // e^{+zeta} Ai'(x)
};

AsymResult asymptotic_positive(double x)
{
    const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
    double u = 1.0, s_ai = 1.0, s_aip = 1.0, sign = 1.0;
    double prev = 1.0;
    for (int k = 1; k <= 40; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
        const double term = u / std::pow(zeta, k);
        if (term > prev) break; // divergent tail reached
        prev = term;
        sign = -sign;
        s_ai += sign * term;
        s_aip += sign * term * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        if (term < 1e-19) break;
    }
    const double sqrt_pi = 1.7724538509055160273;
    const double x4 = std::pow(x, 0.25);
    return {s_ai / (2.0 * sqrt_pi * x4), -x4 * s_aip / (2.0 * sqrt_pi)};
}

// Oscillatory asymptotics for large negative argument (DLMF 9.7.9-10),
// used only to anchor the table march at x = kTableLo where zeta ~ 2731
// and four terms already reach ~1e-17.
void asymptotic_negative(double x, double* ai_out, double* aip_out)
{
    const double z = -x;
    const double zeta = (2.0 / 3.0) * z * std::sqrt(z);
    // Phase reduced modulo 2 pi in extended precision: zeta is ~2700 at the
    // anchor and double-precision sin/cos would lose ~3 digits there.
    const long double zeta_l = (2.0L / 3.0L) * static_cast<long double>(z) *
                               sqrtl(static_cast<long double>(z));
    const long double two_pi = 6.283185307179586476925286766559L;
    const double phase =
        static_cast<double>(fmodl(zeta_l + 0.25L * 3.141592653589793238462643383280L, two_pi));
    double u = 1.0;
    std::array<double, 8> uk{};
    uk[0] = 1.0;
    for (int k = 1; k < 8; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             ((2.0 * k - 1.0) * 216.0 * k);
        uk[k] = u;
    }
    double ce = 0.0, se = 0.0, ceP = 0.0, seP = 0.0; // even/odd sums for Ai, Ai'
    for (int k = 0; k < 4; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        const double e2k = uk[2 * k] / std::pow(zeta, 2 * k);
        const double e2k1 = uk[2 * k + 1] / std::pow(zeta, 2 * k + 1);
        ce += sgn * e2k;
        se += sgn * e2k1;
        const double v2k = e2k * (12.0 * k + 1.0) / (1.0 - 12.0 * k);
        const double v2k1 = e2k1 * (12.0 * k + 7.0) / (-(12.0 * k + 5.0));
        ceP += sgn * v2k;
        seP += sgn * v2k1;
    }
    const double sqrt_pi = 1.7724538509055160273;
    const double z4 = std::pow(z, 0.25);
    *ai_out = (std::sin(phase) * ce - std::cos(phase) * se) / (sqrt_pi * z4);
    *aip_out = -z4 * (std::cos(phase) * ceP + std::sin(phase) * seP) / sqrt_pi;
}

// One Taylor step of y'' = x y from (x0, y, yp) to x0 + h.
// Coefficients satisfy (n+2)(n+1) c_{n+2} = x0 c_n + c_{n-1}.
template <typename Real>
void taylor_step(Real x0, Real h, Real* y, Real* yp, int order = 24)
{
    std::vector<Real> c(order + 3, Real(0));
    c[0] = *y;
    c[1] = *yp;
    for (int n = 0; n + 2 <= order + 2; ++n) {
        Real rhs = x0 * c[n];
        if (n >= 1) rhs += c[n - 1];
        c[n + 2] = rhs / Real((n + 1) * (n + 2));
    }
    Real v = 0, vp = 0;
    for (int n = order + 2; n >= 1; --n) {
        v = v * h + c[n];
        vp = vp * h + c[n] * Real(n);
    }
    v = v * h + c[0];
    *y = v;
    *yp = vp;
}

struct AiryTable {
    std::vector<double> ai, aip;
    double join_err = 0.0; // discrepancy of the two marches at x = 0

    AiryTable()
    {
        const int n = static_cast<int>(std::llround((kTableHi - kTableLo) / kTableStep)) + 1;
        ai.assign(n, 0.0);
        aip.assign(n, 0.0);
        const int i0 = static_cast<int>(std::llround((0.0 - kTableLo) / kTableStep));

        // Right part: anchor at kTableHi from the positive asymptotics and
        // march left (Ai grows leftward, the numerically stable direction).
        {
            const AsymResult a = asymptotic_positive(kTableHi);
            const double zeta = (2.0 / 3.0) * kTableHi * std::sqrt(kTableHi);
            const double damp = std::exp(-zeta);
            long double y = a.scaled_ai * damp;
            long double yp = a.scaled_aip * damp;
            ai[n - 1] = static_cast<double>(y);
            aip[n - 1] = static_cast<double>(yp);
            for (int i = n - 2; i >= i0; --i) {
                const long double x0 = kTableLo + kTableStep * (i + 1);
                taylor_step<long double>(x0, -static_cast<long double>(kTableStep), &y, &yp);
                ai[i] = static_cast<double>(y);
                aip[i] = static_cast<double>(yp);
            }
            join_err = std::max(std::abs(ai[i0] - kAi0), std::abs(aip[i0] - kAip0));
        }

        // Left part: anchor at kTableLo from the oscillatory asymptotics and
        // march right (neutral direction below the turning point).
        {
            double a0, ap0;
            asymptotic_negative(kTableLo, &a0, &ap0);
            long double y = a0, yp = ap0;
            ai[0] = a0;
            aip[0] = ap0;
            for (int i = 1; i < i0; ++i) {
                const long double x0 = kTableLo + kTableStep * (i - 1);
                taylor_step<long double>(x0, static_cast<long double>(kTableStep), &y, &yp);
                ai[i] = static_cast<double>(y);
                aip[i] = static_cast<double>(yp);
            }
            // Splice consistency: the rightward march evaluated at 0 must hit
            // the exact values as well; fold into the error estimate.
            long double y2 = y, yp2 = yp;
            taylor_step<long double>(static_cast<long double>(-kTableStep),
                                     static_cast<long double>(kTableStep), &y2, &yp2);
            join_err = std::max({join_err, std::abs(static_cast<double>(y2) - kAi0),
                                 std::abs(static_cast<double>(yp2) - kAip0)});
        }
    }
};

const AiryTable& table()
{
    static const AiryTable t;
    return t;
}

void eval_from_table(double x, double* y, double* yp)
{
    const AiryTable& t = table();
    int i = static_cast<int>(std::llround((x - kTableLo) / kTableStep));
    const int n = static_cast<int>(t.ai.size());
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    const double x0 = kTableLo + kTableStep * i;
    const double h = x - x0;
    double v = t.ai[i], vp = t.aip[i];
    if (h != 0.0) taylor_step<double>(x0, h, &v, &vp, 20);
    *y = v;
    *yp = vp;
}

void check_domain(double x)
{
    if (!std::isfinite(x)) throw std::domain_error("airy: non-finite argument");
    if (x < kTableLo) throw std::domain_error("airy: argument below supported range");
}

double err_estimate(double x)
{
    const double base = 2e-15 + table().join_err;
    if (x >= 0.0) return base;
    const double zeta = (2.0 / 3.0) * std::pow(-x, 1.5);
    return base * (1.0 + zeta / 20.0);
}

} // namespace

double airy_zeta(double x) { return (2.0 / 3.0) * x * std::sqrt(x); }

double ai(double x)
{
    check_domain(x);
    if (x >= kAsymSwitch) {
        const AsymResult a = asymptotic_positive(x);
        const double zeta = airy_zeta(x);
        return zeta > 745.0 ? 0.0 : a.scaled_ai * std::exp(-zeta);
    }
    double y, yp;
    eval_from_table(x, &y, &yp);
    return y;
}

double ai_prime(double x)
{
    check_domain(x);
    if (x >= kAsymSwitch) {
        const AsymResult a = asymptotic_positive(x);
        const double zeta = airy_zeta(x);
        return zeta > 745.0 ? 0.0 : a.scaled_aip * std::exp(-zeta);
    }
    double y, yp;
    eval_from_table(x, &y, &yp);
    return yp;
}

AiryValue airy(double x)
{
    check_domain(x);
    AiryValue v;
    v.x = x;
    if (x >= kAsymSwitch) {
        const AsymResult a = asymptotic_positive(x);
        const double zeta = airy_zeta(x);
        const double damp = zeta > 745.0 ? 0.0 : std::exp(-zeta);
        v.ai = a.scaled_ai * damp;
        v.ai_prime = a.scaled_aip * damp;
        v.est_abs_err = std::abs(v.ai) * 1e-15 + 1e-300;
    } else {
        eval_from_table(x, &v.ai, &v.ai_prime);
        v.est_abs_err = err_estimate(x);
    }
    return v;
}

double ai_scaled(double x)
{
    if (!std::isfinite(x) || x < 0.0) throw std::domain_error("ai_scaled: needs x >= 0");
    if (x >= kAsymSwitch) return asymptotic_positive(x).scaled_ai;
    double y, yp;
    eval_from_table(x, &y, &yp);
    return y * std::exp(airy_zeta(x));
}

double ai_prime_scaled(double x)
{
    if (!std::isfinite(x) || x < 0.0) throw std::domain_error("ai_prime_scaled: needs x >= 0");
    if (x >= kAsymSwitch) return asymptotic_positive(x).scaled_aip;
    double y, yp;
    eval_from_table(x, &y, &yp);
    return yp * std::exp(airy_zeta(x));
}

namespace {

double guarded_exp_product(double scaled, double log_total)
{
    if (log_total > 709.0) throw std::overflow_error("airy: kernel factor overflows double range");
    if (log_total < -745.0) return 0.0;
    return scaled * std::exp(log_total);
}

} // namespace

double ai_times_exp(double arg, double log_factor)
{
    if (!std::isfinite(arg) || !std::isfinite(log_factor))
        throw std::domain_error("ai_times_exp: non-finite input");
    if (arg >= 0.0) return guarded_exp_product(ai_scaled(arg), log_factor - airy_zeta(arg));
    return guarded_exp_product(ai(arg), log_factor);
}

double ai_prime_times_exp(double arg, double log_factor)
{
    if (!std::isfinite(arg) || !std::isfinite(log_factor))
        throw std::domain_error("ai_prime_times_exp: non-finite input");
    if (arg >= 0.0) return guarded_exp_product(ai_prime_scaled(arg), log_factor - airy_zeta(arg));
    return guarded_exp_product(ai_prime(arg), log_factor);
}

} // namespace airykit
