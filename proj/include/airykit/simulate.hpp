#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "airykit/linalg.hpp"

namespace airykit {

// --- random matrix edges -------------------------------------------------------

enum class Ensemble { gue, goe };

/// Rescaled largest-eigenvalue samples (lambda_max - 2N) / N^{1/3}, with the
/// entry variances that put the spectral edge at 2N (GUE: off-diagonal
/// components N(0, N/sqrt 2), diagonal N(0, N); GOE: off-diagonal N(0, N),
/// diagonal N(0, sqrt 2 N)).  Deterministic per (seed, sample index).
std::vector<double> sample_matrix_edge(Ensemble ensemble, int N, int n_samples,
                                       std::uint64_t seed);

/// Kolmogorov-Smirnov distance between samples and a tabulated CDF
/// (linearly interpolated between grid points).
double ks_distance(std::vector<double> samples, const std::vector<double>& grid,
                   const std::vector<double>& cdf);

// --- last passage percolation ----------------------------------------------------

/// Geometric weight field and its parameters.
struct LppEnvironment {
    int N = 0;
    double q = 0.5;
    std::uint64_t seed = 0;
};

/// Point-to-point last passage times L(i, j) for 1 <= i, j <= N (flattened
/// row-major, zero boundary on i = 0 / j = 0).
std::vector<long> lpp_point_to_point(const LppEnvironment& env);

/// Exhaustive oracle: max path weight over all up-right paths on an n x n
/// grid of explicit weights (n small).
long lpp_brute_force(const std::vector<long>& w, int n);

struct LppLineSample {
    long line_max = 0;   // L^{line}(N)
    long point_val = 0;  // L^{point}(N, N)
    long kappa = 0;      // leftmost maximizing anti-diagonal offset
};

/// Flat-initial-data LPP: paths start anywhere on the anti-diagonal i+j = 0;
/// returns the point-to-line maximum over the anti-diagonal through (N, N)
/// and the (leftmost) maximizer location kappa_N.
LppLineSample lpp_line_and_endpoint(const LppEnvironment& env);

/// Many line samples, one independent weight field per sample index.
std::vector<LppLineSample> lpp_line_samples(int N, double q, int n_samples,
                                            std::uint64_t seed);

/// Affine standardization: (x - mean) / sd applied in place; returns {mean, sd}.
std::pair<double, double> standardize(std::vector<double>& xs);

// --- finite Eynard-Mehta ----------------------------------------------------------

/// Finite multi-time determinantal data: n point sets, transition matrices
/// W_1..W_{n-1}, boundary vectors Phi (k x |X^1|) and Psi (|X^n| x k).
struct FiniteDPP {
    std::vector<std::vector<double>> spaces; // point coordinates per time
    std::vector<Matrix> w;                   // transitions between consecutive times
    Matrix phi;                              // k x |X^1|
    Matrix psi;                              // |X^n| x k
    int k = 0;

    Matrix m_matrix() const; // Phi W_1 ... W_{n-1} Psi  (k x k)
};

/// Correlation kernel blocks K[i][j] of the Eynard-Mehta theorem:
/// K_{i,j} = W_i...W_{n-1} Psi M^{-1} Phi W_1...W_{j-1} - [i<j] W_i...W_{j-1}.
std::vector<std::vector<Matrix>> eynard_mehta_kernel(const FiniteDPP& dpp);

/// Gap probability det(I - P K P) with P selecting points above z_level[i]
/// at time i.
double eynard_mehta_gap_probability(const FiniteDPP& dpp,
                                    const std::vector<double>& z_levels);

/// Correlation rho(A) = det K|_A for a configuration A given as
/// (time index, point index) pairs.
double eynard_mehta_correlation(const FiniteDPP& dpp,
                                const std::vector<std::pair<int, int>>& points);

/// Exact measure of every k-point-per-time configuration by enumeration;
/// keys are flattened index tuples.  Throws if a probability is negative
/// (inadmissible instance) and verifies the normalization Z = det M.
std::map<std::vector<int>, double> enumerate_dpp_measure(const FiniteDPP& dpp);

/// Enumerated gap probability: total mass of configurations whose top path
/// stays below the z-levels at every time.
double enumerate_gap_probability(const FiniteDPP& dpp, const std::vector<double>& z_levels);

/// Enumerated correlation: mass of configurations containing all the given
/// (time, point) pairs.
double enumerate_correlation(const FiniteDPP& dpp,
                             const std::vector<std::pair<int, int>>& points);

/// A small non-intersecting walk instance (LGV weights, totally nonnegative)
/// used across the tests: n times, |X^i| = space_size, k paths.
FiniteDPP toy_random_walk_dpp(int n_times = 2, int space_size = 4, int k = 2);

} // namespace airykit
