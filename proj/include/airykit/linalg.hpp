#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace airykit {

/// Dense row-major matrix of doubles with value semantics.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);

/// LU factorization with partial pivoting (in place, row pivots recorded).
struct LuFactorization {
    Matrix lu;
    std::vector<int> pivots;
    int sign = 1;
    bool singular = false;
    double min_abs_pivot = 0.0;
    double max_abs_pivot = 0.0;

    double determinant() const;
    double log_abs_determinant() const; // with determinant_sign()
    int determinant_sign() const;
    /// Solve (LU) x = b.
    std::vector<double> solve(std::span<const double> b) const;
    /// Crude reciprocal condition estimate from the pivot range.
    double pivot_rcond() const
    {
        return max_abs_pivot > 0.0 ? min_abs_pivot / max_abs_pivot : 0.0;
    }
};

LuFactorization lu_factor(Matrix a);

/// det(A) through LU; returns 0 for numerically singular input.
double determinant(const Matrix& a);

/// Singular values (descending) by one-sided Jacobi; accurate for the
/// moderate sizes used here.
std::vector<double> singular_values(Matrix a);

/// Eigenvalues (ascending) of a real symmetric matrix: Householder
/// tridiagonalization followed by implicit-shift QL.
std::vector<double> symmetric_eigenvalues(Matrix a);

/// Eigenvalues (ascending) of a complex Hermitian matrix given in row-major
/// order (n*n entries).
std::vector<double> hermitian_eigenvalues(std::vector<std::complex<double>> a, std::size_t n);

/// Eigenvalues (ascending) of a symmetric tridiagonal matrix with diagonal d
/// and off-diagonal e (e has size d.size()-1).
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e);

} // namespace airykit
