#pragma once

// Small dense linear algebra. Everything here is sized for filter quantities
// (a handful of states and observations), so matrices are plain values
// backed by a row-major std::vector and copied freely.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace levykf {

class Vector {
public:
    Vector() = default;
    /// Zero vector of the given dimension.
    explicit Vector(std::size_t dim);
    explicit Vector(std::vector<double> entries);
    Vector(std::initializer_list<double> entries);

    static Vector zeros(std::size_t dim) { return Vector(dim); }

    std::size_t dim() const noexcept { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double at(std::size_t i) const;

    std::span<const double> entries() const noexcept { return data_; }
    std::span<double> entries() noexcept { return data_; }

    bool operator==(const Vector&) const = default;

private:
    std::vector<double> data_;
};

class Matrix {
public:
    Matrix() = default;
    /// Zero matrix.
    Matrix(std::size_t rows, std::size_t cols);
    /// Row-major entries; throws DimensionError if the count is wrong and
    /// SpecificationError on a non-finite entry.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const;

    std::span<const double> entries() const noexcept { return data_; }

    Vector row(std::size_t i) const;
    Vector col(std::size_t j) const;

    /// "RxC", used in error messages.
    std::string shape() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_add(const Matrix& a, const Matrix& b);
Matrix mat_sub(const Matrix& a, const Matrix& b);
Matrix scalar_mul(double s, const Matrix& a);
Matrix transpose(const Matrix& a);
Vector mat_vec(const Matrix& a, const Vector& x);

double trace(const Matrix& a);

/// (a + aᵀ) / 2.
Matrix symmetrize(const Matrix& a);

/// Solves a·X = b for symmetric positive definite a by an LDLᵀ (square-root
/// free Cholesky) factorization. Throws SingularityError carrying the pivot
/// index when a pivot is not positive (relative to the largest diagonal
/// entry), and SpecificationError if a is not symmetric to 1e-9 relative.
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// Lower-triangular L with L·Lᵀ == a for a symmetric positive semidefinite
/// a. Zero pivots are allowed (their column of L is zero); a negative pivot,
/// or a zero pivot with a nonzero remainder below it, means a is not PSD and
/// raises SpecificationError.
Matrix psd_factor(const Matrix& a);

/// True when psd_factor would succeed.
bool is_psd(const Matrix& a);

bool is_symmetric(const Matrix& a, double rel_tol = 1e-9);

Vector vec_add(const Vector& a, const Vector& b);
Vector vec_sub(const Vector& a, const Vector& b);
Vector vec_scale(double s, const Vector& a);
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm_inf(const Vector& a);
double norm_inf(const Matrix& a);
/// a·bᵀ.
Matrix outer(const Vector& a, const Vector& b);
/// Column matrix view of a vector (copy).
Matrix as_column(const Vector& a);

inline Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }
inline Vector operator*(const Matrix& a, const Vector& x) { return mat_vec(a, x); }
inline Matrix operator*(double s, const Matrix& a) { return scalar_mul(s, a); }
inline Matrix operator+(const Matrix& a, const Matrix& b) { return mat_add(a, b); }
inline Matrix operator-(const Matrix& a, const Matrix& b) { return mat_sub(a, b); }
inline Vector operator+(const Vector& a, const Vector& b) { return vec_add(a, b); }
inline Vector operator-(const Vector& a, const Vector& b) { return vec_sub(a, b); }
inline Vector operator*(double s, const Vector& a) { return vec_scale(s, a); }

/// Human-readable form, e.g. [1, 2] and [[1, 0], [0, 1]].
std::ostream& operator<<(std::ostream& os, const Vector& v);
std::ostream& operator<<(std::ostream& os, const Matrix& m);

}  // namespace levykf
