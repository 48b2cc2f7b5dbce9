#include "levykf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "levykf/errors.hpp"

namespace levykf {

namespace {

// Relative pivot floor for solve_spd.
constexpr double kPivotTol = 1e-12;
// Relative pivot tolerance for the semidefinite factor.
constexpr double kPsdTol = 1e-10;

void require_finite(std::span<const double> values, const char* where) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw SpecificationError(std::string(where) + ": non-finite matrix entry");
        }
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + a.shape() + " vs " +
                             b.shape());
    }
}

void require_square(const Matrix& a, const char* op) {
    if (!a.is_square()) {
        throw DimensionError(std::string(op) + ": expected a square matrix, got " + a.shape());
    }
}

void require_same_dim(const Vector& a, const Vector& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(op) + ": dimension mismatch " +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
}

double max_abs_diagonal(const Matrix& a) {
    double scale = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) scale = std::max(scale, std::abs(a(i, i)));
    return scale;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vector

Vector::Vector(std::size_t dim) : data_(dim, 0.0) {}

Vector::Vector(std::vector<double> entries) : data_(std::move(entries)) {}

Vector::Vector(std::initializer_list<double> entries) : data_(entries) {}

double Vector::at(std::size_t i) const {
    if (i >= data_.size()) {
        throw DimensionError("Vector::at: index " + std::to_string(i) + " out of range for dim " +
                             std::to_string(data_.size()));
    }
    return data_[i];
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("Matrix: " + std::to_string(data_.size()) +
                             " entries do not fill a " + shape() + " matrix");
    }
    require_finite(data_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer rows");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vector& diag) {
    Matrix m(diag.dim(), diag.dim());
    for (std::size_t i = 0; i < diag.dim(); ++i) m(i, i) = diag[i];
    return m;
}

double Matrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
        throw DimensionError("Matrix::at: index (" + std::to_string(i) + "," +
                             std::to_string(j) + ") out of range for " + shape());
    }
    return (*this)(i, j);
}

Vector Matrix::row(std::size_t i) const {
    Vector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
}

Vector Matrix::col(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

std::string Matrix::shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

// ---------------------------------------------------------------------------
// Matrix arithmetic

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("mat_mul: cannot multiply " + a.shape() + " by " + b.shape());
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    require_finite(c.entries(), "mat_mul");
    return c;
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "mat_add");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    require_finite(c.entries(), "mat_add");
    return c;
}

Matrix mat_sub(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "mat_sub");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    require_finite(c.entries(), "mat_sub");
    return c;
}

Matrix scalar_mul(double s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    require_finite(c.entries(), "scalar_mul");
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Vector mat_vec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.dim()) {
        throw DimensionError("mat_vec: cannot apply " + a.shape() + " to a vector of dim " +
                             std::to_string(x.dim()));
    }
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double trace(const Matrix& a) {
    require_square(a, "trace");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

Matrix symmetrize(const Matrix& a) {
    require_square(a, "symmetrize");
    Matrix s(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        s(i, i) = a(i, i);
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

bool is_symmetric(const Matrix& a, double rel_tol) {
    if (!a.is_square()) return false;
    const double scale = std::max(1.0, norm_inf(a));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > rel_tol * scale) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Factorizations

Matrix solve_spd(const Matrix& a, const Matrix& b) {
    require_square(a, "solve_spd");
    if (a.rows() != b.rows()) {
        throw DimensionError("solve_spd: right-hand side " + b.shape() +
                             " does not match system " + a.shape());
    }
    if (!is_symmetric(a)) throw SpecificationError("solve_spd: matrix is not symmetric");

    const std::size_t n = a.rows();
    const double floor = kPivotTol * std::max(max_abs_diagonal(a), 1e-300);

    // a = L·D·Lᵀ with unit lower-triangular L; no square roots, so diagonal
    // systems solve exactly.
    Matrix l = Matrix::identity(n);
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) {
        double dj = a(j, j);
        for (std::size_t k = 0; k < j; ++k) dj -= l(j, k) * l(j, k) * d[k];
        if (!(dj > floor)) {
            throw SingularityError("solve_spd: non-positive pivot at index " + std::to_string(j),
                                   j);
        }
        d[j] = dj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k) * d[k];
            l(i, j) = s / dj;
        }
    }

    // L·Y = B, D·W = Y, Lᵀ·X = W, column by column.
    Matrix x(n, b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
            y[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = y[i] / d[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
            x(i, c) = s;
        }
    }
    require_finite(x.entries(), "solve_spd");
    return x;
}

Matrix psd_factor(const Matrix& a) {
    require_square(a, "psd_factor");
    if (!is_symmetric(a)) throw SpecificationError("psd_factor: matrix is not symmetric");

    const std::size_t n = a.rows();
    const double scale = max_abs_diagonal(a);
    const double tol = kPsdTol * scale;
    // Off-diagonal slack below a zero pivot; a PSD matrix with a zero
    // diagonal entry must have a zero row there.
    const double off_tol = std::sqrt(kPsdTol) * scale;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d > tol) {
            const double ljj = std::sqrt(d);
            l(j, j) = ljj;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
                l(i, j) = s / ljj;
            }
        } else if (d >= -tol) {
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
                if (std::abs(s) > off_tol) {
                    throw SpecificationError("psd_factor: matrix is not positive semidefinite "
                                             "(zero pivot with coupled remainder at index " +
                                             std::to_string(j) + ")");
                }
            }
        } else {
            throw SpecificationError(
                "psd_factor: matrix is not positive semidefinite (negative pivot at index " +
                std::to_string(j) + ")");
        }
    }
    return l;
}

bool is_psd(const Matrix& a) {
    try {
        psd_factor(a);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Vectors

Vector vec_add(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "vec_add");
    Vector c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vector vec_sub(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "vec_sub");
    Vector c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] - b[i];
    return c;
}

Vector vec_scale(double s, const Vector& a) {
    Vector c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) c[i] = s * a[i];
    return c;
}

double dot(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vector& a) {
    double m = 0.0;
    for (double v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

double norm_inf(const Matrix& a) {
    // Maximum absolute row sum.
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

Matrix outer(const Vector& a, const Vector& b) {
    Matrix m(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * b[j];
    require_finite(m.entries(), "outer");
    return m;
}

Matrix as_column(const Vector& a) {
    return Matrix(a.dim(), 1, std::vector<double>(a.entries().begin(), a.entries().end()));
}

std::ostream& operator<<(std::ostream& os, const Vector& v) {
    os << '[';
    for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? ", " : "") << v[i];
    return os << ']';
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

}  // namespace levykf
