#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scalar.h"

namespace ainf {

using Vec = std::vector<Scalar>;

struct Rref;

/* Dense matrix over an exact field.  Row-major storage.  All elimination is
 * deterministic: pivots are chosen left-to-right, topmost nonzero row first,
 * so pivot column sets are the lexicographically earliest independent ones. */
class Matrix {
public:
    Matrix(const Field& f, std::size_t rows, std::size_t cols);

    static Matrix identity(const Field& f, std::size_t n);
    static Matrix from_cols(const Field& f, std::size_t rows, const std::vector<Vec>& cols);

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec col(std::size_t j) const;
    void set_col(std::size_t j, const Vec& v);

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix scaled(const Scalar& c) const;
    Vec apply(const Vec& v) const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }
    bool is_zero() const;

    Matrix hstack(const Matrix& o) const;

    Rref rref() const;
    std::size_t rank() const;

    /* Kernel basis vectors, one per free column, ordered by free column index.
     * Each vector has a 1 in its free column. */
    std::vector<Vec> kernel_basis() const;

    /* Solve this * x = b; free variables are set to zero.  Empty optional if
     * inconsistent. */
    std::optional<Vec> solve(const Vec& b) const;
    std::optional<Matrix> solve(const Matrix& B) const;

    Matrix inverse() const;

private:
    /* Reduce `a` to RREF in place, applying identical row operations to `aux`
     * (if non-null).  Returns the pivot columns. */
    static std::vector<std::size_t> eliminate(Matrix& a, Matrix* aux);

    Field field_;
    std::size_t rows_, cols_;
    std::vector<Scalar> data_;
};

/* Result of Gauss-Jordan elimination: the reduced matrix plus its pivot
 * columns in increasing order. */
struct Rref {
    Matrix mat;
    std::vector<std::size_t> pivots;
};

}  // namespace ainf
