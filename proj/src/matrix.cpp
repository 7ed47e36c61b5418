#include "matrix.h"

namespace ainf {

Matrix::Matrix(const Field& f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(f))
{
}

Matrix Matrix::identity(const Field& f, std::size_t n)
{
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = Scalar::one(f);
    return m;
}

Matrix Matrix::from_cols(const Field& f, std::size_t rows, const std::vector<Vec>& cols)
{
    Matrix m(f, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        m.set_col(j, cols[j]);
    return m;
}

Vec Matrix::col(std::size_t j) const
{
    Vec v(rows_, Scalar::zero(field_));
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = at(i, j);
    return v;
}

void Matrix::set_col(std::size_t j, const Vec& v)
{
    if (v.size() != rows_)
        throw internal_error("set_col: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        at(i, j) = v[i];
}

Matrix Matrix::operator+(const Matrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw internal_error("matrix addition: shape mismatch");
    Matrix m(field_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k)
        m.data_[k] = data_[k] + o.data_[k];
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw internal_error("matrix subtraction: shape mismatch");
    Matrix m(field_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k)
        m.data_[k] = data_[k] - o.data_[k];
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const
{
    if (cols_ != o.rows_)
        throw internal_error("matrix product: shape mismatch");
    Matrix m(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero())
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                m.at(i, j) += a * o.at(k, j);
        }
    return m;
}

Matrix Matrix::scaled(const Scalar& c) const
{
    Matrix m(field_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k)
        m.data_[k] = data_[k] * c;
    return m;
}

Vec Matrix::apply(const Vec& v) const
{
    if (v.size() != cols_)
        throw internal_error("matrix apply: size mismatch");
    Vec out(rows_, Scalar::zero(field_));
    for (std::size_t j = 0; j < cols_; ++j) {
        if (v[j].is_zero())
            continue;
        for (std::size_t i = 0; i < rows_; ++i)
            out[i] += at(i, j) * v[j];
    }
    return out;
}

bool Matrix::operator==(const Matrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        return false;
    for (std::size_t k = 0; k < data_.size(); ++k)
        if (!(data_[k] == o.data_[k]))
            return false;
    return true;
}

bool Matrix::is_zero() const
{
    for (const auto& x : data_)
        if (!x.is_zero())
            return false;
    return true;
}

Matrix Matrix::hstack(const Matrix& o) const
{
    if (rows_ != o.rows_)
        throw internal_error("hstack: row mismatch");
    Matrix m(field_, rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < o.cols_; ++j)
            m.at(i, cols_ + j) = o.at(i, j);
    }
    return m;
}

std::vector<std::size_t> Matrix::eliminate(Matrix& a, Matrix* aux)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols_ && row < a.rows_; ++col) {
        std::size_t sel = row;
        while (sel < a.rows_ && a.at(sel, col).is_zero())
            ++sel;
        if (sel == a.rows_)
            continue;
        /* Swap the found row up. */
        if (sel != row) {
            for (std::size_t j = 0; j < a.cols_; ++j)
                std::swap(a.at(sel, j), a.at(row, j));
            if (aux)
                for (std::size_t j = 0; j < aux->cols_; ++j)
                    std::swap(aux->at(sel, j), aux->at(row, j));
        }
        /* Normalize pivot to 1. */
        Scalar inv = a.at(row, col).inverse();
        for (std::size_t j = col; j < a.cols_; ++j)
            a.at(row, j) = a.at(row, j) * inv;
        if (aux)
            for (std::size_t j = 0; j < aux->cols_; ++j)
                aux->at(row, j) = aux->at(row, j) * inv;
        /* Clear the column everywhere else. */
        for (std::size_t i = 0; i < a.rows_; ++i) {
            if (i == row || a.at(i, col).is_zero())
                continue;
            Scalar c = a.at(i, col);
            for (std::size_t j = col; j < a.cols_; ++j)
                a.at(i, j) -= c * a.at(row, j);
            if (aux)
                for (std::size_t j = 0; j < aux->cols_; ++j)
                    aux->at(i, j) -= c * aux->at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

Rref Matrix::rref() const
{
    Rref r{*this, {}};
    r.pivots = eliminate(r.mat, nullptr);
    return r;
}

std::size_t Matrix::rank() const
{
    return rref().pivots.size();
}

std::vector<Vec> Matrix::kernel_basis() const
{
    Rref r = rref();
    std::vector<bool> is_pivot(cols_, false);
    for (std::size_t p : r.pivots)
        is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < cols_; ++j) {
        if (is_pivot[j])
            continue;
        Vec v(cols_, Scalar::zero(field_));
        v[j] = Scalar::one(field_);
        for (std::size_t rI = 0; rI < r.pivots.size(); ++rI)
            v[r.pivots[rI]] = -r.mat.at(rI, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Matrix> Matrix::solve(const Matrix& B) const
{
    if (B.rows_ != rows_)
        throw internal_error("solve: right-hand side row mismatch");
    Matrix a = *this;
    Matrix rhs = B;
    std::vector<std::size_t> pivots = eliminate(a, &rhs);
    /* Consistency: rows past the rank are zero in `a`; `rhs` must match. */
    for (std::size_t i = pivots.size(); i < rows_; ++i)
        for (std::size_t j = 0; j < rhs.cols_; ++j)
            if (!rhs.at(i, j).is_zero())
                return std::nullopt;
    Matrix x(field_, cols_, B.cols_);
    for (std::size_t rI = 0; rI < pivots.size(); ++rI)
        for (std::size_t j = 0; j < rhs.cols_; ++j)
            x.at(pivots[rI], j) = rhs.at(rI, j);
    return x;
}

std::optional<Vec> Matrix::solve(const Vec& b) const
{
    Matrix B = from_cols(field_, rows_, {b});
    auto x = solve(B);
    if (!x)
        return std::nullopt;
    return x->col(0);
}

Matrix Matrix::inverse() const
{
    if (rows_ != cols_)
        throw internal_error("inverse of non-square matrix");
    Matrix a = *this;
    Matrix aux = identity(field_, rows_);
    std::vector<std::size_t> pivots = eliminate(a, &aux);
    if (pivots.size() != rows_)
        throw internal_error("inverse of singular matrix");
    return aux;
}

}  // namespace ainf
