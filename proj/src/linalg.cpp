#include "tateshift/linalg.hpp"

#include <algorithm>
#include <cassert>

#include <fmt/format.h>

#include "tateshift/errors.hpp"

namespace tss {

Fp inverse_mod(Fp a, Fp p)
{
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = a % p;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1)
        throw InvalidArgument(fmt::format("{} is not invertible mod {}", a, p));
    return Fp(t < 0 ? t + p : t);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, Fp prime) : rows_(rows), cols_(cols), prime_(prime), data_(rows * cols, 0)
{
    if (prime < 2)
        throw InvalidArgument("matrix modulus must be at least 2");
}

Matrix Matrix::identity(std::size_t n, Fp prime)
{
    Matrix m(n, n, prime);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

void Matrix::push_row(std::span<const Fp> v)
{
    assert(v.size() == cols_);
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
}

void Matrix::swap_rows(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_, data_.begin() + b * cols_);
}

void Matrix::truncate_rows(std::size_t n)
{
    rows_ = std::min(rows_, n);
    data_.resize(rows_ * cols_);
}

void Matrix::reduce()
{
    for (auto& x : data_)
        x %= prime_;
}

bool Matrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [this](Fp x) { return x % prime_ == 0; });
}

Matrix Matrix::transposed() const
{
    Matrix t(cols_, rows_, prime_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const
{
    if (cols_ != rhs.rows_ || prime_ != rhs.prime_)
        throw InvalidArgument("matrix product: shape or modulus mismatch");
    Matrix out(rows_, rhs.cols_, prime_);
    const std::size_t n = rhs.cols_;
#pragma omp parallel for schedule(dynamic, 16) if (rows_ * cols_ * n > (1u << 18))
    for (std::size_t i = 0; i < rows_; ++i) {
        std::vector<std::uint64_t> acc(n, 0);
        for (std::size_t l = 0; l < cols_; ++l) {
            const std::uint64_t a = (*this)(i, l) % prime_;
            if (a == 0)
                continue;
            const Fp* src = &rhs.data_[l * n];
            for (std::size_t c = 0; c < n; ++c)
                acc[c] += a * src[c];
        }
        Fp* dst = &out.data_[i * n];
        for (std::size_t c = 0; c < n; ++c)
            dst[c] = Fp(acc[c] % prime_);
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || prime_ != rhs.prime_)
        throw InvalidArgument("matrix sum: shape or modulus mismatch");
    Matrix out(*this);
    for (std::size_t k = 0; k < data_.size(); ++k)
        out.data_[k] = (data_[k] % prime_ + rhs.data_[k] % prime_) % prime_;
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || prime_ != rhs.prime_)
        throw InvalidArgument("matrix difference: shape or modulus mismatch");
    Matrix out(*this);
    for (std::size_t k = 0; k < data_.size(); ++k)
        out.data_[k] = (data_[k] % prime_ + prime_ - rhs.data_[k] % prime_) % prime_;
    return out;
}

Matrix Matrix::power(unsigned exponent) const
{
    if (rows_ != cols_)
        throw InvalidArgument("matrix power of a non-square matrix");
    Matrix result = identity(rows_, prime_);
    for (unsigned e = 0; e < exponent; ++e)
        result = *this * result;
    return result;
}

bool operator==(const Matrix& a, const Matrix& b)
{
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.prime_ != b.prime_)
        return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
        if (a.data_[k] % a.prime_ != b.data_[k] % b.prime_)
            return false;
    return true;
}

std::size_t rank(const Matrix& m)
{
    return omp::rank(m);
}

KernelImage kernel_and_image(const Matrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    Matrix aug(rows, cols + rows, m.prime());
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy(m.row(r).begin(), m.row(r).end(), aug.row(r).begin());
        aug(r, cols + r) = 1;
    }
    Elimination e = omp::row_echelon(aug, cols);

    KernelImage out{Matrix(0, rows, m.prime()), Matrix(0, cols, m.prime()), e.pivot_columns};
    for (std::size_t r = 0; r < e.rank; ++r)
        out.image.push_row(aug.row(r).first(cols));
    for (std::size_t r = e.rank; r < rows; ++r)
        out.kernel.push_row(aug.row(r).subspan(cols));
    return out;
}

// ---------------------------------------------------------------------------

Subspace::Subspace(std::size_t ambient_dim, Fp prime) : ambient_(ambient_dim), prime_(prime), basis_(0, ambient_dim, prime) {}

Subspace::Subspace(const Matrix& echelon_rows, std::vector<std::size_t> pivots)
    : ambient_(echelon_rows.cols()), prime_(echelon_rows.prime()), basis_(0, echelon_rows.cols(), echelon_rows.prime()), pivots_(std::move(pivots))
{
    for (std::size_t r = 0; r < pivots_.size(); ++r)
        basis_.push_row(echelon_rows.row(r));
}

void Subspace::reduce(Vec& v) const
{
    const Fp p = prime_;
    for (std::size_t r = 0; r < pivots_.size(); ++r) {
        const Fp c = v[pivots_[r]] % p;
        if (c == 0)
            continue;
        const Fp f = p - c;
        auto row = basis_.row(r);
        for (std::size_t l = 0; l < ambient_; ++l)
            v[l] = (v[l] + f * row[l]) % p;
    }
}

bool Subspace::contains(std::span<const Fp> v) const
{
    Vec w(v.begin(), v.end());
    reduce(w);
    return std::all_of(w.begin(), w.end(), [](Fp x) { return x == 0; });
}

bool Subspace::insert(std::span<const Fp> v)
{
    Vec w(v.begin(), v.end());
    reduce(w);
    auto it = std::find_if(w.begin(), w.end(), [](Fp x) { return x != 0; });
    if (it == w.end())
        return false;
    const Fp inv = inverse_mod(*it, prime_);
    for (auto& x : w)
        x = Fp(std::uint64_t(x) * inv % prime_);
    basis_.push_row(w);
    pivots_.push_back(std::size_t(it - w.begin()));
    return true;
}

// ---------------------------------------------------------------------------

namespace {

void axpy(Vec& y, Fp a, const Vec& x, Fp p)
{
    if (a == 0)
        return;
    for (std::size_t l = 0; l < y.size(); ++l)
        y[l] = Fp((y[l] + std::uint64_t(a) * x[l]) % p);
}

}  // namespace

Subquotient::Subquotient(Subspace boundaries, const Matrix& candidates, std::size_t expected_dim)
    : boundaries_(std::move(boundaries)), reps_(0, boundaries_.ambient_dim(), boundaries_.prime())
{
    const Fp p = boundaries_.prime();
    std::vector<Vec> rows, tags;
    for (std::size_t c = 0; c < candidates.rows() && rows.size() < expected_dim; ++c) {
        Vec w(candidates.row(c).begin(), candidates.row(c).end());
        boundaries_.reduce(w);
        Vec tag(rows.size() + 1, 0);
        tag.back() = 1;
        for (std::size_t l = 0; l < rows.size(); ++l) {
            const Fp coeff = w[residual_pivots_[l]];
            if (coeff == 0)
                continue;
            axpy(w, p - coeff, rows[l], p);
            Vec padded = tags[l];
            padded.resize(tag.size(), 0);
            axpy(tag, p - coeff, padded, p);
        }
        auto it = std::find_if(w.begin(), w.end(), [](Fp x) { return x != 0; });
        if (it == w.end())
            continue;
        const Fp inv = inverse_mod(*it, p);
        for (auto& x : w)
            x = Fp(std::uint64_t(x) * inv % p);
        for (auto& x : tag)
            x = Fp(std::uint64_t(x) * inv % p);
        residual_pivots_.push_back(std::size_t(it - w.begin()));
        rows.push_back(std::move(w));
        tags.push_back(std::move(tag));
        reps_.push_row(candidates.row(c));
    }
    const std::size_t h = rows.size();
    residual_rows_ = Matrix(0, boundaries_.ambient_dim(), p);
    residual_tags_ = Matrix(0, h, p);
    for (std::size_t l = 0; l < h; ++l) {
        residual_rows_.push_row(rows[l]);
        tags[l].resize(h, 0);
        residual_tags_.push_row(tags[l]);
    }
}

Vec Subquotient::coordinates(std::span<const Fp> z) const
{
    const Fp p = boundaries_.prime();
    Vec w(z.begin(), z.end());
    for (auto& x : w)
        x %= p;
    boundaries_.reduce(w);
    Vec coords(dim(), 0);
    for (std::size_t l = 0; l < residual_pivots_.size(); ++l) {
        const Fp c = w[residual_pivots_[l]];
        if (c == 0)
            continue;
        auto row = residual_rows_.row(l);
        for (std::size_t k = 0; k < w.size(); ++k)
            w[k] = Fp((w[k] + std::uint64_t(p - c) * row[k]) % p);
        auto tag = residual_tags_.row(l);
        for (std::size_t k = 0; k < coords.size(); ++k)
            coords[k] = Fp((coords[k] + std::uint64_t(c) * tag[k]) % p);
    }
    if (std::any_of(w.begin(), w.end(), [](Fp x) { return x != 0; }))
        throw InconsistencyError("subquotient coordinates requested for a vector outside the cycle space");
    return coords;
}

}  // namespace tss
