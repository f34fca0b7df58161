#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tss {

using Fp = std::uint32_t;
using Vec = std::vector<Fp>;

Fp inverse_mod(Fp a, Fp p);

/// Dense matrix over the prime field F_p, row-major.
///
/// Throughout the library a linear map f: V -> W is stored with one row per
/// basis vector of V: row i holds the coordinates of f(e_i). Composition
/// "f then g" is therefore the product F * G, kernels are left kernels and
/// images are row spaces.
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, Fp prime);

    static Matrix identity(std::size_t n, Fp prime);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Fp prime() const { return prime_; }

    Fp operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Fp& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<Fp> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Fp> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    /// Append a row; v.size() must equal cols().
    void push_row(std::span<const Fp> v);
    void swap_rows(std::size_t a, std::size_t b);
    /// Keep only the first n rows.
    void truncate_rows(std::size_t n);

    /// Bring every entry into [0, p).
    void reduce();
    bool is_zero() const;
    Matrix transposed() const;

    /// this * rhs over F_p (OpenMP over rows; zero entries of *this are skipped).
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix power(unsigned exponent) const;

    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Fp prime_ = 2;
    std::vector<Fp> data_;
};

/// Result of forward elimination: the first `rank` rows of the reduced
/// matrix are a semi-echelon basis (pivot entry 1, zero at every earlier
/// pivot column) of the row space restricted to the pivot range.
struct Elimination
{
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
};

/// Reference kernels: textbook Gaussian elimination, reducing after every
/// operation. Kept for testing and benchmarking the parallel kernels.
namespace serial {
Elimination row_echelon(Matrix& m, std::size_t pivot_limit);
std::size_t rank(Matrix m);
Matrix multiply(const Matrix& a, const Matrix& b);
}  // namespace serial

/// Parallel kernels: delayed modular reduction in the inner loop and an
/// OpenMP-parallel row update. Produce the same reduced matrix as serial::.
namespace omp {
Elimination row_echelon(Matrix& m, std::size_t pivot_limit);
std::size_t rank(Matrix m);
}  // namespace omp

std::size_t rank(const Matrix& m);

/// Left kernel {x : x M = 0} and row space of M, both as row bases.
struct KernelImage
{
    Matrix kernel;  // rows: a basis of the left kernel
    Matrix image;   // rows: a semi-echelon basis of the row space
    std::vector<std::size_t> image_pivots;
};
KernelImage kernel_and_image(const Matrix& m);

/// A subspace of F_p^dim held as a semi-echelon basis.
class Subspace
{
public:
    Subspace(std::size_t ambient_dim, Fp prime);
    /// Adopt the first `pivots.size()` rows of an eliminated matrix.
    Subspace(const Matrix& echelon_rows, std::vector<std::size_t> pivots);

    std::size_t dim() const { return pivots_.size(); }
    std::size_t ambient_dim() const { return ambient_; }
    Fp prime() const { return prime_; }
    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Reduce v against the basis in place; the residual is zero iff v lies in the span.
    void reduce(Vec& v) const;
    bool contains(std::span<const Fp> v) const;
    /// Add v to the span; returns false if it was already contained.
    bool insert(std::span<const Fp> v);

private:
    std::size_t ambient_;
    Fp prime_;
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

/// Subquotient Z/B with B ⊆ Z ⊆ F_p^dim: chooses representatives of a basis
/// of Z/B and computes coordinates of elements of Z in that basis.
class Subquotient
{
public:
    /// `boundaries` spans B, `candidates` rows span Z. `expected_dim`, when
    /// known, stops the representative search early.
    Subquotient(Subspace boundaries, const Matrix& candidates, std::size_t expected_dim);

    std::size_t dim() const { return reps_.rows(); }
    const Matrix& representatives() const { return reps_; }
    const Subspace& boundaries() const { return boundaries_; }

    /// Coordinates of z + B. Throws InconsistencyError if z is not in Z
    /// (detected as a nonzero residual against B + span(reps)).
    Vec coordinates(std::span<const Fp> z) const;

private:
    Subspace boundaries_;
    Matrix reps_;
    // Semi-echelon basis of the residuals of reps_ modulo B, each row tagged
    // with its expansion in terms of reps_.
    Matrix residual_rows_;
    Matrix residual_tags_;
    std::vector<std::size_t> residual_pivots_;
};

}  // namespace tss
