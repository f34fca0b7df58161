#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "tateshift/errors.hpp"
#include "tateshift/linalg.hpp"

using namespace tss;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Fp p, std::mt19937& rng, double density = 1.0)
{
    std::uniform_int_distribution<Fp> dist(0, p - 1);
    std::bernoulli_distribution keep(density);
    Matrix m(rows, cols, p);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = keep(rng) ? dist(rng) : 0;
    return m;
}

// Oracle: count vectors x in F_p^rows with x M = 0 by enumeration.
std::size_t brute_kernel_count(const Matrix& m)
{
    const Fp p = m.prime();
    std::vector<Fp> x(m.rows(), 0);
    std::size_t count = 0;
    while (true) {
        bool zero = true;
        for (std::size_t c = 0; c < m.cols() && zero; ++c) {
            std::uint64_t acc = 0;
            for (std::size_t r = 0; r < m.rows(); ++r)
                acc += std::uint64_t(x[r]) * m(r, c);
            zero = acc % p == 0;
        }
        count += zero;
        std::size_t i = 0;
        while (i < x.size() && ++x[i] == p)
            x[i++] = 0;
        if (i == x.size())
            break;
    }
    return count;
}

std::size_t ipow(std::size_t b, std::size_t e)
{
    std::size_t r = 1;
    while (e--)
        r *= b;
    return r;
}

Vec vec_times(std::span<const Fp> x, const Matrix& m)
{
    Vec out(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out[c] = Fp((out[c] + std::uint64_t(x[r]) * m(r, c)) % m.prime());
    return out;
}

}  // namespace

TEST(Linalg, InverseMod)
{
    for (Fp p : {3u, 5u, 7u, 101u, 997u})
        for (Fp a = 1; a < p; ++a)
            EXPECT_EQ(std::uint64_t(a) * inverse_mod(a, p) % p, 1u);
}

TEST(Linalg, RankMatchesBruteForceKernel)
{
    std::mt19937 rng(7);
    for (Fp p : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
            const Matrix m = random_matrix(rows, cols, p, rng, 0.6);
            const std::size_t r = serial::rank(m);
            EXPECT_EQ(brute_kernel_count(m), ipow(p, rows - r));
            EXPECT_EQ(omp::rank(m), r);
        }
    }
}

TEST(Linalg, SerialAndParallelEchelonAgree)
{
    std::mt19937 rng(11);
    for (Fp p : {3u, 5u, 7u, 997u}) {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t rows = 20 + rng() % 80, cols = 20 + rng() % 80;
            Matrix a = random_matrix(rows, cols, p, rng, trial % 2 ? 0.1 : 1.0);
            Matrix b = a;
            const Elimination ea = serial::row_echelon(a, cols);
            const Elimination eb = omp::row_echelon(b, cols);
            EXPECT_EQ(ea.rank, eb.rank);
            EXPECT_EQ(ea.pivot_columns, eb.pivot_columns);
            EXPECT_TRUE(a == b);
        }
    }
}

TEST(Linalg, LargeParallelEchelonAgrees)
{
    std::mt19937 rng(3);
    Matrix a = random_matrix(400, 380, 5, rng);
    Matrix b = a;
    serial::row_echelon(a, 380);
    omp::row_echelon(b, 380);
    EXPECT_TRUE(a == b);
}

TEST(Linalg, MultiplyMatchesSerial)
{
    std::mt19937 rng(5);
    const Matrix a = random_matrix(17, 23, 7, rng, 0.5);
    const Matrix b = random_matrix(23, 9, 7, rng);
    EXPECT_TRUE(a * b == serial::multiply(a, b));
}

TEST(Linalg, PowerAndIdentity)
{
    std::mt19937 rng(9);
    const Matrix a = random_matrix(6, 6, 5, rng);
    EXPECT_TRUE(a.power(0) == Matrix::identity(6, 5));
    EXPECT_TRUE(a.power(3) == a * a * a);
    EXPECT_TRUE((a + a - a) == a);
}

TEST(Linalg, KernelAndImage)
{
    std::mt19937 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = random_matrix(12, 9, 5, rng, 0.4);
        const KernelImage ki = kernel_and_image(m);
        EXPECT_EQ(ki.kernel.rows() + ki.image.rows(), m.rows());
        EXPECT_EQ(ki.image.rows(), rank(m));
        EXPECT_EQ(rank(ki.kernel), ki.kernel.rows());
        for (std::size_t r = 0; r < ki.kernel.rows(); ++r) {
            const Vec z = vec_times(ki.kernel.row(r), m);
            EXPECT_TRUE(std::all_of(z.begin(), z.end(), [](Fp v) { return v == 0; }));
        }
        Subspace rowspace(m.cols(), 5);
        for (std::size_t r = 0; r < m.rows(); ++r)
            rowspace.insert(m.row(r));
        EXPECT_EQ(rowspace.dim(), ki.image.rows());
        for (std::size_t r = 0; r < ki.image.rows(); ++r)
            EXPECT_TRUE(rowspace.contains(ki.image.row(r)));
    }
}

TEST(Linalg, SubspaceInsertAndContains)
{
    Subspace s(3, 3);
    const Vec a{1, 2, 0}, b{0, 1, 1}, c{1, 0, 1};  // c = a + b (mod 3)
    EXPECT_TRUE(s.insert(a));
    EXPECT_TRUE(s.insert(b));
    EXPECT_FALSE(s.insert(c));
    EXPECT_TRUE(s.contains(c));
    EXPECT_FALSE(s.contains(Vec{0, 0, 1}));
    EXPECT_EQ(s.dim(), 2u);
}

TEST(Linalg, SubquotientCoordinates)
{
    // Z = span(e0, e1, e2), B = span(e0) in F_5^4.
    Subspace b(4, 5);
    b.insert(Vec{1, 0, 0, 0});
    Matrix z(0, 4, 5);
    z.push_row(Vec{1, 0, 0, 0});
    z.push_row(Vec{1, 1, 0, 0});
    z.push_row(Vec{0, 0, 1, 0});
    const Subquotient q(b, z, 2);
    ASSERT_EQ(q.dim(), 2u);
    // e0 is a boundary.
    const Vec zero = q.coordinates(Vec{3, 0, 0, 0});
    EXPECT_TRUE(std::all_of(zero.begin(), zero.end(), [](Fp v) { return v == 0; }));
    // Representatives map to unit vectors.
    for (std::size_t r = 0; r < q.dim(); ++r) {
        const Vec c = q.coordinates(q.representatives().row(r));
        for (std::size_t i = 0; i < c.size(); ++i)
            EXPECT_EQ(c[i], i == r ? 1u : 0u);
    }
    EXPECT_THROW(q.coordinates(Vec{0, 0, 0, 1}), InconsistencyError);
}
