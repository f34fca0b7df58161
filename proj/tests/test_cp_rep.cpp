#include <map>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tateshift/cp_rep.hpp"
#include "tateshift/errors.hpp"

using namespace tss;

namespace {

std::size_t binom(std::size_t n, std::size_t k)
{
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

CpModule module_from(const Matrix& action)
{
    CpModule m;
    m.p = action.prime();
    m.action = action;
    return m;
}

using Poly = std::map<Exponents, Fp>;

// Oracle: expand prod_i zeta^i(z_n) with zeta^i(z_n) = sum_j C(i,j) z_{n-j},
// multiplying polynomials held as exponent maps.
Poly naive_orbit_product(Fp p, std::size_t vars)
{
    Poly acc{{Exponents(vars, 0), 1}};
    for (std::size_t i = 0; i < p; ++i) {
        Poly next;
        for (const auto& [e, c] : acc) {
            for (std::size_t j = 0; j <= i && j < vars; ++j) {
                const Fp b = Fp(binom(i, j) % p);
                if (b == 0)
                    continue;
                Exponents f = e;
                ++f[j];
                next[f] = Fp((next[f] + std::uint64_t(c) * b) % p);
            }
        }
        acc.clear();
        for (const auto& [e, c] : next)
            if (c != 0)
                acc[e] = c;
    }
    return acc;
}

}  // namespace

TEST(CpRep, UkModuleExamples)
{
    const CpModule u50 = u_k_module(HeightParams(5), 0);
    EXPECT_EQ(u50.dim(), 5u);
    EXPECT_EQ(jordan_decompose(u50).blocks, (std::vector<std::size_t>{5}));

    const CpModule u54 = u_k_module(HeightParams(5), 4);
    EXPECT_EQ(u54.dim(), 1u);
    EXPECT_TRUE(u54.action == Matrix::identity(1, 5));

    const CpModule u31 = u_k_module(HeightParams(3), 1);
    EXPECT_EQ(u31.dim(), 2u);
    EXPECT_EQ(jordan_decompose(u31).blocks, (std::vector<std::size_t>{2}));
    EXPECT_EQ(u31.labels, (std::vector<std::string>{"z2", "z1"}));
    EXPECT_EQ(u31.vk_index, std::optional<std::size_t>(1));
}

TEST(CpRep, UkActionFormula)
{
    const CpModule u = u_k_module(HeightParams(7), 2);
    for (std::size_t r = 0; r < u.dim(); ++r)
        for (std::size_t c = 0; c < u.dim(); ++c)
            EXPECT_EQ(u.action(r, c), (c == r || c == r + 1) ? 1u : 0u);
    EXPECT_NO_THROW(u.validate());
}

TEST(CpRep, UkRejectsBadK)
{
    EXPECT_THROW(u_k_module(HeightParams(5), -1), InvalidArgument);
    EXPECT_THROW(u_k_module(HeightParams(5), 5), InvalidArgument);
}

TEST(CpRep, JordanExamples)
{
    // Regular representation: cyclic permutation of p points.
    Matrix perm(5, 5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        perm(i, (i + 1) % 5) = 1;
    EXPECT_EQ(jordan_decompose(module_from(perm)).blocks, (std::vector<std::size_t>{5}));
    EXPECT_EQ(jordan_decompose(module_from(Matrix::identity(1, 3))).blocks, (std::vector<std::size_t>{1}));
    // S^2 of the 2-dim block at p = 3.
    const CpModule s2 = symmetric_power(u_k_module(HeightParams(3), 1), 2);
    EXPECT_EQ(jordan_decompose(s2).blocks, (std::vector<std::size_t>{3}));
}

TEST(CpRep, JordanRejectsWrongOrder)
{
    Matrix a = Matrix::identity(2, 3);
    a(0, 0) = 2;
    EXPECT_THROW(jordan_decompose(module_from(a)), InvalidArgument);
}

TEST(CpRep, JordanOfRandomConjugates)
{
    std::mt19937 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const Fp p = trial % 2 ? 3 : 5;
        auto rm = fixtures::random_module(p, 20, rng);
        EXPECT_EQ(jordan_decompose(rm.module).blocks, rm.blocks);
    }
}

TEST(CpRep, SymmetricPowerExamples)
{
    const CpModule u = u_k_module(HeightParams(5), 2);
    EXPECT_TRUE(symmetric_power(u, 1).action == u.action);
    EXPECT_EQ(symmetric_power(u_k_module(HeightParams(3), 1), 2).dim(), 3u);
    const CpModule s3 = symmetric_power(u_k_module(HeightParams(5), 0), 3);
    EXPECT_EQ(s3.dim(), 35u);
    EXPECT_NO_THROW(s3.validate());
    EXPECT_EQ(jordan_decompose(s3).dim(), 35u);
}

TEST(CpRep, SymmetricPowerDimensionsAreBinomial)
{
    for (int k = 0; k <= 3; ++k) {
        SymmetricAlgebra alg(u_k_module(HeightParams(5), k));
        for (unsigned d = 0; d <= 8; ++d) {
            const std::size_t expect = binom(d + 4 - std::size_t(k), 4 - std::size_t(k));
            EXPECT_EQ(alg.power(d).dim(), expect);
            EXPECT_EQ(jordan_decompose(alg.power(d)).dim(), expect);
        }
    }
}

TEST(CpRep, SymmetricPowerResourceGuard)
{
    EXPECT_THROW(symmetric_power(u_k_module(HeightParams(7), 0), 12), ResourceLimit);
}

TEST(CpRep, TateExamples)
{
    Matrix perm(3, 3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        perm(i, (i + 1) % 3) = 1;
    TateDims free = tate_cohomology(module_from(perm));
    EXPECT_EQ(free.even_dim, 0u);
    EXPECT_EQ(free.odd_dim, 0u);
    TateDims triv = tate_cohomology(module_from(Matrix::identity(1, 5)));
    EXPECT_EQ(triv.even_dim, 1u);
    EXPECT_EQ(triv.odd_dim, 1u);
    for (std::size_t r = 1; r < 7; ++r) {
        TateDims v = tate_cohomology(module_from(fixtures::jordan_action({r}, 7)));
        EXPECT_EQ(v.even_dim, 1u) << r;
        EXPECT_EQ(v.odd_dim, 1u) << r;
    }
}

TEST(CpRep, TateCountsSmallBlocks)
{
    std::mt19937 rng(33);
    for (int trial = 0; trial < 25; ++trial) {
        auto rm = fixtures::random_module(5, 25, rng);
        const TateDims d = tate_cohomology(rm.module);
        const std::size_t small = jordan_decompose(rm.module).count_smaller_than(5);
        EXPECT_EQ(d.even_dim, small);
        EXPECT_EQ(d.odd_dim, small);
        EXPECT_EQ(d.even_basis.rows(), d.even_dim);
        EXPECT_EQ(d.odd_basis.rows(), d.odd_dim);
    }
}

TEST(CpRep, NormIsPowerOfAugmentation)
{
    const CpModule m = symmetric_power(u_k_module(HeightParams(5), 1), 3);
    EXPECT_TRUE(m.norm() == m.augmentation().power(4));
}

TEST(CpRep, FreenessExamples)
{
    EXPECT_TRUE(freeness_check(HeightParams(5), 0, 6));
    EXPECT_TRUE(freeness_check(HeightParams(3), 1, 2));
    EXPECT_FALSE(freeness_check(HeightParams(3), 0, 3));
}

TEST(CpRep, DegenerateKEqualsN)
{
    for (unsigned d = 1; d <= 4; ++d)
        EXPECT_FALSE(freeness_check(HeightParams(5), 4, d));
}

TEST(CpRep, OrbitProductP3K0)
{
    // z2 (z2 + z1)(z2 + 2 z1 + z0) over F_3.
    const Vec d = orbit_product(HeightParams(3), 0);
    SymmetricAlgebra alg(u_k_module(HeightParams(3), 0));
    const Poly oracle = naive_orbit_product(3, 3);
    ASSERT_EQ(d.size(), alg.monomials(3).size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto it = oracle.find(alg.monomials(3)[i]);
        EXPECT_EQ(d[i], it == oracle.end() ? 0u : it->second) << alg.label(3, i);
    }
    EXPECT_EQ(oracle.at(Exponents{3, 0, 0}), 1u);
    EXPECT_EQ(oracle.at(Exponents{2, 0, 1}), 1u);
    EXPECT_EQ(oracle.at(Exponents{1, 1, 1}), 1u);
}

TEST(CpRep, OrbitProductMatchesOracleAndIsInvariant)
{
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {5, 0}, {5, 2}, {7, 4}}) {
        const HeightParams h(p);
        const Vec d = orbit_product(h, k);
        SymmetricAlgebra alg(u_k_module(h, k));
        const Poly oracle = naive_orbit_product(Fp(p), alg.variables());
        for (std::size_t i = 0; i < d.size(); ++i) {
            auto it = oracle.find(alg.monomials(unsigned(p))[i]);
            EXPECT_EQ(d[i], it == oracle.end() ? 0u : it->second);
        }
        const Matrix& z = alg.power(unsigned(p)).action;
        Vec img(d.size(), 0);
        for (std::size_t r = 0; r < d.size(); ++r)
            for (std::size_t c = 0; c < d.size(); ++c)
                img[c] = Fp((img[c] + std::uint64_t(d[r]) * z(r, c)) % Fp(p));
        EXPECT_EQ(img, d);
    }
    EXPECT_FALSE(format_orbit_product(HeightParams(3), 0).empty());
}

TEST(CpRep, MultiplicationActionBetweenFreeModulesIsZero)
{
    // S_2 and S_5 of U_1 at p = 3 are free; the map S_2 -> S_3 has zero source.
    const TateMap m = multiplication_action(HeightParams(3), 1, 2);
    EXPECT_EQ(m.even.rows(), 0u);
    EXPECT_TRUE(m.is_zero());
}

TEST(CpRep, MultiplicationActionWellDefined)
{
    SymmetricTateTower tower(HeightParams(5), 2);
    for (unsigned m = 0; m < 12; ++m)
        EXPECT_TRUE(tower.multiplication_well_defined(m)) << m;
}

TEST(CpRep, CompositeOverKPlusOneDegreesVanishes)
{
    const HeightParams h(5);
    SymmetricTateTower tower(h, 1);
    tower.prepare(12);
    for (unsigned m = 0; m + 2 <= 12; ++m) {
        const TateMap a = tower.multiplication_action(m), b = tower.multiplication_action(m + 1);
        if (a.even.rows() && b.even.cols())
            EXPECT_TRUE((a.even * b.even).is_zero()) << m;
        if (a.odd.rows() && b.odd.cols())
            EXPECT_TRUE((a.odd * b.odd).is_zero()) << m;
    }
}

TEST(CpRep, SingleMultiplicationIsNotAlwaysZero)
{
    // z_k itself is not nilpotent on Tate cohomology: the check is not vacuous.
    SymmetricTateTower tower(HeightParams(5), 2);
    tower.prepare(10);
    bool some_nonzero = false;
    for (unsigned m = 0; m < 10; ++m)
        some_nonzero = some_nonzero || !tower.multiplication_action(m).is_zero();
    EXPECT_TRUE(some_nonzero);
}

TEST(CpRep, NilpotenceExamples)
{
    EXPECT_TRUE(vk_nilpotence_check(HeightParams(3), 1, 30));
    EXPECT_TRUE(vk_nilpotence_check(HeightParams(5), 3, 20));
    EXPECT_TRUE(vk_nilpotence_check(HeightParams(5), 2, 15));
    EXPECT_TRUE(vk_nilpotence_check(HeightParams(5), 0, 10));
}

TEST(CpRep, NilpotenceRejectsBadInput)
{
    EXPECT_THROW(vk_nilpotence_check(HeightParams(5), 4, 20), InvalidArgument);
    EXPECT_THROW(vk_nilpotence_check(HeightParams(5), 2, 2), InvalidArgument);
}

TEST(CpRep, FreenessPattern)
{
    const FreenessPatternResult r = freeness_pattern(HeightParams(5), 2, 20);
    EXPECT_TRUE(r.holds());
    EXPECT_EQ(r.checked_degrees, (std::vector<unsigned>{3, 4, 8, 9, 13, 14, 18, 19}));
}

TEST(CpRep, DefaultMaxDegree)
{
    EXPECT_EQ(default_max_degree(HeightParams(3), 1), 27u);
    EXPECT_EQ(default_max_degree(HeightParams(5), 1), 20u);
    EXPECT_EQ(default_max_degree(HeightParams(5), 2), 25u);
    EXPECT_EQ(default_max_degree(HeightParams(5), 3), 25u);
    EXPECT_LE(default_max_degree(HeightParams(7), 1), 14u);
}
