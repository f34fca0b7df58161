#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tateshift/linalg.hpp"
#include "tateshift/mod_arith.hpp"

namespace tss {

/// Default cap on the dimension of any module built by cp_rep.
inline constexpr std::size_t kDefaultMaxModuleDim = 4000;
/// Dimension budget used to clip the default degree ranges of the checks.
inline constexpr std::size_t kDefaultDegreeBudgetDim = 2000;

/// The module-dimension cap: TATESHIFT_MAX_DIM if set, else kDefaultMaxModuleDim.
std::size_t max_module_dim();

/// A finite-dimensional F_p[C_p]-module given by the action of a fixed generator.
/// `action` follows the row convention of Matrix: row i is the image of e_i.
struct CpModule
{
    Fp p = 3;
    Matrix action;
    std::vector<std::string> labels;
    /// Basis index of z_k, the invariant vector matched with v_k (U_k and its powers only).
    std::optional<std::size_t> vk_index;

    std::size_t dim() const { return action.rows(); }
    /// zeta - 1
    Matrix augmentation() const;
    /// N = 1 + zeta + ... + zeta^{p-1}
    Matrix norm() const;
    /// Throws InvalidArgument unless action^p is the identity.
    void validate() const;
};

struct JordanProfile
{
    std::vector<std::size_t> blocks;  // sizes, descending

    std::size_t dim() const;
    /// Every block has size p.
    bool is_free(Fp p) const;
    std::size_t count_smaller_than(std::size_t size) const;
};

struct TateDims
{
    std::size_t even_dim = 0;
    std::size_t odd_dim = 0;
    Matrix even_basis;  // representatives of ker(zeta-1)/im(N)
    Matrix odd_basis;   // representatives of ker(N)/im(zeta-1)
};

/// Explicit Tate cohomology of a C_p-module: both subquotients with coordinates.
class TateCohomology
{
public:
    explicit TateCohomology(const CpModule& m);

    std::size_t module_dim() const { return dim_; }
    const Subquotient& even() const { return *even_; }
    const Subquotient& odd() const { return *odd_; }
    std::size_t rank_augmentation() const { return rank_aug_; }
    std::size_t rank_norm() const { return rank_norm_; }
    TateDims dims() const;

private:
    std::size_t dim_;
    std::size_t rank_aug_;
    std::size_t rank_norm_;
    std::unique_ptr<Subquotient> even_;
    std::unique_ptr<Subquotient> odd_;
};

CpModule u_k_module(const HeightParams& params, int k);
JordanProfile jordan_decompose(const CpModule& m);
TateDims tate_cohomology(const CpModule& m);

using Exponents = std::vector<std::uint16_t>;

/// Symmetric algebra S_*(V) on the lexicographically ordered monomial basis,
/// with the induced C_p-action. Degrees are built incrementally and cached.
class SymmetricAlgebra
{
public:
    explicit SymmetricAlgebra(CpModule base);

    const CpModule& base() const { return base_; }
    std::size_t variables() const { return base_.dim(); }
    static std::size_t dimension(std::size_t variables, unsigned degree);

    const std::vector<Exponents>& monomials(unsigned degree);
    std::size_t index_of(const Exponents& e, unsigned degree);
    std::string label(unsigned degree, std::size_t index);

    /// S_degree(V) as a C_p-module. Throws ResourceLimit above max_module_dim().
    const CpModule& power(unsigned degree);

    /// Product of f in S_degree with the linear form `linear` in S_1.
    Vec multiply_linear(unsigned degree, std::span<const Fp> f, std::span<const Fp> linear);
    /// Index in S_{degree+1} of monomial `index` of S_degree times variable `var`.
    std::size_t times_variable(unsigned degree, std::size_t index, std::size_t var);

    std::string format(unsigned degree, std::span<const Fp> f);

private:
    void ensure_monomials(unsigned degree);
    void ensure_products(unsigned degree);

    CpModule base_;
    std::vector<std::vector<Exponents>> monomials_;
    std::vector<std::map<Exponents, std::size_t>> lookup_;
    std::vector<std::vector<std::size_t>> products_;  // products_[d][idx * vars + var]
    std::vector<std::unique_ptr<CpModule>> powers_;
};

CpModule symmetric_power(const CpModule& m, unsigned degree);

/// Every Jordan block of S_degree(U_k) has size p.
bool freeness_check(const HeightParams& params, int k, unsigned degree);

/// d = prod_{i<p} zeta^i(z_n) in S_p(U_k), verified zeta-invariant.
Vec orbit_product(const HeightParams& params, int k);
std::string format_orbit_product(const HeightParams& params, int k);

/// Induced maps on Tate cohomology; rows are images of source representatives
/// in target coordinates.
struct TateMap
{
    Matrix even;
    Matrix odd;
    bool is_zero() const { return even.is_zero() && odd.is_zero(); }
};

/// Tate cohomology of every S_m(U_k), m <= some degree, with multiplication by z_k.
class SymmetricTateTower
{
public:
    SymmetricTateTower(const HeightParams& params, int k);

    int k() const { return k_; }
    SymmetricAlgebra& algebra() { return algebra_; }

    /// Builds Tate data for all degrees <= max_degree (degrees are processed in parallel).
    void prepare(unsigned max_degree);
    const TateCohomology& tate(unsigned degree);

    /// Image of f in S_degree under multiplication by z_k.
    Vec multiply_zk(unsigned degree, std::span<const Fp> f);
    /// z_k: H^s(S_m) -> H^s(S_{m+1}) for s even and odd.
    TateMap multiplication_action(unsigned m);
    /// z_k maps boundaries into boundaries and cycles into cycles.
    bool multiplication_well_defined(unsigned m);

private:
    HeightParams params_;
    int k_;
    SymmetricAlgebra algebra_;
    std::size_t zk_var_;
    std::vector<std::unique_ptr<TateCohomology>> tate_;
};

TateMap multiplication_action(const HeightParams& params, int k, unsigned m);

struct NilpotenceResult
{
    int k = 0;
    unsigned max_degree = 0;
    bool holds = true;
    std::vector<unsigned> failing_degrees;  // m with a nonzero composite out of S_m
};

/// z_k^{k+1} kills Tate cohomology of S_*(U_k) in all degrees m <= max_degree - (k+1).
NilpotenceResult vk_nilpotence(const HeightParams& params, int k, unsigned max_degree);
bool vk_nilpotence_check(const HeightParams& params, int k, unsigned max_degree);

struct FreenessPatternResult
{
    int k = 0;
    unsigned max_degree = 0;
    std::vector<unsigned> checked_degrees;
    std::vector<unsigned> non_free_degrees;
    bool holds() const { return non_free_degrees.empty(); }
};

/// S_{pt+r}(U_k) free for every k+1 <= r <= p-1 and pt+r <= max_degree.
FreenessPatternResult freeness_pattern(const HeightParams& params, int k, unsigned max_degree);

/// Default degree bound for the checks at (p, k): 3p^2 for p = 3, p^2 for
/// p = 5, 2p otherwise, clipped so that dim S_deg(U_k) <= kDefaultDegreeBudgetDim.
unsigned default_max_degree(const HeightParams& params, int k);

}  // namespace tss
