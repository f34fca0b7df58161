#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tateshift/linalg.hpp"
#include "tateshift/mod_arith.hpp"

namespace tss {

enum class Group { Cp, F, G };

std::string_view to_string(Group g);
/// Accepts "Cp", "F", "G" (case-insensitive). Throws InvalidArgument otherwise.
Group parse_group(std::string_view name);

/// a^eps b^i delta^j for Cp, alpha^eps beta^i Delta^j for F and G.
struct MonomialClass
{
    int eps = 0;
    std::int64_t i = 0;
    std::int64_t j = 0;
    Group family = Group::Cp;

    friend auto operator<=>(const MonomialClass&, const MonomialClass&) = default;
};

struct Bidegree
{
    std::int64_t s = 0;
    std::int64_t t = 0;

    std::int64_t stem() const { return t - s; }
    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

/// |a| = (1,-2), |b| = (2,0), |delta| = (0,2p);
/// |alpha| = (1,2n), |beta| = (2,2pn), |Delta| = (0,2pn^2).
Bidegree bidegree(const MonomialClass& x, const HeightParams& params);

/// The unique class of `family` in bidegree `d`, if any.
std::optional<MonomialClass> class_at(Group family, const HeightParams& params, Bidegree d);

/// ASCII monomial: "a b^2 d^-1" (d = delta) or "A B^2 D^-1" (A = alpha, B = beta, D = Delta).
std::string label(const MonomialClass& x);

/// Cp-monomial restriction of an F/G class: alpha = delta a, beta = b delta^n,
/// Delta = delta^{n^2}. Identity on Cp classes.
MonomialClass restrict_to_cp(const MonomialClass& x, const HeightParams& params);

/// Translations of (i, j) under which all differentials are equivariant.
/// Generators: (1, n) and (0, p) for Cp (b delta^n and delta^p); (1, 0) and
/// (0, p) for F and G (beta and Delta^p). Fundamental domain: i = 0, 0 <= j < p.
class Lattice
{
public:
    struct Step
    {
        std::int64_t di;
        std::int64_t dj;
    };

    static Lattice for_group(Group g, const HeightParams& params);

    const std::array<Step, 2>& generators() const { return gens_; }
    MonomialClass reduce(const MonomialClass& x) const;
    MonomialClass translate(const MonomialClass& x, std::int64_t along_first, std::int64_t along_second) const;
    bool same_orbit(const MonomialClass& a, const MonomialClass& b) const;
    std::int64_t orbit_count_per_eps() const { return gens_[1].dj; }

private:
    std::array<Step, 2> gens_{};
};

struct Page
{
    Group group;
    HeightParams params;
    int r;
    Lattice lattice;
    int coeff_field_degree;                // n for Cp and F (F_{p^n}), 1 for G (F_p)
    std::vector<MonomialClass> survivors;  // sorted fundamental-domain representatives

    bool contains(const MonomialClass& x) const;
    bool empty() const { return survivors.empty(); }
};

std::vector<MonomialClass> fundamental_domain(Group g, const HeightParams& params);
Page e2_page(Group g, const HeightParams& params);
/// The same page viewed at a later index (no differentials in between).
Page advance(Page page, int r);

int short_differential_length(const HeightParams& params);  // 2n + 1
int long_differential_length(const HeightParams& params);   // 2n^2 + 1

/// Coefficient of d_{2n+1}(delta^m b^i) against a delta^{m+1} b^{i+n}:
/// the closed form (m + i) mod p, and the Leibniz route through the
/// factorisation delta^m b^i = (b delta^n)^i delta^{m - n i}.
Fp short_coefficient_closed_form(std::int64_t m, std::int64_t i, const HeightParams& params);
Fp short_coefficient_leibniz(std::int64_t m, std::int64_t i, const HeightParams& params);

struct DiffTarget
{
    MonomialClass target;
    Fp coeff;
};

/// d_r on a survivor of `page` (page.r must be 2n+1 or 2n^2+1); nullopt for cycles.
std::optional<DiffTarget> differential(const Page& page, const MonomialClass& x);

struct DiffPair
{
    MonomialClass source;
    MonomialClass target;
    Fp coeff;
};

struct DifferentialMap
{
    int r;
    std::vector<DiffPair> pairs;
};

/// d_r on every fundamental-domain survivor of the page.
DifferentialMap differential_map(const Page& page);

/// {group, p, r, lattice, fundamental_domain, differentials}, keys in fixed order.
nlohmann::ordered_json page_json(const Page& page, const DifferentialMap* diff = nullptr);

/// Homology of (page, diff): per-orbit kernel/image ranks. Throws
/// InconsistencyError on a bidegree-law or d∘d violation.
Page turn_page(const Page& page, const DifferentialMap& diff);

struct SsEdge
{
    int r;
    MonomialClass source;
    MonomialClass target;
    Fp coeff;

    friend bool operator==(const SsEdge&, const SsEdge&) = default;
};

enum class Fate { Survives, SupportsDifferential, HitByDifferential };

struct ClassFate
{
    MonomialClass cls;
    Fate fate = Fate::Survives;
    int r = 0;
    std::optional<MonomialClass> partner;
    Fp coeff = 0;
};

/// A fully recorded Tate spectral sequence over the fundamental domain of its
/// lattice, in either the original frame or a Pontryagin-dual frame.
class SpectralSequence
{
public:
    SpectralSequence(Group g, const HeightParams& params, std::vector<Page> pages, std::vector<SsEdge> edges);

    Group group() const { return group_; }
    const HeightParams& params() const { return params_; }
    const Lattice& lattice() const { return lattice_; }
    const std::vector<Page>& pages() const { return pages_; }
    const Page& einfty() const { return pages_.back(); }
    const std::vector<SsEdge>& edges() const { return edges_; }

    bool is_dual() const { return dual_; }
    /// Extra internal-degree shift of the dual frame: (s,t) -> (n-s-1, n+offset-t).
    std::int64_t dual_offset() const { return offset_; }

    Bidegree bidegree(const MonomialClass& x) const;
    std::optional<MonomialClass> class_at(Bidegree d) const;
    std::string label(const MonomialClass& x) const;

    std::optional<SsEdge> outgoing(const MonomialClass& x) const;
    std::optional<SsEdge> incoming(const MonomialClass& x) const;
    ClassFate fate(const MonomialClass& x) const;
    /// Fates of the E_2 fundamental domain.
    std::vector<ClassFate> fates() const;

    /// Is x a d_r-cycle (and present on E_r)?
    bool is_cycle(const MonomialClass& x, int r) const;

    friend SpectralSequence dualize(const SpectralSequence& ss, std::int64_t internal_offset);

private:
    void index_edges();
    void check_bidegree_law() const;

    Group group_;
    HeightParams params_;
    Lattice lattice_;
    std::vector<Page> pages_;
    std::vector<SsEdge> edges_;
    bool dual_ = false;
    std::int64_t offset_ = 0;
    std::map<MonomialClass, std::size_t> by_source_;
    std::map<MonomialClass, std::size_t> by_target_;
};

/// Applies d_{2n+1}, then d_{2n^2+1}; pages E_2, E_{2n+2}, E_{2n^2+2}.
SpectralSequence run_to_einfty(Group g, const HeightParams& params);

/// Relabel by (s,t) -> (n-s-1, n+offset-t) and reverse every differential.
/// offset = 0 is the Gross-Hopkins dual frame; offset = n the frame of its
/// n-fold suspension. Applying it twice with the same offset is the identity.
SpectralSequence dualize(const SpectralSequence& ss, std::int64_t internal_offset = 0);

/// Classes of the zero line of `ss` with j in [j_lo, j_hi), sorted by t.
std::vector<MonomialClass> zero_line_classes(const SpectralSequence& ss, std::int64_t j_lo, std::int64_t j_hi);

/// Truncation of a spectral sequence to a band of filtrations s_min <= s <= s_max.
class TruncatedView
{
public:
    TruncatedView(const SpectralSequence& ss, std::int64_t s_min, std::int64_t s_max, bool homological);

    const SpectralSequence& sequence() const { return ss_; }
    std::int64_t s_min() const { return s_min_; }
    std::int64_t s_max() const { return s_max_; }
    bool homological() const { return homological_; }
    bool empty_band() const { return s_min_ > s_max_; }

    bool contains(const MonomialClass& x) const;
    std::optional<SsEdge> outgoing(const MonomialClass& x) const;
    std::optional<SsEdge> incoming(const MonomialClass& x) const;
    bool survives(const MonomialClass& x) const;
    /// The s = 0 line is only approximate: the norm image is not modelled.
    bool exact_at(std::int64_t s) const { return s != 0; }
    /// Homological regrading (-s-1, t) for orbit views, identity otherwise.
    Bidegree regraded(const MonomialClass& x) const;
    TruncatedView intersect(std::int64_t s_min, std::int64_t s_max, bool homological) const;

private:
    SpectralSequence ss_;
    std::int64_t s_min_;
    std::int64_t s_max_;
    bool homological_;
};

inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;

TruncatedView hfpss_view(const SpectralSequence& ss);
TruncatedView hoss_view(const SpectralSequence& ss);
TruncatedView hfpss_view(const TruncatedView& v);
TruncatedView hoss_view(const TruncatedView& v);

/// k with k*gamma + lambda = 0 mod p, so that Delta^k y is a d_{2n+1}-cycle.
Fp find_cycle_generator(Fp lambda, Fp gamma, const HeightParams& params);

/// Rank-one module page generated by y = delta^k, k the invariant delta exponent.
struct TwistedPage
{
    Page base;
    std::string generator_label;
    std::int64_t delta_exponent;  // k
    Fp twist_lambda;              // d_{2n+1}(y) = lambda alpha beta^n Delta^{-1} y
    Fp gamma;                     // d_{2n+1}(Delta) = gamma alpha beta^n
    Bidegree generator_degree;    // (0, 2pk)

    /// Coefficient of d_{2n+1}(Delta^m y) against alpha beta^n Delta^{m-1} y.
    Fp short_coefficient(std::int64_t m) const;
};

/// Exponents j in [lo, hi] with -p j + (p^n-1)/n = 0 mod n^2 (delta^j y invariant).
std::vector<std::int64_t> invariant_delta_powers(const HeightParams& params, std::int64_t lo, std::int64_t hi);

/// The twist coefficient is read off the dual sequence: lambda is the unique
/// value making its zero-line d_{2n+1}-cycle a Delta-power multiple of y.
TwistedPage twisted_e2(Group g, const HeightParams& params);

}  // namespace tss
