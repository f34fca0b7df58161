#include "tateshift/cp_rep.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>

#include <fmt/format.h>

#include "tateshift/errors.hpp"

namespace tss {

std::size_t max_module_dim()
{
    if (const char* env = std::getenv("TATESHIFT_MAX_DIM")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return std::size_t(v);
    }
    return kDefaultMaxModuleDim;
}

// ---------------------------------------------------------------------------
// CpModule

Matrix CpModule::augmentation() const
{
    return action - Matrix::identity(dim(), p);
}

Matrix CpModule::norm() const
{
    // Horner: N = 1 + zeta (1 + zeta (1 + ...)).
    Matrix n = Matrix::identity(dim(), p);
    for (Fp i = 1; i < p; ++i)
        n = Matrix::identity(dim(), p) + action * n;
    return n;
}

void CpModule::validate() const
{
    if (action.rows() != action.cols() || action.prime() != p)
        throw InvalidArgument("module action must be a square matrix over F_p");
    if (!(action.power(p) == Matrix::identity(dim(), p)))
        throw InvalidArgument(fmt::format("generator action does not have order dividing {}", p));
}

// ---------------------------------------------------------------------------
// Jordan profile and Tate cohomology

std::size_t JordanProfile::dim() const
{
    std::size_t d = 0;
    for (auto b : blocks)
        d += b;
    return d;
}

bool JordanProfile::is_free(Fp p) const
{
    return !blocks.empty() && std::all_of(blocks.begin(), blocks.end(), [p](std::size_t b) { return b == p; });
}

std::size_t JordanProfile::count_smaller_than(std::size_t size) const
{
    return std::size_t(std::count_if(blocks.begin(), blocks.end(), [size](std::size_t b) { return b < size; }));
}

JordanProfile jordan_decompose(const CpModule& m)
{
    const std::size_t dim = m.dim();
    const Fp p = m.p;
    if (m.action.rows() != dim || m.action.cols() != dim)
        throw InvalidArgument("module action must be square");

    // ranks[j] = rank (zeta - 1)^j
    const Matrix a = m.augmentation();
    std::vector<std::size_t> ranks{dim};
    Matrix power = Matrix::identity(dim, p);
    for (Fp j = 1; j <= p; ++j) {
        power = a * power;
        ranks.push_back(rank(power));
    }
    if (ranks[p] != 0)
        throw InvalidArgument(fmt::format("generator action does not have order dividing {}", p));

    // at_least[j] = number of blocks of size >= j
    JordanProfile out;
    for (std::size_t j = p; j >= 1; --j) {
        std::size_t at_least = ranks[j - 1] - ranks[j];
        std::size_t at_least_next = j < p ? ranks[j] - ranks[j + 1] : 0;
        out.blocks.insert(out.blocks.end(), at_least - at_least_next, j);
    }
    return out;
}

TateCohomology::TateCohomology(const CpModule& m) : dim_(m.dim())
{
    const KernelImage aug = kernel_and_image(m.augmentation());
    const KernelImage nrm = kernel_and_image(m.norm());
    rank_aug_ = aug.image.rows();
    rank_norm_ = nrm.image.rows();

    const std::size_t even_expected = aug.kernel.rows() - rank_norm_;
    const std::size_t odd_expected = nrm.kernel.rows() - rank_aug_;
    if (aug.kernel.rows() < rank_norm_ || nrm.kernel.rows() < rank_aug_)
        throw InconsistencyError("norm image exceeds augmentation kernel; not a C_p-module");

    even_ = std::make_unique<Subquotient>(Subspace(nrm.image, nrm.image_pivots), aug.kernel, even_expected);
    odd_ = std::make_unique<Subquotient>(Subspace(aug.image, aug.image_pivots), nrm.kernel, odd_expected);
    if (even_->dim() != even_expected || odd_->dim() != odd_expected)
        throw InconsistencyError("Tate subquotient has unexpected dimension");
}

TateDims TateCohomology::dims() const
{
    return TateDims{even_->dim(), odd_->dim(), even_->representatives(), odd_->representatives()};
}

TateDims tate_cohomology(const CpModule& m)
{
    return TateCohomology(m).dims();
}

// ---------------------------------------------------------------------------
// U_k and symmetric powers

CpModule u_k_module(const HeightParams& params, int k)
{
    const int n = int(params.n());
    if (k < 0 || k > n)
        throw InvalidArgument(fmt::format("k = {} outside [0, {}]", k, n));
    const std::size_t dim = std::size_t(n - k + 1);
    CpModule m{params.p(), Matrix(dim, dim, params.p()), {}, dim - 1};
    // Basis z_n, z_{n-1}, ..., z_k; zeta(z_i) = z_i + z_{i-1}, zeta(z_k) = z_k.
    for (std::size_t l = 0; l < dim; ++l) {
        m.action(l, l) = 1;
        if (l + 1 < dim)
            m.action(l, l + 1) = 1;
        m.labels.push_back(fmt::format("z{}", n - int(l)));
    }
    return m;
}

SymmetricAlgebra::SymmetricAlgebra(CpModule base) : base_(std::move(base))
{
    if (base_.labels.size() != base_.dim()) {
        base_.labels.clear();
        for (std::size_t i = 0; i < base_.dim(); ++i)
            base_.labels.push_back(fmt::format("x{}", i));
    }
}

std::size_t SymmetricAlgebra::dimension(std::size_t variables, unsigned degree)
{
    if (variables == 0)
        return degree == 0 ? 1 : 0;
    // C(degree + variables - 1, variables - 1), saturating.
    unsigned long long c = 1;
    const std::size_t r = variables - 1;
    for (std::size_t i = 1; i <= r; ++i) {
        c = c * (degree + i) / i;
        if (c > (1ull << 40))
            return std::size_t(1ull << 40);
    }
    return std::size_t(c);
}

void SymmetricAlgebra::ensure_monomials(unsigned degree)
{
    const std::size_t vars = variables();
    while (monomials_.size() <= degree) {
        const unsigned d = unsigned(monomials_.size());
        if (dimension(vars, d) > max_module_dim())
            throw ResourceLimit(fmt::format("S_{} has dimension {} above the cap {} (set TATESHIFT_MAX_DIM to raise it)", d,
                                            dimension(vars, d), max_module_dim()));
        std::vector<Exponents> list;
        Exponents e(vars, 0);
        // Lexicographically descending exponent vectors.
        auto rec = [&](auto&& self, std::size_t pos, unsigned remaining) -> void {
            if (vars == 0)
                return;
            if (pos + 1 == vars) {
                e[pos] = std::uint16_t(remaining);
                list.push_back(e);
                return;
            }
            for (int a = int(remaining); a >= 0; --a) {
                e[pos] = std::uint16_t(a);
                self(self, pos + 1, remaining - unsigned(a));
            }
            e[pos] = 0;
        };
        if (vars == 0 && d == 0)
            list.push_back(e);
        else
            rec(rec, 0, d);
        std::map<Exponents, std::size_t> lookup;
        for (std::size_t i = 0; i < list.size(); ++i)
            lookup.emplace(list[i], i);
        monomials_.push_back(std::move(list));
        lookup_.push_back(std::move(lookup));
    }
}

void SymmetricAlgebra::ensure_products(unsigned degree)
{
    ensure_monomials(degree + 1);
    const std::size_t vars = variables();
    while (products_.size() <= degree) {
        const unsigned d = unsigned(products_.size());
        std::vector<std::size_t> table(monomials_[d].size() * vars);
        for (std::size_t i = 0; i < monomials_[d].size(); ++i) {
            Exponents e = monomials_[d][i];
            for (std::size_t v = 0; v < vars; ++v) {
                ++e[v];
                table[i * vars + v] = lookup_[d + 1].at(e);
                --e[v];
            }
        }
        products_.push_back(std::move(table));
    }
}

const std::vector<Exponents>& SymmetricAlgebra::monomials(unsigned degree)
{
    ensure_monomials(degree);
    return monomials_[degree];
}

std::size_t SymmetricAlgebra::index_of(const Exponents& e, unsigned degree)
{
    ensure_monomials(degree);
    auto it = lookup_[degree].find(e);
    if (it == lookup_[degree].end())
        throw InvalidArgument("exponent vector is not a monomial of the requested degree");
    return it->second;
}

std::string SymmetricAlgebra::label(unsigned degree, std::size_t index)
{
    const Exponents& e = monomials(degree).at(index);
    std::string out;
    for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0)
            continue;
        if (!out.empty())
            out += ' ';
        out += base_.labels[v];
        if (e[v] > 1)
            out += fmt::format("^{}", e[v]);
    }
    return out.empty() ? "1" : out;
}

std::size_t SymmetricAlgebra::times_variable(unsigned degree, std::size_t index, std::size_t var)
{
    ensure_products(degree);
    return products_[degree][index * variables() + var];
}

Vec SymmetricAlgebra::multiply_linear(unsigned degree, std::span<const Fp> f, std::span<const Fp> linear)
{
    ensure_products(degree);
    const Fp p = base_.p;
    const std::size_t vars = variables();
    const auto& table = products_[degree];
    std::vector<std::uint64_t> acc(monomials_[degree + 1].size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Fp c = f[i] % p;
        if (c == 0)
            continue;
        for (std::size_t v = 0; v < vars; ++v)
            if (linear[v] % p != 0)
                acc[table[i * vars + v]] += std::uint64_t(c) * (linear[v] % p);
    }
    Vec out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        out[i] = Fp(acc[i] % p);
    return out;
}

const CpModule& SymmetricAlgebra::power(unsigned degree)
{
    const Fp p = base_.p;
    ensure_monomials(degree);
    if (powers_.empty()) {
        auto one = std::make_unique<CpModule>(CpModule{p, Matrix::identity(1, p), {"1"}, std::nullopt});
        powers_.push_back(std::move(one));
    }
    while (powers_.size() <= degree) {
        const unsigned d = unsigned(powers_.size());
        const auto& mons = monomials_[d];
        const CpModule& prev = *powers_[d - 1];
        auto mod = std::make_unique<CpModule>(CpModule{p, Matrix(mons.size(), mons.size(), p), {}, std::nullopt});
        for (std::size_t i = 0; i < mons.size(); ++i) {
            Exponents e = mons[i];
            const auto v = std::size_t(std::find_if(e.begin(), e.end(), [](std::uint16_t a) { return a > 0; }) - e.begin());
            --e[v];
            // zeta(x_v * rest) = zeta(x_v) * zeta(rest)
            Vec image = multiply_linear(d - 1, prev.action.row(index_of(e, d - 1)), base_.action.row(v));
            std::copy(image.begin(), image.end(), mod->action.row(i).begin());
            mod->labels.push_back(label(d, i));
        }
        powers_.push_back(std::move(mod));
    }
    return *powers_[degree];
}

std::string SymmetricAlgebra::format(unsigned degree, std::span<const Fp> f)
{
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Fp c = f[i] % base_.p;
        if (c == 0)
            continue;
        if (!out.empty())
            out += " + ";
        if (c != 1)
            out += fmt::format("{} ", c);
        out += label(degree, i);
    }
    return out.empty() ? "0" : out;
}

CpModule symmetric_power(const CpModule& m, unsigned degree)
{
    SymmetricAlgebra alg(m);
    return alg.power(degree);
}

bool freeness_check(const HeightParams& params, int k, unsigned degree)
{
    SymmetricAlgebra alg(u_k_module(params, k));
    return jordan_decompose(alg.power(degree)).is_free(params.p());
}

Vec orbit_product(const HeightParams& params, int k)
{
    const Fp p = params.p();
    SymmetricAlgebra alg(u_k_module(params, k));
    const CpModule& u = alg.base();

    Vec product{1};
    Matrix zeta_i = Matrix::identity(u.dim(), p);
    for (Fp i = 0; i < p; ++i) {
        product = alg.multiply_linear(i, product, zeta_i.row(0));  // zeta^i(z_n)
        zeta_i = zeta_i * u.action;
    }

    const Matrix& action = alg.power(p).action;
    Vec moved(product.size(), 0);
    for (std::size_t r = 0; r < product.size(); ++r)
        for (std::size_t c = 0; c < product.size(); ++c)
            moved[c] = Fp((moved[c] + std::uint64_t(product[r]) * action(r, c)) % p);
    if (moved != product)
        throw InconsistencyError("orbit product is not zeta-invariant");
    return product;
}

std::string format_orbit_product(const HeightParams& params, int k)
{
    SymmetricAlgebra alg(u_k_module(params, k));
    return alg.format(params.p(), orbit_product(params, k));
}

// ---------------------------------------------------------------------------
// Tate cohomology of S_*(U_k) and multiplication by z_k

SymmetricTateTower::SymmetricTateTower(const HeightParams& params, int k)
    : params_(params), k_(k), algebra_(u_k_module(params, k)), zk_var_(*algebra_.base().vk_index)
{
}

void SymmetricTateTower::prepare(unsigned max_degree)
{
    for (unsigned d = 0; d <= max_degree; ++d) {
        algebra_.power(d);
        if (d < max_degree)
            algebra_.times_variable(d, 0, 0);
    }
    if (tate_.size() <= max_degree)
        tate_.resize(max_degree + 1);

    std::vector<const CpModule*> modules;
    for (unsigned d = 0; d <= max_degree; ++d)
        modules.push_back(&algebra_.power(d));

    std::exception_ptr failure;
    // Largest degrees first: they dominate the cost.
#pragma omp parallel for schedule(dynamic, 1)
    for (int d = int(max_degree); d >= 0; --d) {
        if (tate_[std::size_t(d)])
            continue;
        try {
            tate_[std::size_t(d)] = std::make_unique<TateCohomology>(*modules[std::size_t(d)]);
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

const TateCohomology& SymmetricTateTower::tate(unsigned degree)
{
    if (tate_.size() <= degree || !tate_[degree])
        prepare(degree);
    return *tate_[degree];
}

Vec SymmetricTateTower::multiply_zk(unsigned degree, std::span<const Fp> f)
{
    Vec out(algebra_.monomials(degree + 1).size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0)
            out[algebra_.times_variable(degree, i, zk_var_)] = f[i];
    return out;
}

TateMap SymmetricTateTower::multiplication_action(unsigned m)
{
    const Fp p = params_.p();
    const TateCohomology& src = tate(m);
    const TateCohomology& tgt = tate(m + 1);
    auto induced = [&](const Subquotient& from, const Subquotient& to) {
        Matrix out(0, to.dim(), p);
        for (std::size_t r = 0; r < from.dim(); ++r)
            out.push_row(to.coordinates(multiply_zk(m, from.representatives().row(r))));
        return out;
    };
    return TateMap{induced(src.even(), tgt.even()), induced(src.odd(), tgt.odd())};
}

bool SymmetricTateTower::multiplication_well_defined(unsigned m)
{
    const TateCohomology& src = tate(m);
    const TateCohomology& tgt = tate(m + 1);
    auto check = [&](const Subquotient& from, const Subquotient& to) {
        const Matrix& b = from.boundaries().basis();
        for (std::size_t r = 0; r < b.rows(); ++r)
            if (!to.boundaries().contains(multiply_zk(m, b.row(r))))
                return false;
        try {
            for (std::size_t r = 0; r < from.dim(); ++r)
                to.coordinates(multiply_zk(m, from.representatives().row(r)));
        } catch (const InconsistencyError&) {
            return false;
        }
        return true;
    };
    return check(src.even(), tgt.even()) && check(src.odd(), tgt.odd());
}

TateMap multiplication_action(const HeightParams& params, int k, unsigned m)
{
    if (k < 0 || k > int(params.n()))
        throw InvalidArgument(fmt::format("k = {} outside [0, {}]", k, params.n()));
    SymmetricTateTower tower(params, k);
    return tower.multiplication_action(m);
}

NilpotenceResult vk_nilpotence(const HeightParams& params, int k, unsigned max_degree)
{
    const int n = int(params.n());
    if (k < 0 || k > n - 1)
        throw InvalidArgument(fmt::format("k = {} outside [0, {}]", k, n - 1));
    NilpotenceResult result{k, max_degree, true, {}};
    if (k == 0)
        return result;  // p-torsion: trivially true
    if (max_degree < unsigned(k + 1))
        throw InvalidArgument(fmt::format("max degree {} below k + 1 = {}", max_degree, k + 1));

    const Fp p = params.p();
    SymmetricTateTower tower(params, k);
    tower.prepare(max_degree);
    std::vector<TateMap> steps;
    for (unsigned m = 0; m < max_degree; ++m)
        steps.push_back(tower.multiplication_action(m));

    for (unsigned m = 0; m + unsigned(k) + 1 <= max_degree; ++m) {
        Matrix even = Matrix::identity(steps[m].even.rows(), p);
        Matrix odd = Matrix::identity(steps[m].odd.rows(), p);
        for (unsigned j = 0; j <= unsigned(k); ++j) {
            even = even * steps[m + j].even;
            odd = odd * steps[m + j].odd;
        }
        if (!even.is_zero() || !odd.is_zero()) {
            result.holds = false;
            result.failing_degrees.push_back(m);
        }
    }
    return result;
}

bool vk_nilpotence_check(const HeightParams& params, int k, unsigned max_degree)
{
    return vk_nilpotence(params, k, max_degree).holds;
}

FreenessPatternResult freeness_pattern(const HeightParams& params, int k, unsigned max_degree)
{
    const int n = int(params.n());
    if (k < 0 || k > n - 1)
        throw InvalidArgument(fmt::format("k = {} outside [0, {}]", k, n - 1));
    const unsigned p = params.p();
    FreenessPatternResult result{k, max_degree, {}, {}};
    for (unsigned deg = 0; deg <= max_degree; ++deg) {
        const unsigned r = deg % p;
        if (r >= unsigned(k + 1) && r <= p - 1)
            result.checked_degrees.push_back(deg);
    }
    SymmetricAlgebra alg(u_k_module(params, k));
    if (!result.checked_degrees.empty())
        alg.power(result.checked_degrees.back());
    std::vector<char> free(result.checked_degrees.size(), 0);
    std::vector<const CpModule*> modules;
    for (unsigned d : result.checked_degrees)
        modules.push_back(&alg.power(d));

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = int(modules.size()) - 1; i >= 0; --i) {
        try {
            free[std::size_t(i)] = jordan_decompose(*modules[std::size_t(i)]).is_free(p);
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    for (std::size_t i = 0; i < free.size(); ++i)
        if (!free[i])
            result.non_free_degrees.push_back(result.checked_degrees[i]);
    return result;
}

unsigned default_max_degree(const HeightParams& params, int k)
{
    const unsigned p = params.p();
    unsigned deg = p == 3 ? 3 * p * p : p == 5 ? p * p : 2 * p;
    const std::size_t vars = std::size_t(int(params.n()) - k + 1);
    while (deg > 0 && SymmetricAlgebra::dimension(vars, deg) > kDefaultDegreeBudgetDim)
        --deg;
    return deg;
}

}  // namespace tss
