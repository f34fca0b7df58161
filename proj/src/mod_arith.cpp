#include "tateshift/mod_arith.hpp"

#include <boost/integer/mod_inverse.hpp>
#include <fmt/format.h>

#include "tateshift/errors.hpp"

namespace tss {

bool is_prime(std::uint64_t value)
{
    if (value < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= value; ++d)
        if (value % d == 0)
            return false;
    return true;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

HeightParams::HeightParams(std::int64_t p)
{
    if (p < 3 || p > std::int64_t(kMaxSupportedPrime) || !is_prime(std::uint64_t(p)))
        throw InvalidArgument(fmt::format("p = {} is not an odd prime in [3, {}]", p, kMaxSupportedPrime));
    p_ = std::uint32_t(p);
    n_ = p_ - 1;
    q_ = boost::multiprecision::pow(BigInt(p_), n_);
}

BigInt norm_quotient(const HeightParams& params)
{
    BigInt numerator = params.q() - 1;
    if (numerator % params.n() != 0)
        throw InconsistencyError("p^n - 1 not divisible by n");
    return numerator / params.n();
}

std::uint64_t det_tau_exponent(const HeightParams& params)
{
    BigInt r = norm_quotient(params) % params.n_squared();
    return r.convert_to<std::uint64_t>();
}

DeltaExponent invariant_delta_exponent(const HeightParams& params)
{
    const std::int64_t n = params.n();
    const std::int64_t nn = std::int64_t(params.n_squared());
    DeltaExponent k{-(n / 2) * (n - 2), 0};
    k.residue = std::uint64_t(floor_mod(k.representative, nn));

    BigInt lhs = BigInt(-std::int64_t(params.p())) * k.representative + norm_quotient(params);
    if (lhs % nn != 0)
        throw InconsistencyError(fmt::format("delta^{} is not invariant at p = {}", k.representative, params.p()));

    // gcd(p, n^2) = 1, so the solution is unique mod n^2.
    if (nn > 1) {
        std::int64_t p_inv = boost::integer::mod_inverse(std::int64_t(params.p()) % nn, nn);
        auto unique = std::uint64_t((det_tau_exponent(params) % std::uint64_t(nn)) * std::uint64_t(p_inv) % std::uint64_t(nn));
        if (unique != k.residue)
            throw InconsistencyError("invariant delta exponent is not the unique solution");
    }
    return k;
}

bool congruence_check(const HeightParams& params)
{
    const BigInt n = params.n();
    BigInt value = (n / 2) * (n - 2) * params.p() + norm_quotient(params);
    return value % (n * n) == 0;
}

}  // namespace tss
