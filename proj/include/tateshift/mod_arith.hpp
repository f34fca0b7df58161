#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace tss {

using BigInt = boost::multiprecision::cpp_int;

/// Largest prime accepted anywhere in the library.
inline constexpr std::uint32_t kMaxSupportedPrime = 1000;

/// Deterministic trial-division primality test.
bool is_prime(std::uint64_t value);

/// An odd prime p together with the height n = p - 1 and q = p^n.
class HeightParams
{
public:
    /// Throws InvalidArgument unless p is an odd prime <= kMaxSupportedPrime.
    explicit HeightParams(std::int64_t p);

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    const BigInt& q() const { return q_; }
    /// n^2, the order of the unit eta.
    std::uint64_t n_squared() const { return std::uint64_t(n_) * n_; }

    friend bool operator==(const HeightParams& a, const HeightParams& b) { return a.p_ == b.p_; }

private:
    std::uint32_t p_;
    std::uint32_t n_;
    BigInt q_;
};

/// (p^n - 1)/n, computed exactly.
BigInt norm_quotient(const HeightParams& params);

/// ((p^n - 1)/n) mod n^2: the exponent of eta in det(tau).
std::uint64_t det_tau_exponent(const HeightParams& params);

struct DeltaExponent
{
    std::int64_t representative;  // -(n/2)(n-2)
    std::uint64_t residue;        // representative mod n^2, in [0, n^2)
};

/// The exponent k for which delta^k is fixed by the twisted action, i.e. the
/// unique solution mod n^2 of -p k + (p^n - 1)/n = 0. Throws
/// InconsistencyError if the closed form fails the congruence.
DeltaExponent invariant_delta_exponent(const HeightParams& params);

/// (n/2)(n-2) p + (p^n - 1)/n == 0 mod n^2, in exact integer arithmetic.
bool congruence_check(const HeightParams& params);

/// Least nonnegative residue of a mod m (m > 0).
std::int64_t floor_mod(std::int64_t a, std::int64_t m);

}  // namespace tss
