#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tateshift/cp_rep.hpp"
#include "tateshift/linalg.hpp"

namespace tss::fixtures {

// Gauss-Jordan inverse; throws if singular.
inline Matrix invert(const Matrix& a)
{
    const std::size_t n = a.rows();
    const Fp p = a.prime();
    Matrix m = a, inv = Matrix::identity(n, p);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c) == 0)
            ++piv;
        if (piv == n)
            throw std::runtime_error("singular");
        m.swap_rows(c, piv);
        inv.swap_rows(c, piv);
        const Fp s = inverse_mod(m(c, c), p);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = Fp(std::uint64_t(m(c, j)) * s % p);
            inv(c, j) = Fp(std::uint64_t(inv(c, j)) * s % p);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m(r, c) == 0)
                continue;
            const std::uint64_t f = p - m(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) = Fp((m(r, j) + f * m(c, j)) % p);
                inv(r, j) = Fp((inv(r, j) + f * inv(c, j)) % p);
            }
        }
    }
    return inv;
}

// Direct sum of unipotent Jordan blocks of the given sizes.
inline Matrix jordan_action(const std::vector<std::size_t>& blocks, Fp p)
{
    std::size_t dim = 0;
    for (auto b : blocks)
        dim += b;
    Matrix a = Matrix::identity(dim, p);
    std::size_t at = 0;
    for (auto b : blocks) {
        for (std::size_t i = 0; i + 1 < b; ++i)
            a(at + i, at + i + 1) = 1;
        at += b;
    }
    return a;
}

struct RandomModule
{
    CpModule module;
    std::vector<std::size_t> blocks;  // descending
};

// Random block sizes in [1, p], total dimension <= max_dim, conjugated by a random invertible matrix.
inline RandomModule random_module(Fp p, std::size_t max_dim, std::mt19937& rng)
{
    std::uniform_int_distribution<std::size_t> total_dist(1, max_dim);
    const std::size_t target = total_dist(rng);
    std::vector<std::size_t> blocks;
    std::size_t dim = 0;
    std::uniform_int_distribution<std::size_t> block_dist(1, p);
    std::bernoulli_distribution all_free(0.3);
    const bool free_only = all_free(rng) && target >= p;
    while (dim < target) {
        std::size_t b = free_only ? p : block_dist(rng);
        if (dim + b > target) {
            if (free_only)
                break;
            b = target - dim;
        }
        blocks.push_back(b);
        dim += b;
    }
    std::sort(blocks.rbegin(), blocks.rend());

    const Matrix j = jordan_action(blocks, p);
    std::uniform_int_distribution<Fp> entry(0, p - 1);
    Matrix q(dim, dim, p);
    while (true) {
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                q(r, c) = entry(rng);
        if (rank(q) == dim)
            break;
    }
    CpModule m;
    m.p = p;
    m.action = q * j * invert(q);
    return {std::move(m), blocks};
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace tss::fixtures
