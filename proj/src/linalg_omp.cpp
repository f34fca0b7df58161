#include <cstdint>
#include <limits>

#include "tateshift/linalg.hpp"

namespace tss::omp {

// Entries of non-pivot rows are allowed to grow past p between reductions:
// every update adds at most (p-1)^2, so a full reduction is only needed once
// per `max_steps` pivots. The column of the current pivot is always read
// modulo p.
Elimination row_echelon(Matrix& m, std::size_t pivot_limit)
{
    const Fp p = m.prime();
    const std::size_t rows = m.rows(), cols = m.cols();
    pivot_limit = std::min(pivot_limit, cols);
    m.reduce();

    const std::uint64_t per_step = std::uint64_t(p - 1) * (p - 1);
    const std::uint64_t max_steps =
        per_step == 0 ? std::numeric_limits<std::uint64_t>::max() : (std::numeric_limits<Fp>::max() - (p - 1)) / per_step;
    std::uint64_t steps = 0;

    Elimination out;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < pivot_limit && rank < rows; ++col) {
        std::size_t piv = rows;
        for (std::size_t r = rank; r < rows; ++r) {
            m(r, col) %= p;
            if (m(r, col) != 0) {
                piv = r;
                break;
            }
        }
        if (piv == rows)
            continue;
        m.swap_rows(piv, rank);

        auto prow = m.row(rank);
        for (auto& x : prow)
            x %= p;
        const Fp inv = inverse_mod(prow[col], p);
        for (auto& x : prow)
            x = Fp(std::uint64_t(x) * inv % p);

        if (steps >= max_steps) {
            m.reduce();
            steps = 0;
        }
        const Fp* pr = prow.data();
        const std::size_t work = (rows - rank) * (cols - col);
#pragma omp parallel for schedule(static) if (work > (1u << 16))
        for (std::size_t j = rank + 1; j < rows; ++j) {
            Fp* row = &m(j, 0);
            const Fp c = row[col] % p;
            if (c == 0) {
                row[col] = 0;
                continue;
            }
            const Fp f = p - c;
            for (std::size_t l = col; l < cols; ++l)
                row[l] += f * pr[l];
        }
        ++steps;
        out.pivot_columns.push_back(col);
        ++rank;
    }
    m.reduce();
    out.rank = rank;
    return out;
}

std::size_t rank(Matrix m)
{
    return row_echelon(m, m.cols()).rank;
}

}  // namespace tss::omp
