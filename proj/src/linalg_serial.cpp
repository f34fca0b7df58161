#include "tateshift/linalg.hpp"

#include "tateshift/errors.hpp"

namespace tss::serial {

Elimination row_echelon(Matrix& m, std::size_t pivot_limit)
{
    const Fp p = m.prime();
    const std::size_t rows = m.rows(), cols = m.cols();
    pivot_limit = std::min(pivot_limit, cols);
    m.reduce();

    Elimination out;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < pivot_limit && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && m(piv, col) == 0)
            ++piv;
        if (piv == rows)
            continue;
        m.swap_rows(piv, rank);

        const Fp inv = inverse_mod(m(rank, col), p);
        for (std::size_t l = 0; l < cols; ++l)
            m(rank, l) = Fp(std::uint64_t(m(rank, l)) * inv % p);

        for (std::size_t j = rank + 1; j < rows; ++j) {
            const Fp c = m(j, col);
            if (c == 0)
                continue;
            for (std::size_t l = col; l < cols; ++l)
                m(j, l) = Fp((m(j, l) + std::uint64_t(p - c) * m(rank, l)) % p);
        }
        out.pivot_columns.push_back(col);
        ++rank;
    }
    out.rank = rank;
    return out;
}

std::size_t rank(Matrix m)
{
    return row_echelon(m, m.cols()).rank;
}

Matrix multiply(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows() || a.prime() != b.prime())
        throw InvalidArgument("matrix product: shape or modulus mismatch");
    const Fp p = a.prime();
    Matrix out(a.rows(), b.cols(), p);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t l = 0; l < a.cols(); ++l)
                acc = (acc + std::uint64_t(a(i, l) % p) * (b(l, j) % p)) % p;
            out(i, j) = Fp(acc);
        }
    return out;
}

}  // namespace tss::serial
