#ifndef SPARSEZONO_LDLT_HPP_
#define SPARSEZONO_LDLT_HPP_

/**
 * @file ldlt.hpp
 * @brief Sparse LDL^T factorization for symmetric quasi-definite matrices.
 *
 * Up-looking factorization driven by the elimination tree, with 1x1 pivots in
 * the (optionally permuted) natural order. Quasi-definite matrices
 * [[H, A^T], [A, 0]] with H positive definite and A full row rank factor
 * without pivoting; a pivot smaller than 1e-12 * max|M| is reported as rank
 * deficiency.
 */

#include <optional>
#include <stdexcept>
#include <vector>

#include "sparsezono/sparse.hpp"

namespace sparsezono
{

/// Raised when a pivot falls below the threshold. `pivot_index` refers to the
/// row/column of the unpermuted input matrix.
class RankDeficientError : public std::runtime_error
{
    public:
        RankDeficientError(Index pivot_index, double pivot, const std::string& what);
        Index pivot_index() const { return pivot_index_; }
        double pivot() const { return pivot_; }

    private:
        Index pivot_index_;
        double pivot_;
};

enum class Ordering
{
    natural,
    min_degree
};

struct LdltOptions
{
    Ordering ordering = Ordering::natural;
    double pivot_rel_threshold = 1e-12;
};

/// P M P^T = L D L^T with L unit lower triangular (diagonal not stored).
class LdltFactor
{
    public:
        /// Strictly lower part of L, in the permuted ordering.
        const SparseMat& L() const { return L_; }
        const Vector& D() const { return D_; }

        /// perm[i] = original index placed at position i. Empty for natural order.
        const std::vector<Index>& perm() const { return perm_; }

        Index dim() const { return D_.size(); }

        /// Solves M x = rhs. Re-entrant: scratch space is per call.
        Vector solve(const Vector& rhs) const;

    private:
        friend LdltFactor ldlt_factorize(const SparseMat& m, const LdltOptions& opts);

        SparseMat L_;
        Vector D_;
        std::vector<Index> perm_;
};

/// Requires a square, symmetric matrix (full storage; only the upper triangle
/// is read). Throws DimensionError or RankDeficientError.
LdltFactor ldlt_factorize(const SparseMat& m, const LdltOptions& opts = {});

Vector ldlt_solve(const LdltFactor& f, const Vector& rhs);

/// Greedy minimum-degree ordering on the symmetric sparsity graph of m, with
/// zero-diagonal nodes moved (in order) behind the others.
std::vector<Index> minimum_degree_ordering(const SparseMat& m);

}  // namespace sparsezono

#endif  // SPARSEZONO_LDLT_HPP_
