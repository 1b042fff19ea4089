#ifndef SPARSEZONO_ADMM_HPP_
#define SPARSEZONO_ADMM_HPP_

/**
 * @file admm.hpp
 * @brief ADMM for convex QPs over constrained zonotopes, with an exact
 * infeasibility certificate.
 *
 * The problem min 1/2 x^T P x + q^T x s.t. x in <G, c, A, b> is solved in the
 * factor variables xi in [-1, 1]^nG. The equality-constrained xi-update uses
 * one LDL^T factorization of
 *
 *     M = [ P~ + rho I   A^T ]
 *         [ A            0   ],   P~ = G^T P G,
 *
 * and the z-update is a clamp onto the unit box.
 */

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsezono/conzono.hpp"
#include "sparsezono/interval.hpp"
#include "sparsezono/ldlt.hpp"

namespace sparsezono
{

/// Constraint matrix of the set is not full row rank.
class ConstraintRankError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// An infeasibility certificate was found where a nonempty set was required.
class EmptySetError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// The solver hit its iteration limit without converging or certifying.
class IndeterminateError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

enum class ConvergenceNorm
{
    l2_scaled,  ///< ||r||_2 < sqrt(nG) eps
    inf         ///< ||r||_inf < eps
};

struct AdmmSettings
{
    double rho = 1.0;
    double eps_primal = 0.01;
    double eps_dual = 0.01;
    int k_inf = 10;
    int max_iter = 5000;
    ConvergenceNorm norm = ConvergenceNorm::l2_scaled;
    /// Extra margin for the certificate test; 0 means strict exclusion.
    double delta = 0.0;
    LdltOptions ldlt;

    void validate() const;
};

struct QpProblem
{
    SparseMat P;
    Vector q;
    ConZono Z;
};

/**
 * @brief QP in factor space with M and A A^T already factorized.
 *
 * The factorizations are shared between copies, so with_linear_term() is cheap
 * and lets support and bounding-box loops reuse them.
 */
class ReducedQp
{
    public:
        const SparseMat& P_tilde() const { return core_->P_tilde; }
        const Vector& q_tilde() const { return q_tilde_; }
        const SparseMat& A() const { return core_->A; }
        const Vector& b() const { return core_->b; }
        const SparseMat& G() const { return core_->G; }
        const Vector& c() const { return core_->c; }
        const SparseMat& M() const { return core_->M; }
        double rho() const { return core_->rho; }
        Index nG() const { return core_->G.cols(); }
        Index nC() const { return core_->A.rows(); }

        /// Objective value of the original problem at x = G zeta + c.
        double objective(const Vector& zeta) const;

        /// Same factors and set, different q~ (constant term reset to 0).
        ReducedQp with_linear_term(Vector q_tilde) const;

        /// Solves M [xi; lambda] = rhs with the cached factor.
        Vector kkt_solve(const Vector& rhs) const;

        /// v = A^T (A A^T)^{-1} A w. Zero vector when there are no constraints.
        Vector project_row_space(const Vector& w) const;

    private:
        struct Core
        {
            SparseMat G;
            Vector c;
            SparseMat A;
            Vector b;
            SparseMat P_tilde;
            SparseMat M;
            double rho = 1.0;
            std::optional<LdltFactor> kkt;
            std::optional<LdltFactor> aat;
        };

        friend ReducedQp reduce_qp(const QpProblem& p, const AdmmSettings& s);
        friend ReducedQp reduce_feasibility(const ConZono& Z, const AdmmSettings& s);

        static ReducedQp make(const ConZono& Z, SparseMat P_tilde, Vector q_tilde,
                              double constant, const AdmmSettings& s);

        std::shared_ptr<const Core> core_;
        Vector q_tilde_;
        double constant_ = 0.0;
};

/// Forms P~, q~ and M and factorizes M and A A^T. Throws ConstraintRankError
/// when A is rank deficient.
ReducedQp reduce_qp(const QpProblem& p, const AdmmSettings& s);

/// Verification mode: P~ = I, q~ = 0 on the factors of Z.
ReducedQp reduce_feasibility(const ConZono& Z, const AdmmSettings& s);

enum class AdmmStatus
{
    converged,
    infeasible,
    iteration_limit
};

std::string to_string(AdmmStatus s);

struct ResidualRecord
{
    double primal;
    double dual;
};

struct AdmmResult
{
    AdmmStatus status = AdmmStatus::iteration_limit;
    Vector x_star;  ///< G zeta + c
    Vector xi;
    Vector zeta;
    Vector u;
    Vector lambda;  ///< equality multiplier from the last xi-update
    int iterations = 0;
    double objective = 0.0;
    std::optional<Vector> certificate;
    std::vector<ResidualRecord> history;
};

struct AdmmWarmStart
{
    Vector xi;
    Vector zeta;
    Vector u;
};

/// Iterates from (0, 0, 0) unless a warm start is given. settings.rho must
/// equal the rho used by reduce_qp.
AdmmResult admm_solve(const ReducedQp& r, const AdmmSettings& s,
                      const std::optional<AdmmWarmStart>& warm = std::nullopt);

/**
 * @brief v = A^T (A A^T)^{-1} A (zeta - xi); returned when v^T xi lies outside
 * v^T [-1, 1]^nG (widened by delta).
 */
std::optional<Vector> infeasibility_check(const ReducedQp& r, const Vector& xi, const Vector& zeta,
                                          double delta = 0.0);

/// Support queries against one set, sharing a single factorization.
class SupportSolver
{
    public:
        SupportSolver(const ConZono& Z, const AdmmSettings& s);

        /// Full solver output for max d^T z.
        AdmmResult solve(const Vector& d) const;

        /// d^T x* of the converged solution. Throws EmptySetError.
        double value(const Vector& d) const;

        /**
         * @brief Rigorous upper bound d^T c + lambda^T b + ||G^T d - A^T lambda||_1
         * from the multiplier estimate. Valid for any lambda, so it holds even
         * when the solver stops at the iteration limit.
         */
        double upper_bound(const Vector& d) const;

        const ReducedQp& reduced() const { return base_; }

    private:
        ConZono Z_;
        AdmmSettings s_;
        ReducedQp base_;
};

double support(const ConZono& Z, const Vector& d, const AdmmSettings& s);

/// Box containing Z, from 2n support bounds on one factorization.
IntervalBox bounding_box(const ConZono& Z, const AdmmSettings& s);

/// True iff a certificate fires. Throws IndeterminateError on iteration limit.
bool is_empty(const ConZono& Z, const AdmmSettings& s);

/// Same as is_empty but returns the solver output for inspection.
AdmmResult feasibility_solve(const ConZono& Z, const AdmmSettings& s);

/// Point membership by emptiness of <G, c, [A; G], [b; x - c]>.
bool contains_point(const ConZono& Z, const Vector& x, const AdmmSettings& s);

}  // namespace sparsezono

#endif  // SPARSEZONO_ADMM_HPP_
