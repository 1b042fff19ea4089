#ifndef SPARSEZONO_REACHABILITY_HPP_
#define SPARSEZONO_REACHABILITY_HPP_

/**
 * @file reachability.hpp
 * @brief N-step reachable sets of x+ = A x + B u with state and input domain
 * sets, by three equivalent recursions that differ in sparsity.
 */

#include <string>
#include <vector>

#include "sparsezono/conzono.hpp"

namespace sparsezono
{

struct LinearSystem
{
    SparseMat A;  ///< n_x x n_x
    SparseMat B;  ///< n_x x n_u
    ConZono S;    ///< state domain set
    ConZono U;    ///< input domain set

    Index nx() const { return A.rows(); }
    Index nu() const { return B.cols(); }

    /// Throws DimensionError when the pieces disagree.
    void validate() const;
};

enum class ReachMethod
{
    standard,
    graph,
    sparse
};

std::string to_string(ReachMethod m);
ReachMethod reach_method_from_string(const std::string& s);

/**
 * @brief X_{k+1} = (A X_k (+) B U) cap S.
 *
 * With `unbounded_states` the intersection with S is skipped, which is the
 * zonotope-only variant for problems without state constraints.
 */
std::vector<ConZono> reach_standard(const ConZono& X0, const LinearSystem& sys, int N,
                                    bool unbounded_states = false);

/**
 * @brief Graph-of-function recursion.
 *
 * Psi = ([I 0; 0 I; A B](S x U)) cap_[0 0 I] S is built once; then
 * X_{k+1} = [0 0 I](Psi cap_[I 0 0; 0 I 0] (X_k x U)).
 */
std::vector<ConZono> reach_graph(const ConZono& X0, const LinearSystem& sys, int N);

/**
 * @brief One sparse update [0 0 I]((X x D x T) cap_[A_map D_map -I] {target}).
 *
 * Shared by the reachability, estimation and closed-loop recursions.
 */
ConZono sparse_reach_step(const ConZono& X, const SparseMat& A_map, const ConZono& D,
                          const SparseMat& D_map, const ConZono& T, const Vector& target);

/// X_{k+1} = [0 0 I]((X_k x U x S) cap_[A B -I] {0}).
std::vector<ConZono> reach_sparse(const ConZono& X0, const LinearSystem& sys, int N);

std::vector<ConZono> reach(ReachMethod method, const ConZono& X0, const LinearSystem& sys, int N);

/// Linear system with a measurement matrix, for set-valued estimation.
struct MeasuredSystem
{
    LinearSystem sys;
    SparseMat C;  ///< n_y x n_x
};

/// ((A X_k (+) B u (+) W) cap_C (y (+) (-V))) cap S.
ConZono svse_step_standard(const ConZono& Xk, const MeasuredSystem& ms, const ConZono& W,
                           const ConZono& V, const Vector& u, const Vector& y_next);

/// [0 0 I]((X_k x W x (S cap_C (y (+) (-V)))) cap_[A I -I] {-B u}).
ConZono svse_step_sparse(const ConZono& Xk, const MeasuredSystem& ms, const ConZono& W,
                         const ConZono& V, const Vector& u, const Vector& y_next);

struct ComplexityDims
{
    Index n_x = 0;
    Index n_u = 0;
    Index n_G0 = 0;
    Index n_C0 = 0;
    Index n_Gs = 0;
    Index n_Cs = 0;
    Index n_Gu = 0;
    Index n_Cu = 0;
};

struct ComplexityPrediction
{
    Index n_G = 0;
    Index n_C = 0;
    Index nnz_G_bound = 0;
    Index nnz_A_bound = 0;
};

/**
 * @brief Closed-form size of X_N for each method.
 *
 * n_G and n_C are exact. The nnz fields are upper bounds that are attained
 * when X_0, S, U and the system matrices are dense.
 */
ComplexityPrediction predict_complexity(ReachMethod method, int N, const ComplexityDims& dims);

/// Dimensions of a concrete problem, in the form predict_complexity expects.
ComplexityDims complexity_dims(const ConZono& X0, const LinearSystem& sys);

}  // namespace sparsezono

#endif  // SPARSEZONO_REACHABILITY_HPP_
