#ifndef SPARSEZONO_BUILDERS_HPP_
#define SPARSEZONO_BUILDERS_HPP_

/**
 * @file builders.hpp
 * @brief MPC, MHE and safety-verification problems assembled by sparse
 * reachability, plus helpers to read trajectories back out of a solution.
 */

#include <vector>

#include "sparsezono/admm.hpp"
#include "sparsezono/reachability.hpp"

namespace sparsezono
{

/**
 * @brief Offsets of the stacked decision vector z = [x_0 u_0 x_1 ... u_{N-1} x_N].
 *
 * For MHE the u blocks hold the process noise w instead.
 */
class TrajectoryIndex
{
    public:
        TrajectoryIndex() = default;
        TrajectoryIndex(Index n_x, Index n_u, int N);

        Index n_x() const { return n_x_; }
        Index n_u() const { return n_u_; }
        int horizon() const { return N_; }
        Index dim() const { return (N_ + 1) * n_x_ + N_ * n_u_; }

        Index state_offset(int k) const;
        Index input_offset(int k) const;

    private:
        Index n_x_ = 0;
        Index n_u_ = 0;
        int N_ = 0;
};

struct Trajectory
{
    std::vector<Vector> states;  ///< x_0 .. x_N
    std::vector<Vector> inputs;  ///< u_0 .. u_{N-1} (or w for MHE)
};

Trajectory extract_trajectory(const Vector& z, const TrajectoryIndex& idx);

/// Inverse of extract_trajectory.
Vector stack_trajectory(const Trajectory& t, const TrajectoryIndex& idx);

struct MpcSpec
{
    LinearSystem sys;
    Vector x0;
    std::vector<Vector> x_ref;  ///< x^r_0 .. x^r_N
    SparseMat Q;
    SparseMat R;
    SparseMat Q_N;
    int N = 0;
    /// S_1 .. S_N. Empty means sys.S at every step.
    std::vector<ConZono> state_sets;

    void validate() const;
    const ConZono& state_set(int k) const;  ///< S_k for k in 1..N
};

struct MpcProblem
{
    QpProblem qp;
    TrajectoryIndex index;
};

/**
 * @brief Feasible set by the sparse recursion from {x0}, with cost
 * sum (x_k - x^r_k)^T Q (x_k - x^r_k) / 2 + u_k^T R u_k / 2 and Q_N at the end.
 */
MpcProblem build_mpc(const MpcSpec& spec);

struct MheSpec
{
    MeasuredSystem ms;
    ConZono W;
    ConZono V;
    ConZono prior;  ///< set for x_{-N}
    Vector prior_estimate;
    SparseMat prior_inv_cov;
    SparseMat Q_inv;  ///< process noise weight
    SparseMat R_inv;  ///< measurement noise weight
    std::vector<Vector> inputs;        ///< u_{-N} .. u_{-1}
    std::vector<Vector> measurements;  ///< y_{-N+1} .. y_0

    int horizon() const { return static_cast<int>(inputs.size()); }
    void validate() const;
};

struct MheProblem
{
    QpProblem qp;
    TrajectoryIndex index;
    ConZono X0;  ///< set of current states, [0 .. 0 I] Z
};

/// Decision vector [x_{-N} w_{-N} ... w_{-1} x_0] over the combined SVSE set.
MheProblem build_mhe(const MheSpec& spec);

/// Discrete LQR gain by Riccati iteration; u = -K x.
DenseMatrix dlqr(const DenseMatrix& A, const DenseMatrix& B, const DenseMatrix& Q,
                 const DenseMatrix& R, int max_iter = 10000, double tol = 1e-12);

struct SafetyStep
{
    bool certified = false;
    AdmmStatus status = AdmmStatus::iteration_limit;
    int iterations = 0;
};

struct SafetyReport
{
    std::vector<ConZono> sets;  ///< X_0 .. X_N
    std::vector<SafetyStep> steps;

    bool all_certified() const;
};

/**
 * @brief Closed-loop reachable sets under u = -K (x - x^r_k) and an emptiness
 * check of X_k cap_{R_map} O at every step.
 *
 * x_ref holds x^r_0 .. x^r_{N-1}. A step is certified only when the solver
 * returns an infeasibility certificate.
 */
SafetyReport safety_verify(const LinearSystem& sys, const SparseMat& K,
                           const std::vector<Vector>& x_ref, const ConZono& W, const ConZono& X0,
                           const ConZono& O, const SparseMat& R_map, int N,
                           const AdmmSettings& s);

/// Bounding box of Z as a zonotope.
ConZono box_reduce(const ConZono& Z, const AdmmSettings& s);

/// box_reduce on every cadence-th step (step > 0), Z unchanged otherwise.
ConZono reduce_prior(const ConZono& Z, int step, const AdmmSettings& s, int cadence = 10);

/**
 * @brief nnz of M when P is stored with its full diagonal, so zero weights on
 * the diagonal still contribute structural entries to G^T P G.
 */
Index kkt_structural_nnz(const ConZono& Z, const SparseMat& P);

}  // namespace sparsezono

#endif  // SPARSEZONO_BUILDERS_HPP_
