#include "sparsezono/builders.hpp"

#include <stdexcept>

namespace sparsezono
{

namespace
{

Vector stack(const std::vector<Vector>& parts)
{
    Index n = 0;
    for (const Vector& p : parts)
        n += p.size();
    Vector out(n);
    Index pos = 0;
    for (const Vector& p : parts)
    {
        out.segment(pos, p.size()) = p;
        pos += p.size();
    }
    return out;
}

void check_square(const SparseMat& m, Index n, const std::string& what)
{
    if (m.rows() != n || m.cols() != n)
        throw DimensionError(what + " is " + m.shape() + ", expected " + std::to_string(n) + "x" +
                             std::to_string(n));
}

void check_length(const Vector& v, Index n, const std::string& what)
{
    if (v.size() != n)
        throw DimensionError(what + " has length " + std::to_string(v.size()) + ", expected " +
                             std::to_string(n));
}

/// [0 .. 0 A_map D_map -I] acting on the stacked (Z x D x T) vector.
SparseMat step_map(Index prefix, const SparseMat& A_map, const SparseMat& D_map, Index nt)
{
    const SparseMat lead(A_map.rows(), prefix);
    return hcat(std::vector<SparseMat>{lead, A_map, D_map,
                                       scale(SparseMat::identity(nt), -1.0)});
}

/// Entries of m replaced by 1, plus the full diagonal when square.
SparseMat pattern_of(const SparseMat& m, bool with_diagonal)
{
    std::vector<Triplet> t = m.to_triplets();
    for (Triplet& e : t)
        e.value = 1.0;
    if (with_diagonal)
        for (Index i = 0; i < std::min(m.rows(), m.cols()); ++i)
            t.push_back({i, i, 1.0});
    // duplicates sum to 2; values stay positive so nothing cancels
    return SparseMat::from_triplets(m.rows(), m.cols(), std::move(t));
}

}  // namespace

TrajectoryIndex::TrajectoryIndex(Index n_x, Index n_u, int N) : n_x_(n_x), n_u_(n_u), N_(N)
{
    if (n_x < 0 || n_u < 0 || N < 0)
        throw std::invalid_argument("TrajectoryIndex: sizes must be nonnegative");
}

Index TrajectoryIndex::state_offset(int k) const
{
    if (k < 0 || k > N_)
        throw std::out_of_range("TrajectoryIndex: state index " + std::to_string(k) +
                                " outside 0.." + std::to_string(N_));
    return k * (n_x_ + n_u_);
}

Index TrajectoryIndex::input_offset(int k) const
{
    if (k < 0 || k >= N_)
        throw std::out_of_range("TrajectoryIndex: input index " + std::to_string(k) +
                                " outside 0.." + std::to_string(N_ - 1));
    return k * (n_x_ + n_u_) + n_x_;
}

Trajectory extract_trajectory(const Vector& z, const TrajectoryIndex& idx)
{
    check_length(z, idx.dim(), "extract_trajectory: decision vector");
    Trajectory t;
    for (int k = 0; k <= idx.horizon(); ++k)
    {
        t.states.push_back(z.segment(idx.state_offset(k), idx.n_x()));
        if (k < idx.horizon())
            t.inputs.push_back(z.segment(idx.input_offset(k), idx.n_u()));
    }
    return t;
}

Vector stack_trajectory(const Trajectory& t, const TrajectoryIndex& idx)
{
    if (static_cast<int>(t.states.size()) != idx.horizon() + 1 ||
        static_cast<int>(t.inputs.size()) != idx.horizon())
        throw DimensionError("stack_trajectory: expected " + std::to_string(idx.horizon() + 1) +
                             " states and " + std::to_string(idx.horizon()) + " inputs");
    Vector z(idx.dim());
    for (int k = 0; k <= idx.horizon(); ++k)
    {
        check_length(t.states[static_cast<size_t>(k)], idx.n_x(), "stack_trajectory: state");
        z.segment(idx.state_offset(k), idx.n_x()) = t.states[static_cast<size_t>(k)];
        if (k < idx.horizon())
        {
            check_length(t.inputs[static_cast<size_t>(k)], idx.n_u(), "stack_trajectory: input");
            z.segment(idx.input_offset(k), idx.n_u()) = t.inputs[static_cast<size_t>(k)];
        }
    }
    return z;
}

void MpcSpec::validate() const
{
    sys.validate();
    const Index nx = sys.nx();
    if (N < 0)
        throw std::invalid_argument("MpcSpec: horizon must be nonnegative");
    check_length(x0, nx, "MpcSpec: x0");
    if (static_cast<int>(x_ref.size()) != N + 1)
        throw DimensionError("MpcSpec: expected " + std::to_string(N + 1) + " reference states, got " +
                             std::to_string(x_ref.size()));
    for (const Vector& r : x_ref)
        check_length(r, nx, "MpcSpec: reference state");
    check_square(Q, nx, "MpcSpec: Q");
    check_square(Q_N, nx, "MpcSpec: Q_N");
    check_square(R, sys.nu(), "MpcSpec: R");
    if (!state_sets.empty() && static_cast<int>(state_sets.size()) != N)
        throw DimensionError("MpcSpec: expected " + std::to_string(N) + " state sets, got " +
                             std::to_string(state_sets.size()));
    for (const ConZono& S : state_sets)
        if (S.n() != nx)
            throw DimensionError("MpcSpec: state set of dimension " + std::to_string(S.n()) +
                                 " for " + std::to_string(nx) + " states");
}

const ConZono& MpcSpec::state_set(int k) const
{
    return state_sets.empty() ? sys.S : state_sets.at(static_cast<size_t>(k - 1));
}

MpcProblem build_mpc(const MpcSpec& spec)
{
    spec.validate();
    const LinearSystem& sys = spec.sys;
    const Index nx = sys.nx();
    const Vector zero = Vector::Zero(nx);

    ConZono Z = ConZono::point(spec.x0);
    std::vector<SparseMat> P_blocks{spec.Q};
    std::vector<Vector> q_parts{-multiply(spec.Q, spec.x_ref[0])};
    for (int k = 0; k < spec.N; ++k)
    {
        const bool terminal = k + 1 == spec.N;
        const ConZono& S = spec.state_set(k + 1);
        const Index prefix = Z.n() - nx;
        const ConZono prod = cartesian_product(cartesian_product(Z, sys.U), S);
        Z = generalized_intersection(prod, ConZono::point(zero), step_map(prefix, sys.A, sys.B, nx));

        const SparseMat& Qk = terminal ? spec.Q_N : spec.Q;
        P_blocks.push_back(spec.R);
        P_blocks.push_back(Qk);
        q_parts.push_back(Vector::Zero(sys.nu()));
        q_parts.push_back(-multiply(Qk, spec.x_ref[static_cast<size_t>(k + 1)]));
    }

    MpcProblem out;
    out.qp.P = blkdiag(P_blocks);
    out.qp.q = stack(q_parts);
    out.qp.Z = std::move(Z);
    out.index = TrajectoryIndex(nx, sys.nu(), spec.N);
    return out;
}

void MheSpec::validate() const
{
    ms.sys.validate();
    const Index nx = ms.sys.nx();
    const Index ny = ms.C.rows();
    if (ms.C.cols() != nx)
        throw DimensionError("MheSpec: C is " + ms.C.shape() + " for " + std::to_string(nx) +
                             " states");
    if (W.n() != nx || V.n() != ny || prior.n() != nx)
        throw DimensionError("MheSpec: noise or prior set dimension does not match the system");
    check_length(prior_estimate, nx, "MheSpec: prior estimate");
    check_square(prior_inv_cov, nx, "MheSpec: prior inverse covariance");
    check_square(Q_inv, nx, "MheSpec: Q^-1");
    check_square(R_inv, ny, "MheSpec: R^-1");
    if (measurements.size() != inputs.size())
        throw DimensionError("MheSpec: " + std::to_string(inputs.size()) + " inputs but " +
                             std::to_string(measurements.size()) + " measurements");
    for (const Vector& u : inputs)
        check_length(u, ms.sys.nu(), "MheSpec: input");
    for (const Vector& y : measurements)
        check_length(y, ny, "MheSpec: measurement");
}

MheProblem build_mhe(const MheSpec& spec)
{
    spec.validate();
    const LinearSystem& sys = spec.ms.sys;
    const SparseMat& C = spec.ms.C;
    const Index nx = sys.nx();
    const SparseMat Ct = transpose(C);
    const SparseMat CtRC = multiply(Ct, multiply(spec.R_inv, C));
    const SparseMat neg_I_y = scale(SparseMat::identity(C.rows()), -1.0);

    ConZono Z = spec.prior;
    std::vector<SparseMat> P_blocks{spec.prior_inv_cov};
    std::vector<Vector> q_parts{-multiply(spec.prior_inv_cov, spec.prior_estimate)};
    for (int k = 0; k < spec.horizon(); ++k)
    {
        const Vector& u = spec.inputs[static_cast<size_t>(k)];
        const Vector& y = spec.measurements[static_cast<size_t>(k)];
        const ConZono consistent =
            generalized_intersection(sys.S, affine_map(neg_I_y, spec.V, y), C);
        const Index prefix = Z.n() - nx;
        const ConZono prod = cartesian_product(cartesian_product(Z, spec.W), consistent);
        Z = generalized_intersection(prod, ConZono::point(-multiply(sys.B, u)),
                                     step_map(prefix, sys.A, SparseMat::identity(nx), nx));

        P_blocks.push_back(spec.Q_inv);
        P_blocks.push_back(CtRC);
        q_parts.push_back(Vector::Zero(nx));
        q_parts.push_back(-multiply(Ct, multiply(spec.R_inv, y)));
    }

    MheProblem out;
    out.qp.P = blkdiag(P_blocks);
    out.qp.q = stack(q_parts);
    out.X0 = affine_map(selector(nx, Z.n(), Z.n() - nx), Z);
    out.qp.Z = std::move(Z);
    out.index = TrajectoryIndex(nx, nx, spec.horizon());
    return out;
}

DenseMatrix dlqr(const DenseMatrix& A, const DenseMatrix& B, const DenseMatrix& Q,
                 const DenseMatrix& R, int max_iter, double tol)
{
    const Index n = A.rows();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
        R.rows() != B.cols() || R.cols() != B.cols())
        throw DimensionError("dlqr: inconsistent matrix sizes");
    DenseMatrix P = Q;
    DenseMatrix K;
    for (int it = 0; it < max_iter; ++it)
    {
        const DenseMatrix BtP = B.transpose() * P;
        K = (R + BtP * B).ldlt().solve(BtP * A);
        DenseMatrix next = Q + A.transpose() * P * (A - B * K);
        next = 0.5 * (next + next.transpose());
        const double change = (next - P).cwiseAbs().maxCoeff();
        P = std::move(next);
        if (change <= tol * (1.0 + P.cwiseAbs().maxCoeff()))
        {
            const DenseMatrix BtPf = B.transpose() * P;
            return (R + BtPf * B).ldlt().solve(BtPf * A);
        }
    }
    throw std::runtime_error("dlqr: Riccati iteration did not converge in " +
                             std::to_string(max_iter) + " iterations");
}

bool SafetyReport::all_certified() const
{
    for (const SafetyStep& s : steps)
        if (!s.certified)
            return false;
    return true;
}

SafetyReport safety_verify(const LinearSystem& sys, const SparseMat& K,
                           const std::vector<Vector>& x_ref, const ConZono& W, const ConZono& X0,
                           const ConZono& O, const SparseMat& R_map, int N,
                           const AdmmSettings& s)
{
    sys.validate();
    const Index nx = sys.nx();
    if (K.rows() != sys.nu() || K.cols() != nx)
        throw DimensionError("safety_verify: gain K is " + K.shape() + ", expected " +
                             std::to_string(sys.nu()) + "x" + std::to_string(nx));
    if (static_cast<int>(x_ref.size()) < N)
        throw DimensionError("safety_verify: need " + std::to_string(N) + " reference states, got " +
                             std::to_string(x_ref.size()));
    if (W.n() != nx || X0.n() != nx)
        throw DimensionError("safety_verify: disturbance or initial set dimension mismatch");
    if (R_map.cols() != nx || R_map.rows() != O.n())
        throw DimensionError("safety_verify: map " + R_map.shape() + " does not take " +
                             std::to_string(nx) + " states to the unsafe set dimension " +
                             std::to_string(O.n()));

    const SparseMat Ac = add(sys.A, multiply(sys.B, K), -1.0);
    const SparseMat I = SparseMat::identity(nx);

    SafetyReport report;
    report.sets.push_back(X0);
    for (int k = 0; k < N; ++k)
    {
        const Vector u_ff = multiply(K, x_ref[static_cast<size_t>(k)]);
        report.sets.push_back(
            sparse_reach_step(report.sets.back(), Ac, W, I, sys.S, -multiply(sys.B, u_ff)));
    }

    for (const ConZono& X : report.sets)
    {
        SafetyStep step;
        try
        {
            const AdmmResult res = feasibility_solve(generalized_intersection(X, O, R_map), s);
            step.status = res.status;
            step.iterations = res.iterations;
            step.certified = res.status == AdmmStatus::infeasible;
        }
        catch (const ConstraintRankError&)
        {
            step.certified = false;
        }
        report.steps.push_back(step);
    }
    return report;
}

ConZono box_reduce(const ConZono& Z, const AdmmSettings& s)
{
    return interval_to_zono(bounding_box(Z, s));
}

ConZono reduce_prior(const ConZono& Z, int step, const AdmmSettings& s, int cadence)
{
    if (cadence < 1)
        throw std::invalid_argument("reduce_prior: cadence must be at least 1");
    if (step > 0 && step % cadence == 0)
        return box_reduce(Z, s);
    return Z;
}

Index kkt_structural_nnz(const ConZono& Z, const SparseMat& P)
{
    if (P.rows() != Z.n() || P.cols() != Z.n())
        throw DimensionError("kkt_structural_nnz: P is " + P.shape() + " for dimension " +
                             std::to_string(Z.n()));
    const SparseMat Gp = pattern_of(Z.G(), false);
    const SparseMat H = multiply(transpose(Gp), multiply(pattern_of(P, true), Gp));
    const SparseMat H_rho = add(H, SparseMat::identity(Z.nG()));
    return H_rho.nnz() + 2 * Z.A().nnz();
}

}  // namespace sparsezono
