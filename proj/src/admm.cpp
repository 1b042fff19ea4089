#include "sparsezono/admm.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

namespace sparsezono
{

void AdmmSettings::validate() const
{
    if (!(rho > 0.0))
        throw std::invalid_argument("AdmmSettings: rho must be positive");
    if (!(eps_primal > 0.0) || !(eps_dual > 0.0))
        throw std::invalid_argument("AdmmSettings: convergence tolerances must be positive");
    if (k_inf < 1)
        throw std::invalid_argument("AdmmSettings: k_inf must be at least 1");
    if (max_iter < 1)
        throw std::invalid_argument("AdmmSettings: max_iter must be at least 1");
    if (delta < 0.0)
        throw std::invalid_argument("AdmmSettings: delta must be nonnegative");
}

std::string to_string(AdmmStatus s)
{
    switch (s)
    {
        case AdmmStatus::converged:
            return "converged";
        case AdmmStatus::infeasible:
            return "infeasible";
        case AdmmStatus::iteration_limit:
            return "iteration-limit";
    }
    return "unknown";
}

namespace
{

std::string rank_message(Index row)
{
    return "constraint matrix is rank deficient near row " + std::to_string(row) +
           "; remove redundant constraints so that rank(A) equals the number of constraints";
}

}  // namespace

ReducedQp ReducedQp::make(const ConZono& Z, SparseMat P_tilde, Vector q_tilde, double constant,
                          const AdmmSettings& s)
{
    s.validate();
    const Index ng = Z.nG();
    const Index nc = Z.nC();
    if (ng == 0 && nc > 0)
        throw ConstraintRankError(rank_message(0));

    auto core = std::make_shared<Core>();
    core->G = Z.G();
    core->c = Z.c();
    core->A = Z.A();
    core->b = Z.b();
    core->rho = s.rho;
    core->P_tilde = std::move(P_tilde);

    const SparseMat H = add(core->P_tilde, scale(SparseMat::identity(ng), s.rho));
    const SparseMat At = transpose(core->A);
    core->M = vcat(hcat(H, At), hcat(core->A, SparseMat(nc, nc)));

    if (ng > 0)
    {
        try
        {
            core->kkt = ldlt_factorize(core->M, s.ldlt);
        }
        catch (const RankDeficientError& e)
        {
            throw ConstraintRankError("reduce_qp: " + rank_message(e.pivot_index() - ng));
        }
    }
    if (nc > 0)
    {
        try
        {
            core->aat = ldlt_factorize(multiply(core->A, At), s.ldlt);
        }
        catch (const RankDeficientError& e)
        {
            throw ConstraintRankError("reduce_qp: " + rank_message(e.pivot_index()));
        }
    }

    ReducedQp r;
    r.core_ = std::move(core);
    r.q_tilde_ = std::move(q_tilde);
    r.constant_ = constant;
    return r;
}

ReducedQp reduce_qp(const QpProblem& p, const AdmmSettings& s)
{
    const ConZono& Z = p.Z;
    if (p.P.rows() != Z.n() || p.P.cols() != Z.n() || p.q.size() != Z.n())
        throw DimensionError("reduce_qp: cost " + p.P.shape() + " with linear term of length " +
                             std::to_string(p.q.size()) + " does not match set dimension " +
                             std::to_string(Z.n()));
    if (!is_symmetric(p.P))
        throw std::invalid_argument("reduce_qp: cost matrix P is not symmetric");

    const SparseMat Gt = transpose(Z.G());
    SparseMat P_tilde = multiply(Gt, multiply(p.P, Z.G()));
    const Vector Pc = multiply(p.P, Z.c());
    Vector q_tilde = multiply(Gt, Vector(Pc + p.q));
    const double constant = 0.5 * Z.c().dot(Pc) + p.q.dot(Z.c());
    return ReducedQp::make(Z, std::move(P_tilde), std::move(q_tilde), constant, s);
}

ReducedQp reduce_feasibility(const ConZono& Z, const AdmmSettings& s)
{
    return ReducedQp::make(Z, SparseMat::identity(Z.nG()), Vector::Zero(Z.nG()), 0.0, s);
}

double ReducedQp::objective(const Vector& zeta) const
{
    return 0.5 * zeta.dot(multiply(core_->P_tilde, zeta)) + q_tilde_.dot(zeta) + constant_;
}

ReducedQp ReducedQp::with_linear_term(Vector q_tilde) const
{
    if (q_tilde.size() != nG())
        throw DimensionError("with_linear_term: length " + std::to_string(q_tilde.size()) +
                             " does not match generator count " + std::to_string(nG()));
    ReducedQp r;
    r.core_ = core_;
    r.q_tilde_ = std::move(q_tilde);
    r.constant_ = 0.0;
    return r;
}

Vector ReducedQp::kkt_solve(const Vector& rhs) const
{
    return core_->kkt->solve(rhs);
}

Vector ReducedQp::project_row_space(const Vector& w) const
{
    if (nC() == 0)
        return Vector::Zero(w.size());
    const Vector Aw = multiply(core_->A, w);
    return multiply_transposed(core_->A, core_->aat->solve(Aw));
}

std::optional<Vector> infeasibility_check(const ReducedQp& r, const Vector& xi, const Vector& zeta,
                                          double delta)
{
    if (r.nC() == 0)
        return std::nullopt;
    Vector v = r.project_row_space(zeta - xi);
    const Interval range = dot(v, unit_box(v.size()));
    const double vx = v.dot(xi);
    if (vx > range.hi() + delta || vx < range.lo() - delta)
        return v;
    return std::nullopt;
}

namespace
{

double residual_norm(const Vector& r, ConvergenceNorm norm)
{
    if (r.size() == 0)
        return 0.0;
    return norm == ConvergenceNorm::inf ? r.lpNorm<Eigen::Infinity>() : r.norm();
}

}  // namespace

AdmmResult admm_solve(const ReducedQp& r, const AdmmSettings& s,
                      const std::optional<AdmmWarmStart>& warm)
{
    s.validate();
    if (s.rho != r.rho())
        throw std::invalid_argument("admm_solve: settings rho differs from the factorized rho");

    const Index ng = r.nG();
    const Index nc = r.nC();
    AdmmResult res;
    res.xi = Vector::Zero(ng);
    res.zeta = Vector::Zero(ng);
    res.u = Vector::Zero(ng);
    res.lambda = Vector::Zero(nc);

    if (ng == 0)
    {
        res.status = AdmmStatus::converged;
        res.x_star = r.c();
        res.objective = r.objective(res.zeta);
        return res;
    }

    if (warm)
    {
        if (warm->xi.size() != ng || warm->zeta.size() != ng || warm->u.size() != ng)
            throw DimensionError("admm_solve: warm start length does not match generator count " +
                                 std::to_string(ng));
        res.xi = warm->xi;
        res.zeta = warm->zeta;
        res.u = warm->u;
    }

    const double scale_n = s.norm == ConvergenceNorm::inf ? 1.0 : std::sqrt(static_cast<double>(ng));
    const double tol_p = scale_n * s.eps_primal;
    const double tol_d = scale_n * s.eps_dual;

    Vector rhs(ng + nc);
    rhs.tail(nc) = r.b();
    Vector zeta_prev(ng);

    for (int k = 0; k < s.max_iter; ++k)
    {
        rhs.head(ng) = -r.q_tilde() + s.rho * (res.zeta - res.u);
        const Vector sol = r.kkt_solve(rhs);
        res.xi = sol.head(ng);
        res.lambda = sol.tail(nc);

        zeta_prev = res.zeta;
        res.zeta = (res.xi + res.u).cwiseMax(-1.0).cwiseMin(1.0);
        res.u += res.xi - res.zeta;
        res.iterations = k + 1;

        if (k % s.k_inf == 0)
        {
            res.certificate = infeasibility_check(r, res.xi, res.zeta, s.delta);
            if (res.certificate)
            {
                res.status = AdmmStatus::infeasible;
                break;
            }
        }

        const double rp = residual_norm(res.xi - res.zeta, s.norm);
        const double rd = residual_norm(s.rho * (res.zeta - zeta_prev), s.norm);
        res.history.push_back({rp, rd});
        if (rp < tol_p && rd < tol_d)
        {
            res.status = AdmmStatus::converged;
            break;
        }
    }

    res.x_star = multiply(r.G(), res.zeta) + r.c();
    res.objective = r.objective(res.zeta);
    return res;
}

SupportSolver::SupportSolver(const ConZono& Z, const AdmmSettings& s)
    : Z_(Z), s_(s),
      base_(reduce_qp({SparseMat(Z.n(), Z.n()), Vector::Zero(Z.n()), Z}, s))
{
}

AdmmResult SupportSolver::solve(const Vector& d) const
{
    if (d.size() != Z_.n())
        throw DimensionError("support: direction length " + std::to_string(d.size()) +
                             " does not match set dimension " + std::to_string(Z_.n()));
    // maximize d^T (G xi + c)  <=>  minimize -(G^T d)^T xi
    const ReducedQp r = base_.with_linear_term(-multiply_transposed(Z_.G(), d));
    return admm_solve(r, s_);
}

double SupportSolver::value(const Vector& d) const
{
    const AdmmResult res = solve(d);
    if (res.status == AdmmStatus::infeasible)
        throw EmptySetError("support: set is empty (infeasibility certificate found)");
    return d.dot(res.x_star);
}

double SupportSolver::upper_bound(const Vector& d) const
{
    const AdmmResult res = solve(d);
    if (res.status == AdmmStatus::infeasible)
        throw EmptySetError("bounding_box: set is empty (infeasibility certificate found)");
    const Vector reduced_cost =
        multiply_transposed(Z_.G(), d) - multiply_transposed(Z_.A(), res.lambda);
    return d.dot(Z_.c()) + res.lambda.dot(Z_.b()) + reduced_cost.lpNorm<1>();
}

double support(const ConZono& Z, const Vector& d, const AdmmSettings& s)
{
    return SupportSolver(Z, s).value(d);
}

IntervalBox bounding_box(const ConZono& Z, const AdmmSettings& s)
{
    const SupportSolver solver(Z, s);
    std::vector<Interval> iv;
    iv.reserve(static_cast<size_t>(Z.n()));
    for (Index i = 0; i < Z.n(); ++i)
    {
        Vector e = Vector::Zero(Z.n());
        e[i] = 1.0;
        const double hi = solver.upper_bound(e);
        const double lo = -solver.upper_bound(-e);
        iv.emplace_back(std::min(lo, hi), std::max(lo, hi));
    }
    return IntervalBox(std::move(iv));
}

AdmmResult feasibility_solve(const ConZono& Z, const AdmmSettings& s)
{
    return admm_solve(reduce_feasibility(Z, s), s);
}

bool is_empty(const ConZono& Z, const AdmmSettings& s)
{
    const AdmmResult res = feasibility_solve(Z, s);
    switch (res.status)
    {
        case AdmmStatus::infeasible:
            return true;
        case AdmmStatus::converged:
            return false;
        case AdmmStatus::iteration_limit:
            break;
    }
    throw IndeterminateError("is_empty: no certificate and no convergence after " +
                             std::to_string(res.iterations) + " iterations");
}

namespace
{

/**
 * Drops linearly dependent rows of [A | b]. Returns nullopt when the dropped
 * rows are inconsistent, i.e. A xi = b has no solution at all.
 */
std::optional<ConZono> drop_dependent_rows(const ConZono& Z)
{
    const DenseMatrix A = Z.A().to_dense();
    const Vector& b = Z.b();
    const Eigen::ColPivHouseholderQR<DenseMatrix> qr(A.transpose());
    const Index rank = qr.rank();

    std::vector<Index> keep;
    for (Index i = 0; i < rank; ++i)
        keep.push_back(qr.colsPermutation().indices()[i]);
    std::sort(keep.begin(), keep.end());

    DenseMatrix Ar(static_cast<Index>(keep.size()), A.cols());
    Vector br(static_cast<Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i)
    {
        Ar.row(static_cast<Index>(i)) = A.row(keep[i]);
        br[static_cast<Index>(i)] = b[keep[i]];
    }
    const Vector xi = Ar.completeOrthogonalDecomposition().solve(br);
    const double tol = 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>());
    if ((A * xi - b).lpNorm<Eigen::Infinity>() > tol)
        return std::nullopt;
    return ConZono(Z.G(), Z.c(), SparseMat::from_dense(Ar), br);
}

}  // namespace

bool contains_point(const ConZono& Z, const Vector& x, const AdmmSettings& s)
{
    if (x.size() != Z.n())
        throw DimensionError("contains_point: point length " + std::to_string(x.size()) +
                             " does not match set dimension " + std::to_string(Z.n()));
    const ConZono aug(Z.G(), Z.c(), vcat(Z.A(), Z.G()), concat(Z.b(), Vector(x - Z.c())));
    if (aug.nG() == 0)
        return (x - Z.c()).lpNorm<Eigen::Infinity>() == 0.0;
    try
    {
        return !is_empty(aug, s);
    }
    catch (const ConstraintRankError&)
    {
        const std::optional<ConZono> reduced = drop_dependent_rows(aug);
        if (!reduced)
            return false;
        return !is_empty(*reduced, s);
    }
}

}  // namespace sparsezono
