#include "sparsezono/reachability.hpp"

#include <stdexcept>

namespace sparsezono
{

namespace
{

void check_initial(const ConZono& X0, const LinearSystem& sys, int N, const char* who)
{
    sys.validate();
    if (X0.n() != sys.nx())
        throw DimensionError(std::string(who) + ": initial set dimension " +
                             std::to_string(X0.n()) + " does not match state dimension " +
                             std::to_string(sys.nx()));
    if (N < 0)
        throw std::invalid_argument(std::string(who) + ": horizon must be nonnegative");
}

/// [0 .. 0 I] picking the last `rows` coordinates of a `total`-vector.
SparseMat tail_selector(Index rows, Index total)
{
    return selector(rows, total, total - rows);
}

}  // namespace

ConZono sparse_reach_step(const ConZono& X, const SparseMat& A_map, const ConZono& D,
                          const SparseMat& D_map, const ConZono& T, const Vector& target)
{
    if (A_map.cols() != X.n() || D_map.cols() != D.n() || A_map.rows() != T.n() ||
        D_map.rows() != T.n() || target.size() != T.n())
        throw DimensionError("sparse_reach_step: maps " + A_map.shape() + " and " + D_map.shape() +
                             " do not fit sets of dimension " + std::to_string(X.n()) + ", " +
                             std::to_string(D.n()) + " -> " + std::to_string(T.n()));
    const ConZono prod = cartesian_product(cartesian_product(X, D), T);
    const SparseMat R = hcat(hcat(A_map, D_map), scale(SparseMat::identity(T.n()), -1.0));
    const ConZono lifted = generalized_intersection(prod, ConZono::point(target), R);
    return affine_map(tail_selector(T.n(), prod.n()), lifted);
}

void LinearSystem::validate() const
{
    if (A.rows() != A.cols())
        throw DimensionError("LinearSystem: A must be square, got " + A.shape());
    if (B.rows() != A.rows())
        throw DimensionError("LinearSystem: A " + A.shape() + " and B " + B.shape() +
                             " disagree on state dimension");
    if (S.n() != nx())
        throw DimensionError("LinearSystem: state set dimension " + std::to_string(S.n()) +
                             " does not match A " + A.shape());
    if (U.n() != nu())
        throw DimensionError("LinearSystem: input set dimension " + std::to_string(U.n()) +
                             " does not match B " + B.shape());
}

std::string to_string(ReachMethod m)
{
    switch (m)
    {
        case ReachMethod::standard:
            return "standard";
        case ReachMethod::graph:
            return "graph";
        case ReachMethod::sparse:
            return "sparse";
    }
    return "unknown";
}

ReachMethod reach_method_from_string(const std::string& s)
{
    if (s == "standard")
        return ReachMethod::standard;
    if (s == "graph")
        return ReachMethod::graph;
    if (s == "sparse")
        return ReachMethod::sparse;
    throw std::invalid_argument("unknown reachability method '" + s + "'");
}

std::vector<ConZono> reach_standard(const ConZono& X0, const LinearSystem& sys, int N,
                                    bool unbounded_states)
{
    check_initial(X0, sys, N, "reach_standard");
    const ConZono BU = affine_map(sys.B, sys.U);
    std::vector<ConZono> out{X0};
    for (int k = 0; k < N; ++k)
    {
        ConZono next = minkowski_sum(affine_map(sys.A, out.back()), BU);
        if (!unbounded_states)
            next = intersection(next, sys.S);
        out.push_back(std::move(next));
    }
    return out;
}

std::vector<ConZono> reach_graph(const ConZono& X0, const LinearSystem& sys, int N)
{
    check_initial(X0, sys, N, "reach_graph");
    const Index nx = sys.nx();
    const Index nu = sys.nu();

    // graph of (x, u) -> A x + B u over S x U, with outputs constrained to S
    const SparseMat lift = vcat(SparseMat::identity(nx + nu), hcat(sys.A, sys.B));
    const ConZono psi = generalized_intersection(affine_map(lift, cartesian_product(sys.S, sys.U)),
                                                 sys.S, tail_selector(nx, 2 * nx + nu));
    const SparseMat in_sel = selector(nx + nu, 2 * nx + nu, 0);
    const SparseMat out_sel = tail_selector(nx, 2 * nx + nu);

    std::vector<ConZono> out{X0};
    for (int k = 0; k < N; ++k)
    {
        const ConZono joined =
            generalized_intersection(psi, cartesian_product(out.back(), sys.U), in_sel);
        out.push_back(affine_map(out_sel, joined));
    }
    return out;
}

std::vector<ConZono> reach_sparse(const ConZono& X0, const LinearSystem& sys, int N)
{
    check_initial(X0, sys, N, "reach_sparse");
    const Vector zero = Vector::Zero(sys.nx());
    std::vector<ConZono> out{X0};
    for (int k = 0; k < N; ++k)
        out.push_back(sparse_reach_step(out.back(), sys.A, sys.U, sys.B, sys.S, zero));
    return out;
}

std::vector<ConZono> reach(ReachMethod method, const ConZono& X0, const LinearSystem& sys, int N)
{
    switch (method)
    {
        case ReachMethod::standard:
            return reach_standard(X0, sys, N);
        case ReachMethod::graph:
            return reach_graph(X0, sys, N);
        case ReachMethod::sparse:
            return reach_sparse(X0, sys, N);
    }
    throw std::invalid_argument("reach: unknown method");
}

namespace
{

void check_svse(const ConZono& Xk, const MeasuredSystem& ms, const ConZono& W, const ConZono& V,
                const Vector& u, const Vector& y, const char* who)
{
    const LinearSystem& sys = ms.sys;
    sys.validate();
    const std::string w(who);
    if (Xk.n() != sys.nx() || W.n() != sys.nx())
        throw DimensionError(w + ": state set dimension " + std::to_string(Xk.n()) +
                             " or noise set dimension " + std::to_string(W.n()) +
                             " does not match state dimension " + std::to_string(sys.nx()));
    if (ms.C.cols() != sys.nx() || ms.C.rows() != y.size() || V.n() != y.size())
        throw DimensionError(w + ": measurement matrix " + ms.C.shape() + ", measurement length " +
                             std::to_string(y.size()) + " and noise set dimension " +
                             std::to_string(V.n()) + " are inconsistent");
    if (u.size() != sys.nu())
        throw DimensionError(w + ": input length " + std::to_string(u.size()) +
                             " does not match B " + sys.B.shape());
}

/// y (+) (-V).
ConZono measurement_set(const ConZono& V, const Vector& y)
{
    return affine_map(scale(SparseMat::identity(V.n()), -1.0), V, y);
}

}  // namespace

ConZono svse_step_standard(const ConZono& Xk, const MeasuredSystem& ms, const ConZono& W,
                           const ConZono& V, const Vector& u, const Vector& y_next)
{
    check_svse(Xk, ms, W, V, u, y_next, "svse_step_standard");
    const LinearSystem& sys = ms.sys;
    const ConZono predicted =
        minkowski_sum(affine_map(sys.A, Xk, multiply(sys.B, u)), W);
    const ConZono updated =
        generalized_intersection(predicted, measurement_set(V, y_next), ms.C);
    return intersection(updated, sys.S);
}

ConZono svse_step_sparse(const ConZono& Xk, const MeasuredSystem& ms, const ConZono& W,
                         const ConZono& V, const Vector& u, const Vector& y_next)
{
    check_svse(Xk, ms, W, V, u, y_next, "svse_step_sparse");
    const LinearSystem& sys = ms.sys;
    const ConZono consistent =
        generalized_intersection(sys.S, measurement_set(V, y_next), ms.C);
    return sparse_reach_step(Xk, sys.A, W, SparseMat::identity(sys.nx()), consistent,
                       -multiply(sys.B, u));
}

ComplexityPrediction predict_complexity(ReachMethod method, int N, const ComplexityDims& d)
{
    const Index n = N;
    ComplexityPrediction p;
    if (N <= 0)
    {
        p.n_G = d.n_G0;
        p.n_C = d.n_C0;
        p.nnz_G_bound = d.n_x * d.n_G0;
        p.nnz_A_bound = d.n_C0 * d.n_G0;
        return p;
    }

    switch (method)
    {
        case ReachMethod::standard:
            p.n_G = n * (d.n_Gs + d.n_Gu) + d.n_G0;
            p.n_C = n * (d.n_Cs + d.n_Cu + d.n_x) + d.n_C0;
            p.nnz_G_bound = n * d.n_x * d.n_Gu + d.n_x * d.n_G0;
            // sum over steps of nnz(A G_k) = nx (n_G0 + k n_Gu), k = 0..N-1
            p.nnz_A_bound = d.n_x * d.n_Gu * (n * (n - 1) / 2) +
                            n * ((d.n_x + d.n_Cu) * d.n_Gu + (d.n_x + d.n_Cs) * d.n_Gs +
                                 d.n_x * d.n_G0) +
                            d.n_C0 * d.n_G0;
            break;
        case ReachMethod::graph:
            p.n_G = 2 * n * (d.n_Gs + d.n_Gu) + d.n_G0;
            p.n_C = n * (2 * d.n_Cs + 2 * d.n_Cu + 2 * d.n_x + d.n_u) + d.n_C0;
            p.nnz_G_bound = d.n_x * (d.n_Gs + d.n_Gu);
            p.nnz_A_bound = n * ((3 * d.n_x + 2 * d.n_Cs) * d.n_Gs +
                                 (2 * d.n_u + 2 * d.n_Cu + d.n_x) * d.n_Gu) +
                            (n - 1) * d.n_x * (d.n_Gs + d.n_Gu) + d.n_x * d.n_G0 +
                            d.n_C0 * d.n_G0;
            break;
        case ReachMethod::sparse:
            p.n_G = n * (d.n_Gs + d.n_Gu) + d.n_G0;
            p.n_C = n * (d.n_Cs + d.n_Cu + d.n_x) + d.n_C0;
            p.nnz_G_bound = d.n_x * d.n_Gs;
            p.nnz_A_bound = n * ((2 * d.n_x + d.n_Cs) * d.n_Gs + (d.n_x + d.n_Cu) * d.n_Gu) +
                            d.n_x * (d.n_G0 - d.n_Gs) + d.n_C0 * d.n_G0;
            break;
    }
    return p;
}

ComplexityDims complexity_dims(const ConZono& X0, const LinearSystem& sys)
{
    ComplexityDims d;
    d.n_x = sys.nx();
    d.n_u = sys.nu();
    d.n_G0 = X0.nG();
    d.n_C0 = X0.nC();
    d.n_Gs = sys.S.nG();
    d.n_Cs = sys.S.nC();
    d.n_Gu = sys.U.nG();
    d.n_Cu = sys.U.nC();
    return d;
}

}  // namespace sparsezono
