#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sparsezono/admm.hpp"

using namespace sparsezono;

namespace
{

AdmmSettings tight()
{
    AdmmSettings s;
    s.eps_primal = 1e-9;
    s.eps_dual = 1e-9;
    s.max_iter = 200000;
    return s;
}

/// Instance sizes for the unit tests; the acceptance binary uses the full range.
oracle::QpShape small_shape()
{
    return {4, 8, 3};
}

}  // namespace

TEST_CASE("reduction of a box with identity cost")
{
    const ConZono box = ConZono::zonotope(SparseMat::identity(2), Vector::Zero(2));
    const ReducedQp r = reduce_qp({SparseMat::identity(2), Vector::Zero(2), box}, AdmmSettings{});
    CHECK(r.M().to_dense() == 2.0 * DenseMatrix::Identity(2, 2));
    CHECK(r.P_tilde().to_dense() == DenseMatrix::Identity(2, 2));
    CHECK(r.q_tilde().norm() == 0.0);
}

TEST_CASE("reduced cost and KKT matrix shapes")
{
    const ConZono hex = make_regular_polygon(6, 1.0, Vector::Zero(2));
    const ReducedQp r = reduce_qp({SparseMat::identity(2), Vector::Zero(2), hex}, AdmmSettings{});
    CHECK(r.M().rows() == 3);
    CHECK(r.M().nnz() <= 9);

    // one dense constraint row adds exactly 2 nG entries to M
    const ConZono lifted(hex.G(), hex.c(), SparseMat::from_dense(DenseMatrix::Ones(1, 3)),
                         Vector::Zero(1));
    const ReducedQp rl = reduce_qp({SparseMat::identity(2), Vector::Zero(2), lifted}, AdmmSettings{});
    CHECK(rl.M().rows() == 4);
    CHECK(rl.M().nnz() == r.M().nnz() + 6);

    // lifted form <[I 0], 0, [I -G], 0> of the same hexagon
    const SparseMat lift_G = hcat(SparseMat::identity(2), SparseMat(2, 3));
    const SparseMat lift_A = hcat(SparseMat::identity(2), scale(hex.G(), -1.0));
    const ConZono lifted_hex(lift_G, Vector::Zero(2), lift_A, Vector::Zero(2));
    const ReducedQp rh = reduce_qp({SparseMat::identity(2), Vector::Zero(2), lifted_hex}, AdmmSettings{});
    CHECK(rh.M().rows() == 7);
    CHECK(rh.M().nnz() <= 21);

    // q~ = G^T (P c + q)
    const Vector c = (Vector(2) << 1.0, -2.0).finished();
    const Vector q = (Vector(2) << 0.5, 0.25).finished();
    const DenseMatrix P = (DenseMatrix(2, 2) << 2, 1, 1, 3).finished();
    const ConZono Z = ConZono::zonotope(hex.G(), c);
    const ReducedQp rq = reduce_qp({SparseMat::from_dense(P), q, Z}, AdmmSettings{});
    const DenseMatrix Gd = hex.G().to_dense();
    CHECK((rq.q_tilde() - Gd.transpose() * (P * c + q)).norm() < 1e-14);
    CHECK((rq.P_tilde().to_dense() - Gd.transpose() * P * Gd).norm() < 1e-14);
    // objective at zeta equals the cost at x = G zeta + c
    const Vector zeta = (Vector(3) << 0.2, -0.4, 0.9).finished();
    const Vector x = Gd * zeta + c;
    CHECK(rq.objective(zeta) == doctest::Approx(0.5 * x.dot(P * x) + q.dot(x)));
}

TEST_CASE("projection onto the box")
{
    const ConZono box = ConZono::zonotope(SparseMat::identity(2), Vector::Zero(2));
    const Vector target = (Vector(2) << 2.0, 0.5).finished();
    AdmmSettings s = tight();
    const ReducedQp r = reduce_qp({SparseMat::identity(2), Vector(-target), box}, s);
    const AdmmResult res = admm_solve(r, s);
    REQUIRE(res.status == AdmmStatus::converged);
    CHECK(res.x_star[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(res.x_star[1] == doctest::Approx(0.5).epsilon(1e-7));

    // default tolerances land within a few eps
    const AdmmResult loose = admm_solve(reduce_qp({SparseMat::identity(2), Vector(-target), box},
                                                  AdmmSettings{}),
                                        AdmmSettings{});
    CHECK(loose.status == AdmmStatus::converged);
    CHECK((loose.x_star - res.x_star).norm() < 0.05);
}

TEST_CASE("nearest point of a shifted box")
{
    const ConZono box = ConZono::zonotope(SparseMat::identity(2), (Vector(2) << 2.0, 0.0).finished());
    const AdmmSettings s;
    const AdmmResult res = admm_solve(reduce_qp({SparseMat::identity(2), Vector::Zero(2), box}, s), s);
    REQUIRE(res.status == AdmmStatus::converged);
    CHECK(res.x_star[0] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(std::abs(res.x_star[1]) <= 1e-2);
}

TEST_CASE("support examples")
{
    const AdmmSettings s;
    const ConZono box = ConZono::zonotope(SparseMat::identity(2), Vector::Zero(2));
    CHECK(support(box, Vector::Ones(2), s) == doctest::Approx(2.0).epsilon(2e-2));
    const ConZono hex = make_regular_polygon(6, 1.0, Vector::Zero(2));
    CHECK(support(hex, (Vector(2) << 0.0, 1.0).finished(), s) == doctest::Approx(1.0).epsilon(2e-2));
    const auto interval = [](double lo, double hi) {
        return ConZono::zonotope(SparseMat::from_dense(DenseMatrix::Constant(1, 1, 0.5 * (hi - lo))),
                                 Vector::Constant(1, 0.5 * (hi + lo)));
    };
    const ConZono clipped = intersection(interval(0.0, 1.0), interval(0.25, 2.0));
    CHECK(support(clipped, Vector::Ones(1), s) == doctest::Approx(1.0).epsilon(2e-2));

    const IntervalBox bb = bounding_box(hex, s);
    const double sx = oracle::zonotope_support(hex, (Vector(2) << 1.0, 0.0).finished());
    const double sy = oracle::zonotope_support(hex, (Vector(2) << 0.0, 1.0).finished());
    CHECK(bb[0].hi() == doctest::Approx(sx).epsilon(2e-2));
    CHECK(bb[0].lo() == doctest::Approx(-sx).epsilon(2e-2));
    CHECK(bb[1].hi() == doctest::Approx(sy).epsilon(2e-2));
    const IntervalBox bbox = bounding_box(ConZono::zonotope(SparseMat::identity(2), Vector::Ones(2)), s);
    CHECK(bbox[0].lo() == doctest::Approx(0.0).scale(1.0).epsilon(2e-2));
    CHECK(bbox[1].hi() == doctest::Approx(2.0).epsilon(2e-2));
}

TEST_CASE("feasible sets never produce a certificate")
{
    std::mt19937 rng(111);
    AdmmSettings s;
    s.max_iter = 1000;
    s.k_inf = 1;
    s.eps_primal = s.eps_dual = 1e-14;  // force the full 1000 iterations
    for (int trial = 0; trial < 10; ++trial)
    {
        const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), true);
        REQUIRE_FALSE(oracle::is_empty_lp(inst.problem.Z));
        const AdmmResult res = admm_solve(reduce_feasibility(inst.problem.Z, s), s);
        CHECK(res.status != AdmmStatus::infeasible);
        CHECK_FALSE(res.certificate);
    }
}

TEST_CASE("membership examples")
{
    const AdmmSettings s;
    const ConZono box = ConZono::zonotope(SparseMat::identity(2), Vector::Zero(2));
    CHECK_FALSE(is_empty(box, s));
    CHECK(contains_point(box, Vector::Zero(2), s));
    CHECK_FALSE(contains_point(box, (Vector(2) << 2.0, 0.0).finished(), s));
    const ConZono contradictory(SparseMat::identity(1), Vector::Zero(1),
                                SparseMat::from_dense((DenseMatrix(2, 1) << 1, -1).finished()),
                                Vector::Ones(2));
    CHECK_THROWS_AS(is_empty(contradictory, s), ConstraintRankError);
}

TEST_CASE("equality-constrained segment")
{
    // x = (xi1 + xi2) / 2 with xi1 - xi2 = 1 gives x in [-0.5, 0.5]
    const ConZono Z(SparseMat::from_dense((DenseMatrix(1, 2) << 0.5, 0.5).finished()),
                    Vector::Zero(1), SparseMat::from_dense((DenseMatrix(1, 2) << 1, -1).finished()),
                    Vector::Ones(1));
    const AdmmSettings s = tight();
    CHECK(support(Z, Vector::Ones(1), s) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(-support(Z, -Vector::Ones(1), s) == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("random QPs match the active-set oracle")
{
    std::mt19937 rng(101);
    AdmmSettings s;
    s.eps_primal = s.eps_dual = 1e-6;
    s.max_iter = 200000;
    for (int trial = 0; trial < 100; ++trial)
    {
        const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), true, trial % 2 == 1);
        const ReducedQp r = reduce_qp(inst.problem, s);
        const oracle::QpSolution ref = oracle::active_set_qp(
            r.P_tilde().to_dense(), r.q_tilde(), r.A().to_dense(), r.b());
        REQUIRE(ref.feasible);
        const AdmmResult res = admm_solve(r, s);
        REQUIRE(res.status == AdmmStatus::converged);
        CHECK(std::abs(res.objective - r.objective(ref.xi)) <= 1e-4);
        // positive definite P makes x* unique even when xi* is not
        if (inst.strictly_convex)
        {
            const Vector x_ref = multiply(r.G(), ref.xi) + r.c();
            CHECK(oracle::inf_norm(res.x_star - x_ref) <= 1e-3);
        }
        CHECK(oracle::inf_norm(res.zeta) <= 1.0);
        CHECK(oracle::inf_norm(multiply(r.A(), res.xi) - r.b()) <= 1e-6 * (1.0 + oracle::inf_norm(r.b())));
    }
}

TEST_CASE("infeasible QPs are certified and certificates re-validate")
{
    std::mt19937 rng(202);
    AdmmSettings s = tight();
    int certified = 0;
    for (int trial = 0; trial < 60; ++trial)
    {
        const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), false);
        const ConZono& Z = inst.problem.Z;
        if (Z.nC() == 0)
            continue;
        const bool empty = !oracle::factor_feasible_enum(Z.A().to_dense(), Z.b());
        const ReducedQp r = reduce_qp(inst.problem, s);
        const AdmmResult res = admm_solve(r, s);
        if (empty)
        {
            REQUIRE(res.status == AdmmStatus::infeasible);
            REQUIRE(res.certificate);
            CHECK(oracle::check_certificate(Z, *res.certificate).valid());
            CHECK((res.iterations - 1) % s.k_inf == 0);
            ++certified;
        }
        else
        {
            CHECK(res.status == AdmmStatus::converged);
        }
    }
    CHECK(certified > 10);
}

TEST_CASE("disjoint intervals: certificate example")
{
    const ConZono a = ConZono::zonotope(SparseMat::from_dense(DenseMatrix::Constant(1, 1, 0.5)),
                                        Vector::Constant(1, 0.5));
    const ConZono b = ConZono::zonotope(SparseMat::from_dense(DenseMatrix::Constant(1, 1, 0.5)),
                                        Vector::Constant(1, 2.5));
    const ConZono Z = intersection(a, b);
    const AdmmResult res = feasibility_solve(Z, AdmmSettings{});
    REQUIRE(res.status == AdmmStatus::infeasible);
    CHECK(res.iterations == 1);
    REQUIRE(res.certificate);
    CHECK(oracle::check_certificate(Z, *res.certificate).valid());
    CHECK(is_empty(Z, AdmmSettings{}));
    CHECK_THROWS_AS(support(Z, Vector::Ones(1), AdmmSettings{}), EmptySetError);
    CHECK_THROWS_AS(bounding_box(Z, AdmmSettings{}), EmptySetError);
}

TEST_CASE("support of zonotopes matches the closed form")
{
    std::mt19937 rng(303);
    const AdmmSettings s = tight();
    for (int trial = 0; trial < 30; ++trial)
    {
        const Index n = 1 + trial % 4;
        const ConZono Z = oracle::random_zonotope(rng, n, n + trial % 5, 2.0);
        const SupportSolver solver(Z, s);
        for (int k = 0; k < 4; ++k)
        {
            const Vector d = oracle::random_direction(rng, n);
            const double want = oracle::zonotope_support(Z, d);
            CHECK(solver.value(d) == doctest::Approx(want).epsilon(1e-6).scale(1.0));
            CHECK(solver.upper_bound(d) >= want - 1e-9);
            CHECK(solver.upper_bound(d) == doctest::Approx(want).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("bounding box contains sampled points and is tight")
{
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial)
    {
        const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), true);
        const ConZono& Z = inst.problem.Z;
        const std::vector<Vector> verts =
            oracle::factor_vertices(Z.A().to_dense(), Z.b());
        REQUIRE(!verts.empty());
        const DenseMatrix G = Z.G().to_dense();

        // loose settings: the dual bound keeps the box sound regardless
        AdmmSettings loose;
        loose.max_iter = 20;
        const IntervalBox box = bounding_box(Z, loose);
        const IntervalBox tight_box = bounding_box(Z, tight());
        for (int k = 0; k < 100; ++k)
        {
            Vector w(static_cast<Index>(verts.size()));
            for (Index i = 0; i < w.size(); ++i)
                w[i] = -std::log(u01(rng) + 1e-300);
            w /= w.sum();
            Vector xi = Vector::Zero(Z.nG());
            for (size_t i = 0; i < verts.size(); ++i)
                xi += w[static_cast<Index>(i)] * verts[i];
            const Vector x = G * xi + Z.c();
            CHECK(box.contains(x));
            CHECK(tight_box.contains(x));
        }
        for (Index i = 0; i < Z.n(); ++i)
        {
            double hi = -1e300, lo = 1e300;
            for (const Vector& v : verts)
            {
                const double xv = G.row(i).dot(v) + Z.c()[i];
                hi = std::max(hi, xv);
                lo = std::min(lo, xv);
            }
            CHECK(tight_box[i].hi() >= hi - 1e-12);
            CHECK(tight_box[i].lo() <= lo + 1e-12);
            CHECK(tight_box[i].hi() == doctest::Approx(hi).epsilon(1e-5).scale(1.0));
            CHECK(tight_box[i].lo() == doctest::Approx(lo).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("emptiness and membership agree with the LP oracle")
{
    std::mt19937 rng(505);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const AdmmSettings s = tight();
    int empty_count = 0;
    for (int trial = 0; trial < 40; ++trial)
    {
        const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), trial % 2 == 0);
        const ConZono& Z = inst.problem.Z;
        const bool want = oracle::is_empty_lp(Z);
        CHECK(is_empty(Z, s) == want);
        empty_count += want ? 1 : 0;
        if (!want)
        {
            for (int k = 0; k < 5; ++k)
            {
                Vector x(Z.n());
                for (Index i = 0; i < x.size(); ++i)
                    x[i] = Z.c()[i] + u(rng);
                CHECK(contains_point(Z, x, s) == oracle::contains_lp(Z, x));
            }
        }
    }
    CHECK(empty_count > 0);
}

TEST_CASE("solver is deterministic")
{
    std::mt19937 rng(606);
    const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), true);
    const ReducedQp r = reduce_qp(inst.problem, AdmmSettings{});
    const AdmmResult a = admm_solve(r, AdmmSettings{});
    const AdmmResult b = admm_solve(reduce_qp(inst.problem, AdmmSettings{}), AdmmSettings{});
    CHECK(a.iterations == b.iterations);
    CHECK(a.x_star == b.x_star);
    CHECK(a.zeta == b.zeta);
    CHECK(a.u == b.u);
}

TEST_CASE("converged results satisfy their stopping rule")
{
    std::mt19937 rng(707);
    for (const ConvergenceNorm norm : {ConvergenceNorm::l2_scaled, ConvergenceNorm::inf})
    {
        AdmmSettings s;
        s.norm = norm;
        for (int trial = 0; trial < 20; ++trial)
        {
            const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), true);
            const ReducedQp r = reduce_qp(inst.problem, s);
            const AdmmResult res = admm_solve(r, s);
            REQUIRE(res.status == AdmmStatus::converged);
            REQUIRE(static_cast<int>(res.history.size()) == res.iterations);
            const double scale =
                norm == ConvergenceNorm::inf ? 1.0 : std::sqrt(static_cast<double>(r.nG()));
            CHECK(res.history.back().primal < scale * s.eps_primal);
            CHECK(res.history.back().dual < scale * s.eps_dual);
            CHECK(oracle::inf_norm(res.zeta) <= 1.0);
            CHECK((res.x_star - (multiply(r.G(), res.zeta) + r.c())).norm() == 0.0);
            CHECK(res.objective == doctest::Approx(r.objective(res.zeta)));
        }
    }
}

TEST_CASE("warm start from a solution finishes quickly")
{
    std::mt19937 rng(808);
    const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), true);
    const AdmmSettings s;
    const ReducedQp r = reduce_qp(inst.problem, s);
    const AdmmResult cold = admm_solve(r, s);
    const AdmmResult warm = admm_solve(r, s, AdmmWarmStart{cold.xi, cold.zeta, cold.u});
    CHECK(warm.status == AdmmStatus::converged);
    CHECK(warm.iterations <= 2);
    CHECK_THROWS_AS(admm_solve(r, s, AdmmWarmStart{Vector::Zero(1), cold.zeta, cold.u}),
                    DimensionError);
}

TEST_CASE("iteration limit is reported")
{
    std::mt19937 rng(909);
    AdmmSettings s;
    s.max_iter = 1;
    s.eps_primal = s.eps_dual = 1e-12;
    const oracle::RandomQp inst = oracle::random_qp(rng, small_shape(), true);
    const AdmmResult res = admm_solve(reduce_qp(inst.problem, s), s);
    if (res.status != AdmmStatus::converged)
        CHECK(res.status == AdmmStatus::iteration_limit);
    CHECK(res.iterations == 1);
    CHECK(to_string(AdmmStatus::iteration_limit) == "iteration-limit");
}

TEST_CASE("argument validation")
{
    const ConZono box = ConZono::zonotope(SparseMat::identity(2), Vector::Zero(2));
    const QpProblem p{SparseMat::identity(2), Vector::Zero(2), box};
    AdmmSettings bad;
    bad.rho = 0.0;
    CHECK_THROWS_AS(reduce_qp(p, bad), std::invalid_argument);
    bad = AdmmSettings{};
    bad.k_inf = 0;
    CHECK_THROWS_AS(reduce_qp(p, bad), std::invalid_argument);

    AdmmSettings other;
    other.rho = 2.0;
    CHECK_THROWS_AS(admm_solve(reduce_qp(p, AdmmSettings{}), other), std::invalid_argument);

    const QpProblem wrong{SparseMat::identity(3), Vector::Zero(3), box};
    CHECK_THROWS_AS(reduce_qp(wrong, AdmmSettings{}), DimensionError);
    const QpProblem asym{SparseMat::from_dense((DenseMatrix(2, 2) << 1, 1, 0, 1).finished()),
                         Vector::Zero(2), box};
    CHECK_THROWS_AS(reduce_qp(asym, AdmmSettings{}), std::invalid_argument);

    const ConZono redundant(SparseMat::identity(2), Vector::Zero(2),
                            SparseMat::from_dense((DenseMatrix(2, 2) << 1, 1, 2, 2).finished()),
                            Vector::Zero(2));
    CHECK_THROWS_AS(reduce_qp({SparseMat::identity(2), Vector::Zero(2), redundant}, AdmmSettings{}),
                    ConstraintRankError);
    // membership still works through row reduction
    CHECK(contains_point(redundant, (Vector(2) << 0.5, -0.5).finished(), tight()));
    CHECK_FALSE(contains_point(redundant, (Vector(2) << 0.5, 0.5).finished(), tight()));
}
