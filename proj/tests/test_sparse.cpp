#include <doctest.h>

#include <random>

#include "sparsezono/ldlt.hpp"
#include "sparsezono/sparse.hpp"

using namespace sparsezono;

namespace
{

SparseMat random_sparse(std::mt19937& rng, Index rows, Index cols, double density)
{
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::bernoulli_distribution keep(density);
    std::vector<Triplet> t;
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            if (keep(rng))
                t.push_back({i, j, val(rng)});
    return SparseMat::from_triplets(rows, cols, std::move(t));
}

/// [[H, A^T], [A, 0]] with H = L L^T + I and A of full row rank (a random
/// matrix plus a scaled identity block keeps it away from rank deficiency).
SparseMat random_quasi_definite(std::mt19937& rng, Index n, Index m)
{
    const SparseMat L = random_sparse(rng, n, n, 0.2);
    const SparseMat H = add(multiply(L, transpose(L)), SparseMat::identity(n));
    SparseMat A = random_sparse(rng, m, n, 0.3);
    A = add(A, scale(selector(m, n, 0), 2.0));
    return vcat(hcat(H, transpose(A)), hcat(A, SparseMat(m, m)));
}

DenseMatrix reconstruct(const LdltFactor& f)
{
    const Index n = f.dim();
    const DenseMatrix L = f.L().to_dense() + DenseMatrix::Identity(n, n);
    return L * f.D().asDiagonal() * L.transpose();
}

DenseMatrix permuted(const DenseMatrix& m, const std::vector<Index>& perm)
{
    if (perm.empty())
        return m;
    const Index n = m.rows();
    DenseMatrix out(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            out(i, j) = m(perm[i], perm[j]);
    return out;
}

void check_invariants(const SparseMat& a)
{
    REQUIRE(static_cast<Index>(a.col_ptr().size()) == a.cols() + 1);
    for (Index j = 0; j < a.cols(); ++j)
        for (Index p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p)
        {
            CHECK(a.row_idx()[p] >= 0);
            CHECK(a.row_idx()[p] < a.rows());
            if (p > a.col_ptr()[j])
                CHECK(a.row_idx()[p - 1] < a.row_idx()[p]);
        }
}

}  // namespace

TEST_CASE("transpose swaps indices")
{
    const SparseMat a = SparseMat::from_triplets(2, 3, {{0, 0, 1.0}, {1, 2, 2.0}});
    const SparseMat t = transpose(a);
    CHECK(t.rows() == 3);
    CHECK(t.cols() == 2);
    CHECK(t.nnz() == 2);
    CHECK(t.coeff(0, 0) == 1.0);
    CHECK(t.coeff(2, 1) == 2.0);
}

TEST_CASE("blkdiag of identities is identity")
{
    const SparseMat d = blkdiag(SparseMat::identity(2), SparseMat::identity(3));
    CHECK(d.rows() == 5);
    CHECK(d.to_dense() == DenseMatrix::Identity(5, 5));
}

TEST_CASE("matrix-vector style product")
{
    const SparseMat a = SparseMat::from_dense((DenseMatrix(2, 2) << 1, 2, 3, 4).finished());
    const SparseMat ones = SparseMat::from_dense(DenseMatrix::Ones(2, 1));
    const DenseMatrix p = multiply(a, ones).to_dense();
    CHECK(p(0, 0) == 3.0);
    CHECK(p(1, 0) == 7.0);
    const Vector y = multiply(a, Vector::Ones(2));
    CHECK(y[0] == 3.0);
    CHECK(y[1] == 7.0);
}

TEST_CASE("construction sums duplicates and prunes exact zeros")
{
    const SparseMat a =
        SparseMat::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, -1.0}, {1, 1, 2.0}, {1, 1, 3.0}});
    CHECK(a.nnz() == 1);
    CHECK(a.coeff(1, 1) == 5.0);
    check_invariants(a);
}

TEST_CASE("product drops exact cancellation only")
{
    // [1 1] * [1; -1] = 0 exactly; [1 1] * [1; -1+1e-300]: tiny but nonzero
    const SparseMat row = SparseMat::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
    const SparseMat col = SparseMat::from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, -1.0}});
    CHECK(multiply(row, col).nnz() == 0);
    const SparseMat col2 = SparseMat::from_triplets(2, 1, {{0, 0, 1e-300}, {1, 0, 0.0}});
    CHECK(multiply(row, col2).nnz() == 1);
}

TEST_CASE("dimension errors name both shapes")
{
    const SparseMat a(2, 3);
    const SparseMat b(2, 3);
    try
    {
        (void)multiply(a, b);
        FAIL("expected DimensionError");
    }
    catch (const DimensionError& e)
    {
        const std::string msg = e.what();
        CHECK(msg.find("2x3") != std::string::npos);
    }
    CHECK_THROWS_AS(vcat(SparseMat(1, 2), SparseMat(1, 3)), DimensionError);
    CHECK_THROWS_AS(hcat(SparseMat(1, 2), SparseMat(2, 2)), DimensionError);
}

TEST_CASE("random algebra matches dense and keeps nnz identities")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial)
    {
        const SparseMat a = random_sparse(rng, 5, 7, 0.3);
        const SparseMat b = random_sparse(rng, 7, 4, 0.3);
        const SparseMat c = random_sparse(rng, 3, 3, 0.5);
        CHECK(transpose(a).nnz() == a.nnz());
        CHECK(blkdiag(a, c).nnz() == a.nnz() + c.nnz());
        CHECK((multiply(a, b).to_dense() - a.to_dense() * b.to_dense()).cwiseAbs().maxCoeff() <
              1e-14);
        check_invariants(multiply(a, b));
        check_invariants(hcat(a, random_sparse(rng, 5, 2, 0.5)));
        check_invariants(vcat(a, random_sparse(rng, 2, 7, 0.5)));
        CHECK((scale(a, -2.5).to_dense() + 2.5 * a.to_dense()).norm() == 0.0);
        const Vector x = Vector::Random(7);
        CHECK((multiply(a, x) - a.to_dense() * x).norm() < 1e-14);
        const Vector y = Vector::Random(5);
        CHECK((multiply_transposed(a, y) - a.to_dense().transpose() * y).norm() < 1e-14);
    }
}

TEST_CASE("ldlt of a diagonal matrix")
{
    const SparseMat m = SparseMat::diagonal(Vector((Vector(2) << 2.0, -3.0).finished()));
    const LdltFactor f = ldlt_factorize(m);
    CHECK(f.L().nnz() == 0);
    CHECK(f.D()[0] == 2.0);
    CHECK(f.D()[1] == -3.0);
    const Vector x = ldlt_solve(f, (Vector(2) << 4.0, 6.0).finished());
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(-2.0));
}

TEST_CASE("ldlt of a 2x2 quasi-definite matrix")
{
    const SparseMat m = SparseMat::from_dense((DenseMatrix(2, 2) << 2, 1, 1, 0).finished());
    const LdltFactor f = ldlt_factorize(m);
    CHECK(f.L().coeff(1, 0) == doctest::Approx(0.5));
    CHECK(f.D()[0] == doctest::Approx(2.0));
    CHECK(f.D()[1] == doctest::Approx(-0.5));
    const Vector x = ldlt_solve(f, Vector::Ones(2));
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(-1.0));
}

TEST_CASE("ldlt rejects rank deficiency and asymmetry")
{
    // second constraint row duplicates the first
    const SparseMat m = SparseMat::from_dense(
        (DenseMatrix(3, 3) << 1, 1, 1, 1, 0, 0, 1, 0, 0).finished());
    try
    {
        (void)ldlt_factorize(m);
        FAIL("expected RankDeficientError");
    }
    catch (const RankDeficientError& e)
    {
        CHECK(e.pivot_index() == 2);
    }
    const SparseMat asym = SparseMat::from_dense((DenseMatrix(2, 2) << 1, 2, 0, 1).finished());
    CHECK_THROWS_AS(ldlt_factorize(asym), std::invalid_argument);
    CHECK_THROWS_AS(ldlt_factorize(SparseMat(2, 3)), DimensionError);
}

TEST_CASE("ldlt reconstruction and solve on random quasi-definite matrices")
{
    std::mt19937 rng(11);
    for (const Ordering ord : {Ordering::natural, Ordering::min_degree})
    {
        for (int trial = 0; trial < 20; ++trial)
        {
            const Index n = 5 + trial * 4;
            const Index m = n / 3;
            const SparseMat M = random_quasi_definite(rng, n, m);
            const LdltFactor f = ldlt_factorize(M, {ord, 1e-12});
            const DenseMatrix Md = permuted(M.to_dense(), f.perm());
            const double err = (Md - reconstruct(f)).cwiseAbs().maxCoeff();
            CHECK(err <= 1e-10 * (1.0 + M.max_abs()));

            int negative = 0;
            for (Index i = 0; i < f.dim(); ++i)
                negative += f.D()[i] < 0.0 ? 1 : 0;
            CHECK(negative == m);

            const Vector x = Vector::Random(n + m);
            const Vector rhs = multiply(M, x);
            const Vector sol = f.solve(rhs);
            CHECK((multiply(M, sol) - rhs).lpNorm<Eigen::Infinity>() <=
                  1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>()));
            CHECK((sol - x).lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + x.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("ldlt solve at dimension 200")
{
    std::mt19937 rng(3);
    const SparseMat M = random_quasi_definite(rng, 150, 50);
    const LdltFactor f = ldlt_factorize(M);
    const Vector x = Vector::Random(200);
    const Vector sol = f.solve(multiply(M, x));
    CHECK((sol - x).lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + x.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("minimum degree ordering is a permutation")
{
    std::mt19937 rng(5);
    const SparseMat M = random_quasi_definite(rng, 30, 10);
    std::vector<Index> p = minimum_degree_ordering(M);
    std::sort(p.begin(), p.end());
    for (Index i = 0; i < 40; ++i)
        CHECK(p[i] == i);
}
