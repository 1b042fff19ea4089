#include "sparsezono/conzono.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sparsezono
{

namespace
{

std::string vec_shape(Index n)
{
    return std::to_string(n) + "x1";
}

}  // namespace

ConZono::ConZono() : G_(0, 0), c_(0), A_(0, 0), b_(0) {}

ConZono::ConZono(SparseMat G, Vector c, SparseMat A, Vector b)
    : G_(std::move(G)), c_(std::move(c)), A_(std::move(A)), b_(std::move(b))
{
    if (G_.rows() != c_.size())
        throw DimensionError("ConZono: generator matrix " + G_.shape() + " and center " +
                             vec_shape(c_.size()) + " disagree");
    if (A_.cols() != G_.cols())
        throw DimensionError("ConZono: constraint matrix " + A_.shape() + " and generator matrix " +
                             G_.shape() + " disagree on generator count");
    if (A_.rows() != b_.size())
        throw DimensionError("ConZono: constraint matrix " + A_.shape() + " and constraint vector " +
                             vec_shape(b_.size()) + " disagree");
}

ConZono ConZono::zonotope(SparseMat G, Vector c)
{
    const Index ng = G.cols();
    return ConZono(std::move(G), std::move(c), SparseMat(0, ng), Vector(0));
}

ConZono ConZono::point(Vector c)
{
    const Index n = c.size();
    return ConZono(SparseMat(n, 0), std::move(c), SparseMat(0, 0), Vector(0));
}

ConZono affine_map(const SparseMat& R, const ConZono& Z, const Vector& s)
{
    const Vector shift = s.size() == 0 ? Vector::Zero(R.rows()) : s;
    if (R.cols() != Z.n() || shift.size() != R.rows())
        throw DimensionError("affine_map: map " + R.shape() + " incompatible with set dimension " +
                             std::to_string(Z.n()) + " and offset " + vec_shape(shift.size()));
    return ConZono(multiply(R, Z.G()), multiply(R, Z.c()) + shift, Z.A(), Z.b());
}

ConZono cartesian_product(const ConZono& Z1, const ConZono& Z2)
{
    return ConZono(blkdiag(Z1.G(), Z2.G()), concat(Z1.c(), Z2.c()), blkdiag(Z1.A(), Z2.A()),
                   concat(Z1.b(), Z2.b()));
}

ConZono minkowski_sum(const ConZono& Z1, const ConZono& Z2)
{
    if (Z1.n() != Z2.n())
        throw DimensionError("minkowski_sum: set dimensions " + std::to_string(Z1.n()) + " and " +
                             std::to_string(Z2.n()) + " differ");
    return ConZono(hcat(Z1.G(), Z2.G()), Z1.c() + Z2.c(), blkdiag(Z1.A(), Z2.A()),
                   concat(Z1.b(), Z2.b()));
}

ConZono generalized_intersection(const ConZono& Z1, const ConZono& Z2, const SparseMat& R)
{
    if (R.rows() != Z2.n() || R.cols() != Z1.n())
        throw DimensionError("generalized_intersection: map " + R.shape() +
                             " incompatible with set dimensions " + std::to_string(Z1.n()) +
                             " and " + std::to_string(Z2.n()));

    const SparseMat G = hcat(Z1.G(), SparseMat(Z1.n(), Z2.nG()));
    const SparseMat top = blkdiag(Z1.A(), Z2.A());
    const SparseMat coupling = hcat(multiply(R, Z1.G()), scale(Z2.G(), -1.0));
    const SparseMat A = vcat(top, coupling);

    Vector b(Z1.nC() + Z2.nC() + Z2.n());
    b << Z1.b(), Z2.b(), Z2.c() - multiply(R, Z1.c());
    return ConZono(G, Z1.c(), A, std::move(b));
}

ConZono intersection(const ConZono& Z1, const ConZono& Z2)
{
    return generalized_intersection(Z1, Z2, SparseMat::identity(Z1.n()));
}

ConZono make_regular_polygon(int m, double inradius, const Vector& center, double rotation)
{
    if (m < 4 || m % 2 != 0)
        throw std::invalid_argument("make_regular_polygon: need an even vertex count >= 4, got " +
                                    std::to_string(m));
    if (center.size() != 2)
        throw DimensionError("make_regular_polygon: center must be 2x1, got " +
                             vec_shape(center.size()));

    const double pi = std::numbers::pi;
    const double half_edge = inradius * std::tan(pi / m);
    const int n_gen = m / 2;
    std::vector<Triplet> t;
    for (int k = 0; k < n_gen; ++k)
    {
        const double angle = rotation + 2.0 * pi * k / m;
        // snap roundoff such as cos(pi / 2) so axis-aligned edges stay sparse
        const auto snap = [](double v) { return std::abs(v) < 1e-14 ? 0.0 : v; };
        t.push_back({0, k, half_edge * snap(std::cos(angle))});
        t.push_back({1, k, half_edge * snap(std::sin(angle))});
    }
    return ConZono::zonotope(SparseMat::from_triplets(2, n_gen, std::move(t)), center);
}

ConZono interval_to_zono(const IntervalBox& box)
{
    const Index n = box.size();
    // explicit zero entries vanish from the CSC storage, but the column stays
    std::vector<Triplet> t;
    Vector c(n);
    for (Index i = 0; i < n; ++i)
    {
        t.push_back({i, i, 0.5 * box[i].width()});
        c[i] = box[i].center();
    }
    return ConZono::zonotope(SparseMat::from_triplets(n, n, std::move(t)), std::move(c));
}

SparseMat rotation_matrix(double theta)
{
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    return SparseMat::from_triplets(2, 2, {{0, 0, ct}, {1, 0, st}, {0, 1, -st}, {1, 1, ct}});
}

ConZono rotation_uncertainty_zono(double theta_meas, double e_theta, const IntervalBox& body_box)
{
    if (e_theta < 0.0)
        throw std::invalid_argument("rotation_uncertainty_zono: e_theta must be nonnegative");
    if (body_box.size() != 2)
        throw DimensionError("rotation_uncertainty_zono: body box must be 2-D, got " +
                             std::to_string(body_box.size()));

    const Interval heading(theta_meas - e_theta, theta_meas + e_theta);
    const Interval e_c = cos(heading) - std::cos(theta_meas);
    const Interval e_s = sin(heading) - std::sin(theta_meas);
    const Interval& ex = body_box[0];
    const Interval& ey = body_box[1];

    const IntervalBox error({e_c * ex - e_s * ey, e_s * ex + e_c * ey});
    const ConZono rotated = affine_map(rotation_matrix(theta_meas), interval_to_zono(body_box));
    return minkowski_sum(rotated, interval_to_zono(error));
}

std::string to_string(const ConZono& Z)
{
    std::ostringstream os;
    os << "ConZono(n=" << Z.n() << ", nG=" << Z.nG() << ", nC=" << Z.nC()
       << ", nnz(G)=" << Z.G().nnz() << ", nnz(A)=" << Z.A().nnz() << ")";
    return os.str();
}

}  // namespace sparsezono
