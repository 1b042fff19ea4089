#ifndef SPARSEZONO_CONZONO_HPP_
#define SPARSEZONO_CONZONO_HPP_

/**
 * @file conzono.hpp
 * @brief Constrained zonotopes and their closed-form set operations.
 *
 * A constrained zonotope is Z = {G xi + c | A xi = b, xi in [-1, 1]^nG},
 * written <G, c, A, b>. With no equality constraints it is a zonotope; with no
 * generators it is a single point.
 */

#include <string>

#include "sparsezono/interval.hpp"
#include "sparsezono/sparse.hpp"

namespace sparsezono
{

class ConZono
{
    public:
        /// Zero-dimensional point; mostly useful as a placeholder.
        ConZono();

        ConZono(SparseMat G, Vector c, SparseMat A, Vector b);

        /// Zonotope <G, c> (no constraints).
        static ConZono zonotope(SparseMat G, Vector c);

        /// Singleton {c} with zero generators.
        static ConZono point(Vector c);

        const SparseMat& G() const { return G_; }
        const Vector& c() const { return c_; }
        const SparseMat& A() const { return A_; }
        const Vector& b() const { return b_; }

        /// Set dimension.
        Index n() const { return c_.size(); }
        Index nG() const { return G_.cols(); }
        Index nC() const { return A_.rows(); }

        bool is_zonotope() const { return nC() == 0; }

    private:
        SparseMat G_;
        Vector c_;
        SparseMat A_;
        Vector b_;
};

/// R Z + s = <R G, R c + s, A, b>. Passing an empty s means s = 0.
ConZono affine_map(const SparseMat& R, const ConZono& Z, const Vector& s = Vector());

/// Z1 x Z2.
ConZono cartesian_product(const ConZono& Z1, const ConZono& Z2);

/// Z1 (+) Z2.
ConZono minkowski_sum(const ConZono& Z1, const ConZono& Z2);

/// {z in Z1 | R z in Z2}.
ConZono generalized_intersection(const ConZono& Z1, const ConZono& Z2, const SparseMat& R);

/// Plain intersection (R = I).
ConZono intersection(const ConZono& Z1, const ConZono& Z2);

/**
 * @brief Centrally symmetric regular polygon with `m` vertices as a zonotope.
 *
 * Generators are half the successive edge vectors, the first pointing along
 * +x rotated by `rotation` (rad). `inradius` is the inscribed-circle radius.
 * Throws std::invalid_argument for odd m or m < 4.
 */
ConZono make_regular_polygon(int m, double inradius, const Vector& center, double rotation = 0.0);

/// Box to zonotope. Zero-width intervals keep their (zero) generator column.
ConZono interval_to_zono(const IntervalBox& box);

/**
 * @brief Lab-frame image of a body-frame uncertainty box under an uncertain
 * rotation theta in [theta_meas - e_theta, theta_meas + e_theta].
 *
 * Returns R(theta_meas) <box> (+) E, where E is the interval enclosure of
 * (R(theta) - R(theta_meas)) e over the heading interval and e in the box.
 */
ConZono rotation_uncertainty_zono(double theta_meas, double e_theta, const IntervalBox& body_box);

/// 2x2 rotation matrix.
SparseMat rotation_matrix(double theta);

std::string to_string(const ConZono& Z);

}  // namespace sparsezono

#endif  // SPARSEZONO_CONZONO_HPP_
