#ifndef SPARSEZONO_IO_HPP_
#define SPARSEZONO_IO_HPP_

/**
 * @file io.hpp
 * @brief JSON serialization of sets and solver results.
 *
 * A set is written as {"n", "nG", "nC", "G", "A", "c", "b"} with G and A as
 * [[row, col, value], ...] coordinate triplets and c, b as dense arrays.
 */

#include <json.hpp>

#include "sparsezono/admm.hpp"
#include "sparsezono/conzono.hpp"

namespace sparsezono
{

nlohmann::json to_json(const SparseMat& m);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const ConZono& Z);
nlohmann::json to_json(const IntervalBox& box);

/// Status, x_star, iterations, objective, residual history and certificate.
nlohmann::json to_json(const AdmmResult& r);

SparseMat sparse_from_json(const nlohmann::json& j, Index rows, Index cols);
Vector vector_from_json(const nlohmann::json& j);

/// Throws std::invalid_argument on missing keys or inconsistent sizes.
ConZono conzono_from_json(const nlohmann::json& j);

}  // namespace sparsezono

#endif  // SPARSEZONO_IO_HPP_
