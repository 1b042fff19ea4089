#ifndef SPARSEZONO_SPARSE_HPP_
#define SPARSEZONO_SPARSE_HPP_

/**
 * @file sparse.hpp
 * @brief Compressed sparse-column matrices and the handful of products and
 * concatenations the set operations need.
 */

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sparsezono
{

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Index = std::ptrdiff_t;

/// Thrown when operand shapes are incompatible. The message names both shapes.
class DimensionError : public std::invalid_argument
{
    public:
        using std::invalid_argument::invalid_argument;
};

struct Triplet
{
    Index row;
    Index col;
    double value;
};

/**
 * @brief Real matrix in compressed sparse-column form.
 *
 * Row indices inside each column are strictly increasing. Construction from
 * triplets sums duplicates and drops entries that are exactly zero, so nnz()
 * counts structural nonzeros only. Instances are immutable once built.
 */
class SparseMat
{
    public:
        SparseMat() = default;

        /// Empty (all-zero) matrix of the given shape.
        SparseMat(Index rows, Index cols);

        static SparseMat from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
        static SparseMat from_dense(const DenseMatrix& m);
        static SparseMat identity(Index n);
        static SparseMat diagonal(std::span<const double> d);
        static SparseMat diagonal(const Vector& d);

        /// Adopts raw CSC arrays. Used by kernels that build columns in order;
        /// zeros are kept as given.
        static SparseMat from_csc(Index rows, Index cols, std::vector<Index> col_ptr,
                                  std::vector<Index> row_idx, std::vector<double> values);

        Index rows() const { return rows_; }
        Index cols() const { return cols_; }
        Index nnz() const { return static_cast<Index>(values_.size()); }

        const std::vector<Index>& col_ptr() const { return col_ptr_; }
        const std::vector<Index>& row_idx() const { return row_idx_; }
        const std::vector<double>& values() const { return values_; }

        /// Entry lookup by binary search within the column; zero when absent.
        double coeff(Index row, Index col) const;

        DenseMatrix to_dense() const;
        std::vector<Triplet> to_triplets() const;

        /// Largest absolute stored value (0 for an empty matrix).
        double max_abs() const;

        /// "3x4" style shape string used in error messages.
        std::string shape() const;

    private:
        Index rows_ = 0;
        Index cols_ = 0;
        std::vector<Index> col_ptr_ = {0};
        std::vector<Index> row_idx_;
        std::vector<double> values_;
};

SparseMat transpose(const SparseMat& a);

/// Sparse product. Entries that cancel to exactly 0.0 are dropped; no
/// magnitude threshold is ever applied.
SparseMat multiply(const SparseMat& a, const SparseMat& b);
Vector multiply(const SparseMat& a, const Vector& x);

/// y = a^T x without forming the transpose.
Vector multiply_transposed(const SparseMat& a, const Vector& x);

SparseMat scale(const SparseMat& a, double alpha);
SparseMat add(const SparseMat& a, const SparseMat& b, double beta = 1.0);

SparseMat hcat(const SparseMat& a, const SparseMat& b);
SparseMat hcat(std::span<const SparseMat> blocks);
SparseMat vcat(const SparseMat& a, const SparseMat& b);
SparseMat vcat(std::span<const SparseMat> blocks);
SparseMat blkdiag(const SparseMat& a, const SparseMat& b);
SparseMat blkdiag(std::span<const SparseMat> blocks);

/// [I_cols selected at offset] style selector: rows x total with an identity
/// block starting at column `offset`.
SparseMat selector(Index rows, Index total_cols, Index offset);

Vector concat(const Vector& a, const Vector& b);

bool is_symmetric(const SparseMat& a, double rel_tol = 1e-12);

}  // namespace sparsezono

#endif  // SPARSEZONO_SPARSE_HPP_
