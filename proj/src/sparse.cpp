#include "sparsezono/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sparsezono
{

namespace
{

std::string shape_of(Index r, Index c)
{
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

[[noreturn]] void throw_mismatch(const char* op, const std::string& a, const std::string& b)
{
    throw DimensionError(std::string(op) + ": incompatible shapes " + a + " and " + b);
}

}  // namespace

SparseMat::SparseMat(Index rows, Index cols)
    : rows_(rows), cols_(cols), col_ptr_(static_cast<size_t>(cols) + 1, 0)
{
    if (rows < 0 || cols < 0)
        throw DimensionError("SparseMat: negative shape " + shape_of(rows, cols));
}

SparseMat SparseMat::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets)
{
    SparseMat m(rows, cols);
    for (const auto& t : triplets)
    {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
        {
            throw DimensionError("SparseMat: triplet (" + std::to_string(t.row) + "," +
                                 std::to_string(t.col) + ") outside " + shape_of(rows, cols));
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });

    m.row_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    size_t i = 0;
    for (Index col = 0; col < cols; ++col)
    {
        while (i < triplets.size() && triplets[i].col == col)
        {
            const Index row = triplets[i].row;
            double sum = 0.0;
            while (i < triplets.size() && triplets[i].col == col && triplets[i].row == row)
                sum += triplets[i++].value;
            if (sum != 0.0)
            {
                m.row_idx_.push_back(row);
                m.values_.push_back(sum);
            }
        }
        m.col_ptr_[static_cast<size_t>(col) + 1] = static_cast<Index>(m.values_.size());
    }
    return m;
}

SparseMat SparseMat::from_dense(const DenseMatrix& d)
{
    std::vector<Triplet> t;
    for (Index j = 0; j < d.cols(); ++j)
        for (Index i = 0; i < d.rows(); ++i)
            if (d(i, j) != 0.0)
                t.push_back({i, j, d(i, j)});
    return from_triplets(d.rows(), d.cols(), std::move(t));
}

SparseMat SparseMat::identity(Index n)
{
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i)
        t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
}

SparseMat SparseMat::diagonal(std::span<const double> d)
{
    const auto n = static_cast<Index>(d.size());
    std::vector<Triplet> t;
    for (Index i = 0; i < n; ++i)
        t.push_back({i, i, d[static_cast<size_t>(i)]});
    return from_triplets(n, n, std::move(t));
}

SparseMat SparseMat::diagonal(const Vector& d)
{
    return diagonal(std::span<const double>(d.data(), static_cast<size_t>(d.size())));
}

SparseMat SparseMat::from_csc(Index rows, Index cols, std::vector<Index> col_ptr,
                              std::vector<Index> row_idx, std::vector<double> values)
{
    if (col_ptr.size() != static_cast<size_t>(cols) + 1 || row_idx.size() != values.size() ||
        col_ptr.back() != static_cast<Index>(values.size()))
    {
        throw DimensionError("SparseMat: inconsistent CSC arrays for " + shape_of(rows, cols));
    }
    SparseMat m(rows, cols);
    m.col_ptr_ = std::move(col_ptr);
    m.row_idx_ = std::move(row_idx);
    m.values_ = std::move(values);
    return m;
}

double SparseMat::coeff(Index row, Index col) const
{
    const auto first = row_idx_.begin() + col_ptr_[static_cast<size_t>(col)];
    const auto last = row_idx_.begin() + col_ptr_[static_cast<size_t>(col) + 1];
    const auto it = std::lower_bound(first, last, row);
    if (it == last || *it != row)
        return 0.0;
    return values_[static_cast<size_t>(it - row_idx_.begin())];
}

DenseMatrix SparseMat::to_dense() const
{
    DenseMatrix d = DenseMatrix::Zero(rows_, cols_);
    for (Index j = 0; j < cols_; ++j)
        for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
            d(row_idx_[p], j) = values_[p];
    return d;
}

std::vector<Triplet> SparseMat::to_triplets() const
{
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (Index j = 0; j < cols_; ++j)
        for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
            t.push_back({row_idx_[p], j, values_[p]});
    return t;
}

double SparseMat::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

std::string SparseMat::shape() const
{
    return shape_of(rows_, cols_);
}

SparseMat transpose(const SparseMat& a)
{
    const Index m = a.rows();
    const Index n = a.cols();
    const auto& ap = a.col_ptr();
    const auto& ai = a.row_idx();
    const auto& ax = a.values();

    std::vector<Index> count(static_cast<size_t>(m) + 1, 0);
    for (Index i : ai)
        ++count[static_cast<size_t>(i) + 1];
    for (Index i = 0; i < m; ++i)
        count[i + 1] += count[i];

    std::vector<Index> tp = count;
    std::vector<Index> ti(ai.size());
    std::vector<double> tx(ax.size());
    std::vector<Index> next(count.begin(), count.end() - 1);
    for (Index j = 0; j < n; ++j)
    {
        for (Index p = ap[j]; p < ap[j + 1]; ++p)
        {
            const Index dst = next[ai[p]]++;
            ti[dst] = j;
            tx[dst] = ax[p];
        }
    }
    return SparseMat::from_csc(n, m, std::move(tp), std::move(ti), std::move(tx));
}

SparseMat multiply(const SparseMat& a, const SparseMat& b)
{
    if (a.cols() != b.rows())
        throw_mismatch("multiply", a.shape(), b.shape());

    const Index m = a.rows();
    const Index n = b.cols();
    const auto& ap = a.col_ptr();
    const auto& ai = a.row_idx();
    const auto& ax = a.values();
    const auto& bp = b.col_ptr();
    const auto& bi = b.row_idx();
    const auto& bx = b.values();

    std::vector<Index> cp(static_cast<size_t>(n) + 1, 0);
    std::vector<Index> ci;
    std::vector<double> cx;
    std::vector<double> work(static_cast<size_t>(m), 0.0);
    std::vector<Index> mark(static_cast<size_t>(m), -1);
    std::vector<Index> pattern;

    for (Index j = 0; j < n; ++j)
    {
        pattern.clear();
        for (Index pb = bp[j]; pb < bp[j + 1]; ++pb)
        {
            const Index k = bi[pb];
            const double bkj = bx[pb];
            for (Index pa = ap[k]; pa < ap[k + 1]; ++pa)
            {
                const Index i = ai[pa];
                if (mark[i] != j)
                {
                    mark[i] = j;
                    work[i] = 0.0;
                    pattern.push_back(i);
                }
                work[i] += ax[pa] * bkj;
            }
        }
        std::sort(pattern.begin(), pattern.end());
        for (Index i : pattern)
        {
            if (work[i] != 0.0)
            {
                ci.push_back(i);
                cx.push_back(work[i]);
            }
        }
        cp[j + 1] = static_cast<Index>(ci.size());
    }
    return SparseMat::from_csc(m, n, std::move(cp), std::move(ci), std::move(cx));
}

Vector multiply(const SparseMat& a, const Vector& x)
{
    if (a.cols() != x.size())
        throw_mismatch("multiply", a.shape(), shape_of(x.size(), 1));
    Vector y = Vector::Zero(a.rows());
    const auto& ap = a.col_ptr();
    const auto& ai = a.row_idx();
    const auto& ax = a.values();
    for (Index j = 0; j < a.cols(); ++j)
    {
        const double xj = x[j];
        if (xj == 0.0)
            continue;
        for (Index p = ap[j]; p < ap[j + 1]; ++p)
            y[ai[p]] += ax[p] * xj;
    }
    return y;
}

Vector multiply_transposed(const SparseMat& a, const Vector& x)
{
    if (a.rows() != x.size())
        throw_mismatch("multiply_transposed", a.shape(), shape_of(x.size(), 1));
    Vector y(a.cols());
    const auto& ap = a.col_ptr();
    const auto& ai = a.row_idx();
    const auto& ax = a.values();
    for (Index j = 0; j < a.cols(); ++j)
    {
        double s = 0.0;
        for (Index p = ap[j]; p < ap[j + 1]; ++p)
            s += ax[p] * x[ai[p]];
        y[j] = s;
    }
    return y;
}

SparseMat scale(const SparseMat& a, double alpha)
{
    if (alpha == 0.0)
        return SparseMat(a.rows(), a.cols());
    std::vector<double> x = a.values();
    for (double& v : x)
        v *= alpha;
    return SparseMat::from_csc(a.rows(), a.cols(), a.col_ptr(), a.row_idx(), std::move(x));
}

SparseMat add(const SparseMat& a, const SparseMat& b, double beta)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw_mismatch("add", a.shape(), b.shape());
    auto t = a.to_triplets();
    for (const auto& e : b.to_triplets())
        t.push_back({e.row, e.col, beta * e.value});
    return SparseMat::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMat hcat(std::span<const SparseMat> blocks)
{
    if (blocks.empty())
        return SparseMat(0, 0);
    const Index rows = blocks.front().rows();
    std::vector<Index> cp = {0};
    std::vector<Index> ci;
    std::vector<double> cx;
    Index cols = 0;
    for (const auto& blk : blocks)
    {
        if (blk.rows() != rows)
            throw_mismatch("hcat", blocks.front().shape(), blk.shape());
        const auto& bp = blk.col_ptr();
        ci.insert(ci.end(), blk.row_idx().begin(), blk.row_idx().end());
        cx.insert(cx.end(), blk.values().begin(), blk.values().end());
        const Index base = cp.back();
        for (Index j = 0; j < blk.cols(); ++j)
            cp.push_back(base + bp[j + 1]);
        cols += blk.cols();
    }
    return SparseMat::from_csc(rows, cols, std::move(cp), std::move(ci), std::move(cx));
}

SparseMat hcat(const SparseMat& a, const SparseMat& b)
{
    const SparseMat blocks[] = {a, b};
    return hcat(blocks);
}

SparseMat vcat(std::span<const SparseMat> blocks)
{
    if (blocks.empty())
        return SparseMat(0, 0);
    const Index cols = blocks.front().cols();
    Index rows = 0;
    for (const auto& blk : blocks)
    {
        if (blk.cols() != cols)
            throw_mismatch("vcat", blocks.front().shape(), blk.shape());
        rows += blk.rows();
    }
    std::vector<Index> cp(static_cast<size_t>(cols) + 1, 0);
    std::vector<Index> ci;
    std::vector<double> cx;
    for (Index j = 0; j < cols; ++j)
    {
        Index offset = 0;
        for (const auto& blk : blocks)
        {
            for (Index p = blk.col_ptr()[j]; p < blk.col_ptr()[j + 1]; ++p)
            {
                ci.push_back(blk.row_idx()[p] + offset);
                cx.push_back(blk.values()[p]);
            }
            offset += blk.rows();
        }
        cp[j + 1] = static_cast<Index>(ci.size());
    }
    return SparseMat::from_csc(rows, cols, std::move(cp), std::move(ci), std::move(cx));
}

SparseMat vcat(const SparseMat& a, const SparseMat& b)
{
    const SparseMat blocks[] = {a, b};
    return vcat(blocks);
}

SparseMat blkdiag(std::span<const SparseMat> blocks)
{
    Index rows = 0;
    std::vector<Index> cp = {0};
    std::vector<Index> ci;
    std::vector<double> cx;
    Index cols = 0;
    for (const auto& blk : blocks)
    {
        const auto& bp = blk.col_ptr();
        for (Index j = 0; j < blk.cols(); ++j)
        {
            for (Index p = bp[j]; p < bp[j + 1]; ++p)
            {
                ci.push_back(blk.row_idx()[p] + rows);
                cx.push_back(blk.values()[p]);
            }
            cp.push_back(static_cast<Index>(ci.size()));
        }
        rows += blk.rows();
        cols += blk.cols();
    }
    return SparseMat::from_csc(rows, cols, std::move(cp), std::move(ci), std::move(cx));
}

SparseMat blkdiag(const SparseMat& a, const SparseMat& b)
{
    const SparseMat blocks[] = {a, b};
    return blkdiag(blocks);
}

SparseMat selector(Index rows, Index total_cols, Index offset)
{
    if (offset < 0 || offset + rows > total_cols)
        throw_mismatch("selector", shape_of(rows, rows), shape_of(rows, total_cols));
    std::vector<Triplet> t;
    for (Index i = 0; i < rows; ++i)
        t.push_back({i, offset + i, 1.0});
    return SparseMat::from_triplets(rows, total_cols, std::move(t));
}

Vector concat(const Vector& a, const Vector& b)
{
    Vector out(a.size() + b.size());
    out << a, b;
    return out;
}

bool is_symmetric(const SparseMat& a, double rel_tol)
{
    if (a.rows() != a.cols())
        return false;
    const double tol = rel_tol * std::max(1.0, a.max_abs());
    const SparseMat at = transpose(a);
    const SparseMat diff = add(a, at, -1.0);
    return diff.max_abs() <= tol;
}

}  // namespace sparsezono
