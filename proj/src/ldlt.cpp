#include "sparsezono/ldlt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace sparsezono
{

namespace
{

constexpr Index kNone = -1;

std::string pivot_message(Index idx, double pivot, double threshold)
{
    std::ostringstream os;
    os << "ldlt_factorize: pivot " << pivot << " at index " << idx << " below threshold "
       << threshold << "; matrix is rank deficient (constraint matrix must have full row rank)";
    return os.str();
}

/// Upper triangle of P M P^T in CSC form.
SparseMat permuted_upper(const SparseMat& m, const std::vector<Index>& perm)
{
    const Index n = m.rows();
    std::vector<Index> pinv(static_cast<size_t>(n));
    if (perm.empty())
        std::iota(pinv.begin(), pinv.end(), 0);
    else
        for (Index i = 0; i < n; ++i)
            pinv[perm[i]] = i;

    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(m.nnz()));
    for (Index j = 0; j < n; ++j)
    {
        for (Index p = m.col_ptr()[j]; p < m.col_ptr()[j + 1]; ++p)
        {
            const Index a = pinv[m.row_idx()[p]];
            const Index b = pinv[j];
            if (a <= b)
                t.push_back({a, b, m.values()[p]});
        }
    }
    return SparseMat::from_triplets(n, n, std::move(t));
}

}  // namespace

RankDeficientError::RankDeficientError(Index pivot_index, double pivot, const std::string& what)
    : std::runtime_error(what), pivot_index_(pivot_index), pivot_(pivot)
{
}

std::vector<Index> minimum_degree_ordering(const SparseMat& m)
{
    const Index n = m.rows();
    std::vector<std::set<Index>> adj(static_cast<size_t>(n));
    for (Index j = 0; j < n; ++j)
    {
        for (Index p = m.col_ptr()[j]; p < m.col_ptr()[j + 1]; ++p)
        {
            const Index i = m.row_idx()[p];
            if (i != j)
            {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }

    std::set<std::pair<size_t, Index>> queue;
    for (Index i = 0; i < n; ++i)
        queue.insert({adj[i].size(), i});

    std::vector<Index> order;
    order.reserve(static_cast<size_t>(n));
    while (!queue.empty())
    {
        const Index v = queue.begin()->second;
        queue.erase(queue.begin());
        order.push_back(v);

        const std::vector<Index> nbrs(adj[v].begin(), adj[v].end());
        for (Index u : nbrs)
        {
            queue.erase({adj[u].size(), u});
            adj[u].erase(v);
        }
        for (size_t a = 0; a < nbrs.size(); ++a)
            for (size_t b = a + 1; b < nbrs.size(); ++b)
            {
                adj[nbrs[a]].insert(nbrs[b]);
                adj[nbrs[b]].insert(nbrs[a]);
            }
        for (Index u : nbrs)
            queue.insert({adj[u].size(), u});
        adj[v].clear();
    }

    // zero-diagonal (constraint) nodes go last so every leading pivot comes
    // from the definite block and the trailing ones from its Schur complement
    std::stable_partition(order.begin(), order.end(),
                          [&](Index i) { return m.coeff(i, i) != 0.0; });
    return order;
}

LdltFactor ldlt_factorize(const SparseMat& m, const LdltOptions& opts)
{
    if (m.rows() != m.cols())
        throw DimensionError("ldlt_factorize: matrix must be square, got " + m.shape());
    if (!is_symmetric(m))
        throw std::invalid_argument("ldlt_factorize: matrix is not symmetric");

    const Index n = m.rows();
    LdltFactor f;
    if (opts.ordering == Ordering::min_degree)
        f.perm_ = minimum_degree_ordering(m);

    const SparseMat upper = permuted_upper(m, f.perm_);
    const auto& up = upper.col_ptr();
    const auto& ui = upper.row_idx();
    const auto& ux = upper.values();

    // elimination tree and column counts
    std::vector<Index> etree(static_cast<size_t>(n), kNone);
    std::vector<Index> lnz(static_cast<size_t>(n), 0);
    std::vector<Index> work(static_cast<size_t>(n), kNone);
    for (Index j = 0; j < n; ++j)
    {
        work[j] = j;
        for (Index p = up[j]; p < up[j + 1]; ++p)
        {
            Index i = ui[p];
            while (work[i] != j)
            {
                if (etree[i] == kNone)
                    etree[i] = j;
                ++lnz[i];
                work[i] = j;
                i = etree[i];
            }
        }
    }

    std::vector<Index> lp(static_cast<size_t>(n) + 1, 0);
    for (Index i = 0; i < n; ++i)
        lp[i + 1] = lp[i] + lnz[i];
    std::vector<Index> li(static_cast<size_t>(lp[n]));
    std::vector<double> lx(static_cast<size_t>(lp[n]), 0.0);
    Vector d = Vector::Zero(n);
    Vector dinv = Vector::Zero(n);

    const double threshold = opts.pivot_rel_threshold * m.max_abs();

    std::vector<double> y(static_cast<size_t>(n), 0.0);
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::vector<Index> y_idx(static_cast<size_t>(n));
    std::vector<Index> elim(static_cast<size_t>(n));
    std::vector<Index> next_space(lp.begin(), lp.end() - 1);

    for (Index k = 0; k < n; ++k)
    {
        Index n_y = 0;
        used[k] = 1;
        for (Index p = up[k]; p < up[k + 1]; ++p)
        {
            const Index i = ui[p];
            if (i == k)
            {
                d[k] = ux[p];
                continue;
            }
            y[i] = ux[p];
            Index n_e = 0;
            Index next = i;
            while (!used[next])
            {
                used[next] = 1;
                elim[n_e++] = next;
                next = etree[next];
            }
            while (n_e > 0)
                y_idx[n_y++] = elim[--n_e];
        }

        for (Index t = n_y - 1; t >= 0; --t)
        {
            const Index c = y_idx[t];
            const Index slot = next_space[c];
            const double yc = y[c];
            for (Index p = lp[c]; p < slot; ++p)
                y[li[p]] -= lx[p] * yc;
            li[slot] = k;
            lx[slot] = yc * dinv[c];
            d[k] -= yc * lx[slot];
            ++next_space[c];
            y[c] = 0.0;
            used[c] = 0;
        }
        used[k] = 0;

        if (!(std::abs(d[k]) > threshold))
        {
            const Index orig = f.perm_.empty() ? k : f.perm_[k];
            throw RankDeficientError(orig, d[k], pivot_message(orig, d[k], threshold));
        }
        dinv[k] = 1.0 / d[k];
    }

    // L is stored by columns with rows appended in increasing k, so each column is sorted
    f.L_ = SparseMat::from_csc(n, n, std::move(lp), std::move(li), std::move(lx));
    f.D_ = std::move(d);
    return f;
}

Vector LdltFactor::solve(const Vector& rhs) const
{
    const Index n = dim();
    if (rhs.size() != n)
        throw DimensionError("ldlt_solve: rhs length " + std::to_string(rhs.size()) +
                             " does not match factor dimension " + std::to_string(n));
    Vector x(n);
    if (perm_.empty())
        x = rhs;
    else
        for (Index i = 0; i < n; ++i)
            x[i] = rhs[perm_[i]];

    const auto& lp = L_.col_ptr();
    const auto& li = L_.row_idx();
    const auto& lx = L_.values();
    for (Index j = 0; j < n; ++j)
    {
        const double xj = x[j];
        for (Index p = lp[j]; p < lp[j + 1]; ++p)
            x[li[p]] -= lx[p] * xj;
    }
    for (Index j = 0; j < n; ++j)
        x[j] /= D_[j];
    for (Index j = n - 1; j >= 0; --j)
    {
        double s = x[j];
        for (Index p = lp[j]; p < lp[j + 1]; ++p)
            s -= lx[p] * x[li[p]];
        x[j] = s;
    }

    if (perm_.empty())
        return x;
    Vector out(n);
    for (Index i = 0; i < n; ++i)
        out[perm_[i]] = x[i];
    return out;
}

Vector ldlt_solve(const LdltFactor& f, const Vector& rhs)
{
    return f.solve(rhs);
}

}  // namespace sparsezono
