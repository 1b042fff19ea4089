#ifndef SPARSEZONO_INTERVAL_HPP_
#define SPARSEZONO_INTERVAL_HPP_

/**
 * @file interval.hpp
 * @brief Closed intervals and boxes with endpoint arithmetic.
 */

#include <vector>

#include "sparsezono/sparse.hpp"

namespace sparsezono
{

/// Closed interval [lo, hi] with lo <= hi.
class Interval
{
    public:
        Interval() = default;
        Interval(double lo, double hi);

        /// Degenerate interval [x, x].
        static Interval point(double x) { return {x, x}; }

        double lo() const { return lo_; }
        double hi() const { return hi_; }
        double width() const { return hi_ - lo_; }
        double center() const { return 0.5 * (lo_ + hi_); }
        bool contains(double x) const { return lo_ <= x && x <= hi_; }

    private:
        double lo_ = 0.0;
        double hi_ = 0.0;
};

Interval operator+(const Interval& x, const Interval& y);
Interval operator-(const Interval& x, const Interval& y);
Interval operator*(const Interval& x, const Interval& y);
Interval operator*(double alpha, const Interval& x);
Interval operator+(const Interval& x, double y);
Interval operator-(const Interval& x, double y);

/// Tight enclosure of cos / sin over an interval of angles (rad).
Interval cos(const Interval& theta);
Interval sin(const Interval& theta);

/// Vector of intervals.
class IntervalBox
{
    public:
        IntervalBox() = default;
        explicit IntervalBox(std::vector<Interval> intervals) : iv_(std::move(intervals)) {}
        IntervalBox(const Vector& lo, const Vector& hi);

        Index size() const { return static_cast<Index>(iv_.size()); }
        const Interval& operator[](Index i) const { return iv_[static_cast<size_t>(i)]; }
        const std::vector<Interval>& intervals() const { return iv_; }

        Vector lower() const;
        Vector upper() const;
        bool contains(const Vector& x) const;

    private:
        std::vector<Interval> iv_;
};

/// v^T [x] = sum_i v_i [x_i].
Interval dot(const Vector& v, const IntervalBox& x);

/// [-1, 1]^n.
IntervalBox unit_box(Index n);

}  // namespace sparsezono

#endif  // SPARSEZONO_INTERVAL_HPP_
