#include "sparsezono/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparsezono
{

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!(lo <= hi))
        throw std::invalid_argument("Interval: lower bound exceeds upper bound");
}

Interval operator+(const Interval& x, const Interval& y)
{
    return {x.lo() + y.lo(), x.hi() + y.hi()};
}

Interval operator-(const Interval& x, const Interval& y)
{
    return {x.lo() - y.hi(), x.hi() - y.lo()};
}

Interval operator*(const Interval& x, const Interval& y)
{
    const double a = x.lo() * y.lo();
    const double b = x.lo() * y.hi();
    const double c = x.hi() * y.lo();
    const double d = x.hi() * y.hi();
    return {std::min({a, b, c, d}), std::max({a, b, c, d})};
}

Interval operator*(double alpha, const Interval& x)
{
    if (alpha >= 0.0)
        return {alpha * x.lo(), alpha * x.hi()};
    return {alpha * x.hi(), alpha * x.lo()};
}

Interval operator+(const Interval& x, double y)
{
    return x + Interval::point(y);
}

Interval operator-(const Interval& x, double y)
{
    return x - Interval::point(y);
}

Interval cos(const Interval& theta)
{
    constexpr double pi = std::numbers::pi;
    if (theta.width() >= 2.0 * pi)
        return {-1.0, 1.0};
    double lo = std::min(std::cos(theta.lo()), std::cos(theta.hi()));
    double hi = std::max(std::cos(theta.lo()), std::cos(theta.hi()));
    // extrema of cos sit at integer multiples of pi
    for (double k = std::ceil(theta.lo() / pi); k * pi <= theta.hi(); k += 1.0)
    {
        if (std::fmod(std::abs(k), 2.0) == 0.0)
            hi = 1.0;
        else
            lo = -1.0;
    }
    return {lo, hi};
}

Interval sin(const Interval& theta)
{
    constexpr double half_pi = std::numbers::pi / 2.0;
    return cos(theta - half_pi);
}

IntervalBox::IntervalBox(const Vector& lo, const Vector& hi)
{
    if (lo.size() != hi.size())
        throw DimensionError("IntervalBox: bound vectors differ in length");
    iv_.reserve(static_cast<size_t>(lo.size()));
    for (Index i = 0; i < lo.size(); ++i)
        iv_.emplace_back(lo[i], hi[i]);
}

Vector IntervalBox::lower() const
{
    Vector v(size());
    for (Index i = 0; i < size(); ++i)
        v[i] = (*this)[i].lo();
    return v;
}

Vector IntervalBox::upper() const
{
    Vector v(size());
    for (Index i = 0; i < size(); ++i)
        v[i] = (*this)[i].hi();
    return v;
}

bool IntervalBox::contains(const Vector& x) const
{
    if (x.size() != size())
        return false;
    for (Index i = 0; i < size(); ++i)
        if (!(*this)[i].contains(x[i]))
            return false;
    return true;
}

Interval dot(const Vector& v, const IntervalBox& x)
{
    if (v.size() != x.size())
        throw DimensionError("dot: vector length " + std::to_string(v.size()) +
                             " does not match box length " + std::to_string(x.size()));
    Interval acc = Interval::point(0.0);
    for (Index i = 0; i < v.size(); ++i)
        acc = acc + v[i] * x[i];
    return acc;
}

IntervalBox unit_box(Index n)
{
    return IntervalBox(std::vector<Interval>(static_cast<size_t>(n), Interval(-1.0, 1.0)));
}

}  // namespace sparsezono
