#pragma once

// Orientation and in-circle tests with a floating-point filter and an exact
// fallback built on floating-point expansion arithmetic (sums of
// non-overlapping doubles). The fallback only runs when the filtered result
// is too close to zero to trust.

#include <cmath>
#include <cstddef>
#include <limits>
#include <array>

namespace landsite::predicates {

namespace detail {

// Half an ulp of 1.0.
inline constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
inline constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

/// Exact a + b = hi + lo.
inline void two_sum(double a, double b, double& hi, double& lo)
{
    hi = a + b;
    double bv = hi - a;
    double av = hi - bv;
    lo = (a - av) + (b - bv);
}

/// Exact a * b = hi + lo.
inline void two_product(double a, double b, double& hi, double& lo)
{
    hi = a * b;
    lo = std::fma(a, b, -hi);
}

/// Non-overlapping expansion, components sorted by increasing magnitude,
/// zeros removed. Fixed capacity so the exact path never allocates.
template <std::size_t N>
struct Expansion {
    std::array<double, N> v;
    std::size_t n = 0;

    void push(double x)
    {
        if (x != 0.0) v[n++] = x;
    }
};

inline Expansion<2> from_diff(double a, double b)
{
    double hi, lo;
    two_sum(a, -b, hi, lo);
    Expansion<2> e;
    e.push(lo);
    e.push(hi);
    return e;
}

/// h = e + f. The caller guarantees h can hold e.n + f.n components.
template <std::size_t A, std::size_t B, std::size_t C>
void add_into(const Expansion<A>& e, const Expansion<B>& f, Expansion<C>& h)
{
    h.n = 0;
    for (std::size_t i = 0; i < e.n; ++i) h.v[h.n++] = e.v[i];
    // Grow h by each component of f in turn.
    for (std::size_t k = 0; k < f.n; ++k) {
        double q = f.v[k];
        std::size_t out = 0;
        for (std::size_t i = 0; i < h.n; ++i) {
            double hi, lo;
            two_sum(q, h.v[i], hi, lo);
            if (lo != 0.0) h.v[out++] = lo;
            q = hi;
        }
        if (q != 0.0) h.v[out++] = q;
        h.n = out;
    }
}

template <std::size_t A, std::size_t B, std::size_t C>
void add(const Expansion<A>& e, const Expansion<B>& f, Expansion<C>& h)
{
    static_assert(C >= A + B);
    add_into(e, f, h);
}

/// h = e * b.
template <std::size_t A, std::size_t C>
void scale(const Expansion<A>& e, double b, Expansion<C>& h)
{
    static_assert(C >= 2 * A);
    h.n = 0;
    if (e.n == 0 || b == 0.0) return;
    double q, lo;
    two_product(e.v[0], b, q, lo);
    h.push(lo);
    for (std::size_t i = 1; i < e.n; ++i) {
        double p_hi, p_lo;
        two_product(e.v[i], b, p_hi, p_lo);
        double s, t;
        two_sum(q, p_lo, s, t);
        h.push(t);
        two_sum(p_hi, s, q, t);
        h.push(t);
    }
    h.push(q);
}

/// h = e * f. At most 2 * A * B components: each of the B partial
/// products has at most 2 * A.
template <std::size_t A, std::size_t B, std::size_t C>
void mul(const Expansion<A>& e, const Expansion<B>& f, Expansion<C>& h)
{
    static_assert(C >= 2 * A * B);
    h.n = 0;
    Expansion<2 * A> part;
    Expansion<C> acc;
    for (std::size_t k = 0; k < f.n; ++k) {
        scale(e, f.v[k], part);
        acc.n = 0;
        for (std::size_t i = 0; i < h.n; ++i) acc.v[acc.n++] = h.v[i];
        add_into(acc, part, h);
    }
}

template <std::size_t N>
Expansion<N> negate(Expansion<N> e)
{
    for (std::size_t i = 0; i < e.n; ++i) e.v[i] = -e.v[i];
    return e;
}

template <std::size_t N>
double sign_of(const Expansion<N>& e)
{
    for (std::size_t i = e.n; i-- > 0;) {
        if (e.v[i] != 0.0) return e.v[i] > 0.0 ? 1.0 : -1.0;
    }
    return 0.0;
}

/// 2x2 minor p*s - q*r of two-component expansions.
inline Expansion<16> cross2(const Expansion<2>& p, const Expansion<2>& s, const Expansion<2>& q,
                            const Expansion<2>& r)
{
    Expansion<8> ps, qr;
    mul(p, s, ps);
    mul(q, r, qr);
    Expansion<16> out;
    add(ps, negate(qr), out);
    return out;
}

inline Expansion<16> lift(const Expansion<2>& x, const Expansion<2>& y)
{
    Expansion<8> xx, yy;
    mul(x, x, xx);
    mul(y, y, yy);
    Expansion<16> out;
    add(xx, yy, out);
    return out;
}

inline double orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy)
{
    return sign_of(cross2(from_diff(ax, cx), from_diff(by, cy), from_diff(ay, cy), from_diff(bx, cx)));
}

inline double incircle_exact(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                             double dy)
{
    const auto adx = from_diff(ax, dx), ady = from_diff(ay, dy);
    const auto bdx = from_diff(bx, dx), bdy = from_diff(by, dy);
    const auto cdx = from_diff(cx, dx), cdy = from_diff(cy, dy);

    const auto bc = cross2(bdx, cdy, cdx, bdy);
    const auto ca = cross2(cdx, ady, adx, cdy);
    const auto ab = cross2(adx, bdy, bdx, ady);

    Expansion<512> a_term, b_term, c_term;
    mul(lift(adx, ady), bc, a_term);
    mul(lift(bdx, bdy), ca, b_term);
    mul(lift(cdx, cdy), ab, c_term);
    Expansion<1024> ab_sum;
    add(a_term, b_term, ab_sum);
    Expansion<1536> det;
    add(ab_sum, c_term, det);
    return sign_of(det);
}

} // namespace detail

/// Positive if a, b, c are counter-clockwise, negative if clockwise, zero if
/// collinear. The sign is exact; the magnitude approximates twice the signed area.
inline double orient2d(double ax, double ay, double bx, double by, double cx, double cy)
{
    double left = (ax - cx) * (by - cy);
    double right = (ay - cy) * (bx - cx);
    double det = left - right;
    double bound = detail::kOrientBound * (std::abs(left) + std::abs(right));
    if (det > bound || -det > bound) {
        return det;
    }
    return detail::orient2d_exact(ax, ay, bx, by, cx, cy);
}

/// Positive if d lies strictly inside the circle through a, b, c (taken
/// counter-clockwise), negative outside, zero when cocircular. The sign is exact.
inline double incircle(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy)
{
    double adx = ax - dx, ady = ay - dy;
    double bdx = bx - dx, bdy = by - dy;
    double cdx = cx - dx, cdy = cy - dy;

    double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    double alift = adx * adx + ady * ady;
    double cdxady = cdx * ady, adxcdy = adx * cdy;
    double blift = bdx * bdx + bdy * bdy;
    double adxbdy = adx * bdy, bdxady = bdx * ady;
    double clift = cdx * cdx + cdy * cdy;

    double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift + (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                       (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    double bound = detail::kInCircleBound * permanent;
    if (det > bound || -det > bound) {
        return det;
    }
    return detail::incircle_exact(ax, ay, bx, by, cx, cy, dx, dy);
}

} // namespace landsite::predicates
