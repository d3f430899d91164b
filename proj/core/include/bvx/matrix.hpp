#pragma once

#include "bvx/rational.hpp"

#include <vector>

namespace bvx {

/// Dense integer matrix, row-major. Small: vertex counts of a diagram level.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<BigInt> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    BigInt& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const BigInt& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static IntMatrix identity(int n);
    bool operator==(const IntMatrix&) const = default;
};

IntMatrix mul(const IntMatrix& lhs, const IntMatrix& rhs);
std::vector<BigInt> mul_vec(const IntMatrix& m, const std::vector<BigInt>& v);
IntMatrix transpose(const IntMatrix& m);
BigInt min_entry(const IntMatrix& m);

/// True iff some power of the (square, non-negative) matrix is strictly
/// positive. Uses boolean powers up to the Wielandt bound n^2 - 2n + 2.
bool is_primitive(const IntMatrix& m);

/// Column rank over the rationals.
int rational_rank(const IntMatrix& m);

/// Solve (m - rho*I) u = 0 over the rationals for a one-dimensional kernel.
/// Returns an unnormalized kernel vector, or empty if the kernel is trivial
/// or has dimension > 1.
std::vector<Rational> kernel_vector(const IntMatrix& m, const Rational& rho);

/// Closed rational interval [lo, hi]; arithmetic is outward-exact (no
/// rounding happens, so enclosures are tight).
struct RInterval {
    Rational lo, hi;

    RInterval() = default;
    RInterval(Rational point) : lo(point), hi(point) {}  // NOLINT
    RInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}

    Rational width() const { return hi - lo; }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }

    friend RInterval operator+(const RInterval& a, const RInterval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }
    friend RInterval operator-(const RInterval& a, const RInterval& b) {
        return {a.lo - b.hi, a.hi - b.lo};
    }
    friend RInterval operator*(const RInterval& a, const RInterval& b);
    friend RInterval operator/(const RInterval& a, const RInterval& b);
};

RInterval interval_pow(const RInterval& base, unsigned exponent);

}  // namespace bvx
