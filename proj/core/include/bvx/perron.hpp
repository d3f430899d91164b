#pragma once

#include "bvx/matrix.hpp"

#include <vector>

namespace bvx {

/// Perron eigendata of a primitive non-negative integer matrix B.
///
/// `left` solves u^T B = rho u^T with u > 0. When the Perron root is an
/// integer (the only way it can be rational, the characteristic polynomial
/// being monic) everything is exact; otherwise certified rational
/// enclosures are returned instead.
struct PerronResult {
    bool exact = false;
    Rational rho;
    std::vector<Rational> left;

    RInterval rho_iv;
    std::vector<RInterval> left_iv;
};

/// Computes the Perron root and a positive left eigenvector of B.
///
/// Enclosures come from Collatz–Wielandt bounds under power iteration on
/// B^T, so they are rigorous at every step; `tol` is the requested width
/// for the enclosure of rho and of each eigenvector entry in the
/// non-exact case. Throws Error(NotPrimitive) if B is not primitive.
PerronResult perron_left(const IntMatrix& b, const Rational& tol);

}  // namespace bvx
