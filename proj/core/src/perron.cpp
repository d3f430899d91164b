#include "bvx/perron.hpp"

#include "bvx/errors.hpp"

#include <algorithm>
#include <optional>

namespace bvx {

namespace {

// One Collatz–Wielandt pass: z > 0, returns (min ratio, max ratio) of
// (A z)_i / z_i and replaces z by A z (gcd-reduced to keep entries small).
std::pair<Rational, Rational> cw_step(const IntMatrix& a, std::vector<BigInt>& z) {
    std::vector<BigInt> next = mul_vec(a, z);
    Rational lo, hi;
    for (size_t i = 0; i < z.size(); ++i) {
        Rational ratio{next[i], z[i]};
        if (i == 0 || ratio < lo) lo = ratio;
        if (i == 0 || ratio > hi) hi = ratio;
    }
    BigInt g = 0;
    for (const BigInt& x : next) g = boost::multiprecision::gcd(g, x);
    if (g > 1)
        for (BigInt& x : next) x /= g;
    z = std::move(next);
    return {lo, hi};
}

// Exact test: is `candidate` the Perron root of A? True iff A - cI has a
// one-dimensional kernel spanned by a strictly signed vector (only the
// Perron root of an irreducible non-negative matrix has one).
std::optional<std::vector<Rational>> try_exact_root(const IntMatrix& a, const BigInt& candidate) {
    std::vector<Rational> u = kernel_vector(a, Rational(candidate));
    if (u.empty()) return std::nullopt;
    int sign = 0;
    for (const Rational& x : u) {
        if (x.sign() == 0) return std::nullopt;
        if (sign == 0) sign = x.sign();
        if (x.sign() != sign) return std::nullopt;
    }
    if (sign < 0)
        for (Rational& x : u) x = -x;
    return u;
}

// Interval Gaussian elimination for (A - rho I) u = 0 with u[n-1] pinned
// to 1: drops one equation (the matrix has rank n-1 at the Perron root,
// but which n-1 rows are independent depends on A) and solves the square
// system against the last column. Fails (returns empty) when a pivot
// interval straddles zero; the caller then tightens rho or the dropped
// row changes.
std::vector<RInterval> interval_eigenvector_drop(const IntMatrix& a, const RInterval& rho,
                                                 int dropped_row) {
    int n = a.rows;
    int dim = n - 1;
    std::vector<RInterval> m(static_cast<size_t>(dim) * dim);
    std::vector<RInterval> rhs(static_cast<size_t>(dim));
    int out_row = 0;
    for (int i = 0; i < n; ++i) {
        if (i == dropped_row) continue;
        for (int j = 0; j < dim; ++j) {
            RInterval v{Rational(a.at(i, j))};
            if (i == j) v = v - rho;
            m[static_cast<size_t>(out_row) * dim + j] = v;
        }
        RInterval last{Rational(a.at(i, n - 1))};
        if (i == n - 1) last = last - rho;
        rhs[static_cast<size_t>(out_row)] = RInterval(Rational(0)) - last;
        ++out_row;
    }
    auto at = [&](int r, int c) -> RInterval& { return m[static_cast<size_t>(r) * dim + c]; };
    std::vector<int> perm(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) perm[static_cast<size_t>(i)] = i;
    for (int col = 0; col < dim; ++col) {
        // pick the pivot with the largest mignitude
        int best = -1;
        Rational best_mig;
        for (int r = col; r < dim; ++r) {
            const RInterval& p = at(r, col);
            if (p.contains_zero()) continue;
            Rational mig = min(p.lo.abs(), p.hi.abs());
            if (best < 0 || mig > best_mig) {
                best = r;
                best_mig = mig;
            }
        }
        if (best < 0) return {};
        if (best != col) {
            for (int c = 0; c < dim; ++c) std::swap(at(best, c), at(col, c));
            std::swap(rhs[static_cast<size_t>(best)], rhs[static_cast<size_t>(col)]);
        }
        for (int r = col + 1; r < dim; ++r) {
            if (at(r, col).contains_zero() && at(r, col).lo == at(r, col).hi) continue;
            RInterval f = at(r, col) / at(col, col);
            for (int c = col; c < dim; ++c) at(r, c) = at(r, c) - f * at(col, c);
            rhs[static_cast<size_t>(r)] = rhs[static_cast<size_t>(r)] - f * rhs[static_cast<size_t>(col)];
        }
    }
    std::vector<RInterval> u(static_cast<size_t>(n), RInterval(Rational(0)));
    u[static_cast<size_t>(n - 1)] = RInterval(Rational(1));
    for (int r = dim - 1; r >= 0; --r) {
        RInterval acc = rhs[static_cast<size_t>(r)];
        for (int c = r + 1; c < dim; ++c) acc = acc - at(r, c) * u[static_cast<size_t>(c)];
        if (at(r, r).contains_zero()) return {};
        u[static_cast<size_t>(r)] = acc / at(r, r);
    }
    return u;
}

std::vector<RInterval> interval_eigenvector(const IntMatrix& a, const RInterval& rho) {
    if (a.rows == 1) return {RInterval(Rational(1))};
    for (int drop = a.rows - 1; drop >= 0; --drop) {
        auto u = interval_eigenvector_drop(a, rho, drop);
        if (!u.empty()) return u;
    }
    return {};
}

}  // namespace

PerronResult perron_left(const IntMatrix& b, const Rational& tol) {
    if (b.rows != b.cols || b.rows == 0)
        throw Error(Errc::InvalidArgument, "perron_left needs a square matrix");
    if (!is_primitive(b)) throw Error(Errc::NotPrimitive, "matrix is not primitive");

    IntMatrix a = transpose(b);
    int n = a.rows;
    std::vector<BigInt> z(static_cast<size_t>(n), 1);
    Rational lo, hi;
    BigInt tested_up_to = -1;

    PerronResult out;
    const int max_rounds = 20000;
    for (int round = 1; round <= max_rounds; ++round) {
        auto [rlo, rhi] = cw_step(a, z);
        // Collatz–Wielandt bounds are valid per step; keep the tightest seen.
        if (round == 1 || rlo > lo) lo = rlo;
        if (round == 1 || rhi < hi) hi = rhi;

        if (hi - lo < Rational(1)) {
            // any rational Perron root is an integer; scan the enclosure once
            BigInt first = lo.num() / lo.den();  // floor for positive lo
            for (BigInt c = first; Rational(c) <= hi; ++c) {
                if (Rational(c) < lo || c == tested_up_to) continue;
                if (auto u = try_exact_root(a, c)) {
                    out.exact = true;
                    out.rho = Rational(c);
                    out.left = std::move(*u);
                    return out;
                }
                tested_up_to = c;
            }
        }
        if (hi - lo <= tol) {
            RInterval rho_iv{lo, hi};
            std::vector<RInterval> u = interval_eigenvector(a, rho_iv);
            bool ok = !u.empty();
            for (const RInterval& x : u)
                if (x.lo.sign() <= 0 || x.width() > tol) ok = false;
            if (ok) {
                out.exact = false;
                out.rho_iv = rho_iv;
                out.left_iv = std::move(u);
                return out;
            }
            // enclosure too loose for the linear solve; keep iterating
        }
    }
    throw Error(Errc::InvalidArgument, "perron iteration did not converge");
}

}  // namespace bvx
