#include "bvx/matrix.hpp"

#include "bvx/errors.hpp"

#include <algorithm>

namespace bvx {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix mul(const IntMatrix& lhs, const IntMatrix& rhs) {
    if (lhs.cols != rhs.rows) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
    IntMatrix out(lhs.rows, rhs.cols);
    for (int i = 0; i < lhs.rows; ++i)
        for (int k = 0; k < lhs.cols; ++k) {
            const BigInt& l = lhs.at(i, k);
            if (l == 0) continue;
            for (int j = 0; j < rhs.cols; ++j) out.at(i, j) += l * rhs.at(k, j);
        }
    return out;
}

std::vector<BigInt> mul_vec(const IntMatrix& m, const std::vector<BigInt>& v) {
    if (static_cast<int>(v.size()) != m.cols)
        throw Error(Errc::InvalidArgument, "matrix/vector shape mismatch");
    std::vector<BigInt> out(static_cast<size_t>(m.rows), 0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m.at(i, j) != 0) out[i] += m.at(i, j) * v[j];
    return out;
}

IntMatrix transpose(const IntMatrix& m) {
    IntMatrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
    return out;
}

BigInt min_entry(const IntMatrix& m) {
    BigInt best = m.a.empty() ? BigInt(0) : m.a[0];
    for (const BigInt& x : m.a) best = std::min(best, x);
    return best;
}

bool is_primitive(const IntMatrix& m) {
    if (m.rows != m.cols || m.rows == 0)
        throw Error(Errc::InvalidArgument, "primitivity needs a square matrix");
    int n = m.rows;
    // Boolean adjacency, iterated squaring would overshoot the Wielandt
    // bound; plain powers are fine at this scale.
    std::vector<char> cur(static_cast<size_t>(n) * n), orig(static_cast<size_t>(n) * n);
    for (int i = 0; i < n * n; ++i) orig[i] = m.a[i] > 0 ? 1 : 0;
    cur = orig;
    auto all_pos = [&](const std::vector<char>& b) {
        return std::all_of(b.begin(), b.end(), [](char c) { return c != 0; });
    };
    int bound = n * n - 2 * n + 2;
    for (int p = 1; p <= std::max(bound, 1); ++p) {
        if (all_pos(cur)) return true;
        std::vector<char> nxt(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                if (cur[static_cast<size_t>(i) * n + k])
                    for (int j = 0; j < n; ++j)
                        if (orig[static_cast<size_t>(k) * n + j])
                            nxt[static_cast<size_t>(i) * n + j] = 1;
        cur = std::move(nxt);
    }
    return all_pos(cur);
}

namespace {

// Gaussian elimination over Rational; returns row-echelon pivots count.
// `work` is row-major rows x cols.
int eliminate(std::vector<Rational>& work, int rows, int cols,
              std::vector<int>* pivot_cols = nullptr) {
    auto at = [&](int r, int c) -> Rational& { return work[static_cast<size_t>(r) * cols + c]; };
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!at(r, col).is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < cols; ++c) std::swap(at(pivot, c), at(rank, c));
        Rational inv = Rational(1) / at(rank, col);
        for (int c = col; c < cols; ++c) at(rank, c) *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || at(r, col).is_zero()) continue;
            Rational f = at(r, col);
            for (int c = col; c < cols; ++c) at(r, c) -= f * at(rank, c);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    return rank;
}

}  // namespace

int rational_rank(const IntMatrix& m) {
    std::vector<Rational> work;
    work.reserve(m.a.size());
    for (const BigInt& x : m.a) work.emplace_back(x);
    return eliminate(work, m.rows, m.cols);
}

std::vector<Rational> kernel_vector(const IntMatrix& m, const Rational& rho) {
    if (m.rows != m.cols) throw Error(Errc::InvalidArgument, "kernel_vector needs square matrix");
    int n = m.rows;
    std::vector<Rational> work(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational v(m.at(i, j));
            if (i == j) v -= rho;
            work[static_cast<size_t>(i) * n + j] = v;
        }
    std::vector<int> pivots;
    int rank = eliminate(work, n, n, &pivots);
    if (rank != n - 1) return {};
    // Single free column: back-substitute with the free variable set to 1.
    std::vector<char> is_pivot(static_cast<size_t>(n), 0);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = 1;
    int free_col = -1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) {
            free_col = c;
            break;
        }
    std::vector<Rational> u(static_cast<size_t>(n));
    u[static_cast<size_t>(free_col)] = Rational(1);
    auto at = [&](int r, int c) -> const Rational& {
        return work[static_cast<size_t>(r) * n + c];
    };
    for (int r = 0; r < rank; ++r) {
        int pc = pivots[static_cast<size_t>(r)];
        u[static_cast<size_t>(pc)] = -at(r, free_col);
    }
    return u;
}

RInterval operator*(const RInterval& a, const RInterval& b) {
    Rational c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
    return {min(min(c1, c2), min(c3, c4)), max(max(c1, c2), max(c3, c4))};
}

RInterval operator/(const RInterval& a, const RInterval& b) {
    if (b.contains_zero()) throw Error(Errc::InvalidArgument, "interval division through zero");
    RInterval inv(Rational(1) / b.hi, Rational(1) / b.lo);
    return a * inv;
}

RInterval interval_pow(const RInterval& base, unsigned exponent) {
    RInterval acc{Rational(1), Rational(1)};
    for (unsigned i = 0; i < exponent; ++i) acc = acc * base;
    return acc;
}

}  // namespace bvx
