#include "bvx/vershik.hpp"

#include "bvx/errors.hpp"
#include "bvx/perron.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace bvx {

namespace {

void require(bool cond, Errc code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

int positive_mod(long long a, long long m) {
    long long r = a % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

std::pair<int, int> tail_periodicity(const OrderedBratteliDiagram& d, const PathPoint& x) {
    if (x.tail.kind == TailKind::Min || x.tail.kind == TailKind::Max)
        return {std::max(x.prefix.depth(), d.block_start()), d.block_period()};
    return {x.prefix.depth() + static_cast<int>(x.tail.preamble.size()),
            static_cast<int>(x.tail.cycle.size())};
}

std::string tail_tag(const TailPolicy& tail) {
    switch (tail.kind) {
        case TailKind::Min: return "min";
        case TailKind::Max: return "max";
        case TailKind::Id: return "id";
        case TailKind::Periodic: return "periodic";
    }
    return "?";
}

PathPoint make_path_point(const OrderedBratteliDiagram& d, FinitePath prefix, TailPolicy tail) {
    require(path_valid(d, prefix), Errc::InvalidArgument, "invalid prefix path");
    PathPoint x{std::move(prefix), std::move(tail)};
    int depth = x.prefix.depth();
    int end = path_end_vertex(d, x.prefix);

    if (x.tail.kind == TailKind::Min || x.tail.kind == TailKind::Max) {
        Extreme side = x.tail.kind == TailKind::Min ? Extreme::Min : Extreme::Max;
        require(x.tail.preamble.empty() && x.tail.cycle.empty(), Errc::InvalidArgument,
                "extreme tails carry no explicit edges");
        if (d.stationary()) {
            if (!properly_ordered_side(d, side))
                throw Error(Errc::NotProperlyOrdered,
                            "extreme tail needs a unique extreme path on its side");
            require(end == extreme_trace_vertex(d, side, depth), Errc::InvalidArgument,
                    "prefix does not end on the extreme trace");
        }
        return x;
    }

    require(d.stationary(), Errc::InvalidArgument, "explicit tails need a stationary diagram");
    int p = d.block_period();
    const auto& cyc = x.tail.cycle;
    require(!cyc.empty(), Errc::InvalidArgument, "empty tail cycle");
    require(static_cast<int>(cyc.size()) % p == 0, Errc::InvalidArgument,
            "tail cycle length must be a multiple of the block period");
    require(x.tail.phase == depth + static_cast<int>(x.tail.preamble.size()),
            Errc::InvalidArgument, "tail cycle phase must sit right after the preamble");
    require(x.tail.phase >= d.block_start(), Errc::InvalidArgument,
            "tail cycle must start inside the repeating block");

    // walk the preamble, then one full cycle period, checking chaining
    int at = end;
    int level = depth;
    for (int e : x.tail.preamble) {
        ++level;
        const auto& es = d.edge_set(level);
        require(e >= 0 && e < static_cast<int>(es.size()), Errc::InvalidArgument,
                "preamble edge out of range");
        require(es[static_cast<size_t>(e)].source == at, Errc::InvalidArgument,
                "preamble breaks the source/range chain");
        at = es[static_cast<size_t>(e)].range;
    }
    int cycle_entry = at;
    for (size_t i = 0; i < cyc.size(); ++i) {
        ++level;
        const auto& es = d.edge_set(level);
        int e = cyc[i];
        require(e >= 0 && e < static_cast<int>(es.size()), Errc::InvalidArgument,
                "cycle edge out of range");
        require(es[static_cast<size_t>(e)].source == at, Errc::InvalidArgument,
                "cycle breaks the source/range chain");
        at = es[static_cast<size_t>(e)].range;
    }
    require(at == cycle_entry, Errc::InvalidArgument, "tail cycle does not close up");
    return x;
}

PathPoint min_path_point(const OrderedBratteliDiagram& d, int depth) {
    return make_path_point(d, extreme_path(d, Extreme::Min, depth), TailPolicy{TailKind::Min});
}

PathPoint max_path_point(const OrderedBratteliDiagram& d, int depth) {
    return make_path_point(d, extreme_path(d, Extreme::Max, depth), TailPolicy{TailKind::Max});
}

int edge_at(const OrderedBratteliDiagram& d, const PathPoint& x, int level) {
    require(level >= 1, Errc::InvalidArgument, "levels start at 1");
    if (level <= x.prefix.depth()) return x.prefix.edges[static_cast<size_t>(level - 1)];
    if (!d.stationary())
        throw Error(Errc::DepthExhausted,
                    "finite diagram: no tail edges beyond the prefix at level " + std::to_string(level));
    switch (x.tail.kind) {
        case TailKind::Min: return extreme_edge_index(d, Extreme::Min, level);
        case TailKind::Max: return extreme_edge_index(d, Extreme::Max, level);
        case TailKind::Id:
        case TailKind::Periodic: {
            int idx = level - x.prefix.depth() - 1;
            if (idx < static_cast<int>(x.tail.preamble.size()))
                return x.tail.preamble[static_cast<size_t>(idx)];
            return x.tail.cycle[static_cast<size_t>(
                positive_mod(level - x.tail.phase - 1, static_cast<long long>(x.tail.cycle.size())))];
        }
    }
    throw Error(Errc::InvalidArgument, "bad tail kind");
}

PathPoint materialize(const OrderedBratteliDiagram& d, const PathPoint& x, int depth) {
    if (depth <= x.prefix.depth()) return x;
    PathPoint out = x;
    for (int n = x.prefix.depth() + 1; n <= depth; ++n)
        out.prefix.edges.push_back(edge_at(d, x, n));
    if (out.tail.kind == TailKind::Id || out.tail.kind == TailKind::Periodic) {
        int consumed = depth - x.prefix.depth();
        int from_preamble = std::min<int>(consumed, static_cast<int>(out.tail.preamble.size()));
        out.tail.preamble.erase(out.tail.preamble.begin(),
                                out.tail.preamble.begin() + from_preamble);
        // consumption past the preamble just shifts into the cycle; the
        // absolute phase keeps indexing consistent
        if (consumed > from_preamble) {
            require(out.tail.preamble.empty(), Errc::InvalidArgument, "preamble bookkeeping");
        }
    }
    return out;
}

bool same_path(const OrderedBratteliDiagram& d, const PathPoint& x, const PathPoint& y) {
    if (!d.stationary()) {
        int depth = d.explicit_levels();
        for (int n = 1; n <= depth; ++n)
            if (edge_at(d, x, n) != edge_at(d, y, n)) return false;
        return true;
    }
    auto [ax, px] = tail_periodicity(d, x);
    auto [ay, py] = tail_periodicity(d, y);
    int depth = std::max(ax, ay) + std::lcm(px, py);
    for (int n = 1; n <= depth; ++n)
        if (edge_at(d, x, n) != edge_at(d, y, n)) return false;
    return true;
}

Rational metric_dE(const OrderedBratteliDiagram& d, const PathPoint& x, const PathPoint& y,
                   int resolution) {
    for (int n = 1; n <= resolution; ++n)
        if (edge_at(d, x, n) != edge_at(d, y, n)) return Rational::int_pow(2, -(n - 1));
    return Rational(0);
}

namespace {

std::optional<VershikStep> step_impl(const OrderedBratteliDiagram& d, const PathPoint& x,
                                     bool forward) {
    auto is_last = [&](int level, int e) {
        return forward ? is_max_edge(d, level, e) : is_min_edge(d, level, e);
    };
    int scan_limit;
    if (!d.stationary()) {
        scan_limit = d.explicit_levels();
    } else {
        auto [anchor, period] = tail_periodicity(d, x);
        scan_limit = anchor + period;
    }
    int pos = -1;
    for (int n = 1; n <= scan_limit; ++n) {
        if (!is_last(n, edge_at(d, x, n))) {
            pos = n;
            break;
        }
    }
    if (pos < 0) {
        if (!d.stationary())
            throw Error(Errc::DepthExhausted,
                        "no non-extreme edge within the explicit levels");
        return std::nullopt;  // x is the extreme path on this side
    }

    PathPoint grown = materialize(d, x, std::max(pos, x.prefix.depth()));
    const auto& es = d.edge_set(pos);
    int cur = grown.prefix.edges[static_cast<size_t>(pos - 1)];
    auto cls = edges_into(d, pos, es[static_cast<size_t>(cur)].range);
    int rank = es[static_cast<size_t>(cur)].order;
    int replacement = forward ? cls[static_cast<size_t>(rank + 1)]
                              : cls[static_cast<size_t>(rank - 1)];
    // rebuild the head below the replacement: minimal path for the
    // successor, maximal path for the predecessor
    grown.prefix.edges[static_cast<size_t>(pos - 1)] = replacement;
    int v = es[static_cast<size_t>(replacement)].source;
    for (int m = pos - 1; m >= 1; --m) {
        auto into = edges_into(d, m, v);
        int e = forward ? into.front() : into.back();
        grown.prefix.edges[static_cast<size_t>(m - 1)] = e;
        v = d.edge_set(m)[static_cast<size_t>(e)].source;
    }
    return VershikStep{std::move(grown), pos};
}

}  // namespace

std::optional<VershikStep> successor_step(const OrderedBratteliDiagram& d, const PathPoint& x) {
    return step_impl(d, x, true);
}

std::optional<PathPoint> successor(const OrderedBratteliDiagram& d, const PathPoint& x) {
    auto s = successor_step(d, x);
    if (!s) return std::nullopt;
    return std::move(s->next);
}

std::optional<VershikStep> predecessor_step(const OrderedBratteliDiagram& d, const PathPoint& x) {
    return step_impl(d, x, false);
}

std::optional<PathPoint> predecessor(const OrderedBratteliDiagram& d, const PathPoint& x) {
    auto s = predecessor_step(d, x);
    if (!s) return std::nullopt;
    return std::move(s->next);
}

std::optional<FinitePath> finite_successor(const OrderedBratteliDiagram& d, const FinitePath& p) {
    require(path_valid(d, p) && p.depth() >= 1, Errc::InvalidArgument, "invalid path");
    int pos = -1;
    for (int n = 1; n <= p.depth(); ++n)
        if (!is_max_edge(d, n, p.edges[static_cast<size_t>(n - 1)])) {
            pos = n;
            break;
        }
    if (pos < 0) return std::nullopt;
    FinitePath out = p;
    const auto& es = d.edge_set(pos);
    int cur = out.edges[static_cast<size_t>(pos - 1)];
    auto cls = edges_into(d, pos, es[static_cast<size_t>(cur)].range);
    int replacement = cls[static_cast<size_t>(es[static_cast<size_t>(cur)].order + 1)];
    out.edges[static_cast<size_t>(pos - 1)] = replacement;
    int v = es[static_cast<size_t>(replacement)].source;
    for (int m = pos - 1; m >= 1; --m) {
        auto into = edges_into(d, m, v);
        out.edges[static_cast<size_t>(m - 1)] = into.front();
        v = d.edge_set(m)[static_cast<size_t>(into.front())].source;
    }
    return out;
}

std::vector<PathPoint> orbit(const OrderedBratteliDiagram& d, const PathPoint& x, long long k) {
    require(k >= 0, Errc::InvalidArgument, "negative step count");
    std::vector<PathPoint> out;
    out.reserve(static_cast<size_t>(k) + 1);
    out.push_back(x);
    PathPoint cur = x;
    for (long long i = 0; i < k; ++i) {
        auto s = successor(d, cur);
        if (s) {
            cur = std::move(*s);
        } else {
            // x^max wraps to x^min at matching resolution
            cur = min_path_point(d, cur.prefix.depth());
        }
        out.push_back(cur);
    }
    return out;
}

std::string MeasureValue::str() const {
    if (exact) return value.str();
    return "[" + enclosure.lo.str() + "," + enclosure.hi.str() + "]";
}

namespace {

// Measure weights per vertex for every explicit level, from the left
// Perron vector at the top level chained down through the transposed
// incidence matrices. Normalization (division by the level-0 weight)
// happens at query time. T is Rational or RInterval.
template <typename T>
std::vector<std::vector<T>> weight_chain(const OrderedBratteliDiagram& d,
                                         const std::vector<T>& top) {
    int l = d.explicit_levels();
    std::vector<std::vector<T>> w(static_cast<size_t>(l) + 1);
    w[static_cast<size_t>(l)] = top;
    for (int n = l; n >= 1; --n) {
        std::vector<T> lower(static_cast<size_t>(d.vertex_count(n - 1)), T(Rational(0)));
        for (const Edge& e : d.edge_set(n))
            lower[static_cast<size_t>(e.source)] =
                lower[static_cast<size_t>(e.source)] + w[static_cast<size_t>(n)][static_cast<size_t>(e.range)];
        w[static_cast<size_t>(n - 1)] = std::move(lower);
    }
    return w;
}

}  // namespace

MeasureValue cylinder_measure(const OrderedBratteliDiagram& d, const Cylinder& p) {
    require(d.stationary(), Errc::NotStationary, "measures need a stationary diagram");
    require(path_valid(d, p.path), Errc::InvalidArgument, "invalid cylinder path");
    int k = d.block_start(), period = d.block_period(), l = d.explicit_levels();
    IntMatrix block = incidence_product(d, k, k + period);
    if (!is_primitive(block)) throw Error(Errc::NotPrimitive, "block incidence matrix not primitive");

    int n = p.path.depth();
    int v = path_end_vertex(d, p.path);
    // block count j and offset level k+t realizing level n
    int j = 0, t = 0;
    if (n > l) {
        t = positive_mod(n - k - 1, period) + 1;
        j = (n - k - t) / period;
    }

    const Rational target{BigInt(1), Rational::int_pow(10, 12).num()};
    Rational tol = target * Rational{BigInt(1), BigInt(1000)};
    for (int attempt = 0; attempt < 8; ++attempt) {
        PerronResult pr = perron_left(block, tol);
        if (pr.exact) {
            auto w = weight_chain<Rational>(d, pr.left);
            Rational val = n <= l ? w[static_cast<size_t>(n)][static_cast<size_t>(v)]
                                  : w[static_cast<size_t>(k + t)][static_cast<size_t>(v)] *
                                        Rational::pow(Rational(1) / pr.rho, static_cast<unsigned>(j));
            MeasureValue out;
            out.exact = true;
            out.value = val / w[0][0];
            out.enclosure = RInterval(out.value);
            return out;
        }
        auto w = weight_chain<RInterval>(d, pr.left_iv);
        RInterval val = n <= l ? w[static_cast<size_t>(n)][static_cast<size_t>(v)]
                               : w[static_cast<size_t>(k + t)][static_cast<size_t>(v)] *
                                     interval_pow(RInterval(Rational(1)) / pr.rho_iv,
                                                  static_cast<unsigned>(j));
        RInterval result = val / w[0][0];
        if (result.width() <= target) {
            MeasureValue out;
            out.exact = false;
            out.enclosure = result;
            return out;
        }
        tol = tol * Rational{BigInt(1), BigInt(1) << 20};
    }
    throw Error(Errc::InvalidArgument, "measure enclosure did not reach the target width");
}

std::string k0_str(const K0Element& a) {
    std::string s = std::to_string(a.level) + ":";
    for (size_t i = 0; i < a.v.size(); ++i) {
        if (i) s += ",";
        s += a.v[i].str();
    }
    return s;
}

K0Element k0_parse(const std::string& text) {
    auto colon = text.find(':');
    require(colon != std::string::npos, Errc::MalformedInput, "K0 element needs 'level:v1,v2,...'");
    K0Element a;
    try {
        a.level = std::stoi(text.substr(0, colon));
        std::string rest = text.substr(colon + 1);
        size_t pos = 0;
        while (pos <= rest.size()) {
            size_t comma = rest.find(',', pos);
            std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                          : comma - pos);
            require(!tok.empty(), Errc::MalformedInput, "empty K0 entry");
            a.v.emplace_back(tok);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(Errc::MalformedInput, "bad K0 element: '" + text + "'");
    }
    return a;
}

K0Element k0_map(const OrderedBratteliDiagram& d, const K0Element& a, int to_level) {
    require(to_level >= a.level, Errc::LevelOutOfRange, "target level below the element");
    require(d.level_available(to_level), Errc::LevelOutOfRange, "target level not available");
    require(static_cast<int>(a.v.size()) == d.vertex_count(a.level), Errc::InvalidArgument,
            "K0 vector length mismatch");
    K0Element out{to_level, a.v};
    for (int n = a.level + 1; n <= to_level; ++n)
        out.v = mul_vec(incidence_matrix(d, n).m, out.v);
    return out;
}

bool k0_equal(const OrderedBratteliDiagram& d, const K0Element& a, const K0Element& b) {
    int common = std::max(a.level, b.level);
    // every distinct incidence matrix appearing beyond the common level
    // must be injective over the rationals for equality there to decide
    // equality in the limit
    int horizon = d.stationary() ? std::max(common, d.explicit_levels()) + d.block_period()
                                 : d.explicit_levels();
    std::set<int> seen;
    for (int n = common + 1; n <= horizon; ++n) {
        int idx = d.edge_level_index(n);
        if (!seen.insert(idx).second) continue;
        const IntMatrix& m = incidence_matrix(d, n).m;
        if (rational_rank(m) != m.cols)
            throw Error(Errc::UndecidableNonInjective,
                        "incidence matrix at level " + std::to_string(n) +
                            " is not injective over the rationals");
    }
    return k0_map(d, a, common).v == k0_map(d, b, common).v;
}

}  // namespace bvx
