#pragma once

// Brute-force reference implementations used only by tests. These stay
// independent of the library's algorithms: path enumeration plus explicit
// sorting here, functional-graph walks there.

#include "bvx/bratteli.hpp"
#include "bvx/ifs.hpp"

#include <algorithm>
#include <vector>

namespace bvx::oracle {

/// Every finite path from v_0 to depth n, by explicit product enumeration.
inline std::vector<FinitePath> all_paths(const OrderedBratteliDiagram& d, int depth) {
    std::vector<FinitePath> acc{FinitePath{}};
    for (int level = 1; level <= depth; ++level) {
        std::vector<FinitePath> next;
        const auto& es = d.edge_set(level);
        for (const FinitePath& p : acc) {
            int at = path_end_vertex(d, p);
            for (size_t e = 0; e < es.size(); ++e) {
                if (es[e].source != at) continue;
                FinitePath q = p;
                q.edges.push_back(static_cast<int>(e));
                next.push_back(std::move(q));
            }
        }
        acc = std::move(next);
    }
    return acc;
}

/// Right-to-left lexicographic comparison of equal-depth paths by ranks.
inline bool lex_less(const OrderedBratteliDiagram& d, const FinitePath& a, const FinitePath& b) {
    auto ra = path_ranks(d, a), rb = path_ranks(d, b);
    for (int i = static_cast<int>(ra.size()) - 1; i >= 0; --i) {
        if (ra[static_cast<size_t>(i)] != rb[static_cast<size_t>(i)])
            return ra[static_cast<size_t>(i)] < rb[static_cast<size_t>(i)];
    }
    return false;
}

/// Depth-n paths into one range vertex, sorted right-to-left
/// lexicographically: the reference order the Vershik successor must follow.
inline std::vector<FinitePath> sorted_class(const OrderedBratteliDiagram& d, int depth,
                                            int end_vertex) {
    std::vector<FinitePath> cls;
    for (FinitePath& p : all_paths(d, depth))
        if (path_end_vertex(d, p) == end_vertex) cls.push_back(std::move(p));
    std::sort(cls.begin(), cls.end(),
              [&](const FinitePath& a, const FinitePath& b) { return lex_less(d, a, b); });
    return cls;
}

/// Rasterized covering check: subdivide the cube into base^(k*dim) cells
/// and ask whether every cell lies inside some image box.
inline bool rasterized_cover(const ContractionSystem& sys, std::span<const MapRef> maps,
                             int grid_base, int k) {
    std::vector<Box> boxes;
    for (const MapRef& f : maps) {
        MapRef one[] = {f};
        boxes.push_back(*image_box(sys, one).box);
    }
    int dim = sys.dimension;
    long long side = 1;
    for (int i = 0; i < k; ++i) side *= grid_base;
    std::vector<long long> cell(static_cast<size_t>(dim), 0);
    Rational h{BigInt(1), BigInt(side)};
    while (true) {
        Box c;
        for (int a = 0; a < dim; ++a) {
            c.lo.push_back(Rational(cell[static_cast<size_t>(a)]) * h);
            c.hi.push_back(Rational(cell[static_cast<size_t>(a)] + 1) * h);
        }
        bool covered = false;
        for (const Box& b : boxes)
            if (b.contains_box(c)) {
                covered = true;
                break;
            }
        if (!covered) return false;
        int a = dim - 1;
        while (a >= 0 && cell[static_cast<size_t>(a)] == side - 1) {
            cell[static_cast<size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
        ++cell[static_cast<size_t>(a)];
    }
    return true;
}

/// Stationary diagram with a two-level repeating block: head v_0 -> {a, b},
/// then E_2 = {a->c, a->c, b->c} and E_3 = {c->a, c->a, c->b, c->b}
/// repeating with period 2. Properly ordered on both sides; block
/// composite incidence [[4,2],[4,2]] with Perron root 6.
inline OrderedBratteliDiagram period_two_stationary() {
    OrderedBratteliDiagram d;
    d.levels = {{"v"}, {"a", "b"}, {"c"}, {"a", "b"}};
    d.edge_levels = {
        {Edge{0, 0, 0, {}}, Edge{0, 1, 0, {}}},
        {Edge{0, 0, 0, {}}, Edge{0, 0, 1, {}}, Edge{1, 0, 2, {}}},
        {Edge{0, 0, 0, {}}, Edge{0, 0, 1, {}}, Edge{0, 1, 0, {}}, Edge{0, 1, 1, {}}},
    };
    d.repeat_from = 1;
    return d;
}

/// Two-vertex stationary diagram: head edges v_0 -> {a, b}, then a block
/// level with `per_pair[i][j]` edges from vertex i to vertex j. Ranks are
/// assigned within each range class in (source, multiplicity) order.
inline OrderedBratteliDiagram two_vertex_stationary(int head_per_vertex,
                                                    const std::vector<std::vector<int>>& per_pair) {
    OrderedBratteliDiagram d;
    d.levels = {{"v"}, {"a", "b"}, {"a", "b"}};
    std::vector<Edge> head;
    for (int v = 0; v < 2; ++v)
        for (int i = 0; i < head_per_vertex; ++i) head.push_back(Edge{0, v, i, std::nullopt});
    std::vector<Edge> block;
    std::vector<int> next_rank(2, 0);
    for (int src = 0; src < 2; ++src)
        for (int dst = 0; dst < 2; ++dst)
            for (int i = 0; i < per_pair[static_cast<size_t>(src)][static_cast<size_t>(dst)]; ++i)
                block.push_back(Edge{src, dst, next_rank[static_cast<size_t>(dst)]++, std::nullopt});
    d.edge_levels = {std::move(head), std::move(block)};
    d.repeat_from = 1;
    return d;
}

}  // namespace bvx::oracle
