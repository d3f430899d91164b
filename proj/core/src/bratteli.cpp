#include "bvx/bratteli.hpp"

#include "bvx/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bvx {

namespace {

void require(bool cond, Errc code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

}  // namespace

int OrderedBratteliDiagram::block_start() const {
    require(stationary(), Errc::NotStationary, "diagram has no repeating tail");
    return *repeat_from;
}

int OrderedBratteliDiagram::block_period() const {
    return explicit_levels() - block_start();
}

bool OrderedBratteliDiagram::level_available(int n) const {
    if (n < 0) return false;
    return stationary() || n <= explicit_levels();
}

int OrderedBratteliDiagram::vertex_level_index(int n) const {
    require(level_available(n), Errc::LevelOutOfRange, "level beyond finite diagram");
    int l = explicit_levels();
    if (n <= l) return n;
    int k = block_start(), p = block_period();
    return k + (n - k) % p;
}

int OrderedBratteliDiagram::edge_level_index(int n) const {
    require(n >= 1 && level_available(n), Errc::LevelOutOfRange, "edge level out of range");
    int l = explicit_levels();
    if (n <= l) return n - 1;
    int k = block_start(), p = block_period();
    return k + (n - k - 1) % p;  // E_n realized by E_{k+1}..E_L cyclically
}

int OrderedBratteliDiagram::vertex_count(int n) const {
    return static_cast<int>(levels[static_cast<size_t>(vertex_level_index(n))].size());
}

const std::vector<Edge>& OrderedBratteliDiagram::edge_set(int n) const {
    return edge_levels[static_cast<size_t>(edge_level_index(n))];
}

OrderedBratteliDiagram make_odometer(int edges_per_level) {
    require(edges_per_level >= 1, Errc::InvalidArgument, "need at least one edge");
    OrderedBratteliDiagram d;
    d.levels = {{"v"}, {"v"}};
    std::vector<Edge> e;
    for (int i = 0; i < edges_per_level; ++i) e.push_back(Edge{0, 0, i, std::nullopt});
    d.edge_levels = {std::move(e)};
    d.repeat_from = 0;
    return d;
}

bool path_valid(const OrderedBratteliDiagram& d, const FinitePath& p) {
    int at = 0;
    for (int i = 0; i < p.depth(); ++i) {
        int level = i + 1;
        if (!d.level_available(level)) return false;
        const auto& es = d.edge_set(level);
        int idx = p.edges[static_cast<size_t>(i)];
        if (idx < 0 || idx >= static_cast<int>(es.size())) return false;
        if (es[static_cast<size_t>(idx)].source != at) return false;
        at = es[static_cast<size_t>(idx)].range;
    }
    return true;
}

int path_end_vertex(const OrderedBratteliDiagram& d, const FinitePath& p) {
    if (p.edges.empty()) return 0;
    return d.edge_set(p.depth())[static_cast<size_t>(p.edges.back())].range;
}

std::vector<int> path_ranks(const OrderedBratteliDiagram& d, const FinitePath& p) {
    std::vector<int> out;
    out.reserve(p.edges.size());
    for (int i = 0; i < p.depth(); ++i)
        out.push_back(d.edge_set(i + 1)[static_cast<size_t>(p.edges[static_cast<size_t>(i)])].order);
    return out;
}

FinitePath path_from_ranks(const OrderedBratteliDiagram& d, std::span<const int> ranks) {
    FinitePath p;
    int at = 0;
    for (size_t i = 0; i < ranks.size(); ++i) {
        int level = static_cast<int>(i) + 1;
        const auto& es = d.edge_set(level);
        int chosen = -1;
        for (size_t e = 0; e < es.size(); ++e) {
            if (es[e].source != at || es[e].order != ranks[i]) continue;
            if (chosen < 0 || es[e].range < es[static_cast<size_t>(chosen)].range)
                chosen = static_cast<int>(e);
        }
        require(chosen >= 0, Errc::InvalidArgument,
                "no edge with rank " + std::to_string(ranks[i]) + " from the current vertex at level " +
                    std::to_string(level));
        p.edges.push_back(chosen);
        at = es[static_cast<size_t>(chosen)].range;
    }
    return p;
}

std::vector<int> edges_into(const OrderedBratteliDiagram& d, int n, int v) {
    const auto& es = d.edge_set(n);
    std::vector<int> by_rank;
    for (size_t i = 0; i < es.size(); ++i)
        if (es[i].range == v) by_rank.push_back(static_cast<int>(i));
    std::sort(by_rank.begin(), by_rank.end(), [&](int a, int b) {
        return es[static_cast<size_t>(a)].order < es[static_cast<size_t>(b)].order;
    });
    return by_rank;
}

bool is_max_edge(const OrderedBratteliDiagram& d, int n, int edge_index) {
    const auto& es = d.edge_set(n);
    const Edge& e = es[static_cast<size_t>(edge_index)];
    int cls = 0;
    for (const Edge& f : es)
        if (f.range == e.range) ++cls;
    return e.order == cls - 1;
}

bool is_min_edge(const OrderedBratteliDiagram& d, int n, int edge_index) {
    return d.edge_set(n)[static_cast<size_t>(edge_index)].order == 0;
}

ValidationReport validate_diagram(const OrderedBratteliDiagram& d) {
    ValidationReport report;
    auto flag = [&](std::string code, int level, std::string msg) {
        report.violations.push_back(Violation{std::move(code), level, std::move(msg)});
    };

    if (d.levels.empty() || d.levels[0].size() != 1)
        flag("root", 0, "V_0 must consist of exactly one vertex");
    for (size_t i = 0; i < d.levels.size(); ++i)
        if (d.levels[i].empty()) flag("empty_vertex_set", static_cast<int>(i), "empty vertex set");
    if (d.levels.size() != d.edge_levels.size() + 1)
        flag("levels", 0, "need one more vertex level than edge levels");

    for (size_t li = 0; li < d.edge_levels.size(); ++li) {
        int n = static_cast<int>(li) + 1;
        const auto& es = d.edge_levels[li];
        if (es.empty()) {
            flag("empty_edge_set", n, "empty edge set");
            report.full_connections.push_back(false);
            continue;
        }
        if (li + 1 >= d.levels.size()) continue;  // structure already flagged
        int src_count = static_cast<int>(d.levels[li].size());
        int rng_count = static_cast<int>(d.levels[li + 1].size());
        std::map<int, std::vector<int>> ranks_by_range;
        bool endpoints_ok = true;
        for (const Edge& e : es) {
            if (e.source < 0 || e.source >= src_count) {
                flag("dangling_source", n, "edge source index out of range");
                endpoints_ok = false;
            }
            if (e.range < 0 || e.range >= rng_count) {
                flag("dangling_range", n, "edge range index out of range");
                endpoints_ok = false;
            }
            if (e.range >= 0 && e.range < rng_count) ranks_by_range[e.range].push_back(e.order);
        }
        for (auto& [v, ranks] : ranks_by_range) {
            std::sort(ranks.begin(), ranks.end());
            bool dense = true;
            for (size_t i = 0; i < ranks.size(); ++i)
                if (ranks[i] != static_cast<int>(i)) dense = false;
            if (!dense)
                flag("order_ranks", n,
                     "order ranks into vertex " + std::to_string(v) + " are not 0..m-1");
        }
        for (int v = 0; v < rng_count; ++v)
            if (!ranks_by_range.count(v)) flag("orphan_vertex", n, "vertex has no incoming edge");

        bool full = endpoints_ok;
        if (endpoints_ok) {
            std::set<std::pair<int, int>> pairs;
            for (const Edge& e : es) pairs.insert({e.source, e.range});
            full = static_cast<int>(pairs.size()) == src_count * rng_count;
        }
        report.full_connections.push_back(full);
    }

    if (d.repeat_from) {
        int k = *d.repeat_from;
        int l = d.explicit_levels();
        if (k < 0 || k >= l)
            flag("repeat_from", k, "repeat_from must name a level before the last");
        else if (d.levels[static_cast<size_t>(l)].size() != d.levels[static_cast<size_t>(k)].size())
            flag("repeat_block", l,
                 "repeating block must end with as many vertices as its first source level");
    }
    return report;
}

namespace {

// predecessor map at level n on the chosen side: v -> s(extreme edge into v)
std::vector<int> predecessor_map(const OrderedBratteliDiagram& d, Extreme side, int n) {
    int count = d.vertex_count(n);
    std::vector<int> g(static_cast<size_t>(count), -1);
    for (int v = 0; v < count; ++v) {
        auto cls = edges_into(d, n, v);
        require(!cls.empty(), Errc::InvalidArgument, "vertex without incoming edges");
        int idx = side == Extreme::Min ? cls.front() : cls.back();
        g[static_cast<size_t>(v)] = d.edge_set(n)[static_cast<size_t>(idx)].source;
    }
    return g;
}

// one-block composite of predecessor maps: V_L -> V_k (identified with V_L)
std::vector<int> block_composite(const OrderedBratteliDiagram& d, Extreme side) {
    int k = d.block_start(), l = d.explicit_levels();
    int count = d.vertex_count(l);
    std::vector<int> comp(static_cast<size_t>(count));
    for (int v = 0; v < count; ++v) comp[static_cast<size_t>(v)] = v;
    for (int n = l; n > k; --n) {
        auto g = predecessor_map(d, side, n);
        for (int v = 0; v < count; ++v) comp[static_cast<size_t>(v)] = g[static_cast<size_t>(comp[static_cast<size_t>(v)])];
    }
    return comp;
}

// survivors of iterating the composite: the set of periodic points
std::set<int> composite_periodic_points(const std::vector<int>& comp) {
    std::set<int> cur;
    for (int v = 0; v < static_cast<int>(comp.size()); ++v) cur.insert(v);
    while (true) {
        std::set<int> next;
        for (int v : cur) next.insert(comp[static_cast<size_t>(v)]);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

}  // namespace

bool properly_ordered_side(const OrderedBratteliDiagram& d, Extreme side) {
    std::vector<int> comp = block_composite(d, side);
    return composite_periodic_points(comp).size() == 1;
}

OrderVerdict check_properly_ordered(const OrderedBratteliDiagram& d) {
    bool max_ok = properly_ordered_side(d, Extreme::Max);
    bool min_ok = properly_ordered_side(d, Extreme::Min);
    if (max_ok && min_ok) return OrderVerdict::ProperlyOrdered;
    if (!max_ok && !min_ok) return OrderVerdict::Both;
    return max_ok ? OrderVerdict::MultipleMinPaths : OrderVerdict::MultipleMaxPaths;
}

int extreme_trace_vertex(const OrderedBratteliDiagram& d, Extreme side, int level) {
    require(level >= 0, Errc::LevelOutOfRange, "negative level");
    if (level == 0) return 0;
    require(properly_ordered_side(d, side), Errc::NotProperlyOrdered,
            "multiple extreme paths on the requested side");
    std::vector<int> comp = block_composite(d, side);
    int fixed = *composite_periodic_points(comp).begin();
    int k = d.block_start(), p = d.block_period();
    // nearest block boundary at or above the level (boundaries are k + j*P)
    int boundary = level <= k ? k : k + ((level - k + p - 1) / p) * p;
    int v = fixed;
    for (int n = boundary; n > level; --n) v = predecessor_map(d, side, n)[static_cast<size_t>(v)];
    return v;
}

int extreme_edge_index(const OrderedBratteliDiagram& d, Extreme side, int level) {
    int v = extreme_trace_vertex(d, side, level);
    auto cls = edges_into(d, level, v);
    return side == Extreme::Min ? cls.front() : cls.back();
}

FinitePath extreme_path(const OrderedBratteliDiagram& d, Extreme side, int depth) {
    require(depth >= 0, Errc::InvalidArgument, "negative depth");
    FinitePath path;
    path.edges.reserve(static_cast<size_t>(depth));
    for (int n = 1; n <= depth; ++n) path.edges.push_back(extreme_edge_index(d, side, n));
    return path;
}

IncidenceMatrix incidence_matrix(const OrderedBratteliDiagram& d, int n) {
    require(n >= 1 && d.level_available(n), Errc::LevelOutOfRange,
            "incidence level out of range");
    IncidenceMatrix out;
    out.level = n;
    out.m = IntMatrix(d.vertex_count(n), d.vertex_count(n - 1));
    for (const Edge& e : d.edge_set(n)) out.m.at(e.range, e.source) += 1;
    return out;
}

IntMatrix incidence_product(const OrderedBratteliDiagram& d, int from_level, int to_level) {
    require(from_level >= 0 && to_level >= from_level, Errc::LevelOutOfRange,
            "bad incidence range");
    IntMatrix acc = IntMatrix::identity(d.vertex_count(from_level));
    for (int n = from_level + 1; n <= to_level; ++n) acc = mul(incidence_matrix(d, n).m, acc);
    return acc;
}

namespace {

// all finite paths between two materialized levels, grouped later by range
std::vector<std::vector<int>> enumerate_paths(const OrderedBratteliDiagram& d, int from_level,
                                              int to_level, int start_vertex) {
    std::vector<std::vector<int>> result;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int level, int vertex) -> void {
        if (level == to_level) {
            result.push_back(cur);
            return;
        }
        const auto& es = d.edge_set(level + 1);
        for (size_t i = 0; i < es.size(); ++i) {
            if (es[i].source != vertex) continue;
            cur.push_back(static_cast<int>(i));
            self(self, level + 1, es[i].range);
            cur.pop_back();
        }
    };
    rec(rec, from_level, start_vertex);
    return result;
}

}  // namespace

OrderedBratteliDiagram telescope(const OrderedBratteliDiagram& d, std::span<const int> cuts) {
    require(cuts.size() >= 2, Errc::BadCuts, "need at least two cut levels");
    require(cuts[0] == 0, Errc::BadCuts, "cuts must start at level 0");
    for (size_t i = 1; i < cuts.size(); ++i)
        require(cuts[i] > cuts[i - 1], Errc::BadCuts, "cuts must ascend");
    require(d.level_available(cuts.back()), Errc::BadCuts, "cut beyond the last level");

    OrderedBratteliDiagram out;
    for (int c : cuts)
        out.levels.push_back(d.levels[static_cast<size_t>(d.vertex_level_index(c))]);

    for (size_t seg = 1; seg < cuts.size(); ++seg) {
        int a = cuts[seg - 1], b = cuts[seg];
        struct Composite {
            std::vector<int> path;
            int source;
            int range;
        };
        std::vector<Composite> composites;
        for (int v = 0; v < d.vertex_count(a); ++v)
            for (auto& path : enumerate_paths(d, a, b, v)) {
                int end = v;
                if (!path.empty()) end = d.edge_set(b)[static_cast<size_t>(path.back())].range;
                composites.push_back(Composite{std::move(path), v, end});
            }
        // right-to-left lexicographic rank within each range class
        std::vector<int> idx(composites.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        auto rank_of = [&](const Composite& c, int pos) {
            return d.edge_set(a + pos + 1)[static_cast<size_t>(c.path[static_cast<size_t>(pos)])].order;
        };
        std::sort(idx.begin(), idx.end(), [&](int x, int y) {
            const Composite &cx = composites[static_cast<size_t>(x)], &cy = composites[static_cast<size_t>(y)];
            if (cx.range != cy.range) return cx.range < cy.range;
            for (int pos = b - a - 1; pos >= 0; --pos) {
                int rx = rank_of(cx, pos), ry = rank_of(cy, pos);
                if (rx != ry) return rx < ry;
            }
            return false;
        });
        std::vector<Edge> edges(composites.size());
        std::map<int, int> next_rank;
        for (size_t j = 0; j < idx.size(); ++j) {
            const Composite& c = composites[static_cast<size_t>(idx[j])];
            edges[j] = Edge{c.source, c.range, next_rank[c.range]++, std::nullopt};
        }
        out.edge_levels.push_back(std::move(edges));
    }

    // the output stays stationary when the final segment is block-aligned
    if (d.stationary() && cuts.size() >= 2) {
        int k = d.block_start(), p = d.block_period();
        int second_last = cuts[cuts.size() - 2];
        int span = cuts.back() - second_last;
        if (second_last >= k && span % p == 0)
            out.repeat_from = static_cast<int>(cuts.size()) - 2;
    }
    return out;
}

std::vector<int> greedy_cuts(const OrderedBratteliDiagram& d, const BigInt& min_edges) {
    require(d.stationary(), Errc::NotStationary, "greedy cuts need a stationary diagram");
    int k = d.block_start(), p = d.block_period();
    IntMatrix block = incidence_product(d, k, k + p);

    // smallest q with min entry of block^q >= min_edges; exact repeat of a
    // power means the entries cycle forever (finite path space)
    IntMatrix power = block;
    std::vector<IntMatrix> seen;
    int q = 1;
    while (min_entry(power) < min_edges) {
        for (const IntMatrix& m : seen)
            if (m == power)
                throw Error(Errc::CannotTelescope,
                            "edge counts cycle below the requested threshold; path space is finite");
        seen.push_back(power);
        power = mul(power, block);
        ++q;
        require(q <= 4096, Errc::CannotTelescope, "edge counts grow too slowly");
    }

    // smallest block-aligned head cut c >= 1 with all path counts from v_0 >= min_edges
    int c = k == 0 ? p : k;
    while (true) {
        IntMatrix head = incidence_product(d, 0, c);
        if (min_entry(head) >= min_edges) break;
        c += p;
        require(c <= k + 4096 * p, Errc::CannotTelescope, "head counts grow too slowly");
    }
    return {0, c, c + q * p};
}

}  // namespace bvx
