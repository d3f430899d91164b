#include "bvx/extension.hpp"

#include "bvx/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bvx {

namespace {

void require(bool cond, Errc code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

const ContractionMap& identity_map() {
    static const ContractionMap id = ContractionMap::identity();
    return id;
}

std::vector<MapRef> prefix_maps(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                                const PathPoint& x, int depth) {
    std::vector<MapRef> maps;
    maps.reserve(static_cast<size_t>(depth));
    for (int n = 1; n <= depth; ++n) maps.push_back(&lab.map_at(d, n, edge_at(d, x, n)));
    return maps;
}

}  // namespace

int EdgeLabeling::label_at(const OrderedBratteliDiagram& d, int level, int edge_index) const {
    int idx = d.edge_level_index(level);
    require(idx < static_cast<int>(labels.size()), Errc::InvalidArgument,
            "labeling does not cover level " + std::to_string(level));
    const auto& lv = labels[static_cast<size_t>(idx)];
    require(edge_index >= 0 && edge_index < static_cast<int>(lv.size()), Errc::InvalidArgument,
            "edge index out of range in labeling");
    return lv[static_cast<size_t>(edge_index)];
}

const ContractionMap& EdgeLabeling::map_at(const OrderedBratteliDiagram& d, int level,
                                           int edge_index) const {
    int l = label_at(d, level, edge_index);
    if (l < 0) return identity_map();
    return system.map(l);
}

EdgeLabeling labeling_from_diagram(const OrderedBratteliDiagram& d, ContractionSystem system) {
    EdgeLabeling lab;
    lab.system = std::move(system);
    for (const auto& es : d.edge_levels) {
        std::vector<int> lv;
        lv.reserve(es.size());
        for (const Edge& e : es) {
            if (!e.label || *e.label == "id") {
                lv.push_back(-1);
                continue;
            }
            int idx = lab.system.map_index_by_name(*e.label);
            if (idx < 0) {
                try {
                    idx = std::stoi(*e.label);
                } catch (const std::exception&) {
                    idx = -2;
                }
            }
            require(idx >= 0 && idx < static_cast<int>(lab.system.maps.size()),
                    Errc::MalformedInput, "unknown map label '" + *e.label + "'");
            lv.push_back(idx);
        }
        lab.labels.push_back(std::move(lv));
    }
    return lab;
}

void write_labels_to_diagram(OrderedBratteliDiagram& d, const EdgeLabeling& lab) {
    require(lab.labels.size() == d.edge_levels.size(), Errc::InvalidArgument,
            "labeling shape mismatch");
    for (size_t li = 0; li < d.edge_levels.size(); ++li) {
        auto& es = d.edge_levels[li];
        require(lab.labels[li].size() == es.size(), Errc::InvalidArgument,
                "labeling shape mismatch");
        for (size_t e = 0; e < es.size(); ++e) {
            int l = lab.labels[li][e];
            if (l < 0)
                es[e].label = std::nullopt;
            else
                es[e].label = lab.system.maps[static_cast<size_t>(l)].name;
        }
    }
}

LabeledSystem auto_label(const OrderedBratteliDiagram& d, const ContractionSystem& system) {
    require(d.stationary(), Errc::NotStationary, "auto_label needs a stationary diagram");
    require(check_properly_ordered(d) == OrderVerdict::ProperlyOrdered, Errc::NotProperlyOrdered,
            "auto_label needs a properly ordered diagram");
    require(!system.maps.empty(), Errc::InvalidArgument, "system has no maps");
    require(cover_check_all(system), Errc::InvalidArgument,
            "system maps do not cover C; cannot satisfy the covering condition");

    // Enough edges per adjacent pair for one identity edge plus a
    // surjection onto the maps. The non-extreme self-edge used for the
    // identity path needs at least 3 edges per pair.
    BigInt threshold = std::max<BigInt>(BigInt(system.maps.size()) + 1, BigInt(3));
    std::vector<int> cuts = greedy_cuts(d, threshold);
    OrderedBratteliDiagram t = telescope(d, cuts);
    // telescoped shape: levels 0,1,2 with repeat_from = 1

    auto pick_id_edge = [&](int level, int source, int range) -> int {
        const auto& es = t.edge_set(level);
        int best = -1;
        for (size_t e = 0; e < es.size(); ++e) {
            if (es[e].source != source || es[e].range != range) continue;
            if (is_max_edge(t, level, static_cast<int>(e)) ||
                is_min_edge(t, level, static_cast<int>(e)))
                continue;
            if (best < 0 || es[e].order < es[static_cast<size_t>(best)].order)
                best = static_cast<int>(e);
        }
        return best;
    };
    // identity path: v_0 -> vertex 0, then the self-edge at vertex 0 forever
    int id_head = pick_id_edge(1, 0, 0);
    int id_block = pick_id_edge(2, 0, 0);
    require(id_head >= 0 && id_block >= 0, Errc::NoAvoidingPath,
            "no non-extreme identity route exists even after telescoping");

    EdgeLabeling lab;
    lab.system = system;
    int map_count = static_cast<int>(system.maps.size());
    for (int level = 1; level <= t.explicit_levels(); ++level) {
        const auto& es = t.edge_set(level);
        std::vector<int> lv(es.size(), -1);
        int id_edge = level == 1 ? id_head : id_block;
        for (int v = 0; v < t.vertex_count(level - 1); ++v) {
            std::vector<int> order;
            for (size_t e = 0; e < es.size(); ++e)
                if (es[e].source == v && static_cast<int>(e) != id_edge)
                    order.push_back(static_cast<int>(e));
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const Edge &ea = es[static_cast<size_t>(a)], &eb = es[static_cast<size_t>(b)];
                if (ea.order != eb.order) return ea.order < eb.order;
                return ea.range < eb.range;
            });
            for (size_t i = 0; i < order.size(); ++i)
                lv[static_cast<size_t>(order[i])] = static_cast<int>(i) % map_count;
        }
        lab.labels.push_back(std::move(lv));
    }
    write_labels_to_diagram(t, lab);
    return LabeledSystem{std::move(t), std::move(lab)};
}

LabelingReport validate_labeling(const OrderedBratteliDiagram& d, const EdgeLabeling& lab) {
    LabelingReport report;
    auto flag = [&](std::string code, int level, std::string msg) {
        report.violations.push_back(Violation{std::move(code), level, std::move(msg)});
    };

    if (lab.labels.size() != d.edge_levels.size()) {
        flag("shape", 0, "labeling does not cover every level");
        return report;
    }
    for (size_t li = 0; li < lab.labels.size(); ++li)
        if (lab.labels[li].size() != d.edge_levels[li].size()) {
            flag("shape", static_cast<int>(li) + 1, "labeling does not cover every edge");
            return report;
        }

    int l = d.explicit_levels();
    // condition (1): extreme edges are never labeled with the identity
    for (int n = 1; n <= l; ++n) {
        const auto& es = d.edge_set(n);
        for (size_t e = 0; e < es.size(); ++e) {
            bool extreme = is_max_edge(d, n, static_cast<int>(e)) ||
                           is_min_edge(d, n, static_cast<int>(e));
            if (extreme && lab.is_id(d, n, static_cast<int>(e)))
                flag("condition1", n,
                     "extreme edge " + std::to_string(e) + " at level " + std::to_string(n) +
                         " carries the identity");
        }
    }

    // condition (2): non-identity maps out of every vertex cover C
    for (int n = 1; n <= l; ++n) {
        const auto& es = d.edge_set(n);
        for (int v = 0; v < d.vertex_count(n - 1); ++v) {
            std::vector<MapRef> maps;
            for (size_t e = 0; e < es.size(); ++e)
                if (es[e].source == v && !lab.is_id(d, n, static_cast<int>(e)))
                    maps.push_back(&lab.map_at(d, n, static_cast<int>(e)));
            if (!cover_check(lab.system, maps))
                flag("condition2", n - 1,
                     "non-identity images from vertex " + std::to_string(v) + " at level " +
                         std::to_string(n - 1) + " do not cover C");
        }
    }

    // condition (3): the identity subgraph contains an infinite path,
    // decided on the repeating block (cycle in the wrapped id digraph)
    if (!d.stationary()) {
        flag("condition3", 0, "finite diagram cannot contain an infinite identity path");
        return report;
    }
    int k = d.block_start(), p = d.block_period();
    struct Node {
        int pos, v;
        auto operator<=>(const Node&) const = default;
    };
    auto arcs_for = [&](bool id_only) {
        std::map<Node, std::vector<std::pair<Node, bool>>> adj;
        for (int n = k + 1; n <= k + p; ++n) {
            const auto& es = d.edge_set(n);
            for (size_t e = 0; e < es.size(); ++e) {
                bool id = lab.is_id(d, n, static_cast<int>(e));
                if (id_only && !id) continue;
                Node from{(n - 1 - k) % p, es[e].source};
                Node to{(n - k) % p, es[e].range};
                adj[from].push_back({to, id});
            }
        }
        return adj;
    };
    auto has_cycle = [&](const std::map<Node, std::vector<std::pair<Node, bool>>>& adj,
                         bool need_id_arc) {
        if (!need_id_arc) {
            // plain cycle detection via DFS colors
            std::map<Node, int> color;
            bool found = false;
            auto dfs = [&](auto&& self, const Node& u) -> void {
                color[u] = 1;
                auto it = adj.find(u);
                if (it != adj.end())
                    for (const auto& [w, id] : it->second) {
                        if (found) return;
                        int c = color.count(w) ? color[w] : 0;
                        if (c == 1) {
                            found = true;
                            return;
                        }
                        if (c == 0) self(self, w);
                    }
                color[u] = 2;
            };
            for (const auto& [u, _] : adj) {
                if (found) break;
                if (!color.count(u)) dfs(dfs, u);
            }
            return found;
        }
        // cycle through at least one id arc: reachability from the arc's
        // head back to its tail
        auto reaches = [&](const Node& from, const Node& to) {
            std::set<Node> seen{from};
            std::vector<Node> work{from};
            while (!work.empty()) {
                Node u = work.back();
                work.pop_back();
                if (u == to) return true;
                auto it = adj.find(u);
                if (it == adj.end()) continue;
                for (const auto& [w, id] : it->second)
                    if (seen.insert(w).second) work.push_back(w);
            }
            return false;
        };
        for (const auto& [u, outs] : adj)
            for (const auto& [w, id] : outs)
                if (id && reaches(w, u)) return true;
        return false;
    };

    report.strong_condition3 = has_cycle(arcs_for(true), false);
    report.weak_condition3 = report.strong_condition3 || has_cycle(arcs_for(false), true);
    if (!report.weak_condition3)
        flag("condition3", k, "identity subgraph admits no infinite path on the repeating block");
    return report;
}

TailPolicy make_id_tail(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                        const FinitePath& prefix) {
    require(d.stationary(), Errc::NotStationary, "id tails need a stationary diagram");
    int k = d.block_start(), p = d.block_period();
    int depth = prefix.depth();
    int at = path_end_vertex(d, prefix);

    std::vector<int> walk;  // id edges for levels depth+1, depth+2, ...
    std::map<std::pair<int, int>, int> first_seen;  // (block pos, vertex) -> index in walk
    int level = depth;
    while (true) {
        ++level;
        const auto& es = d.edge_set(level);
        int chosen = -1;
        for (size_t e = 0; e < es.size(); ++e) {
            if (es[e].source != at || !lab.is_id(d, level, static_cast<int>(e))) continue;
            if (chosen < 0) {
                chosen = static_cast<int>(e);
            } else {
                const Edge &a = es[e], &b = es[static_cast<size_t>(chosen)];
                if (std::pair(a.order, a.range) < std::pair(b.order, b.range))
                    chosen = static_cast<int>(e);
            }
        }
        require(chosen >= 0, Errc::InvalidArgument,
                "identity subgraph has no continuation from level " + std::to_string(level - 1));
        at = es[static_cast<size_t>(chosen)].range;
        walk.push_back(chosen);
        if (level >= k) {
            std::pair<int, int> state{(level - k) % p, at};
            auto it = first_seen.find(state);
            if (it != first_seen.end()) {
                int cycle_from = it->second + 1;  // walk index after that state
                TailPolicy tail;
                tail.kind = TailKind::Id;
                tail.preamble.assign(walk.begin(), walk.begin() + cycle_from);
                tail.cycle.assign(walk.begin() + cycle_from, walk.end());
                tail.phase = depth + cycle_from;
                return tail;
            }
            first_seen[state] = static_cast<int>(walk.size()) - 1;
        }
    }
}

PointClass classify_point(const OrderedBratteliDiagram& d, const PathPoint& x,
                          const EdgeLabeling& lab) {
    require(d.stationary(), Errc::NotStationary, "classification needs a stationary diagram");
    auto [anchor, period] = tail_periodicity(d, x);
    int window = anchor + period;
    PointClass cls;
    int last_non_id = 0;
    bool cycle_has_non_id = false;
    for (int n = 1; n <= window; ++n) {
        if (lab.is_id(d, n, edge_at(d, x, n))) continue;
        cls.contraction_positions.push_back(n);
        last_non_id = n;
        if (n > anchor) cycle_has_non_id = true;
    }
    if (cycle_has_non_id) {
        cls.type2 = false;  // the periodic tail keeps contracting forever
        return cls;
    }
    cls.type2 = true;
    cls.split_depth = last_non_id;
    cls.contraction_positions.clear();
    return cls;
}

Fiber fiber(const OrderedBratteliDiagram& d, const PathPoint& x, const EdgeLabeling& lab,
            int depth) {
    require(depth >= 0, Errc::InvalidArgument, "negative depth");
    PointClass cls = classify_point(d, x, lab);
    Fiber out;
    if (cls.type2) {
        out.singleton = false;
        out.split_depth = cls.split_depth;
        auto maps = prefix_maps(d, lab, x, cls.split_depth);
        out.region = image_box(lab.system, maps);
        return out;
    }
    out.singleton = true;
    auto maps = prefix_maps(d, lab, x, depth);
    out.region = image_box(lab.system, maps);
    return out;
}

ExtendedPoint exact_point(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                          PathPoint base, CPoint pulled_back) {
    PointClass cls = classify_point(d, base, lab);
    require(cls.type2, Errc::InvalidArgument, "exact coordinates need a Type 2 base point");
    if (lab.system.kind == SystemKind::Similitude) {
        require(static_cast<int>(pulled_back.coords.size()) == lab.system.dimension,
                Errc::InvalidArgument, "coordinate dimension mismatch");
        for (const Rational& c : pulled_back.coords)
            require(c >= Rational(0) && c <= Rational(1), Errc::InvalidArgument,
                    "pulled-back coordinate outside C");
    } else {
        require(!pulled_back.cycle.empty(), Errc::InvalidArgument,
                "digit point needs a periodic continuation");
    }
    ExtendedPoint p;
    p.base = materialize(d, base, std::max(cls.split_depth, base.prefix.depth()));
    p.exact = true;
    p.split_depth = cls.split_depth;
    p.pulled_back = std::move(pulled_back);
    return p;
}

ExtendedPoint bounded_point(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                            PathPoint base) {
    PointClass cls = classify_point(d, base, lab);
    require(!cls.type2, Errc::InvalidArgument,
            "Type 2 base points carry exact coordinates, not boxes");
    ExtendedPoint p;
    p.base = std::move(base);
    p.exact = false;
    return p;
}

CPoint exact_coordinate(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                        const EdgeLabeling& lab) {
    require(p.exact, Errc::InvalidArgument, "bounded points have no exact coordinate");
    CPoint c = p.pulled_back;
    // c = f_{x_1} o ... o f_{x_split}(c'), applied inside out
    for (int n = p.split_depth; n >= 1; --n)
        c = apply(lab.map_at(d, n, edge_at(d, p.base, n)), c);
    return c;
}

RegionBound bounded_region(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                           const EdgeLabeling& lab, int depth) {
    auto maps = prefix_maps(d, lab, p.base, depth);
    return image_box(lab.system, maps);
}

CPoint extreme_coordinate(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                          Extreme side) {
    int k = d.block_start(), p = d.block_period();
    std::vector<MapRef> cycle;
    for (int n = k + 1; n <= k + p; ++n)
        cycle.push_back(&lab.map_at(d, n, extreme_edge_index(d, side, n)));
    CPoint fp = cycle_fixed_point(lab.system, cycle);
    for (int n = k; n >= 1; --n)
        fp = apply(lab.map_at(d, n, extreme_edge_index(d, side, n)), fp);
    return fp;
}

namespace {

// shared by the forward and the order-reversed step
ExtendedPoint step_impl(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                        const EdgeLabeling& lab, bool forward) {
    auto step = forward ? successor_step(d, p.base) : predecessor_step(d, p.base);
    if (!step) {
        // wrap: the extreme path goes to the opposite extreme; its
        // coordinate is the nested-box limit c_{x^min} / c_{x^max}
        require(!p.exact, Errc::InvalidArgument, "extreme paths are Type 1");
        ExtendedPoint out;
        int depth = p.base.prefix.depth();
        out.base = forward ? min_path_point(d, depth) : max_path_point(d, depth);
        out.exact = false;
        return out;
    }
    if (!p.exact) {
        ExtendedPoint out;
        out.base = std::move(step->next);
        out.exact = false;
        return out;
    }
    // Type 2: the pulled-back coordinate survives unchanged; only the
    // split depth moves (extend past the rewritten head, then drop
    // trailing identity labels)
    int split = std::max(p.split_depth, step->first_changed);
    PathPoint base = materialize(d, step->next, std::max(split, step->next.prefix.depth()));
    while (split > 0 && lab.is_id(d, split, edge_at(d, base, split))) --split;
    ExtendedPoint out;
    out.base = std::move(base);
    out.exact = true;
    out.split_depth = split;
    out.pulled_back = p.pulled_back;
    return out;
}

}  // namespace

ExtendedPoint extended_step(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                            const EdgeLabeling& lab) {
    return step_impl(d, p, lab, true);
}

ExtendedPoint extended_inverse_step(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                                    const EdgeLabeling& lab) {
    return step_impl(d, p, lab, false);
}

bool extended_points_equal(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                           const ExtendedPoint& a, const ExtendedPoint& b) {
    if (!same_path(d, a.base, b.base)) return false;
    if (a.exact != b.exact) return false;
    if (!a.exact) return true;  // the coordinate is determined by the base
    return points_equal(lab.system, exact_coordinate(d, a, lab), exact_coordinate(d, b, lab));
}

ExtendedCylinder extended_cylinder(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                                   FinitePath path) {
    require(path_valid(d, path), Errc::InvalidArgument, "invalid cylinder path");
    std::vector<MapRef> maps;
    for (int n = 1; n <= path.depth(); ++n)
        maps.push_back(&lab.map_at(d, n, path.edges[static_cast<size_t>(n - 1)]));
    ExtendedCylinder out;
    out.region = image_box(lab.system, maps);
    out.path = std::move(path);
    return out;
}

SemiconjugacyResult check_semiconjugacy(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                                        const EdgeLabeling& lab, long long steps) {
    require(steps >= 0, Errc::InvalidArgument, "negative step count");
    ExtendedPoint cur = p;
    PathPoint shadow = p.base;
    for (long long s = 1; s <= steps; ++s) {
        cur = extended_step(d, cur, lab);
        auto next = successor(d, shadow);
        shadow = next ? std::move(*next) : min_path_point(d, shadow.prefix.depth());
        if (!same_path(d, cur.base, shadow)) return {false, s};
    }
    return {true, -1};
}

std::optional<long long> density_probe(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                                       const EdgeLabeling& lab, const ProbeTarget& target,
                                       long long budget) {
    require(budget >= 0, Errc::InvalidArgument, "negative budget");
    int depth = target.cylinder.depth();
    ExtendedPoint cur = p;
    for (long long step = 0;; ++step) {
        bool base_match = true;
        for (int n = 1; n <= depth && base_match; ++n)
            base_match = edge_at(d, cur.base, n) == target.cylinder.edges[static_cast<size_t>(n - 1)];
        if (base_match) {
            bool inside;
            if (cur.exact) {
                inside = region_contains_point(lab.system, target.subregion,
                                               exact_coordinate(d, cur, lab));
            } else {
                int box_depth = std::max(depth, cur.base.prefix.depth());
                inside = region_contains_region(target.subregion,
                                                bounded_region(d, cur, lab, box_depth));
            }
            if (inside) return step;
        }
        if (step == budget) break;
        cur = extended_step(d, cur, lab);
    }
    return std::nullopt;
}

MeasureValue lift_measure(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                          const FinitePath& p) {
    require(d.stationary(), Errc::NotStationary, "lifted measures need a stationary diagram");
    // the identity edges must form a single infinite path: exactly one id
    // edge per level, chained, consistently across the block wrap
    int l = d.explicit_levels(), k = d.block_start();
    std::vector<int> id_edge(static_cast<size_t>(l), -1);
    for (int n = 1; n <= l; ++n) {
        const auto& es = d.edge_set(n);
        for (size_t e = 0; e < es.size(); ++e) {
            if (!lab.is_id(d, n, static_cast<int>(e))) continue;
            if (id_edge[static_cast<size_t>(n - 1)] >= 0)
                throw Error(Errc::IdSubgraphNotSinglePath,
                            "two identity edges at level " + std::to_string(n));
            id_edge[static_cast<size_t>(n - 1)] = static_cast<int>(e);
        }
        if (id_edge[static_cast<size_t>(n - 1)] < 0)
            throw Error(Errc::IdSubgraphNotSinglePath,
                        "no identity edge at level " + std::to_string(n));
    }
    auto edge = [&](int n) -> const Edge& {
        return d.edge_set(n)[static_cast<size_t>(id_edge[static_cast<size_t>(n - 1)])];
    };
    for (int n = 1; n < l; ++n)
        if (edge(n).range != edge(n + 1).source)
            throw Error(Errc::IdSubgraphNotSinglePath,
                        "identity edges do not chain at level " + std::to_string(n));
    if (edge(l).range != edge(k + 1).source)
        throw Error(Errc::IdSubgraphNotSinglePath,
                    "identity edges do not chain across the repeating block");

    return cylinder_measure(d, Cylinder{p});
}

}  // namespace bvx
