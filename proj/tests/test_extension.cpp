#include "bvx/extension.hpp"

#include "bvx/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace bvx;

namespace {

Rational rat(long long p, long long q) { return Rational(BigInt(p), BigInt(q)); }

LabeledSystem odometer_interval() {
    return auto_label(make_odometer(3), preset("interval2"));
}

PathPoint id_tailed(const LabeledSystem& ls, std::vector<int> ranks) {
    FinitePath prefix = path_from_ranks(ls.diagram, ranks);
    return make_path_point(ls.diagram, prefix, make_id_tail(ls.diagram, ls.labeling, prefix));
}

}  // namespace

TEST_SUITE_BEGIN("extension");

TEST_CASE("auto_label on odometer + interval2 labels by rank") {
    auto ls = odometer_interval();
    CHECK(ls.diagram.edge_set(1).size() == 3);
    CHECK(ls.diagram.edge_set(2).size() == 3);
    for (int level = 1; level <= 2; ++level) {
        const auto& es = ls.diagram.edge_set(level);
        for (size_t e = 0; e < es.size(); ++e) {
            int rank = es[e].order;
            int label = ls.labeling.label_at(ls.diagram, level, static_cast<int>(e));
            if (rank == 0) CHECK(label == 0);   // f_0
            if (rank == 1) CHECK(label == -1);  // identity
            if (rank == 2) CHECK(label == 1);   // f_1
        }
    }
    auto report = validate_labeling(ls.diagram, ls.labeling);
    CHECK(report.ok());
    CHECK(report.strong_condition3);
    // labels are also written onto the edges
    CHECK(ls.diagram.edge_set(1)[static_cast<size_t>(path_from_ranks(ls.diagram, std::vector<int>{1}).edges[0])]
              .label == std::nullopt);
}

TEST_CASE("auto_label telescopes odometer + cube2(2) to nine edges") {
    auto ls = auto_label(make_odometer(3), preset("cube2(2)"));
    CHECK(ls.diagram.edge_set(1).size() == 9);
    CHECK(ls.diagram.edge_set(2).size() == 9);
    CHECK(validate_labeling(ls.diagram, ls.labeling).ok());
    // telescoped incidence equals the product of the originals
    CHECK(incidence_matrix(ls.diagram, 1).m.at(0, 0) == 9);
    CHECK(incidence_matrix(ls.diagram, 2).m.at(0, 0) == 9);
    // round-robin by rank over the non-identity edges
    const auto& es = ls.diagram.edge_set(2);
    for (size_t e = 0; e < es.size(); ++e) {
        int rank = es[e].order;
        int label = ls.labeling.label_at(ls.diagram, 2, static_cast<int>(e));
        if (rank == 1)
            CHECK(label == -1);
        else
            CHECK(label == (rank < 1 ? rank : rank - 1) % 4);
    }
}

TEST_CASE("validate_labeling reports each violated condition with a witness") {
    auto ls = odometer_interval();

    SUBCASE("maximal edge labeled with the identity") {
        auto lab = ls.labeling;
        for (size_t e = 0; e < ls.diagram.edge_set(1).size(); ++e)
            if (ls.diagram.edge_set(1)[e].order == 2) lab.labels[0][e] = -1;
        auto report = validate_labeling(ls.diagram, lab);
        REQUIRE(!report.ok());
        CHECK(report.violations[0].code == "condition1");
    }

    SUBCASE("images from a vertex fail to cover") {
        auto lab = ls.labeling;
        for (size_t e = 0; e < ls.diagram.edge_set(1).size(); ++e)
            if (lab.labels[0][e] == 1) lab.labels[0][e] = 0;  // f_1 -> f_0 everywhere at level 1
        auto report = validate_labeling(ls.diagram, lab);
        REQUIRE(!report.ok());
        bool cover_violation = false;
        for (const auto& v : report.violations) cover_violation |= v.code == "condition2";
        CHECK(cover_violation);
    }

    SUBCASE("identity subgraph with no infinite path") {
        auto lab = ls.labeling;
        for (size_t e = 0; e < lab.labels[1].size(); ++e)
            if (lab.labels[1][e] == -1) lab.labels[1][e] = 0;  // kill the block id edge
        auto report = validate_labeling(ls.diagram, lab);
        bool cond3 = false;
        for (const auto& v : report.violations) cond3 |= v.code == "condition3";
        CHECK(cond3);
        CHECK(!report.strong_condition3);
        CHECK(!report.weak_condition3);
    }
}

TEST_CASE("weaker third condition passes with a warning flag") {
    // two-vertex diagram; identity on a non-extreme a->b edge only, so the
    // id subgraph is acyclic but the full graph loops through it
    auto d = oracle::two_vertex_stationary(1, {{1, 2}, {2, 2}});
    auto sys = preset("interval2");
    EdgeLabeling lab;
    lab.system = sys;
    lab.labels.resize(2);
    lab.labels[0] = {0, 1};  // head edges to a and b
    const auto& es = d.edge_set(2);
    lab.labels[1].assign(es.size(), 0);
    std::vector<int> seen_ab;
    for (size_t e = 0; e < es.size(); ++e)
        if (es[e].source == 0 && es[e].range == 1) seen_ab.push_back(static_cast<int>(e));
    REQUIRE(seen_ab.size() == 2);
    // per-source alternation keeps the covering condition alive
    int toggle = 0;
    for (size_t e = 0; e < es.size(); ++e) lab.labels[1][e] = toggle++ % 2;
    int id_edge = is_min_edge(d, 2, seen_ab[0]) ? seen_ab[1] : seen_ab[0];
    lab.labels[1][static_cast<size_t>(id_edge)] = -1;
    // repair covering at source a: remaining a-edges must hit both maps
    std::vector<int> a_edges;
    for (size_t e = 0; e < es.size(); ++e)
        if (es[e].source == 0 && static_cast<int>(e) != id_edge) a_edges.push_back(static_cast<int>(e));
    REQUIRE(a_edges.size() >= 2);
    lab.labels[1][static_cast<size_t>(a_edges[0])] = 0;
    lab.labels[1][static_cast<size_t>(a_edges[1])] = 1;
    std::vector<int> b_edges;
    for (size_t e = 0; e < es.size(); ++e)
        if (es[e].source == 1) b_edges.push_back(static_cast<int>(e));
    REQUIRE(b_edges.size() >= 2);
    lab.labels[1][static_cast<size_t>(b_edges[0])] = 0;
    lab.labels[1][static_cast<size_t>(b_edges[1])] = 1;

    auto report = validate_labeling(d, lab);
    CHECK(report.ok());
    CHECK(!report.strong_condition3);
    CHECK(report.weak_condition3);
}

TEST_CASE("classification: identity tails are Type 2, extreme tails Type 1") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;

    auto split1 = classify_point(d, id_tailed(ls, {0}), ls.labeling);
    CHECK(split1.type2);
    CHECK(split1.split_depth == 1);

    auto all_id = classify_point(d, id_tailed(ls, {1}), ls.labeling);
    CHECK(all_id.type2);
    CHECK(all_id.split_depth == 0);

    auto max_cls = classify_point(d, max_path_point(d, 2), ls.labeling);
    CHECK(!max_cls.type2);
    CHECK(!max_cls.contraction_positions.empty());
    CHECK(!classify_point(d, min_path_point(d), ls.labeling).type2);
}

TEST_CASE("fibers: singleton boxes shrink, copies are exact") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;

    auto f3 = fiber(d, max_path_point(d, 3), ls.labeling, 3);
    CHECK(f3.singleton);
    CHECK(f3.region.box->lo[0] == rat(7, 8));
    CHECK(f3.region.box->hi[0] == Rational(1));
    CHECK(f3.region.diameter == rat(1, 8));

    auto f6 = fiber(d, max_path_point(d, 3), ls.labeling, 6);
    CHECK(f6.region.diameter == rat(1, 64));
    CHECK(f3.region.box->contains_box(*f6.region.box));

    auto copy = fiber(d, id_tailed(ls, {0}), ls.labeling, 5);
    CHECK(!copy.singleton);
    CHECK(copy.split_depth == 1);
    CHECK(copy.region.box->lo[0] == Rational(0));
    CHECK(copy.region.box->hi[0] == rat(1, 2));
}

TEST_CASE("extended step on a Type 2 point follows the pull-back formula") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    // x = (rank0, id-tail), actual coordinate f_0(1/2) = 1/4
    ExtendedPoint p = exact_point(d, ls.labeling, id_tailed(ls, {0}),
                                  similitude_point({rat(1, 2)}));
    CHECK(p.split_depth == 1);
    CHECK(exact_coordinate(d, p, ls.labeling).coords[0] == rat(1, 4));

    ExtendedPoint q = extended_step(d, p, ls.labeling);
    CHECK(path_ranks(d, materialize(d, q.base, 1).prefix)[0] == 1);
    CHECK(q.exact);
    CHECK(exact_coordinate(d, q, ls.labeling).coords[0] == rat(1, 2));

    ExtendedPoint back = extended_inverse_step(d, q, ls.labeling);
    CHECK(extended_points_equal(d, ls.labeling, back, p));
}

TEST_CASE("the Type 2 step is independent of split-depth padding") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    FinitePath shallow = path_from_ranks(d, std::vector<int>{0});
    FinitePath padded = path_from_ranks(d, std::vector<int>{0, 1, 1, 1, 1, 1});
    PathPoint b1 = make_path_point(d, shallow, make_id_tail(d, ls.labeling, shallow));
    PathPoint b2 = make_path_point(d, padded, make_id_tail(d, ls.labeling, padded));

    ExtendedPoint p1 = exact_point(d, ls.labeling, b1, similitude_point({rat(1, 3)}));
    ExtendedPoint p2 = exact_point(d, ls.labeling, b2, similitude_point({rat(1, 3)}));
    CHECK(extended_points_equal(d, ls.labeling, p1, p2));
    CHECK(extended_points_equal(d, ls.labeling, extended_step(d, p1, ls.labeling),
                                extended_step(d, p2, ls.labeling)));
}

TEST_CASE("wrap: the maximal path steps to the minimal one") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;

    CHECK(extreme_coordinate(d, ls.labeling, Extreme::Max).coords[0] == Rational(1));
    CHECK(extreme_coordinate(d, ls.labeling, Extreme::Min).coords[0] == Rational(0));

    ExtendedPoint top = bounded_point(d, ls.labeling, max_path_point(d, 3));
    ExtendedPoint wrapped = extended_step(d, top, ls.labeling);
    CHECK(!wrapped.exact);
    CHECK(same_path(d, wrapped.base, min_path_point(d)));
    // the box around the wrapped coordinate pins down c_{x^min}
    auto box = bounded_region(d, wrapped, ls.labeling, 3);
    CHECK(box.box->contains_point(extreme_coordinate(d, ls.labeling, Extreme::Min).coords));
    CHECK(box.diameter == rat(1, 8));

    ExtendedPoint back = extended_inverse_step(d, wrapped, ls.labeling);
    CHECK(same_path(d, back.base, max_path_point(d)));
    auto back_box = bounded_region(d, back, ls.labeling, 3);
    CHECK(back_box.box->contains_point(extreme_coordinate(d, ls.labeling, Extreme::Max).coords));
}

TEST_CASE("inverse step undoes the step on both kinds of points") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;

    for (auto ranks : {std::vector<int>{0}, {1}, {2, 1}, {0, 2, 1}}) {
        ExtendedPoint p = exact_point(d, ls.labeling, id_tailed(ls, ranks),
                                      similitude_point({rat(5, 7)}));
        ExtendedPoint fwd = extended_step(d, p, ls.labeling);
        CHECK(extended_points_equal(d, ls.labeling, extended_inverse_step(d, fwd, ls.labeling), p));
    }
    ExtendedPoint b = bounded_point(d, ls.labeling, min_path_point(d, 2));
    ExtendedPoint fwd = extended_step(d, b, ls.labeling);
    ExtendedPoint back = extended_inverse_step(d, fwd, ls.labeling);
    CHECK(same_path(d, back.base, b.base));
}

TEST_CASE("semiconjugacy holds along orbits, and divergence is detected") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;

    ExtendedPoint p = exact_point(d, ls.labeling, id_tailed(ls, {0, 0}),
                                  similitude_point({rat(3, 4)}));
    auto res = check_semiconjugacy(d, p, ls.labeling, 100);
    CHECK(res.ok);
    CHECK(check_semiconjugacy(d, p, ls.labeling, 0).ok);

    ExtendedPoint top = bounded_point(d, ls.labeling, max_path_point(d, 2));
    CHECK(check_semiconjugacy(d, top, ls.labeling, 50).ok);

    // negative control: a base stream that skips the wrap diverges at it
    ExtendedPoint cur = top;
    PathPoint shadow = top.base;
    long long diverged_at = -1;
    for (long long s = 1; s <= 12; ++s) {
        cur = extended_step(d, cur, ls.labeling);
        if (auto nxt = successor(d, shadow)) shadow = *nxt;  // no wrap on purpose
        if (!same_path(d, cur.base, shadow)) {
            diverged_at = s;
            break;
        }
    }
    CHECK(diverged_at == 1);  // the very first step wraps
}

TEST_CASE("density probe: trivial hits and budget exhaustion") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    ExtendedPoint p = exact_point(d, ls.labeling, id_tailed(ls, {0}),
                                  similitude_point({rat(1, 2)}));

    ProbeTarget own;
    own.cylinder = path_from_ranks(d, std::vector<int>{0});
    own.subregion = full_region(ls.labeling.system);
    CHECK(density_probe(d, p, ls.labeling, own, 10) == 0);

    ProbeTarget elsewhere;
    elsewhere.cylinder = path_from_ranks(d, std::vector<int>{2});
    elsewhere.subregion = full_region(ls.labeling.system);
    CHECK(!density_probe(d, p, ls.labeling, elsewhere, 0));
}

TEST_CASE("density probe reaches a refined target cylinder") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    ExtendedPoint p = exact_point(d, ls.labeling, id_tailed(ls, {0}),
                                  similitude_point({rat(1, 2)}));

    ProbeTarget t;
    t.cylinder = path_from_ranks(d, std::vector<int>{1, 0});
    RegionBound sub;
    sub.box = Box{{rat(1, 4)}, {rat(1, 2)}};
    sub.diameter = rat(1, 4);
    t.subregion = sub;
    auto hit = density_probe(d, p, ls.labeling, t, 10000);
    REQUIRE(hit);
    CHECK(*hit <= 10000);
}

TEST_CASE("lifted measures equal base measures on the single-id-path labeling") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    CHECK(lift_measure(d, ls.labeling, FinitePath{}).value == Rational(1));
    CHECK(lift_measure(d, ls.labeling, path_from_ranks(d, std::vector<int>{1})).value == rat(1, 3));

    Rational total(0);
    for (const auto& p : oracle::all_paths(d, 2))
        total += lift_measure(d, ls.labeling, p).value;
    CHECK(total == Rational(1));

    auto two_ids = ls.labeling;
    for (size_t e = 0; e < two_ids.labels[0].size(); ++e)
        if (d.edge_set(1)[e].order == 0) two_ids.labels[0][e] = -1;
    try {
        lift_measure(d, two_ids, FinitePath{});
        FAIL("expected IdSubgraphNotSinglePath");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IdSubgraphNotSinglePath);
    }
}

TEST_CASE("extended cylinders partition and nest") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    for (int depth : {1, 2, 3}) {
        auto paths = oracle::all_paths(d, depth);
        // distinct prefixes are disjoint in the path component by definition;
        // regions must nest one level down
        for (const auto& p : paths) {
            auto outer = extended_cylinder(d, ls.labeling, p);
            const auto& es = d.edge_set(depth + 1);
            for (size_t e = 0; e < es.size(); ++e) {
                if (es[e].source != path_end_vertex(d, p)) continue;
                FinitePath q = p;
                q.edges.push_back(static_cast<int>(e));
                auto inner = extended_cylinder(d, ls.labeling, q);
                CHECK(region_contains_region(outer.region, inner.region));
            }
        }
    }
}

TEST_CASE("covering condition is operationally solvable at every vertex") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    for (int level = 1; level <= 2; ++level) {
        const auto& es = d.edge_set(level);
        for (int c8 = 0; c8 <= 8; ++c8) {
            CPoint c = similitude_point({rat(c8, 8)});
            bool solvable = false;
            for (size_t e = 0; e < es.size(); ++e) {
                if (es[e].source != 0 || ls.labeling.is_id(d, level, static_cast<int>(e))) continue;
                MapRef one[] = {&ls.labeling.map_at(d, level, static_cast<int>(e))};
                if (region_contains_point(ls.labeling.system,
                                          image_box(ls.labeling.system, one), c))
                    solvable = true;
            }
            CHECK(solvable);
        }
    }
}

TEST_CASE("exact/bounded constructors reject the wrong point type") {
    auto ls = odometer_interval();
    auto& d = ls.diagram;
    CHECK_THROWS_AS(exact_point(d, ls.labeling, max_path_point(d, 1),
                                similitude_point({rat(1, 2)})),
                    Error);
    CHECK_THROWS_AS(bounded_point(d, ls.labeling, id_tailed(ls, {0})), Error);
}

TEST_SUITE_END();
