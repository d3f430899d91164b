#include "bvx/json_io.hpp"

#include "bvx/errors.hpp"
#include "bvx/extension.hpp"

#include <doctest.h>

using namespace bvx;

TEST_SUITE_BEGIN("json_io");

TEST_CASE("diagram serialization round-trips and is canonical") {
    auto d = make_odometer(3);
    std::string text = diagram_to_json(d);
    auto back = parse_diagram_json(text);
    CHECK(back == d);
    // canonical: serializing the parse reproduces the bytes
    CHECK(diagram_to_json(back) == text);
}

TEST_CASE("labels survive the diagram round trip") {
    LabeledSystem ls = auto_label(make_odometer(3), preset("interval2"));
    std::string text = diagram_to_json(ls.diagram);
    auto back = parse_diagram_json(text);
    EdgeLabeling lab = labeling_from_diagram(back, preset("interval2"));
    CHECK(lab.labels == ls.labeling.labels);
}

TEST_CASE("labeling accepts names, indices, and null") {
    auto d = make_odometer(3);
    d.edge_levels[0][0].label = "f1";
    d.edge_levels[0][1].label = "0";
    d.edge_levels[0][2].label = std::nullopt;
    EdgeLabeling lab = labeling_from_diagram(d, preset("interval2"));
    CHECK(lab.labels[0] == std::vector<int>{1, 0, -1});

    d.edge_levels[0][0].label = "f9";
    CHECK_THROWS_AS(labeling_from_diagram(d, preset("interval2")), Error);
}

TEST_CASE("IFS files round-trip for both kinds") {
    for (const char* name : {"interval2", "cube2(2)", "cantor3", "carpet"}) {
        auto sys = preset(name);
        auto back = parse_ifs_json(ifs_to_json(sys));
        CHECK(back.kind == sys.kind);
        CHECK(back.dimension == sys.dimension);
        CHECK(back.digits == sys.digits);
        REQUIRE(back.maps.size() == sys.maps.size());
        for (size_t i = 0; i < sys.maps.size(); ++i) {
            CHECK(back.maps[i].ratio == sys.maps[i].ratio);
            CHECK(back.maps[i].offset == sys.maps[i].offset);
            CHECK(back.maps[i].digit == sys.maps[i].digit);
        }
    }
}

TEST_CASE("malformed input raises MalformedInput") {
    auto expect_malformed = [](auto&& f) {
        try {
            f();
            FAIL("expected MalformedInput");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MalformedInput);
        }
    };
    expect_malformed([] { parse_diagram_json("{"); });
    expect_malformed([] { parse_diagram_json(R"({"levels": 7})"); });
    expect_malformed([] { parse_ifs_json(R"({"kind": "nope"})"); });
    expect_malformed([] { parse_ifs_json(R"({"kind": "similitude", "dimension": 1,
                                             "ratio": "1/2", "maps": []})"); });
    expect_malformed([] { read_file("/nonexistent/bvx-no-such-file"); });
}

TEST_CASE("diagram presets resolve by name") {
    auto d = load_diagram("odometer4");
    CHECK(d.edge_set(1).size() == 4);
    CHECK(load_ifs("carpet").maps.size() == 8);
}

TEST_SUITE_END();
