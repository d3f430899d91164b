// bvx: build, validate, and simulate minimal Cantor systems from ordered
// Bratteli diagrams, together with their IFS-fibered extensions.

#include "bvx/bratteli.hpp"
#include "bvx/errors.hpp"
#include "bvx/extension.hpp"
#include "bvx/ifs.hpp"
#include "bvx/json_io.hpp"
#include "bvx/vershik.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>

using namespace bvx;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string diagram;
    std::string ifs;
    std::string out;
    std::string point = "min";
    std::string cylinder;
    std::string coord;
    std::string cuts;
    std::string element;
    std::string equal_to;
    long long steps = 10;
    long long budget = 100000;
    int depth = 3;
    int to_level = -1;
    int eps_exp = 0;
    bool as_json = false;
    bool csv = false;
    bool lift = false;
};

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        atomic_write(out_path, content);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stoi(tok));
    return out;
}

std::string csv_quote(const std::vector<int>& ranks) {
    std::string s = "\"";
    for (size_t i = 0; i < ranks.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(ranks[i]);
    }
    return s + "\"";
}

// --point min | max | id:<prefix ranks>
PathPoint resolve_point(const OrderedBratteliDiagram& d, const EdgeLabeling* lab,
                        const std::string& spec, int depth) {
    if (spec == "min") return min_path_point(d, depth);
    if (spec == "max") return max_path_point(d, depth);
    if (spec.rfind("id:", 0) == 0) {
        if (!lab)
            throw Error(Errc::InvalidArgument, "id-tailed points need --ifs and a labeled diagram");
        FinitePath prefix = path_from_ranks(d, parse_int_list(spec.substr(3)));
        return make_path_point(d, prefix, make_id_tail(d, *lab, prefix));
    }
    throw Error(Errc::MalformedInput, "bad --point spec '" + spec + "' (min|max|id:<ranks>)");
}

CPoint resolve_coord(const ContractionSystem& sys, const std::string& spec) {
    if (sys.kind == SystemKind::Digit) {
        if (!spec.empty())
            throw Error(Errc::InvalidArgument, "--coord applies to similitude systems only");
        return digit_point(sys, {});
    }
    std::vector<Rational> coords;
    if (spec.empty()) {
        coords.assign(static_cast<size_t>(sys.dimension), Rational(0));
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) coords.push_back(Rational::parse(tok));
        if (static_cast<int>(coords.size()) != sys.dimension)
            throw Error(Errc::MalformedInput, "--coord needs one rational per axis");
    }
    return similitude_point(std::move(coords));
}

json region_json(const RegionBound& region) {
    if (region.box) {
        json axes = json::array();
        for (size_t a = 0; a < region.box->lo.size(); ++a)
            axes.push_back(json::array({region.box->lo[a].str(), region.box->hi[a].str()}));
        return axes;
    }
    json digits = json::array();
    for (const Digit& dig : region.prefix->digits) digits.push_back(dig);
    return digits;
}

std::string coordinate_field(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                             const ExtendedPoint& p, int depth) {
    std::string s = "\"";
    if (p.exact) {
        auto c = embed_point(lab.system, exact_coordinate(d, p, lab));
        for (size_t a = 0; a < c.size(); ++a) {
            if (a) s += ",";
            s += c[a].str();
        }
    } else {
        Box box = embed_region(lab.system, bounded_region(d, p, lab, depth));
        for (size_t a = 0; a < box.lo.size(); ++a) {
            if (a) s += ",";
            s += box.lo[a].str() + ".." + box.hi[a].str();
        }
    }
    return s + "\"";
}

int run_validate(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    ValidationReport report = validate_diagram(d);
    json out;
    out["structural_violations"] = json::array();
    for (const auto& v : report.violations)
        out["structural_violations"].push_back(
            {{"code", v.code}, {"level", v.level}, {"message", v.message}});
    out["full_connections"] = report.full_connections;

    bool failed = !report.ok();
    if (report.ok() && d.stationary()) {
        auto verdict = check_properly_ordered(d);
        const char* names[] = {"ProperlyOrdered", "MultipleMaxPaths", "MultipleMinPaths", "Both"};
        out["properly_ordered"] = verdict == OrderVerdict::ProperlyOrdered;
        out["order_verdict"] = names[static_cast<int>(verdict)];
    }
    bool any_label = false;
    for (const auto& level : d.edge_levels)
        for (const Edge& e : level) any_label = any_label || e.label.has_value();
    if (!opt.ifs.empty() && any_label && report.ok()) {
        EdgeLabeling lab = labeling_from_diagram(d, load_ifs(opt.ifs));
        LabelingReport lr = validate_labeling(d, lab);
        out["labeling_violations"] = json::array();
        for (const auto& v : lr.violations)
            out["labeling_violations"].push_back(
                {{"code", v.code}, {"level", v.level}, {"message", v.message}});
        out["id_path_strong"] = lr.strong_condition3;
        out["id_path_weak"] = lr.weak_condition3;
        failed = failed || !lr.ok();
    }

    std::string text = out.dump(2) + "\n";
    if (failed) {
        std::cerr << text;
        return 1;
    }
    std::cout << text;
    return 0;
}

int run_telescope(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    std::vector<int> cuts = parse_int_list(opt.cuts);
    auto t = telescope(d, cuts);
    emit(opt.out, diagram_to_json(t));
    return 0;
}

int run_label_auto(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    ContractionSystem sys = load_ifs(opt.ifs);
    LabeledSystem ls = auto_label(d, sys);
    emit(opt.out, diagram_to_json(ls.diagram));
    return 0;
}

int run_orbit(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    std::ostringstream csv;
    if (opt.ifs.empty()) {
        PathPoint x = resolve_point(d, nullptr, opt.point, opt.depth);
        auto points = orbit(d, x, opt.steps);
        for (size_t i = 0; i < points.size(); ++i) {
            auto ranks = path_ranks(d, points[i].prefix);
            csv << i << "," << csv_quote(ranks) << "," << tail_tag(points[i].tail) << "\n";
        }
    } else {
        ContractionSystem sys = load_ifs(opt.ifs);
        EdgeLabeling lab = labeling_from_diagram(d, std::move(sys));
        PathPoint base = resolve_point(d, &lab, opt.point, opt.depth);
        ExtendedPoint p;
        if (base.tail.kind == TailKind::Id)
            p = exact_point(d, lab, base, resolve_coord(lab.system, opt.coord));
        else
            p = bounded_point(d, lab, base);
        for (long long step = 0; step <= opt.steps; ++step) {
            auto ranks = path_ranks(d, p.base.prefix);
            int box_depth = std::max<int>(opt.depth, p.base.prefix.depth());
            csv << step << "," << csv_quote(ranks) << "," << (p.exact ? "exact" : "box") << ","
                << coordinate_field(d, lab, p, box_depth) << "\n";
            if (step < opt.steps) p = extended_step(d, p, lab);
        }
    }
    emit(opt.out, csv.str());
    return 0;
}

int run_fiber(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    EdgeLabeling lab = labeling_from_diagram(d, load_ifs(opt.ifs));
    PathPoint x = resolve_point(d, &lab, opt.point, opt.depth);
    Fiber f = fiber(d, x, lab, opt.depth);
    json out;
    out["type"] = f.singleton ? "singleton" : "copy";
    out["region"] = region_json(f.region);
    out["diameter"] = f.region.diameter.str();
    emit(opt.out, out.dump(2) + "\n");
    return 0;
}

int run_measure(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    FinitePath path = path_from_ranks(d, parse_int_list(opt.cylinder));
    MeasureValue m;
    if (opt.lift) {
        EdgeLabeling lab = labeling_from_diagram(d, load_ifs(opt.ifs));
        m = lift_measure(d, lab, path);
    } else {
        m = cylinder_measure(d, Cylinder{path});
    }
    if (opt.as_json) {
        json out;
        out["measure"] = m.str();
        out["exact"] = m.exact;
        emit(opt.out, out.dump(2) + "\n");
    } else {
        emit(opt.out, m.str() + "\n");
    }
    return 0;
}

int run_k0(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    K0Element a = k0_parse(opt.element);
    if (!opt.equal_to.empty()) {
        K0Element b = k0_parse(opt.equal_to);
        bool eq = k0_equal(d, a, b);
        if (opt.as_json)
            emit(opt.out, json{{"equal", eq}}.dump(2) + "\n");
        else
            emit(opt.out, std::string(eq ? "true" : "false") + "\n");
        return 0;
    }
    int target = opt.to_level >= 0 ? opt.to_level : a.level;
    K0Element image = k0_map(d, a, target);
    emit(opt.out, k0_str(image) + "\n");
    return 0;
}

int run_render(const CommonOpts& opt) {
    ContractionSystem sys = load_ifs(opt.ifs);
    auto boxes = attractor_sample(sys, opt.depth);
    if (opt.csv) {
        std::ostringstream csv;
        for (const auto& r : boxes) {
            Box b = embed_region(sys, r);
            for (size_t a = 0; a < b.lo.size(); ++a) csv << b.lo[a].str() << ",";
            csv << (b.hi[0] - b.lo[0]).str() << "\n";
        }
        emit(opt.out, csv.str());
        return 0;
    }
    if (sys.dimension != 2)
        throw Error(Errc::DimensionUnsupported, "PGM raster needs dimension 2; use --csv");
    int base;
    if (sys.kind == SystemKind::Digit) {
        base = sys.base;
    } else {
        Rational r = sys.contraction_ratio();
        if (r.num() != 1)
            throw Error(Errc::DimensionUnsupported, "PGM raster needs ratio 1/m; use --csv");
        base = static_cast<int>(r.den().convert_to<long long>());
    }
    long long side = 1;
    for (int i = 0; i < opt.depth; ++i) side *= base;
    std::vector<Box> embedded;
    embedded.reserve(boxes.size());
    for (const auto& r : boxes) embedded.push_back(embed_region(sys, r));
    std::string pixels(static_cast<size_t>(side) * static_cast<size_t>(side), '\0');
    Rational h{BigInt(1), BigInt(side)};
    for (long long y = 0; y < side; ++y) {
        for (long long x = 0; x < side; ++x) {
            Box cell;
            cell.lo = {Rational(x) * h, Rational(y) * h};
            cell.hi = {Rational(x + 1) * h, Rational(y + 1) * h};
            for (const Box& b : embedded) {
                if (b.overlaps_interior(cell)) {
                    // row 0 is the top of the image, axis 1 points up
                    pixels[static_cast<size_t>((side - 1 - y) * side + x)] = 1;
                    break;
                }
            }
        }
    }
    std::string pgm = "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n1\n" + pixels;
    if (opt.out.empty())
        throw Error(Errc::InvalidArgument, "PGM output needs --out");
    atomic_write(opt.out, pgm);
    return 0;
}

int run_probe(const CommonOpts& opt) {
    OrderedBratteliDiagram d = load_diagram(opt.diagram);
    EdgeLabeling lab = labeling_from_diagram(d, load_ifs(opt.ifs));
    PathPoint base = resolve_point(d, &lab, opt.point, opt.depth);
    ExtendedPoint start;
    if (base.tail.kind == TailKind::Id)
        start = exact_point(d, lab, base, resolve_coord(lab.system, opt.coord));
    else
        start = bounded_point(d, lab, base);

    const ContractionSystem& sys = lab.system;
    Rational eps = Rational::pow(sys.contraction_ratio(), static_cast<unsigned>(opt.eps_exp));

    struct Target {
        std::vector<int> ranks;
        ProbeTarget probe;
        std::string cell;
    };
    std::vector<Target> targets;
    auto add_similitude_cells = [&](const FinitePath& path) {
        auto cyl = extended_cylinder(d, lab, path);
        const Box& region = *cyl.region.box;
        Rational side = cyl.region.diameter;
        // eps-cells per axis; image boxes of similitude compositions are cubes
        Rational ratio = side / eps;
        long long cells = 1;
        if (ratio > Rational(1)) {
            cells = (ratio.num() / ratio.den()).convert_to<long long>();
            if (ratio.num() % ratio.den() != 0) ++cells;  // round up
        }
        std::vector<long long> idx(region.lo.size(), 0);
        while (true) {
            Box cell;
            for (size_t a = 0; a < region.lo.size(); ++a) {
                Rational width = (region.hi[a] - region.lo[a]) / Rational(cells);
                cell.lo.push_back(region.lo[a] + Rational(idx[a]) * width);
                cell.hi.push_back(region.lo[a] + Rational(idx[a] + 1) * width);
            }
            RegionBound sub;
            sub.diameter = cell.diameter();
            std::string name;
            for (size_t a = 0; a < cell.lo.size(); ++a)
                name += (a ? ";" : "") + cell.lo[a].str() + ".." + cell.hi[a].str();
            sub.box = std::move(cell);
            targets.push_back({path_ranks(d, path), ProbeTarget{path, std::move(sub)}, name});
            size_t a = idx.size();
            while (a > 0 && idx[a - 1] == cells - 1) idx[--a] = 0;
            if (a == 0) break;
            ++idx[a - 1];
        }
    };
    auto add_digit_cells = [&](const FinitePath& path) {
        auto cyl = extended_cylinder(d, lab, path);
        int have = static_cast<int>(cyl.region.prefix->digits.size());
        int want = std::max(opt.eps_exp - have, 0);
        std::vector<DigitPrefix> subs{*cyl.region.prefix};
        for (int i = 0; i < want; ++i) {
            std::vector<DigitPrefix> next;
            for (const auto& p : subs)
                for (const Digit& dig : sys.digits) {
                    DigitPrefix q = p;
                    q.digits.push_back(dig);
                    next.push_back(std::move(q));
                }
            subs = std::move(next);
        }
        for (auto& p : subs) {
            RegionBound sub;
            sub.diameter = Rational::pow(Rational{BigInt(1), BigInt(sys.base)},
                                         static_cast<unsigned>(p.digits.size()));
            std::string name;
            for (const Digit& dig : p.digits) {
                name += "(";
                for (size_t a = 0; a < dig.size(); ++a)
                    name += (a ? "," : "") + std::to_string(dig[a]);
                name += ")";
            }
            sub.prefix = std::move(p);
            targets.push_back({path_ranks(d, path), ProbeTarget{path, std::move(sub)}, name});
        }
    };

    std::vector<FinitePath> cylinders;
    if (opt.cylinder.empty()) {
        // table mode: every cylinder of the requested depth
        std::vector<FinitePath> acc{FinitePath{}};
        for (int level = 1; level <= opt.depth; ++level) {
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
        cylinders = std::move(acc);
    } else {
        cylinders = {path_from_ranks(d, parse_int_list(opt.cylinder))};
    }
    for (const auto& path : cylinders) {
        if (sys.kind == SystemKind::Similitude)
            add_similitude_cells(path);
        else
            add_digit_cells(path);
    }

    json rows = json::array();
    bool all_visited = true;
    for (const Target& t : targets) {
        auto hit = density_probe(d, start, lab, t.probe, opt.budget);
        all_visited = all_visited && hit.has_value();
        json row;
        row["cylinder"] = t.ranks;
        row["cell"] = t.cell;
        if (hit)
            row["visited_at"] = *hit;
        else
            row["visited_at"] = nullptr;
        rows.push_back(std::move(row));
    }
    json out;
    out["targets"] = std::move(rows);
    out["all_visited"] = all_visited;
    emit(opt.out, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bratteli-Vershik systems with IFS-fibered minimal extensions"};
    app.require_subcommand(1);
    CommonOpts opt;

    auto add_common = [&](CLI::App* cmd, bool needs_diagram, bool needs_ifs) {
        if (needs_diagram)
            cmd->add_option("--diagram", opt.diagram, "diagram JSON file or odometerN preset")
                ->required();
        auto* ifs = cmd->add_option("--ifs", opt.ifs, "IFS JSON file or preset name");
        if (needs_ifs) ifs->required();
        cmd->add_option("--out", opt.out, "output path (atomic write); stdout otherwise");
        cmd->add_flag("--json", opt.as_json, "machine-readable output");
        return cmd;
    };

    add_common(app.add_subcommand("validate", "check diagram structure, order, labels"), true, false);

    auto* telescope_cmd =
        add_common(app.add_subcommand("telescope", "collapse the diagram to cut levels"), true, false);
    telescope_cmd->add_option("--cuts", opt.cuts, "ascending cut levels, e.g. 0,2,4")->required();

    add_common(app.add_subcommand("label-auto", "telescope and label automatically"), true, true);

    auto* orbit_cmd = add_common(app.add_subcommand("orbit", "iterate the Vershik map (CSV)"), true, false);
    orbit_cmd->add_option("--point", opt.point, "min | max | id:<prefix ranks>");
    orbit_cmd->add_option("--steps", opt.steps, "number of steps");
    orbit_cmd->add_option("--depth", opt.depth, "materialized prefix depth");
    orbit_cmd->add_option("--coord", opt.coord, "pulled-back coordinate for exact points");

    auto* fiber_cmd = add_common(app.add_subcommand("fiber", "fiber of the factor map at a point"),
                                 true, true);
    fiber_cmd->add_option("--point", opt.point, "min | max | id:<prefix ranks>");
    fiber_cmd->add_option("--depth", opt.depth, "resolution depth");

    auto* measure_cmd =
        add_common(app.add_subcommand("measure", "invariant measure of a cylinder"), true, false);
    measure_cmd->add_option("--cylinder", opt.cylinder, "cylinder prefix ranks, e.g. 1,0,2");
    measure_cmd->add_flag("--lift", opt.lift, "lift to the extension (needs --ifs, labels)");

    auto* k0_cmd = add_common(app.add_subcommand("k0", "direct-limit K0 computations"), true, false);
    k0_cmd->add_option("--element", opt.element, "element as level:v1,v2,...")->required();
    k0_cmd->add_option("--to-level", opt.to_level, "push the element to this level");
    k0_cmd->add_option("--equal", opt.equal_to, "second element to compare");

    auto* render_cmd =
        add_common(app.add_subcommand("render", "attractor raster (PGM) or boxes (CSV)"), false, true);
    render_cmd->add_option("--depth", opt.depth, "composition depth");
    render_cmd->add_flag("--csv", opt.csv, "emit box CSV instead of PGM");

    auto* probe_cmd =
        add_common(app.add_subcommand("probe", "orbit density probe into refined cylinders"), true, true);
    probe_cmd->add_option("--point", opt.point, "start point");
    probe_cmd->add_option("--budget", opt.budget, "max steps per target");
    probe_cmd->add_option("--depth", opt.depth, "target cylinder depth");
    probe_cmd->add_option("--eps-exp", opt.eps_exp, "epsilon = lambda^K subdivision");
    probe_cmd->add_option("--cylinder", opt.cylinder, "probe a single cylinder (ranks)");
    probe_cmd->add_option("--coord", opt.coord, "pulled-back coordinate for exact points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("validate")) return run_validate(opt);
        if (app.got_subcommand("telescope")) return run_telescope(opt);
        if (app.got_subcommand("label-auto")) return run_label_auto(opt);
        if (app.got_subcommand("orbit")) return run_orbit(opt);
        if (app.got_subcommand("fiber")) return run_fiber(opt);
        if (app.got_subcommand("measure")) return run_measure(opt);
        if (app.got_subcommand("k0")) return run_k0(opt);
        if (app.got_subcommand("render")) return run_render(opt);
        if (app.got_subcommand("probe")) return run_probe(opt);
    } catch (const Error& e) {
        std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
        return e.code() == Errc::MalformedInput ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
