#include "bvx/json_io.hpp"

#include "bvx/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bvx {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::MalformedInput, "invalid JSON");
    return j;
}

}  // namespace

OrderedBratteliDiagram parse_diagram_json(const std::string& text) {
    json j = parse_text(text);
    try {
        OrderedBratteliDiagram d;
        for (const auto& level : j.at("levels")) {
            std::vector<std::string> names;
            for (const auto& v : level) names.push_back(v.get<std::string>());
            d.levels.push_back(std::move(names));
        }
        for (const auto& level : j.at("edges")) {
            std::vector<Edge> es;
            for (const auto& e : level) {
                Edge edge;
                edge.source = e.at("source").get<int>();
                edge.range = e.at("range").get<int>();
                edge.order = e.at("order").get<int>();
                if (e.contains("label") && !e.at("label").is_null())
                    edge.label = e.at("label").get<std::string>();
                es.push_back(std::move(edge));
            }
            d.edge_levels.push_back(std::move(es));
        }
        if (j.contains("repeat_from") && !j.at("repeat_from").is_null())
            d.repeat_from = j.at("repeat_from").get<int>();
        return d;
    } catch (const json::exception& ex) {
        throw Error(Errc::MalformedInput, std::string("bad diagram file: ") + ex.what());
    }
}

std::string diagram_to_json(const OrderedBratteliDiagram& d) {
    json j;
    j["levels"] = d.levels;
    json edges = json::array();
    for (const auto& level : d.edge_levels) {
        json le = json::array();
        for (const Edge& e : level) {
            json je;
            je["source"] = e.source;
            je["range"] = e.range;
            je["order"] = e.order;
            je["label"] = e.label ? json(*e.label) : json(nullptr);
            le.push_back(std::move(je));
        }
        edges.push_back(std::move(le));
    }
    j["edges"] = std::move(edges);
    j["repeat_from"] = d.repeat_from ? json(*d.repeat_from) : json(nullptr);
    return j.dump(2) + "\n";
}

ContractionSystem parse_ifs_json(const std::string& text) {
    json j = parse_text(text);
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "similitude") {
            ContractionSystem sys;
            sys.kind = SystemKind::Similitude;
            sys.dimension = j.at("dimension").get<int>();
            Rational ratio = Rational::parse(j.at("ratio").get<std::string>());
            int idx = 0;
            for (const auto& m : j.at("maps")) {
                std::vector<Rational> offset;
                for (const auto& c : m.at("offset"))
                    offset.push_back(Rational::parse(c.get<std::string>()));
                if (static_cast<int>(offset.size()) != sys.dimension)
                    throw Error(Errc::MalformedInput, "offset dimension mismatch");
                sys.maps.push_back(ContractionMap::similitude(ratio, std::move(offset),
                                                              "f" + std::to_string(idx++)));
            }
            if (sys.maps.empty()) throw Error(Errc::MalformedInput, "similitude system with no maps");
            return sys;
        }
        if (kind == "digit") {
            ContractionSystem sys;
            sys.kind = SystemKind::Digit;
            sys.base = j.at("base").get<int>();
            sys.dimension = j.at("dimension").get<int>();
            int idx = 0;
            for (const auto& dj : j.at("digits")) {
                Digit dig;
                for (const auto& c : dj) dig.push_back(c.get<int>());
                if (static_cast<int>(dig.size()) != sys.dimension)
                    throw Error(Errc::MalformedInput, "digit dimension mismatch");
                sys.digits.push_back(dig);
                sys.maps.push_back(
                    ContractionMap::digit_map(sys.base, dig, "f" + std::to_string(idx++)));
            }
            if (sys.digits.empty()) throw Error(Errc::MalformedInput, "digit system with no digits");
            return sys;
        }
        throw Error(Errc::MalformedInput, "unknown IFS kind '" + kind + "'");
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        throw Error(Errc::MalformedInput, std::string("bad IFS file: ") + ex.what());
    }
}

std::string ifs_to_json(const ContractionSystem& sys) {
    json j;
    if (sys.kind == SystemKind::Similitude) {
        j["kind"] = "similitude";
        j["dimension"] = sys.dimension;
        j["ratio"] = sys.contraction_ratio().str();
        json maps = json::array();
        for (const ContractionMap& f : sys.maps) {
            json offsets = json::array();
            for (const Rational& b : f.offset) offsets.push_back(b.str());
            maps.push_back(json{{"offset", std::move(offsets)}});
        }
        j["maps"] = std::move(maps);
    } else {
        j["kind"] = "digit";
        j["base"] = sys.base;
        j["dimension"] = sys.dimension;
        j["digits"] = sys.digits;
    }
    return j.dump(2) + "\n";
}

OrderedBratteliDiagram load_diagram(const std::string& path_or_preset) {
    if (path_or_preset.rfind("odometer", 0) == 0) {
        std::string num = path_or_preset.substr(8);
        if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos)
            return make_odometer(std::stoi(num));
    }
    return parse_diagram_json(read_file(path_or_preset));
}

ContractionSystem load_ifs(const std::string& path_or_preset) {
    try {
        return preset(path_or_preset);
    } catch (const Error& e) {
        if (e.code() != Errc::UnknownPreset) throw;
    }
    return parse_ifs_json(read_file(path_or_preset));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::MalformedInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + tmp + "'");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error(Errc::InvalidArgument, "cannot move temp file into '" + path + "'");
    }
}

}  // namespace bvx
