#include "bvx/ifs.hpp"

#include "bvx/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bvx {

namespace {

void require(bool cond, Errc code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

std::vector<Digit> all_digits(int base, int dimension) {
    std::vector<Digit> out;
    Digit cur(static_cast<size_t>(dimension), 0);
    while (true) {
        out.push_back(cur);
        int i = dimension - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == base - 1) {
            cur[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
    }
    return out;
}

ContractionSystem scaled_cube_family(int inv_ratio, int dimension, std::string name) {
    require(dimension >= 1, Errc::UnknownPreset, "dimension must be >= 1");
    ContractionSystem sys;
    sys.kind = SystemKind::Similitude;
    sys.dimension = dimension;
    sys.name = std::move(name);
    Rational ratio{BigInt(1), BigInt(inv_ratio)};
    int idx = 0;
    for (const Digit& d : all_digits(inv_ratio, dimension)) {
        std::vector<Rational> offset;
        offset.reserve(static_cast<size_t>(dimension));
        for (int c : d) offset.emplace_back(BigInt(c), BigInt(inv_ratio));
        sys.maps.push_back(
            ContractionMap::similitude(ratio, std::move(offset), "f" + std::to_string(idx++)));
    }
    return sys;
}

}  // namespace

ContractionMap ContractionMap::identity() { return ContractionMap{}; }

ContractionMap ContractionMap::similitude(Rational ratio, std::vector<Rational> offset,
                                          std::string name) {
    require(ratio > Rational(0) && ratio < Rational(1), Errc::InvalidArgument,
            "similitude ratio must lie in (0,1)");
    for (const Rational& b : offset)
        require(b >= Rational(0) && ratio + b <= Rational(1), Errc::InvalidArgument,
                "similitude image must stay inside the unit cube");
    ContractionMap f;
    f.kind = MapKind::Similitude;
    f.ratio = std::move(ratio);
    f.dimension = static_cast<int>(offset.size());
    f.offset = std::move(offset);
    f.name = std::move(name);
    return f;
}

ContractionMap ContractionMap::digit_map(int base, Digit digit, std::string name) {
    require(base >= 2, Errc::InvalidArgument, "digit base must be >= 2");
    for (int c : digit)
        require(0 <= c && c < base, Errc::InvalidArgument, "digit entry out of range");
    ContractionMap f;
    f.kind = MapKind::DigitMap;
    f.base = base;
    f.dimension = static_cast<int>(digit.size());
    f.digit = std::move(digit);
    f.name = std::move(name);
    return f;
}

Rational ContractionSystem::contraction_ratio() const {
    if (kind == SystemKind::Digit) return Rational{BigInt(1), BigInt(base)};
    Rational best(0);
    for (const ContractionMap& f : maps) best = max(best, f.ratio);
    return best;
}

const ContractionMap& ContractionSystem::map(int index) const {
    require(index >= 0 && index < static_cast<int>(maps.size()), Errc::InvalidArgument,
            "map index out of range");
    return maps[static_cast<size_t>(index)];
}

int ContractionSystem::map_index_by_name(const std::string& map_name) const {
    for (size_t i = 0; i < maps.size(); ++i)
        if (maps[i].name == map_name) return static_cast<int>(i);
    return -1;
}

bool ContractionSystem::digit_allowed(const Digit& d) const {
    return std::find(digits.begin(), digits.end(), d) != digits.end();
}

ContractionSystem preset(const std::string& name) {
    if (name == "interval2") {
        ContractionSystem sys = scaled_cube_family(2, 1, "interval2");
        return sys;
    }
    if (name.rfind("cube2(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(name.substr(6, name.size() - 7));
        return scaled_cube_family(2, n, name);
    }
    if (name.rfind("cube3(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(name.substr(6, name.size() - 7));
        return scaled_cube_family(3, n, name);
    }
    if (name == "cantor3") {
        ContractionSystem sys;
        sys.kind = SystemKind::Digit;
        sys.dimension = 1;
        sys.base = 3;
        sys.digits = {{0}, {2}};
        sys.maps = {ContractionMap::digit_map(3, {0}, "f0"),
                    ContractionMap::digit_map(3, {2}, "f1")};
        sys.name = "cantor3";
        return sys;
    }
    if (name == "carpet") {
        ContractionSystem sys;
        sys.kind = SystemKind::Digit;
        sys.dimension = 2;
        sys.base = 3;
        int idx = 0;
        for (const Digit& d : all_digits(3, 2)) {
            if (d[0] == 1 && d[1] == 1) continue;
            sys.digits.push_back(d);
            sys.maps.push_back(ContractionMap::digit_map(3, d, "f" + std::to_string(idx++)));
        }
        sys.name = "carpet";
        return sys;
    }
    throw Error(Errc::UnknownPreset, "unknown IFS preset: '" + name + "'");
}

CPoint similitude_point(std::vector<Rational> coords) {
    CPoint p;
    p.coords = std::move(coords);
    return p;
}

CPoint digit_point(const ContractionSystem& sys, std::vector<Digit> head,
                   std::vector<Digit> cycle) {
    require(sys.kind == SystemKind::Digit, Errc::InvalidArgument,
            "digit_point needs a digit system");
    require(!sys.digits.empty(), Errc::InvalidArgument, "empty digit set");
    CPoint p;
    for (const Digit& d : head)
        require(sys.digit_allowed(d), Errc::InvalidArgument, "head digit not allowed");
    for (const Digit& d : cycle)
        require(sys.digit_allowed(d), Errc::InvalidArgument, "cycle digit not allowed");
    p.head = std::move(head);
    if (cycle.empty()) {
        Digit least = *std::min_element(sys.digits.begin(), sys.digits.end());
        p.cycle = {least};
    } else {
        p.cycle = std::move(cycle);
    }
    return p;
}

const Digit& digit_at(const CPoint& p, size_t index) {
    if (index < p.head.size()) return p.head[index];
    return p.cycle[(index - p.head.size()) % p.cycle.size()];
}

bool points_equal(const ContractionSystem& sys, const CPoint& a, const CPoint& b) {
    if (sys.kind == SystemKind::Similitude) return a.coords == b.coords;
    // Both sequences are eventually periodic; agreement over the joint head
    // plus two joint periods pins them down.
    size_t head = std::max(a.head.size(), b.head.size());
    size_t period = a.cycle.size() * b.cycle.size();
    for (size_t i = 0; i < head + 2 * period; ++i)
        if (digit_at(a, i) != digit_at(b, i)) return false;
    return true;
}

Rational Box::diameter() const {
    Rational best(0);
    for (size_t i = 0; i < lo.size(); ++i) best = max(best, hi[i] - lo[i]);
    return best;
}

bool Box::contains_point(const std::vector<Rational>& p) const {
    for (size_t i = 0; i < lo.size(); ++i)
        if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
}

bool Box::contains_box(const Box& inner) const {
    for (size_t i = 0; i < lo.size(); ++i)
        if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
    return true;
}

bool Box::overlaps_interior(const Box& other) const {
    for (size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < other.hi[i] && other.lo[i] < hi[i])) return false;
    return true;
}

Box unit_cube(int dimension) {
    Box b;
    b.lo.assign(static_cast<size_t>(dimension), Rational(0));
    b.hi.assign(static_cast<size_t>(dimension), Rational(1));
    return b;
}

bool region_contains_point(const ContractionSystem& sys, const RegionBound& region,
                           const CPoint& p) {
    if (sys.kind == SystemKind::Similitude) return region.box->contains_point(p.coords);
    const auto& digits = region.prefix->digits;
    for (size_t i = 0; i < digits.size(); ++i)
        if (digit_at(p, i) != digits[i]) return false;
    return true;
}

bool region_contains_region(const RegionBound& outer, const RegionBound& inner) {
    if (outer.box && inner.box) return outer.box->contains_box(*inner.box);
    if (outer.prefix && inner.prefix) {
        const auto& o = outer.prefix->digits;
        const auto& i = inner.prefix->digits;
        if (o.size() > i.size()) return false;
        return std::equal(o.begin(), o.end(), i.begin());
    }
    throw Error(Errc::InvalidArgument, "region kind mismatch");
}

Box embed_region(const ContractionSystem& sys, const RegionBound& region) {
    if (region.box) return *region.box;
    const auto& digits = region.prefix->digits;
    int dim = sys.dimension;
    Box b;
    b.lo.assign(static_cast<size_t>(dim), Rational(0));
    Rational scale(1);
    Rational inv_base{BigInt(1), BigInt(sys.base)};
    for (const Digit& d : digits) {
        scale *= inv_base;
        for (int a = 0; a < dim; ++a) b.lo[static_cast<size_t>(a)] += Rational(d[static_cast<size_t>(a)]) * scale;
    }
    b.hi = b.lo;
    for (int a = 0; a < dim; ++a) b.hi[static_cast<size_t>(a)] += scale;
    return b;
}

std::vector<Rational> embed_point(const ContractionSystem& sys, const CPoint& p) {
    if (sys.kind == SystemKind::Similitude) return p.coords;
    int dim = sys.dimension;
    Rational inv_base{BigInt(1), BigInt(sys.base)};
    std::vector<Rational> v(static_cast<size_t>(dim), Rational(0));
    Rational scale(1);
    for (const Digit& d : p.head) {
        scale *= inv_base;
        for (int a = 0; a < dim; ++a) v[static_cast<size_t>(a)] += Rational(d[static_cast<size_t>(a)]) * scale;
    }
    // periodic tail: value of one cycle, then the geometric series factor
    Rational cycle_scale(1);
    std::vector<Rational> cycle_value(static_cast<size_t>(dim), Rational(0));
    for (const Digit& d : p.cycle) {
        cycle_scale *= inv_base;
        for (int a = 0; a < dim; ++a)
            cycle_value[static_cast<size_t>(a)] += Rational(d[static_cast<size_t>(a)]) * cycle_scale;
    }
    Rational series = Rational(1) / (Rational(1) - cycle_scale);
    for (int a = 0; a < dim; ++a)
        v[static_cast<size_t>(a)] += scale * cycle_value[static_cast<size_t>(a)] * series;
    return v;
}

CPoint apply(const ContractionMap& f, const CPoint& p) {
    switch (f.kind) {
        case MapKind::Identity: return p;
        case MapKind::Similitude: {
            CPoint out;
            out.coords.reserve(p.coords.size());
            for (size_t i = 0; i < p.coords.size(); ++i)
                out.coords.push_back(f.ratio * p.coords[i] + f.offset[i]);
            return out;
        }
        case MapKind::DigitMap: {
            CPoint out = p;
            out.head.insert(out.head.begin(), f.digit);
            return out;
        }
    }
    throw Error(Errc::InvalidArgument, "bad map kind");
}

std::optional<CPoint> invert(const ContractionMap& f, const CPoint& p) {
    switch (f.kind) {
        case MapKind::Identity: return p;
        case MapKind::Similitude: {
            CPoint out;
            out.coords.reserve(p.coords.size());
            for (size_t i = 0; i < p.coords.size(); ++i) {
                Rational x = (p.coords[i] - f.offset[i]) / f.ratio;
                if (x < Rational(0) || x > Rational(1)) return std::nullopt;
                out.coords.push_back(std::move(x));
            }
            return out;
        }
        case MapKind::DigitMap: {
            if (digit_at(p, 0) != f.digit) return std::nullopt;
            CPoint out = p;
            if (!out.head.empty()) {
                out.head.erase(out.head.begin());
            } else {
                // shift the cycle by one: same cycle, head absorbs nothing
                std::rotate(out.cycle.begin(), out.cycle.begin() + 1, out.cycle.end());
            }
            return out;
        }
    }
    throw Error(Errc::InvalidArgument, "bad map kind");
}

RegionBound full_region(const ContractionSystem& sys) {
    RegionBound r;
    r.diameter = sys.diameter();
    if (sys.kind == SystemKind::Similitude)
        r.box = unit_cube(sys.dimension);
    else
        r.prefix = DigitPrefix{};
    return r;
}

RegionBound image_box(const ContractionSystem& sys, std::span<const MapRef> maps) {
    RegionBound r;
    if (sys.kind == SystemKind::Similitude) {
        Box box = unit_cube(sys.dimension);
        Rational diam(1);
        // composition acts right-to-left on the ambient cube
        for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
            const ContractionMap& f = **it;
            if (f.is_identity()) continue;
            for (size_t a = 0; a < box.lo.size(); ++a) {
                box.lo[a] = f.ratio * box.lo[a] + f.offset[a];
                box.hi[a] = f.ratio * box.hi[a] + f.offset[a];
            }
            diam *= f.ratio;
        }
        r.box = std::move(box);
        r.diameter = std::move(diam);
        return r;
    }
    DigitPrefix prefix;
    for (const MapRef& f : maps) {
        if (f->is_identity()) continue;
        prefix.digits.push_back(f->digit);
    }
    r.diameter = Rational::pow(Rational{BigInt(1), BigInt(sys.base)},
                               static_cast<unsigned>(prefix.digits.size()));
    r.prefix = std::move(prefix);
    return r;
}

bool cover_check(const ContractionSystem& sys, std::span<const MapRef> maps) {
    if (sys.kind == SystemKind::Digit) {
        std::set<Digit> want(sys.digits.begin(), sys.digits.end());
        std::set<Digit> have;
        for (const MapRef& f : maps) {
            if (f->is_identity()) return true;  // id image is all of C
            have.insert(f->digit);
        }
        return have == want;
    }
    // Exact sweep: cut the cube along every box endpoint; each grid cell
    // must lie inside some image box.
    int dim = sys.dimension;
    std::vector<Box> boxes;
    for (const MapRef& f : maps) {
        if (f->is_identity()) return true;
        MapRef one[] = {f};
        boxes.push_back(*image_box(sys, one).box);
    }
    if (boxes.empty()) return false;
    std::vector<std::vector<Rational>> grid(static_cast<size_t>(dim));
    for (int a = 0; a < dim; ++a) {
        auto& g = grid[static_cast<size_t>(a)];
        g.push_back(Rational(0));
        g.push_back(Rational(1));
        for (const Box& b : boxes) {
            g.push_back(b.lo[static_cast<size_t>(a)]);
            g.push_back(b.hi[static_cast<size_t>(a)]);
        }
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    std::vector<size_t> cell(static_cast<size_t>(dim), 0);
    while (true) {
        bool covered = false;
        for (const Box& b : boxes) {
            bool inside = true;
            for (int a = 0; a < dim && inside; ++a) {
                const auto& g = grid[static_cast<size_t>(a)];
                size_t i = cell[static_cast<size_t>(a)];
                inside = b.lo[static_cast<size_t>(a)] <= g[i] && g[i + 1] <= b.hi[static_cast<size_t>(a)];
            }
            if (inside) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
        int a = dim - 1;
        while (a >= 0 && cell[static_cast<size_t>(a)] + 2 >= grid[static_cast<size_t>(a)].size()) {
            cell[static_cast<size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
        ++cell[static_cast<size_t>(a)];
    }
    return true;
}

bool cover_check_all(const ContractionSystem& sys) {
    std::vector<MapRef> refs;
    refs.reserve(sys.maps.size());
    for (const ContractionMap& f : sys.maps) refs.push_back(&f);
    return cover_check(sys, refs);
}

std::vector<RegionBound> attractor_sample(const ContractionSystem& sys, int depth) {
    if (depth < 0) throw Error(Errc::InvalidArgument, "negative depth");
    std::vector<RegionBound> out{full_region(sys)};
    for (int level = 0; level < depth; ++level) {
        std::vector<RegionBound> next;
        for (const RegionBound& r : out) {
            for (const ContractionMap& f : sys.maps) {
                RegionBound img;
                if (sys.kind == SystemKind::Similitude) {
                    Box b = *r.box;
                    for (size_t a = 0; a < b.lo.size(); ++a) {
                        b.lo[a] = f.ratio * b.lo[a] + f.offset[a];
                        b.hi[a] = f.ratio * b.hi[a] + f.offset[a];
                    }
                    img.box = std::move(b);
                    img.diameter = r.diameter * f.ratio;
                } else {
                    DigitPrefix p = *r.prefix;
                    p.digits.insert(p.digits.begin(), f.digit);
                    img.prefix = std::move(p);
                    img.diameter = r.diameter * Rational{BigInt(1), BigInt(sys.base)};
                }
                next.push_back(std::move(img));
            }
        }
        out = std::move(next);
    }
    // deduplicate (distinct compositions can share an image)
    auto key = [&](const RegionBound& r) {
        std::string k;
        if (r.box) {
            for (size_t i = 0; i < r.box->lo.size(); ++i)
                k += r.box->lo[i].str() + "," + r.box->hi[i].str() + ";";
        } else {
            for (const Digit& d : r.prefix->digits) {
                for (int c : d) k += std::to_string(c) + ".";
                k += ";";
            }
        }
        return k;
    };
    std::map<std::string, RegionBound> unique;
    for (RegionBound& r : out) unique.emplace(key(r), std::move(r));
    std::vector<RegionBound> result;
    result.reserve(unique.size());
    for (auto& [k, v] : unique) result.push_back(std::move(v));
    return result;
}

CPoint fixed_point(const ContractionMap& f) {
    switch (f.kind) {
        case MapKind::Identity:
            throw Error(Errc::IdentityHasNoUniqueFixedPoint,
                        "identity map has no unique fixed point");
        case MapKind::Similitude: {
            CPoint p;
            Rational denom = Rational(1) - f.ratio;
            p.coords.reserve(f.offset.size());
            for (const Rational& b : f.offset) p.coords.push_back(b / denom);
            return p;
        }
        case MapKind::DigitMap: {
            CPoint p;
            p.cycle = {f.digit};
            return p;
        }
    }
    throw Error(Errc::InvalidArgument, "bad map kind");
}

CPoint cycle_fixed_point(const ContractionSystem& sys, std::span<const MapRef> maps) {
    if (sys.kind == SystemKind::Digit) {
        CPoint p;
        for (const MapRef& f : maps)
            if (!f->is_identity()) p.cycle.push_back(f->digit);
        if (p.cycle.empty())
            throw Error(Errc::IdentityHasNoUniqueFixedPoint, "all-identity composition");
        return p;
    }
    // fold the affine composition left-to-right: acc(x) = A x + B
    Rational scale(1);
    std::vector<Rational> shift(static_cast<size_t>(sys.dimension), Rational(0));
    for (const MapRef& f : maps) {
        if (f->is_identity()) continue;
        for (size_t a = 0; a < shift.size(); ++a)
            shift[a] = shift[a] + scale * f->offset[a];
        scale *= f->ratio;
    }
    if (scale == Rational(1))
        throw Error(Errc::IdentityHasNoUniqueFixedPoint, "all-identity composition");
    CPoint p;
    Rational denom = Rational(1) - scale;
    p.coords.reserve(shift.size());
    for (const Rational& b : shift) p.coords.push_back(b / denom);
    return p;
}

}  // namespace bvx
