#pragma once

#include "bvx/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bvx {

/// One symbol of a digit system: an n-tuple with entries in [0, base).
using Digit = std::vector<int>;

enum class MapKind { Identity, Similitude, DigitMap };

/// A single contraction. Similitudes act on [0,1]^n as x -> ratio*x + offset
/// (exact rationals, image required to stay inside the cube); digit maps act
/// on sequences of allowed digits by prepending their digit. Identity is the
/// label used for unlabeled edges and is never a member of a system's map
/// list.
struct ContractionMap {
    MapKind kind = MapKind::Identity;

    Rational ratio;                  // similitude
    std::vector<Rational> offset;    // similitude

    int base = 0;                    // digit map
    Digit digit;                     // digit map

    int dimension = 0;
    std::string name = "id";

    bool is_identity() const { return kind == MapKind::Identity; }

    static ContractionMap identity();
    static ContractionMap similitude(Rational ratio, std::vector<Rational> offset,
                                     std::string name);
    static ContractionMap digit_map(int base, Digit digit, std::string name);

    bool operator==(const ContractionMap&) const = default;
};

enum class SystemKind { Similitude, Digit };

/// A compact invertible iterated function system: either finitely many
/// similitudes of the unit cube, or a digit system on sequences over an
/// allowed digit set D (base^n tuples minus exclusions).
///
/// Metrics: sup-metric on the cube; base^-(common prefix length) on digit
/// sequences. Both give diam(C) = 1.
struct ContractionSystem {
    SystemKind kind = SystemKind::Similitude;
    int dimension = 1;
    int base = 0;                 // digit systems only
    std::vector<Digit> digits;    // allowed digit set, digit systems only
    std::vector<ContractionMap> maps;
    std::string name;

    Rational contraction_ratio() const;  // the uniform lambda
    Rational diameter() const { return Rational(1); }
    const ContractionMap& map(int index) const;
    int map_index_by_name(const std::string& map_name) const;  // -1 if absent
    bool digit_allowed(const Digit& d) const;
};

/// Built-in systems: "interval2", "cube2(n)", "cube3(n)", "cantor3",
/// "carpet". Throws Error(UnknownPreset).
ContractionSystem preset(const std::string& name);

/// A point of C. Similitude systems: exact rational coordinates. Digit
/// systems: a finite head followed by a periodic cycle repeated forever
/// (the default continuation is the least allowed digit, repeated).
struct CPoint {
    std::vector<Rational> coords;  // similitude
    std::vector<Digit> head;       // digit
    std::vector<Digit> cycle;      // digit, non-empty

    bool operator==(const CPoint&) const = default;
};

CPoint similitude_point(std::vector<Rational> coords);
CPoint digit_point(const ContractionSystem& sys, std::vector<Digit> head,
                   std::vector<Digit> cycle = {});
const Digit& digit_at(const CPoint& p, size_t index);
/// Structural equality can miss equal points written with different
/// head/cycle splits; this compares the sequences they denote.
bool points_equal(const ContractionSystem& sys, const CPoint& a, const CPoint& b);

/// Axis-aligned closed rational box.
struct Box {
    std::vector<Rational> lo, hi;

    Rational diameter() const;  // sup metric: max side length
    bool contains_point(const std::vector<Rational>& p) const;
    bool contains_box(const Box& inner) const;
    bool overlaps_interior(const Box& other) const;
    bool operator==(const Box&) const = default;
};

Box unit_cube(int dimension);

struct DigitPrefix {
    std::vector<Digit> digits;
    bool operator==(const DigitPrefix&) const = default;
};

/// Exact image region f_1 o ... o f_m (C): a box for similitude systems, a
/// digit prefix for digit systems. `diameter` is the exact metric diameter.
struct RegionBound {
    std::optional<Box> box;
    std::optional<DigitPrefix> prefix;
    Rational diameter;

    bool operator==(const RegionBound&) const = default;
};

bool region_contains_point(const ContractionSystem& sys, const RegionBound& region,
                           const CPoint& p);
bool region_contains_region(const RegionBound& outer, const RegionBound& inner);

/// Geometric embedding used for rendering and CSV output: digit prefixes
/// become boxes with side base^-len; similitude regions are returned as-is.
Box embed_region(const ContractionSystem& sys, const RegionBound& region);
std::vector<Rational> embed_point(const ContractionSystem& sys, const CPoint& p);

using MapRef = const ContractionMap*;

CPoint apply(const ContractionMap& f, const CPoint& p);
/// Exact preimage, or nullopt when p is not in f(C).
std::optional<CPoint> invert(const ContractionMap& f, const CPoint& p);

/// Image of C under the composition maps[0] o maps[1] o ... o maps.back().
RegionBound image_box(const ContractionSystem& sys, std::span<const MapRef> maps);
RegionBound full_region(const ContractionSystem& sys);

/// Decides union_f f(C) = C for the given maps of the system (condition (2)
/// of the invertibility definition). Exact: grid sweep over the rational
/// endpoints for similitudes, digit-set equality for digit systems.
bool cover_check(const ContractionSystem& sys, std::span<const MapRef> maps);
bool cover_check_all(const ContractionSystem& sys);

/// All image regions of length-k compositions, deduplicated.
std::vector<RegionBound> attractor_sample(const ContractionSystem& sys, int depth);

/// Unique fixed point of a non-identity map. Throws
/// Error(IdentityHasNoUniqueFixedPoint) for the identity.
CPoint fixed_point(const ContractionMap& f);

/// Fixed point of the composition maps[0] o ... o maps.back(); at least one
/// map must contract.
CPoint cycle_fixed_point(const ContractionSystem& sys, std::span<const MapRef> maps);

}  // namespace bvx
