#pragma once

#include "bvx/bratteli.hpp"
#include "bvx/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bvx {

enum class TailKind { Min, Max, Id, Periodic };

/// Continuation rule for the edges beyond a point's finite prefix.
///
/// Min/Max follow the unique all-minimal / all-maximal continuation (they
/// are valid only where that continuation exists, i.e. on the extreme
/// trace). Id and Periodic carry their edges explicitly: `preamble` lists
/// the next edges after the prefix, then `cycle` repeats forever; the
/// cycle is anchored absolutely, edge for level n being
/// cycle[(n - phase - 1) mod cycle.size()]. Id is structurally a periodic
/// tail, tagged separately because it was derived from a labeling's
/// identity subgraph.
struct TailPolicy {
    TailKind kind = TailKind::Min;
    std::vector<int> preamble;
    std::vector<int> cycle;
    int phase = 0;

    bool operator==(const TailPolicy&) const = default;
};

std::string tail_tag(const TailPolicy& tail);

/// A point of the path space X_E: finite prefix plus tail policy.
struct PathPoint {
    FinitePath prefix;
    TailPolicy tail;

    bool operator==(const PathPoint&) const = default;
};

/// Validating constructors. Throw Error(InvalidArgument) on structural
/// inconsistency (broken chaining, tail off the extreme trace, cycle not
/// aligned with the repeating block) and Error(NotProperlyOrdered) where
/// extreme tails do not exist.
PathPoint make_path_point(const OrderedBratteliDiagram& d, FinitePath prefix, TailPolicy tail);
PathPoint min_path_point(const OrderedBratteliDiagram& d, int depth = 0);
PathPoint max_path_point(const OrderedBratteliDiagram& d, int depth = 0);

/// Edge of x at the given level (>= 1), materializing tail edges on
/// demand. Throws Error(DepthExhausted) past the end of a finite diagram.
int edge_at(const OrderedBratteliDiagram& d, const PathPoint& x, int level);
/// Same point with the prefix extended to the given depth.
PathPoint materialize(const OrderedBratteliDiagram& d, const PathPoint& x, int depth);
/// (anchor, period): the edge sequence of x repeats with this period past
/// the anchor level. Stationary diagrams only.
std::pair<int, int> tail_periodicity(const OrderedBratteliDiagram& d, const PathPoint& x);
/// True when x and y denote the same infinite path.
bool same_path(const OrderedBratteliDiagram& d, const PathPoint& x, const PathPoint& y);

/// d_E at finite resolution: 2^-(longest common prefix), or 0 when the
/// paths agree through depth `resolution`.
Rational metric_dE(const OrderedBratteliDiagram& d, const PathPoint& x, const PathPoint& y,
                   int resolution);

/// One Vershik step together with the position it rewrote: the successor
/// replaces edges 1..first_changed and keeps everything beyond.
struct VershikStep {
    PathPoint next;
    int first_changed = 0;
};

/// Successor in right-to-left lexicographic order; nullopt means x = x^max
/// (IsMaximumPath). Throws Error(DepthExhausted) on finite diagrams when
/// the scan runs off the last level.
std::optional<VershikStep> successor_step(const OrderedBratteliDiagram& d, const PathPoint& x);
std::optional<PathPoint> successor(const OrderedBratteliDiagram& d, const PathPoint& x);
/// Mirror images under order reversal; nullopt means x = x^min.
std::optional<VershikStep> predecessor_step(const OrderedBratteliDiagram& d, const PathPoint& x);
std::optional<PathPoint> predecessor(const OrderedBratteliDiagram& d, const PathPoint& x);

/// Order-successor among depth-n paths with the same range vertex
/// (right-to-left lexicographic); nullopt when the path is maximal.
std::optional<FinitePath> finite_successor(const OrderedBratteliDiagram& d, const FinitePath& p);

/// [x, phi(x), ..., phi^k(x)], applying the x^max -> x^min wrap.
std::vector<PathPoint> orbit(const OrderedBratteliDiagram& d, const PathPoint& x, long long k);

struct Cylinder {
    FinitePath path;
};

/// Exact rational measure, or a certified enclosure of width <= 10^-12
/// when the Perron data is irrational.
struct MeasureValue {
    bool exact = true;
    Rational value;
    RInterval enclosure;

    std::string str() const;
};

/// Measure of the cylinder X(p) under the unique invariant measure of a
/// stationary diagram with primitive block incidence matrix. Throws
/// Error(NotStationary) / Error(NotPrimitive).
MeasureValue cylinder_measure(const OrderedBratteliDiagram& d, const Cylinder& p);

/// Element of the K^0 model: an integer vector over V_level in the direct
/// limit along the incidence matrices.
struct K0Element {
    int level = 0;
    std::vector<BigInt> v;

    bool operator==(const K0Element&) const = default;
};

std::string k0_str(const K0Element& a);
K0Element k0_parse(const std::string& text);

/// Pushes the element up through M_{level+1}, ..., M_{to_level}.
K0Element k0_map(const OrderedBratteliDiagram& d, const K0Element& a, int to_level);

/// Equality in the direct limit, decided at the common level. Requires
/// every later incidence matrix to be injective over the rationals;
/// throws Error(UndecidableNonInjective) otherwise.
bool k0_equal(const OrderedBratteliDiagram& d, const K0Element& a, const K0Element& b);

}  // namespace bvx
