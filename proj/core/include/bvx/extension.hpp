#pragma once

#include "bvx/bratteli.hpp"
#include "bvx/ifs.hpp"
#include "bvx/vershik.hpp"

#include <optional>
#include <vector>

namespace bvx {

/// Assignment of a contraction (or the identity) to every edge.
/// labels[i][j] is an index into system.maps for edge j of E_{i+1}, or -1
/// for the identity; stationary diagrams repeat the block labels forever.
///
/// A valid labeling satisfies the three conditions: extreme edges never
/// carry the identity, the non-identity maps out of every vertex cover C,
/// and the identity-labeled subgraph contains an infinite path.
struct EdgeLabeling {
    ContractionSystem system;
    std::vector<std::vector<int>> labels;

    int label_at(const OrderedBratteliDiagram& d, int level, int edge_index) const;
    const ContractionMap& map_at(const OrderedBratteliDiagram& d, int level, int edge_index) const;
    bool is_id(const OrderedBratteliDiagram& d, int level, int edge_index) const {
        return label_at(d, level, edge_index) < 0;
    }
};

/// Reads the labels stored in the diagram's edges ("f0"/"0" = map index,
/// null or "id" = identity). Throws Error(MalformedInput) on unknown refs.
EdgeLabeling labeling_from_diagram(const OrderedBratteliDiagram& d, ContractionSystem system);
/// Writes labels back into the edge structs (null for identity).
void write_labels_to_diagram(OrderedBratteliDiagram& d, const EdgeLabeling& lab);

struct LabeledSystem {
    OrderedBratteliDiagram diagram;
    EdgeLabeling labeling;
};

/// Telescopes the diagram until every adjacent vertex pair has enough
/// edges, routes a single identity path through non-extreme edges, and
/// distributes the system's maps over the remaining edges round-robin by
/// order rank. The result always passes validate_labeling and keeps the
/// identity edges on a single infinite path.
LabeledSystem auto_label(const OrderedBratteliDiagram& d, const ContractionSystem& system);

struct LabelingReport {
    std::vector<Violation> violations;
    bool strong_condition3 = false;  // id subgraph contains an infinite path
    bool weak_condition3 = false;    // some path meets id edges infinitely often

    bool ok() const { return violations.empty(); }
};

LabelingReport validate_labeling(const OrderedBratteliDiagram& d, const EdgeLabeling& lab);

/// Tail policy following the identity subgraph beyond the given prefix.
TailPolicy make_id_tail(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                        const FinitePath& prefix);

/// Fiber dichotomy data: Type 2 points have an eventually-identity label
/// sequence (split_depth = last non-identity position); Type 1 points see
/// non-identity labels at infinitely many positions.
struct PointClass {
    bool type2 = false;
    int split_depth = 0;
    std::vector<int> contraction_positions;  // Type 1: window of non-id positions
};

PointClass classify_point(const OrderedBratteliDiagram& d, const PathPoint& x,
                          const EdgeLabeling& lab);

/// pi^{-1}{x} at finite resolution: a shrinking singleton box (Type 1) or
/// the exact cylinder copy of C (Type 2).
struct Fiber {
    bool singleton = false;
    RegionBound region;
    int split_depth = 0;  // Type 2 only
};

Fiber fiber(const OrderedBratteliDiagram& d, const PathPoint& x, const EdgeLabeling& lab,
            int depth);

/// A point of the extended space. Exact points (Type 2 bases) store the
/// pulled-back coordinate c' with actual coordinate
/// f_{x_1} o ... o f_{x_split}(c'); the labels beyond split_depth are all
/// identity, so the actual coordinate is well-defined. Bounded points
/// (Type 1 bases) carry no stored coordinate: their shrinking box is
/// recomputed from the prefix labels on demand.
struct ExtendedPoint {
    PathPoint base;
    bool exact = false;
    int split_depth = 0;
    CPoint pulled_back;
};

/// Validating constructors; exact_point canonicalizes the split depth to
/// the last non-identity position and materializes the base that far.
ExtendedPoint exact_point(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                          PathPoint base, CPoint pulled_back);
ExtendedPoint bounded_point(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                            PathPoint base);

/// Actual coordinate of an exact point.
CPoint exact_coordinate(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                        const EdgeLabeling& lab);
/// Image box of the depth-n prefix labels: the certified region containing
/// the point's coordinate.
RegionBound bounded_region(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                           const EdgeLabeling& lab, int depth);
/// c_{x^max} / c_{x^min}: the coordinate over the extreme path, computed
/// exactly as the fixed point of the label cycle along its tail.
CPoint extreme_coordinate(const OrderedBratteliDiagram& d, const EdgeLabeling& lab, Extreme side);

/// One application of the extended map: successor on the base; exact
/// coordinates keep their pulled-back representative (the head
/// substitution happens entirely in the composed maps), the maximal path
/// wraps to the minimal one.
ExtendedPoint extended_step(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                            const EdgeLabeling& lab);
/// Inverse step: the same construction with the edge order reversed.
ExtendedPoint extended_inverse_step(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                                    const EdgeLabeling& lab);

/// Same infinite base path and same coordinate data.
bool extended_points_equal(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                           const ExtendedPoint& a, const ExtendedPoint& b);

struct ExtendedCylinder {
    FinitePath path;
    RegionBound region;
};

ExtendedCylinder extended_cylinder(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                                   FinitePath path);

struct SemiconjugacyResult {
    bool ok = true;
    long long first_divergence = -1;
};

/// Runs the extended orbit against the base orbit and compares projections
/// step by step (exact path equality).
SemiconjugacyResult check_semiconjugacy(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                                        const EdgeLabeling& lab, long long steps);

struct ProbeTarget {
    FinitePath cylinder;
    RegionBound subregion;
};

/// Iterates the extended map until the point provably lies in the target
/// (base prefix matches and the coordinate sits inside the subregion);
/// nullopt when the budget runs out, which disproves nothing.
std::optional<long long> density_probe(const OrderedBratteliDiagram& d, const ExtendedPoint& p,
                                       const EdgeLabeling& lab, const ProbeTarget& target,
                                       long long budget);

/// Lifted invariant measure of an extended cylinder; defined when the
/// identity edges form a single infinite path, in which case it equals the
/// base cylinder measure. Throws Error(IdSubgraphNotSinglePath) otherwise.
MeasureValue lift_measure(const OrderedBratteliDiagram& d, const EdgeLabeling& lab,
                          const FinitePath& p);

}  // namespace bvx
