#pragma once

#include "bvx/matrix.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bvx {

/// One edge of E_n: source index in V_{n-1}, range index in V_n, and the
/// order rank among the edges sharing its range vertex (dense, 0-based).
/// `label` is consumed by the extension layer; null means unlabeled.
struct Edge {
    int source = 0;
    int range = 0;
    int order = 0;
    std::optional<std::string> label;

    bool operator==(const Edge&) const = default;
};

/// Ordered Bratteli diagram with an optional stationary tail: when
/// repeat_from = k is set, levels k+1..L repeat forever, so the diagram is
/// infinite and levels beyond L materialize by wrapping into the block.
struct OrderedBratteliDiagram {
    std::vector<std::vector<std::string>> levels;  // vertex names, levels[0] singleton
    std::vector<std::vector<Edge>> edge_levels;    // edge_levels[i] = E_{i+1}
    std::optional<int> repeat_from;

    int explicit_levels() const { return static_cast<int>(edge_levels.size()); }  // L
    bool stationary() const { return repeat_from.has_value(); }
    int block_start() const;   // k; throws NotStationary
    int block_period() const;  // L - k; throws NotStationary

    /// True when level n is materializable (always for stationary
    /// diagrams; n <= L otherwise).
    bool level_available(int n) const;
    int vertex_level_index(int n) const;  // level whose vertex set realizes V_n
    int edge_level_index(int n) const;    // index into edge_levels realizing E_n
    int vertex_count(int n) const;
    const std::vector<Edge>& edge_set(int n) const;

    bool operator==(const OrderedBratteliDiagram&) const = default;
};

/// The essentially unique odometer diagram: one vertex per level,
/// `edges_per_level` edges, stationary from level 0.
OrderedBratteliDiagram make_odometer(int edges_per_level);

/// A finite path from v_0: edges[i] indexes edge_set(i+1).
struct FinitePath {
    std::vector<int> edges;

    int depth() const { return static_cast<int>(edges.size()); }
    bool operator==(const FinitePath&) const = default;
};

bool path_valid(const OrderedBratteliDiagram& d, const FinitePath& p);
int path_end_vertex(const OrderedBratteliDiagram& d, const FinitePath& p);
std::vector<int> path_ranks(const OrderedBratteliDiagram& d, const FinitePath& p);
/// Resolves a path from per-level order ranks, walking from v_0 and
/// breaking rank ties by smallest range index. Throws on impossible ranks.
FinitePath path_from_ranks(const OrderedBratteliDiagram& d, std::span<const int> ranks);

/// Edges of E_n with range v, listed by order rank (rank == position).
std::vector<int> edges_into(const OrderedBratteliDiagram& d, int n, int v);
bool is_max_edge(const OrderedBratteliDiagram& d, int n, int edge_index);
bool is_min_edge(const OrderedBratteliDiagram& d, int n, int edge_index);

struct Violation {
    std::string code;
    int level = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<bool> full_connections;  // per explicit edge level

    bool ok() const { return violations.empty(); }
};

/// Structural validation: reports problems, never throws. Full edge
/// connections are flagged per level but are not required.
ValidationReport validate_diagram(const OrderedBratteliDiagram& d);

enum class Extreme { Min, Max };

enum class OrderVerdict { ProperlyOrdered, MultipleMaxPaths, MultipleMinPaths, Both };

/// Decides proper ordering on a stationary diagram. A side is proper iff
/// the one-block composite of its predecessor maps v -> s(extreme edge
/// into v) has a single periodic point; a composite cycle of length m
/// would carry m distinct all-extreme paths.
OrderVerdict check_properly_ordered(const OrderedBratteliDiagram& d);
bool properly_ordered_side(const OrderedBratteliDiagram& d, Extreme side);

/// Vertex of the unique all-maximal (all-minimal) path at the given level.
int extreme_trace_vertex(const OrderedBratteliDiagram& d, Extreme side, int level);
/// Edge index (into edge_set(level)) of x^max / x^min at the given level >= 1.
int extreme_edge_index(const OrderedBratteliDiagram& d, Extreme side, int level);
/// Depth-n prefix of x^max / x^min. Throws NotProperlyOrdered.
FinitePath extreme_path(const OrderedBratteliDiagram& d, Extreme side, int depth);

/// Incidence matrix of E_n: entry (v, w) counts edges from w in V_{n-1}
/// to v in V_n.
struct IncidenceMatrix {
    int level = 0;
    IntMatrix m;
};

IncidenceMatrix incidence_matrix(const OrderedBratteliDiagram& d, int n);
/// Product M_to * ... * M_{from+1}: maps Z^{V_from} to Z^{V_to}.
IntMatrix incidence_product(const OrderedBratteliDiagram& d, int from_level, int to_level);

/// Collapse the diagram to the given cut levels (ascending, starting at 0).
/// New edges are the finite paths between consecutive cuts, ordered
/// right-to-left lexicographically within each range class. The output is
/// stationary again when the input is and the final segment is
/// block-aligned with a period-multiple span.
OrderedBratteliDiagram telescope(const OrderedBratteliDiagram& d, std::span<const int> cuts);

/// Greedy telescoping helper: smallest block-aligned cuts {0, c, c+q*P}
/// such that every adjacent vertex pair of the telescoped diagram is
/// joined by at least `min_edges` edges. Throws CannotTelescope when the
/// path space is finite (edge counts never reach the threshold).
std::vector<int> greedy_cuts(const OrderedBratteliDiagram& d, const BigInt& min_edges);

}  // namespace bvx
