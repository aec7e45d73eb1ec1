#pragma once

// Numerical Kobayashi-Royden metric estimation: polynomial extremal-disc
// search for upper bounds, projection/enclosure closed forms for lower
// bounds, and Kobayashi distance approximation by shortest paths on sampled
// metric graphs.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wormlab/geom_core.hpp"
#include "wormlab/hyperbolic_exact.hpp"
#include "wormlab/worm_domains.hpp"

namespace wormlab {

struct DiscSearchConfig {
    int degree = 6;                // polynomial disc degree
    int boundary_samples = 48;     // angles per constraint circle
    std::vector<double> radii = {0.45, 0.7, 0.875, 0.9985};
    int restarts = 4;
    std::uint64_t seed = 20260810ull;
    int max_iters = 3000;          // objective evaluations per restart; 0 = bounds only
    double margin = 1e-4;          // interior feasibility margin

    void validate() const;
};

// Tagged domain: a model domain, a fiber-scaled Worm B_lambda(W), or a
// pre-Worm with a chart center for trivialized coordinates.
class DomainHandle {
  public:
    enum class Tag { Model, Worm, PreWorm };

    // Which exact base metric backs graph-weight estimates over classical
    // bases: the inner annulus theta^{-1}(I), the outer one, or none
    // (rigorous inscribed-disc bounds only).
    enum class BaseHint { Auto, InnerAnnulus, OuterAnnulus };

    static DomainHandle model(ModelDomain m);
    static DomainHandle worm(WormSpec spec, double scale = 1.0,
                             BaseHint hint = BaseHint::Auto);
    static DomainHandle preworm(PreWormSpec spec, Complex chart_center,
                                BaseHint hint = BaseHint::Auto);

    Tag tag() const { return tag_; }
    const ModelDomain& model_domain() const;
    const WormSpec& worm_spec() const;
    const PreWormSpec& preworm_spec() const;
    double scale() const { return scale_; }
    Complex chart_center() const { return chart_center_; }
    BaseHint base_hint() const { return hint_; }

    bool contains(const ComplexPoint2& p) const;
    // Positive strictly inside, on the scale of a defining function.
    double interior_margin(const ComplexPoint2& p) const;

    struct RoydenBounds {
        double lower = 0.0;
        double upper = std::numeric_limits<double>::infinity();
        bool lower_flagged = false;  // only a trivial/heuristic lower bound
        bool upper_trivial = false;
    };
    RoydenBounds cheap_royden_bounds(const TangentVector2& v) const;

    // Estimator used for graph edge weights: mean of the cheap bounds when
    // the lower side is trustworthy, the hinted chart-product estimate when
    // a base hint is set, else the rigorous upper bound.
    double graph_weight_royden(const TangentVector2& v) const;

    // Classical annulus bounds of the base region (Worm: X_out, PreWorm:
    // its own interval), when the angle function is classical.
    std::optional<std::pair<double, double>> base_annulus() const;

  private:
    DomainHandle() = default;

    Tag tag_ = Tag::Model;
    std::optional<ModelDomain> model_;
    std::optional<WormSpec> worm_;
    std::optional<PreWormSpec> preworm_;
    double scale_ = 1.0;
    Complex chart_center_ = Complex(1.0);
    BaseHint hint_ = BaseHint::Auto;
    double base_bound_radius_ = 0.0;  // bounding disc radius for genus-zero bases
};

struct RoydenEstimate {
    double value = 0.0;
    bool flagged = false;  // trivial-bound fallback / no nontrivial bound found
};

// Upper bound on K(v) from the best feasible polynomial disc found by a
// seeded multistart coordinate search; deterministic for a fixed seed.
RoydenEstimate royden_upper(const DomainHandle& domain, const TangentVector2& v,
                            const DiscSearchConfig& cfg);

// Max of the available lower bounds (exact metric of the domain itself for
// models, base projection, enclosing products, trivialized fiber value).
RoydenEstimate royden_lower(const DomainHandle& domain, const TangentVector2& v);

// --- metric graphs ----------------------------------------------------------

struct DisconnectedGraphError : std::runtime_error {
    int component_a;
    int component_b;
    DisconnectedGraphError(int a, int b)
        : std::runtime_error("graph_distance: endpoints in different components (" +
                             std::to_string(a) + " vs " + std::to_string(b) + ")"),
          component_a(a), component_b(b) {}
};

struct MetricGraph {
    std::vector<ComplexPoint2> nodes;
    // CSR over an undirected graph (each edge stored in both directions)
    std::vector<int> offsets;
    std::vector<int> targets;
    std::vector<double> weights;

    double resolution = 0.0;  // max edge weight, metric units
    double max_chord = 0.0;   // max Euclidean chord, snapping scale
    std::vector<int> component;
    int component_count = 0;

    // Product domains are discretized per factor and combined with the
    // exact max formula; such graphs have empty node/edge arrays.
    std::shared_ptr<const MetricGraph> factor_first;
    std::shared_ptr<const MetricGraph> factor_second;
    bool is_product() const { return factor_first != nullptr; }

    int size() const { return static_cast<int>(nodes.size()); }
    int degree(int node) const { return offsets[node + 1] - offsets[node]; }

    struct Edge {
        int src, dst;
        double weight, chord;
    };
    static MetricGraph assemble(std::vector<ComplexPoint2> nodes, std::vector<Edge> edges);

    // Documented CSV pair (see README): nodes file id,z_re,z_im,w_re,w_im;
    // edges file src,dst,weight,chord.
    void save_csv(const std::string& nodes_path, const std::string& edges_path) const;
    static MetricGraph load_csv(const std::string& nodes_path, const std::string& edges_path);

    int snap(const ComplexPoint2& p) const;  // nearest node, within one chord
    std::vector<double> distances_from(const std::vector<int>& sources) const;
};

// Sampling regions. Chords connect stencil neighbors of the generating
// grid; weights are graph_weight_royden at the edge midpoint times the
// Euclidean chord.

// 2D grid in the z coordinate (planar model domains), w held fixed.
struct PlanarBoxRegion {
    Complex lo, hi;
    double spacing;
    Complex fixed_w = Complex(0.0);
};

// Product grid: (z from first box, w from second box).
struct ProductBoxRegion {
    Complex first_lo, first_hi;
    Complex second_lo, second_hi;
    double spacing;
};

// w-grid over the fiber slice of a Worm at a fixed base point.
struct FiberSliceRegion {
    Complex base_point;
    double spacing;
};

// Product patch in chart coordinates over a classical base: base points on
// the radial geodesic through the chart center (arclength s), fiber points
// u = e^g on the trivialized positive axis. Ambient nodes (z(s), e^{F(z)} e^g).
struct BundlePatchRegion {
    Complex chart_center;
    double s_min, s_max;
    double g_min, g_max;
    double spacing;  // metric spacing in s; g is stepped at 2*spacing
};

using SamplingRegion =
    std::variant<PlanarBoxRegion, ProductBoxRegion, FiberSliceRegion, BundlePatchRegion>;

MetricGraph build_metric_graph(const DomainHandle& domain, const SamplingRegion& region,
                               const DiscSearchConfig& cfg);

struct GraphPathResult {
    double length = 0.0;
    std::vector<int> node_path;
};

// Shortest path between the snapped endpoints; throws DisconnectedGraphError
// with the two component ids when no path exists.
GraphPathResult graph_distance(const MetricGraph& g, const ComplexPoint2& p,
                               const ComplexPoint2& q);

// Graph distances from a base point to points approaching the target
// geometrically (p_k = target + (o - target) 2^{-k}); monotone growth is
// the completeness witness.
std::vector<double> completeness_probe(const DomainHandle& domain, const ComplexPoint2& o,
                                       const ComplexPoint2& target, int steps,
                                       double spacing = 0.02);

// Oracle view of a graph (distance by Dijkstra per call; royden from the
// handle's edge-weight estimator).
MetricOracle graph_oracle(std::shared_ptr<const MetricGraph> g, const DomainHandle& domain);

}  // namespace wormlab
