#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>

#include "wormlab/kobayashi_numeric.hpp"

using namespace wormlab;

namespace {
constexpr double kArctanhHalf = 0.54930614433405485;

DiscSearchConfig bench_cfg() {
    DiscSearchConfig cfg;
    cfg.degree = 8;
    cfg.boundary_samples = 48;
    cfg.radii = {0.45, 0.7, 0.875, 0.9985};
    cfg.restarts = 4;
    cfg.max_iters = 4000;
    return cfg;
}

WormSpec default_worm() {
    return WormSpec::classical(RealInterval(-1.0, 1.0), RealInterval(-1.6, 1.6));
}
}  // namespace

TEST_CASE("royden_upper on the unit disc at the origin") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    const TangentVector2 v(ComplexPoint2(Complex(0.0), Complex(0.0)), Complex(1.0), Complex(0.0));
    const RoydenEstimate u = royden_upper(disc, v, bench_cfg());
    CHECK(u.value <= 1.02);
    CHECK(u.value >= 0.999);
    CHECK_FALSE(u.flagged);
}

TEST_CASE("royden_upper on the unit disc at 0.5 (Mobius-shaped extremal disc)") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    const TangentVector2 v(ComplexPoint2(Complex(0.5), Complex(0.0)), Complex(1.0), Complex(0.0));
    const RoydenEstimate u = royden_upper(disc, v, bench_cfg());
    const double truth = 4.0 / 3.0;
    CHECK(std::abs(u.value - truth) / truth <= 0.02);
}

TEST_CASE("royden_upper on the right half-plane stays within 2 percent") {
    // boundary-touching extremal discs need a higher polynomial degree
    const DomainHandle hp = DomainHandle::model(ModelDomain::right_half_plane());
    DiscSearchConfig cfg = bench_cfg();
    cfg.degree = 18;
    cfg.max_iters = 12000;
    cfg.restarts = 5;
    const TangentVector2 v(ComplexPoint2(Complex(1.0), Complex(0.0)), Complex(1.0), Complex(0.0));
    const RoydenEstimate u = royden_upper(hp, v, cfg);
    CHECK(u.value <= 0.5 * 1.02);
    CHECK(u.value >= 0.499);
}

TEST_CASE("royden_upper on the bidisc cross-checks the max formula") {
    const ModelDomain bidisc =
        ModelDomain::product(ModelDomain::unit_disc(), ModelDomain::unit_disc());
    const DomainHandle h = DomainHandle::model(bidisc);
    const TangentVector2 v(ComplexPoint2(Complex(0.0), Complex(0.0)), Complex(1.0), Complex(1.0));
    const RoydenEstimate u = royden_upper(h, v, bench_cfg());
    const double truth = bidisc.royden(v);  // max formula, equals 1
    CHECK(truth == doctest::Approx(1.0));
    CHECK(std::abs(u.value - truth) / truth <= 0.05);
}

TEST_CASE("royden_upper homogeneity is exact (direction normalized first)") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    DiscSearchConfig cfg = bench_cfg();
    cfg.max_iters = 800;
    const ComplexPoint2 base(Complex(0.3, 0.1), Complex(0.0));
    const RoydenEstimate a = royden_upper(disc, TangentVector2(base, Complex(0.7, 0.2), 0.0), cfg);
    const RoydenEstimate b =
        royden_upper(disc, TangentVector2(base, 3.0 * Complex(0.7, 0.2), 0.0), cfg);
    CHECK(b.value == doctest::Approx(3.0 * a.value).epsilon(1e-14));
}

TEST_CASE("royden_upper determinism: identical seeds give identical estimates") {
    const DomainHandle h = DomainHandle::worm(default_worm());
    const TangentVector2 v(ComplexPoint2(Complex(1.0), Complex(1.0)), Complex(0.3, 0.1),
                           Complex(0.5, -0.2));
    DiscSearchConfig cfg = bench_cfg();
    cfg.degree = 4;
    cfg.max_iters = 600;
    const RoydenEstimate a = royden_upper(h, v, cfg);
    const RoydenEstimate b = royden_upper(h, v, cfg);
    CHECK(a.value == b.value);
    cfg.seed += 1;
    const RoydenEstimate c = royden_upper(h, v, cfg);
    CHECK(std::abs(c.value - a.value) / a.value < 0.2);  // different stream, same ballpark
}

TEST_CASE("royden_lower on models equals the exact value") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    const TangentVector2 v(ComplexPoint2(Complex(0.5), Complex(0.0)), Complex(1.0), Complex(0.0));
    const RoydenEstimate l = royden_lower(disc, v);
    CHECK(l.value == doctest::Approx(4.0 / 3.0));
    CHECK_FALSE(l.flagged);
}

TEST_CASE("royden_lower on the pre-worm: projection and fiber bounds") {
    const WormSpec spec = default_worm();
    const PreWormSpec inner = PreWormSpec::inner_of(spec);
    const DomainHandle h = DomainHandle::preworm(inner, Complex(1.0));

    // dz = 0 deep in a chart: the trivialized half-plane fiber value
    const ComplexPoint2 p(Complex(1.0), Complex(1.0));  // u = e^{-F} w = 1
    const TangentVector2 fiber(p, Complex(0.0), Complex(1.0));
    const RoydenEstimate l = royden_lower(h, fiber);
    CHECK(l.value == doctest::Approx(0.5).epsilon(1e-12));

    // projection bound for base directions
    const TangentVector2 base_dir(p, Complex(1.0), Complex(0.0));
    const RoydenEstimate lb = royden_lower(h, base_dir);
    CHECK(lb.value == doctest::Approx(annulus_royden(Complex(1.0), Complex(1.0),
                                                     std::exp(-0.5), std::exp(0.5)))
                          .epsilon(1e-12));
}

TEST_CASE("lower <= upper with a modest gap on model benchmarks") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    const DomainHandle hp = DomainHandle::model(ModelDomain::right_half_plane());
    DiscSearchConfig cfg = bench_cfg();
    cfg.max_iters = 2500;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.55, 0.55);
    for (int i = 0; i < 6; ++i) {
        const ComplexPoint2 base(Complex(u(rng), u(rng)), Complex(0.0));
        const TangentVector2 v(base, Complex(1.0, u(rng)), Complex(0.0));
        const double lo = royden_lower(disc, v).value;
        const double hi = royden_upper(disc, v, cfg).value;
        CHECK(lo <= hi * (1.0 + 1e-9));
        CHECK((hi - lo) / lo <= 0.25);
    }
    for (int i = 0; i < 4; ++i) {
        const ComplexPoint2 base(Complex(1.0 + u(rng), u(rng)), Complex(0.0));
        const TangentVector2 v(base, Complex(1.0, 0.3 * u(rng)), Complex(0.0));
        DiscSearchConfig hp_cfg = cfg;
        hp_cfg.degree = 18;
        hp_cfg.max_iters = 9000;
        const double lo = royden_lower(hp, v).value;
        const double hi = royden_upper(hp, v, hp_cfg).value;
        CHECK(lo <= hi * (1.0 + 1e-9));
        CHECK((hi - lo) / lo <= 0.25);
    }
}

TEST_CASE("monotonicity under inclusion: smaller domain, larger metric") {
    const DomainHandle small = DomainHandle::model(ModelDomain::unit_disc());
    const DomainHandle big = DomainHandle::model(ModelDomain::disc(Complex(0.0), 2.0));
    DiscSearchConfig cfg = bench_cfg();
    cfg.max_iters = 1500;
    const TangentVector2 v(ComplexPoint2(Complex(0.4, 0.1), Complex(0.0)), Complex(1.0),
                           Complex(0.0));
    const double k_small = royden_upper(small, v, cfg).value;
    const double k_big = royden_upper(big, v, cfg).value;
    CHECK(k_small >= k_big * (1.0 - 0.04));  // combined tolerance of the two estimates
    CHECK(royden_lower(small, v).value >= royden_lower(big, v).value);
}

TEST_CASE("graph distance on the unit disc within 5 percent at spacing 0.02") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    PlanarBoxRegion box;
    box.lo = Complex(-0.75, -0.75);
    box.hi = Complex(0.75, 0.75);
    box.spacing = 0.02;
    const MetricGraph g = build_metric_graph(disc, box, DiscSearchConfig{});
    const double d = graph_distance(g, ComplexPoint2(Complex(0.0), Complex(0.0)),
                                    ComplexPoint2(Complex(0.5), Complex(0.0)))
                         .length;
    CHECK(std::abs(d - kArctanhHalf) / kArctanhHalf <= 0.05);
    CHECK(g.resolution > 0.0);
    CHECK(g.component_count == 1);
}

TEST_CASE("refining the grid shrinks the disc benchmark error") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    auto run = [&](double h) {
        PlanarBoxRegion box;
        box.lo = Complex(-0.6, -0.2);
        box.hi = Complex(0.6, 0.2);
        box.spacing = h;
        const MetricGraph g = build_metric_graph(disc, box, DiscSearchConfig{});
        const double truth = disc_distance(Complex(0.0), Complex(0.48));
        const double d = graph_distance(g, ComplexPoint2(Complex(0.0), Complex(0.0)),
                                        ComplexPoint2(Complex(0.48), Complex(0.0)))
                             .length;
        return std::abs(d - truth);
    };
    const double coarse = run(0.04);
    const double fine = run(0.02);
    CHECK(fine <= 0.6 * coarse + 1e-4);
}

TEST_CASE("bidisc graph distance matches the product formula within 5 percent") {
    const ModelDomain bidisc =
        ModelDomain::product(ModelDomain::unit_disc(), ModelDomain::unit_disc());
    const DomainHandle h = DomainHandle::model(bidisc);
    ProductBoxRegion region;
    region.first_lo = Complex(-0.7, -0.7);
    region.first_hi = Complex(0.7, 0.7);
    region.second_lo = Complex(-0.7, -0.7);
    region.second_hi = Complex(0.7, 0.7);
    region.spacing = 0.1;
    const MetricGraph g = build_metric_graph(h, region, DiscSearchConfig{});
    REQUIRE(g.is_product());
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> u(-0.55, 0.55);
    auto snapped = [&](Complex z, Complex w) {
        const Complex zs = g.factor_first->nodes[g.factor_first->snap(ComplexPoint2(z, 0.0))].z;
        const Complex ws = g.factor_second->nodes[g.factor_second->snap(ComplexPoint2(w, 0.0))].z;
        return ComplexPoint2(zs, ws);
    };
    for (int i = 0; i < 20; ++i) {
        // compare at the snapped node pair so grid quantization does not
        // contaminate the benchmark
        const ComplexPoint2 p = snapped(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
        const ComplexPoint2 q = snapped(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
        const double truth = bidisc.distance(p, q);
        if (truth < 0.2) continue;
        const double d = graph_distance(g, p, q).length;
        CHECK(std::abs(d - truth) / truth <= 0.05);
    }
}

TEST_CASE("graph distance basics: identity, symmetry, triangle inequality") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    PlanarBoxRegion box;
    box.lo = Complex(-0.7, -0.7);
    box.hi = Complex(0.7, 0.7);
    box.spacing = 0.05;
    const MetricGraph g = build_metric_graph(disc, box, DiscSearchConfig{});
    const ComplexPoint2 p(Complex(0.0), Complex(0.0));
    CHECK(graph_distance(g, p, p).length == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int i = 0; i < 25; ++i) {
        const ComplexPoint2 a(Complex(u(rng), u(rng)), Complex(0.0));
        const ComplexPoint2 b(Complex(u(rng), u(rng)), Complex(0.0));
        const ComplexPoint2 c(Complex(u(rng), u(rng)), Complex(0.0));
        const double ab = graph_distance(g, a, b).length;
        const double ba = graph_distance(g, b, a).length;
        CHECK(std::abs(ab - ba) <= 1e-12);
        const double ac = graph_distance(g, a, c).length;
        const double cb = graph_distance(g, c, b).length;
        CHECK(ab <= ac + cb + 3.0 * g.resolution);
    }
}

TEST_CASE("graph distance never decreases when nodes are removed") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    PlanarBoxRegion box;
    box.lo = Complex(-0.6, -0.6);
    box.hi = Complex(0.6, 0.6);
    box.spacing = 0.05;
    const MetricGraph g = build_metric_graph(disc, box, DiscSearchConfig{});

    // rebuild with a hole: drop nodes in a band crossing the geodesic
    std::vector<ComplexPoint2> kept;
    std::vector<int> remap(g.size(), -1);
    for (int i = 0; i < g.size(); ++i) {
        const Complex z = g.nodes[i].z;
        const bool drop = std::abs(z.real() - 0.25) < 0.06 && std::abs(z.imag()) < 0.2;
        if (!drop) {
            remap[i] = static_cast<int>(kept.size());
            kept.push_back(g.nodes[i]);
        }
    }
    std::vector<MetricGraph::Edge> edges;
    for (int u = 0; u < g.size(); ++u) {
        if (remap[u] < 0) continue;
        for (int it = g.offsets[u]; it < g.offsets[u + 1]; ++it) {
            const int t = g.targets[it];
            if (u < t && remap[t] >= 0) {
                edges.push_back({remap[u], remap[t], g.weights[it], 0.05});
            }
        }
    }
    const MetricGraph g2 = MetricGraph::assemble(kept, edges);
    const ComplexPoint2 p(Complex(0.0), Complex(0.0));
    const ComplexPoint2 q(Complex(0.5), Complex(0.0));
    CHECK(graph_distance(g2, p, q).length >= graph_distance(g, p, q).length - 1e-12);
}

TEST_CASE("disconnected endpoints report their component ids") {
    // two tiny clusters with no connecting edge
    std::vector<ComplexPoint2> nodes = {
        ComplexPoint2(Complex(0.0), Complex(0.0)), ComplexPoint2(Complex(0.01), Complex(0.0)),
        ComplexPoint2(Complex(0.5), Complex(0.0)), ComplexPoint2(Complex(0.51), Complex(0.0))};
    std::vector<MetricGraph::Edge> edges = {{0, 1, 0.01, 0.01}, {2, 3, 0.01, 0.01}};
    const MetricGraph g = MetricGraph::assemble(nodes, edges);
    CHECK(g.component_count == 2);
    try {
        graph_distance(g, nodes[0], nodes[2]);
        FAIL("expected DisconnectedGraphError");
    } catch (const DisconnectedGraphError& e) {
        CHECK(e.component_a != e.component_b);
    }
}

TEST_CASE("metric graph CSV round trip") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    PlanarBoxRegion box;
    box.lo = Complex(-0.4, -0.4);
    box.hi = Complex(0.4, 0.4);
    box.spacing = 0.1;
    const MetricGraph g = build_metric_graph(disc, box, DiscSearchConfig{});
    const auto dir = std::filesystem::temp_directory_path() / "wormlab_graph_io";
    std::filesystem::create_directories(dir);
    const std::string npath = (dir / "nodes.csv").string();
    const std::string epath = (dir / "edges.csv").string();
    g.save_csv(npath, epath);
    const MetricGraph h = MetricGraph::load_csv(npath, epath);
    REQUIRE(h.size() == g.size());
    CHECK(h.resolution == doctest::Approx(g.resolution).epsilon(1e-15));
    const ComplexPoint2 p(Complex(0.0), Complex(0.0));
    const ComplexPoint2 q(Complex(0.3), Complex(0.0));
    CHECK(graph_distance(h, p, q).length ==
          doctest::Approx(graph_distance(g, p, q).length).epsilon(1e-15));
}

TEST_CASE("worm slice graph and completeness probe") {
    const WormSpec spec = default_worm();
    const DomainHandle h = DomainHandle::worm(spec);
    const ComplexPoint2 o(Complex(1.0), Complex(1.0));
    const ComplexPoint2 body_target(Complex(1.0), Complex(2.0));

    const auto seq = completeness_probe(h, o, body_target, 6, 0.02);
    REQUIRE(seq.size() == 6);
    for (size_t i = 1; i < seq.size(); ++i) {
        CHECK(seq[i] > seq[i - 1]);
    }
    CHECK(seq.back() / seq.front() >= 2.0);

    // interior control: bounded (converges to the distance to the target)
    const ComplexPoint2 interior_target(Complex(1.0), Complex(1.5));
    const auto ctrl = completeness_probe(h, o, interior_target, 6, 0.02);
    const double tail_spread = std::abs(ctrl[5] - ctrl[3]);
    CHECK(tail_spread <= 3.0 * 0.05);
    CHECK(ctrl.back() <= 2.0 * seq.front() + 1.0);
}

TEST_CASE("bundle patch graph realizes chart-product distances on the pre-worm") {
    const WormSpec spec = default_worm();
    const PreWormSpec inner = PreWormSpec::inner_of(spec);
    const DomainHandle h =
        DomainHandle::preworm(inner, Complex(1.0), DomainHandle::BaseHint::InnerAnnulus);
    BundlePatchRegion patch;
    patch.chart_center = Complex(1.0);
    patch.s_min = -1.2;
    patch.s_max = 1.2;
    patch.g_min = -1.2;
    patch.g_max = 1.2;
    patch.spacing = 0.05;
    const MetricGraph g = build_metric_graph(h, patch, DiscSearchConfig{});
    CHECK(g.component_count == 1);

    // fiber-only pair: chart distance is the half-plane value |g1 - g2| / 2
    const AnnulusRadialGeodesic ray(std::exp(-0.5), std::exp(0.5), 0.0);
    auto ambient = [&](double s, double gval) {
        const Complex z = ray.at(s);
        const Complex f = spec.angle().f_branch(Complex(1.0), z);
        return ComplexPoint2(z, std::exp(f) * std::exp(gval));
    };
    const double d_fiber = graph_distance(g, ambient(0.0, -0.8), ambient(0.0, 0.8)).length;
    CHECK(std::abs(d_fiber - 0.8) / 0.8 <= 0.05);

    // base-only pair: chart distance is the annulus arclength
    const double d_base = graph_distance(g, ambient(-0.7, 0.0), ambient(0.7, 0.0)).length;
    CHECK(std::abs(d_base - 1.4) / 1.4 <= 0.05);

    // mixed pair: the max of the factor distances
    const double d_mixed = graph_distance(g, ambient(-0.7, -0.6), ambient(0.7, 0.6)).length;
    CHECK(std::abs(d_mixed - 1.4) / 1.4 <= 0.05);
}

TEST_CASE("graph determinism: rebuilding gives identical weights") {
    const DomainHandle disc = DomainHandle::model(ModelDomain::unit_disc());
    PlanarBoxRegion box;
    box.lo = Complex(-0.5, -0.5);
    box.hi = Complex(0.5, 0.5);
    box.spacing = 0.05;
    const MetricGraph a = build_metric_graph(disc, box, DiscSearchConfig{});
    const MetricGraph b = build_metric_graph(disc, box, DiscSearchConfig{});
    REQUIRE(a.size() == b.size());
    REQUIRE(a.weights.size() == b.weights.size());
    for (size_t i = 0; i < a.weights.size(); ++i) {
        CHECK(a.weights[i] == b.weights[i]);
    }
}
