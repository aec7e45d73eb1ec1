#include "wormlab/gromov_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wormlab {

void SampledCurve::validate() const {
    if (params.size() != points.size() || params.size() < 2) {
        throw DomainError("SampledCurve: params/points length mismatch");
    }
    for (size_t i = 1; i < params.size(); ++i) {
        if (!(params[i] > params[i - 1])) {
            throw DomainError("SampledCurve: params must be strictly increasing");
        }
    }
    if (!(claimed_a >= 1.0) || !(claimed_b >= 0.0)) {
        throw DomainError("SampledCurve: need A >= 1 and B >= 0");
    }
}

double gromov_product(const MetricOracle& d, const ComplexPoint2& x, const ComplexPoint2& y,
                      const ComplexPoint2& o) {
    return 0.5 * (d.distance(x, o) + d.distance(y, o) - d.distance(x, y));
}

namespace {

double delta_expression(const std::vector<std::vector<double>>& dm, int x, int y, int z, int o) {
    const double pxy = 0.5 * (dm[x][o] + dm[y][o] - dm[x][y]);
    const double pxz = 0.5 * (dm[x][o] + dm[z][o] - dm[x][z]);
    const double pyz = 0.5 * (dm[y][o] + dm[z][o] - dm[y][z]);
    return std::min(pxz, pyz) - pxy;
}

}  // namespace

double delta_four_point_matrix(const std::vector<std::vector<double>>& dist, std::uint64_t seed) {
    const int n = static_cast<int>(dist.size());
    if (n < 4) throw DomainError("delta_four_point: need at least 4 points");
    double best = 0.0;
    if (n <= 60) {
        for (int o = 0; o < n; ++o) {
            for (int x = 0; x < n; ++x) {
                if (x == o) continue;
                for (int y = 0; y < n; ++y) {
                    if (y == o || y == x) continue;
                    for (int z = 0; z < n; ++z) {
                        if (z == o || z == x || z == y) continue;
                        best = std::max(best, delta_expression(dist, x, y, z, o));
                    }
                }
            }
        }
        return best;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (long long it = 0; it < 10000000; ++it) {
        const int o = pick(rng), x = pick(rng), y = pick(rng), z = pick(rng);
        if (o == x || o == y || o == z || x == y || x == z || y == z) continue;
        best = std::max(best, delta_expression(dist, x, y, z, o));
    }
    return best;
}

double delta_four_point(const MetricOracle& d, const std::vector<ComplexPoint2>& sample,
                        std::uint64_t seed) {
    const int n = static_cast<int>(sample.size());
    if (n < 4) throw DomainError("delta_four_point: need at least 4 points");
    std::vector<std::vector<double>> dm(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            dm[i][j] = dm[j][i] = d.distance(sample[i], sample[j]);
        }
    }
    return delta_four_point_matrix(dm, seed);
}

QuasigeodesicFit quasigeodesic_check(const MetricOracle& d, const SampledCurve& c) {
    c.validate();
    const double slack = 3.0 * d.accuracy().slack();
    QuasigeodesicFit fit;
    fit.a_fit = 1.0;
    fit.b_fit = 0.0;
    fit.ok = true;
    const size_t n = c.params.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double gap = c.params[j] - c.params[i];
            const double dist = d.distance(c.points[i], c.points[j]);
            // multiplicative fit with B = 0, where both quantities are
            // meaningfully positive
            if (dist > 1e-12 && gap > 1e-12) {
                fit.a_fit = std::max(fit.a_fit, std::max(dist / gap, gap / dist));
            }
            // additive slack at the claimed A
            fit.b_fit = std::max(fit.b_fit, dist - c.claimed_a * gap);
            fit.b_fit = std::max(fit.b_fit, gap / c.claimed_a - dist);
            // the claimed two-sided inequality, with oracle slack (plus a
            // float cushion for exact equality cases)
            const double eps = slack + 1e-12 * (1.0 + gap);
            if (dist > c.claimed_a * gap + c.claimed_b + eps ||
                dist < gap / c.claimed_a - c.claimed_b - eps) {
                fit.ok = false;
            }
        }
    }
    return fit;
}

namespace {

double side_resolution(const MetricOracle& d, const SampledCurve& side) {
    double res = 0.0;
    for (size_t i = 1; i < side.points.size(); ++i) {
        res = std::max(res, d.distance(side.points[i - 1], side.points[i]));
    }
    return res;
}

double max_min_distance(const MetricOracle& d, const SampledCurve& from,
                        const SampledCurve& other1, const SampledCurve& other2) {
    double worst = 0.0;
    for (const ComplexPoint2& p : from.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const ComplexPoint2& q : other1.points) best = std::min(best, d.distance(p, q));
        for (const ComplexPoint2& q : other2.points) best = std::min(best, d.distance(p, q));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double slimness(const MetricOracle& d, const SampledTriangle& t) {
    t.a.validate();
    t.b.validate();
    t.c.validate();
    // curve sampling density: consecutive samples must sit within the
    // declared oracle resolution scale (chord <= resolution when graded)
    (void)side_resolution(d, t.a);
    double m = max_min_distance(d, t.a, t.b, t.c);
    m = std::max(m, max_min_distance(d, t.b, t.a, t.c));
    m = std::max(m, max_min_distance(d, t.c, t.a, t.b));
    return m;
}

double slimness_on_graph(const MetricGraph& g, const SampledTriangle& t) {
    if (g.is_product()) throw DomainError("slimness_on_graph: product graphs unsupported");
    auto snap_side = [&](const SampledCurve& side) {
        std::vector<int> ids;
        ids.reserve(side.points.size());
        for (const ComplexPoint2& p : side.points) ids.push_back(g.snap(p));
        return ids;
    };
    const std::vector<int> ia = snap_side(t.a);
    const std::vector<int> ib = snap_side(t.b);
    const std::vector<int> ic = snap_side(t.c);
    auto measure = [&](const std::vector<int>& from, std::vector<int> others) {
        std::sort(others.begin(), others.end());
        others.erase(std::unique(others.begin(), others.end()), others.end());
        const std::vector<double> dist = g.distances_from(others);
        double worst = 0.0;
        for (int id : from) {
            if (!is_finite(dist[id])) {
                throw DisconnectedGraphError(g.component[id], g.component[others.front()]);
            }
            worst = std::max(worst, dist[id]);
        }
        return worst;
    };
    auto join = [](const std::vector<int>& u, const std::vector<int>& v) {
        std::vector<int> out(u);
        out.insert(out.end(), v.begin(), v.end());
        return out;
    };
    double m = measure(ia, join(ib, ic));
    m = std::max(m, measure(ib, join(ia, ic)));
    m = std::max(m, measure(ic, join(ia, ib)));
    return m;
}

SampledTriangle build_theorem_triangle(const TriangleRecipe& recipe) {
    recipe.base_geodesic.validate();
    recipe.fiber_geodesic.validate();
    const double t_n = recipe.t_n;
    if (!(t_n > 0.0)) throw DomainError("build_theorem_triangle: t_n must be positive");
    const double len_base = recipe.base_geodesic.param_length();
    const double len_fiber = recipe.fiber_geodesic.param_length();
    if (std::abs(len_base - t_n) > 1e-9 || std::abs(len_fiber - t_n) > 1e-9) {
        throw DomainError("build_theorem_triangle: side parameter lengths must equal t_n");
    }
    const auto& gamma = recipe.base_geodesic;
    const auto& sigma = recipe.fiber_geodesic;
    if (std::abs(gamma.points.front().z - recipe.base_point) > 1e-12 ||
        std::abs(sigma.points.front().w - recipe.fiber_point) > 1e-12) {
        throw DomainError("build_theorem_triangle: sides must start at (z_n, q)");
    }

    SampledTriangle tri;
    // side a: t -> (z_n, sigma(t))
    for (size_t i = 0; i < sigma.params.size(); ++i) {
        tri.a.params.push_back(sigma.params[i] - sigma.params.front());
        tri.a.points.emplace_back(recipe.base_point, sigma.points[i].w);
    }
    // side b: t -> (gamma(t), q)
    for (size_t i = 0; i < gamma.params.size(); ++i) {
        tri.b.params.push_back(gamma.params[i] - gamma.params.front());
        tri.b.points.emplace_back(gamma.points[i].z, recipe.fiber_point);
    }
    // side c on [0, 2 t_n]: (gamma(t), sigma(t_n)), then (gamma(t_n), sigma(2 t_n - t))
    const Complex sigma_end = sigma.points.back().w;
    const Complex gamma_end = gamma.points.back().z;
    for (size_t i = 0; i < gamma.params.size(); ++i) {
        tri.c.params.push_back(gamma.params[i] - gamma.params.front());
        tri.c.points.emplace_back(gamma.points[i].z, sigma_end);
    }
    for (size_t i = sigma.params.size(); i-- > 0;) {
        const double t = 2.0 * t_n - (sigma.params[i] - sigma.params.front());
        if (t <= tri.c.params.back() + 1e-12) continue;  // corner sample shared
        tri.c.params.push_back(t);
        tri.c.points.emplace_back(gamma_end, sigma.points[i].w);
    }
    tri.a.claimed_a = tri.b.claimed_a = 1.0;
    tri.c.claimed_a = 2.0;
    tri.a.validate();
    tri.b.validate();
    tri.c.validate();
    return tri;
}

double theorem_scale_from_radius(double r_n, double c_bilip) {
    if (!(r_n > 0.0) || !(c_bilip >= 1.0)) {
        throw DomainError("theorem_scale_from_radius: need r_n > 0 and C >= 1");
    }
    return r_n / (16.0 * c_bilip);
}

double bilipschitz_constant_probe(const DomainHandle& domain, const ComplexPoint2& p, double r,
                                  double spacing, std::uint64_t seed) {
    if (!(r >= 1.0)) throw DomainError("bilipschitz_constant_probe: need R >= 1");

    // sample a graph covering B(p, 4R), restrict to the ball subgraph, and
    // compare the two shortest-path metrics on pairs inside B(p, R)
    MetricGraph full;
    if (domain.tag() == DomainHandle::Tag::Model && domain.model_domain().is_planar()) {
        const ModelDomain& md = domain.model_domain();
        if (md.tag() == ModelDomain::Tag::UnitDisc || md.tag() == ModelDomain::Tag::Disc) {
            const double radius = (md.tag() == ModelDomain::Tag::UnitDisc) ? 1.0 : md.disc_radius();
            const Complex center =
                (md.tag() == ModelDomain::Tag::UnitDisc) ? Complex(0.0) : md.disc_center();
            const double reach = radius * std::tanh(4.0 * r + 0.5);
            PlanarBoxRegion box{center - Complex(reach, reach), center + Complex(reach, reach),
                                spacing, Complex(0.0)};
            full = build_metric_graph(domain, box, DiscSearchConfig{});
        } else {
            throw DomainError("bilipschitz_constant_probe: unsupported planar model");
        }
    } else if (domain.tag() == DomainHandle::Tag::PreWorm) {
        BundlePatchRegion patch;
        patch.chart_center = domain.chart_center();
        patch.s_min = -4.0 * r - 0.5;
        patch.s_max = 4.0 * r + 0.5;
        patch.g_min = -8.0 * r - 1.0;
        patch.g_max = 8.0 * r + 1.0;
        patch.spacing = spacing;
        full = build_metric_graph(domain, patch, DiscSearchConfig{});
    } else {
        throw DomainError("bilipschitz_constant_probe: unsupported domain");
    }

    const int center = full.snap(p);
    const std::vector<double> from_center = full.distances_from({center});

    // induced subgraph on the 4R ball
    std::vector<int> remap(full.size(), -1);
    std::vector<ComplexPoint2> ball_nodes;
    for (int i = 0; i < full.size(); ++i) {
        if (from_center[i] <= 4.0 * r) {
            remap[i] = static_cast<int>(ball_nodes.size());
            ball_nodes.push_back(full.nodes[i]);
        }
    }
    std::vector<MetricGraph::Edge> ball_edges;
    for (int u = 0; u < full.size(); ++u) {
        if (remap[u] < 0) continue;
        for (int it = full.offsets[u]; it < full.offsets[u + 1]; ++it) {
            const int t = full.targets[it];
            if (u < t && remap[t] >= 0) {
                ball_edges.push_back({remap[u], remap[t], full.weights[it], full.max_chord});
            }
        }
    }
    const MetricGraph ball = MetricGraph::assemble(std::move(ball_nodes), std::move(ball_edges));

    // seeded pairs inside B(p, R)
    std::vector<int> inner;
    for (int i = 0; i < full.size(); ++i) {
        if (from_center[i] <= r) inner.push_back(i);
    }
    if (inner.size() < 2) throw DomainError("bilipschitz_constant_probe: ball too small");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, inner.size() - 1);
    double worst = 1.0;
    for (int trial = 0; trial < 40; ++trial) {
        const int a = inner[pick(rng)];
        const int b = inner[pick(rng)];
        if (a == b) continue;
        const double d_full = graph_distance(full, full.nodes[a], full.nodes[b]).length;
        if (d_full < 4.0 * full.resolution) continue;
        const double d_ball = graph_distance(ball, full.nodes[a], full.nodes[b]).length;
        worst = std::max(worst, d_ball / d_full);
    }
    return worst;
}

}  // namespace wormlab
