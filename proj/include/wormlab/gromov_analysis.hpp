#pragma once

// Gromov products, four-point delta estimation, (A,B)-quasigeodesic
// verification, M-slimness measurement, and the product-coordinate triangle
// construction whose middle corner sits at distance t_n from the other two
// sides.

#include <cstdint>
#include <vector>

#include "wormlab/geom_core.hpp"
#include "wormlab/kobayashi_numeric.hpp"

namespace wormlab {

struct SampledCurve {
    std::vector<double> params;       // strictly increasing
    std::vector<ComplexPoint2> points;
    double claimed_a = 1.0;
    double claimed_b = 0.0;

    void validate() const;
    double param_length() const { return params.back() - params.front(); }
};

struct SampledTriangle {
    SampledCurve a, b, c;
};

// Recipe for the product-coordinate triangle: fiber side over the base
// point, base side at the fiber point, and the two-leg corner side.
struct TriangleRecipe {
    Complex base_point;               // z_n
    Complex fiber_point;              // q, trivialized fiber coordinate
    double t_n = 1.0;
    SampledCurve base_geodesic;       // gamma_n, points carry .z
    SampledCurve fiber_geodesic;      // sigma_n, points carry .w
};

double gromov_product(const MetricOracle& d, const ComplexPoint2& x, const ComplexPoint2& y,
                      const ComplexPoint2& o);

// Max over ordered quadruples (x,y,z,o) of min((x|z)_o, (y|z)_o) - (x|y)_o.
// Exhaustive for n <= 60, seeded subsampling of 1e7 quadruples above.
double delta_four_point(const MetricOracle& d, const std::vector<ComplexPoint2>& sample,
                        std::uint64_t seed = 20260810ull);
double delta_four_point_matrix(const std::vector<std::vector<double>>& dist,
                               std::uint64_t seed = 20260810ull);

struct QuasigeodesicFit {
    double a_fit = 1.0;  // tightest multiplicative constant with B = 0
    double b_fit = 0.0;  // smallest additive slack at the claimed A
    bool ok = false;     // claimed (A,B) holds within 3x oracle resolution
};
QuasigeodesicFit quasigeodesic_check(const MetricOracle& d, const SampledCurve& c);

// Max over sampled points of each side of the min distance to the union of
// the other two sides.
double slimness(const MetricOracle& d, const SampledTriangle& t);

// Same measurement through a metric graph, one multi-source sweep per side.
double slimness_on_graph(const MetricGraph& g, const SampledTriangle& t);

SampledTriangle build_theorem_triangle(const TriangleRecipe& recipe);

// t_n = r_n / (16 C), the scale the bilipschitz constant allows inside a
// trivializing radius r_n.
double theorem_scale_from_radius(double r_n, double c_bilip);

// Empirical bilipschitz constant: max over sampled pairs in B(p, R) of
// k_{B(p,4R)} / k_M, both through graph oracles on the same node set.
double bilipschitz_constant_probe(const DomainHandle& domain, const ComplexPoint2& p, double r,
                                  double spacing, std::uint64_t seed = 20260810ull);

}  // namespace wormlab
