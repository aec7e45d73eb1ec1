#pragma once

// Closed-form Kobayashi metrics and distances for the model domains (disc,
// half-plane, strip, annulus) and the exact product/max formula. All
// distances use the normalization k_D(0, s) = arctanh(s); the half-plane
// metric is |dw| / (2 Re w).

#include <memory>
#include <vector>

#include "wormlab/geom_core.hpp"

namespace wormlab {

// arctanh with a guarded approach to the boundary: huge-but-finite values
// instead of inf for arguments rounding to 1.
double arctanh_safe(double x);

// --- unit disc ---------------------------------------------------------

double disc_distance(Complex p, Complex q);
double disc_royden(Complex at, Complex dv);

// Disc of radius r centered at c.
double disc_distance_in(Complex center, double radius, Complex p, Complex q);
double disc_royden_in(Complex center, double radius, Complex at, Complex dv);

// Point at metric distance t from a toward b (unit disc geodesic).
Complex disc_geodesic_point(Complex a, Complex b, double t);

// --- right half-plane --------------------------------------------------

double halfplane_distance(Complex p, Complex q);
// Fiber-direction Kobayashi-Royden metric of the right half-plane.
double halfplane_royden(const TangentVector2& v);
double halfplane_royden_at(Complex at, Complex dv);

// The positive real axis is a geodesic: k(u0, u0*e^{2t}) = |t|.
Complex halfplane_real_geodesic(double u0, double t);

// --- strip {0 < Im < height} -------------------------------------------

double strip_distance(double height, Complex p, Complex q);
double strip_royden(double height, Complex at, Complex dv);

// --- annulus {inner < |z| < outer} --------------------------------------

// Minimum over deck indices of the strip distance between log-lifts; the
// deck search starts at +/-8 and doubles until the minimizer is interior.
double annulus_distance(Complex p, Complex q, double inner, double outer);
double annulus_royden(Complex at, Complex dv, double inner, double outer);

// Radial cross-cuts of an annulus are geodesics; `at(s)` walks one by
// metric arclength, with s = 0 on the core circle |z| = sqrt(inner*outer).
struct AnnulusRadialGeodesic {
    double inner;
    double outer;
    double angle;

    AnnulusRadialGeodesic(double inner_, double outer_, double angle_);
    Complex at(double s) const;
    // Arclength parameter of a point with the given modulus.
    double param_of_radius(double r) const;
};

// --- model domain handle -------------------------------------------------

// Tagged model domain with membership, closed-form distance/metric, and an
// interior-margin function used by the disc-search feasibility tests.
class ModelDomain {
  public:
    enum class Tag { UnitDisc, Disc, RightHalfPlane, Strip, Annulus, Product };

    static ModelDomain unit_disc();
    static ModelDomain disc(Complex center, double radius);
    static ModelDomain right_half_plane();
    static ModelDomain strip(double height);
    static ModelDomain annulus(double inner, double outer);
    static ModelDomain product(ModelDomain first, ModelDomain second);

    Tag tag() const { return tag_; }
    bool is_planar() const { return tag_ != Tag::Product; }
    const ModelDomain& first() const { return *first_; }
    const ModelDomain& second() const { return *second_; }

    // Planar domains read the z coordinate only; products read (z, w).
    bool contains(const ComplexPoint2& p) const;
    double interior_margin(const ComplexPoint2& p) const;
    double distance(const ComplexPoint2& p, const ComplexPoint2& q) const;
    double royden(const TangentVector2& v) const;

    MetricOracle oracle() const;

    // planar accessors
    bool contains_value(Complex v) const;
    double margin_value(Complex v) const;
    double distance_value(Complex a, Complex b) const;
    double royden_value(Complex at, Complex dv) const;

    Complex center_point() const;  // a canonical interior point

    double disc_radius() const { return radius_; }
    Complex disc_center() const { return center_; }
    double strip_height() const { return height_; }
    double annulus_inner() const { return inner_; }
    double annulus_outer() const { return outer_; }

  private:
    ModelDomain() = default;

    Tag tag_ = Tag::UnitDisc;
    Complex center_ = Complex(0.0);
    double radius_ = 1.0;
    double height_ = 1.0;
    double inner_ = 1.0;
    double outer_ = 2.0;
    std::shared_ptr<const ModelDomain> first_;
    std::shared_ptr<const ModelDomain> second_;
};

// max{k_A(p.z, q.z), k_B(p.w, q.w)} -- the exact product formula.
double product_distance(const MetricOracle& factor_a, const MetricOracle& factor_b,
                        const ComplexPoint2& p, const ComplexPoint2& q);

// Oracle for a product whose first factor reads .z and second reads .w.
MetricOracle max_product_oracle(MetricOracle factor_a, MetricOracle factor_b);

}  // namespace wormlab
