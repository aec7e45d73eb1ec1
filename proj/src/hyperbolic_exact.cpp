#include "wormlab/hyperbolic_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wormlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double arctanh_safe(double x) {
    if (x < 0.0) throw DomainError("arctanh_safe: negative argument");
    if (x >= 1.0) throw DomainError("arctanh_safe: argument >= 1");
    if (x > 1.0 - 1e-15) {
        return 0.5 * std::log(2.0 / (1.0 - x));
    }
    return std::atanh(x);
}

// --- unit disc ---------------------------------------------------------

double disc_distance(Complex p, Complex q) {
    require_finite(p, "disc_distance.p");
    require_finite(q, "disc_distance.q");
    if (std::abs(p) >= 1.0 || std::abs(q) >= 1.0) {
        throw DomainError("disc_distance: point outside the unit disc");
    }
    const double num = std::abs(p - q);
    const double den = std::abs(1.0 - std::conj(p) * q);
    return arctanh_safe(num / den);
}

double disc_royden(Complex at, Complex dv) {
    if (std::abs(at) >= 1.0) throw DomainError("disc_royden: point outside the unit disc");
    return std::abs(dv) / (1.0 - std::norm(at));
}

double disc_distance_in(Complex center, double radius, Complex p, Complex q) {
    return disc_distance((p - center) / radius, (q - center) / radius);
}

double disc_royden_in(Complex center, double radius, Complex at, Complex dv) {
    return disc_royden((at - center) / radius, dv / radius);
}

Complex disc_geodesic_point(Complex a, Complex b, double t) {
    if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0) {
        throw DomainError("disc_geodesic_point: endpoint outside the unit disc");
    }
    const Complex b_pulled = (b - a) / (1.0 - std::conj(a) * b);
    const double r = std::abs(b_pulled);
    if (r == 0.0) return a;
    const Complex dir = b_pulled / r;
    const Complex x = std::tanh(t) * dir;
    return (x + a) / (1.0 + std::conj(a) * x);
}

// --- right half-plane --------------------------------------------------

double halfplane_distance(Complex p, Complex q) {
    require_finite(p, "halfplane_distance.p");
    require_finite(q, "halfplane_distance.q");
    if (p.real() <= 0.0 || q.real() <= 0.0) {
        throw DomainError("halfplane_distance: nonpositive real part");
    }
    const double num = std::abs(p - q);
    const double den = std::abs(p + std::conj(q));
    return arctanh_safe(num / den);
}

double halfplane_royden_at(Complex at, Complex dv) {
    if (at.real() <= 0.0) throw DomainError("halfplane_royden: boundary point");
    return std::abs(dv) / (2.0 * at.real());
}

double halfplane_royden(const TangentVector2& v) {
    return halfplane_royden_at(v.base.w, v.dw);
}

Complex halfplane_real_geodesic(double u0, double t) {
    if (u0 <= 0.0) throw DomainError("halfplane_real_geodesic: u0 must be positive");
    return Complex(u0 * std::exp(2.0 * t), 0.0);
}

// --- strip --------------------------------------------------------------

// Conformal map exp(pi/h (z - i h/2)) sends {0 < Im < h} to the right
// half-plane with the centerline landing on the positive real axis. The
// distance is evaluated through the stable sinh/cosh form of the
// half-plane cross-ratio so large deck translates do not overflow.
double strip_distance(double height, Complex p, Complex q) {
    if (height <= 0.0) throw DomainError("strip_distance: height must be positive");
    if (p.imag() <= 0.0 || p.imag() >= height || q.imag() <= 0.0 || q.imag() >= height) {
        throw DomainError("strip_distance: point outside the strip");
    }
    const Complex a = (kPi / height) * (p - Complex(0.0, 0.5 * height));
    const Complex b = (kPi / height) * (q - Complex(0.0, 0.5 * height));
    const Complex d = 0.5 * (a - b);
    const Complex e = 0.5 * (a - std::conj(b));
    // |u1-u2| / |u1+conj(u2)| = |sinh d| / |cosh e|; the exponential
    // prefactors cancel since Re d == Re e, and
    //   |cosh e|^2 - |sinh d|^2 = (cos(2 Im e) + cos(2 Im d)) / 2.
    const double c2_minus_s2 =
        0.5 * (std::cos(2.0 * e.imag()) + std::cos(2.0 * d.imag()));
    if (std::abs(d.real()) > 300.0) {
        // sinh/cosh would overflow; atanh(s/c) = log(c+s) - log(c^2-s^2)/2
        // with log(c+s) ~ |Re d|.
        return std::abs(d.real()) - 0.5 * std::log(std::max(c2_minus_s2, 1e-300));
    }
    const double s = std::abs(std::sinh(d));
    const double c = std::abs(std::cosh(e));
    const double ratio = s / c;
    if (ratio < 0.99) return std::atanh(ratio);
    return std::log(c + s) - 0.5 * std::log(std::max(c2_minus_s2, 1e-300));
}

double strip_royden(double height, Complex at, Complex dv) {
    if (at.imag() <= 0.0 || at.imag() >= height) {
        throw DomainError("strip_royden: point outside the strip");
    }
    const double psi = kPi * (at.imag() - 0.5 * height) / height;
    return (kPi / height) * std::abs(dv) / (2.0 * std::cos(psi));
}

// --- annulus ------------------------------------------------------------

namespace {

// Lift to the strip {0 < Im < log(outer/inner)}: zeta = i log(z/inner).
Complex annulus_lift(Complex z, double inner) {
    return Complex(-std::arg(z), std::log(std::abs(z) / inner));
}

void check_annulus(Complex p, double inner, double outer, const char* what) {
    const double r = std::abs(p);
    if (!(inner < r && r < outer)) {
        throw DomainError(std::string(what) + ": point outside the annulus");
    }
}

}  // namespace

double annulus_distance(Complex p, Complex q, double inner, double outer) {
    if (!(0.0 < inner && inner < outer)) {
        throw DomainError("annulus_distance: need 0 < inner < outer");
    }
    check_annulus(p, inner, outer, "annulus_distance.p");
    check_annulus(q, inner, outer, "annulus_distance.q");
    const double h = std::log(outer / inner);
    const Complex zp = annulus_lift(p, inner);
    const Complex zq = annulus_lift(q, inner);

    int k_max = 8;
    for (;;) {
        double best = std::numeric_limits<double>::infinity();
        int best_k = 0;
        for (int k = -k_max; k <= k_max; ++k) {
            const double d = strip_distance(h, zp, zq + Complex(2.0 * kPi * k, 0.0));
            if (d < best) {
                best = d;
                best_k = k;
            }
        }
        if (std::abs(best_k) < k_max) return best;
        if (k_max > (1 << 20)) {
            throw DomainError("annulus_distance: deck index search exhausted");
        }
        k_max *= 2;
    }
}

double annulus_royden(Complex at, Complex dv, double inner, double outer) {
    check_annulus(at, inner, outer, "annulus_royden");
    const double h = std::log(outer / inner);
    const double y = std::log(std::abs(at) / inner);
    const double psi = kPi * (y - 0.5 * h) / h;
    return (kPi / h) * (std::abs(dv) / std::abs(at)) / (2.0 * std::cos(psi));
}

AnnulusRadialGeodesic::AnnulusRadialGeodesic(double inner_, double outer_, double angle_)
    : inner(inner_), outer(outer_), angle(angle_) {
    if (!(0.0 < inner && inner < outer)) {
        throw DomainError("AnnulusRadialGeodesic: need 0 < inner < outer");
    }
}

Complex AnnulusRadialGeodesic::at(double s) const {
    const double h = std::log(outer / inner);
    // psi = gd(2s); arclength along the cross-cut is (1/2) asinh(tan psi).
    const double psi = std::atan(std::sinh(2.0 * s));
    const double y = h * (psi / kPi + 0.5);
    const double r = inner * std::exp(y);
    return std::polar(r, angle);
}

double AnnulusRadialGeodesic::param_of_radius(double r) const {
    if (!(inner < r && r < outer)) {
        throw DomainError("AnnulusRadialGeodesic: radius outside annulus");
    }
    const double h = std::log(outer / inner);
    const double y = std::log(r / inner);
    const double psi = kPi * (y / h - 0.5);
    return 0.5 * std::asinh(std::tan(psi));
}

// --- ModelDomain ---------------------------------------------------------

ModelDomain ModelDomain::unit_disc() {
    ModelDomain m;
    m.tag_ = Tag::UnitDisc;
    return m;
}

ModelDomain ModelDomain::disc(Complex center, double radius) {
    if (!(radius > 0.0)) throw DomainError("ModelDomain::disc: radius must be positive");
    ModelDomain m;
    m.tag_ = Tag::Disc;
    m.center_ = center;
    m.radius_ = radius;
    return m;
}

ModelDomain ModelDomain::right_half_plane() {
    ModelDomain m;
    m.tag_ = Tag::RightHalfPlane;
    return m;
}

ModelDomain ModelDomain::strip(double height) {
    if (!(height > 0.0)) throw DomainError("ModelDomain::strip: height must be positive");
    ModelDomain m;
    m.tag_ = Tag::Strip;
    m.height_ = height;
    return m;
}

ModelDomain ModelDomain::annulus(double inner, double outer) {
    if (!(0.0 < inner && inner < outer)) {
        throw DomainError("ModelDomain::annulus: need 0 < inner < outer");
    }
    ModelDomain m;
    m.tag_ = Tag::Annulus;
    m.inner_ = inner;
    m.outer_ = outer;
    return m;
}

ModelDomain ModelDomain::product(ModelDomain first, ModelDomain second) {
    if (!first.is_planar() || !second.is_planar()) {
        throw DomainError("ModelDomain::product: nested products unsupported");
    }
    ModelDomain m;
    m.tag_ = Tag::Product;
    m.first_ = std::make_shared<const ModelDomain>(std::move(first));
    m.second_ = std::make_shared<const ModelDomain>(std::move(second));
    return m;
}

bool ModelDomain::contains_value(Complex v) const {
    switch (tag_) {
        case Tag::UnitDisc: return std::abs(v) < 1.0;
        case Tag::Disc: return std::abs(v - center_) < radius_;
        case Tag::RightHalfPlane: return v.real() > 0.0;
        case Tag::Strip: return v.imag() > 0.0 && v.imag() < height_;
        case Tag::Annulus: {
            const double r = std::abs(v);
            return inner_ < r && r < outer_;
        }
        case Tag::Product: break;
    }
    throw DomainError("ModelDomain::contains_value on product domain");
}

double ModelDomain::margin_value(Complex v) const {
    switch (tag_) {
        case Tag::UnitDisc: return 1.0 - std::norm(v);
        case Tag::Disc: return 1.0 - std::norm((v - center_) / radius_);
        case Tag::RightHalfPlane: return v.real();
        case Tag::Strip: return std::min(v.imag(), height_ - v.imag()) / height_;
        case Tag::Annulus: {
            const double r = std::abs(v);
            if (r <= 0.0) return -1.0;
            return std::min(std::log(r / inner_), std::log(outer_ / r));
        }
        case Tag::Product: break;
    }
    throw DomainError("ModelDomain::margin_value on product domain");
}

double ModelDomain::distance_value(Complex a, Complex b) const {
    switch (tag_) {
        case Tag::UnitDisc: return disc_distance(a, b);
        case Tag::Disc: return disc_distance_in(center_, radius_, a, b);
        case Tag::RightHalfPlane: return halfplane_distance(a, b);
        case Tag::Strip: return strip_distance(height_, a, b);
        case Tag::Annulus: return annulus_distance(a, b, inner_, outer_);
        case Tag::Product: break;
    }
    throw DomainError("ModelDomain::distance_value on product domain");
}

double ModelDomain::royden_value(Complex at, Complex dv) const {
    switch (tag_) {
        case Tag::UnitDisc: return disc_royden(at, dv);
        case Tag::Disc: return disc_royden_in(center_, radius_, at, dv);
        case Tag::RightHalfPlane: return halfplane_royden_at(at, dv);
        case Tag::Strip: return strip_royden(height_, at, dv);
        case Tag::Annulus: return annulus_royden(at, dv, inner_, outer_);
        case Tag::Product: break;
    }
    throw DomainError("ModelDomain::royden_value on product domain");
}

Complex ModelDomain::center_point() const {
    switch (tag_) {
        case Tag::UnitDisc: return Complex(0.0);
        case Tag::Disc: return center_;
        case Tag::RightHalfPlane: return Complex(1.0);
        case Tag::Strip: return Complex(0.0, 0.5 * height_);
        case Tag::Annulus: return Complex(std::sqrt(inner_ * outer_), 0.0);
        case Tag::Product: break;
    }
    throw DomainError("ModelDomain::center_point on product domain");
}

bool ModelDomain::contains(const ComplexPoint2& p) const {
    if (tag_ == Tag::Product) {
        return first_->contains_value(p.z) && second_->contains_value(p.w);
    }
    return contains_value(p.z);
}

double ModelDomain::interior_margin(const ComplexPoint2& p) const {
    if (tag_ == Tag::Product) {
        return std::min(first_->margin_value(p.z), second_->margin_value(p.w));
    }
    return margin_value(p.z);
}

double ModelDomain::distance(const ComplexPoint2& p, const ComplexPoint2& q) const {
    if (tag_ == Tag::Product) {
        return std::max(first_->distance_value(p.z, q.z), second_->distance_value(p.w, q.w));
    }
    return distance_value(p.z, q.z);
}

double ModelDomain::royden(const TangentVector2& v) const {
    if (tag_ == Tag::Product) {
        double best = 0.0;
        if (v.dz != Complex(0.0)) best = first_->royden_value(v.base.z, v.dz);
        if (v.dw != Complex(0.0)) best = std::max(best, second_->royden_value(v.base.w, v.dw));
        return best;
    }
    return royden_value(v.base.z, v.dz);
}

MetricOracle ModelDomain::oracle() const {
    ModelDomain copy = *this;
    return MetricOracle(
        [copy](const ComplexPoint2& p, const ComplexPoint2& q) { return copy.distance(p, q); },
        [copy](const TangentVector2& v) { return copy.royden(v); },
        AccuracyClass::exact());
}

double product_distance(const MetricOracle& factor_a, const MetricOracle& factor_b,
                        const ComplexPoint2& p, const ComplexPoint2& q) {
    const ComplexPoint2 pz(p.z, Complex(0.0));
    const ComplexPoint2 qz(q.z, Complex(0.0));
    const ComplexPoint2 pw(p.w, Complex(0.0));
    const ComplexPoint2 qw(q.w, Complex(0.0));
    return std::max(factor_a.distance(pz, qz), factor_b.distance(pw, qw));
}

MetricOracle max_product_oracle(MetricOracle factor_a, MetricOracle factor_b) {
    const double res = std::max(factor_a.accuracy().slack(), factor_b.accuracy().slack());
    AccuracyClass acc = (res > 0.0) ? AccuracyClass::graph_approx(res) : AccuracyClass::exact();
    auto fa = std::make_shared<MetricOracle>(std::move(factor_a));
    auto fb = std::make_shared<MetricOracle>(std::move(factor_b));
    return MetricOracle(
        [fa, fb](const ComplexPoint2& p, const ComplexPoint2& q) {
            return product_distance(*fa, *fb, p, q);
        },
        [fa, fb](const TangentVector2& v) {
            double best = 0.0;
            if (v.dz != Complex(0.0)) {
                best = fa->royden(TangentVector2(ComplexPoint2(v.base.z, 0.0), v.dz, 0.0));
            }
            if (v.dw != Complex(0.0)) {
                best = std::max(
                    best, fb->royden(TangentVector2(ComplexPoint2(v.base.w, 0.0), v.dw, 0.0)));
            }
            return best;
        },
        acc);
}

}  // namespace wormlab
