#include "wormlab/geom_core.hpp"

#include <algorithm>

namespace wormlab {

void require_finite(double x, const char* what) {
    if (!is_finite(x)) {
        throw DomainError(std::string(what) + ": non-finite value");
    }
}

void require_finite(const Complex& c, const char* what) {
    if (!is_finite(c)) {
        throw DomainError(std::string(what) + ": non-finite value");
    }
}

ComplexPoint2::ComplexPoint2(Complex z_, Complex w_) : z(z_), w(w_) {
    require_finite(z, "ComplexPoint2.z");
    require_finite(w, "ComplexPoint2.w");
}

TangentVector2::TangentVector2(ComplexPoint2 base_, Complex dz_, Complex dw_)
    : base(base_), dz(dz_), dw(dw_) {
    require_finite(dz, "TangentVector2.dz");
    require_finite(dw, "TangentVector2.dw");
}

double TangentVector2::euclidean_norm() const {
    return std::sqrt(std::norm(dz) + std::norm(dw));
}

RealInterval::RealInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    require_finite(lo, "RealInterval.lo");
    require_finite(hi, "RealInterval.hi");
    if (!(lo < hi)) {
        throw DomainError("RealInterval: lo must be < hi");
    }
}

HermitianForm2::HermitianForm2(Complex h11, Complex h12, Complex h21, Complex h22)
    : h11_(h11), h12_(h12), h21_(h21), h22_(h22) {
    require_finite(h11, "HermitianForm2.h11");
    require_finite(h12, "HermitianForm2.h12");
    require_finite(h21, "HermitianForm2.h21");
    require_finite(h22, "HermitianForm2.h22");
    const double scale = std::max({1.0, std::abs(h11), std::abs(h12), std::abs(h22)});
    if (std::abs(h21 - std::conj(h12)) > 1e-9 * scale) {
        throw DomainError("HermitianForm2: h21 != conj(h12)");
    }
    if (std::abs(h11.imag()) > 1e-9 * scale || std::abs(h22.imag()) > 1e-9 * scale) {
        throw DomainError("HermitianForm2: diagonal entries must be real");
    }
}

HermitianForm2 HermitianForm2::from_entries(double h11, Complex h12, double h22) {
    return HermitianForm2(Complex(h11, 0.0), h12, std::conj(h12), Complex(h22, 0.0));
}

HermitianForm2 HermitianForm2::identity() {
    return from_entries(1.0, Complex(0.0), 1.0);
}

Complex hermitian_apply_full(const HermitianForm2& h, Complex a, Complex b) {
    return std::conj(a) * (h.h11() * a + h.h12() * b) +
           std::conj(b) * (h.h21() * a + h.h22() * b);
}

double hermitian_apply(const HermitianForm2& h, Complex a, Complex b) {
    return hermitian_apply_full(h, a, b).real();
}

double min_eigenvalue(const HermitianForm2& h) {
    const double a = h.h11().real();
    const double d = h.h22().real();
    const double half_sum = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(h.h12()));
    return half_sum - rad;
}

AccuracyClass AccuracyClass::graph_approx(double resolution) {
    AccuracyClass acc;
    acc.kind = Kind::GraphApprox;
    acc.resolution = resolution;
    return acc;
}

AccuracyClass AccuracyClass::disc_search_bound(Bound direction) {
    AccuracyClass acc;
    acc.kind = Kind::DiscSearchBound;
    acc.direction = direction;
    return acc;
}

MetricOracle::MetricOracle(DistanceFn distance, RoydenFn royden, AccuracyClass acc)
    : distance_(std::move(distance)), royden_(std::move(royden)), acc_(acc) {}

double MetricOracle::distance(const ComplexPoint2& p, const ComplexPoint2& q) const {
    return distance_(p, q);
}

double MetricOracle::royden(const TangentVector2& v) const {
    if (v.is_zero()) {
        throw DomainError("MetricOracle::royden: zero tangent vector");
    }
    return royden_(v);
}

}  // namespace wormlab
