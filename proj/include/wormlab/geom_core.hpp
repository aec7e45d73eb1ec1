#pragma once

// Core value types shared by every module: complex points in base x fiber
// coordinates, tangent vectors, intervals, 2x2 Hermitian forms, and the
// metric-oracle contract that distance providers implement.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace wormlab {

using Complex = std::complex<double>;

// Thrown when a point lies outside the domain an operation expects.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

void require_finite(double x, const char* what);
void require_finite(const Complex& c, const char* what);

// A point (z, w); z is the base coordinate, w the fiber coordinate.
// NaN/Inf are rejected at construction, never propagated.
struct ComplexPoint2 {
    Complex z;
    Complex w;

    ComplexPoint2() : z(0.0), w(0.0) {}
    ComplexPoint2(Complex z_, Complex w_);
};

// Tangent vector (dz, dw) anchored at a base point.
struct TangentVector2 {
    ComplexPoint2 base;
    Complex dz;
    Complex dw;

    TangentVector2(ComplexPoint2 base_, Complex dz_, Complex dw_);
    double euclidean_norm() const;
    bool is_zero() const { return dz == Complex(0.0) && dw == Complex(0.0); }
};

struct RealInterval {
    double lo;
    double hi;

    RealInterval(double lo_, double hi_);
    double length() const { return hi - lo; }
    bool contains(double t) const { return lo <= t && t <= hi; }
    bool interior_contains(double t) const { return lo < t && t < hi; }
};

// 2x2 Hermitian form. Invariants: h21 == conj(h12), h11 and h22 real.
class HermitianForm2 {
  public:
    HermitianForm2(Complex h11, Complex h12, Complex h21, Complex h22);
    static HermitianForm2 from_entries(double h11, Complex h12, double h22);
    static HermitianForm2 identity();

    Complex h11() const { return h11_; }
    Complex h12() const { return h12_; }
    Complex h21() const { return h21_; }
    Complex h22() const { return h22_; }

  private:
    Complex h11_, h12_, h21_, h22_;
};

// conj(a,b)^T H (a,b) in full complex arithmetic; imaginary part stays
// below 1e-12 for a valid Hermitian form.
Complex hermitian_apply_full(const HermitianForm2& h, Complex a, Complex b);
double hermitian_apply(const HermitianForm2& h, Complex a, Complex b);

// Smaller eigenvalue of the form, closed 2x2 formula.
double min_eigenvalue(const HermitianForm2& h);

// Declared accuracy of a distance/metric provider. Tolerances are carried
// here explicitly so experiments can propagate error budgets.
struct AccuracyClass {
    enum class Kind { Exact, GraphApprox, DiscSearchBound };
    enum class Bound { Upper, Lower };

    Kind kind = Kind::Exact;
    double resolution = 0.0;  // graph oracles only
    Bound direction = Bound::Upper;

    static AccuracyClass exact() { return {}; }
    static AccuracyClass graph_approx(double resolution);
    static AccuracyClass disc_search_bound(Bound direction);

    // Additive slack downstream checks may allow per distance evaluation.
    double slack() const { return kind == Kind::Exact ? 0.0 : resolution; }
};

// A distance + infinitesimal metric provider. Pure functions of their
// inputs; safe to evaluate concurrently.
class MetricOracle {
  public:
    using DistanceFn = std::function<double(const ComplexPoint2&, const ComplexPoint2&)>;
    using RoydenFn = std::function<double(const TangentVector2&)>;

    MetricOracle(DistanceFn distance, RoydenFn royden, AccuracyClass acc);

    double distance(const ComplexPoint2& p, const ComplexPoint2& q) const;
    double royden(const TangentVector2& v) const;
    const AccuracyClass& accuracy() const { return acc_; }

  private:
    DistanceFn distance_;
    RoydenFn royden_;
    AccuracyClass acc_;
};

}  // namespace wormlab
