#pragma once

// Worm and pre-Worm constructions: harmonic angle functions theta with a
// holomorphic completion F = v + i*theta, the flat-convex bump eta, Worm
// membership and defining function, boundary stratification, Levi forms,
// pre-Worms with local trivializations, and the fiber scaling
// B_lambda(z, w) = (z, lambda*w).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wormlab/geom_core.hpp"

#include "json.hpp"

namespace wormlab {

// Crossing the branch cut of a chart is an explicit error, never silent.
struct BranchCutError : std::runtime_error {
    explicit BranchCutError(const std::string& msg) : std::runtime_error(msg) {}
};

// Harmonic angle function on a punctured plane:
//   theta(z) = sum_j lambda_j log|z - a_j|^2,   F(z) = 2i sum_j lambda_j log(z - a_j).
// The classical case is Y = C^*, theta = log|z|^2 (one puncture at 0).
class AngleFunction {
  public:
    static AngleFunction classical_log();
    static AngleFunction punctured_plane(std::vector<Complex> punctures,
                                         std::vector<double> weights);

    bool is_classical() const { return classical_; }
    const std::vector<Complex>& punctures() const { return punctures_; }
    const std::vector<double>& weights() const { return weights_; }

    double theta(Complex z) const;
    Complex f_prime(Complex z) const;       // F'(z) = 2i sum lambda_j / (z - a_j)
    double theta_gradient_norm(Complex z) const { return std::abs(f_prime(z)); }

    // Branch of F on the star-shaped chart around chart_center whose cuts
    // run radially away from the center behind each puncture.
    Complex f_branch(Complex chart_center, Complex z) const;

    // Continue F along a sampled path (steps must keep each log increment
    // under pi/2); used to measure holonomy around loops.
    Complex f_continue_along(const std::vector<Complex>& path) const;

    double min_puncture_gap(Complex z) const;

  private:
    AngleFunction() = default;
    bool classical_ = true;
    std::vector<Complex> punctures_;
    std::vector<double> weights_;
};

enum class EtaProfile {
    FlatConvex,      // double antiderivative of exp(-1/x), flat on I, eta'' > 0 off I
    ConcaveControl,  // deliberately corrupted profile (eta'' < 0); negative-control tests
};

// The auxiliary bump eta: zero on I, strictly convex off I (flat-convex
// profile), calibrated so that eta == 1 on the endpoints of J.
class EtaFunction {
  public:
    static EtaFunction calibrated(RealInterval i, RealInterval j,
                                  EtaProfile profile = EtaProfile::FlatConvex);

    double value(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    const RealInterval& interval_i() const { return i_; }
    const RealInterval& interval_j() const { return j_; }
    EtaProfile profile() const { return profile_; }

  private:
    EtaFunction(RealInterval i, RealInterval j, EtaProfile profile);

    double kernel(double s) const;        // h2
    double kernel_deriv(double s) const;  // h1
    double kernel_second(double s) const; // h

    RealInterval i_;
    RealInterval j_;
    EtaProfile profile_;
    double alpha_plus_ = 1.0;
    double alpha_minus_ = 1.0;
    struct Table;
    std::shared_ptr<const Table> table_;  // built eagerly; read-only afterwards
};

// Full recipe for one Worm: angle function plus calibrated eta. Construction
// validates the critical-point and compactness assumptions by sampling.
class WormSpec {
  public:
    static WormSpec create(AngleFunction angle, EtaFunction eta);
    // Classical Worm over C^* with the given intervals.
    static WormSpec classical(RealInterval i, RealInterval j);

    const AngleFunction& angle() const { return angle_; }
    const EtaFunction& eta() const { return eta_; }
    const RealInterval& interval_i() const { return eta_.interval_i(); }
    const RealInterval& interval_j() const { return eta_.interval_j(); }

    // Bounding data for theta^{-1}(J): outer radius and per-puncture
    // clearance radii (the J-collar stays inside the annular region between
    // them).
    double outer_radius() const { return outer_radius_; }
    const std::vector<double>& puncture_clearance() const { return puncture_clearance_; }

    nlohmann::json to_json() const;
    static WormSpec from_json(const nlohmann::json& j);
    std::string spec_hash() const;  // FNV-1a of the canonical serialization

  private:
    WormSpec(AngleFunction angle, EtaFunction eta);
    void validate();

    AngleFunction angle_;
    EtaFunction eta_;
    double outer_radius_ = 0.0;
    std::vector<double> puncture_clearance_;
};

enum class BoundaryStratum { Spine, Body, Exceptional, Cap };

const char* stratum_name(BoundaryStratum s);

// r(z,w) = |w|^2 - 2 Re(w e^{-i theta(z)}) + eta(theta(z));
// negative inside W, zero on the boundary, positive outside.
double defining_function(const WormSpec& spec, const ComplexPoint2& p);

// Strict inequality |w - e^{i theta}|^2 < 1 - eta(theta).
bool worm_contains(const WormSpec& spec, const ComplexPoint2& p);

// Requires |r(p)| <= tol. Tie order: Spine > Exceptional > Cap > Body.
BoundaryStratum classify_boundary(const WormSpec& spec, const ComplexPoint2& p,
                                  double tol = 1e-7);

// Wirtinger derivatives of r and the full real gradient norm.
Complex defining_dw(const WormSpec& spec, const ComplexPoint2& p);
Complex defining_dz(const WormSpec& spec, const ComplexPoint2& p);
double defining_gradient_norm(const WormSpec& spec, const ComplexPoint2& p);

// Levi form of the local defining function e^{-v} r at p, in the chart
// around chart_center. On the eta == 0 region the matrix is closed-form
// with kernel along (2, w F'(z)); the cap contribution is added through
// Richardson-extrapolated second differences of e^{-v} eta(theta).
HermitianForm2 levi_form(const WormSpec& spec, const ComplexPoint2& p,
                         Complex chart_center);

// |(2 d_z + w F' d_w) applied to the local defining function| = |w F' e^{-F}|;
// positive exactly on the body.
double tangency_check(const WormSpec& spec, const ComplexPoint2& p,
                      Complex chart_center);

// Levi form restricted to the complex tangent direction at a boundary
// point, normalized to a unit tangent and with the e^{-v} prefactor divided
// out. Returns the tangential curvature value.
double tangential_curvature(const WormSpec& spec, const ComplexPoint2& p,
                            Complex chart_center);

// A deterministic sweep of boundary points (z on theta-level circles
// generalized by sampling, w on the slice circle; the spine shows up at the
// slice antipode).
struct BoundarySample {
    ComplexPoint2 point;
    BoundaryStratum stratum;
};
std::vector<BoundarySample> sample_boundary(const WormSpec& spec, int count,
                                            unsigned long long seed);

// --- pre-Worms -----------------------------------------------------------

// Z(X, theta) = { Re(w e^{-i theta(z)}) > 0 } over X = theta^{-1}(I deg)
// (inner) or theta^{-1}(J deg) (outer).
class PreWormSpec {
  public:
    enum class Region { Inner, Outer };

    static PreWormSpec inner_of(const WormSpec& w);
    static PreWormSpec outer_of(const WormSpec& w);
    static PreWormSpec make(AngleFunction angle, RealInterval base_interval, Region region);

    const AngleFunction& angle() const { return angle_; }
    const RealInterval& base_interval() const { return interval_; }
    Region region() const { return region_; }

    // Classical base is an annulus e^{lo/2} < |z| < e^{hi/2}.
    std::optional<std::pair<double, double>> classical_annulus() const;

  private:
    PreWormSpec(AngleFunction angle, RealInterval interval, Region region);
    AngleFunction angle_;
    RealInterval interval_;
    Region region_;
};

bool base_region_membership(const PreWormSpec& spec, Complex z);
bool preworm_contains(const PreWormSpec& spec, const ComplexPoint2& p);

// Local trivialization (z, w) -> (z, e^{-F(z)} w) and its inverse.
ComplexPoint2 trivialize(const PreWormSpec& spec, Complex chart_center,
                         const ComplexPoint2& p);
ComplexPoint2 untrivialize(const PreWormSpec& spec, Complex chart_center,
                           const ComplexPoint2& p);

// Fiber scaling (z, w) -> (z, lambda w).
ComplexPoint2 barrett_scale(double lambda, const ComplexPoint2& p);

}  // namespace wormlab
