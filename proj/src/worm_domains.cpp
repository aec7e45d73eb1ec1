#include "wormlab/worm_domains.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace wormlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGlN = 16;
constexpr double kGlX[kGlN] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGlW[kGlN] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double flat_kernel_h(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

template <typename F>
double gl16(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kGlN; ++i) {
        acc += kGlW[i] * f(mid + half * kGlX[i]);
    }
    return acc * half;
}

}  // namespace

// --- AngleFunction --------------------------------------------------------

AngleFunction AngleFunction::classical_log() {
    AngleFunction a;
    a.classical_ = true;
    a.punctures_ = {Complex(0.0)};
    a.weights_ = {1.0};
    return a;
}

AngleFunction AngleFunction::punctured_plane(std::vector<Complex> punctures,
                                             std::vector<double> weights) {
    if (punctures.empty() || punctures.size() != weights.size()) {
        throw DomainError("AngleFunction: punctures/weights size mismatch");
    }
    for (double l : weights) {
        if (!(l > 0.0)) throw DomainError("AngleFunction: weights must be positive");
    }
    AngleFunction a;
    a.classical_ = false;
    a.punctures_ = std::move(punctures);
    a.weights_ = std::move(weights);
    return a;
}

double AngleFunction::min_puncture_gap(Complex z) const {
    double gap = std::numeric_limits<double>::infinity();
    for (const Complex& a : punctures_) gap = std::min(gap, std::abs(z - a));
    return gap;
}

double AngleFunction::theta(Complex z) const {
    if (min_puncture_gap(z) <= 0.0) {
        throw DomainError("AngleFunction::theta: puncture input rejected");
    }
    double t = 0.0;
    for (size_t j = 0; j < punctures_.size(); ++j) {
        t += weights_[j] * 2.0 * std::log(std::abs(z - punctures_[j]));
    }
    return t;
}

Complex AngleFunction::f_prime(Complex z) const {
    if (min_puncture_gap(z) <= 0.0) {
        throw DomainError("AngleFunction::f_prime: puncture input rejected");
    }
    Complex acc(0.0);
    for (size_t j = 0; j < punctures_.size(); ++j) {
        acc += weights_[j] / (z - punctures_[j]);
    }
    return Complex(0.0, 2.0) * acc;
}

Complex AngleFunction::f_branch(Complex chart_center, Complex z) const {
    if (min_puncture_gap(z) <= 0.0 || min_puncture_gap(chart_center) <= 0.0) {
        throw DomainError("AngleFunction::f_branch: puncture input rejected");
    }
    Complex f(0.0);
    for (size_t j = 0; j < punctures_.size(); ++j) {
        const Complex rel = (z - punctures_[j]) / (chart_center - punctures_[j]);
        const double darg = std::arg(rel);
        if (std::abs(darg) > kPi - 1e-9) {
            throw BranchCutError("f_branch: point on the radial branch cut");
        }
        const double argument = std::arg(chart_center - punctures_[j]) + darg;
        const double modulus = std::log(std::abs(z - punctures_[j]));
        // 2i * (log|z-a| + i arg) = -2 arg + 2i log|z-a|
        f += weights_[j] * Complex(-2.0 * argument, 2.0 * modulus);
    }
    return f;
}

Complex AngleFunction::f_continue_along(const std::vector<Complex>& path) const {
    if (path.empty()) throw DomainError("f_continue_along: empty path");
    std::vector<double> args(punctures_.size());
    for (size_t j = 0; j < punctures_.size(); ++j) {
        args[j] = std::arg(path.front() - punctures_[j]);
    }
    for (size_t k = 1; k < path.size(); ++k) {
        for (size_t j = 0; j < punctures_.size(); ++j) {
            const Complex prev = path[k - 1] - punctures_[j];
            const Complex cur = path[k] - punctures_[j];
            if (std::abs(cur) <= 0.0) {
                throw DomainError("f_continue_along: path hits a puncture");
            }
            const double darg = std::arg(cur / prev);
            if (std::abs(darg) > 0.5 * kPi) {
                throw DomainError("f_continue_along: path step too coarse for continuation");
            }
            args[j] += darg;
        }
    }
    Complex f(0.0);
    for (size_t j = 0; j < punctures_.size(); ++j) {
        f += weights_[j] *
             Complex(-2.0 * args[j], 2.0 * std::log(std::abs(path.back() - punctures_[j])));
    }
    return f;
}

// --- EtaFunction -----------------------------------------------------------

// Eagerly built table of the double antiderivative h2 of exp(-1/x) and its
// derivative h1, with cubic Hermite interpolation between grid points
// (exact endpoint derivatives keep the interpolation error ~1e-11).
struct EtaFunction::Table {
    double step = 0.004;
    double smax = 0.0;
    std::vector<double> h2;
    std::vector<double> h1;

    explicit Table(double smax_) : smax(smax_) {
        const int n = static_cast<int>(std::ceil(smax / step)) + 1;
        h2.resize(n + 1, 0.0);
        h1.resize(n + 1, 0.0);
        for (int k = 0; k < n; ++k) {
            const double a = k * step;
            const double b = a + step;
            const double inc1 = gl16(flat_kernel_h, a, b);
            const double inc2 = gl16([b](double x) { return (b - x) * flat_kernel_h(x); }, a, b);
            h1[k + 1] = h1[k] + inc1;
            h2[k + 1] = h2[k] + h1[k] * step + inc2;
        }
        smax = n * step;
    }

    double eval(bool deriv, double s) const {
        if (s <= 0.0) return 0.0;
        if (s >= smax) return extend(deriv, s);
        const int k = static_cast<int>(s / step);
        const double u = (s - k * step) / step;
        const double u2 = u * u, u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1;
        const double h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2;
        const double h11 = u3 - u2;
        const double f0 = deriv ? h1[k] : h2[k];
        const double f1 = deriv ? h1[k + 1] : h2[k + 1];
        const double d0 = deriv ? flat_kernel_h(k * step) : h1[k];
        const double d1 = deriv ? flat_kernel_h((k + 1) * step) : h1[k + 1];
        return f0 * h00 + step * d0 * h10 + f1 * h01 + step * d1 * h11;
    }

    double extend(bool deriv, double s) const {
        const int cells = std::max(4, static_cast<int>(std::ceil((s - smax) / 0.25)));
        const double dx = (s - smax) / cells;
        double acc1 = 0.0, acc2 = 0.0;
        for (int c = 0; c < cells; ++c) {
            const double a = smax + c * dx;
            const double b = a + dx;
            acc1 += gl16(flat_kernel_h, a, b);
            acc2 += gl16([s](double x) { return (s - x) * flat_kernel_h(x); }, a, b);
        }
        if (deriv) return h1.back() + acc1;
        return h2.back() + h1.back() * (s - smax) + acc2;
    }
};

EtaFunction::EtaFunction(RealInterval i, RealInterval j, EtaProfile profile)
    : i_(i), j_(j), profile_(profile) {
    if (!(j.lo < i.lo && i.hi < j.hi)) {
        throw DomainError("EtaFunction: need I contained in the interior of J");
    }
    if (profile_ == EtaProfile::FlatConvex) {
        const double span = std::max(j.hi - i.hi, i.lo - j.lo);
        table_ = std::make_shared<const Table>(span + 12.0);
    }
}

double EtaFunction::kernel(double s) const {
    if (profile_ == EtaProfile::FlatConvex) return table_->eval(false, s);
    return s <= 0.0 ? 0.0 : s / (s + 1.0);
}

double EtaFunction::kernel_deriv(double s) const {
    if (profile_ == EtaProfile::FlatConvex) return table_->eval(true, s);
    return s <= 0.0 ? 0.0 : 1.0 / ((s + 1.0) * (s + 1.0));
}

double EtaFunction::kernel_second(double s) const {
    if (profile_ == EtaProfile::FlatConvex) return flat_kernel_h(s);
    return s <= 0.0 ? 0.0 : -2.0 / ((s + 1.0) * (s + 1.0) * (s + 1.0));
}

EtaFunction EtaFunction::calibrated(RealInterval i, RealInterval j, EtaProfile profile) {
    EtaFunction eta(i, j, profile);
    eta.alpha_plus_ = 1.0 / eta.kernel(j.hi - i.hi);
    eta.alpha_minus_ = 1.0 / eta.kernel(i.lo - j.lo);
    return eta;
}

double EtaFunction::value(double t) const {
    return alpha_plus_ * kernel(t - i_.hi) + alpha_minus_ * kernel(i_.lo - t);
}

double EtaFunction::derivative(double t) const {
    return alpha_plus_ * kernel_deriv(t - i_.hi) - alpha_minus_ * kernel_deriv(i_.lo - t);
}

double EtaFunction::second_derivative(double t) const {
    return alpha_plus_ * kernel_second(t - i_.hi) + alpha_minus_ * kernel_second(i_.lo - t);
}

// --- WormSpec --------------------------------------------------------------

WormSpec::WormSpec(AngleFunction angle, EtaFunction eta)
    : angle_(std::move(angle)), eta_(std::move(eta)) {}

WormSpec WormSpec::create(AngleFunction angle, EtaFunction eta) {
    WormSpec spec(std::move(angle), std::move(eta));
    spec.validate();
    return spec;
}

WormSpec WormSpec::classical(RealInterval i, RealInterval j) {
    return create(AngleFunction::classical_log(), EtaFunction::calibrated(i, j));
}

void WormSpec::validate() {
    const RealInterval& j = eta_.interval_j();
    // theta -> +inf at infinity: grow R until theta clears J on the circle.
    double r_out = 2.0;
    for (const Complex& a : angle_.punctures()) r_out = std::max(r_out, 2.0 * std::abs(a) + 2.0);
    for (int iter = 0;; ++iter) {
        double theta_min = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 64; ++k) {
            theta_min = std::min(theta_min,
                                 angle_.theta(std::polar(r_out, 2.0 * kPi * k / 64.0)));
        }
        if (theta_min > j.hi + 1.0) break;
        r_out *= 2.0;
        if (iter > 60) throw DomainError("WormSpec: could not bound theta^{-1}(J) outward");
    }
    outer_radius_ = r_out;

    // theta -> -inf at each puncture: shrink clearance radii similarly.
    puncture_clearance_.clear();
    for (const Complex& a : angle_.punctures()) {
        double r = 0.25;
        for (int iter = 0;; ++iter) {
            double theta_max = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < 64; ++k) {
                theta_max = std::max(
                    theta_max, angle_.theta(a + std::polar(r, 2.0 * kPi * k / 64.0)));
            }
            if (theta_max < j.lo - 1.0) break;
            r *= 0.5;
            if (iter > 200) throw DomainError("WormSpec: could not clear a puncture");
        }
        puncture_clearance_.push_back(r);
    }

    // No critical points of theta on the level sets bounding I and J:
    // sample bands around each level and check |F'| there.
    std::mt19937_64 rng(0x77726d5370656355ull);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double levels[4] = {eta_.interval_i().lo, eta_.interval_i().hi, j.lo, j.hi};
    const double band = 0.02 * j.length();
    int found[4] = {0, 0, 0, 0};
    for (int it = 0; it < 40000; ++it) {
        const Complex z(r_out * (2.0 * unif(rng) - 1.0), r_out * (2.0 * unif(rng) - 1.0));
        if (angle_.min_puncture_gap(z) < 1e-9) continue;
        const double t = angle_.theta(z);
        for (int l = 0; l < 4; ++l) {
            if (std::abs(t - levels[l]) < band) {
                found[l]++;
                if (std::abs(angle_.f_prime(z)) <= 1e-8) {
                    throw DomainError("WormSpec: critical point of theta on a bounding level set");
                }
            }
        }
    }
    for (int l = 0; l < 4; ++l) {
        if (found[l] == 0) {
            throw DomainError("WormSpec: failed to sample a bounding level set");
        }
    }
}

nlohmann::json WormSpec::to_json() const {
    nlohmann::json j;
    j["surface"] = angle_.is_classical() ? "classical" : "punctured_plane";
    if (!angle_.is_classical()) {
        nlohmann::json punctures = nlohmann::json::array();
        for (const Complex& a : angle_.punctures()) {
            punctures.push_back({a.real(), a.imag()});
        }
        j["punctures"] = punctures;
        j["weights"] = angle_.weights();
    }
    j["I"] = {eta_.interval_i().lo, eta_.interval_i().hi};
    j["J"] = {eta_.interval_j().lo, eta_.interval_j().hi};
    j["eta_profile"] =
        eta_.profile() == EtaProfile::FlatConvex ? "flat_convex" : "concave_control";
    return j;
}

WormSpec WormSpec::from_json(const nlohmann::json& j) {
    const std::string surface = j.at("surface").get<std::string>();
    AngleFunction angle = AngleFunction::classical_log();
    if (surface == "punctured_plane") {
        std::vector<Complex> punctures;
        for (const auto& p : j.at("punctures")) {
            punctures.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        }
        angle = AngleFunction::punctured_plane(punctures, j.at("weights").get<std::vector<double>>());
    } else if (surface != "classical") {
        throw DomainError("WormSpec::from_json: unknown surface tag " + surface);
    }
    const auto iv = j.at("I");
    const auto jv = j.at("J");
    EtaProfile profile = EtaProfile::FlatConvex;
    if (j.contains("eta_profile") && j.at("eta_profile").get<std::string>() == "concave_control") {
        profile = EtaProfile::ConcaveControl;
    }
    EtaFunction eta = EtaFunction::calibrated(
        RealInterval(iv.at(0).get<double>(), iv.at(1).get<double>()),
        RealInterval(jv.at(0).get<double>(), jv.at(1).get<double>()), profile);
    return create(std::move(angle), std::move(eta));
}

std::string WormSpec::spec_hash() const {
    const std::string dump = to_json().dump();
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", h);
    return buf;
}

// --- Worm operations --------------------------------------------------------

const char* stratum_name(BoundaryStratum s) {
    switch (s) {
        case BoundaryStratum::Spine: return "spine";
        case BoundaryStratum::Body: return "body";
        case BoundaryStratum::Exceptional: return "exceptional";
        case BoundaryStratum::Cap: return "cap";
    }
    return "?";
}

double defining_function(const WormSpec& spec, const ComplexPoint2& p) {
    const double theta = spec.angle().theta(p.z);
    const Complex phase = std::polar(1.0, -theta);
    return std::norm(p.w) - 2.0 * (p.w * phase).real() + spec.eta().value(theta);
}

bool worm_contains(const WormSpec& spec, const ComplexPoint2& p) {
    return defining_function(spec, p) < 0.0;
}

Complex defining_dw(const WormSpec& spec, const ComplexPoint2& p) {
    const double theta = spec.angle().theta(p.z);
    return std::conj(p.w) - std::polar(1.0, -theta);
}

Complex defining_dz(const WormSpec& spec, const ComplexPoint2& p) {
    const double theta = spec.angle().theta(p.z);
    const Complex theta_z = Complex(0.0, -0.5) * spec.angle().f_prime(p.z);
    const double im_part = (p.w * std::polar(1.0, -theta)).imag();
    return theta_z * (spec.eta().derivative(theta) - 2.0 * im_part);
}

double defining_gradient_norm(const WormSpec& spec, const ComplexPoint2& p) {
    const double a = std::abs(defining_dz(spec, p));
    const double b = std::abs(defining_dw(spec, p));
    return 2.0 * std::sqrt(a * a + b * b);
}

BoundaryStratum classify_boundary(const WormSpec& spec, const ComplexPoint2& p, double tol) {
    const double r = defining_function(spec, p);
    if (std::abs(r) > tol * std::max(1.0, std::norm(p.w))) {
        throw DomainError("classify_boundary: point is not on the boundary");
    }
    const double theta = spec.angle().theta(p.z);
    const RealInterval& i = spec.interval_i();
    const RealInterval& j = spec.interval_j();
    if (i.contains(theta) && std::abs(p.w) <= tol) return BoundaryStratum::Spine;
    if (std::abs(spec.angle().f_prime(p.z)) * 0.5 <= tol && std::abs(p.w) > tol) {
        return BoundaryStratum::Exceptional;
    }
    if (j.contains(theta) && !i.contains(theta)) return BoundaryStratum::Cap;
    return BoundaryStratum::Body;
}

HermitianForm2 levi_form(const WormSpec& spec, const ComplexPoint2& p, Complex chart_center) {
    const AngleFunction& angle = spec.angle();
    const Complex f = angle.f_branch(chart_center, p.z);
    const Complex fp = angle.f_prime(p.z);
    const double pref = std::exp(-f.real());
    const Complex m = 0.5 * p.w * fp;
    double h11 = pref * std::norm(m);
    const Complex h12 = -pref * std::conj(m);
    const double h22 = pref;

    const double theta = angle.theta(p.z);
    const double eta_here = spec.eta().value(theta);
    if (std::abs(eta_here) > 1e-280) {
        // Cap contribution: d_z d_zbar of e^{-v} eta(theta) by second
        // central differences, Richardson extrapolated.
        auto g = [&](Complex zz) {
            const double v = angle.f_branch(chart_center, zz).real();
            return std::exp(-v) * spec.eta().value(angle.theta(zz));
        };
        const double g0 = g(p.z);
        auto laplacian = [&](double h) {
            return (g(p.z + Complex(h, 0)) + g(p.z - Complex(h, 0)) + g(p.z + Complex(0, h)) +
                    g(p.z - Complex(0, h)) - 4.0 * g0) /
                   (h * h);
        };
        const double h = 1e-4 * std::max(1.0, std::abs(p.z));
        const double lap = (4.0 * laplacian(0.5 * h) - laplacian(h)) / 3.0;
        h11 += 0.25 * lap;
    }
    return HermitianForm2::from_entries(h11, h12, h22);
}

double tangency_check(const WormSpec& spec, const ComplexPoint2& p, Complex chart_center) {
    const Complex f = spec.angle().f_branch(chart_center, p.z);
    const Complex fp = spec.angle().f_prime(p.z);
    return std::abs(p.w * fp * std::exp(-f));
}

double tangential_curvature(const WormSpec& spec, const ComplexPoint2& p, Complex chart_center) {
    const HermitianForm2 levi = levi_form(spec, p, chart_center);
    const double pref = std::exp(-spec.angle().f_branch(chart_center, p.z).real());
    const Complex rz = defining_dz(spec, p);
    const Complex rw = defining_dw(spec, p);
    const Complex tz = rw;
    const Complex tw = -rz;
    const double n = std::sqrt(std::norm(tz) + std::norm(tw));
    if (n < 1e-14) throw DomainError("tangential_curvature: degenerate boundary gradient");
    return hermitian_apply(levi, tz / n, tw / n) / pref;
}

std::vector<BoundarySample> sample_boundary(const WormSpec& spec, int count,
                                            unsigned long long seed) {
    std::vector<BoundarySample> out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const RealInterval& j = spec.interval_j();

    const int n_psi = 32;
    const int n_z = std::max(8, count / n_psi + 1);

    std::vector<Complex> zs;
    zs.reserve(n_z);
    if (spec.angle().is_classical()) {
        const int n_t = std::max(4, static_cast<int>(std::sqrt(static_cast<double>(n_z))));
        const int n_a = (n_z + n_t - 1) / n_t;
        for (int it = 0; it < n_t && static_cast<int>(zs.size()) < n_z; ++it) {
            // keep a hair inside J so eta stays <= 1
            const double t = j.lo + (j.length()) * (it + 0.5) / n_t;
            for (int ia = 0; ia < n_a && static_cast<int>(zs.size()) < n_z; ++ia) {
                const double ang = 2.0 * kPi * (ia + 0.3 * unif(rng)) / n_a;
                zs.push_back(std::polar(std::exp(0.5 * t), ang));
            }
        }
    } else {
        const double r = spec.outer_radius();
        while (static_cast<int>(zs.size()) < n_z) {
            const Complex z(r * (2.0 * unif(rng) - 1.0), r * (2.0 * unif(rng) - 1.0));
            if (spec.angle().min_puncture_gap(z) < 1e-6) continue;
            const double t = spec.angle().theta(z);
            if (j.lo + 1e-9 < t && t < j.hi - 1e-9) zs.push_back(z);
        }
    }

    for (const Complex& z : zs) {
        const double theta = spec.angle().theta(z);
        const double rad2 = 1.0 - spec.eta().value(theta);
        if (rad2 <= 0.0) continue;
        const double rad = std::sqrt(rad2);
        for (int ip = 0; ip < n_psi; ++ip) {
            const double psi = 2.0 * kPi * ip / n_psi;
            Complex w = std::polar(1.0, theta) * (1.0 + rad * std::polar(1.0, psi));
            // psi = pi with eta = 0 lands exactly on the spine
            if (std::abs(w) < 1e-12) w = Complex(0.0);
            const ComplexPoint2 p(z, w);
            out.push_back({p, classify_boundary(spec, p, 1e-7)});
            if (static_cast<int>(out.size()) >= count) return out;
        }
    }
    return out;
}

// --- PreWormSpec -------------------------------------------------------------

PreWormSpec::PreWormSpec(AngleFunction angle, RealInterval interval, Region region)
    : angle_(std::move(angle)), interval_(interval), region_(region) {}

PreWormSpec PreWormSpec::inner_of(const WormSpec& w) {
    return PreWormSpec(w.angle(), w.interval_i(), Region::Inner);
}

PreWormSpec PreWormSpec::outer_of(const WormSpec& w) {
    return PreWormSpec(w.angle(), w.interval_j(), Region::Outer);
}

PreWormSpec PreWormSpec::make(AngleFunction angle, RealInterval base_interval, Region region) {
    return PreWormSpec(std::move(angle), base_interval, region);
}

std::optional<std::pair<double, double>> PreWormSpec::classical_annulus() const {
    if (!angle_.is_classical()) return std::nullopt;
    return std::make_pair(std::exp(0.5 * interval_.lo), std::exp(0.5 * interval_.hi));
}

bool base_region_membership(const PreWormSpec& spec, Complex z) {
    if (spec.angle().min_puncture_gap(z) <= 0.0) {
        throw DomainError("base_region_membership: puncture input rejected");
    }
    return spec.base_interval().interior_contains(spec.angle().theta(z));
}

bool preworm_contains(const PreWormSpec& spec, const ComplexPoint2& p) {
    if (!base_region_membership(spec, p.z)) return false;
    const double theta = spec.angle().theta(p.z);
    return (p.w * std::polar(1.0, -theta)).real() > 0.0;
}

ComplexPoint2 trivialize(const PreWormSpec& spec, Complex chart_center, const ComplexPoint2& p) {
    const Complex f = spec.angle().f_branch(chart_center, p.z);
    return ComplexPoint2(p.z, std::exp(-f) * p.w);
}

ComplexPoint2 untrivialize(const PreWormSpec& spec, Complex chart_center, const ComplexPoint2& p) {
    const Complex f = spec.angle().f_branch(chart_center, p.z);
    return ComplexPoint2(p.z, std::exp(f) * p.w);
}

ComplexPoint2 barrett_scale(double lambda, const ComplexPoint2& p) {
    if (!(lambda > 0.0)) throw DomainError("barrett_scale: lambda must be positive");
    return ComplexPoint2(p.z, lambda * p.w);
}

}  // namespace wormlab
