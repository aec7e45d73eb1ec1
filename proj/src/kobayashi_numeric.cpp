#include "wormlab/kobayashi_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <random>

namespace wormlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest Euclidean step (up to `cap`) around z that keeps `ok` true on 8
// sampled directions; doubling + one halving refinement.
template <typename Pred>
double euclid_clearance(Pred&& ok, Complex z, double cap) {
    auto ring_ok = [&](double r) {
        for (int k = 0; k < 8; ++k) {
            if (!ok(z + std::polar(r, 0.25 * kPi * k))) return false;
        }
        return true;
    };
    double r = std::min(0.01, 0.5 * cap);
    if (!ring_ok(r)) {
        for (int i = 0; i < 40 && !ring_ok(r); ++i) r *= 0.5;
        if (!ring_ok(r)) return 0.0;
    }
    while (r * 2.0 < cap && ring_ok(r * 2.0)) r *= 2.0;
    if (r * 1.5 < cap && ring_ok(r * 1.5)) r *= 1.5;
    return r;
}

}  // namespace

void DiscSearchConfig::validate() const {
    if (degree < 1) throw DomainError("DiscSearchConfig: degree must be >= 1");
    if (boundary_samples < 8) throw DomainError("DiscSearchConfig: too few boundary samples");
    if (radii.empty()) throw DomainError("DiscSearchConfig: radii list empty");
    double prev = 0.0;
    for (double r : radii) {
        if (!(prev < r && r < 1.0)) {
            throw DomainError("DiscSearchConfig: radii must be increasing in (0,1)");
        }
        prev = r;
    }
    if (restarts < 1) throw DomainError("DiscSearchConfig: restarts must be >= 1");
    if (max_iters < 0) throw DomainError("DiscSearchConfig: negative max_iters");
    if (!(margin > 0.0)) throw DomainError("DiscSearchConfig: margin must be positive");
}

// --- DomainHandle ------------------------------------------------------------

DomainHandle DomainHandle::model(ModelDomain m) {
    DomainHandle h;
    h.tag_ = Tag::Model;
    h.model_ = std::move(m);
    return h;
}

DomainHandle DomainHandle::worm(WormSpec spec, double scale, BaseHint hint) {
    if (!(scale > 0.0)) throw DomainError("DomainHandle::worm: scale must be positive");
    DomainHandle h;
    h.tag_ = Tag::Worm;
    h.scale_ = scale;
    h.hint_ = hint;
    h.base_bound_radius_ = spec.outer_radius();
    h.chart_center_ = spec.angle().is_classical()
                          ? Complex(std::exp(0.25 * (spec.interval_i().lo + spec.interval_i().hi)))
                          : Complex(spec.outer_radius() * 0.5);
    h.worm_ = std::move(spec);
    return h;
}

DomainHandle DomainHandle::preworm(PreWormSpec spec, Complex chart_center, BaseHint hint) {
    DomainHandle h;
    h.tag_ = Tag::PreWorm;
    h.hint_ = hint;
    h.chart_center_ = chart_center;
    // bounding radius for genus-zero bases (theta -> +inf at infinity)
    if (!spec.angle().is_classical()) {
        double r = 2.0;
        for (const Complex& a : spec.angle().punctures()) r = std::max(r, 2.0 * std::abs(a) + 2.0);
        for (int iter = 0;; ++iter) {
            double tmin = kInf;
            for (int k = 0; k < 64; ++k) {
                tmin = std::min(tmin, spec.angle().theta(std::polar(r, 2.0 * kPi * k / 64.0)));
            }
            if (tmin > spec.base_interval().hi + 1.0) break;
            r *= 2.0;
            if (iter > 60) throw DomainError("DomainHandle::preworm: unbounded base region");
        }
        h.base_bound_radius_ = r;
    }
    h.preworm_ = std::move(spec);
    return h;
}

const ModelDomain& DomainHandle::model_domain() const {
    if (!model_) throw DomainError("DomainHandle: not a model domain");
    return *model_;
}

const WormSpec& DomainHandle::worm_spec() const {
    if (!worm_) throw DomainError("DomainHandle: not a worm");
    return *worm_;
}

const PreWormSpec& DomainHandle::preworm_spec() const {
    if (!preworm_) throw DomainError("DomainHandle: not a pre-worm");
    return *preworm_;
}

bool DomainHandle::contains(const ComplexPoint2& p) const {
    switch (tag_) {
        case Tag::Model: return model_->contains(p);
        case Tag::Worm:
            if (worm_->angle().min_puncture_gap(p.z) < 1e-12) return false;
            return worm_contains(*worm_, ComplexPoint2(p.z, p.w / scale_));
        case Tag::PreWorm:
            if (preworm_->angle().min_puncture_gap(p.z) < 1e-12) return false;
            return preworm_contains(*preworm_, p);
    }
    return false;
}

double DomainHandle::interior_margin(const ComplexPoint2& p) const {
    switch (tag_) {
        case Tag::Model:
            return model_->interior_margin(p);
        case Tag::Worm: {
            if (worm_->angle().min_puncture_gap(p.z) < 1e-12) return -1e9;
            return -defining_function(*worm_, ComplexPoint2(p.z, p.w / scale_));
        }
        case Tag::PreWorm: {
            if (preworm_->angle().min_puncture_gap(p.z) < 1e-12) return -1e9;
            const double theta = preworm_->angle().theta(p.z);
            const RealInterval& iv = preworm_->base_interval();
            const double level = std::min(theta - iv.lo, iv.hi - theta) / iv.length();
            const double fiber =
                (p.w * std::polar(1.0, -theta)).real() / std::max(1.0, std::abs(p.w));
            return std::min(level, fiber);
        }
    }
    return -1e9;
}

std::optional<std::pair<double, double>> DomainHandle::base_annulus() const {
    switch (tag_) {
        case Tag::Model: return std::nullopt;
        case Tag::Worm: {
            if (!worm_->angle().is_classical()) return std::nullopt;
            const RealInterval& j = worm_->interval_j();
            return std::make_pair(std::exp(0.5 * j.lo), std::exp(0.5 * j.hi));
        }
        case Tag::PreWorm: return preworm_->classical_annulus();
    }
    return std::nullopt;
}

namespace {

// Annulus used for hinted base estimates.
std::optional<std::pair<double, double>> hint_annulus(const DomainHandle& h) {
    if (h.base_hint() == DomainHandle::BaseHint::Auto) return std::nullopt;
    if (h.tag() == DomainHandle::Tag::Worm) {
        if (!h.worm_spec().angle().is_classical()) return std::nullopt;
        const RealInterval& iv = (h.base_hint() == DomainHandle::BaseHint::InnerAnnulus)
                                     ? h.worm_spec().interval_i()
                                     : h.worm_spec().interval_j();
        return std::make_pair(std::exp(0.5 * iv.lo), std::exp(0.5 * iv.hi));
    }
    if (h.tag() == DomainHandle::Tag::PreWorm) return h.preworm_spec().classical_annulus();
    return std::nullopt;
}

struct WormLocal {
    double theta;
    double eta;
    Complex slice_center;
    double slice_radius;
};

WormLocal worm_local(const WormSpec& spec, double scale, Complex z) {
    WormLocal loc;
    loc.theta = spec.angle().theta(z);
    loc.eta = spec.eta().value(loc.theta);
    loc.slice_center = scale * std::polar(1.0, loc.theta);
    loc.slice_radius = scale * std::sqrt(std::max(1.0 - loc.eta, 0.0));
    return loc;
}

}  // namespace

DomainHandle::RoydenBounds DomainHandle::cheap_royden_bounds(const TangentVector2& v) const {
    RoydenBounds b;
    switch (tag_) {
        case Tag::Model: {
            const double e = model_->royden(v);
            b.lower = e;
            b.upper = e;
            return b;
        }
        case Tag::Worm: {
            const WormSpec& spec = *worm_;
            const Complex z = v.base.z;
            const WormLocal loc = worm_local(spec, scale_, z);
            if (loc.slice_radius <= 0.0) throw DomainError("royden bounds: empty slice");

            // lower: enclosing product (base projection) x D(0, 2*scale)
            double base_lower = 0.0;
            if (v.dz != Complex(0.0)) {
                const auto ann = base_annulus();
                base_lower = ann ? annulus_royden(z, v.dz, ann->first, ann->second)
                                 : disc_royden_in(Complex(0.0), base_bound_radius_, z, v.dz);
            }
            double fiber_lower = 0.0;
            if (v.dw != Complex(0.0)) {
                fiber_lower = disc_royden_in(Complex(0.0), 2.0 * scale_, v.base.w, v.dw);
            }
            b.lower = std::max(base_lower, fiber_lower);
            b.lower_flagged = (b.lower == 0.0);

            // upper: fiber slice disc; inscribed product for mixed directions
            const double k_slice =
                (v.dw != Complex(0.0))
                    ? disc_royden_in(loc.slice_center, loc.slice_radius, v.base.w, v.dw)
                    : 0.0;
            if (v.dz == Complex(0.0)) {
                b.upper = k_slice;
                return b;
            }
            const RealInterval& j = spec.interval_j();
            auto in_base = [&](Complex zz) {
                if (spec.angle().min_puncture_gap(zz) < 1e-9) return false;
                return j.interior_contains(spec.angle().theta(zz));
            };
            const double clear =
                euclid_clearance(in_base, z, 0.9 * spec.angle().min_puncture_gap(z));
            double best = kInf;
            for (int half = 0; half < 6; ++half) {
                const double rho = 0.8 * clear / (1 << half);
                if (rho <= 0.0) break;
                double r_common = kInf;
                bool ok = true;
                for (int k = 0; k < 8 && ok; ++k) {
                    const Complex zz = z + std::polar(rho, 0.25 * kPi * k);
                    if (!in_base(zz)) {
                        ok = false;
                        break;
                    }
                    const WormLocal lc = worm_local(spec, scale_, zz);
                    r_common = std::min(
                        r_common, lc.slice_radius - std::abs(lc.slice_center - loc.slice_center));
                }
                if (!ok || r_common <= 0.05 * loc.slice_radius) continue;
                const double r_safe = 0.9 * r_common;
                if (std::abs(v.base.w - loc.slice_center) >= r_safe) continue;
                const double fiber_part =
                    (v.dw != Complex(0.0))
                        ? disc_royden_in(loc.slice_center, r_safe, v.base.w, v.dw)
                        : 0.0;
                best = std::min(best, std::max(std::abs(v.dz) / rho, fiber_part));
            }
            b.upper = best;
            b.upper_trivial = !(best < kInf);
            // a valid two-sided pair even when inscribed products fail
            if (b.upper < b.lower) b.upper = b.lower;
            return b;
        }
        case Tag::PreWorm: {
            const PreWormSpec& spec = *preworm_;
            const Complex z = v.base.z;
            const Complex f = spec.angle().f_branch(z, z);
            const Complex fp = spec.angle().f_prime(z);
            const Complex u = std::exp(-f) * v.base.w;
            const Complex du = std::exp(-f) * (v.dw - fp * v.base.w * v.dz);
            if (u.real() <= 0.0) throw DomainError("royden bounds: point outside pre-worm fiber");
            const double fiber_k = (du == Complex(0.0)) ? 0.0 : std::abs(du) / (2.0 * u.real());

            double base_lower = 0.0;
            if (v.dz != Complex(0.0)) {
                const auto ann = base_annulus();
                base_lower = ann ? annulus_royden(z, v.dz, ann->first, ann->second)
                                 : disc_royden_in(Complex(0.0), base_bound_radius_, z, v.dz);
            }
            // the fiber value is the trivialized chart estimate (exact in the
            // large-chart limit), reported as the lower bound per contract
            b.lower = std::max(base_lower, fiber_k);
            b.lower_flagged = (b.lower == 0.0);

            double rho = 0.0;
            if (v.dz != Complex(0.0)) {
                const auto ann = base_annulus();
                if (ann) {
                    rho = std::min({std::abs(z) - ann->first, ann->second - std::abs(z),
                                    0.9 * std::abs(z)});
                } else {
                    auto in_base = [&](Complex zz) {
                        if (spec.angle().min_puncture_gap(zz) < 1e-9) return false;
                        return spec.base_interval().interior_contains(spec.angle().theta(zz));
                    };
                    rho = euclid_clearance(in_base, z, 0.9 * spec.angle().min_puncture_gap(z));
                }
                if (rho <= 0.0) {
                    b.upper = kInf;
                    b.upper_trivial = true;
                    return b;
                }
            }
            b.upper = std::max((v.dz == Complex(0.0)) ? 0.0 : std::abs(v.dz) / rho, fiber_k);
            if (b.upper < b.lower) b.upper = b.lower;
            return b;
        }
    }
    throw DomainError("cheap_royden_bounds: bad handle");
}

double DomainHandle::graph_weight_royden(const TangentVector2& v) const {
    if (tag_ == Tag::Model) return model_->royden(v);
    const auto ann = hint_annulus(*this);
    if (ann) {
        double base_part = 0.0;
        if (v.dz != Complex(0.0)) base_part = annulus_royden(v.base.z, v.dz, ann->first, ann->second);
        double fiber_part = 0.0;
        if (tag_ == Tag::Worm) {
            const WormLocal loc = worm_local(*worm_, scale_, v.base.z);
            const Complex dw_slice = v.dw;  // slice estimate reads the ambient fiber
            if (dw_slice != Complex(0.0)) {
                fiber_part =
                    disc_royden_in(loc.slice_center, loc.slice_radius, v.base.w, dw_slice);
            }
        } else {
            const Complex f = preworm_->angle().f_branch(v.base.z, v.base.z);
            const Complex fp = preworm_->angle().f_prime(v.base.z);
            const Complex u = std::exp(-f) * v.base.w;
            const Complex du = std::exp(-f) * (v.dw - fp * v.base.w * v.dz);
            if (du != Complex(0.0)) fiber_part = std::abs(du) / (2.0 * u.real());
        }
        return std::max(base_part, fiber_part);
    }
    const RoydenBounds b = cheap_royden_bounds(v);
    if (tag_ == Tag::Worm) {
        // the enclosing-product lower bound is weak for scaled worms
        return (b.upper < kInf) ? b.upper : b.lower;
    }
    if (b.lower_flagged || !(b.upper < kInf)) return (b.upper < kInf) ? b.upper : b.lower;
    return 0.5 * (b.lower + b.upper);
}

// --- disc search --------------------------------------------------------------

namespace {

struct DiscProblem {
    const DomainHandle* domain;
    ComplexPoint2 p;
    Complex vz, vw;  // unit direction
    int degree;
    int coeff_dim;  // 1: z only (planar models), 2: both coordinates
    std::vector<Complex> zetas;
    double margin;
    long long budget = 0;

    int dims() const { return 1 + 2 * coeff_dim * (degree - 1); }

    // x layout: [s, Re b2_z, Im b2_z, (Re b2_w, Im b2_w,) Re b3_z, ...]
    double violation(const std::vector<double>& x) const {
        const double s = x[0];
        double viol = 0.0;
        for (const Complex& zeta : zetas) {
            // Horner over the shape polynomial: coeff of zeta^k, k = deg..2,
            // then the linear direction term.
            Complex pz(0.0), pw(0.0);
            int idx = 1 + 2 * coeff_dim * (degree - 2);
            for (int k = degree; k >= 2; --k) {
                const Complex bz(x[idx], x[idx + 1]);
                pz = (pz + bz) * zeta;
                if (coeff_dim == 2) {
                    const Complex bw(x[idx + 2], x[idx + 3]);
                    pw = (pw + bw) * zeta;
                }
                idx -= 2 * coeff_dim;
            }
            pz = (pz + vz) * zeta;
            pw = (pw + vw) * zeta;
            const ComplexPoint2 pt(p.z + s * pz, p.w + s * pw);
            const double m = domain->interior_margin(pt);
            if (m < margin) {
                const double d = margin - m;
                viol += d * d;
            }
        }
        return viol;
    }

    double objective(const std::vector<double>& x) {
        --budget;
        if (x[0] <= 0.0) return 1e12;
        return -x[0] + 1e4 * violation(x);
    }

    bool feasible(const std::vector<double>& x) const { return violation(x) == 0.0; }
};

std::optional<double> disc_search_best_s(DiscProblem& prob, double s_init,
                                         const DiscSearchConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int dims = prob.dims();

    std::optional<double> best_s;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        prob.budget = cfg.max_iters;
        std::vector<double> x(dims, 0.0);
        x[0] = 0.75 * s_init;
        // shape seeds: zero, geometric tails along the direction, random
        const double tails[4] = {0.0, 0.45, -0.45, 0.75};
        if (restart >= 1 && restart <= 3) {
            double t = tails[restart];
            double powk = t;
            for (int k = 2; k <= prob.degree; ++k) {
                const int idx = 1 + 2 * prob.coeff_dim * (k - 2);
                x[idx] = (prob.vz * powk).real();
                x[idx + 1] = (prob.vz * powk).imag();
                if (prob.coeff_dim == 2) {
                    x[idx + 2] = (prob.vw * powk).real();
                    x[idx + 3] = (prob.vw * powk).imag();
                }
                powk *= t;
            }
        } else if (restart >= 4) {
            for (int i = 1; i < dims; ++i) x[i] = 0.3 * unif(rng);
        }

        double f_cur = prob.objective(x);
        std::vector<double> step(dims, 0.12);
        step[0] = std::max(0.25 * x[0], 1e-3);

        bool any_step = true;
        while (prob.budget > 0 && any_step) {
            any_step = false;
            for (int i = 0; i < dims && prob.budget > 0; ++i) {
                if (step[i] < 1e-8) continue;
                bool moved = false;
                for (int dir = -1; dir <= 1; dir += 2) {
                    std::vector<double> trial = x;
                    trial[i] = x[i] + dir * step[i];
                    double f_trial = prob.objective(trial);
                    while (f_trial < f_cur && prob.budget > 0) {
                        x = trial;
                        f_cur = f_trial;
                        moved = true;
                        trial[i] += dir * step[i];
                        f_trial = prob.objective(trial);
                    }
                    if (moved) break;
                }
                if (moved) {
                    step[i] *= 1.4;
                    any_step = true;
                } else {
                    step[i] *= 0.5;
                    if (step[i] >= 1e-8) any_step = true;
                }
            }
        }

        // polish: maximal feasible s at the final shape by bisection
        std::vector<double> xf = x;
        int guard = 0;
        while (!prob.feasible(xf) && guard++ < 70) xf[0] *= 0.5;
        if (!prob.feasible(xf)) continue;
        double lo = xf[0];
        double hi = lo;
        std::vector<double> xt = xf;
        for (int i = 0; i < 40; ++i) {
            xt[0] = hi * 1.3;
            if (!prob.feasible(xt)) break;
            hi = xt[0];
        }
        double hi_bad = hi * 1.3;
        for (int i = 0; i < 50; ++i) {
            const double mid = 0.5 * (lo + hi_bad);
            xt[0] = mid;
            if (prob.feasible(xt)) {
                lo = mid;
            } else {
                hi_bad = mid;
            }
        }
        if (!best_s || lo > *best_s) best_s = lo;
    }
    return best_s;
}

// Radius of the largest coordinate polydisc (sampled) inside the domain.
double polydisc_radius(const DomainHandle& domain, const ComplexPoint2& p, double margin) {
    auto ok = [&](double rho) {
        for (int k = 0; k < 8; ++k) {
            const Complex d = std::polar(rho, 0.25 * kPi * k);
            if (domain.interior_margin(ComplexPoint2(p.z + d, p.w)) < margin) return false;
            if (domain.interior_margin(ComplexPoint2(p.z, p.w + d)) < margin) return false;
            if (domain.interior_margin(ComplexPoint2(p.z + d, p.w + d)) < margin) return false;
            if (domain.interior_margin(ComplexPoint2(p.z + d, p.w - d)) < margin) return false;
        }
        return true;
    };
    double rho = 0.25;
    int guard = 0;
    while (!ok(rho) && guard++ < 60) rho *= 0.5;
    if (!ok(rho)) return 0.0;
    while (guard++ < 120 && ok(rho * 1.5)) rho *= 1.5;
    return rho;
}

}  // namespace

RoydenEstimate royden_upper(const DomainHandle& domain, const TangentVector2& v,
                            const DiscSearchConfig& cfg) {
    cfg.validate();
    if (v.is_zero()) throw DomainError("royden_upper: zero tangent vector");
    if (domain.interior_margin(v.base) <= 0.0) {
        throw DomainError("royden_upper: base point not strictly inside the domain");
    }

    const bool planar = domain.tag() == DomainHandle::Tag::Model &&
                        domain.model_domain().is_planar();
    if (planar && v.dz == Complex(0.0)) {
        throw DomainError("royden_upper: planar domain needs a dz component");
    }
    const double norm = planar ? std::abs(v.dz) : v.euclidean_norm();
    const Complex vz = v.dz / norm;
    const Complex vw = planar ? Complex(0.0) : v.dw / norm;

    // trivial bound from the largest inscribed coordinate polydisc
    const double rho = polydisc_radius(domain, v.base, cfg.margin);
    double best = kInf;
    if (rho > 0.0) {
        const double sup = std::max(std::abs(vz), std::abs(vw));
        best = norm * sup / rho;
    }
    const double trivial_bound = best;

    double s_init = (best < kInf) ? rho / std::max(std::abs(vz), std::abs(vw)) : 0.1;

    bool search_found = false;
    if (cfg.max_iters > 0) {
        DiscProblem prob;
        prob.domain = &domain;
        prob.p = v.base;
        prob.vz = vz;
        prob.vw = vw;
        prob.degree = std::max(cfg.degree, 1);
        prob.coeff_dim = planar ? 1 : 2;
        prob.margin = cfg.margin;
        for (double r : cfg.radii) {
            for (int a = 0; a < cfg.boundary_samples; ++a) {
                prob.zetas.push_back(std::polar(r, 2.0 * kPi * a / cfg.boundary_samples));
            }
        }
        if (prob.degree >= 2) {
            const auto s_best = disc_search_best_s(prob, s_init, cfg);
            if (s_best) {
                const double k_search = norm / (*s_best * cfg.radii.back());
                if (k_search < best) best = k_search;
                search_found = true;
            }
        } else {
            // degree 1: the affine disc search is the polydisc scan itself
            search_found = best < kInf;
        }
    }

    // rigorous cheap upper bounds sharpen the result
    const DomainHandle::RoydenBounds cheap = domain.cheap_royden_bounds(v);
    if (!cheap.upper_trivial && cheap.upper < best) best = cheap.upper;

    RoydenEstimate out;
    out.value = best;
    out.flagged = (cfg.max_iters > 0 && !search_found && best == trivial_bound);
    if (!(best < kInf)) {
        throw DomainError("royden_upper: no bound available (degenerate configuration)");
    }
    return out;
}

RoydenEstimate royden_lower(const DomainHandle& domain, const TangentVector2& v) {
    if (v.is_zero()) throw DomainError("royden_lower: zero tangent vector");
    const DomainHandle::RoydenBounds b = domain.cheap_royden_bounds(v);
    RoydenEstimate out;
    out.value = b.lower;
    out.flagged = b.lower_flagged;
    return out;
}

// --- metric graph --------------------------------------------------------------

MetricGraph MetricGraph::assemble(std::vector<ComplexPoint2> nodes, std::vector<Edge> edges) {
    MetricGraph g;
    g.nodes = std::move(nodes);
    const int n = g.size();
    // canonical order, dedupe
    for (Edge& e : edges) {
        if (e.src > e.dst) std::swap(e.src, e.dst);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) {
                                return a.src == b.src && a.dst == b.dst;
                            }),
                edges.end());

    std::vector<int> deg(n, 0);
    for (const Edge& e : edges) {
        if (e.src < 0 || e.dst >= n || e.src == e.dst) {
            throw DomainError("MetricGraph: bad edge");
        }
        if (!(e.weight > 0.0) || !is_finite(e.weight)) {
            throw DomainError("MetricGraph: edge weights must be positive and finite");
        }
        deg[e.src]++;
        deg[e.dst]++;
        g.resolution = std::max(g.resolution, e.weight);
        g.max_chord = std::max(g.max_chord, e.chord);
    }
    g.offsets.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) g.offsets[i + 1] = g.offsets[i] + deg[i];
    g.targets.assign(g.offsets[n], 0);
    g.weights.assign(g.offsets[n], 0.0);
    std::vector<int> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const Edge& e : edges) {
        g.targets[cursor[e.src]] = e.dst;
        g.weights[cursor[e.src]++] = e.weight;
        g.targets[cursor[e.dst]] = e.src;
        g.weights[cursor[e.dst]++] = e.weight;
    }

    // connected components (BFS)
    g.component.assign(n, -1);
    int comp = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (g.component[s] >= 0) continue;
        g.component[s] = comp;
        stack.push_back(s);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int it = g.offsets[u]; it < g.offsets[u + 1]; ++it) {
                const int t = g.targets[it];
                if (g.component[t] < 0) {
                    g.component[t] = comp;
                    stack.push_back(t);
                }
            }
        }
        ++comp;
    }
    g.component_count = comp;
    return g;
}

void MetricGraph::save_csv(const std::string& nodes_path, const std::string& edges_path) const {
    if (is_product()) {
        throw DomainError("save_csv: product graphs are stored per factor");
    }
    std::ofstream nf(nodes_path);
    if (!nf) throw DomainError("save_csv: cannot open " + nodes_path);
    nf << "id,z_re,z_im,w_re,w_im\n";
    char buf[256];
    for (int i = 0; i < size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", i, nodes[i].z.real(),
                      nodes[i].z.imag(), nodes[i].w.real(), nodes[i].w.imag());
        nf << buf;
    }
    std::ofstream ef(edges_path);
    if (!ef) throw DomainError("save_csv: cannot open " + edges_path);
    ef << "src,dst,weight,chord\n";
    for (int u = 0; u < size(); ++u) {
        for (int it = offsets[u]; it < offsets[u + 1]; ++it) {
            const int t = targets[it];
            if (u < t) {
                const double chord = std::sqrt(std::norm(nodes[u].z - nodes[t].z) +
                                               std::norm(nodes[u].w - nodes[t].w));
                std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", u, t, weights[it], chord);
                ef << buf;
            }
        }
    }
}

MetricGraph MetricGraph::load_csv(const std::string& nodes_path, const std::string& edges_path) {
    std::ifstream nf(nodes_path);
    if (!nf) throw DomainError("load_csv: cannot open " + nodes_path);
    std::string line;
    std::getline(nf, line);  // header
    std::vector<ComplexPoint2> nodes;
    while (std::getline(nf, line)) {
        int id;
        double zr, zi, wr, wi;
        if (std::sscanf(line.c_str(), "%d,%lg,%lg,%lg,%lg", &id, &zr, &zi, &wr, &wi) == 5) {
            nodes.emplace_back(Complex(zr, zi), Complex(wr, wi));
        }
    }
    std::ifstream ef(edges_path);
    if (!ef) throw DomainError("load_csv: cannot open " + edges_path);
    std::getline(ef, line);
    std::vector<Edge> edges;
    while (std::getline(ef, line)) {
        Edge e;
        if (std::sscanf(line.c_str(), "%d,%d,%lg,%lg", &e.src, &e.dst, &e.weight, &e.chord) == 4) {
            edges.push_back(e);
        }
    }
    return assemble(std::move(nodes), std::move(edges));
}

int MetricGraph::snap(const ComplexPoint2& p) const {
    if (is_product()) throw DomainError("snap: product graphs snap per factor");
    if (nodes.empty()) throw DomainError("snap: empty graph");
    int best = 0;
    double best_d = kInf;
    for (int i = 0; i < size(); ++i) {
        const double d = std::sqrt(std::norm(nodes[i].z - p.z) + std::norm(nodes[i].w - p.w));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best_d > std::max(max_chord, 1e-12) * 1.0001) {
        throw DomainError("snap: point beyond the snapping tolerance of one chord");
    }
    return best;
}

std::vector<double> MetricGraph::distances_from(const std::vector<int>& sources) const {
    if (is_product()) throw DomainError("distances_from: unsupported on product graphs");
    std::vector<double> dist(size(), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (int s : sources) {
        if (s < 0 || s >= size()) throw DomainError("distances_from: bad source");
        dist[s] = 0.0;
        pq.push({0.0, s});
    }
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (int it = offsets[u]; it < offsets[u + 1]; ++it) {
            const int t = targets[it];
            const double nd = d + weights[it];
            if (nd < dist[t]) {
                dist[t] = nd;
                pq.push({nd, t});
            }
        }
    }
    return dist;
}

GraphPathResult graph_distance(const MetricGraph& g, const ComplexPoint2& p,
                               const ComplexPoint2& q) {
    if (g.is_product()) {
        // exact product law: max of the factor distances
        const GraphPathResult a =
            graph_distance(*g.factor_first, ComplexPoint2(p.z, 0.0), ComplexPoint2(q.z, 0.0));
        const GraphPathResult b =
            graph_distance(*g.factor_second, ComplexPoint2(p.w, 0.0), ComplexPoint2(q.w, 0.0));
        GraphPathResult out;
        out.length = std::max(a.length, b.length);
        return out;
    }
    const int src = g.snap(p);
    const int dst = g.snap(q);
    if (g.component[src] != g.component[dst]) {
        throw DisconnectedGraphError(g.component[src], g.component[dst]);
    }
    std::vector<double> dist(g.size(), kInf);
    std::vector<int> prev(g.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (u == dst) break;
        if (d > dist[u]) continue;
        for (int it = g.offsets[u]; it < g.offsets[u + 1]; ++it) {
            const int t = g.targets[it];
            const double nd = d + g.weights[it];
            if (nd < dist[t]) {
                dist[t] = nd;
                prev[t] = u;
                pq.push({nd, t});
            }
        }
    }
    GraphPathResult out;
    out.length = dist[dst];
    for (int u = dst; u >= 0; u = prev[u]) out.node_path.push_back(u);
    std::reverse(out.node_path.begin(), out.node_path.end());
    return out;
}

// --- builders -------------------------------------------------------------------

namespace {

constexpr int kStencil2d[8][2] = {{1, 0}, {0, 1}, {1, 1},  {1, -1},
                                  {2, 1}, {1, 2}, {2, -1}, {1, -2}};

// royden is 1-homogeneous, so evaluating it on the full chord vector already
// yields (metric density along the chord direction) x (chord length).
double edge_weight(const DomainHandle& domain, const ComplexPoint2& a, const ComplexPoint2& b) {
    const Complex dz = b.z - a.z;
    const Complex dw = b.w - a.w;
    const ComplexPoint2 mid(0.5 * (a.z + b.z), 0.5 * (a.w + b.w));
    if (domain.contains(mid)) {
        return domain.graph_weight_royden(TangentVector2(mid, dz, dw));
    }
    return 0.5 * (domain.graph_weight_royden(TangentVector2(a, dz, dw)) +
                  domain.graph_weight_royden(TangentVector2(b, dz, dw)));
}

MetricGraph build_planar_box(const DomainHandle& domain, const PlanarBoxRegion& region) {
    const double h = region.spacing;
    if (!(h > 0.0)) throw DomainError("build_metric_graph: spacing must be positive");
    const int nx = static_cast<int>(std::floor((region.hi.real() - region.lo.real()) / h)) + 1;
    const int ny = static_cast<int>(std::floor((region.hi.imag() - region.lo.imag()) / h)) + 1;
    if (nx < 2 || ny < 2) throw DomainError("build_metric_graph: empty planar box");
    std::vector<int> idx(static_cast<size_t>(nx) * ny, -1);
    std::vector<ComplexPoint2> nodes;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const Complex z(region.lo.real() + i * h, region.lo.imag() + j * h);
            const ComplexPoint2 p(z, region.fixed_w);
            if (domain.contains(p) && domain.interior_margin(p) > 0.0) {
                idx[static_cast<size_t>(i) * ny + j] = static_cast<int>(nodes.size());
                nodes.push_back(p);
            }
        }
    }
    if (nodes.empty()) throw DomainError("build_metric_graph: region misses the domain");
    std::vector<MetricGraph::Edge> edges;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int a = idx[static_cast<size_t>(i) * ny + j];
            if (a < 0) continue;
            for (const auto& s : kStencil2d) {
                const int ii = i + s[0], jj = j + s[1];
                if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
                const int b = idx[static_cast<size_t>(ii) * ny + jj];
                if (b < 0) continue;
                const double w = edge_weight(domain, nodes[a], nodes[b]);
                edges.push_back({a, b, w,
                                 std::sqrt(std::norm(nodes[a].z - nodes[b].z) +
                                           std::norm(nodes[a].w - nodes[b].w))});
            }
        }
    }
    return MetricGraph::assemble(std::move(nodes), std::move(edges));
}

// Product domains: discretize each factor and combine with the exact max
// formula. A coupled 4D lattice inherits a quantized-speed penalty in the
// max metric that no practical grid removes; the factor decomposition
// realizes the product distance law directly.
MetricGraph build_product_box(const DomainHandle& domain, const ProductBoxRegion& region) {
    if (domain.tag() != DomainHandle::Tag::Model ||
        domain.model_domain().tag() != ModelDomain::Tag::Product) {
        throw DomainError("build_metric_graph: product regions need a product model domain");
    }
    const ModelDomain& md = domain.model_domain();
    PlanarBoxRegion first_box{region.first_lo, region.first_hi, region.spacing, Complex(0.0)};
    PlanarBoxRegion second_box{region.second_lo, region.second_hi, region.spacing, Complex(0.0)};
    const DomainHandle h1 = DomainHandle::model(md.first());
    const DomainHandle h2 = DomainHandle::model(md.second());
    MetricGraph g;
    g.factor_first =
        std::make_shared<const MetricGraph>(build_planar_box(h1, first_box));
    g.factor_second =
        std::make_shared<const MetricGraph>(build_planar_box(h2, second_box));
    g.resolution = std::max(g.factor_first->resolution, g.factor_second->resolution);
    g.max_chord = std::max(g.factor_first->max_chord, g.factor_second->max_chord);
    g.component_count =
        (g.factor_first->component_count == 1 && g.factor_second->component_count == 1) ? 1 : 2;
    return g;
}

MetricGraph build_fiber_slice(const DomainHandle& domain, const FiberSliceRegion& region) {
    if (domain.tag() != DomainHandle::Tag::Worm) {
        throw DomainError("build_metric_graph: fiber slice regions need a worm domain");
    }
    const WormSpec& spec = domain.worm_spec();
    const double lam = domain.scale();
    const double theta = spec.angle().theta(region.base_point);
    const double eta = spec.eta().value(theta);
    if (eta >= 1.0) throw DomainError("build_metric_graph: empty fiber slice");
    const Complex c = lam * std::polar(1.0, theta);
    const double rad = lam * std::sqrt(1.0 - eta);
    PlanarBoxRegion box;
    box.lo = c - Complex(rad, rad);
    box.hi = c + Complex(rad, rad);
    box.spacing = region.spacing;
    // reuse the planar grid machinery with roles of z and w swapped
    const double h = box.spacing;
    const int nx = static_cast<int>(std::floor((box.hi.real() - box.lo.real()) / h)) + 1;
    const int ny = static_cast<int>(std::floor((box.hi.imag() - box.lo.imag()) / h)) + 1;
    std::vector<int> idx(static_cast<size_t>(nx) * ny, -1);
    std::vector<ComplexPoint2> nodes;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const Complex w(box.lo.real() + i * h, box.lo.imag() + j * h);
            const ComplexPoint2 p(region.base_point, w);
            if (domain.contains(p) && domain.interior_margin(p) > 0.0) {
                idx[static_cast<size_t>(i) * ny + j] = static_cast<int>(nodes.size());
                nodes.push_back(p);
            }
        }
    }
    if (nodes.empty()) throw DomainError("build_metric_graph: region misses the domain");
    std::vector<MetricGraph::Edge> edges;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int a = idx[static_cast<size_t>(i) * ny + j];
            if (a < 0) continue;
            for (const auto& s : kStencil2d) {
                const int ii = i + s[0], jj = j + s[1];
                if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
                const int b = idx[static_cast<size_t>(ii) * ny + jj];
                if (b < 0) continue;
                const double w = edge_weight(domain, nodes[a], nodes[b]);
                edges.push_back({a, b, w, std::abs(nodes[a].w - nodes[b].w)});
            }
        }
    }
    return MetricGraph::assemble(std::move(nodes), std::move(edges));
}

MetricGraph build_bundle_patch(const DomainHandle& domain, const BundlePatchRegion& region) {
    const AngleFunction* angle = nullptr;
    RealInterval interval(0.0, 1.0);
    if (domain.tag() == DomainHandle::Tag::Worm) {
        angle = &domain.worm_spec().angle();
        interval = domain.worm_spec().interval_i();
    } else if (domain.tag() == DomainHandle::Tag::PreWorm) {
        angle = &domain.preworm_spec().angle();
        interval = domain.preworm_spec().base_interval();
    } else {
        throw DomainError("build_metric_graph: bundle patches need a worm or pre-worm");
    }
    if (!angle->is_classical()) {
        throw DomainError("build_metric_graph: bundle patches implemented over classical bases");
    }
    const double inner = std::exp(0.5 * interval.lo);
    const double outer = std::exp(0.5 * interval.hi);
    const AnnulusRadialGeodesic ray(inner, outer, std::arg(region.chart_center));

    const double hs = region.spacing;
    const double hg = 2.0 * region.spacing;  // k_H(e^{g1}, e^{g2}) = |g1 - g2| / 2
    const int ns = static_cast<int>(std::floor((region.s_max - region.s_min) / hs)) + 1;
    const int ng = static_cast<int>(std::floor((region.g_max - region.g_min) / hg)) + 1;
    if (ns < 2 || ng < 2) throw DomainError("build_metric_graph: empty bundle patch");

    std::vector<int> idx(static_cast<size_t>(ns) * ng, -1);
    std::vector<ComplexPoint2> nodes;
    for (int i = 0; i < ns; ++i) {
        const Complex z = ray.at(region.s_min + i * hs);
        const Complex f = angle->f_branch(region.chart_center, z);
        for (int j = 0; j < ng; ++j) {
            const double g = region.g_min + j * hg;
            const ComplexPoint2 p(z, std::exp(f) * std::exp(g));
            if (domain.contains(p) && domain.interior_margin(p) > 0.0) {
                idx[static_cast<size_t>(i) * ng + j] = static_cast<int>(nodes.size());
                nodes.push_back(p);
            }
        }
    }
    if (nodes.empty()) throw DomainError("build_metric_graph: region misses the domain");
    std::vector<MetricGraph::Edge> edges;
    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < ng; ++j) {
            const int a = idx[static_cast<size_t>(i) * ng + j];
            if (a < 0) continue;
            for (const auto& s : kStencil2d) {
                const int ii = i + s[0], jj = j + s[1];
                if (ii < 0 || ii >= ns || jj < 0 || jj >= ng) continue;
                const int b = idx[static_cast<size_t>(ii) * ng + jj];
                if (b < 0) continue;
                const double w = edge_weight(domain, nodes[a], nodes[b]);
                edges.push_back({a, b, w,
                                 std::sqrt(std::norm(nodes[a].z - nodes[b].z) +
                                           std::norm(nodes[a].w - nodes[b].w))});
            }
        }
    }
    return MetricGraph::assemble(std::move(nodes), std::move(edges));
}

}  // namespace

MetricGraph build_metric_graph(const DomainHandle& domain, const SamplingRegion& region,
                               const DiscSearchConfig& cfg) {
    cfg.validate();
    return std::visit(
        [&](const auto& r) -> MetricGraph {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, PlanarBoxRegion>) {
                return build_planar_box(domain, r);
            } else if constexpr (std::is_same_v<T, ProductBoxRegion>) {
                return build_product_box(domain, r);
            } else if constexpr (std::is_same_v<T, FiberSliceRegion>) {
                return build_fiber_slice(domain, r);
            } else {
                return build_bundle_patch(domain, r);
            }
        },
        region);
}

std::vector<double> completeness_probe(const DomainHandle& domain, const ComplexPoint2& o,
                                       const ComplexPoint2& target, int steps, double spacing) {
    if (domain.tag() != DomainHandle::Tag::Worm) {
        throw DomainError("completeness_probe: expects a worm domain");
    }
    if (steps < 2) throw DomainError("completeness_probe: need at least 2 steps");
    if (std::abs(o.z - target.z) > 1e-9) {
        throw DomainError("completeness_probe: o and target must share the base point");
    }
    FiberSliceRegion region;
    region.base_point = o.z;
    region.spacing = spacing;
    const MetricGraph g = build_metric_graph(domain, region, DiscSearchConfig{});
    const std::vector<double> dist = g.distances_from({g.snap(o)});
    std::vector<double> out;
    for (int k = 1; k <= steps; ++k) {
        const Complex wk = target.w + (o.w - target.w) * std::pow(0.5, k);
        const int node = g.snap(ComplexPoint2(o.z, wk));
        if (!is_finite(dist[node])) {
            throw DisconnectedGraphError(g.component[g.snap(o)], g.component[node]);
        }
        out.push_back(dist[node]);
    }
    return out;
}

MetricOracle graph_oracle(std::shared_ptr<const MetricGraph> g, const DomainHandle& domain) {
    if (!g) throw DomainError("graph_oracle: null graph");
    DomainHandle copy = domain;
    return MetricOracle(
        [g](const ComplexPoint2& p, const ComplexPoint2& q) {
            return graph_distance(*g, p, q).length;
        },
        [copy](const TangentVector2& v) { return copy.graph_weight_royden(v); },
        AccuracyClass::graph_approx(g->resolution));
}

}  // namespace wormlab
