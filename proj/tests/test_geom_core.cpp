#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "wormlab/geom_core.hpp"
#include "wormlab/hyperbolic_exact.hpp"

using namespace wormlab;

TEST_CASE("finite-value guards reject NaN/Inf at construction") {
    CHECK_THROWS_AS(ComplexPoint2(Complex(std::nan(""), 0.0), Complex(0.0)), DomainError);
    CHECK_THROWS_AS(ComplexPoint2(Complex(0.0), Complex(0.0, INFINITY)), DomainError);
    CHECK_THROWS_AS(RealInterval(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(RealInterval(2.0, 1.0), DomainError);
    CHECK(RealInterval(-1.0, 1.0).interior_contains(0.0));
    CHECK_FALSE(RealInterval(-1.0, 1.0).interior_contains(1.0));
    CHECK(RealInterval(-1.0, 1.0).contains(1.0));
}

TEST_CASE("hermitian_apply on the identity form") {
    const HermitianForm2 id = HermitianForm2::identity();
    CHECK(hermitian_apply(id, Complex(1.0), Complex(0.0)) == doctest::Approx(1.0));
    CHECK(hermitian_apply(id, Complex(0.0), Complex(2.0)) == doctest::Approx(4.0));
}

TEST_CASE("hermitian form invariants rejected when violated") {
    CHECK_THROWS_AS(HermitianForm2(Complex(0, 1), Complex(0), Complex(0), Complex(1)),
                    DomainError);
    CHECK_THROWS_AS(HermitianForm2(Complex(1), Complex(0, 1), Complex(0, 1), Complex(1)),
                    DomainError);
}

TEST_CASE("hermitian_apply output is real") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        const Complex g11(u(rng), u(rng));
        const Complex g12(u(rng), u(rng));
        const Complex g21(u(rng), u(rng));
        const Complex g22(u(rng), u(rng));
        // H = G^H G is Hermitian PSD
        const Complex h11 = std::conj(g11) * g11 + std::conj(g21) * g21;
        const Complex h12 = std::conj(g11) * g12 + std::conj(g21) * g22;
        const Complex h22 = std::conj(g12) * g12 + std::conj(g22) * g22;
        const HermitianForm2 h(h11, h12, std::conj(h12), h22);
        const Complex val = hermitian_apply_full(h, Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
        CHECK(std::abs(val.imag()) <= 1e-12 * std::max(1.0, std::abs(val.real())));
        CHECK(min_eigenvalue(h) >= -1e-12 * std::max(1.0, std::abs(h11) + std::abs(h22)));
    }
}

TEST_CASE("min_eigenvalue closed form") {
    CHECK(min_eigenvalue(HermitianForm2::identity()) == doctest::Approx(1.0));
    CHECK(min_eigenvalue(HermitianForm2::from_entries(0.0, Complex(0.0), 3.0)) ==
          doctest::Approx(0.0));
    // eigenvalues of [[2,1],[1,2]] are 1 and 3
    CHECK(min_eigenvalue(HermitianForm2::from_entries(2.0, Complex(1.0), 2.0)) ==
          doctest::Approx(1.0));
}

TEST_CASE("metric oracle contract on the exact disc oracle") {
    const MetricOracle d = ModelDomain::unit_disc().oracle();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.85, 0.85);
    auto rnd_pt = [&]() { return ComplexPoint2(Complex(u(rng) * 0.7, u(rng) * 0.7), 0.0); };
    for (int i = 0; i < 300; ++i) {
        const ComplexPoint2 p = rnd_pt(), q = rnd_pt(), r = rnd_pt();
        const double dpq = d.distance(p, q);
        CHECK(d.distance(q, p) == dpq);  // symmetry, exact
        CHECK(d.distance(p, r) <= d.distance(p, q) + d.distance(q, r) + 3.0 * d.accuracy().slack() +
                                      1e-12);
        CHECK(dpq >= 0.0);
    }
}

TEST_CASE("royden homogeneity under real and complex scalings") {
    const MetricOracle d = ModelDomain::unit_disc().oracle();
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int i = 0; i < 200; ++i) {
        const ComplexPoint2 base(Complex(u(rng) * 0.6, u(rng) * 0.6), 0.0);
        const Complex dz(u(rng) + 1.1, u(rng));
        const double k1 = d.royden(TangentVector2(base, dz, 0.0));
        const Complex t(u(rng) + 1.5, u(rng));
        const double k2 = d.royden(TangentVector2(base, t * dz, 0.0));
        CHECK(k2 == doctest::Approx(std::abs(t) * k1).epsilon(1e-12));
    }
}

TEST_CASE("zero tangent vectors rejected at metric evaluation") {
    const MetricOracle d = ModelDomain::unit_disc().oracle();
    CHECK_THROWS_AS(d.royden(TangentVector2(ComplexPoint2(), Complex(0.0), Complex(0.0))),
                    DomainError);
}

TEST_CASE("accuracy classes carry their resolution") {
    CHECK(AccuracyClass::exact().slack() == 0.0);
    CHECK(AccuracyClass::graph_approx(0.05).slack() == doctest::Approx(0.05));
    const AccuracyClass b = AccuracyClass::disc_search_bound(AccuracyClass::Bound::Lower);
    CHECK(b.direction == AccuracyClass::Bound::Lower);
}
