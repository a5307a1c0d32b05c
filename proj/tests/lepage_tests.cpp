#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <vector>

#include "core/descriptor.hpp"
#include "core/element.hpp"
#include "core/rng.hpp"
#include "errors.hpp"
#include "lepage/exponent.hpp"
#include "lepage/series.hpp"
#include "lepage/spectral.hpp"
#include "polar/radial.hpp"

#include "support.hpp"

using namespace stablecone;
using testsupport::make_cone;

TEST_CASE("gamma sequence is an increasing truncated Poisson arrival train") {
    RngStream rng(20260816, 0);
    const std::vector<double> g = gamma_sequence(rng, 200.0);
    REQUIRE(!g.empty());
    CHECK(g.front() > 0.0);
    CHECK(g.back() <= 200.0);
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] > g[i - 1]);

    RngStream again(20260816, 0);
    CHECK(gamma_sequence(again, 200.0) == g);

    double total = 0.0;
    const int runs = 400;
    for (int i = 0; i < runs; ++i) {
        RngStream r(7, static_cast<std::uint64_t>(i));
        total += static_cast<double>(gamma_sequence(r, 50.0).size());
    }
    CHECK(total / runs == doctest::Approx(50.0).epsilon(0.04));

    CHECK_THROWS_AS(gamma_sequence(rng, 0.0), DomainError);
    CHECK_THROWS_AS(gamma_sequence(rng, -5.0), DomainError);
}

TEST_CASE("radial weight exponents per mutation") {
    CHECK(radial_weight_exponent(0.5, Mutation::None) == -2.0);
    CHECK(radial_weight_exponent(0.7, Mutation::None) == doctest::Approx(-1.0 / 0.7).epsilon(1e-15));
    CHECK(radial_weight_exponent(0.5, Mutation::RadialExponentOne) == -1.0);
    CHECK(radial_weight_exponent(0.5, Mutation::RadialAlphaDoubled) == -1.0);
    CHECK(radial_weight_exponent(0.7, Mutation::RadialAlphaDoubled) ==
          doctest::Approx(-1.0 / 1.4).epsilon(1e-15));
}

TEST_CASE("spectral samplers draw from their declared supports") {
    RngStream rng(5, 0);

    const auto euclid = make_cone(testsupport::kEuclideanSpec);
    const SpectralSampler ones = make_spectral(euclid.descriptor, {"constant_one", 0.5, 1.5});
    CHECK_FALSE(ones.symmetric);
    for (int i = 0; i < 10; ++i) {
        const ConeElement e = ones.draw(rng);
        for (double v : e.values()) REQUIRE(v == 1.0);
    }

    const SpectralSampler rad = make_spectral(euclid.descriptor, {"rademacher", 0.5, 1.5});
    CHECK(rad.symmetric);
    int plus = 0, minus = 0;
    for (int i = 0; i < 400; ++i) {
        const ConeElement e = rad.draw(rng);
        for (double v : e.values()) {
            REQUIRE(std::abs(v) == 1.0);
            (v > 0 ? plus : minus)++;
        }
    }
    CHECK(plus > 400);
    CHECK(minus > 400);

    const SpectralSampler gauss = make_spectral(euclid.descriptor, {"gaussian", 0.5, 1.5});
    CHECK(gauss.symmetric);
    double sq = 0.0;
    int n = 0;
    for (int i = 0; i < 2000; ++i) {
        const ConeElement e = gauss.draw(rng);
        for (double v : e.values()) {
            sq += v * v;
            ++n;
        }
    }
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.05));

    const auto mx = make_cone(testsupport::kMaxSpec);
    const SpectralSampler prof = make_spectral(mx.descriptor, {"uniform_profile", 0.5, 1.5});
    for (int i = 0; i < 100; ++i) {
        const ConeElement e = prof.draw(rng);
        for (double v : e.values()) {
            REQUIRE(v >= 0.5);
            REQUIRE(v <= 1.5);
        }
    }

    const auto tm = make_cone(testsupport::kTimeSpec);
    const SpectralSampler step = make_spectral(tm.descriptor, {"step_rademacher", 0.5, 1.5});
    CHECK(step.symmetric);
    for (int i = 0; i < 100; ++i) {
        const ConeElement e = step.draw(rng);
        const auto& v = e.values();
        REQUIRE(v[0] == 0.0);
        std::size_t k = 0;
        while (k < v.size() && v[k] == 0.0) ++k;
        REQUIRE(k < v.size());
        const double s = v[k];
        REQUIRE(std::abs(s) == 1.0);
        for (; k < v.size(); ++k) REQUIRE(v[k] == s);
    }

    const auto ms = make_cone(testsupport::kMeasureSpec);
    const SpectralSampler atom = make_spectral(ms.descriptor, {"single_atom", 0.5, 1.5});
    for (int i = 0; i < 100; ++i) {
        const ConeElement e = atom.draw(rng);
        REQUIRE(e.atoms().size() == 1);
        REQUIRE(e.atoms()[0].weight == 1.0);
        for (double c : e.atoms()[0].location) {
            REQUIRE(c >= 0.0);
            REQUIRE(c <= 1.0);
        }
    }
}

TEST_CASE("spectral kinds are rejected on incompatible cones") {
    const auto mx = make_cone(testsupport::kMaxSpec);
    CHECK_THROWS_AS(make_spectral(mx.descriptor, {"gaussian", 0.5, 1.5}), DomainError);
    CHECK_THROWS_AS(make_spectral(mx.descriptor, {"rademacher", 0.5, 1.5}), DomainError);

    const auto euclid = make_cone(testsupport::kEuclideanSpec);
    CHECK_THROWS_AS(make_spectral(euclid.descriptor, {"uniform_profile", 0.5, 1.5}),
                    DomainError);
    CHECK_THROWS_AS(make_spectral(euclid.descriptor, {"single_atom", 0.5, 1.5}),
                    DomainError);
    CHECK_THROWS_AS(make_spectral(euclid.descriptor, {"no_such_kind", 0.5, 1.5}),
                    DomainError);
    CHECK_THROWS_AS(make_spectral(mx.descriptor, {"uniform_profile", 1.5, 0.5}),
                    DomainError);
    CHECK_THROWS_AS(make_spectral(mx.descriptor, {"uniform_profile", -0.5, 1.5}),
                    DomainError);
}

TEST_CASE("series samples refold from their kept points") {
    for (const char* spec :
         {testsupport::kEuclideanSpec, testsupport::kOperatorSpec, testsupport::kMaxSpec,
          testsupport::kTimeSpec, testsupport::kMeasureSpec}) {
        const auto cone = make_cone(spec);
        const ConeDescriptor& desc = cone.descriptor;
        const RadialLaw law(cone.spec.alpha);
        const SpectralSampler spectral = make_spectral(desc, cone.spec.spectral);

        SeriesOptions opts;
        opts.truncation_r = 50.0;
        opts.keep_points = true;
        RngStream rng(20260816, 11);
        const SeriesSample s = sample_series(desc, law, spectral, opts, rng);

        REQUIRE(s.term_count == s.gammas.size());
        REQUIRE(s.term_count == s.marks.size());
        REQUIRE(s.term_count > 0);
        for (std::size_t i = 1; i < s.gammas.size(); ++i) REQUIRE(s.gammas[i] > s.gammas[i - 1]);
        REQUIRE(s.gammas.back() <= 50.0);
        CHECK(s.truncation_r == 50.0);
        CHECK(s.master_seed == 20260816);
        CHECK(s.stream_id == 11);

        ConeElement acc = desc.neutral();
        const double e = radial_weight_exponent(cone.spec.alpha, Mutation::None);
        for (std::size_t i = 0; i < s.gammas.size(); ++i)
            acc = add(desc, acc, scale(desc, std::pow(s.gammas[i], e), s.marks[i]));
        REQUIRE(rel_distance(acc, s.value) < 1e-12);
    }
}

TEST_CASE("fast and generic accumulation paths agree") {
    for (const char* spec : {testsupport::kEuclideanSpec, testsupport::kOperatorSpec,
                             testsupport::kMaxSpec, testsupport::kTimeSpec}) {
        const auto cone = make_cone(spec);
        const RadialLaw law(cone.spec.alpha);
        const SpectralSampler spectral = make_spectral(cone.descriptor, cone.spec.spectral);

        SeriesOptions fast;
        fast.truncation_r = 80.0;
        SeriesOptions generic = fast;
        generic.keep_points = true;

        RngStream r1(99, 3);
        RngStream r2(99, 3);
        const SeriesSample a = sample_series(cone.descriptor, law, spectral, fast, r1);
        const SeriesSample b = sample_series(cone.descriptor, law, spectral, generic, r2);
        REQUIRE(a.term_count == b.term_count);
        REQUIRE(rel_distance(a.value, b.value) < 1e-12);
    }
}

TEST_CASE("sampling is deterministic in the stream and varies across streams") {
    const auto cone = make_cone(testsupport::kEuclideanSpec);
    const RadialLaw law(cone.spec.alpha);
    const SpectralSampler spectral = make_spectral(cone.descriptor, cone.spec.spectral);
    SeriesOptions opts;
    opts.truncation_r = 100.0;

    RngStream r1(123, 5);
    RngStream r2(123, 5);
    RngStream r3(123, 6);
    const SeriesSample a = sample_series(cone.descriptor, law, spectral, opts, r1);
    const SeriesSample b = sample_series(cone.descriptor, law, spectral, opts, r2);
    const SeriesSample c = sample_series(cone.descriptor, law, spectral, opts, r3);
    CHECK(rel_distance(a.value, b.value) == 0.0);
    CHECK(rel_distance(a.value, c.value) > 0.0);
}

TEST_CASE("mutations change the realized series") {
    const auto cone = make_cone(testsupport::kEuclideanSpec);
    const RadialLaw law(cone.spec.alpha);
    const SpectralSampler spectral = make_spectral(cone.descriptor, cone.spec.spectral);
    SeriesOptions opts;
    opts.truncation_r = 100.0;

    SeriesOptions m1 = opts;
    m1.mutation = Mutation::RadialExponentOne;
    SeriesOptions m2 = opts;
    m2.mutation = Mutation::RadialAlphaDoubled;

    RngStream r1(42, 0), r2(42, 0), r3(42, 0);
    const SeriesSample none = sample_series(cone.descriptor, law, spectral, opts, r1);
    const SeriesSample e1 = sample_series(cone.descriptor, law, spectral, m1, r2);
    const SeriesSample ad = sample_series(cone.descriptor, law, spectral, m2, r3);
    CHECK(rel_distance(none.value, e1.value) > 1e-6);
    CHECK(rel_distance(none.value, ad.value) > 1e-6);
}

TEST_CASE("admissibility window gates the sampler") {
    SeriesOptions opts;
    opts.truncation_r = 20.0;
    RngStream rng(1, 0);

    const auto euclid = make_cone(R"({"kind":"euclidean","dim":2,"alpha":1.2,
                                      "spectral":{"kind":"constant_one"}})");
    const SpectralSampler ones = make_spectral(euclid.descriptor, euclid.spec.spectral);
    CHECK_THROWS_AS(sample_series(euclid.descriptor, RadialLaw(1.2), ones, opts, rng),
                    PreconditionError);

    const auto sym = make_cone(R"({"kind":"euclidean","dim":2,"alpha":1.5})");
    const SpectralSampler rad = make_spectral(sym.descriptor, sym.spec.spectral);
    CHECK_NOTHROW(sample_series(sym.descriptor, RadialLaw(1.5), rad, opts, rng));
    CHECK_THROWS_AS(sample_series(sym.descriptor, RadialLaw(2.0), rad, opts, rng),
                    PreconditionError);

    const auto mx = make_cone(R"({"kind":"max","dim":3,"alpha":2.5})");
    const SpectralSampler prof = make_spectral(mx.descriptor, mx.spec.spectral);
    CHECK_NOTHROW(sample_series(mx.descriptor, RadialLaw(2.5), prof, opts, rng));

    CHECK_THROWS_AS(sample_series(euclid.descriptor, RadialLaw(0.7), ones,
                                  SeriesOptions{}, rng),
                    DomainError);
}

TEST_CASE("normalization to the transversal records the scale constant") {
    const auto cone = make_cone(testsupport::kEuclideanSpec);
    const RadialLaw law(cone.spec.alpha);
    const SpectralSampler spectral = make_spectral(cone.descriptor, cone.spec.spectral);

    SeriesOptions opts;
    opts.truncation_r = 50.0;
    opts.normalize_to_transversal = true;
    CHECK_THROWS_AS(
        [&] {
            RngStream rng(3, 0);
            sample_series(cone.descriptor, law, spectral, opts, rng);
        }(),
        DomainError);

    opts.transversal = &cone.transversal;
    RngStream rng(3, 0);
    const SeriesSample s = sample_series(cone.descriptor, law, spectral, opts, rng);
    // rademacher marks in R^3 all have euclidean norm sqrt(3)
    CHECK(s.scale_constant == doctest::Approx(std::pow(3.0, 0.5 * 0.7)).epsilon(1e-12));
}

TEST_CASE("truncation bias bounds per cone") {
    const RadialLaw law07(0.7);

    const auto euclid = make_cone(testsupport::kEuclideanSpec);
    const SpectralSampler rad = make_spectral(euclid.descriptor, euclid.spec.spectral);
    const BiasBound b1 = truncation_bias_bound(euclid.descriptor, law07, rad, 1000.0);
    const BiasBound b2 = truncation_bias_bound(euclid.descriptor, law07, rad, 10000.0);
    REQUIRE(std::isfinite(b1.value));
    REQUIRE(std::isfinite(b2.value));
    CHECK(b2.value < b1.value);

    // symmetric law keeps a root-mean-square bound alive above alpha = 1
    const auto sym = make_cone(R"({"kind":"euclidean","dim":2,"alpha":1.5})");
    const SpectralSampler rad2 = make_spectral(sym.descriptor, sym.spec.spectral);
    CHECK(std::isfinite(truncation_bias_bound(sym.descriptor, RadialLaw(1.5), rad2, 1000.0).value));

    const auto mx = make_cone(testsupport::kMaxSpec);
    const SpectralSampler prof = make_spectral(mx.descriptor, mx.spec.spectral);
    const BiasBound bm = truncation_bias_bound(mx.descriptor, law07, prof, 50.0);
    const double kappa = std::pow(1.5 / 0.5, 0.7);
    CHECK(bm.value == doctest::Approx(std::exp(-50.0 / kappa)).epsilon(1e-12));

    // a truncated time series saturates the grid horizon once r beats the
    // grid ratio to the alpha
    const auto tm = make_cone(testsupport::kTimeSpec);
    const SpectralSampler step = make_spectral(tm.descriptor, tm.spec.spectral);
    CHECK(truncation_bias_bound(tm.descriptor, RadialLaw(0.5), step, 1000.0).value == 0.0);
    CHECK(std::isnan(truncation_bias_bound(tm.descriptor, RadialLaw(0.5), step, 10.0).value));

    const auto ms = make_cone(testsupport::kMeasureSpec);
    const SpectralSampler atom = make_spectral(ms.descriptor, ms.spec.spectral);
    CHECK(std::isfinite(truncation_bias_bound(ms.descriptor, law07, atom, 1000.0).value));
}

TEST_CASE("truncated laplace exponent matches the one-sided closed form") {
    const auto cone = make_cone(R"({"kind":"euclidean","dim":1,"alpha":0.5,
                                    "spectral":{"kind":"constant_one"}})");
    const RadialLaw law(0.5);
    const SpectralSampler ones = make_spectral(cone.descriptor, cone.spec.spectral);
    const Character chi = Character::exp_decay({1.0});

    RngStream rng(20260816, 200);
    const LaplaceExponentResult res =
        truncated_laplace_exponent(cone.descriptor, law, ones, chi, 1e4, rng);
    REQUIRE(res.converged);
    CHECK(res.std_error < 1e-12);
    CHECK(std::abs(res.value.imag()) < 1e-10);
    // phi_r = sqrt(pi) - integral below r^(-2), which is about 1e-4 at r=1e4
    const double sqrt_pi = 1.7724538509055161;
    CHECK(std::abs(res.value.real() - sqrt_pi) < res.tail_bound + 2e-4);
}

TEST_CASE("laplace exponent drops when the probe is weakened") {
    const auto cone = make_cone(R"({"kind":"euclidean","dim":1,"alpha":0.5,
                                    "spectral":{"kind":"constant_one"}})");
    const RadialLaw law(0.5);
    const SpectralSampler ones = make_spectral(cone.descriptor, cone.spec.spectral);

    RngStream r1(8, 0), r2(8, 0);
    const double full = truncated_laplace_exponent(cone.descriptor, law, ones,
                                                   Character::exp_decay({1.0}), 100.0, r1)
                            .value.real();
    const double half = truncated_laplace_exponent(cone.descriptor, law, ones,
                                                   Character::exp_decay({0.25}), 100.0, r2)
                            .value.real();
    // phi(a chi) = a^alpha phi(chi) up to the shifted truncation window
    CHECK(half < full);
    CHECK(half == doctest::Approx(0.5 * full).epsilon(0.02));
}

TEST_CASE("integrability diagnostic separates convergent and divergent indices") {
    const auto cone = make_cone(R"({"kind":"euclidean","dim":1,"alpha":0.5,
                                    "spectral":{"kind":"constant_one"}})");
    const SpectralSampler ones = make_spectral(cone.descriptor, cone.spec.spectral);
    const Character chi = Character::fourier({{0, 1.0}});

    RngStream r1(20260816, 300);
    const EpsConditionResult ok =
        eps_condition_check(cone.descriptor, RadialLaw(0.5), ones, chi, r1);
    CHECK_FALSE(ok.divergent);
    CHECK(std::isfinite(ok.value));
    CHECK(ok.value > 0.0);
    CHECK(ok.slope_low > 0.5 + 0.05);

    RngStream r2(20260816, 301);
    const EpsConditionResult bad =
        eps_condition_check(cone.descriptor, RadialLaw(2.5), ones, chi, r2);
    CHECK(bad.divergent);
    CHECK(std::isinf(bad.value));
}
