#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "core/character.hpp"
#include "core/descriptor.hpp"
#include "core/element.hpp"
#include "core/grid.hpp"
#include "core/matrix.hpp"
#include "core/rng.hpp"
#include "errors.hpp"

#include "support.hpp"

using namespace stablecone;
using testsupport::make_cone;
using testsupport::random_element;

TEST_CASE("grid validates its points") {
    CHECK_THROWS_AS(make_grid({}), ContractViolation);
    CHECK_THROWS_AS(make_grid({1.0, 1.0}), ContractViolation);
    CHECK_THROWS_AS(make_grid({2.0, 1.0}), ContractViolation);
    CHECK_THROWS_AS(make_grid({-1.0, 1.0}), ContractViolation);
    auto g = make_grid({0.0, 1.0, 2.0});
    CHECK(g->size() == 3);
    CHECK(g->front() == 0.0);
    CHECK(g->back() == 2.0);
    CHECK(g->first_positive() == 1.0);
}

TEST_CASE("grid evaluation is right-continuous with left limits") {
    auto g = make_grid({0.0, 1.0, 2.0, 4.0});
    const std::vector<double> v{10.0, 20.0, 30.0, 40.0};
    CHECK(g->eval(v, -0.5) == 0.0);
    CHECK(g->eval(v, 0.0) == 10.0);
    CHECK(g->eval(v, 0.999) == 10.0);
    CHECK(g->eval(v, 1.0) == 20.0);
    CHECK(g->eval(v, 1.5) == 20.0);
    CHECK(g->eval(v, 2.0) == 30.0);
    CHECK(g->eval(v, 3.9999) == 30.0);
    CHECK(g->eval(v, 4.0) == 40.0);
    CHECK(g->eval(v, 1000.0) == 40.0);
}

TEST_CASE("grid evaluation snaps values a relative epsilon below a point") {
    auto g = make_grid({0.0, 1.0, 2.0});
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(g->eval(v, 1.0 - 1e-12) == 2.0);
    CHECK(g->eval(v, 1.0 - 1e-6) == 1.0);
    CHECK(g->eval(v, 2.0 * (1.0 - 1e-12)) == 3.0);
}

TEST_CASE("cone element factories enforce their invariants") {
    CHECK_THROWS_AS(ConeElement::euclidean({}), ContractViolation);
    CHECK_THROWS_AS(ConeElement::euclidean({1.0, std::nan("")}), ContractViolation);

    auto g = make_grid({0.0, 1.0});
    CHECK_THROWS_AS(ConeElement::grid_function(nullptr, {1.0}), ContractViolation);
    CHECK_THROWS_AS(ConeElement::grid_function(g, {1.0}), ContractViolation);

    CHECK_THROWS_AS(ConeElement::atomic_measure(1, {{{0.5}, -1.0}}), ContractViolation);
    CHECK_THROWS_AS(ConeElement::atomic_measure(1, {{{0.5, 0.5}, 1.0}}), ContractViolation);

    const ConeElement m = ConeElement::atomic_measure(1, {{{0.5}, 0.0}, {{0.25}, 2.0}});
    CHECK(m.atoms().size() == 1);
    CHECK(m.atoms()[0].weight == 2.0);

    const ConeElement empty = ConeElement::atomic_measure(2, {});
    CHECK(empty.is_neutral());
    CHECK(empty.total_mass() == 0.0);
}

TEST_CASE("element norms") {
    const ConeElement x = ConeElement::euclidean({3.0, -4.0});
    CHECK(x.l2_norm() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(x.sup_norm() == 4.0);
    CHECK(x.dim() == 2);
    CHECK_FALSE(x.is_neutral());
    CHECK(ConeElement::euclidean({0.0, 0.0}).is_neutral());

    const ConeElement m = ConeElement::atomic_measure(1, {{{0.1}, 1.5}, {{0.9}, 2.5}});
    CHECK(m.total_mass() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("relative distance canonicalizes and detects mismatches") {
    const ConeElement a = ConeElement::euclidean({1.0, 2.0});
    const ConeElement b = ConeElement::euclidean({1.0, 2.0 * (1.0 + 1e-12)});
    CHECK(rel_distance(a, a) == 0.0);
    CHECK(rel_distance(a, b) > 0.0);
    CHECK(approx_equal(a, b, 1e-9));
    CHECK_FALSE(approx_equal(a, ConeElement::euclidean({1.0, 2.1}), 1e-9));
    CHECK(rel_distance(a, ConeElement::euclidean({1.0, 2.0, 3.0})) ==
          std::numeric_limits<double>::infinity());

    const ConeElement m1 = ConeElement::atomic_measure(1, {{{0.1}, 1.0}, {{0.5}, 2.0}});
    const ConeElement m2 = ConeElement::atomic_measure(1, {{{0.5}, 2.0}, {{0.1}, 0.5}, {{0.1}, 0.5}});
    CHECK(approx_equal(m1, m2, 1e-12));
}

TEST_CASE("matrix basics") {
    SquareMatrix a(2);
    a.at(0, 0) = 1.0;
    a.at(0, 1) = 2.0;
    a.at(1, 0) = 3.0;
    a.at(1, 1) = 4.0;
    CHECK(det(a) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(det(SquareMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.inf_norm() == 7.0);

    const SquareMatrix at = a.transpose();
    CHECK(at.at(0, 1) == 3.0);

    double x[2] = {1.0, 1.0};
    double y[2] = {0.0, 0.0};
    a.apply(x, y);
    CHECK(y[0] == 3.0);
    CHECK(y[1] == 7.0);
}

TEST_CASE("matrix exponential") {
    const SquareMatrix z(3);
    const SquareMatrix ez = expm(z);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(ez.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

    SquareMatrix d(2);
    d.at(0, 0) = 0.5;
    d.at(1, 1) = -1.25;
    const SquareMatrix ed = expm(d);
    CHECK(ed.at(0, 0) == doctest::Approx(std::exp(0.5)).epsilon(1e-13));
    CHECK(ed.at(1, 1) == doctest::Approx(std::exp(-1.25)).epsilon(1e-13));
    CHECK(std::abs(ed.at(0, 1)) < 1e-15);

    SquareMatrix a(2);
    a.at(0, 0) = 0.3;
    a.at(0, 1) = 0.7;
    a.at(1, 0) = -0.2;
    a.at(1, 1) = 0.9;
    const SquareMatrix lhs = expm(a) * expm(a);
    const SquareMatrix rhs = expm(a.scaled(2.0));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(lhs.at(i, j) == doctest::Approx(rhs.at(i, j)).epsilon(1e-12));
}

TEST_CASE("symmetric part checks") {
    SquareMatrix good(2);
    good.at(0, 0) = 1.0;
    good.at(0, 1) = 0.25;
    good.at(1, 0) = -0.25;
    good.at(1, 1) = 1.5;
    CHECK(sym_part_positive_definite(good));
    CHECK(sym_part_min_eigenvalue(good) == doctest::Approx(1.0).epsilon(1e-12));

    SquareMatrix bad(2);
    bad.at(0, 0) = 1.0;
    bad.at(0, 1) = 10.0;
    bad.at(1, 1) = 1.0;
    CHECK_FALSE(sym_part_positive_definite(bad));
    CHECK(sym_part_min_eigenvalue(bad) == doctest::Approx(-4.0).epsilon(1e-12));

    SquareMatrix diag(3);
    diag.at(0, 0) = 2.0;
    diag.at(1, 1) = 0.5;
    diag.at(2, 2) = 3.0;
    CHECK(sym_part_min_eigenvalue(diag) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fourier characters") {
    const Character c = Character::fourier({{0, 2.0}, {1, -1.0}});
    const ConeElement x = ConeElement::euclidean({3.0, 0.5});
    const double p = 2.0 * 3.0 - 0.5;
    const std::complex<double> v = c.eval(x);
    CHECK(v.real() == doctest::Approx(std::cos(p)).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(std::sin(p)).epsilon(1e-15));
    CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(Character::fourier({}), ContractViolation);
    CHECK_THROWS_AS(c.eval(ConeElement::euclidean({1.0})), ContractViolation);
}

TEST_CASE("indicator characters") {
    auto g = make_grid({0.0, 1.0, 2.0});
    const Character c = Character::indicator({{1, 1.5}});
    CHECK(c.eval(ConeElement::grid_function(g, {0.0, 1.0, 5.0})).real() == 1.0);
    CHECK(c.eval(ConeElement::grid_function(g, {0.0, 2.0, 5.0})).real() == 0.0);
    CHECK_THROWS_AS(Character::indicator({{0, 0.0}}), ContractViolation);
    CHECK_THROWS_AS(Character::indicator({{0, -1.0}}), ContractViolation);
}

TEST_CASE("laplace characters") {
    const Character c = Character::laplace({{{0.5}, 1.0, 2.0}});
    const ConeElement m = ConeElement::atomic_measure(1, {{{0.5}, 3.0}});
    CHECK(c.eval(m).real() == doctest::Approx(std::exp(-6.0)).epsilon(1e-14));
    const ConeElement far = ConeElement::atomic_measure(1, {{{5.0}, 3.0}});
    CHECK(c.eval(far).real() == 1.0);
    const ConeElement mid = ConeElement::atomic_measure(1, {{{0.75}, 1.0}});
    CHECK(c.eval(mid).real() == doctest::Approx(std::exp(-2.0 * 0.75)).epsilon(1e-13));
    CHECK_THROWS_AS(Character::laplace({{{0.5}, 0.0, 1.0}}), ContractViolation);
}

TEST_CASE("exp-decay characters") {
    const Character c = Character::exp_decay({1.0, 2.0});
    const ConeElement x = ConeElement::euclidean({0.5, 0.25});
    CHECK(c.eval(x).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(c.eval(x).imag() == 0.0);
    CHECK_THROWS_AS(Character::exp_decay({-1.0}), ContractViolation);
    CHECK_THROWS_AS(c.eval(ConeElement::euclidean({-0.5, 0.25})), ContractViolation);
    const Character zero_weight = Character::exp_decay({0.0, 1.0});
    CHECK(zero_weight.eval(ConeElement::euclidean({-0.5, 0.25})).real() ==
          doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
}

TEST_CASE("character products multiply pointwise within a family") {
    const Character f1 = Character::fourier({{0, 1.25}});
    const Character f2 = Character::fourier({{1, -0.5}});
    const Character f12 = f1.product(f2);
    const ConeElement x = ConeElement::euclidean({0.7, 1.9});
    const std::complex<double> lhs = f12.eval(x);
    const std::complex<double> rhs = f1.eval(x) * f2.eval(x);
    CHECK(std::abs(lhs - rhs) < 1e-14);

    const Character d1 = Character::exp_decay({1.0, 0.0});
    const Character d2 = Character::exp_decay({0.5, 2.0});
    const ConeElement y = ConeElement::euclidean({0.3, 0.1});
    CHECK(d1.product(d2).eval(y).real() ==
          doctest::Approx((d1.eval(y) * d2.eval(y)).real()).epsilon(1e-14));

    CHECK_THROWS_AS(f1.product(d1), ContractViolation);
}

TEST_CASE("one_minus_re avoids cancellation near one") {
    const Character f = Character::fourier({{0, 1.0}});
    const double p = 1e-8;
    const ConeElement tiny = ConeElement::euclidean({p});
    const double got = f.one_minus_re(tiny);
    CHECK(got == doctest::Approx(0.5 * p * p).epsilon(1e-9));
    CHECK(1.0 - f.eval(tiny).real() == 0.0);

    const Character d = Character::exp_decay({1.0});
    const ConeElement small = ConeElement::euclidean({1e-14});
    CHECK(d.one_minus_re(small) == doctest::Approx(1e-14).epsilon(1e-9));

    const ConeElement big = ConeElement::euclidean({2.0});
    CHECK(f.one_minus_re(big) == doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-14));
}

TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 16; ++i) CHECK(a.raw() == b.raw());

    RngStream c(42, 8);
    RngStream d(43, 7);
    RngStream base(42, 7);
    bool differs_stream = false;
    bool differs_seed = false;
    for (int i = 0; i < 8; ++i) {
        const std::uint64_t r = base.raw();
        differs_stream |= c.raw() != r;
        differs_seed |= d.raw() != r;
    }
    CHECK(differs_stream);
    CHECK(differs_seed);

    CHECK(a.master_seed() == 42);
    CHECK(a.stream_id() == 7);
}

TEST_CASE("rng variates land in their supports with the right moments") {
    RngStream rng(20260816, 0);
    const int n = 100000;
    double umin = 1.0, umax = 0.0, esum = 0.0, nsum = 0.0, nsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        esum += rng.exp1();
        const double z = rng.normal();
        nsum += z;
        nsq += z * z;
    }
    CHECK(umin > 0.0);
    CHECK(umax < 1.0);
    CHECK(esum / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(nsum / n) < 0.02);
    CHECK(nsq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("element validation against each cone") {
    const auto euclid = make_cone(testsupport::kEuclideanSpec);
    CHECK_THROWS_AS(validate_element(euclid.descriptor, ConeElement::euclidean({1.0})),
                    ContractViolation);
    CHECK_THROWS_AS(
        validate_element(euclid.descriptor, ConeElement::atomic_measure(1, {{{0.5}, 1.0}})),
        ContractViolation);

    const auto mx = make_cone(testsupport::kMaxSpec);
    CHECK_THROWS_AS(
        validate_element(mx.descriptor,
                         ConeElement::grid_function(mx.descriptor.grid, {1.0, -0.5, 1.0, 1.0})),
        ContractViolation);
    auto foreign = make_grid({0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(validate_element(
                        mx.descriptor, ConeElement::grid_function(foreign, {1.0, 1.0, 1.0, 1.0})),
                    ContractViolation);

    const auto tm = make_cone(testsupport::kTimeSpec);
    std::vector<double> v(tm.descriptor.grid->size(), 1.0);
    CHECK_THROWS_AS(validate_element(tm.descriptor,
                                     ConeElement::grid_function(tm.descriptor.grid, v)),
                    ContractViolation);

    const auto ms = make_cone(testsupport::kMeasureSpec);
    CHECK_THROWS_AS(
        validate_element(ms.descriptor, ConeElement::atomic_measure(1, {{{0.5}, 1.0}})),
        ContractViolation);
}

TEST_CASE("scaling rejects non-positive and non-finite factors") {
    const auto euclid = make_cone(testsupport::kEuclideanSpec);
    const ConeElement x = ConeElement::euclidean({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(scale(euclid.descriptor, 0.0, x), DomainError);
    CHECK_THROWS_AS(scale(euclid.descriptor, -1.0, x), DomainError);
    CHECK_THROWS_AS(scale(euclid.descriptor, std::numeric_limits<double>::infinity(), x),
                    DomainError);
    CHECK(approx_equal(scale(euclid.descriptor, 1.0, x), x, 0.0));
}

namespace {

void check_semigroup_axioms(const WiredCone& cone, double scale_tol, int reps) {
    const ConeDescriptor& desc = cone.descriptor;
    RngStream rng(991, 5);
    const ConeElement e = desc.neutral();
    CHECK(e.is_neutral());
    for (int i = 0; i < reps; ++i) {
        const ConeElement x = random_element(desc, rng);
        const ConeElement y = random_element(desc, rng);
        const ConeElement z = random_element(desc, rng);
        const double s = 0.25 + 4.0 * rng.uniform01();
        const double t = 0.25 + 4.0 * rng.uniform01();

        REQUIRE(approx_equal(add(desc, x, e), x, 0.0));
        REQUIRE(approx_equal(scale(desc, s, e), e, 0.0));
        REQUIRE(approx_equal(add(desc, x, y), add(desc, y, x), 1e-14));
        REQUIRE(approx_equal(add(desc, add(desc, x, y), z), add(desc, x, add(desc, y, z)),
                             1e-13));
        REQUIRE(approx_equal(scale(desc, s, add(desc, x, y)),
                             add(desc, scale(desc, s, x), scale(desc, s, y)), scale_tol));
        if (desc.scaling != ScalingKind::TimeReparam)
            REQUIRE(approx_equal(scale(desc, s, scale(desc, t, x)), scale(desc, s * t, x),
                                 scale_tol));

        const ConeElement ix = involve(desc, x);
        REQUIRE(approx_equal(involve(desc, ix), x, 0.0));
        REQUIRE(approx_equal(involve(desc, add(desc, x, y)), add(desc, ix, involve(desc, y)),
                             1e-14));
        REQUIRE(approx_equal(involve(desc, scale(desc, s, x)), scale(desc, s, ix), 1e-14));
    }
}

} // namespace

TEST_CASE("semigroup axioms hold on every default cone") {
    check_semigroup_axioms(make_cone(testsupport::kEuclideanSpec), 1e-13, 400);
    check_semigroup_axioms(make_cone(testsupport::kOperatorSpec), 1e-10, 400);
    check_semigroup_axioms(make_cone(testsupport::kMaxSpec), 1e-13, 400);
    check_semigroup_axioms(make_cone(testsupport::kTimeSpec), 1e-13, 400);
    check_semigroup_axioms(make_cone(testsupport::kMeasureSpec), 1e-13, 400);
}

TEST_CASE("time reparametrization composes exactly where reads stay on the grid") {
    const auto tm = make_cone(testsupport::kTimeSpec);
    const ConeDescriptor& desc = tm.descriptor;
    const std::vector<double>& pts = desc.grid->points();
    RngStream rng(17, 3);
    auto on_grid = [&](double q) {
        if (q > pts.back() * (1.0 + Grid::kSnapRel)) return false;
        for (double g : pts)
            if (std::abs(q - g) <= Grid::kSnapRel * std::max(g, 1.0)) return true;
        return false;
    };
    for (int rep = 0; rep < 100; ++rep) {
        const ConeElement x = random_element(desc, rng);
        for (double t : {0.5, 1.0, 2.0}) {
            for (double s : {0.5, 1.0, 2.0}) {
                const ConeElement lhs = scale(desc, t, scale(desc, s, x));
                const ConeElement rhs = scale(desc, t * s, x);
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    if (!on_grid(t * pts[k]) || !on_grid(s * (t * pts[k]))) continue;
                    REQUIRE(lhs.values()[k] == rhs.values()[k]);
                }
            }
        }
    }
}

TEST_CASE("admissibility windows per cone") {
    const auto euclid = make_cone(testsupport::kEuclideanSpec);
    CHECK(euclid.descriptor.alpha_admissible.admits(0.7, false));
    CHECK_FALSE(euclid.descriptor.alpha_admissible.admits(1.2, false));
    CHECK(euclid.descriptor.alpha_admissible.admits(1.2, true));
    CHECK(euclid.descriptor.alpha_admissible.admits(1.99, true));
    CHECK_FALSE(euclid.descriptor.alpha_admissible.admits(2.0, true));

    const auto op = make_cone(testsupport::kOperatorSpec);
    CHECK(op.descriptor.alpha_admissible.admits(1.5, true));
    CHECK_FALSE(op.descriptor.alpha_admissible.admits(1.5, false));

    for (const char* spec :
         {testsupport::kMaxSpec, testsupport::kTimeSpec, testsupport::kMeasureSpec}) {
        const auto cone = make_cone(spec);
        CHECK(cone.descriptor.alpha_admissible.admits(2.5, false));
        CHECK(cone.descriptor.alpha_admissible.admits(0.3, false));
    }
}
