#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "aind/errors.hpp"
#include "aind/families.hpp"
#include "aind/metrics.hpp"
#include "aind/oracles.hpp"

using namespace aind;

namespace {

SpacePtr points(std::vector<double> xs) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < xs.size(); ++i) labels.push_back("x" + std::to_string(i));
    return FiniteMetricSpace::line(labels, xs);
}

DiscreteMeasure delta(const SpacePtr& s, std::size_t at) {
    std::vector<Rational> w(s->size(), Rational(0));
    w[at] = 1;
    return DiscreteMeasure(s, w);
}

JointMeasure random_product(std::mt19937_64& rng, std::size_t n1, std::size_t n2) {
    const auto a = random_planar_space(rng, n1, "a"), b = random_planar_space(rng, n2, "b");
    return product_measure(oracle::random_measure(rng, a), oracle::random_measure(rng, b));
}

}  // namespace

TEST_CASE("product measures have zero dependence") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const auto j = random_product(rng, 1 + rep % 4, 1 + rep % 5);
        CHECK(*variation_norm(dependence_matrix(j)).exact_value == 0);
        CHECK(*alpha_coefficient(j).exact_value == 0);
        CHECK(*beta_partition(j, 4).exact_value == 0);
        CHECK(*cov_sup_pm1(j).exact_value == 0);
        CHECK(prokhorov_to_product_upper(j, ProductMetricKind::Sum).value <= 1e-12);
        CHECK(bl_to_product(j, ProductMetricKind::Sum).value <= 1e-9);
        CHECK(bl_product_sup_heuristic(j).value <= 1e-9);
        CHECK(cf_gap_sweep(j).value <= 1e-12);
    }
}

TEST_CASE("variation norm of the paper families") {
    for (unsigned n = 2; n <= 12; ++n)
        CHECK(*variation_norm(dependence_matrix(*bernoulli_perturbation_family(n).joint)).exact_value == 1);
}

TEST_CASE("alpha matches rectangle enumeration") {
    std::mt19937_64 rng(32);
    for (int rep = 0; rep < 150; ++rep) {
        const auto j = random_joint(rng, 1 + rep % 6, 1 + (rep / 6) % 6);
        const auto a = alpha_coefficient(j);
        CHECK(a.exact);
        CHECK(*a.exact_value == oracle::alpha_all_rectangles(j));
        const auto& c = std::get<RectangleCertificate>(a.certificate);
        CHECK(abs(rectangle_gap(j, c.a, c.b)) == *a.exact_value);
        const auto h = alpha_coefficient(j, SearchMode::Heuristic);
        CHECK_FALSE(h.exact);
        CHECK(*h.exact_value <= *a.exact_value);
    }
    const auto b = bernoulli_perturbation_family(5);
    CHECK(*alpha_coefficient(*b.joint).exact_value == Rational(1, 4));
    const auto big = binary_coding_family(12);
    CHECK_THROWS_AS(alpha_coefficient(*big.joint), CapabilityError);
    CHECK_NOTHROW(alpha_coefficient(*big.joint, SearchMode::Heuristic));
}

TEST_CASE("beta equals partition enumeration and half the variation") {
    std::mt19937_64 rng(33);
    for (int rep = 0; rep < 80; ++rep) {
        const auto j = random_joint(rng, 1 + rep % 4, 1 + (rep / 4) % 4);
        const auto b = beta_partition(j, std::max(j.rows(), j.cols()));
        CHECK(*b.exact_value == oracle::beta_all_partitions(j));
        CHECK(*b.exact_value == *variation_norm(dependence_matrix(j)).exact_value / 2);
        const auto& c = std::get<PartitionCertificate>(b.certificate);
        CHECK(partition_gap(j, c.block1, c.block2) == *b.exact_value);
        // With two blocks each, the value drops to a rectangle-type quantity.
        CHECK(*beta_partition(j, 2).exact_value <= *b.exact_value);
        CHECK(*beta_partition(j, 1).exact_value == 0);
    }
    CHECK(*beta_partition(*bernoulli_perturbation_family(2).joint, 4).exact_value == Rational(1, 2));
    CHECK_THROWS_AS(beta_partition(*binary_coding_family(3).joint, 8), CapabilityError);
}

TEST_CASE("cov_sup is four times alpha") {
    std::mt19937_64 rng(34);
    for (int rep = 0; rep < 200; ++rep) {
        const auto j = random_joint(rng, 1 + rep % 6, 1 + (rep / 6) % 6);
        const auto c = cov_sup_pm1(j);
        CHECK(*c.exact_value == 4 * *alpha_coefficient(j).exact_value);
        const auto& s = std::get<SignCertificate>(c.certificate);
        std::vector<Rational> f(s.f.begin(), s.f.end()), g(s.g.begin(), s.g.end());
        CHECK(abs(cov_gap(j, f, g)) == *c.exact_value);
    }
    CHECK(*cov_sup_pm1(*binary_coding_family(3).joint).exact_value * *cov_sup_pm1(*binary_coding_family(3).joint).exact_value * 3 <= 16);
}

TEST_CASE("cov and integral gaps") {
    const auto f3 = binary_coding_family(3);
    const auto& j = *f3.joint;
    std::vector<double> f(6, 0.0), g(8, 1.0), c1(6, 2.5);
    for (std::size_t i = 0; i < 3; ++i) f[i] = 1.0;
    CHECK(cov_gap(j, f, g) == doctest::Approx(0.0));
    CHECK(cov_gap(j, c1, g) == doctest::Approx(0.0));
    CHECK_THROWS_AS(cov_gap(j, std::vector<double>(5, 1.0), g), InputError);

    std::mt19937_64 rng(35);
    for (int rep = 0; rep < 40; ++rep) {
        const auto r = random_joint(rng, 1 + rep % 5, 1 + rep % 4);
        std::vector<Rational> fr(r.rows()), gr(r.cols());
        for (auto& x : fr) x = Rational(static_cast<long>(rng() % 7) - 3, 2);
        for (auto& x : gr) x = Rational(static_cast<long>(rng() % 5) - 2, 3);
        DenseMatrix<Rational> h(r.rows(), r.cols());
        for (std::size_t a = 0; a < r.rows(); ++a)
            for (std::size_t b = 0; b < r.cols(); ++b) h(a, b) = fr[a] * gr[b];
        CHECK(integral_gap(r, h) == cov_gap(r, fr, gr));
        DenseMatrix<Rational> constant(r.rows(), r.cols(), Rational(3, 7));
        CHECK(integral_gap(r, constant) == 0);
        // Indicator product gives the rectangle gap.
        std::vector<Rational> ia(r.rows(), Rational(0)), ib(r.cols(), Rational(0));
        ia[0] = 1;
        ib[0] = 1;
        const std::size_t a0[] = {0}, b0[] = {0};
        CHECK(cov_gap(r, ia, ib) == rectangle_gap(r, a0, b0));
    }
    CHECK_THROWS_AS(integral_gap(j, DenseMatrix<double>(5, 8, 0.0)), InputError);
}

TEST_CASE("prokhorov distance") {
    const auto s = points({0.0, 0.3});
    CHECK(prokhorov_distance(delta(s, 0), delta(s, 1)).value == doctest::Approx(0.3));
    CHECK(prokhorov_distance(delta(s, 0), delta(s, 0)).value == 0.0);
    const auto far = points({0.0, 5.0});
    CHECK(prokhorov_distance(delta(far, 0), delta(far, 1)).value == doctest::Approx(1.0));
    CHECK_THROWS_AS(prokhorov_distance(delta(s, 0), delta(far, 0)), InputError);

    std::mt19937_64 rng(36);
    for (int rep = 0; rep < 120; ++rep) {
        const auto sp = random_planar_space(rng, 2 + rep % 7, "z");
        const auto m1 = oracle::random_measure(rng, sp), m2 = oracle::random_measure(rng, sp);
        const auto p = prokhorov_distance(m1, m2);
        CHECK(std::fabs(p.value - oracle::prokhorov_closed_sets(m1, m2)) <= 1e-9);
        const auto& c = std::get<CouplingCertificate>(p.certificate);
        CHECK(coupling_ky_fan(*sp, c) <= p.value + 1e-9);
    }
}

TEST_CASE("bounded lipschitz distance") {
    const auto s = points({0.0, 0.3});
    CHECK(bl_distance(delta(s, 0), delta(s, 1)).value == doctest::Approx(0.3));
    CHECK(bl_distance(delta(s, 0), delta(s, 0)).value == doctest::Approx(0.0));
    const auto far = points({0.0, 5.0});
    CHECK(bl_distance(delta(far, 0), delta(far, 1)).value == doctest::Approx(2.0));

    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 120; ++rep) {
        const auto sp = random_planar_space(rng, 2 + rep % 8, "z");
        const auto m1 = oracle::random_measure(rng, sp), m2 = oracle::random_measure(rng, sp);
        const auto b = bl_distance(m1, m2);
        CHECK(std::fabs(b.value - oracle::bl_transport(m1, m2)) <= 1e-9);
        const auto& c = std::get<LipschitzCertificate>(b.certificate);
        CHECK(std::fabs(evaluate_lipschitz_certificate(m1, m2, c) - b.value) <= 1e-9);
        const double p = prokhorov_distance(m1, m2).value;
        CHECK(p * p <= b.value + 1e-9);
        CHECK(b.value <= 3 * p + 1e-9);
    }
    const auto big = binary_coding_family(6);
    CHECK_THROWS_AS(bl_to_product(*big.joint, ProductMetricKind::Sum), CapabilityError);
}

TEST_CASE("distances to the product on the paper families") {
    for (unsigned n = 2; n <= 12; ++n) {
        const auto f = bernoulli_perturbation_family(n);
        CHECK(prokhorov_to_product_upper(*f.joint, ProductMetricKind::Sum).value <= 1.0 / n + 1e-9);
        CHECK(bl_product_sup_heuristic(*f.joint).value <= 1.0 / n + 1e-9);
    }
    for (unsigned n = 1; n <= 4; ++n) {
        const auto f = binary_coding_family(n);
        CHECK(prokhorov_to_product_upper(*f.joint, ProductMetricKind::Sum).value >= 1.0 / 48 - 1e-9);
    }
}

TEST_CASE("characteristic function gaps") {
    std::mt19937_64 rng(38);
    const double t[] = {1.5, -2.0}, s[] = {0.7, 3.0}, zero[] = {0.0, 0.0};
    for (int rep = 0; rep < 20; ++rep) {
        const auto j = random_joint(rng, 2 + rep % 4, 2 + rep % 3);
        CHECK(cf_gap(j, zero, s) <= 1e-12);
        CHECK(cf_gap(j, t, zero) <= 1e-12);
        // Brute-force complex summation.
        const auto [p, q] = marginals(j);
        std::complex<double> joint{0, 0}, fx{0, 0}, fy{0, 0};
        auto phase = [](std::span<const double> x, const double* u) { return u[0] * x[0] + u[1] * x[1]; };
        for (std::size_t a = 0; a < j.rows(); ++a) {
            fx += to_double(p[a]) * std::polar(1.0, phase(j.space1()->coords(a), t));
            for (std::size_t b = 0; b < j.cols(); ++b)
                joint += to_double(j(a, b)) *
                         std::polar(1.0, phase(j.space1()->coords(a), t) + phase(j.space2()->coords(b), s));
        }
        for (std::size_t b = 0; b < j.cols(); ++b) fy += to_double(q[b]) * std::polar(1.0, phase(j.space2()->coords(b), s));
        CHECK(cf_gap(j, t, s) == doctest::Approx(std::abs(joint - fx * fy)).epsilon(1e-12));
        CHECK(cf_gap_sweep(random_product(rng, 3, 3)).value <= 1e-12);
    }
    const auto disc = markov_shift_family(symmetric_two_state_chain(Rational(1, 4)).transition,
                                          symmetric_two_state_chain(Rational(1, 4)).stationary, 2);
    const double one[] = {1.0};
    CHECK_THROWS_AS(cf_gap(*disc.joint, one, one), CapabilityError);

    // Bernoulli perturbation at (π, π): the gap shrinks like |1 − e^{iπ/n}|.
    double previous = 1.0;
    for (unsigned n = 2; n <= 40; n += 2) {
        const auto f = bernoulli_perturbation_family(n);
        const double pi[] = {M_PI};
        const double g = cf_gap(*f.joint, pi, pi);
        CHECK(g <= std::abs(1.0 - std::polar(1.0, M_PI / n)) + 1e-12);
        CHECK(g <= previous + 1e-12);
        previous = g;
    }
}

TEST_CASE("gaussian closed form") {
    GaussianBlock g{{0.0}, {0.0}, DenseMatrix<double>(1, 1, 1.0), DenseMatrix<double>(1, 1, 1.0),
                    DenseMatrix<double>(1, 1, 0.5)};
    const double one[] = {1.0};
    CHECK(gaussian_cf_gap(g, one, one) == doctest::Approx(std::exp(-1.0) * std::fabs(std::exp(-0.5) - 1.0)));
    CHECK(gaussian_cf_gap(g, one, one) == doctest::Approx(0.1447).epsilon(1e-3));
    g.cov12(0, 0) = 0.0;
    CHECK(gaussian_cf_gap(g, one, one) == 0.0);
    g.cov12(0, 0) = 1.5;
    CHECK_THROWS_AS(check_gaussian_block(g), InputError);
    CHECK_THROWS_AS(gaussian_cf_gap(g, one, one), InputError);

    double previous = 1.0;
    for (unsigned n = 1; n <= 30; ++n) {
        const auto f = gaussian_sequence_family(n, 1.0, 1.0);
        const double v = gaussian_cf_gap(*f.gaussian, one, one);
        CHECK(v < previous);
        previous = v;
    }
}
