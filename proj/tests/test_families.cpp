#include <doctest.h>

#include <cmath>
#include <random>

#include "aind/errors.hpp"
#include "aind/families.hpp"
#include "aind/oracles.hpp"
#include "aind/verify.hpp"

using namespace aind;

TEST_CASE("binary coding primitives") {
    CHECK(chi(0, 0) == 0);
    CHECK(chi(0, 5) == 1);
    CHECK(chi(1, 5) == 0);
    CHECK(chi(2, 5) == 1);
    CHECK(chi(10, 5) == 0);
    CHECK(chi(70, ~0ULL) == 0);
    CHECK(sign_fn(0, 0) == -1);
    CHECK(sign_fn(0, 1) == 1);
    CHECK(sign_fn(2, 5) == 1);
    CHECK(tent(0, 0) == 1.0);
    CHECK(tent(0.25, 0) == 0.0);
    CHECK(tent(0.1, 0.1) == doctest::Approx(0.2));
    CHECK(h_eval(0, 1) == 1.0);
    CHECK(h_eval(1, 1) == 0.0);
    CHECK(h_eval(0.5, 0.5) == 0.0);
    for (std::uint64_t i = 0; i < 6; ++i)
        for (std::uint64_t j = 0; j < 40; ++j) CHECK(h_eval(double(i), double(j)) == chi(i, j));
    // h is 4-Lipschitz for the sum metric: spot-check on a fine grid.
    for (double x = -0.5; x < 3.5; x += 0.07)
        for (double y = -0.5; y < 3.5; y += 0.09) {
            CHECK(std::fabs(h_eval(x, y) - h_eval(x + 0.01, y)) <= 0.04 + 1e-12);
            CHECK(std::fabs(h_eval(x, y) - h_eval(x, y + 0.01)) <= 0.04 + 1e-12);
        }
    const auto m = binary_sign_matrix(3);
    CHECK(m.rows() == 8);
    CHECK(m.cols() == 3);
    CHECK(m(5, 1) == -1);
    CHECK(m(5, 2) == 1);
}

TEST_CASE("binary coding family") {
    CHECK(check_matrix_reproduction(*binary_coding_family(3).joint).passed);
    CHECK_THROWS_AS(binary_coding_family(0), InputError);
    CHECK_THROWS_AS(binary_coding_family(kBinaryCodingMaxN + 1), InputError);
    for (unsigned n = 1; n <= 6; ++n) {
        const auto f = binary_coding_family(n);
        const auto& j = *f.joint;
        std::size_t support = 0;
        for (const auto& w : j.weights().data()) {
            CHECK((w == 0 || w == Rational(1, static_cast<unsigned long>(n) << n)));
            support += w != 0;
        }
        CHECK(support == n * (1UL << n));
        CHECK(integral_gap(j, binary_coding_h(j)) == Rational(1, 4));
    }
}

TEST_CASE("matrix reproduction catches a perturbed weight") {
    const auto f = binary_coding_family(3);
    auto w = f.joint->weights();
    w(0, 7) -= Rational(1, 48);
    w(0, 6) += Rational(1, 48);
    const JointMeasure mutated(f.joint->space1(), f.joint->space2(), w);
    const auto r = check_matrix_reproduction(mutated);
    CHECK_FALSE(r.passed);
    CHECK(r.computed.find("2 mismatches") != std::string::npos);
    CHECK_FALSE(check_matrix_reproduction(*binary_coding_family(2).joint).passed);
}

TEST_CASE("bernoulli perturbation family") {
    CHECK_THROWS_AS(bernoulli_perturbation_family(1), InputError);
    for (unsigned n = 2; n <= 30; ++n) {
        const auto f = bernoulli_perturbation_family(n);
        const auto& j = *f.joint;
        REQUIRE(f.rectangle);
        CHECK(rectangle_gap(j, f.rectangle->a, f.rectangle->b) == Rational(-1, 8));
        const auto [p, q] = marginals(j);
        const auto prod = product_measure(p, q);
        std::size_t eighths = 0;
        for (const auto& w : prod.weights().data()) eighths += w == Rational(1, 8);
        CHECK(eighths == 8);
        CHECK(j.space1()->dist(0, 1) == doctest::Approx(1.0 / n));
    }
}

TEST_CASE("markov shift family") {
    const auto chain = symmetric_two_state_chain(Rational(1, 4));
    const auto zero = markov_shift_family(chain.transition, chain.stationary, 0);
    CHECK((*zero.joint)(0, 0) == Rational(1, 2));
    CHECK((*zero.joint)(0, 1) == 0);
    CHECK_THROWS_AS(markov_shift_family(chain.transition, {Rational(1, 3), Rational(2, 3)}, 3), InputError);
    auto bad = chain.transition;
    bad(0, 0) = Rational(1, 2);
    CHECK_THROWS_AS(markov_shift_family(bad, chain.stationary, 3), InputError);

    for (unsigned n = 1; n <= 12; ++n) {
        const auto f = markov_shift_family(chain.transition, chain.stationary, n);
        const auto pw = oracle::naive_power(chain.transition, n);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k) CHECK((*f.joint)(i, k) == chain.stationary[i] * pw(i, k));
    }

    // Doubly stochastic 3-state chain with eigenvalues 1, 1/4, 1/4 on the
    // symmetric part: alpha decays at the second eigenvalue modulus.
    DenseMatrix<Rational> p3(3, 3);
    const Rational rows[3][3] = {{Rational(1, 2), Rational(1, 4), Rational(1, 4)},
                                 {Rational(1, 4), Rational(1, 2), Rational(1, 4)},
                                 {Rational(1, 4), Rational(1, 4), Rational(1, 2)}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) p3(i, k) = rows[i][k];
    const std::vector<Rational> st(3, Rational(1, 3));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (unsigned n = 5; n <= 20; ++n) {
        const double a = to_double(*alpha_coefficient(*markov_shift_family(p3, st, n).joint).exact_value);
        const double y = std::log(a);
        sx += n, sy += y, sxx += double(n) * n, sxy += n * y, ++cnt;
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    CHECK(std::exp(slope) == doctest::Approx(0.25).epsilon(0.05));

    const auto blk = block_chain(chain, 2);
    CHECK(blk.transition.rows() == 4);
    CHECK(blk.labels[1] == "0,1");
    CHECK_NOTHROW(markov_shift_family(blk.transition, blk.stationary, 3, blk.labels));
    CHECK_THROWS_AS(block_chain(chain, 4), InputError);
}

TEST_CASE("conditional independence bound") {
    const auto s1 = FiniteMetricSpace::discrete({"a", "b"});
    const auto s2 = FiniteMetricSpace::discrete({"c", "d"});
    // delta = 0: independent on Ω.
    DenseMatrix<Rational> on(2, 2, Rational(1, 4)), off(2, 2, Rational(0));
    const ConditionalIndepInstance indep(s1, s2, on, off);
    const auto b0 = conditional_independence_bound_check(indep);
    CHECK(b0.value == 0);
    CHECK(b0.bound == 0);
    CHECK(b0.holds);

    // delta = 1/4 with perfectly dependent mass on Ωᶜ.
    DenseMatrix<Rational> on2(2, 2, Rational(3, 16)), off2(2, 2, Rational(0));
    off2(0, 0) = off2(1, 1) = Rational(1, 8);
    const ConditionalIndepInstance dep(s1, s2, on2, off2);
    CHECK(dep.delta() == Rational(1, 4));
    const auto b1 = conditional_independence_bound_check(dep);
    CHECK(b1.bound == Rational(7, 6));
    CHECK(b1.holds);

    DenseMatrix<Rational> zero(2, 2, Rational(0)), all(2, 2, Rational(1, 4));
    CHECK_THROWS_AS(ConditionalIndepInstance(s1, s2, zero, all), InputError);
    DenseMatrix<Rational> corr(2, 2, Rational(0));
    corr(0, 0) = corr(1, 1) = Rational(1, 2);
    CHECK_THROWS_AS(ConditionalIndepInstance(s1, s2, corr, zero), InputError);

    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 100; ++rep) {
        const auto inst = random_conditional_instance(rng, 1 + rep % 4, 1 + rep % 3);
        const auto b = conditional_independence_bound_check(inst);
        CHECK(b.holds);
        const Rational d = inst.delta();
        CHECK(b.bound == 2 * d * (1 + 1 / (1 - d)));
    }
    CHECK(2 * Rational(1, 10) * (1 + 1 / (1 - Rational(1, 10))) == Rational(19, 45));
}

TEST_CASE("coupling variation bound") {
    const auto s1 = FiniteMetricSpace::discrete({"a", "b"});
    const auto s2 = FiniteMetricSpace::discrete({"c", "d"});
    auto idx = [](std::size_t x, std::size_t xp, std::size_t y, std::size_t yp) { return ((x * 2 + xp) * 2 + y) * 2 + yp; };
    // X = X′ and Y = Y′, independent uniform.
    std::vector<Rational> same(16, Rational(0));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) same[idx(x, x, y, y)] = Rational(1, 4);
    const auto b0 = coupling_tv_bound_check(CouplingInstance(s1, s2, same));
    CHECK(b0.value == 0);
    CHECK(b0.bound == 0);

    // X differs from X′ with probability q, Y = Y′.
    const Rational q(1, 5);
    std::vector<Rational> w(16, Rational(0));
    for (std::size_t xp = 0; xp < 2; ++xp)
        for (std::size_t y = 0; y < 2; ++y) {
            w[idx(xp, xp, y, y)] += Rational(1, 4) * (1 - q);
            w[idx(1 - xp, xp, y, y)] += Rational(1, 4) * q;
        }
    const auto b1 = coupling_tv_bound_check(CouplingInstance(s1, s2, w));
    CHECK(b1.bound == 4 * q);
    CHECK(b1.holds);

    // Dependent primed pair is rejected.
    std::vector<Rational> bad(16, Rational(0));
    bad[idx(0, 0, 0, 0)] = bad[idx(1, 1, 1, 1)] = Rational(1, 2);
    CHECK_THROWS_AS(CouplingInstance(s1, s2, bad), InputError);

    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 100; ++rep) CHECK(coupling_tv_bound_check(random_coupling_instance(rng, 3, 3)).holds);
}

TEST_CASE("gaussian family check") {
    std::vector<GaussianBlock> zero, decaying, constant;
    for (unsigned n = 1; n <= 100; ++n) {
        zero.push_back(*gaussian_sequence_family(n, 0.0, 1.0).gaussian);
        decaying.push_back(*gaussian_sequence_family(n, 1.0, 1.0).gaussian);
        constant.push_back(*gaussian_sequence_family(n, 0.5, 0.0).gaussian);
    }
    const auto r0 = gaussian_family_check(zero, 10.0, 0.05);
    CHECK(r0.bounded);
    CHECK(r0.cross_vanishes);
    for (double v : r0.cf_trace) CHECK(v == 0.0);
    CHECK(gaussian_family_check(decaying, 10.0, 0.05).cross_vanishes);
    CHECK_FALSE(gaussian_family_check(constant, 10.0, 0.05).cross_vanishes);
    CHECK_FALSE(gaussian_family_check(zero, 0.5, 0.05).bounded);
    auto bad = zero;
    bad[3].cov12(0, 0) = 2.0;
    CHECK_THROWS_AS(gaussian_family_check(bad, 10.0, 0.05), InputError);
}
