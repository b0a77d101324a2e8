#include <doctest.h>

#include <random>
#include <sstream>

#include "aind/errors.hpp"
#include "aind/families.hpp"
#include "aind/io.hpp"
#include "aind/measure.hpp"
#include "aind/oracles.hpp"

using namespace aind;

namespace {

SpacePtr unit_line(std::size_t n, const std::string& prefix = "p") {
    std::vector<std::string> labels;
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(prefix + std::to_string(i));
        xs.push_back(static_cast<double>(i));
    }
    return FiniteMetricSpace::line(labels, xs);
}

std::vector<Rational> uniform(std::size_t n) { return std::vector<Rational>(n, Rational(1, n)); }

}  // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("-2") == -2);
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(Rational(4)) == "4");
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK(from_double(0.375) == Rational(3, 8));
}

TEST_CASE("metric space validation") {
    DenseMatrix<double> d(3, 3, 0.0);
    d(0, 1) = d(1, 0) = 1;
    d(1, 2) = d(2, 1) = 1;
    d(0, 2) = d(2, 0) = 3;
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b", "c"}, d), InputError);
    CHECK_NOTHROW(FiniteMetricSpace::from_matrix({"a", "b", "c"}, d, std::nullopt, CoordNorm::Euclidean, false));
    d(0, 2) = d(2, 0) = 2;
    CHECK_NOTHROW(FiniteMetricSpace::from_matrix({"a", "b", "c"}, d));
    d(0, 2) = 1.5;
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b", "c"}, d), InputError);
    DenseMatrix<double> z(2, 2, 0.0);
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b"}, z), InputError);
    CHECK_THROWS_AS(FiniteMetricSpace::discrete({}), InputError);
}

TEST_CASE("product spaces") {
    const auto one = FiniteMetricSpace::discrete({"x"});
    const auto p1 = product_space(one, one, ProductMetricKind::Sum);
    CHECK(p1->size() == 1);
    CHECK(p1->dist(0, 0) == 0.0);

    const auto s = unit_line(2);
    const auto sum = product_space(s, s, ProductMetricKind::Sum);
    const auto mx = product_space(s, s, ProductMetricKind::Max);
    REQUIRE(sum->size() == 4);
    CHECK(sum->dist(0, 3) == 2.0);
    CHECK(mx->dist(0, 3) == 1.0);

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_planar_space(rng, 4, "a"), b = random_planar_space(rng, 3, "b");
        const auto ps = product_space(a, b, ProductMetricKind::Sum), pm = product_space(a, b, ProductMetricKind::Max);
        for (std::size_t i = 0; i < ps->size(); ++i)
            for (std::size_t k = 0; k < ps->size(); ++k) {
                CHECK(pm->dist(i, k) <= ps->dist(i, k) + 1e-12);
                CHECK(ps->dist(i, k) <= 2 * pm->dist(i, k) + 1e-12);
            }
    }
}

TEST_CASE("measures validate their weights") {
    const auto s = unit_line(2);
    CHECK_THROWS_AS(DiscreteMeasure(s, {Rational(1, 2), Rational(1, 3)}), InputError);
    CHECK_THROWS_AS(DiscreteMeasure(s, {Rational(3, 2), Rational(-1, 2)}), InputError);
    CHECK_THROWS_AS(DiscreteMeasure(s, {Rational(1)}), InputError);
    const auto w = normalize_float_weights(std::vector<double>{0.1, 0.2, 0.7});
    Rational total = 0;
    for (const auto& x : w) total += x;
    CHECK(total == 1);
    CHECK_THROWS_AS(normalize_float_weights(std::vector<double>{0.1, 0.2}), InputError);
}

TEST_CASE("marginals and product measures") {
    const auto s = unit_line(2);
    const DiscreteMeasure u(s, uniform(2));
    const auto pj = product_measure(u, u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(pj(i, j) == Rational(1, 4));

    const DiscreteMeasure dx(s, {Rational(0), Rational(1)}), dy(s, {Rational(1), Rational(0)});
    const auto dd = product_measure(dx, dy);
    CHECK(dd(1, 0) == 1);

    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = random_planar_space(rng, 1 + rep % 5, "a"), b = random_planar_space(rng, 1 + rep % 4, "b");
        const auto m1 = oracle::random_measure(rng, a), m2 = oracle::random_measure(rng, b);
        const auto [r1, r2] = marginals(product_measure(m1, m2));
        CHECK(r1 == m1);
        CHECK(r2 == m2);
        const auto dep = dependence_matrix(product_measure(m1, m2));
        for (const auto& e : dep.entries().data()) CHECK(e == 0);
    }

    const auto f = binary_coding_family(3);
    const auto [p, q] = marginals(*f.joint);
    CHECK(p.size() == 6);
    for (const auto& x : p.weights()) CHECK(x == Rational(1, 6));
    CHECK(q.size() == 8);
    for (const auto& x : q.weights()) CHECK(x == Rational(1, 8));
}

TEST_CASE("dependence matrix rows and columns sum to zero") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const auto j = random_joint(rng, 1 + rep % 6, 1 + (rep / 6) % 6);
        const auto d = dependence_matrix(j);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            Rational r = 0;
            for (std::size_t k = 0; k < d.cols(); ++k) r += d(i, k);
            CHECK(r == 0);
        }
    }
    const auto b = dependence_matrix(*binary_coding_family(3).joint);
    for (const auto& e : b.entries().data()) CHECK(abs(e) == Rational(1, 48));

    const auto bern = bernoulli_perturbation_family(2);
    const auto& bj = *bern.joint;
    const auto bd = dependence_matrix(bj);
    CHECK(bd(*bj.space1()->find("1"), *bj.space2()->find("1")) == Rational(-1, 8));
}

TEST_CASE("pushforward") {
    const auto s = unit_line(2);
    const DiscreteMeasure u(s, uniform(2));
    const std::size_t id[] = {0, 1};
    CHECK(pushforward(u, id, s) == u);
    const auto one = FiniteMetricSpace::discrete({"z"});
    const std::size_t parity[] = {0, 0};
    const auto collapsed = pushforward(u, parity, one);
    CHECK(collapsed[0] == 1);
    const std::size_t bad[] = {0, 2};
    CHECK_THROWS_AS(pushforward(u, bad, s), InputError);

    std::mt19937_64 rng(13);
    const auto j = random_joint(rng, 3, 4);
    const std::vector<std::size_t> i1 = {0, 1, 2}, i2 = {0, 1, 2, 3};
    CHECK(pushforward_joint(j, i1, j.space1(), i2, j.space2()) == j);
    const std::vector<std::size_t> c1(3, 0), c2(4, 0);
    const auto dj = pushforward_joint(j, c1, one, c2, one);
    CHECK(dj(0, 0) == 1);
    CHECK_THROWS_AS(pushforward_joint(j, c1, one, std::vector<std::size_t>(3, 0), one), InputError);
}

TEST_CASE("flatten matches the product space layout") {
    const auto f = bernoulli_perturbation_family(3);
    const auto& j = *f.joint;
    const auto ps = product_space(j.space1(), j.space2(), ProductMetricKind::Sum);
    const auto flat = flatten(j, ps);
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b) CHECK(flat[a * j.cols() + b] == j(a, b));
    const auto other = product_space(j.space2(), j.space1(), ProductMetricKind::Sum);
    CHECK_THROWS_AS(flatten(j, other), InputError);
}

TEST_CASE("json round trip") {
    for (unsigned n : {1u, 3u}) {
        const auto f = binary_coding_family(n);
        std::stringstream ss;
        write_family_json(ss, f);
        const auto back = read_joint_json(ss);
        CHECK(back.joint == *f.joint);
        CHECK(back.family == "binary_coding");
        CHECK(back.n == n);
    }
    const auto b = bernoulli_perturbation_family(4);
    std::stringstream ss;
    write_family_json(ss, b);
    const auto back = read_joint_json(ss);
    CHECK(back.joint == *b.joint);
    REQUIRE(back.rectangle);
    CHECK(back.rectangle->a == b.rectangle->a);
    CHECK(back.rectangle->b == b.rectangle->b);

    std::mt19937_64 rng(17);
    const auto m = oracle::random_measure(rng, random_planar_space(rng, 5, "q"));
    std::stringstream ms;
    write_measure_json(ms, m);
    CHECK(read_measure_json(ms) == m);
}

TEST_CASE("json input errors") {
    auto load = [](const std::string& text) {
        std::istringstream is(text);
        return read_joint_json(is);
    };
    CHECK_THROWS_AS(load("{"), InputError);
    CHECK_THROWS_AS(load(R"({"space1":{"labels":["a"]},"space2":{"labels":["b"]},"weights":[["1/2"]]})"), InputError);
    CHECK_THROWS_AS(load(R"({"space1":{"labels":["a","b"],"dist":[[0,1],[2,0]]},"space2":{"labels":["b"]},"weights":[["1/2"],["1/2"]]})"),
                    InputError);
    const auto ok = load(R"({"space1":{"labels":["a","b"],"dist":[[0,1],[1,0]]},"space2":{"labels":["b"],"dist":[[0]]},"weights":[[0.25],[0.75]]})");
    CHECK(ok.joint(1, 0) == Rational(3, 4));
}
