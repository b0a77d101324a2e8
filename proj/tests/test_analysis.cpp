#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aind/analysis.hpp"
#include "aind/errors.hpp"
#include "aind/verify.hpp"

using namespace aind;

namespace {

std::vector<std::pair<double, double>> series(unsigned from, unsigned to, double (*f)(double)) {
    std::vector<std::pair<double, double>> out;
    for (unsigned n = from; n <= to; ++n) out.emplace_back(n, f(n));
    return out;
}

const ConditionVerdict& verdict(const DecayReport& r, const std::string& cond) {
    for (const auto& v : r.verdicts)
        if (v.condition == cond) return v;
    FAIL("missing verdict " << cond);
    return r.verdicts.front();
}

SweepSpec spec_for(FamilyName family, unsigned from, unsigned to, std::vector<MetricName> metrics) {
    SweepSpec s;
    s.family.family = family;
    for (unsigned n = from; n <= to; ++n) s.n_values.push_back(n);
    s.metrics = std::move(metrics);
    return s;
}

}  // namespace

TEST_CASE("classifier examples") {
    const auto inv = classify_decay(series(1, 12, [](double n) { return 1.0 / n; }));
    CHECK(inv.verdict == Verdict::Converges);
    CHECK(inv.power_exponent == doctest::Approx(-1.0));
    CHECK(classify_decay(series(1, 12, [](double) { return 0.125; })).verdict == Verdict::Stalls);
    CHECK(classify_decay(series(1, 12, [](double n) { return std::fmod(n, 2.0) == 0 ? 0.9 : 0.1; })).verdict ==
          Verdict::Inconclusive);
    const auto geo = classify_decay(series(1, 15, [](double n) { return std::pow(0.5, n); }));
    CHECK(geo.verdict == Verdict::Converges);
    CHECK(geo.exp_ratio == doctest::Approx(0.5));
    const auto zeros = classify_decay({{1, 0.3}, {2, 0.1}, {3, 0.0}, {4, 0.0}});
    CHECK(zeros.verdict == Verdict::Converges);
    CHECK(zeros.model == "zero");
    CHECK_THROWS_AS(classify_decay({{1, 1.0}, {2, 0.5}, {3, 0.3}}), InputError);
    CHECK_THROWS_AS(classify_decay({{1, 1.0}, {3, 0.5}, {2, 0.3}, {4, 0.2}}), InputError);

    DecayThresholds strict;
    strict.converge_fraction = 0.01;
    CHECK(classify_decay(series(1, 12, [](double n) { return 1.0 / n; }), strict).verdict != Verdict::Converges);
}

TEST_CASE("bernoulli sweep separates AI-1 from AI-2") {
    const auto rep = sweep(spec_for(FamilyName::BernoulliPerturbation, 2, 20,
                                    {MetricName::Prokhorov, MetricName::RectangleGap}));
    CHECK(verdict(rep, "AI-1").fit.verdict == Verdict::Converges);
    CHECK(verdict(rep, "AI-1").metric == MetricName::Prokhorov);
    CHECK(verdict(rep, "AI-2").fit.verdict == Verdict::Stalls);
    for (const auto& c : rep.cells)
        if (c.metric == MetricName::RectangleGap) CHECK(*c.value->exact_value == Rational(1, 8));
}

TEST_CASE("binary coding sweep separates AI-3 from AI-1") {
    const auto rep = sweep(spec_for(FamilyName::BinaryCoding, 1, 4,
                                    {MetricName::Alpha, MetricName::BoundedLipschitz, MetricName::CovSup}));
    CHECK(verdict(rep, "AI-3").fit.verdict == Verdict::Converges);
    CHECK(verdict(rep, "AI-0").fit.verdict == Verdict::Converges);
    CHECK(verdict(rep, "AI-1").metric == MetricName::BoundedLipschitz);
    CHECK(verdict(rep, "AI-1").fit.verdict == Verdict::Stalls);

    const auto pr = sweep(spec_for(FamilyName::BinaryCoding, 1, 4, {MetricName::Prokhorov, MetricName::Variation}));
    CHECK(verdict(pr, "AI-1").fit.verdict == Verdict::Stalls);
    CHECK(verdict(pr, "AI-4").fit.verdict == Verdict::Stalls);
}

TEST_CASE("markov sweep converges everywhere at ratio one half") {
    auto spec = spec_for(FamilyName::MarkovShift, 1, 20,
                         {MetricName::Alpha, MetricName::Variation, MetricName::Prokhorov, MetricName::CovSup,
                          MetricName::RectangleGap});
    spec.family.params["p"] = "0.25";
    const auto rep = sweep(spec);
    REQUIRE(rep.verdicts.size() == 5);
    for (const auto& v : rep.verdicts) {
        CHECK(v.fit.verdict == Verdict::Converges);
        CHECK(v.fit.exp_ratio == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("sweep marks cells past a cutoff unavailable") {
    const auto rep = sweep(spec_for(FamilyName::BinaryCoding, 4, 6, {MetricName::BoundedLipschitz, MetricName::Variation}));
    CHECK(rep.cells.size() == 6);
    std::size_t unavailable = 0;
    for (const auto& c : rep.cells)
        if (!c.value) {
            ++unavailable;
            CHECK(c.error.rfind("capability:", 0) == 0);
            CHECK(c.n == 6);
        }
    CHECK(unavailable == 1);
    const auto rows = report_rows(rep);
    CHECK(rows.size() == 6);

    CHECK_THROWS_AS(sweep(spec_for(FamilyName::BinaryCoding, 4, 3, {MetricName::Alpha})), InputError);
    auto dup = spec_for(FamilyName::BinaryCoding, 1, 4, {MetricName::Alpha});
    dup.n_values = {1, 1, 2, 3};
    CHECK_THROWS_AS(sweep(dup), InputError);
}

TEST_CASE("sweep output is deterministic and csv round-trips") {
    auto spec = spec_for(FamilyName::BernoulliPerturbation, 2, 6,
                         {MetricName::Alpha, MetricName::Prokhorov, MetricName::BoundedLipschitz, MetricName::CovSup,
                          MetricName::BlProduct});
    spec.modes[MetricName::Alpha] = SearchMode::Heuristic;
    std::ostringstream a, b;
    write_csv(a, report_rows(sweep(spec)));
    write_csv(b, report_rows(sweep(spec)));
    CHECK(a.str() == b.str());

    const auto rep = sweep(spec);
    std::istringstream in(a.str());
    const auto rows = read_csv(in);
    REQUIRE(rows.size() == rep.cells.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& v = *rep.cells[k].value;
        if (v.exact_value)
            CHECK(parse_rational(rows[k].value) == *v.exact_value);
        else
            CHECK(std::fabs(std::stod(rows[k].value) - v.value) <= 1e-12);
        CHECK(rows[k].mode == (rep.cells[k].mode == SearchMode::Exact ? "exact" : "heuristic"));
    }
    // Cells are ordered by n, then metric key.
    for (std::size_t k = 1; k < rep.cells.size(); ++k) {
        const auto& p = rep.cells[k - 1];
        const auto& c = rep.cells[k];
        CHECK((p.n < c.n || (p.n == c.n && metric_key(p.metric) < metric_key(c.metric))));
    }
}

TEST_CASE("csv quoting") {
    std::vector<CsvRow> rows = {{"fam", "1", "alpha", "1/2", "true", "exact", "rect A={0 1} B={2}"},
                                {"fam", "2", "bl", "", "false", "exact", "unavailable: capability: needs \"x\", y"}};
    std::ostringstream os;
    write_csv(os, rows);
    std::istringstream is(os.str());
    const auto back = read_csv(is);
    REQUIRE(back.size() == 2);
    CHECK(back[1].certificate_ref == rows[1].certificate_ref);
    CHECK(back[0].value == "1/2");
    std::istringstream wrong("a,b\n1,2\n");
    CHECK_THROWS_AS(read_csv(wrong), InputError);
}

TEST_CASE("family templates") {
    FamilyTemplate t;
    t.family = FamilyName::MarkovShift;
    t.params["transition"] = "1/2 1/2;1/4 3/4";
    t.params["stationary"] = "1/3 2/3";
    const auto inst = make_family(t, 2);
    CHECK(inst.joint->rows() == 2);
    t.params["width"] = "2";
    CHECK(make_family(t, 1).joint->rows() == 4);
    t.params["colour"] = "red";
    CHECK_THROWS_AS(make_family(t, 1), InputError);

    FamilyTemplate g;
    g.family = FamilyName::GaussianSeq;
    g.params["r0"] = "0.5";
    const auto gi = make_family(g, 2);
    REQUIRE(gi.gaussian);
    CHECK(gi.gaussian->cov12(0, 0) == doctest::Approx(0.25));
    CHECK(evaluate_metric(gi, MetricName::CfGap, SearchMode::Exact, ProductMetricKind::Sum).value > 0);
    CHECK_THROWS_AS(evaluate_metric(gi, MetricName::Alpha, SearchMode::Exact, ProductMetricKind::Sum), CapabilityError);
}

TEST_CASE("report writers") {
    const auto rep = sweep(spec_for(FamilyName::BernoulliPerturbation, 2, 5, {MetricName::Prokhorov, MetricName::RectangleGap}));
    std::ostringstream md, plot;
    write_markdown(md, rep);
    write_plot_data(plot, rep);
    CHECK(md.str().find("| AI-2 | rectangle | STALLS |") != std::string::npos);
    CHECK(plot.str().rfind("metric,n,value\n", 0) == 0);
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("verification suite") {
    const auto results = verify_paper();
    CHECK(results.size() == 14);
    for (const auto& r : results) CHECK_MESSAGE(r.passed, format_result(r));
    CHECK(verify_exit_code(results) == 0);
    auto failed = results;
    failed[3].passed = false;
    CHECK(verify_exit_code(failed) == 3);

    VerifyOptions wide;
    wide.filter = "binary-coding-alpha";
    wide.alpha_n_max = 12;
    const auto w = verify_paper(wide);
    REQUIRE(w.size() == 1);
    CHECK_FALSE(w[0].passed);
    CHECK(w[0].detail.find("capability") != std::string::npos);
}
