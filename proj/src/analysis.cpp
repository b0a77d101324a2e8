#include "aind/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "aind/errors.hpp"

namespace aind {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
    std::vector<Rational> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(parse_rational(tok));
    return out;
}

const std::string& param_or(const std::map<std::string, std::string>& p, const std::string& key,
                            const std::string& fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void check_param_keys(const FamilyTemplate& t, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : t.params) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw InputError("family " + family_key(t.family) + " has no parameter '" + key + "'");
    }
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw InputError("cannot parse " + what + " '" + s + "'");
    return v;
}

}  // namespace

FamilyInstance make_family(const FamilyTemplate& tmpl, unsigned n) {
    FamilyInstance inst;
    switch (tmpl.family) {
        case FamilyName::BinaryCoding:
            check_param_keys(tmpl, {});
            inst = binary_coding_family(n);
            break;
        case FamilyName::BernoulliPerturbation:
            check_param_keys(tmpl, {});
            inst = bernoulli_perturbation_family(n);
            break;
        case FamilyName::MarkovShift: {
            check_param_keys(tmpl, {"p", "transition", "stationary", "width"});
            MarkovChain chain;
            if (tmpl.params.count("transition")) {
                if (tmpl.params.count("p")) throw InputError("markov: give either p or transition");
                const auto rows = split(tmpl.params.at("transition"), ';');
                std::vector<std::vector<Rational>> parsed;
                for (const auto& r : rows) parsed.push_back(parse_rational_list(r));
                chain.transition = DenseMatrix<Rational>(parsed.size(), parsed.size());
                for (std::size_t i = 0; i < parsed.size(); ++i) {
                    if (parsed[i].size() != parsed.size()) throw InputError("markov: transition matrix is not square");
                    for (std::size_t j = 0; j < parsed.size(); ++j) chain.transition(i, j) = parsed[i][j];
                }
                if (!tmpl.params.count("stationary")) throw InputError("markov: transition needs a stationary vector");
                chain.stationary = parse_rational_list(tmpl.params.at("stationary"));
            } else {
                if (tmpl.params.count("stationary")) throw InputError("markov: stationary given without transition");
                chain = symmetric_two_state_chain(parse_rational(param_or(tmpl.params, "p", "1/4")));
            }
            const auto width_text = param_or(tmpl.params, "width", "1");
            const int width = static_cast<int>(parse_double(width_text, "width"));
            if (width < 1 || width > 3 || std::to_string(width) != width_text)
                throw InputError("markov: width must be 1, 2 or 3");
            if (width > 1) chain = block_chain(chain, static_cast<unsigned>(width));
            inst = markov_shift_family(chain.transition, chain.stationary, n, chain.labels);
            break;
        }
        case FamilyName::GaussianSeq: {
            check_param_keys(tmpl, {"r0", "decay"});
            inst = gaussian_sequence_family(n, parse_double(param_or(tmpl.params, "r0", "1"), "r0"),
                                            parse_double(param_or(tmpl.params, "decay", "1"), "decay"));
            break;
        }
    }
    inst.params = tmpl.params;
    return inst;
}

std::string verdict_key(Verdict v) {
    switch (v) {
        case Verdict::Converges: return "CONVERGES";
        case Verdict::Stalls: return "STALLS";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

namespace {

struct LineFit {
    double slope = 0.0;
    double r2 = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    const std::size_t n = x.size();
    if (n < 2) return f;
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    f.ok = true;
    const double ss_res = std::max(0.0, syy - f.slope * sxy);
    f.r2 = syy <= 1e-300 ? 1.0 : 1.0 - ss_res / syy;
    return f;
}

}  // namespace

DecayFit classify_decay(const std::vector<std::pair<double, double>>& series, const DecayThresholds& th) {
    if (series.size() < std::max<std::size_t>(th.min_points, 2))
        throw InputError("classify_decay needs at least " + std::to_string(th.min_points) + " points");
    for (std::size_t k = 1; k < series.size(); ++k)
        if (!(series[k].first > series[k - 1].first)) throw InputError("classify_decay: n must be strictly increasing");
    for (const auto& [n, v] : series)
        if (!std::isfinite(n) || !std::isfinite(v)) throw InputError("classify_decay: non-finite point");

    DecayFit fit;
    fit.points = series.size();
    std::vector<double> ln_n, lin_n, ln_v_pow, ln_v_exp;
    double max = 0.0;
    for (const auto& [n, v] : series) {
        max = std::max(max, v);
        if (v <= 0.0) continue;
        lin_n.push_back(n);
        ln_v_exp.push_back(std::log(v));
        if (n > 0.0) {
            ln_n.push_back(std::log(n));
            ln_v_pow.push_back(std::log(v));
        }
    }
    const LineFit pw = fit_line(ln_n, ln_v_pow);
    const LineFit ex = fit_line(lin_n, ln_v_exp);
    fit.power_exponent = pw.slope;
    fit.power_r2 = pw.ok ? pw.r2 : 0.0;
    fit.exp_ratio = ex.ok ? std::exp(ex.slope) : 0.0;
    fit.exp_r2 = ex.ok ? ex.r2 : 0.0;

    const double last = series.back().second;
    if (last <= 0.0) {
        fit.verdict = Verdict::Converges;
        fit.model = "zero";
        return fit;
    }
    const bool pw_good = pw.ok && pw.slope < 0.0 && pw.r2 >= th.min_fit;
    const bool ex_good = ex.ok && ex.slope < 0.0 && ex.r2 >= th.min_fit;
    if (last < th.converge_fraction * max && (pw_good || ex_good)) {
        fit.verdict = Verdict::Converges;
        if (pw_good && ex_good)
            fit.model = ex.r2 > pw.r2 ? "exponential" : "power";
        else
            fit.model = pw_good ? "power" : "exponential";
        return fit;
    }
    bool holds = true;
    for (std::size_t k = series.size() / 2; k < series.size(); ++k)
        holds = holds && series[k].second >= th.stall_fraction * max;
    fit.verdict = holds ? Verdict::Stalls : Verdict::Inconclusive;
    return fit;
}

std::optional<std::string> condition_of(MetricName m) {
    switch (m) {
        case MetricName::Variation:
        case MetricName::BetaPartition: return "AI-4";
        case MetricName::Alpha: return "AI-3";
        case MetricName::RectangleGap: return "AI-2";
        case MetricName::Prokhorov:
        case MetricName::BoundedLipschitz: return "AI-1";
        case MetricName::CovSup: return "AI-0";
        default: return std::nullopt;
    }
}

MetricValue evaluate_metric(const FamilyInstance& inst, MetricName metric, SearchMode mode, ProductMetricKind kind,
                            const std::optional<RectangleCertificate>& rectangle) {
    if (!inst.joint) {
        if (metric != MetricName::CfGap || !inst.gaussian)
            throw CapabilityError(metric_key(metric) + " needs a finite joint measure");
        const auto rep = gaussian_family_check({*inst.gaussian}, std::numeric_limits<double>::infinity(), 0.0);
        MetricValue mv;
        mv.name = MetricName::CfGap;
        mv.value = rep.cf_trace.front();
        return mv;
    }
    const JointMeasure& j = *inst.joint;
    switch (metric) {
        case MetricName::Variation: return variation_norm(dependence_matrix(j));
        case MetricName::Alpha: return alpha_coefficient(j, mode);
        case MetricName::BetaPartition: return beta_partition(j, std::max(j.rows(), j.cols()));
        case MetricName::CovSup: return cov_sup_pm1(j, mode);
        case MetricName::Prokhorov: return prokhorov_to_product_upper(j, kind);
        case MetricName::BoundedLipschitz: return bl_to_product(j, kind);
        case MetricName::CfGap: return cf_gap_sweep(j);
        case MetricName::BlProduct: return bl_product_sup_heuristic(j);
        case MetricName::RectangleGap: {
            const auto& rect = rectangle ? rectangle : inst.rectangle;
            if (!rect) throw InputError("no rectangle declared for the rectangle gap");
            for (auto a : rect->a)
                if (a >= j.rows()) throw InputError("rectangle index outside space1");
            for (auto b : rect->b)
                if (b >= j.cols()) throw InputError("rectangle index outside space2");
            MetricValue mv;
            mv.name = MetricName::RectangleGap;
            mv.exact = true;
            mv.exact_value = abs(rectangle_gap(j, rect->a, rect->b));
            mv.value = to_double(*mv.exact_value);
            mv.certificate = *rect;
            return mv;
        }
    }
    throw InputError("unknown metric");
}

DecayReport sweep(const SweepSpec& spec, const DecayThresholds& thresholds) {
    if (spec.n_values.empty()) throw InputError("sweep needs at least one n");
    for (std::size_t k = 1; k < spec.n_values.size(); ++k)
        if (spec.n_values[k] <= spec.n_values[k - 1]) throw InputError("sweep n values must be strictly increasing");
    if (spec.metrics.empty()) throw InputError("sweep needs at least one metric");

    std::vector<MetricName> metrics = spec.metrics;
    std::sort(metrics.begin(), metrics.end(),
              [](MetricName a, MetricName b) { return metric_key(a) < metric_key(b); });
    metrics.erase(std::unique(metrics.begin(), metrics.end()), metrics.end());

    DecayReport report;
    report.family = family_key(spec.family.family);
    report.n_values = spec.n_values;
    for (unsigned n : spec.n_values) {
        std::optional<FamilyInstance> inst;
        std::string family_error;
        try {
            inst = make_family(spec.family, n);
        } catch (const CapabilityError& e) {
            family_error = std::string("capability: ") + e.what();
        } catch (const InputError& e) {
            family_error = std::string("input: ") + e.what();
        }
        for (MetricName m : metrics) {
            SweepCell cell;
            cell.n = n;
            cell.metric = m;
            auto it = spec.modes.find(m);
            cell.mode = it == spec.modes.end() ? SearchMode::Exact : it->second;
            if (!inst) {
                cell.error = family_error;
            } else {
                try {
                    cell.value = evaluate_metric(*inst, m, cell.mode, spec.product_kind, spec.rectangle);
                } catch (const CapabilityError& e) {
                    cell.error = std::string("capability: ") + e.what();
                } catch (const InputError& e) {
                    cell.error = std::string("input: ") + e.what();
                } catch (const SolverError& e) {
                    cell.error = std::string("solver: ") + e.what();
                }
            }
            report.cells.push_back(std::move(cell));
        }
    }

    std::map<MetricName, std::string> fit_notes;
    for (MetricName m : metrics) {
        std::vector<std::pair<double, double>> series;
        for (const auto& c : report.cells)
            if (c.metric == m && c.value) series.emplace_back(static_cast<double>(c.n), c.value->value);
        try {
            report.metric_fits[m] = classify_decay(series, thresholds);
        } catch (const InputError& e) {
            DecayFit f;
            f.points = series.size();
            report.metric_fits[m] = f;
            fit_notes[m] = e.what();
        }
    }

    const std::pair<const char*, std::vector<MetricName>> conditions[] = {
        {"AI-0", {MetricName::CovSup}},
        {"AI-1", {MetricName::Prokhorov, MetricName::BoundedLipschitz}},
        {"AI-2", {MetricName::RectangleGap}},
        {"AI-3", {MetricName::Alpha}},
        {"AI-4", {MetricName::Variation, MetricName::BetaPartition}},
    };
    for (const auto& [cond, sources] : conditions) {
        for (MetricName m : sources) {
            auto it = report.metric_fits.find(m);
            if (it == report.metric_fits.end()) continue;
            ConditionVerdict v;
            v.condition = cond;
            v.metric = m;
            v.fit = it->second;
            if (fit_notes.count(m)) v.note = fit_notes[m];
            report.verdicts.push_back(std::move(v));
            break;
        }
    }
    return report;
}

// --- report formats -------------------------------------------------------------

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

namespace {

template <typename T>
std::string join_limited(const std::vector<T>& xs, std::size_t limit = 16) {
    std::string out;
    for (std::size_t k = 0; k < xs.size() && k < limit; ++k) {
        if (k) out += ' ';
        if constexpr (std::is_same_v<T, int>)
            out += xs[k] > 0 ? "+" : "-";
        else
            out += std::to_string(xs[k]);
    }
    if (xs.size() > limit) out += " ...(" + std::to_string(xs.size()) + ")";
    return out;
}

std::string sign_string(const std::vector<int>& s) {
    std::string out;
    for (std::size_t k = 0; k < s.size() && k < 64; ++k) out += s[k] > 0 ? '+' : '-';
    if (s.size() > 64) out += "...(" + std::to_string(s.size()) + ")";
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> parse_csv_line(std::istream& is, bool& got) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false, any = false;
    got = false;
    char c;
    while (is.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (is.peek() == '"') {
                    is.get(c);
                    cur += '"';
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw InputError("unterminated quoted CSV field");
    if (!any) return fields;
    got = true;
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

std::string certificate_ref(const Certificate& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, RectangleCertificate>) {
                return "rect A={" + join_limited(v.a) + "} B={" + join_limited(v.b) + "}";
            } else if constexpr (std::is_same_v<T, PartitionCertificate>) {
                return "partition " + join_limited(v.block1) + " | " + join_limited(v.block2);
            } else if constexpr (std::is_same_v<T, SignCertificate>) {
                return "signs f=" + sign_string(v.f) + " g=" + sign_string(v.g);
            } else if constexpr (std::is_same_v<T, CouplingCertificate>) {
                return std::string(v.upper_bound_to_product_set ? "coupling(upper) " : "coupling ") +
                       std::to_string(v.rows.size()) + "x" + std::to_string(v.cols.size()) +
                       " eps=" + format_double(v.epsilon);
            } else if constexpr (std::is_same_v<T, LipschitzCertificate>) {
                return "lipschitz h on " + std::to_string(v.points.size()) + " points";
            } else {
                return "product lipschitz f on " + std::to_string(v.f.size()) + ", g on " +
                       std::to_string(v.g.size()) + " points";
            }
        },
        c);
}

std::vector<CsvRow> report_rows(const DecayReport& r) {
    std::vector<CsvRow> rows;
    for (const auto& c : r.cells) {
        CsvRow row;
        row.family = r.family;
        row.n = std::to_string(c.n);
        row.metric = metric_key(c.metric);
        row.mode = c.mode == SearchMode::Exact ? "exact" : "heuristic";
        if (c.value) {
            row.value = c.value->exact_value ? to_string(*c.value->exact_value) : format_double(c.value->value);
            row.exact = c.value->exact ? "true" : "false";
            row.certificate_ref = certificate_ref(c.value->certificate);
        } else {
            row.exact = "false";
            row.certificate_ref = "unavailable: " + c.error;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << csv_field(r.family) << ',' << csv_field(r.n) << ',' << csv_field(r.metric) << ','
           << csv_field(r.value) << ',' << csv_field(r.exact) << ',' << csv_field(r.mode) << ','
           << csv_field(r.certificate_ref) << '\n';
}

std::vector<CsvRow> read_csv(std::istream& is) {
    bool got = false;
    const auto header = parse_csv_line(is, got);
    if (!got) throw InputError("empty CSV input");
    std::string joined;
    for (std::size_t k = 0; k < header.size(); ++k) joined += (k ? "," : "") + header[k];
    if (joined != kCsvHeader) throw InputError("unexpected CSV header: " + joined);
    std::vector<CsvRow> rows;
    std::size_t line = 1;
    while (true) {
        auto f = parse_csv_line(is, got);
        ++line;
        if (!got) break;
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 7) throw InputError("CSV line " + std::to_string(line) + " has " + std::to_string(f.size()) + " fields");
        rows.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6]});
    }
    return rows;
}

void write_markdown(std::ostream& os, const DecayReport& r) {
    os << "# Sweep report: " << r.family << "\n\n";
    os << "n values: ";
    for (std::size_t k = 0; k < r.n_values.size(); ++k) os << (k ? ", " : "") << r.n_values[k];
    os << "\n\n## Verdicts\n\n";
    os << "| condition | metric | verdict | power exponent | power R² | exp ratio | exp R² | points |\n";
    os << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& v : r.verdicts) {
        os << "| " << v.condition << " | " << metric_key(v.metric) << " | " << verdict_key(v.fit.verdict) << " | "
           << format_double(v.fit.power_exponent) << " | " << format_double(v.fit.power_r2) << " | "
           << format_double(v.fit.exp_ratio) << " | " << format_double(v.fit.exp_r2) << " | " << v.fit.points
           << " |\n";
    }
    for (const auto& v : r.verdicts)
        if (!v.note.empty()) os << "\n" << v.condition << ": " << v.note << "\n";

    std::vector<MetricName> metrics;
    for (const auto& [m, f] : r.metric_fits) metrics.push_back(m);
    std::sort(metrics.begin(), metrics.end(),
              [](MetricName a, MetricName b) { return metric_key(a) < metric_key(b); });
    os << "\n## Values\n\n| n |";
    for (auto m : metrics) os << ' ' << metric_key(m) << " |";
    os << "\n|---|";
    for (std::size_t k = 0; k < metrics.size(); ++k) os << "---|";
    os << '\n';
    for (unsigned n : r.n_values) {
        os << "| " << n << " |";
        for (auto m : metrics) {
            std::string text = "n/a";
            for (const auto& c : r.cells)
                if (c.n == n && c.metric == m && c.value)
                    text = c.value->exact_value ? to_string(*c.value->exact_value) : format_double(c.value->value);
            os << ' ' << text << " |";
        }
        os << '\n';
    }
    bool header = false;
    for (const auto& c : r.cells) {
        if (c.value) continue;
        if (!header) {
            os << "\n## Unavailable cells\n\n";
            header = true;
        }
        os << "- n=" << c.n << ", " << metric_key(c.metric) << ": " << c.error << '\n';
    }
}

void write_plot_data(std::ostream& os, const DecayReport& r) {
    os << "metric,n,value\n";
    for (const auto& c : r.cells)
        if (c.value) os << metric_key(c.metric) << ',' << c.n << ',' << format_double(c.value->value) << '\n';
}

}  // namespace aind
