#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "aind/analysis.hpp"
#include "aind/errors.hpp"
#include "aind/io.hpp"
#include "aind/verify.hpp"

namespace {

using namespace aind;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, std::string> out;
    for (const auto& p : kv) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("--param expects key=value, got " + p);
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

MetricName metric_or_throw(const std::string& k) {
    const auto m = parse_metric_key(k);
    if (!m) throw InputError("unknown metric '" + k + "'");
    return *m;
}

FamilyTemplate family_template(const std::string& name, const std::vector<std::string>& kv) {
    const auto f = parse_family_key(name);
    if (!f) throw InputError("unknown family '" + name + "'");
    FamilyTemplate t;
    t.family = *f;
    t.params = parse_params(kv);
    return t;
}

std::vector<MetricName> parse_metrics(const std::string& s) {
    std::vector<MetricName> out;
    for (const auto& k : split_list(s)) out.push_back(metric_or_throw(k));
    if (out.empty()) throw InputError("--select needs at least one metric");
    return out;
}

ProductMetricKind parse_kind(const std::string& s) {
    if (s == "sum") return ProductMetricKind::Sum;
    if (s == "max") return ProductMetricKind::Max;
    throw InputError("--product-metric must be sum or max, got " + s);
}

std::map<MetricName, SearchMode> parse_modes(const std::string& heuristic, const std::vector<MetricName>& metrics,
                                             const std::string& mode) {
    std::map<MetricName, SearchMode> out;
    if (mode != "exact" && mode != "heuristic") throw InputError("--mode must be exact or heuristic");
    for (auto m : metrics) out[m] = mode == "heuristic" ? SearchMode::Heuristic : SearchMode::Exact;
    for (const auto& k : split_list(heuristic)) out[metric_or_throw(k)] = SearchMode::Heuristic;
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot write " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot read " + path);
    return is;
}

void print_verdicts(const DecayReport& r) {
    for (const auto& v : r.verdicts) {
        std::cout << v.condition << " " << metric_key(v.metric) << " " << verdict_key(v.fit.verdict)
                  << " power_exponent=" << format_double(v.fit.power_exponent)
                  << " power_r2=" << format_double(v.fit.power_r2)
                  << " exp_ratio=" << format_double(v.fit.exp_ratio) << " exp_r2=" << format_double(v.fit.exp_r2);
        if (!v.note.empty()) std::cout << " (" << v.note << ")";
        std::cout << '\n';
    }
}

// Series for classify: a sweep report, plot data (metric,n,value) or plain n,value.
std::map<std::string, std::vector<std::pair<double, double>>> read_series(const std::string& path) {
    auto is = open_in(path);
    std::string header;
    std::getline(is, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::map<std::string, std::vector<std::pair<double, double>>> out;
    auto number = [](const std::string& s) {
        if (s.find('/') != std::string::npos) return to_double(parse_rational(s));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) throw InputError("not a number: '" + s + "'");
        return v;
    };
    if (header == kCsvHeader) {
        is.seekg(0);
        for (const auto& row : read_csv(is)) {
            if (row.value.empty()) continue;
            out[row.family + " " + row.metric].emplace_back(number(row.n), number(row.value));
        }
        return out;
    }
    const auto cols = split_list(header);
    const bool keyed = cols.size() == 3;
    if (!(keyed && cols[0] == "metric") && !(cols.size() == 2 && cols[0] == "n"))
        throw InputError("classify input needs header '" + std::string(kCsvHeader) + "', 'metric,n,value' or 'n,value'");
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_list(line);
        if (f.size() != cols.size()) throw InputError("malformed series line: " + line);
        if (keyed)
            out[f[0]].emplace_back(number(f[1]), number(f[2]));
        else
            out["series"].emplace_back(number(f[0]), number(f[1]));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dependence functionals for finite joint measures"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Write a family instance as JSON");
    std::string family;
    unsigned n = 1;
    std::vector<std::string> params;
    std::string out_path;
    gen->add_option("--family", family, "binary_coding, bernoulli, markov or gaussian")->required();
    gen->add_option("--n", n, "family index")->required();
    gen->add_option("--param", params, "family parameter key=value");
    gen->add_option("--out", out_path, "output JSON (stdout when omitted)");

    auto* metrics = app.add_subcommand("metrics", "Compute metrics of a joint JSON file against its product");
    std::string joint_path, select = "variation,alpha,prokhorov,bl", kind = "sum", mode = "exact", heuristic;
    bool no_triangle = false;
    metrics->add_option("--joint", joint_path, "joint measure JSON")->required();
    metrics->add_option("--select", select, "comma-separated metric keys");
    metrics->add_option("--product-metric", kind, "sum or max");
    metrics->add_option("--mode", mode, "exact or heuristic for every metric");
    metrics->add_option("--heuristic", heuristic, "metrics to run heuristically");
    metrics->add_flag("--no-triangle-check", no_triangle, "skip the triangle check on dist matrices");
    metrics->add_option("--out", out_path, "output CSV (stdout when omitted)");

    auto* sw = app.add_subcommand("sweep", "Sweep a family over n and classify decay");
    unsigned n_from = 1, n_to = 4;
    std::string plot_path, md_path;
    DecayThresholds th;
    sw->add_option("--family", family, "family name")->required();
    sw->add_option("--n-from", n_from, "first n")->required();
    sw->add_option("--n-to", n_to, "last n")->required();
    sw->add_option("--param", params, "family parameter key=value");
    sw->add_option("--select", select, "comma-separated metric keys");
    sw->add_option("--product-metric", kind, "sum or max");
    sw->add_option("--mode", mode, "exact or heuristic for every metric");
    sw->add_option("--heuristic", heuristic, "metrics to run heuristically");
    sw->add_option("--out", out_path, "report CSV (stdout when omitted)");
    sw->add_option("--emit-plot-data", plot_path, "metric,n,value CSV");
    sw->add_option("--markdown", md_path, "markdown summary");
    sw->add_option("--converge-fraction", th.converge_fraction);
    sw->add_option("--stall-fraction", th.stall_fraction);
    sw->add_option("--min-fit", th.min_fit);

    auto* ver = app.add_subcommand("verify", "Run the acceptance suite");
    VerifyOptions vopt;
    ver->add_option("--filter", vopt.filter, "only criteria whose line contains this");
    ver->add_option("--alpha-n-max", vopt.alpha_n_max, "upper n of the exact alpha criterion");

    auto* cls = app.add_subcommand("classify", "Classify decay of series in a CSV file");
    std::string in_path;
    cls->add_option("--in", in_path, "sweep report, metric,n,value or n,value CSV")->required();
    cls->add_option("--converge-fraction", th.converge_fraction);
    cls->add_option("--stall-fraction", th.stall_fraction);
    cls->add_option("--min-fit", th.min_fit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            const auto inst = make_family(family_template(family, params), n);
            if (out_path.empty()) {
                write_family_json(std::cout, inst);
            } else {
                auto os = open_out(out_path);
                write_family_json(os, inst);
            }
            return 0;
        }
        if (*metrics) {
            auto is = open_in(joint_path);
            auto loaded = read_joint_json(is, {.check_triangle = !no_triangle});
            const auto names = parse_metrics(select);
            const auto modes = parse_modes(heuristic, names, mode);
            FamilyInstance inst;
            inst.n = loaded.n.value_or(0);
            inst.joint = std::move(loaded.joint);
            inst.rectangle = loaded.rectangle;
            DecayReport rep;
            rep.family = loaded.family.empty() ? "input" : loaded.family;
            rep.n_values = {inst.n};
            int status = 0;
            for (auto m : names) {
                SweepCell cell{inst.n, m, modes.at(m), std::nullopt, ""};
                try {
                    cell.value = evaluate_metric(inst, m, cell.mode, parse_kind(kind), inst.rectangle);
                } catch (const CapabilityError& e) {
                    cell.error = std::string("capability: ") + e.what();
                    status = 2;
                } catch (const InputError& e) {
                    cell.error = std::string("input: ") + e.what();
                    if (status == 0) status = 1;
                }
                rep.cells.push_back(std::move(cell));
            }
            if (out_path.empty()) {
                write_csv(std::cout, report_rows(rep));
            } else {
                auto os = open_out(out_path);
                write_csv(os, report_rows(rep));
            }
            for (const auto& c : rep.cells)
                if (!c.error.empty()) std::cerr << metric_key(c.metric) << ": " << c.error << '\n';
            return status;
        }
        if (*sw) {
            if (n_to < n_from) throw InputError("--n-to must be at least --n-from");
            SweepSpec spec;
            spec.family = family_template(family, params);
            for (unsigned k = n_from; k <= n_to; ++k) spec.n_values.push_back(k);
            spec.metrics = parse_metrics(select);
            spec.product_kind = parse_kind(kind);
            spec.modes = parse_modes(heuristic, spec.metrics, mode);
            const auto rep = sweep(spec, th);
            if (out_path.empty()) {
                write_csv(std::cout, report_rows(rep));
            } else {
                auto os = open_out(out_path);
                write_csv(os, report_rows(rep));
            }
            if (!plot_path.empty()) {
                auto os = open_out(plot_path);
                write_plot_data(os, rep);
            }
            if (!md_path.empty()) {
                auto os = open_out(md_path);
                write_markdown(os, rep);
            }
            if (!out_path.empty()) print_verdicts(rep);
            return 0;
        }
        if (*ver) {
            const auto results = verify_paper(vopt);
            std::size_t passed = 0;
            for (const auto& r : results) {
                std::cout << format_result(r) << '\n';
                passed += r.passed;
            }
            std::cout << passed << "/" << results.size() << " criteria passed\n";
            return verify_exit_code(results);
        }
        if (*cls) {
            for (const auto& [key, series] : read_series(in_path)) {
                const auto fit = classify_decay(series, th);
                std::cout << key << " " << verdict_key(fit.verdict) << " model=" << (fit.model.empty() ? "-" : fit.model)
                          << " power_exponent=" << format_double(fit.power_exponent)
                          << " power_r2=" << format_double(fit.power_r2) << " exp_ratio=" << format_double(fit.exp_ratio)
                          << " exp_r2=" << format_double(fit.exp_r2) << " points=" << fit.points << '\n';
            }
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
