#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aind/families.hpp"
#include "aind/metrics.hpp"

namespace aind {

/// Family name plus its string parameters; instantiated per n.
///
/// Recognized parameters: markov takes `p` (two-state flip probability,
/// default 1/4) or `transition` ("a b;c d") with `stationary` ("x y"), and
/// `width` (block width 1..3); gaussian takes `r0` (default 1) and `decay`
/// (default 1). Unknown keys are an input error.
struct FamilyTemplate {
    FamilyName family = FamilyName::BinaryCoding;
    std::map<std::string, std::string> params;
};

FamilyInstance make_family(const FamilyTemplate& tmpl, unsigned n);

struct SweepSpec {
    FamilyTemplate family;
    std::vector<unsigned> n_values;
    std::vector<MetricName> metrics;
    ProductMetricKind product_kind = ProductMetricKind::Sum;
    std::map<MetricName, SearchMode> modes;  // default exact
    /// Rectangle for the AI-2 gap; the family default when absent.
    std::optional<RectangleCertificate> rectangle;
};

struct SweepCell {
    unsigned n = 0;
    MetricName metric = MetricName::Variation;
    SearchMode mode = SearchMode::Exact;
    std::optional<MetricValue> value;
    std::string error;  // "capability: ..." or "input: ..." when value is empty
};

enum class Verdict { Converges, Stalls, Inconclusive };

std::string verdict_key(Verdict v);  // "CONVERGES", "STALLS", "INCONCLUSIVE"

struct DecayThresholds {
    double converge_fraction = 0.5;  // last value below this fraction of the max
    double stall_fraction = 0.75;    // last half stays at or above this fraction of the max
    double min_fit = 0.8;
    std::size_t min_points = 4;
};

struct DecayFit {
    Verdict verdict = Verdict::Inconclusive;
    double power_exponent = 0.0;  // slope of log value against log n
    double power_r2 = 0.0;
    double exp_ratio = 0.0;       // exp(slope of log value against n)
    double exp_r2 = 0.0;
    std::string model;            // "power", "exponential", "zero" or ""
    std::size_t points = 0;
};

/// Throws InputError with fewer than min_points points or non-increasing n.
/// Nonpositive values count as zeros: a trailing zero converges.
DecayFit classify_decay(const std::vector<std::pair<double, double>>& series,
                        const DecayThresholds& thresholds = {});

struct ConditionVerdict {
    std::string condition;  // "AI-0" .. "AI-4"
    MetricName metric = MetricName::Variation;
    DecayFit fit;
    std::string note;
};

struct DecayReport {
    std::string family;
    std::vector<unsigned> n_values;
    std::vector<SweepCell> cells;  // ordered by (n, metric key)
    std::map<MetricName, DecayFit> metric_fits;
    std::vector<ConditionVerdict> verdicts;
};

/// Metric feeding each condition, in priority order: variation/beta → AI-4,
/// alpha → AI-3, rectangle → AI-2, prokhorov/bl → AI-1, cov_sup → AI-0.
std::optional<std::string> condition_of(MetricName m);

/// Computes one metric on one family instance.
MetricValue evaluate_metric(const FamilyInstance& inst, MetricName metric, SearchMode mode,
                            ProductMetricKind kind,
                            const std::optional<RectangleCertificate>& rectangle = std::nullopt);

DecayReport sweep(const SweepSpec& spec, const DecayThresholds& thresholds = {});

// --- report formats -------------------------------------------------------------

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// Compact textual summary of a certificate for the CSV column.
std::string certificate_ref(const Certificate& c);

struct CsvRow {
    std::string family;
    std::string n;
    std::string metric;
    std::string value;
    std::string exact;
    std::string mode;
    std::string certificate_ref;
};

inline constexpr const char* kCsvHeader = "family,n,metric,value,exact,mode,certificate_ref";

std::vector<CsvRow> report_rows(const DecayReport& r);
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);
std::vector<CsvRow> read_csv(std::istream& is);

void write_markdown(std::ostream& os, const DecayReport& r);

/// metric,n,value columns with values as doubles, for external plotting.
void write_plot_data(std::ostream& os, const DecayReport& r);

}  // namespace aind
