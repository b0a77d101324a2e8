#include <algorithm>
#include <cmath>
#include <set>

#include "aind/errors.hpp"
#include "aind/families.hpp"

namespace aind {

int chi(std::uint64_t i, std::uint64_t j) {
    if (i >= 64) return 0;
    return static_cast<int>((j >> i) & 1U);
}

int sign_fn(std::uint64_t i, std::uint64_t j) { return 2 * chi(i, j) - 1; }

double tent(double x, double y) { return std::max(0.0, 1.0 - 4.0 * std::fabs(x) - 4.0 * std::fabs(y)); }

double h_eval(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return 0.0;
    const double i = std::round(x), j = std::round(y);
    if (i < 0.0 || j < 0.0 || j >= 18446744073709551616.0) return 0.0;
    const auto ji = static_cast<std::uint64_t>(j);
    const auto ii = i >= 64.0 ? std::uint64_t{64} : static_cast<std::uint64_t>(i);
    if (chi(ii, ji) == 0) return 0.0;
    return tent(x - i, y - j);
}

DenseMatrix<std::int64_t> binary_sign_matrix(unsigned n) {
    if (n == 0 || n > kBinaryCodingMaxN) throw InputError("binary sign matrix: n must lie in 1..16");
    const std::size_t rows = std::size_t{1} << n;
    DenseMatrix<std::int64_t> m(rows, n);
    for (std::size_t j = 0; j < rows; ++j)
        for (unsigned i = 0; i < n; ++i) m(j, i) = sign_fn(i, j);
    return m;
}

std::string family_key(FamilyName f) {
    switch (f) {
        case FamilyName::BinaryCoding: return "binary_coding";
        case FamilyName::BernoulliPerturbation: return "bernoulli";
        case FamilyName::MarkovShift: return "markov";
        case FamilyName::GaussianSeq: return "gaussian";
    }
    return "unknown";
}

std::optional<FamilyName> parse_family_key(const std::string& key) {
    if (key == "binary_coding" || key == "binary-coding" || key == "BINARY_CODING") return FamilyName::BinaryCoding;
    if (key == "bernoulli" || key == "bernoulli_perturbation" || key == "BERNOULLI_PERTURBATION")
        return FamilyName::BernoulliPerturbation;
    if (key == "markov" || key == "markov_shift" || key == "MARKOV_SHIFT") return FamilyName::MarkovShift;
    if (key == "gaussian" || key == "gaussian_seq" || key == "GAUSSIAN_SEQ") return FamilyName::GaussianSeq;
    return std::nullopt;
}

namespace {

SpacePtr integer_line(std::size_t count) {
    std::vector<std::string> labels(count);
    std::vector<double> xs(count);
    for (std::size_t k = 0; k < count; ++k) {
        labels[k] = std::to_string(k);
        xs[k] = static_cast<double>(k);
    }
    return FiniteMetricSpace::line(std::move(labels), xs);
}

DenseMatrix<Rational> multiply(const DenseMatrix<Rational>& a, const DenseMatrix<Rational>& b) {
    DenseMatrix<Rational> c(a.rows(), b.cols(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

DenseMatrix<Rational> matrix_power(DenseMatrix<Rational> base, unsigned n) {
    DenseMatrix<Rational> result(base.rows(), base.cols(), Rational(0));
    for (std::size_t i = 0; i < base.rows(); ++i) result(i, i) = 1;
    while (n > 0) {
        if (n & 1U) result = multiply(result, base);
        n >>= 1U;
        if (n > 0) base = multiply(base, base);
    }
    return result;
}

void check_chain(const DenseMatrix<Rational>& p, const std::vector<Rational>& pi) {
    const std::size_t s = p.rows();
    if (s == 0 || p.cols() != s) throw InputError("transition matrix must be square and nonempty");
    if (pi.size() != s) throw InputError("stationary vector length does not match the transition matrix");
    for (std::size_t i = 0; i < s; ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < s; ++j) {
            if (p(i, j) < 0) throw InputError("transition matrix has a negative entry");
            row += p(i, j);
        }
        if (row != 1) throw InputError("transition row " + std::to_string(i) + " does not sum to 1");
    }
    Rational total = 0;
    for (const auto& w : pi) {
        if (w < 0) throw InputError("stationary vector has a negative entry");
        total += w;
    }
    if (total != 1) throw InputError("stationary vector does not sum to 1");
    for (std::size_t j = 0; j < s; ++j) {
        Rational acc = 0;
        for (std::size_t i = 0; i < s; ++i) acc += pi[i] * p(i, j);
        if (acc != pi[j]) throw InputError("vector is not stationary for the transition matrix");
    }
}

}  // namespace

FamilyInstance binary_coding_family(unsigned n) {
    if (n == 0 || n > kBinaryCodingMaxN) throw InputError("binary_coding: n must lie in 1..16");
    const std::size_t cols = std::size_t{1} << n;
    const Rational atom(1, static_cast<unsigned long>(n) * cols);
    DenseMatrix<Rational> w(2 * n, cols, Rational(0));
    for (unsigned i = 0; i < n; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (chi(i, j) == 1)
                w(i, j) = atom;
            else
                w(n + i, j) = atom;
        }
    FamilyInstance inst;
    inst.family = FamilyName::BinaryCoding;
    inst.n = n;
    inst.joint.emplace(integer_line(2 * n), integer_line(cols), std::move(w));
    return inst;
}

DenseMatrix<Rational> binary_coding_h(const JointMeasure& j) {
    const auto& e1 = *j.space1();
    const auto& e2 = *j.space2();
    if (!e1.has_coords() || !e2.has_coords() || e1.dim() != 1 || e2.dim() != 1)
        throw InputError("binary_coding_h needs one-dimensional coordinates");
    DenseMatrix<Rational> h(j.rows(), j.cols(), Rational(0));
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b) h(a, b) = from_double(h_eval(e1.coords(a)[0], e2.coords(b)[0]));
    return h;
}

FamilyInstance bernoulli_perturbation_family(unsigned n) {
    if (n < 2) throw InputError("bernoulli perturbation: n must be at least 2");
    const Rational step(1, n);
    const std::vector<Rational> xs = {Rational(0), step, Rational(1), Rational(1) + step};
    std::vector<std::string> labels;
    std::vector<double> coords;
    for (const auto& x : xs) {
        labels.push_back(to_string(x));
        coords.push_back(to_double(x));
    }
    const std::vector<double> ys = {0.0, 1.0};
    auto space1 = FiniteMetricSpace::line(std::move(labels), coords);
    auto space2 = FiniteMetricSpace::line({"0", "1"}, ys);
    DenseMatrix<Rational> w(4, 2, Rational(0));
    const Rational quarter(1, 4);
    w(0, 0) = quarter;  // X = 0, Y = 0
    w(1, 1) = quarter;  // X = 0, Y = 1
    w(2, 0) = quarter;  // X = 1, Y = 0
    w(3, 1) = quarter;  // X = 1, Y = 1
    FamilyInstance inst;
    inst.family = FamilyName::BernoulliPerturbation;
    inst.n = n;
    inst.joint.emplace(std::move(space1), std::move(space2), std::move(w));
    inst.rectangle = RectangleCertificate{{2}, {1}};
    return inst;
}

FamilyInstance markov_shift_family(const DenseMatrix<Rational>& transition,
                                   const std::vector<Rational>& stationary, unsigned n,
                                   std::vector<std::string> labels) {
    check_chain(transition, stationary);
    const std::size_t s = transition.rows();
    if (labels.empty())
        for (std::size_t k = 0; k < s; ++k) labels.push_back(std::to_string(k));
    if (labels.size() != s) throw InputError("state label count does not match the transition matrix");
    auto space = FiniteMetricSpace::discrete(std::move(labels));
    DenseMatrix<Rational> w = matrix_power(transition, n);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) w(i, j) *= stationary[i];
    FamilyInstance inst;
    inst.family = FamilyName::MarkovShift;
    inst.n = n;
    inst.joint.emplace(space, space, std::move(w));
    inst.rectangle = RectangleCertificate{{0}, {0}};
    return inst;
}

MarkovChain symmetric_two_state_chain(const Rational& p) {
    if (p < 0 || p > 1) throw InputError("flip probability must lie in [0, 1]");
    MarkovChain c;
    c.transition = DenseMatrix<Rational>(2, 2);
    c.transition(0, 0) = c.transition(1, 1) = 1 - p;
    c.transition(0, 1) = c.transition(1, 0) = p;
    c.stationary = {Rational(1, 2), Rational(1, 2)};
    c.labels = {"0", "1"};
    return c;
}

MarkovChain block_chain(const MarkovChain& chain, unsigned width) {
    if (width < 1 || width > 3) throw InputError("block width must lie in 1..3");
    check_chain(chain.transition, chain.stationary);
    const std::size_t s = chain.transition.rows();
    std::size_t count = 1;
    for (unsigned k = 0; k < width; ++k) count *= s;
    auto digits = [&](std::size_t b) {
        std::vector<std::size_t> d(width);
        for (unsigned k = width; k-- > 0;) {
            d[k] = b % s;
            b /= s;
        }
        return d;
    };
    auto base_label = [&](std::size_t x) {
        return chain.labels.size() == s ? chain.labels[x] : std::to_string(x);
    };
    const auto& p = chain.transition;
    MarkovChain out;
    out.transition = DenseMatrix<Rational>(count, count, Rational(0));
    out.stationary.assign(count, Rational(0));
    for (std::size_t b = 0; b < count; ++b) {
        const auto x = digits(b);
        Rational w = chain.stationary[x[0]];
        std::string label = base_label(x[0]);
        for (unsigned k = 1; k < width; ++k) {
            w *= p(x[k - 1], x[k]);
            label += "," + base_label(x[k]);
        }
        out.stationary[b] = w;
        out.labels.push_back(std::move(label));
        for (std::size_t c = 0; c < count; ++c) {
            const auto y = digits(c);
            Rational t = p(x[width - 1], y[0]);
            for (unsigned k = 1; k < width && t != 0; ++k) t *= p(y[k - 1], y[k]);
            out.transition(b, c) = t;
        }
    }
    return out;
}

FamilyInstance gaussian_sequence_family(unsigned n, double r0, double decay) {
    if (n == 0) throw InputError("gaussian sequence: n must be positive");
    const double r = r0 / std::pow(static_cast<double>(n), decay);
    if (!std::isfinite(r) || std::fabs(r) > 1.0) throw InputError("gaussian sequence: correlation outside [-1, 1]");
    GaussianBlock g;
    g.mean1 = {0.0};
    g.mean2 = {0.0};
    g.cov11 = DenseMatrix<double>(1, 1, 1.0);
    g.cov22 = DenseMatrix<double>(1, 1, 1.0);
    g.cov12 = DenseMatrix<double>(1, 1, r);
    check_gaussian_block(g);
    FamilyInstance inst;
    inst.family = FamilyName::GaussianSeq;
    inst.n = n;
    inst.gaussian = std::move(g);
    return inst;
}

// --- checkers -----------------------------------------------------------------

ConditionalIndepInstance::ConditionalIndepInstance(SpacePtr space1, SpacePtr space2,
                                                   DenseMatrix<Rational> on_omega,
                                                   DenseMatrix<Rational> off_omega)
    : space1_(std::move(space1)), space2_(std::move(space2)), on_(std::move(on_omega)), off_(std::move(off_omega)) {
    if (!space1_ || !space2_) throw InputError("conditional instance needs two spaces");
    const std::size_t n1 = space1_->size(), n2 = space2_->size();
    if (on_.rows() != n1 || on_.cols() != n2 || off_.rows() != n1 || off_.cols() != n2)
        throw InputError("conditional instance slices do not match the spaces");
    Rational on_mass = 0;
    delta_ = 0;
    std::vector<Rational> rows(n1, Rational(0)), cols(n2, Rational(0));
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            if (on_(a, b) < 0 || off_(a, b) < 0) throw InputError("conditional instance has a negative weight");
            on_mass += on_(a, b);
            delta_ += off_(a, b);
            rows[a] += on_(a, b);
            cols[b] += on_(a, b);
        }
    if (on_mass + delta_ != 1) throw InputError("conditional instance weights do not sum to 1");
    if (delta_ >= 1) throw InputError("conditional instance: P(omega complement) must be below 1");
    // P(a, b | Ω) = P(a | Ω) P(b | Ω)  <=>  on(a, b)·P(Ω) = rows(a)·cols(b).
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
            if (on_(a, b) * on_mass != rows[a] * cols[b])
                throw InputError("conditional instance: the omega slice does not factorize");
}

JointMeasure ConditionalIndepInstance::xy_joint() const {
    DenseMatrix<Rational> w(on_.rows(), on_.cols());
    for (std::size_t a = 0; a < w.rows(); ++a)
        for (std::size_t b = 0; b < w.cols(); ++b) w(a, b) = on_(a, b) + off_(a, b);
    return JointMeasure(space1_, space2_, std::move(w));
}

BoundCheck conditional_independence_bound_check(const ConditionalIndepInstance& inst) {
    const Rational& d = inst.delta();
    if (d >= 1) throw InputError("delta must be below 1");
    BoundCheck out;
    out.value = *alpha_coefficient(inst.xy_joint()).exact_value;
    out.bound = 2 * d * (1 + 1 / (1 - d));
    out.holds = out.value <= out.bound;
    return out;
}

CouplingInstance::CouplingInstance(SpacePtr space1, SpacePtr space2, std::vector<Rational> weights)
    : space1_(std::move(space1)), space2_(std::move(space2)), w_(std::move(weights)) {
    if (!space1_ || !space2_) throw InputError("coupling instance needs two spaces");
    n1_ = space1_->size();
    n2_ = space2_->size();
    if (w_.size() != n1_ * n1_ * n2_ * n2_) throw InputError("coupling instance weight count does not match the spaces");
    Rational total = 0;
    DenseMatrix<Rational> primed(n1_, n2_, Rational(0));
    for (std::size_t x = 0; x < n1_; ++x)
        for (std::size_t xp = 0; xp < n1_; ++xp)
            for (std::size_t y = 0; y < n2_; ++y)
                for (std::size_t yp = 0; yp < n2_; ++yp) {
                    const Rational& v = (*this)(x, xp, y, yp);
                    if (v < 0) throw InputError("coupling instance has a negative weight");
                    total += v;
                    primed(xp, yp) += v;
                }
    if (total != 1) throw InputError("coupling instance weights do not sum to 1");
    std::vector<Rational> px(n1_, Rational(0)), py(n2_, Rational(0));
    for (std::size_t a = 0; a < n1_; ++a)
        for (std::size_t b = 0; b < n2_; ++b) {
            px[a] += primed(a, b);
            py[b] += primed(a, b);
        }
    for (std::size_t a = 0; a < n1_; ++a)
        for (std::size_t b = 0; b < n2_; ++b)
            if (primed(a, b) != px[a] * py[b])
                throw InputError("coupling instance: the primed pair is not independent");
}

JointMeasure CouplingInstance::xy_joint() const {
    DenseMatrix<Rational> w(n1_, n2_, Rational(0));
    for (std::size_t x = 0; x < n1_; ++x)
        for (std::size_t xp = 0; xp < n1_; ++xp)
            for (std::size_t y = 0; y < n2_; ++y)
                for (std::size_t yp = 0; yp < n2_; ++yp) w(x, y) += (*this)(x, xp, y, yp);
    return JointMeasure(space1_, space2_, std::move(w));
}

BoundCheck coupling_tv_bound_check(const CouplingInstance& inst) {
    const std::size_t n1 = inst.space1()->size(), n2 = inst.space2()->size();
    Rational same_pair = 0, same_x = 0, same_y = 0;
    for (std::size_t x = 0; x < n1; ++x)
        for (std::size_t xp = 0; xp < n1; ++xp)
            for (std::size_t y = 0; y < n2; ++y)
                for (std::size_t yp = 0; yp < n2; ++yp) {
                    const Rational& v = inst(x, xp, y, yp);
                    if (x == xp) same_x += v;
                    if (y == yp) same_y += v;
                    if (x == xp && y == yp) same_pair += v;
                }
    BoundCheck out;
    out.value = *variation_norm(dependence_matrix(inst.xy_joint())).exact_value;
    out.bound = 2 * (1 - same_pair) + 2 * (1 - same_x) + 2 * (1 - same_y);
    out.holds = out.value <= out.bound;
    return out;
}

GaussianFamilyReport gaussian_family_check(const std::vector<GaussianBlock>& sequence, double cap,
                                           double tolerance) {
    if (sequence.empty()) throw InputError("gaussian family check needs at least one block");
    GaussianFamilyReport r;
    r.bounded = true;
    for (const auto& g : sequence) {
        check_gaussian_block(g);
        double m1 = 0.0, m2 = 0.0, cross = 0.0;
        for (double v : g.mean1) {
            m1 += v * v;
            r.bounded = r.bounded && std::fabs(v) <= cap;
        }
        for (double v : g.mean2) {
            m2 += v * v;
            r.bounded = r.bounded && std::fabs(v) <= cap;
        }
        for (std::size_t k = 0; k < g.mean1.size(); ++k) m1 += g.cov11(k, k);
        for (std::size_t k = 0; k < g.mean2.size(); ++k) m2 += g.cov22(k, k);
        r.bounded = r.bounded && m1 <= cap && m2 <= cap;
        for (double v : g.cov12.data()) cross = std::max(cross, std::fabs(v));
        r.max_abs_cross.push_back(cross);

        const std::size_t d1 = g.mean1.size(), d2 = g.mean2.size();
        if (d1 + d2 > 4) throw CapabilityError("gaussian cf trace limited to total dimension 4");
        double best = 0.0;
        constexpr std::size_t base = std::size(kCfLattice);
        std::size_t total = 1;
        for (std::size_t k = 0; k < d1 + d2; ++k) total *= base;
        std::vector<double> t(d1), s(d2);
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            for (auto& v : t) {
                v = kCfLattice[c % base];
                c /= base;
            }
            for (auto& v : s) {
                v = kCfLattice[c % base];
                c /= base;
            }
            best = std::max(best, gaussian_cf_gap(g, t, s));
        }
        r.cf_trace.push_back(best);
    }
    const std::size_t tail = std::max<std::size_t>(1, sequence.size() / 4);
    double tail_max = 0.0;
    for (std::size_t k = sequence.size() - tail; k < sequence.size(); ++k) tail_max = std::max(tail_max, r.max_abs_cross[k]);
    r.cross_vanishes = tail_max < tolerance;
    return r;
}

// --- random instances -----------------------------------------------------------

std::vector<Rational> random_probability(std::mt19937_64& rng, std::size_t n, int max_weight) {
    if (n == 0) throw InputError("random_probability: empty support");
    std::uniform_int_distribution<int> pick(0, std::max(1, max_weight));
    std::vector<long> raw(n);
    long total = 0;
    while (total == 0) {
        total = 0;
        for (auto& r : raw) {
            r = pick(rng);
            total += r;
        }
    }
    std::vector<Rational> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = Rational(raw[k], total);
    for (auto& q : w) q.canonicalize();
    return w;
}

SpacePtr random_planar_space(std::mt19937_64& rng, std::size_t n, const std::string& prefix) {
    std::uniform_int_distribution<int> coord(0, 12);
    std::set<std::pair<int, int>> seen;
    DenseMatrix<double> xy(n, 2);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < n; ++k) {
        std::pair<int, int> p;
        do {
            p = {coord(rng), coord(rng)};
        } while (!seen.insert(p).second);
        xy(k, 0) = p.first / 4.0;
        xy(k, 1) = p.second / 4.0;
        labels.push_back(prefix + std::to_string(k));
    }
    return FiniteMetricSpace::from_coords(std::move(labels), std::move(xy), CoordNorm::Euclidean);
}

JointMeasure random_joint(std::mt19937_64& rng, std::size_t n1, std::size_t n2) {
    auto s1 = random_planar_space(rng, n1, "x");
    auto s2 = random_planar_space(rng, n2, "y");
    const auto w = random_probability(rng, n1 * n2);
    DenseMatrix<Rational> m(n1, n2);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) m(a, b) = w[a * n2 + b];
    return JointMeasure(std::move(s1), std::move(s2), std::move(m));
}

ConditionalIndepInstance random_conditional_instance(std::mt19937_64& rng, std::size_t n1, std::size_t n2) {
    auto s1 = random_planar_space(rng, n1, "x");
    auto s2 = random_planar_space(rng, n2, "y");
    std::uniform_int_distribution<int> denom_pick(2, 12);
    const int denom = denom_pick(rng);
    std::uniform_int_distribution<int> num_pick(0, denom - 1);
    Rational delta(num_pick(rng), denom);
    delta.canonicalize();
    const auto p = random_probability(rng, n1);
    const auto q = random_probability(rng, n2);
    const auto r = random_probability(rng, n1 * n2);
    DenseMatrix<Rational> on(n1, n2), off(n1, n2);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            on(a, b) = (1 - delta) * p[a] * q[b];
            off(a, b) = delta * r[a * n2 + b];
        }
    return ConditionalIndepInstance(std::move(s1), std::move(s2), std::move(on), std::move(off));
}

CouplingInstance random_coupling_instance(std::mt19937_64& rng, std::size_t n1, std::size_t n2) {
    auto s1 = random_planar_space(rng, n1, "x");
    auto s2 = random_planar_space(rng, n2, "y");
    const auto p = random_probability(rng, n1);
    const auto q = random_probability(rng, n2);
    std::uniform_int_distribution<int> keep_pick(0, 10);
    std::vector<Rational> w(n1 * n1 * n2 * n2, Rational(0));
    auto at = [&](std::size_t x, std::size_t xp, std::size_t y, std::size_t yp) -> Rational& {
        return w[((x * n1 + xp) * n2 + y) * n2 + yp];
    };
    // (X, Y) given (X′, Y′): stay put with probability keep, else jump to a random cell.
    for (std::size_t xp = 0; xp < n1; ++xp)
        for (std::size_t yp = 0; yp < n2; ++yp) {
            const Rational base = p[xp] * q[yp];
            if (base == 0) continue;
            Rational keep(keep_pick(rng), 10);
            keep.canonicalize();
            const auto jump = random_probability(rng, n1 * n2);
            for (std::size_t x = 0; x < n1; ++x)
                for (std::size_t y = 0; y < n2; ++y) {
                    Rational k = (1 - keep) * jump[x * n2 + y];
                    if (x == xp && y == yp) k += keep;
                    at(x, xp, y, yp) = base * k;
                }
        }
    return CouplingInstance(std::move(s1), std::move(s2), std::move(w));
}

}  // namespace aind
