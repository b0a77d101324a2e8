#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "aind/measure.hpp"
#include "aind/metrics.hpp"

namespace aind {

// --- binary coding primitives ----------------------------------------------

/// i-th binary digit of j (0 beyond the coding length).
int chi(std::uint64_t i, std::uint64_t j);

/// 2·chi(i, j) − 1.
int sign_fn(std::uint64_t i, std::uint64_t j);

/// max{0, 1 − 4|x| − 4|y|}.
double tent(double x, double y);

/// Σᵢⱼ chi(i, j)·tent(x − i, y − j). At most one term is nonzero, so only the
/// nearest lattice point is evaluated.
double h_eval(double x, double y);

/// The 2ⁿ × n matrix with entry (j, i) = sign_fn(i, j).
DenseMatrix<std::int64_t> binary_sign_matrix(unsigned n);

// --- family instances -------------------------------------------------------

enum class FamilyName { BinaryCoding, BernoulliPerturbation, MarkovShift, GaussianSeq };

std::string family_key(FamilyName f);  // "binary_coding", "bernoulli", "markov", "gaussian"
std::optional<FamilyName> parse_family_key(const std::string& key);

struct FamilyInstance {
    FamilyName family = FamilyName::BinaryCoding;
    unsigned n = 1;
    std::optional<JointMeasure> joint;
    std::optional<GaussianBlock> gaussian;
    std::map<std::string, std::string> params;
    /// Fixed rectangle whose gap tracks AI-2, when the family has a canonical one.
    std::optional<RectangleCertificate> rectangle;
};

inline constexpr unsigned kBinaryCodingMaxN = 16;

/// Joint on E₁ = {0..2n−1}, E₂ = {0..2ⁿ−1} ⊂ ℝ with weight chi(i, j)/(n2ⁿ)
/// for i < n and (1 − chi(i − n, j))/(n2ⁿ) for n <= i < 2n.
FamilyInstance binary_coding_family(unsigned n);

/// h_eval on the grid of a binary-coding joint, as exact rationals.
DenseMatrix<Rational> binary_coding_h(const JointMeasure& j);

/// Law of (X + Y/n, Y) for independent fair bits X, Y; n >= 2. The canonical
/// rectangle is A = {1}, B = {1}.
FamilyInstance bernoulli_perturbation_family(unsigned n);

/// Law of (X₀, Xₙ) for the stationary chain: stationary(i)·(transitionⁿ)(i, j).
/// States live on the discrete metric space labelled "0".."s−1" (or the
/// supplied labels). The canonical rectangle is the first state on both sides.
FamilyInstance markov_shift_family(const DenseMatrix<Rational>& transition,
                                   const std::vector<Rational>& stationary, unsigned n,
                                   std::vector<std::string> labels = {});

struct MarkovChain {
    DenseMatrix<Rational> transition;
    std::vector<Rational> stationary;
    std::vector<std::string> labels;
};

/// Two-state chain flipping with probability p; stationary (1/2, 1/2).
MarkovChain symmetric_two_state_chain(const Rational& p);

/// Chain of consecutive non-overlapping blocks of width w (1 <= w <= 3) on the
/// product state space, with its stationary law.
MarkovChain block_chain(const MarkovChain& chain, unsigned width);

/// Unit-variance scalar Gaussian pair with correlation r0 / n^decay.
FamilyInstance gaussian_sequence_family(unsigned n, double r0, double decay);

// --- finite-instance checkers ------------------------------------------------

/// Law over E₁ × E₂ × {Ω, Ωᶜ}; on the Ω slice X and Y are conditionally
/// independent.
class ConditionalIndepInstance {
public:
    ConditionalIndepInstance(SpacePtr space1, SpacePtr space2, DenseMatrix<Rational> on_omega,
                             DenseMatrix<Rational> off_omega);

    const SpacePtr& space1() const { return space1_; }
    const SpacePtr& space2() const { return space2_; }
    const DenseMatrix<Rational>& on_omega() const { return on_; }
    const DenseMatrix<Rational>& off_omega() const { return off_; }
    const Rational& delta() const { return delta_; }
    JointMeasure xy_joint() const;

private:
    SpacePtr space1_, space2_;
    DenseMatrix<Rational> on_, off_;
    Rational delta_;
};

struct BoundCheck {
    Rational value;
    Rational bound;
    bool holds = false;
};

/// alpha of the (X, Y) law against 2δ(1 + 1/(1 − δ)).
BoundCheck conditional_independence_bound_check(const ConditionalIndepInstance& inst);

/// Law of (X, X′, Y, Y′) over E₁ × E₁ × E₂ × E₂ with X′, Y′ independent.
class CouplingInstance {
public:
    /// weights indexed [x][x'][y][y'] flattened row-major.
    CouplingInstance(SpacePtr space1, SpacePtr space2, std::vector<Rational> weights);

    const SpacePtr& space1() const { return space1_; }
    const SpacePtr& space2() const { return space2_; }
    const Rational& operator()(std::size_t x, std::size_t xp, std::size_t y, std::size_t yp) const {
        return w_[((x * n1_ + xp) * n2_ + y) * n2_ + yp];
    }
    JointMeasure xy_joint() const;

private:
    SpacePtr space1_, space2_;
    std::size_t n1_, n2_;
    std::vector<Rational> w_;
};

/// Variation norm of the (X, Y) dependence against
/// 2·P{(X,Y) ≠ (X′,Y′)} + 2·P{X ≠ X′} + 2·P{Y ≠ Y′}.
BoundCheck coupling_tv_bound_check(const CouplingInstance& inst);

struct GaussianFamilyReport {
    bool bounded = false;
    bool cross_vanishes = false;
    std::vector<double> max_abs_cross;  // per supplied n
    std::vector<double> cf_trace;       // max gaussian_cf_gap over the default lattice, per n
};

/// bounded: every |mean| component and E|X|², E|Y|² stay at or below `cap`.
/// cross_vanishes: max |cov12| over the last quarter of the sequence is below
/// `tolerance`.
GaussianFamilyReport gaussian_family_check(const std::vector<GaussianBlock>& sequence, double cap,
                                           double tolerance);

// --- seeded random instances ------------------------------------------------

/// Random probability vector with small integer numerators (some zeros).
std::vector<Rational> random_probability(std::mt19937_64& rng, std::size_t n, int max_weight = 9);

/// Random joint on freshly generated planar point sets of the given sizes.
JointMeasure random_joint(std::mt19937_64& rng, std::size_t n1, std::size_t n2);

SpacePtr random_planar_space(std::mt19937_64& rng, std::size_t n, const std::string& prefix);

ConditionalIndepInstance random_conditional_instance(std::mt19937_64& rng, std::size_t n1,
                                                     std::size_t n2);

CouplingInstance random_coupling_instance(std::mt19937_64& rng, std::size_t n1, std::size_t n2);

}  // namespace aind
