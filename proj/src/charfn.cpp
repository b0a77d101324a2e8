#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>

#include "aind/errors.hpp"
#include "aind/metrics.hpp"

namespace aind {

namespace {

using Complex = std::complex<long double>;

double dot(std::span<const double> a, std::span<const double> b) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<long double>(a[k]) * b[k];
    return static_cast<double>(s);
}

void for_each_lattice_point(std::size_t dim, const std::function<void(const std::vector<double>&)>& fn) {
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> point(dim);
    constexpr std::size_t base = std::size(kCfLattice);
    while (true) {
        for (std::size_t k = 0; k < dim; ++k) point[k] = kCfLattice[idx[k]];
        fn(point);
        std::size_t k = 0;
        while (k < dim && ++idx[k] == base) idx[k++] = 0;
        if (k == dim) break;
    }
}

}  // namespace

double cf_gap(const JointMeasure& j, std::span<const double> t, std::span<const double> s) {
    const auto& e1 = *j.space1();
    const auto& e2 = *j.space2();
    if (!e1.has_coords() || !e2.has_coords())
        throw CapabilityError("cf_gap needs coordinates on both spaces");
    if (t.size() != e1.dim() || s.size() != e2.dim())
        throw InputError("cf_gap: argument dimensions do not match the coordinates");
    std::vector<Complex> ex(j.rows()), ey(j.cols());
    for (std::size_t a = 0; a < j.rows(); ++a) ex[a] = std::polar(1.0L, static_cast<long double>(dot(t, e1.coords(a))));
    for (std::size_t b = 0; b < j.cols(); ++b) ey[b] = std::polar(1.0L, static_cast<long double>(dot(s, e2.coords(b))));
    Complex joint = 0, phx = 0, phy = 0;
    std::vector<long double> px(j.rows(), 0.0L), py(j.cols(), 0.0L);
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b) {
            if (j(a, b) == 0) continue;
            const long double w = j(a, b).get_d();
            joint += w * ex[a] * ey[b];
            px[a] += w;
            py[b] += w;
        }
    for (std::size_t a = 0; a < j.rows(); ++a) phx += px[a] * ex[a];
    for (std::size_t b = 0; b < j.cols(); ++b) phy += py[b] * ey[b];
    return static_cast<double>(std::abs(joint - phx * phy));
}

MetricValue cf_gap_sweep(const JointMeasure& j) {
    const auto& e1 = *j.space1();
    const auto& e2 = *j.space2();
    if (!e1.has_coords() || !e2.has_coords())
        throw CapabilityError("cf_gap needs coordinates on both spaces");
    if (e1.dim() + e2.dim() > 4)
        throw CapabilityError("cf_gap lattice sweep limited to total dimension 4");
    MetricValue mv;
    mv.name = MetricName::CfGap;
    for_each_lattice_point(e1.dim(), [&](const std::vector<double>& t) {
        for_each_lattice_point(e2.dim(), [&](const std::vector<double>& s) {
            mv.value = std::max(mv.value, cf_gap(j, t, s));
        });
    });
    return mv;
}

void check_gaussian_block(const GaussianBlock& g) {
    const std::size_t m = g.mean1.size(), k = g.mean2.size();
    if (g.cov11.rows() != m || g.cov11.cols() != m || g.cov22.rows() != k || g.cov22.cols() != k ||
        g.cov12.rows() != m || g.cov12.cols() != k)
        throw InputError("Gaussian block has inconsistent shapes");
    Eigen::MatrixXd full(m + k, m + k);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) full(a, b) = g.cov11(a, b);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) full(m + a, m + b) = g.cov22(a, b);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            full(a, m + b) = g.cov12(a, b);
            full(m + b, a) = g.cov12(a, b);
        }
    if (!full.allFinite()) throw InputError("Gaussian block has non-finite entries");
    if ((full - full.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, full.cwiseAbs().maxCoeff()))
        throw InputError("Gaussian covariance blocks are not symmetric");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
        throw InputError("Gaussian covariance block is not positive semidefinite");
}

double gaussian_cf_gap(const GaussianBlock& g, std::span<const double> t, std::span<const double> s) {
    check_gaussian_block(g);
    if (t.size() != g.mean1.size() || s.size() != g.mean2.size())
        throw InputError("gaussian_cf_gap: argument dimensions do not match the block");
    auto quad = [](const DenseMatrix<double>& c, std::span<const double> u, std::span<const double> v) {
        long double acc = 0.0L;
        for (std::size_t a = 0; a < u.size(); ++a)
            for (std::size_t b = 0; b < v.size(); ++b) acc += u[a] * c(a, b) * v[b];
        return static_cast<double>(acc);
    };
    const double modulus = std::exp(-0.5 * quad(g.cov11, t, t) - 0.5 * quad(g.cov22, s, s));
    return modulus * std::fabs(std::expm1(-quad(g.cov12, t, s)));
}

}  // namespace aind
