#include "mvindep/ranksigns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mvindep/errors.hpp"

namespace mvindep::ranksigns {

namespace {

constexpr double kConditionLimit = 1e12;

void check_block(const Eigen::MatrixXd& data) {
    const auto n = data.rows();
    const auto k = data.cols();
    if (k < 1) throw DomainError("block has no columns");
    if (n < k + 2)
        throw DomainError("block needs at least k + 2 observations for shape estimation (n = " +
                          std::to_string(n) + ", k = " + std::to_string(k) + ")");
    if (!data.allFinite()) throw DomainError("block has non-finite entries");
}

// Rescales an SPD matrix to determinant one; rejects near-singular input.
Eigen::MatrixXd unit_determinant(const Eigen::MatrixXd& m, const char* what) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const auto& values = eig.eigenvalues();
    const double top = values.maxCoeff();
    if (!(top > 0.0) || !(values.minCoeff() > top / kConditionLimit))
        throw DegenerateDataError(std::string(what) + ": scatter matrix is rank deficient");
    const double log_det = values.array().log().sum();
    Eigen::MatrixXd out = m * std::exp(-log_det / static_cast<double>(m.rows()));
    return 0.5 * (out + out.transpose());
}

struct RootPair {
    Eigen::MatrixXd root;
    Eigen::MatrixXd inv_root;
};

RootPair spd_roots(const Eigen::MatrixXd& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const Eigen::VectorXd s = eig.eigenvalues().cwiseSqrt();
    const auto& vecs = eig.eigenvectors();
    return {vecs * s.asDiagonal() * vecs.transpose(),
            vecs * s.cwiseInverse().asDiagonal() * vecs.transpose()};
}

double exact_median(Eigen::VectorXd values) {
    std::sort(values.data(), values.data() + values.size());
    const auto n = values.size();
    return n % 2 == 1 ? values(n / 2) : 0.5 * (values(n / 2 - 1) + values(n / 2));
}

}  // namespace

Estimator parse_estimator(std::string_view name) {
    if (name == "tyler") return Estimator::Tyler;
    if (name == "moment") return Estimator::Moment;
    throw InputError("unknown estimator '" + std::string(name) + "' (expected tyler or moment)");
}

std::string_view to_string(Estimator estimator) {
    return estimator == Estimator::Tyler ? "tyler" : "moment";
}

ShapeEstimate moment_estimate(const Eigen::MatrixXd& data) {
    check_block(data);
    const Eigen::VectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(data.rows());
    return {mean, unit_determinant(cov, "moment estimate"), Estimator::Moment};
}

Eigen::VectorXd spatial_median(const Eigen::MatrixXd& data, IterationControl control) {
    const auto n = data.rows();
    const auto k = data.cols();
    if (n < 1 || k < 1) throw DomainError("spatial_median: empty data");
    if (!data.allFinite()) throw DomainError("spatial_median: non-finite entries");
    if (k == 1) return Eigen::VectorXd::Constant(1, exact_median(data.col(0)));

    Eigen::VectorXd m = data.colwise().mean();
    for (int iter = 0; iter < control.max_iterations; ++iter) {
        Eigen::VectorXd weighted = Eigen::VectorXd::Zero(k);
        Eigen::VectorXd pull = Eigen::VectorXd::Zero(k);
        double weight_sum = 0.0;
        double mean_dist = 0.0;
        int coincident = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd diff = data.row(i).transpose() - m;
            const double d = diff.norm();
            mean_dist += d;
            if (d == 0.0) {
                ++coincident;
                continue;
            }
            weighted += data.row(i).transpose() / d;
            pull += diff / d;
            weight_sum += 1.0 / d;
        }
        mean_dist /= static_cast<double>(n);
        if (weight_sum == 0.0) return m;  // every point coincides with m
        const Eigen::VectorXd step = weighted / weight_sum;
        Eigen::VectorXd next;
        if (coincident == 0) {
            next = step;
        } else {
            // Vardi–Zhang: stay at the data point when it satisfies the subgradient condition.
            const double r = pull.norm();
            const double ratio = r > 0.0 ? coincident / r : 1.0;
            next = std::max(0.0, 1.0 - ratio) * step + std::min(1.0, ratio) * m;
        }
        const double change = (next - m).norm();
        m = std::move(next);
        if (change <= control.tol * std::max(mean_dist, 1e-300)) return m;
    }
    throw ConvergenceError("spatial_median: Weiszfeld iteration did not converge", 0.0, 0.0);
}

ShapeEstimate tyler_shape(const Eigen::MatrixXd& data, const Eigen::VectorXd& location,
                          IterationControl control) {
    check_block(data);
    const auto n = data.rows();
    const auto k = data.cols();
    if (location.size() != k) throw DomainError("tyler_shape: location has wrong dimension");
    if (k == 1) return {location, Eigen::MatrixXd::Ones(1, 1), Estimator::Tyler};

    const Eigen::MatrixXd centered = data.rowwise() - location.transpose();
    Eigen::MatrixXd shape = Eigen::MatrixXd::Identity(k, k);
    for (int iter = 0; iter < control.max_iterations; ++iter) {
        const Eigen::LLT<Eigen::MatrixXd> llt(shape);
        Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(k, k);
        Eigen::Index used = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd x = centered.row(i).transpose();
            const double d2 = x.dot(llt.solve(x));
            if (!(d2 > 0.0)) continue;
            scatter.noalias() += x * x.transpose() / d2;
            ++used;
        }
        if (used < k + 1) throw DegenerateDataError("tyler_shape: too few points off the location");
        scatter *= static_cast<double>(k) / static_cast<double>(used);
        const Eigen::MatrixXd next = unit_determinant(scatter, "tyler_shape");
        const double change = (next - shape).norm();
        shape = next;
        if (change < control.tol) return {location, shape, Estimator::Tyler};
    }
    throw ConvergenceError("tyler_shape: fixed-point iteration did not converge", 0.0, 0.0);
}

ShapeEstimate tyler_joint(const Eigen::MatrixXd& data, IterationControl control) {
    check_block(data);
    const auto n = data.rows();
    const auto k = data.cols();
    if (k == 1)
        return {Eigen::VectorXd::Constant(1, exact_median(data.col(0))), Eigen::MatrixXd::Ones(1, 1),
                Estimator::Tyler};

    // Start from the moment estimate: already affine equivariant.
    const ShapeEstimate start = moment_estimate(data);
    Eigen::VectorXd location = start.location;
    Eigen::MatrixXd shape = start.shape;
    for (int iter = 0; iter < control.max_iterations; ++iter) {
        const RootPair roots = spd_roots(shape);
        const Eigen::MatrixXd z = (data.rowwise() - location.transpose()) * roots.inv_root;
        const Eigen::VectorXd dist = z.rowwise().norm();
        const double tiny = 1e-10 * dist.mean();
        Eigen::VectorXd pull = Eigen::VectorXd::Zero(k);
        double weight_sum = 0.0;
        Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(k, k);
        Eigen::Index used = 0;
        Eigen::Index coincident = -1;
        int n_coincident = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = dist(i);
            if (!(d > tiny)) {
                coincident = i;
                ++n_coincident;
                continue;
            }
            const Eigen::VectorXd zi = z.row(i).transpose();
            pull += zi / d;
            weight_sum += 1.0 / d;
            scatter.noalias() += zi * zi.transpose() / (d * d);
            ++used;
        }
        if (used < k + 1) throw DegenerateDataError("tyler_joint: too few points off the location");
        Eigen::VectorXd shift = pull / weight_sum;  // Weiszfeld step in standardized units
        if (n_coincident > 0) {
            // Vardi–Zhang: the iterate sits on an observation. It is the minimizer
            // when the remaining unit vectors sum to at most the multiplicity.
            const double r = pull.norm();
            if (r <= n_coincident)
                throw DegenerateDataError("tyler_joint: location estimate coincides with observation " +
                                          std::to_string(coincident + 1));
            shift *= 1.0 - n_coincident / r;
        }
        scatter *= static_cast<double>(k) / static_cast<double>(used);
        const Eigen::MatrixXd next_shape =
            unit_determinant(roots.root * scatter * roots.root, "tyler_joint");
        location += roots.root * shift;
        const double change = (next_shape - shape).norm() + shift.norm();
        shape = next_shape;
        if (change < control.tol) return {location, shape, Estimator::Tyler};
    }
    throw ConvergenceError("tyler_joint: fixed-point iteration did not converge", 0.0, 0.0);
}

ShapeEstimate estimate(const Eigen::MatrixXd& data, Estimator estimator,
                       IterationControl control) {
    if (estimator == Estimator::Moment) return moment_estimate(data);
    check_block(data);
    return tyler_shape(data, data.colwise().mean().transpose(), control);
}

Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw DomainError("inv_sqrt_spd: not square");
    if (!m.allFinite()) throw DomainError("inv_sqrt_spd: non-finite entries");
    const double scale = m.cwiseAbs().maxCoeff();
    if (!((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale))
        throw DomainError("inv_sqrt_spd: matrix is not symmetric");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const auto& values = eig.eigenvalues();
    const double top = values.maxCoeff();
    if (!(top > 0.0) || values.minCoeff() < -1e-12 * top)
        throw DomainError("inv_sqrt_spd: matrix is not positive definite");
    if (values.minCoeff() < top / kConditionLimit)
        throw DegenerateDataError("inv_sqrt_spd: matrix is numerically singular");
    const auto& vecs = eig.eigenvectors();
    return vecs * values.cwiseSqrt().cwiseInverse().asDiagonal() * vecs.transpose();
}

std::vector<int> ranks_of(const Eigen::VectorXd& values) {
    const auto n = static_cast<std::size_t>(values.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values(static_cast<Eigen::Index>(a)) < values(static_cast<Eigen::Index>(b));
    });
    std::vector<int> ranks(n);
    for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r) + 1;
    return ranks;
}

StandardizedBlock standardize(const Eigen::MatrixXd& data, const ShapeEstimate& est) {
    const auto k = data.cols();
    if (est.location.size() != k || est.shape.rows() != k || est.shape.cols() != k)
        throw DomainError("standardize: estimate does not match block dimension");
    const Eigen::MatrixXd root = inv_sqrt_spd(est.shape);
    StandardizedBlock out;
    out.signs = (data.rowwise() - est.location.transpose()) * root;  // root is symmetric
    out.radii = out.signs.rowwise().norm();
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        if (!(out.radii(i) > 0.0))
            throw DegenerateDataError("standardize: observation " + std::to_string(i + 1) +
                                      " coincides with the location estimate");
        out.signs.row(i) /= out.radii(i);
    }
    out.ranks = ranks_of(out.radii);
    return out;
}

}  // namespace mvindep::ranksigns
