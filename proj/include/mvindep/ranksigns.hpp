#pragma once

// Affine standardization of one block of observations: location and shape
// estimates, then standardized spatial signs, radii and ranks of the radii.
// Blocks are n×k matrices with one observation per row.

#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mvindep::ranksigns {

enum class Estimator {
    /// Sample mean + Tyler shape about it.
    Tyler,
    /// Sample mean + sample covariance.
    Moment,
};

Estimator parse_estimator(std::string_view name);
std::string_view to_string(Estimator estimator);

struct ShapeEstimate {
    Eigen::VectorXd location;
    Eigen::MatrixXd shape;  // symmetric positive definite, determinant one
    Estimator estimator = Estimator::Moment;
};

struct StandardizedBlock {
    Eigen::MatrixXd signs;  // n×k, unit rows
    Eigen::VectorXd radii;
    std::vector<int> ranks;  // permutation of 1..n
};

struct IterationControl {
    double tol = 1e-12;
    int max_iterations = 20000;
};

/// Sample mean and sample covariance rescaled to determinant one.
ShapeEstimate moment_estimate(const Eigen::MatrixXd& data);

/// Minimizer of Σ‖x_i - m‖ by Weiszfeld iteration with the Vardi–Zhang
/// correction at data points. `tol` is relative to the mean distance to the
/// current iterate. In one dimension the exact median is returned.
Eigen::VectorXd spatial_median(const Eigen::MatrixXd& data, IterationControl control = {});

/// Tyler's shape about a fixed location: fixed point of
/// V ∝ (k/n) Σ (x-μ)(x-μ)' / ((x-μ)'V⁻¹(x-μ)), renormalized to det V = 1.
ShapeEstimate tyler_shape(const Eigen::MatrixXd& data, const Eigen::VectorXd& location,
                          IterationControl control = {});

/// Simultaneous spatial median and Tyler shape: the location is the spatial
/// median of the data standardized by the current shape. Affine equivariant.
ShapeEstimate tyler_joint(const Eigen::MatrixXd& data, IterationControl control = {});

/// Dispatches on the estimator tag. Tyler pairs the sample mean with
/// tyler_shape: both affine equivariant, and the location never lands on an
/// observation (the spatial median does so with positive probability).
ShapeEstimate estimate(const Eigen::MatrixXd& data, Estimator estimator,
                       IterationControl control = {});

/// Symmetric inverse square root. Throws DomainError for non-symmetric or
/// indefinite input and DegenerateDataError when the condition number exceeds 1e12.
Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& m);

/// Ranks 1..n of the values, ties broken by ascending index.
std::vector<int> ranks_of(const Eigen::VectorXd& values);

/// z_i = shape^{-1/2}(x_i - location); signs z_i/‖z_i‖, radii ‖z_i‖ and their ranks.
/// Throws DegenerateDataError when some z_i is zero.
StandardizedBlock standardize(const Eigen::MatrixXd& data, const ShapeEstimate& estimate);

}  // namespace mvindep::ranksigns
