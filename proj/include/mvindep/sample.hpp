#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace mvindep {

/// n observations of a (p+q)-vector split into the blocks X₁ ∈ R^p and X₂ ∈ R^q.
/// Each block is stored with one observation per row.
class PairedSample {
public:
    /// Throws InputError when the blocks disagree on n, are empty, or hold non-finite values.
    PairedSample(Eigen::MatrixXd block1, Eigen::MatrixXd block2);

    /// Splits the columns of a joint n × (p+q) matrix after the first p.
    static PairedSample split(const Eigen::MatrixXd& joint, int p);

    std::size_t n() const noexcept { return static_cast<std::size_t>(block1_.rows()); }
    int p() const noexcept { return static_cast<int>(block1_.cols()); }
    int q() const noexcept { return static_cast<int>(block2_.cols()); }
    const Eigen::MatrixXd& block1() const noexcept { return block1_; }
    const Eigen::MatrixXd& block2() const noexcept { return block2_; }

private:
    Eigen::MatrixXd block1_;
    Eigen::MatrixXd block2_;
};

}  // namespace mvindep
