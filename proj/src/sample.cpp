#include "mvindep/sample.hpp"

#include <utility>

#include "mvindep/errors.hpp"

namespace mvindep {

PairedSample::PairedSample(Eigen::MatrixXd block1, Eigen::MatrixXd block2)
    : block1_(std::move(block1)), block2_(std::move(block2)) {
    if (block1_.rows() != block2_.rows())
        throw InputError("paired sample: blocks have different numbers of observations");
    if (block1_.rows() == 0 || block1_.cols() == 0 || block2_.cols() == 0)
        throw InputError("paired sample: empty block");
    if (!block1_.allFinite() || !block2_.allFinite())
        throw InputError("paired sample: non-finite entries");
}

PairedSample PairedSample::split(const Eigen::MatrixXd& joint, int p) {
    if (p < 1 || p >= joint.cols())
        throw InputError("paired sample: p must satisfy 1 <= p < number of columns");
    const auto q = joint.cols() - p;
    return PairedSample(joint.leftCols(p), joint.rightCols(q));
}

}  // namespace mvindep
