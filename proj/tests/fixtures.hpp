#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "mvindep/radial.hpp"
#include "mvindep/rng.hpp"
#include "mvindep/sample.hpp"

namespace fixtures {

// Independent t_5 blocks with a little cross dependence so statistics are not all tiny.
inline mvindep::PairedSample random_sample(int p, int q, std::size_t n, std::uint64_t seed) {
    using namespace mvindep::radial;
    const KonijnModel model(RadialModel(p, StudentT{5.0}), RadialModel(q, StudentT{5.0}), 1.5, n);
    return sample_konijn(model, mvindep::RandomStream(seed));
}

// Well-conditioned random invertible matrix: QR orthogonal factor times log-uniform singular values.
inline Eigen::MatrixXd random_invertible(int k, mvindep::RandomStream& rng) {
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd rot = qr.householderQ();
    Eigen::VectorXd s(k);
    for (int i = 0; i < k; ++i) s(i) = std::exp(3.0 * (rng.uniform() - 0.5));
    Eigen::MatrixXd h(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) h(i, j) = rng.normal();
    const Eigen::MatrixXd rot2 = Eigen::HouseholderQR<Eigen::MatrixXd>(h).householderQ();
    return rot * s.asDiagonal() * rot2;
}

inline Eigen::MatrixXd affine(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b) {
    return (rows * a.transpose()).rowwise() + b.transpose();
}

inline mvindep::PairedSample random_block_affine(const mvindep::PairedSample& s,
                                                 mvindep::RandomStream& rng) {
    const Eigen::MatrixXd a1 = random_invertible(s.p(), rng);
    const Eigen::MatrixXd a2 = random_invertible(s.q(), rng);
    Eigen::VectorXd b1(s.p());
    Eigen::VectorXd b2(s.q());
    for (int i = 0; i < s.p(); ++i) b1(i) = 10.0 * rng.normal();
    for (int i = 0; i < s.q(); ++i) b2(i) = 10.0 * rng.normal();
    return mvindep::PairedSample(affine(s.block1(), a1, b1), affine(s.block2(), a2, b2));
}

}  // namespace fixtures
