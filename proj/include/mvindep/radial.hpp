#pragma once

// Radial families of spherical distributions: a k-vector X with density
// proportional to f(‖x‖). A family type f_a(r) = f(a r) is indexed by its scale.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "mvindep/extremal.hpp"
#include "mvindep/rng.hpp"
#include "mvindep/sample.hpp"

namespace mvindep::radial {

/// f(r) = exp(-(a r)²/2).
struct Gaussian {
    double scale = 1.0;
};

/// f(r) = (1 + (a r)²/ν)^{-(k+ν)/2}: the multivariate t_ν in shape-standard form.
struct StudentT {
    double nu = 3.0;
    double scale = 1.0;
};

/// h_{k,σ}(r) = h_{k,1}(σ r), bound to the model's dimension.
struct Extremal {
    double sigma = 1.0;
};

/// User-supplied radial function. The density need not be normalized.
/// `moment_bound` declares that ∫ r^j f(r) dr is finite for every j < moment_bound.
struct Custom {
    std::string name;
    std::function<double(double)> density;
    std::function<double(double)> score;
    double moment_bound = 0.0;
};

using RadialFamily = std::variant<Gaussian, StudentT, Extremal, Custom>;

/// Parses `gauss[:scale]`, `t:<nu>` or `extremal[:sigma]`. Throws InputError.
RadialFamily parse_family(std::string_view text);

/// Inverse of parse_family for the named families (custom families print their name).
std::string format_family(const RadialFamily& family);

/// A radial family bound to a marginal dimension k. Immutable after construction.
class RadialModel {
public:
    /// Throws ModelError when parameters are out of range or μ_{k+1;f} would be infinite.
    RadialModel(int k, RadialFamily family);

    int dim() const noexcept { return k_; }
    const RadialFamily& family() const noexcept { return family_; }
    bool is_gaussian() const noexcept { return std::holds_alternative<Gaussian>(family_); }

    /// f(r) in the family's fixed normalization.
    double density(double r) const;
    /// φ_f(r) = -f'(r)/f(r).
    double location_score(double r) const;
    /// F̃_k(r): distribution function of ‖X‖.
    double cdf(double r) const;
    /// 1 - F̃_k(r) without cancellation in the upper tail.
    double tail(double r) const;
    /// F̃_k⁻¹(u), u in (0, 1).
    double quantile(double u) const;
    /// F̃_k⁻¹(1 - t), t in (0, 1).
    double quantile_upper(double t) const;
    /// Right end of the radial support: c_k/σ for the extremal family, +∞ otherwise.
    double support_upper() const noexcept;

private:
    double custom_mass(double r) const;

    int k_;
    RadialFamily family_;
    std::shared_ptr<const efficiency::ExtremalLaw> extremal_;
    double custom_norm_ = 1.0;  // μ_{k-1;f} for custom families
};

enum class SamplingPath {
    /// Closed-form generators for Gaussian and Student t, inverse CDF otherwise.
    Automatic,
    /// Radius by F̃_k⁻¹(V) for every family.
    InverseCdf,
};

/// n draws from P_k(0, I_k, f), one per row: R·U with U uniform on the sphere.
Eigen::MatrixXd sample_spherical(const RadialModel& model, std::size_t n, RandomStream& rng,
                                 SamplingPath path = SamplingPath::Automatic);

/// Local dependence model: independent spherical Y₁ ~ f (dim p), Y₂ ~ g (dim q),
/// mixed by [[(1-d) I_p, d M], [d M', (1-d) I_q]] with d = δ/√n.
class KonijnModel {
public:
    /// M defaults to the p×q matrix with a single one in position (1, 1).
    /// Throws ModelError for mismatched dimensions or a singular mixing matrix.
    KonijnModel(RadialModel f, RadialModel g, double delta, std::size_t n,
                std::optional<Eigen::MatrixXd> mixing = std::nullopt);

    int p() const noexcept { return f_.dim(); }
    int q() const noexcept { return g_.dim(); }
    std::size_t n() const noexcept { return n_; }
    double delta() const noexcept { return delta_; }
    const RadialModel& f() const noexcept { return f_; }
    const RadialModel& g() const noexcept { return g_; }
    const Eigen::MatrixXd& mixing() const noexcept { return mixing_; }
    /// The full (p+q)×(p+q) block-mixing matrix.
    Eigen::MatrixXd block_matrix() const;

private:
    RadialModel f_;
    RadialModel g_;
    double delta_;
    std::size_t n_;
    Eigen::MatrixXd mixing_;
};

/// Draws Y₁ from rng.substream(1) and Y₂ from rng.substream(2), then mixes.
PairedSample sample_konijn(const KonijnModel& model, const RandomStream& rng);

}  // namespace mvindep::radial
