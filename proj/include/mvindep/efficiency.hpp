#pragma once

// Pitman efficiencies of the van der Waerden and Wilcoxon tests relative to
// Wilks' test under Konijn alternatives, the functionals they are built from,
// and the Hodges–Lehmann lower bound with its extremal radial law.
//
// For a radial model (k, f) with radius distribution F̃_k and location score φ_f,
//   C_k(w, f) = ∫₀¹ w(u) φ_f(F̃_k⁻¹(u)) du,   D_k(w, f) = ∫₀¹ w(u) F̃_k⁻¹(u) du,
// with w = Φ̃_k⁻¹ (Gauss scores) or w(u) = u (uniform scores).

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "mvindep/extremal.hpp"
#include "mvindep/radial.hpp"

namespace mvindep::efficiency {

class ScoreKind {
public:
    enum class Tag { Gauss, Uniform, Custom };

    static ScoreKind gauss() { return ScoreKind(Tag::Gauss, "gauss", {}); }
    static ScoreKind uniform() { return ScoreKind(Tag::Uniform, "uniform", {}); }
    /// Throws ModelError unless ∫₀¹ w² is positive and finite.
    static ScoreKind custom(std::string name, std::function<double(double)> weight);

    Tag tag() const noexcept { return tag_; }
    const std::string& name() const noexcept { return name_; }
    /// w(u) for a block of dimension k (the dimension only matters for Gauss scores).
    double weight(int k, double u) const;
    /// w(1 - t), accurate for small t.
    double weight_upper(int k, double t) const;

private:
    ScoreKind(Tag tag, std::string name, std::function<double(double)> weight)
        : tag_(tag), name_(std::move(name)), weight_(std::move(weight)) {}

    Tag tag_;
    std::string name_;
    std::function<double(double)> weight_;
};

/// Quadrature tolerance used for every functional.
inline constexpr double kFunctionalTolerance = 1e-10;

double c_functional(const radial::RadialModel& model, const ScoreKind& kind);
double d_functional(const radial::RadialModel& model, const ScoreKind& kind);

struct Functionals {
    double C = 0.0;
    double D = 0.0;
};

Functionals functionals(const radial::RadialModel& model, const ScoreKind& kind);

enum class AreMethod { VanDerWaerden, Wilcoxon };

/// value = factor · (A + B) with A = 4 D_p C_p D_q C_q and B = (D_p C_q - D_q C_p)²,
/// i.e. factor · (D_p C_q + D_q C_p)². The factor is 1/(4p²q²) for van der
/// Waerden scores and 9/(4pq) for Wilcoxon scores.
struct AREResult {
    AreMethod method = AreMethod::VanDerWaerden;
    int p = 0;
    int q = 0;
    double value = 0.0;
    double C_p = 0.0;
    double D_p = 0.0;
    double C_q = 0.0;
    double D_q = 0.0;
    double A = 0.0;
    double B = 0.0;
    double factor = 0.0;
};

/// Assembles an AREResult from precomputed functionals.
AREResult assemble_are(AreMethod method, int p, const Functionals& fp, int q,
                       const Functionals& fq);

AREResult are_vdw(int p, const radial::RadialFamily& f, int q, const radial::RadialFamily& g);
AREResult are_wilcoxon(int p, const radial::RadialFamily& f, int q, const radial::RadialFamily& g);
AREResult are(AreMethod method, int p, const radial::RadialFamily& f, int q,
              const radial::RadialFamily& g);

AreMethod parse_are_method(std::string_view name);
std::string_view to_string(AreMethod method);

/// ω_k = (2c_k² + k - 1)/(8c_k).
double extremal_omega(int k);

struct BoundResult {
    int p = 0;
    int q = 0;
    double c_p = 0.0;
    double c_q = 0.0;
    double omega_p = 0.0;
    double omega_q = 0.0;
    double bound = 0.0;
};

/// 9(2c_p²+p-1)²(2c_q²+q-1)² / (2¹⁰ p q c_p² c_q²).
BoundResult hl_lower_bound(int p, int q);

struct Lemma1Record {
    int k = 0;
    double C = 0.0;
    double D = 0.0;
    double product = 0.0;
    double slack = 0.0;  // product - k²
};

/// D_k(φ, f) C_k(φ, f) against its lower bound k².
Lemma1Record verify_lemma1(int k, const radial::RadialFamily& f);

struct Lemma2Record {
    int k = 0;
    double c = 0.0;
    double omega = 0.0;
    double C = 0.0;  // C_k(I, h_{k,1})
    double D = 0.0;  // D_k(I, h_{k,1})
    double product = 0.0;
    double closed_form = 0.0;  // (2c² + k - 1)²/(32c²)
    double d_at_omega = 0.0;   // D_k(I, h_{k,ω_k}), equal to one
};

Lemma2Record verify_lemma2(int k);

inline constexpr double kGaussianNu = std::numeric_limits<double>::infinity();

/// Student t_ν marginal, or Gaussian when ν is infinite.
radial::RadialFamily table_family(double nu);

/// ARE grid for p = 2: rows (q, ν_q), columns ν_p, as in the published tables.
struct AreTable {
    AreMethod method = AreMethod::VanDerWaerden;
    int p = 2;
    std::vector<int> dims;
    std::vector<double> nus;
    std::vector<double> values;  // row-major over (q, ν_q, ν_p)

    double at(std::size_t q_index, std::size_t nu_q_index, std::size_t nu_p_index) const {
        return values[(q_index * nus.size() + nu_q_index) * nus.size() + nu_p_index];
    }
};

inline const std::vector<int> kTableDims{1, 2, 3, 4, 6, 10};
inline const std::vector<double> kTableNus{3.0, 4.0, 6.0, 12.0, kGaussianNu};

/// Each distinct (k, ν) functional pair is computed once, cells in parallel.
AreTable are_table(AreMethod method, const std::vector<int>& dims = kTableDims,
                   const std::vector<double>& nus = kTableNus, unsigned threads = 0);
AreTable table1(const std::vector<int>& dims = kTableDims,
                const std::vector<double>& nus = kTableNus, unsigned threads = 0);
AreTable table2(const std::vector<int>& dims = kTableDims,
                const std::vector<double>& nus = kTableNus, unsigned threads = 0);

/// Symmetric grid of hl_lower_bound over finite dimensions.
struct BoundTable {
    std::vector<int> dims;
    std::vector<double> values;  // row-major, full square

    double at(std::size_t i, std::size_t j) const { return values[i * dims.size() + j]; }
};

BoundTable table3(const std::vector<int>& dims = kTableDims, unsigned threads = 0);

struct TrendRow {
    int k = 0;
    double c = 0.0;
    double omega = 0.0;
    double bound_kk = 0.0;  // hl_lower_bound(k, k)
    double bound_1k = 0.0;  // hl_lower_bound(1, k)
};

/// Non-normative: c_k, ω_k and the diagonal bound for k = 1..max_k.
std::vector<TrendRow> large_k_trend(int max_k = 50);

}  // namespace mvindep::efficiency
