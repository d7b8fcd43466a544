#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace plum {

/// Equal-length depth sections c_0 = 0 < c_1 < ... < c_K, c_i = i * dc.
class SectionGrid {
public:
    SectionGrid(double dc, std::size_t sections);

    /// Smallest grid of spacing dc whose extent reaches `depth`.
    static SectionGrid covering(double depth, double dc = 1.0);

    double spacing() const { return dc_; }
    std::size_t sections() const { return k_; }
    double boundary(std::size_t i) const { return static_cast<double>(i) * dc_; }
    double extent() const { return boundary(k_); }

    /// Index i of the section [c_i, c_{i+1}) holding d; K-1 for d == c_K.
    std::size_t section_of(double d) const;

    friend bool operator==(const SectionGrid&, const SectionGrid&) = default;

private:
    double dc_;
    std::size_t k_;
};

/// Which neighbour a section's slope remembers in the gamma-AR construction.
enum class SlopeRecursion {
    /// m_K = alpha_K, m_j = w m_{j+1} + (1-w) alpha_j (default).
    FromBottom,
    /// m_1 = alpha_1, m_j = w m_{j-1} + (1-w) alpha_j, as in Bacon.
    FromTop,
};

/// Accumulation slopes (yr/cm) from the gamma innovations and memory w.
std::vector<double> slopes_from_innovations(std::span<const double> alpha, double omega,
                                            SlopeRecursion recursion = SlopeRecursion::FromBottom);

/// In-place variant for hot loops; `slopes` must have alpha.size() entries.
void slopes_from_innovations(std::span<const double> alpha, double omega,
                             SlopeRecursion recursion, std::span<double> slopes);

/// Piecewise-linear age-depth model; age 0 at the core top.
class AgeDepthFunction {
public:
    AgeDepthFunction(SectionGrid grid, std::vector<double> slopes, double omega = 0.0);

    const SectionGrid& grid() const { return grid_; }
    std::span<const double> slopes() const { return slopes_; }
    double omega() const { return omega_; }

    /// Age (yr before collection) at depth d in [0, c_K].
    double age_at(double d) const;

private:
    SectionGrid grid_;
    std::vector<double> slopes_;
    std::vector<double> cumulative_;  // cumulative_[i] = sum_{j<=i} m_j, cumulative_[0] = 0
    double omega_;
};

/// Stateless evaluation of the same model without building an object.
/// `cumulative` must hold K+1 prefix sums of `slopes` as produced by
/// prefix_sums().
double age_at(const SectionGrid& grid, std::span<const double> slopes,
              std::span<const double> cumulative, double d);

void prefix_sums(std::span<const double> slopes, std::span<double> cumulative);

}  // namespace plum
