#include "plum/agedepth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace plum {

SectionGrid::SectionGrid(double dc, std::size_t sections) : dc_(dc), k_(sections) {
    if (!(dc > 0.0) || !std::isfinite(dc)) throw std::invalid_argument("section length must be positive");
    if (sections == 0) throw std::invalid_argument("grid needs at least one section");
}

SectionGrid SectionGrid::covering(double depth, double dc) {
    if (!(dc > 0.0)) throw std::invalid_argument("section length must be positive");
    if (!(depth > 0.0)) throw std::invalid_argument("grid depth must be positive");
    auto k = static_cast<std::size_t>(std::ceil(depth / dc));
    // ceil of a ratio can undershoot by one ulp
    while (static_cast<double>(k) * dc < depth) ++k;
    while (k > 1 && static_cast<double>(k - 1) * dc >= depth) --k;
    return SectionGrid(dc, std::max<std::size_t>(k, 1));
}

std::size_t SectionGrid::section_of(double d) const {
    if (d >= extent()) return k_ - 1;
    if (d <= 0.0) return 0;
    auto i = static_cast<std::size_t>(d / dc_);
    if (i >= k_) i = k_ - 1;
    if (boundary(i) > d) --i;
    else if (i + 1 < k_ && boundary(i + 1) <= d) ++i;
    return i;
}

void slopes_from_innovations(std::span<const double> alpha, double omega,
                             SlopeRecursion recursion, std::span<double> slopes) {
    const std::size_t k = alpha.size();
    if (slopes.size() != k) throw std::invalid_argument("slope buffer has the wrong size");
    if (k == 0) return;
    if (recursion == SlopeRecursion::FromBottom) {
        slopes[k - 1] = alpha[k - 1];
        for (std::size_t j = k - 1; j-- > 0;) {
            slopes[j] = omega * slopes[j + 1] + (1.0 - omega) * alpha[j];
        }
    } else {
        slopes[0] = alpha[0];
        for (std::size_t j = 1; j < k; ++j) {
            slopes[j] = omega * slopes[j - 1] + (1.0 - omega) * alpha[j];
        }
    }
}

std::vector<double> slopes_from_innovations(std::span<const double> alpha, double omega,
                                            SlopeRecursion recursion) {
    if (!(omega >= 0.0 && omega <= 1.0)) throw std::invalid_argument("memory must lie in [0, 1]");
    for (double a : alpha) {
        if (!(a > 0.0)) throw std::invalid_argument("innovations must be positive");
    }
    std::vector<double> slopes(alpha.size());
    slopes_from_innovations(alpha, omega, recursion, slopes);
    return slopes;
}

void prefix_sums(std::span<const double> slopes, std::span<double> cumulative) {
    cumulative[0] = 0.0;
    for (std::size_t j = 0; j < slopes.size(); ++j) cumulative[j + 1] = cumulative[j] + slopes[j];
}

double age_at(const SectionGrid& grid, std::span<const double> slopes,
              std::span<const double> cumulative, double d) {
    if (!(d >= 0.0 && d <= grid.extent())) {
        throw std::out_of_range("depth " + std::to_string(d) + " outside the modelled range [0, " +
                                std::to_string(grid.extent()) + "]");
    }
    const std::size_t k = grid.sections();
    if (d == grid.extent()) return grid.spacing() * cumulative[k];
    const std::size_t i = grid.section_of(d);
    return grid.spacing() * cumulative[i] + slopes[i] * (d - grid.boundary(i));
}

AgeDepthFunction::AgeDepthFunction(SectionGrid grid, std::vector<double> slopes, double omega)
    : grid_(grid), slopes_(std::move(slopes)), cumulative_(slopes_.size() + 1), omega_(omega) {
    if (slopes_.size() != grid_.sections()) {
        throw std::invalid_argument("need one slope per section");
    }
    for (double m : slopes_) {
        if (!(m > 0.0)) throw std::invalid_argument("slopes must be positive");
    }
    prefix_sums(slopes_, cumulative_);
}

double AgeDepthFunction::age_at(double d) const { return plum::age_at(grid_, slopes_, cumulative_, d); }

}  // namespace plum
