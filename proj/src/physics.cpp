#include "plum/physics.hpp"

#include <cmath>
#include <string>

#include "plum/error.hpp"

namespace plum {

double DecayConstants::one_year_fraction() const { return -std::expm1(-lambda) / lambda; }

double unsupported_activity(double phi, double t_top, double t_bottom,
                            const DecayConstants& decay) {
    if (!(phi > 0.0)) throw std::invalid_argument("supply must be positive");
    if (!(t_top >= 0.0)) throw std::invalid_argument("ages must be non-negative");
    if (!(t_top <= t_bottom)) throw std::invalid_argument("t_top must not exceed t_bottom");
    // e^{-l a} - e^{-l b} = e^{-l a} (1 - e^{-l (b - a)}), stable for thin slices
    const double l = decay.lambda;
    return phi / l * std::exp(-l * t_top) * -std::expm1(-l * (t_bottom - t_top));
}

double supported_activity(double p_s, double rho) {
    if (!(p_s >= 0.0)) throw std::invalid_argument("supported concentration must be >= 0");
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    return p_s * rho;
}

double chronology_limit(double phi, double a_l, const DecayConstants& decay) {
    if (!(phi > 0.0)) throw std::invalid_argument("supply must be positive");
    if (!(a_l > 0.0)) throw std::invalid_argument("detection threshold must be positive");
    const double top_layer = decay.one_year_fraction() * phi;
    if (a_l >= top_layer) {
        throw InfeasibleError("detection threshold " + std::to_string(a_l) +
                              " is not below the surface one-year activity " +
                              std::to_string(top_layer) + "; no datable interval");
    }
    return std::log(top_layer / a_l) / decay.lambda;
}

}  // namespace plum
