#pragma once

namespace plum {

/// 210Pb decay constant, 1/yr (half-life 22.3 yr).
inline constexpr double kPb210Lambda = 0.03114;

/// Converts a concentration times an areal slice density, Bq/kg * g/cm^2, to
/// an areal activity in Bq/m^2 (1 g/cm^2 = 10 kg/m^2).
inline constexpr double kArealActivityFactor = 10.0;

struct DecayConstants {
    double lambda = kPb210Lambda;

    /// Fraction of a one-year layer's undecayed activity that survives the
    /// year on average: (1 - e^-lambda) / lambda. 0.98459 for 210Pb.
    double one_year_fraction() const;
};

/// Unsupported activity deposited between ages t_top and t_bottom under a
/// constant supply phi: (phi/lambda)(e^{-lambda t_top} - e^{-lambda t_bottom}).
/// Bq/m^2 when phi is in Bq/(m^2 yr).
double unsupported_activity(double phi, double t_top, double t_bottom,
                            const DecayConstants& decay = {});

/// Supported activity of a slice: p_s * rho, in the units of p_i * rho_i.
double supported_activity(double p_s, double rho);

/// Oldest age still carrying a resolvable unsupported signal: the age t_l at
/// which a one-year layer's activity phi e^{-lambda t_l} (1-e^{-lambda})/lambda
/// equals a_l. Inverted exactly, so the one-year factor is kept.
double chronology_limit(double phi, double a_l, const DecayConstants& decay = {});

}  // namespace plum
