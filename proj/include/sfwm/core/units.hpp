#pragma once

// Unit conversions at the configuration boundary. Everything past this
// header works in SI base units.

namespace sfwm::units
{
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact
inline constexpr double kPlanck = 6.62607015e-34;     // J s, exact
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K, exact
inline constexpr double kPi = 3.14159265358979323846;

// Power transmission of an x dB loss: 10^(-x/10).
double db_to_linear(double loss_db);
double linear_to_db(double fraction);

double wavelength_to_frequency(double wavelength_m);
double frequency_to_wavelength(double frequency_hz);

// Full width in wavelength -> full width in frequency around a center, c*dl/l^2.
double wavelength_width_to_bandwidth(double width_m, double center_wavelength_m);

// gamma = 2 pi n2 / (lambda A_eff)  [W^-1 m^-1]
double gamma_from_n2(double n2_m2_per_w, double a_eff_m2, double wavelength_m);

// beta2 = -D lambda^2 / (2 pi c), D given in ps nm^-1 km^-1, result in s^2/m.
double beta2_from_dispersion(double d_ps_per_nm_km, double wavelength_m);
double dispersion_from_beta2(double beta2_s2_per_m, double wavelength_m);

// Power attenuation coefficient (Np/m) from a dB/cm propagation loss.
double db_per_cm_to_neper_per_m(double loss_db_per_cm);

} // namespace sfwm::units
