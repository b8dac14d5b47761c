#pragma once

// CODATA 2018 recommended values (SI). Exact values per the 2019 SI redefinition
// are marked; the rest carry their published digits.
namespace zitterdyn::codata {

inline constexpr double speed_of_light = 299792458.0;                  // m s^-1, exact
inline constexpr double reduced_planck = 1.054571817e-34;              // J s, exact (h/2pi truncated)
inline constexpr double elementary_charge = 1.602176634e-19;           // C, exact
inline constexpr double vacuum_permittivity = 8.8541878128e-12;        // F m^-1
inline constexpr double fine_structure = 7.2973525693e-3;              // dimensionless
inline constexpr double electron_mass = 9.1093837015e-31;              // kg
inline constexpr double classical_electron_radius = 2.8179403262e-15;  // m

inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace zitterdyn::codata
