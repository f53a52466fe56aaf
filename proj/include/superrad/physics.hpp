#pragma once
//
// Physical parameters of the radiating array: single-atom decay rate and
// radiation wavelength, plus the derived frequency/wavenumber quantities.
//

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace superrad {

struct PhysicalParams {
    double gamma = 1.0;      // single-atom decay rate Gamma [1/s]
    double lambda_a = 9.0;   // radiation wavelength [cm]

    static constexpr double c_light = 2.99792458e10;  // [cm/s]

    double omega_a() const { return 2.0 * std::numbers::pi * c_light / lambda_a; }
    double k_a() const { return 2.0 * std::numbers::pi / lambda_a; }

    void validate() const
    {
        if (!(gamma > 0.0))
            throw std::invalid_argument("PhysicalParams: gamma must be > 0");
        if (!(lambda_a > 0.0))
            throw std::invalid_argument("PhysicalParams: lambda_a must be > 0");
    }
};

} // namespace superrad
