#include <cmath>
#include <numbers>

#include "phishlens/ml/rng.hpp"

namespace phishlens::ml {

double Rng::normal(double mean, double sd) {
    // Box-Muller; one value per call keeps the stream position simple
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace phishlens::ml
