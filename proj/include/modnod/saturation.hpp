#pragma once

#include <cmath>

namespace modnod {

/// Saturation nonlinearity S. `Odd` is tanh; `Shifted` is the shifted tanh
///   S(z) = (tanh(z - s) + tanh(s)) / (1 - tanh(s)^2)
/// which keeps S(0) = 0 and S'(0) = 1 but drops odd symmetry.
struct Saturation {
    enum class Kind { Odd, Shifted };

    Kind kind = Kind::Odd;
    double shift = 0.0;

    static constexpr Saturation odd() { return {}; }
    static constexpr Saturation shifted(double s) { return {Kind::Shifted, s}; }

    friend bool operator==(const Saturation&, const Saturation&) = default;
};

[[nodiscard]] inline double saturation_eval(const Saturation& sat, double z) {
    if (sat.kind == Saturation::Kind::Odd) return std::tanh(z);
    const double ts = std::tanh(sat.shift);
    return (std::tanh(z - sat.shift) + ts) / (1.0 - ts * ts);
}

[[nodiscard]] inline double saturation_deriv(const Saturation& sat, double z) {
    if (sat.kind == Saturation::Kind::Odd) {
        const double t = std::tanh(z);
        return 1.0 - t * t;
    }
    const double ts = std::tanh(sat.shift);
    const double tz = std::tanh(z - sat.shift);
    return (1.0 - tz * tz) / (1.0 - ts * ts);
}

}  // namespace modnod
