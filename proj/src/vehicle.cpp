#include "platoon/vehicle.hpp"

#include <stdexcept>

namespace platoon {

double nonlinear_derivative(const VehicleState& x, double c, const VehicleParams& p, double rho) {
    const double aero = rho * p.cross_section * p.drag_coeff;
    const double f = -(x.acceleration + aero * x.velocity * x.velocity / (2.0 * p.mass) + p.mech_drag / p.mass) /
                         p.engine_tc -
                     aero * x.velocity * x.acceleration / p.mass;
    const double g = 1.0 / (p.engine_tc * p.mass);
    return f + g * c;
}

double feedback_linearize(double u, const VehicleState& x, const VehicleParams& p, double rho) {
    const double aero = rho * p.cross_section * p.drag_coeff;
    return u * p.mass + 0.5 * aero * x.velocity * x.velocity + p.mech_drag +
           p.engine_tc * aero * x.velocity * x.acceleration;
}

LinearThirdOrder linear_model(double tau) {
    if (!(tau > 0)) throw std::invalid_argument("linear_model: tau must be positive");
    LinearThirdOrder m;
    m.A << 0, 1, 0, 0, 0, 1, 0, 0, -1.0 / tau;
    m.B << 0, 0, 1.0 / tau;
    return m;
}

}  // namespace platoon
