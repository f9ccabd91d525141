#pragma once

#include "platoon/scenario.hpp"

#include <Eigen/Dense>

namespace platoon {

struct VehicleState {
    double position = 0.0;
    double velocity = 0.0;
    double acceleration = 0.0;
};

// Longitudinal model with aerodynamic and mechanical drag:
//   da/dt = f(v, a) + g c,  g = 1 / (tau m).
double nonlinear_derivative(const VehicleState& x, double engine_input, const VehicleParams& p, double air_density);

// Engine input that turns the nonlinear model into tau da/dt + a = u.
double feedback_linearize(double u, const VehicleState& x, const VehicleParams& p, double air_density);

struct LinearThirdOrder {
    Eigen::Matrix3d A;
    Eigen::Vector3d B;
};

LinearThirdOrder linear_model(double tau);

}  // namespace platoon
