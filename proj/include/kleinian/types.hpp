#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace kleinian {

using Real = double;
using Complex = std::complex<double>;

using Mat = Eigen::MatrixXcd;   // g x g complex, g in {1,2}
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;
using IntMat = Eigen::MatrixXi;
using IntVec = Eigen::VectorXi;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;
inline const Complex kI{0.0, 1.0};

// error taxonomy; every throwing path in the library uses one of these
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct degenerate_curve_error : error { using error::error; };
struct sheet_ambiguity_error : error { using error::error; };
struct cut_crossing_error : error { using error::error; };
struct no_convergence_error : error { using error::error; };
struct ill_conditioned_error : error { using error::error; };
struct radius_cap_error : error { using error::error; };
struct near_divisor_error : error { using error::error; };
struct inconsistent_gamma_error : error { using error::error; };
struct no_vanishing_characteristic_error : error { using error::error; };
struct degenerate_point_error : error { using error::error; };
struct near_lattice_error : error { using error::error; };
struct singular_fit_error : error { using error::error; };
struct path_near_branch_error : error { using error::error; };
struct config_error : error { using error::error; };

namespace tol {
inline constexpr Real on_curve = 1e-10;       // relative |y^2 - f(x)|
inline constexpr Real root = 1e-12;           // branch point polish target
inline constexpr Real root_separation = 1e-8; // below this the curve is degenerate
inline constexpr Real quadrature = 1e-11;     // node-doubling agreement target
inline constexpr Real quadrature_fail = 1e-8; // disagreement at cap -> no_convergence
inline constexpr Real tau_symmetry = 1e-9;
inline constexpr Real im_tau_eig = 1e-6;
inline constexpr Real legendre = 1e-8;        // relative to pi/2
inline constexpr Real kappa_symmetry = 1e-9;
inline constexpr Real divisor_probe = 1e-7;   // |sigma(iota(P))| < this * scale
inline constexpr Real near_divisor = 1e-8;    // wp evaluation guard
inline constexpr Real gamma_spread = 1e-7;
inline constexpr Real cond_omega = 1e8;
}  // namespace tol

}  // namespace kleinian
