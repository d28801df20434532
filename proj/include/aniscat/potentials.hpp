// Interaction models: the elliptic-base barrier and the dipole-dipole family.
// All parameters are in internal units (hbar = mu = 1).
#pragma once

#include <string>
#include <variant>

namespace aniscat {

// U0 inside the ellipse with polar radius a(phi), zero outside. A positive
// edge_width replaces the step by U0 / (1 + exp((rho - a(phi)) / edge_width)).
struct EllipticBarrier {
  double U0 = 0.0;
  double ax = 1.0;  // a(0)
  double ay = 1.0;  // a(pi/2)
  double edge_width = 0.0;
};

// d1 d2 / rho^3 [sin a sin g cos b + cos a cos g - 3 sin a sin g cos(phi)
// cos(phi - b)] outside the hard wall rho <= rho_hw.
struct DipoleGeneral {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double strength = 1.0;  // d1 d2
  double rho_hw = 0.0;
};

// Parallel dipoles tilted by alpha: d^2 / rho^3 [1 - 3 sin^2(alpha) cos^2(phi)].
struct DipoleTiltedPolarized {
  double alpha = 0.0;
  double strength = 1.0;  // d^2
  double rho_hw = 0.0;
};

// Dipoles perpendicular to the plane: d1 d2 / rho^3.
struct DipoleIsotropic {
  double strength = 1.0;
  double rho_hw = 0.0;
};

enum class Units {
  kBarrier,  // hbar = mu = 1
  kDipolar,  // lengths in D, energies in E_D (converted at the config layer)
};

struct PotentialSpec {
  std::variant<EllipticBarrier, DipoleGeneral, DipoleTiltedPolarized,
               DipoleIsotropic>
      model;
  Units units = Units::kBarrier;
  // Dipolar length D in internal units; used for the eikonal reference.
  double dipolar_length = 1.0;
};

// Throws kInvalidArgument when parameters violate the model invariants.
void validate(const PotentialSpec& spec);

// Potential energy at (rho, phi); +infinity inside a hard wall.
double eval(const PotentialSpec& spec, double rho, double phi);

// U(rho, phi + phi_q): the potential turned by the incident-direction angle.
double rotated_eval(const PotentialSpec& spec, double phi_q, double rho,
                    double phi);

// Polar radius of the barrier base, a_x a_y / sqrt(a_y^2 cos^2 + a_x^2 sin^2).
double elliptic_radius(const PotentialSpec& spec, double phi);

// Value used on a radial mesh of spacing h: the radial cell average over
// [rho - h/2, rho + h/2] for a sharp barrier edge, the point value otherwise.
double mesh_value(const PotentialSpec& spec, double rho, double h, double phi);

// Inner Dirichlet radius (0 for the barrier).
double hard_wall_radius(const PotentialSpec& spec);

bool is_isotropic(const PotentialSpec& spec);
bool is_barrier(const PotentialSpec& spec);
bool is_dipolar(const PotentialSpec& spec);

// Short human-readable description for logs and CSV headers.
std::string describe(const PotentialSpec& spec);

}  // namespace aniscat
