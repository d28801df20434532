#include "aniscat/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aniscat/errors.hpp"

namespace aniscat {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double ellipse_radius(const EllipticBarrier& b, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return b.ax * b.ay / std::sqrt(b.ay * b.ay * c * c + b.ax * b.ax * s * s);
}

double dipole_value(double strength, double rho_hw, double angular,
                    double rho) {
  if (rho <= rho_hw) {
    if (rho_hw > 0.0) return std::numeric_limits<double>::infinity();
  }
  if (rho <= 0.0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "dipole potential evaluated at rho = 0 without a hard wall");
  }
  return strength * angular / (rho * rho * rho);
}

double general_angular(double alpha, double beta, double gamma, double phi) {
  const double sa = std::sin(alpha);
  const double sg = std::sin(gamma);
  return sa * sg * std::cos(beta) + std::cos(alpha) * std::cos(gamma) -
         3.0 * sa * sg * std::cos(phi) * std::cos(phi - beta);
}

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCategory::kInvalidArgument, message);
}

}  // namespace

void validate(const PotentialSpec& spec) {
  std::visit(
      Overloaded{
          [](const EllipticBarrier& b) {
            require(std::isfinite(b.U0) && b.U0 >= 0.0,
                    "barrier height U0 must be finite and >= 0");
            require(std::isfinite(b.ax) && b.ax > 0.0,
                    "barrier axis a(0) must be > 0");
            require(std::isfinite(b.ay) && b.ay > 0.0,
                    "barrier axis a(pi/2) must be > 0");
            require(std::isfinite(b.edge_width) && b.edge_width >= 0.0,
                    "barrier edge width must be >= 0");
          },
          [](const DipoleGeneral& d) {
            require(std::isfinite(d.alpha) && std::isfinite(d.beta) &&
                        std::isfinite(d.gamma),
                    "dipole angles must be finite");
            require(std::isfinite(d.strength), "dipole strength must be finite");
            require(std::isfinite(d.rho_hw) && d.rho_hw >= 0.0,
                    "hard-wall radius must be >= 0");
          },
          [](const DipoleTiltedPolarized& d) {
            require(std::isfinite(d.alpha), "dipole tilt must be finite");
            require(std::isfinite(d.strength), "dipole strength must be finite");
            require(std::isfinite(d.rho_hw) && d.rho_hw >= 0.0,
                    "hard-wall radius must be >= 0");
          },
          [](const DipoleIsotropic& d) {
            require(std::isfinite(d.strength), "dipole strength must be finite");
            require(std::isfinite(d.rho_hw) && d.rho_hw >= 0.0,
                    "hard-wall radius must be >= 0");
          },
      },
      spec.model);
  require(std::isfinite(spec.dipolar_length) && spec.dipolar_length > 0.0,
          "dipolar length must be > 0");
}

double eval(const PotentialSpec& spec, double rho, double phi) {
  if (!(rho >= 0.0) || !std::isfinite(phi)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "potential evaluated outside rho >= 0 or at non-finite phi");
  }
  return std::visit(
      Overloaded{
          [&](const EllipticBarrier& b) {
            const double a = ellipse_radius(b, phi);
            if (b.edge_width > 0.0) {
              return b.U0 / (1.0 + std::exp((rho - a) / b.edge_width));
            }
            return rho <= a ? b.U0 : 0.0;
          },
          [&](const DipoleGeneral& d) {
            return dipole_value(d.strength, d.rho_hw,
                                general_angular(d.alpha, d.beta, d.gamma, phi),
                                rho);
          },
          [&](const DipoleTiltedPolarized& d) {
            const double s = std::sin(d.alpha);
            const double c = std::cos(phi);
            return dipole_value(d.strength, d.rho_hw, 1.0 - 3.0 * s * s * c * c,
                                rho);
          },
          [&](const DipoleIsotropic& d) {
            return dipole_value(d.strength, d.rho_hw, 1.0, rho);
          },
      },
      spec.model);
}

double rotated_eval(const PotentialSpec& spec, double phi_q, double rho,
                    double phi) {
  return eval(spec, rho, phi + phi_q);
}

double elliptic_radius(const PotentialSpec& spec, double phi) {
  const auto* b = std::get_if<EllipticBarrier>(&spec.model);
  if (b == nullptr) {
    throw Error(ErrorCategory::kInvalidArgument,
                "elliptic_radius requires the barrier potential");
  }
  return ellipse_radius(*b, phi);
}

double mesh_value(const PotentialSpec& spec, double rho, double h,
                  double phi) {
  const auto* b = std::get_if<EllipticBarrier>(&spec.model);
  if (b == nullptr || b->edge_width > 0.0 || !(h > 0.0)) {
    return eval(spec, rho, phi);
  }
  const double a = ellipse_radius(*b, phi);
  const double inside = std::clamp((a - (rho - 0.5 * h)) / h, 0.0, 1.0);
  return b->U0 * inside;
}

double hard_wall_radius(const PotentialSpec& spec) {
  return std::visit(
      Overloaded{
          [](const EllipticBarrier&) { return 0.0; },
          [](const DipoleGeneral& d) { return d.rho_hw; },
          [](const DipoleTiltedPolarized& d) { return d.rho_hw; },
          [](const DipoleIsotropic& d) { return d.rho_hw; },
      },
      spec.model);
}

bool is_isotropic(const PotentialSpec& spec) {
  return std::visit(
      Overloaded{
          [](const EllipticBarrier& b) { return b.ax == b.ay || b.U0 == 0.0; },
          [](const DipoleGeneral& d) {
            return std::sin(d.alpha) * std::sin(d.gamma) == 0.0;
          },
          [](const DipoleTiltedPolarized& d) { return std::sin(d.alpha) == 0.0; },
          [](const DipoleIsotropic&) { return true; },
      },
      spec.model);
}

bool is_barrier(const PotentialSpec& spec) {
  return std::holds_alternative<EllipticBarrier>(spec.model);
}

bool is_dipolar(const PotentialSpec& spec) { return !is_barrier(spec); }

std::string describe(const PotentialSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  std::visit(
      Overloaded{
          [&](const EllipticBarrier& b) {
            out << "elliptic_barrier U0=" << b.U0 << " ax=" << b.ax
                << " ay=" << b.ay << " edge_width=" << b.edge_width;
          },
          [&](const DipoleGeneral& d) {
            out << "dipole_general alpha=" << d.alpha << " beta=" << d.beta
                << " gamma=" << d.gamma << " strength=" << d.strength
                << " rho_hw=" << d.rho_hw;
          },
          [&](const DipoleTiltedPolarized& d) {
            out << "dipole_tilted alpha=" << d.alpha
                << " strength=" << d.strength << " rho_hw=" << d.rho_hw;
          },
          [&](const DipoleIsotropic& d) {
            out << "dipole_isotropic strength=" << d.strength
                << " rho_hw=" << d.rho_hw;
          },
      },
      spec.model);
  return out.str();
}

}  // namespace aniscat
