#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <utility>
#include <vector>

// Scalar interpolation functions x(tau) with an exactly known number of
// vanishing endpoint derivatives, closed-form derivatives of any supported
// order, and a declared analyticity height gamma.

namespace adsim {

enum class ScheduleFamily { Linear, SmoothPoly, RationalX0, RationalX1, Constant };

/// Polynomial schedules are entire; gamma is then a bookkeeping value chosen
/// to make bound evaluations comparable across runs (default 1/14, matching
/// the constant that fixes the expansion's derivative bounds). For the
/// rational example the poles sit at tau = +-i, so gamma must stay below 1.
constexpr double kDefaultGamma = 1.0 / 14.0;

class Schedule {
  public:
    /// x(tau) = tau.
    static Schedule linear();
    /// x(tau) = value (never interpolating).
    static Schedule constant(double value);
    /// Regularized incomplete-beta polynomial of degree 2*Nb+1 with exactly
    /// Nb vanishing derivatives at each endpoint.
    static Schedule smooth_poly(int Nb, double gamma = kDefaultGamma);
    /// The rational pair x0 = (1-tau)/(1+tau^2), x1 = 2 tau/(1+tau^2);
    /// poles at +-i, gamma declared 0.9.
    static std::pair<Schedule, Schedule> rational_example();

    /// k-th derivative at tau by closed form. k = 0 is the value itself.
    double eval(double tau, int k = 0) const;

    ScheduleFamily family() const { return family_; }
    int vanishing_derivatives() const { return nb_; }
    double gamma() const { return gamma_; }
    void set_gamma(double g);
    /// True for families with x(0)=0, x(1)=1.
    bool interpolating() const;
    /// Highest supported derivative order (INT_MAX for polynomials).
    int max_derivative_order() const;

    nlohmann::json to_json() const;
    static Schedule from_json(const nlohmann::json& j);

  private:
    Schedule() = default;
    ScheduleFamily family_ = ScheduleFamily::Linear;
    int nb_ = 0;
    double gamma_ = kDefaultGamma;
    double constant_value_ = 0.0;
    std::vector<double> coeffs_; // ascending powers, SmoothPoly only
};

struct BoundaryCheck {
    int order = 0;      // derivative order probed
    double at_zero = 0; // |x^(k)(0)|
    double at_one = 0;  // |x^(k)(1)|
};

struct BoundaryReport {
    std::vector<BoundaryCheck> checks; // orders 1..Nb+1
    bool pass = false;                 // orders <= Nb below tol, order Nb+1 above
    bool count_exceeds_requested = false;
};

/// Verifies that exactly the first `Nb` endpoint derivatives vanish (to tol).
BoundaryReport verify_boundary(const Schedule& s, int Nb, double tol);

/// Named schedule registry so Hamiltonian specs can reference coefficient
/// functions by id. Construction pre-registers "linear", "constant_one",
/// "smooth1".."smooth8", "rational_x0", "rational_x1".
class ScheduleBank {
  public:
    ScheduleBank();
    void add(const std::string& id, Schedule s);
    const Schedule& get(const std::string& id) const;
    bool contains(const std::string& id) const;

  private:
    std::map<std::string, Schedule> bank_;
};

} // namespace adsim
