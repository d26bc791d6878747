#include "adsim/schedule.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace adsim {

namespace {

constexpr int kMaxSmoothNb = 14;    // double precision budget for the beta polynomial
constexpr int kMaxRationalOrder = 8;

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * double(n - k + i) / double(i);
    return b;
}

void check_tau(double tau) {
    if (tau < -1e-12 || tau > 1.0 + 1e-12)
        throw std::invalid_argument("Schedule::eval: tau outside [0,1]");
}

// Horner evaluation of the k-th derivative of a polynomial given ascending
// coefficients.
double poly_derivative(const std::vector<double>& c, double tau, int k) {
    int deg = int(c.size()) - 1;
    if (k > deg) return 0.0;
    double acc = 0.0;
    for (int p = deg; p >= k; --p) {
        double fac = 1.0;
        for (int j = 0; j < k; ++j) fac *= double(p - j);
        acc = acc * tau + c[std::size_t(p)] * fac;
    }
    return acc;
}

// k-th derivative of the rational pair via partial fractions over the poles
// at +-i; exact to roundoff for any order.
double rational_derivative(bool x0, double tau, int k) {
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    C res_pos, res_neg; // residues at +i and -i
    if (x0) {
        res_pos = (1.0 - i) / (2.0 * i);
        res_neg = (1.0 + i) / (-2.0 * i);
    } else {
        res_pos = 1.0;
        res_neg = 1.0;
    }
    double kfac = 1.0;
    for (int j = 2; j <= k; ++j) kfac *= double(j);
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    C val = res_pos / std::pow(C(tau, 0.0) - i, k + 1) +
            res_neg / std::pow(C(tau, 0.0) + i, k + 1);
    return sign * kfac * std::real(val);
}

} // namespace

Schedule Schedule::linear() {
    Schedule s;
    s.family_ = ScheduleFamily::Linear;
    s.nb_ = 0;
    return s;
}

Schedule Schedule::constant(double value) {
    Schedule s;
    s.family_ = ScheduleFamily::Constant;
    s.constant_value_ = value;
    s.nb_ = std::numeric_limits<int>::max();
    return s;
}

Schedule Schedule::smooth_poly(int Nb, double gamma) {
    if (Nb < 0) throw std::invalid_argument("smooth_poly: Nb must be >= 0");
    if (Nb > kMaxSmoothNb)
        throw std::invalid_argument("smooth_poly: Nb beyond double-precision budget");
    Schedule s;
    s.family_ = ScheduleFamily::SmoothPoly;
    s.nb_ = Nb;
    s.set_gamma(gamma);
    // x(tau) = int_0^tau s^Nb (1-s)^Nb ds / B(Nb+1, Nb+1); lowest power Nb+1.
    s.coeffs_.assign(std::size_t(2 * Nb + 2), 0.0);
    double beta = std::exp(2.0 * std::lgamma(Nb + 1.0) - std::lgamma(2.0 * Nb + 2.0));
    for (int i = 0; i <= Nb; ++i) {
        double c = binom(Nb, i) * ((i % 2 == 0) ? 1.0 : -1.0) / double(Nb + i + 1);
        s.coeffs_[std::size_t(Nb + i + 1)] = c / beta;
    }
    return s;
}

std::pair<Schedule, Schedule> Schedule::rational_example() {
    Schedule x0, x1;
    x0.family_ = ScheduleFamily::RationalX0;
    x1.family_ = ScheduleFamily::RationalX1;
    x0.nb_ = x1.nb_ = 0;
    x0.gamma_ = x1.gamma_ = 0.9; // poles at +-i
    return {x0, x1};
}

void Schedule::set_gamma(double g) {
    if (g <= 0.0) throw std::invalid_argument("Schedule: gamma must be positive");
    gamma_ = g;
}

bool Schedule::interpolating() const {
    return family_ == ScheduleFamily::Linear || family_ == ScheduleFamily::SmoothPoly ||
           family_ == ScheduleFamily::RationalX1;
}

int Schedule::max_derivative_order() const {
    switch (family_) {
    case ScheduleFamily::RationalX0:
    case ScheduleFamily::RationalX1:
        return kMaxRationalOrder;
    default:
        return std::numeric_limits<int>::max();
    }
}

double Schedule::eval(double tau, int k) const {
    check_tau(tau);
    if (k < 0) throw std::invalid_argument("Schedule::eval: k must be >= 0");
    if (k > max_derivative_order())
        throw std::invalid_argument("Schedule::eval: derivative order unsupported for family");
    switch (family_) {
    case ScheduleFamily::Constant:
        return k == 0 ? constant_value_ : 0.0;
    case ScheduleFamily::Linear:
        if (k == 0) return tau;
        return k == 1 ? 1.0 : 0.0;
    case ScheduleFamily::SmoothPoly: {
        // use x(tau) + x(1-tau) = 1 to evaluate on the small-tau side,
        // where the alternating coefficients do not cancel
        if (tau > 0.5) {
            double v = poly_derivative(coeffs_, 1.0 - tau, k);
            if (k == 0) return 1.0 - v;
            return (k % 2 == 1) ? v : -v;
        }
        return poly_derivative(coeffs_, tau, k);
    }
    case ScheduleFamily::RationalX0:
        return rational_derivative(true, tau, k);
    case ScheduleFamily::RationalX1:
        return rational_derivative(false, tau, k);
    }
    throw std::logic_error("Schedule::eval: unreachable");
}

BoundaryReport verify_boundary(const Schedule& s, int Nb, double tol) {
    BoundaryReport rep;
    int cap = std::min(Nb + 1, s.max_derivative_order());
    bool low_ok = true;
    for (int k = 1; k <= cap; ++k) {
        BoundaryCheck c;
        c.order = k;
        c.at_zero = std::abs(s.eval(0.0, k));
        c.at_one = std::abs(s.eval(1.0, k));
        rep.checks.push_back(c);
        double worst = std::max(c.at_zero, c.at_one);
        if (k <= Nb && worst > tol) low_ok = false;
        if (k == Nb + 1 && worst <= tol) rep.count_exceeds_requested = true;
    }
    rep.pass = low_ok;
    return rep;
}

nlohmann::json Schedule::to_json() const {
    nlohmann::json j;
    switch (family_) {
    case ScheduleFamily::Linear:
        j["family"] = "linear";
        break;
    case ScheduleFamily::SmoothPoly:
        j["family"] = "smooth_poly";
        break;
    case ScheduleFamily::RationalX0:
        j["family"] = "rational_x0";
        break;
    case ScheduleFamily::RationalX1:
        j["family"] = "rational_x1";
        break;
    case ScheduleFamily::Constant:
        j["family"] = "constant";
        break;
    }
    j["Nb"] = (family_ == ScheduleFamily::Constant) ? 0 : nb_;
    j["gamma"] = gamma_;
    j["params"] = nlohmann::json::object();
    if (family_ == ScheduleFamily::Constant) j["params"]["value"] = constant_value_;
    return j;
}

Schedule Schedule::from_json(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    double gamma = j.value("gamma", kDefaultGamma);
    Schedule s;
    if (family == "linear") {
        s = linear();
    } else if (family == "smooth_poly") {
        s = smooth_poly(j.at("Nb").get<int>(), gamma);
        return s;
    } else if (family == "rational_x0") {
        s = rational_example().first;
    } else if (family == "rational_x1") {
        s = rational_example().second;
    } else if (family == "constant") {
        s = constant(j.at("params").at("value").get<double>());
    } else {
        throw std::invalid_argument("Schedule::from_json: unknown family " + family);
    }
    s.set_gamma(gamma);
    return s;
}

ScheduleBank::ScheduleBank() {
    add("linear", Schedule::linear());
    add("constant_one", Schedule::constant(1.0));
    for (int nb = 0; nb <= 8; ++nb) add("smooth" + std::to_string(nb), Schedule::smooth_poly(nb));
    auto [x0, x1] = Schedule::rational_example();
    add("rational_x0", x0);
    add("rational_x1", x1);
}

void ScheduleBank::add(const std::string& id, Schedule s) { bank_.insert_or_assign(id, std::move(s)); }

const Schedule& ScheduleBank::get(const std::string& id) const {
    auto it = bank_.find(id);
    if (it == bank_.end())
        throw std::invalid_argument("ScheduleBank: unknown coefficient function id '" + id + "'");
    return it->second;
}

bool ScheduleBank::contains(const std::string& id) const { return bank_.count(id) > 0; }

} // namespace adsim
