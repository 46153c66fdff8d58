#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

constexpr int kDim = 3;

struct Series {
    // psi = A + alpha r^{2-b} + beta r^2 + delta r^{4-2b} + eps r^{4-b}
    double A, alpha, beta, delta, eps, b;
    double value(double r) const {
        return A + alpha * std::pow(r, 2.0 - b) + beta * r * r + delta * std::pow(r, 4.0 - 2.0 * b) +
               eps * std::pow(r, 4.0 - b);
    }
    double slope(double r) const {
        return alpha * (2.0 - b) * std::pow(r, 1.0 - b) + 2.0 * beta * r +
               delta * (4.0 - 2.0 * b) * std::pow(r, 3.0 - 2.0 * b) +
               eps * (4.0 - b) * std::pow(r, 3.0 - b);
    }
};

Series expand_origin(double A, double b, double b1) {
    Series s;
    s.A = A;
    s.b = b;
    s.alpha = -A * A / ((2.0 - b) * (kDim - b));
    s.beta = b1 * A / (2.0 * kDim);
    s.delta = -2.0 * A * s.alpha / ((4.0 - 2.0 * b) * (kDim + 2.0 - 2.0 * b));
    s.eps = (b1 * s.alpha - 2.0 * A * s.beta) / ((4.0 - b) * (kDim + 2.0 - b));
    return s;
}

struct State {
    double psi, dpsi;
};

// One RK4 step of the radial ODE written as a first-order system.
State rk4_step(const State& y, double r, double h, double b, double b1) {
    auto f = [&](double rr, const State& s) -> State {
        double acc = -(kDim - 1) / rr * s.dpsi + b1 * s.psi - std::pow(rr, -b) * s.psi * s.psi;
        return {s.dpsi, acc};
    };
    State k1 = f(r, y);
    State k2 = f(r + 0.5 * h, {y.psi + 0.5 * h * k1.psi, y.dpsi + 0.5 * h * k1.dpsi});
    State k3 = f(r + 0.5 * h, {y.psi + 0.5 * h * k2.psi, y.dpsi + 0.5 * h * k2.dpsi});
    State k4 = f(r + h, {y.psi + h * k3.psi, y.dpsi + h * k3.dpsi});
    return {y.psi + h / 6.0 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi),
            y.dpsi + h / 6.0 * (k1.dpsi + 2 * k2.dpsi + 2 * k3.dpsi + k4.dpsi)};
}

double local_step(double r) { return std::min(2e-3, std::max(1e-5, 0.01 * r)); }

}  // namespace

ShootingGroundState::ShootingGroundState(double b, double b1, double r_match)
    : b_(b), b1_(b1), r_match_(r_match) {
    // bracket the critical amplitude, then bisect
    double lo = 0.0, hi = 0.0;
    for (double A = 1.0; A <= 64.0; A += 1.0) {
        if (classify(A) == Fate::Crossed) {
            hi = A;
            lo = A - 1.0;
            break;
        }
    }
    if (hi == 0.0) throw std::runtime_error("shooting: no bracket found");
    if (lo == 0.0) lo = 0.5;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (classify(mid) == Fate::Crossed ? hi : lo) = mid;
    }
    A_star_ = 0.5 * (lo + hi);
}

ShootingGroundState::Fate ShootingGroundState::classify(double A) const {
    const double r0 = 1e-3;
    Series s = expand_origin(A, b_, b1_);
    State y{s.value(r0), s.slope(r0)};
    double r = r0;
    while (r < 18.0) {
        double h = local_step(r);
        y = rk4_step(y, r, h, b_, b1_);
        r += h;
        if (y.psi < 0.0) return Fate::Crossed;
        if (y.psi > 2.0 * A) return Fate::TurnedUp;
        if (y.dpsi > 0.0 && y.psi > 1e-10 * A && r > 0.5) return Fate::TurnedUp;
    }
    return y.psi >= 0.0 ? Fate::TurnedUp : Fate::Crossed;
}

std::vector<double> ShootingGroundState::profile(const std::vector<double>& radii) const {
    std::vector<double> out(radii.size());
    const double r0 = 1e-3;
    Series s = expand_origin(A_star_, b_, b1_);
    State y{s.value(r0), s.slope(r0)};
    double r = r0;
    double C_tail = 0.0;
    bool tail_set = false;
    std::size_t i = 0;
    while (i < radii.size() && radii[i] <= r0) {
        out[i] = s.value(std::max(radii[i], 0.0));
        if (radii[i] == 0.0) out[i] = A_star_;
        ++i;
    }
    while (i < radii.size()) {
        double target = radii[i];
        if (target > r_match_) break;
        while (r < target) {
            double h = std::min(local_step(r), target - r);
            y = rk4_step(y, r, h, b_, b1_);
            r += h;
        }
        out[i++] = y.psi;
    }
    if (!tail_set) {
        // integrate on to r_match and fit the exact linear tail C e^{-sqrt(b1) r}/r
        while (r < r_match_) {
            double h = std::min(local_step(r), r_match_ - r);
            y = rk4_step(y, r, h, b_, b1_);
            r += h;
        }
        C_tail = y.psi * r_match_ * std::exp(std::sqrt(b1_) * r_match_);
        tail_set = true;
    }
    for (; i < radii.size(); ++i)
        out[i] = C_tail * std::exp(-std::sqrt(b1_) * radii[i]) / radii[i];
    return out;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double acc, int depth) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), mh = 0.5 * (mid + hi);
        double flm = f(lm), fmh = f(mh);
        double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        double right = (hi - mid) / 6.0 * (fmid + 4.0 * fmh + fhi);
        if (depth > 48 || std::abs(left + right - acc) < 15.0 * tol)
            return left + right + (left + right - acc) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, depth + 1) +
               rec(mid, hi, fmid, fmh, fhi, right, depth + 1);
    };
    double fmid = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (f(a) + 4.0 * fmid + f(b));
    return rec(a, b, f(a), fmid, f(b), whole, 0);
}

}  // namespace oracles
