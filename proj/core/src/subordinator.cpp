#include "fracsemi/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

namespace fracsemi {

namespace {


// Exponent of the stretched-exponential left tail:
//   f_{1,mu}(s) ~ exp(-(1-mu) mu^(mu/(1-mu)) s^(-mu/(1-mu))),  s -> 0+.
double left_tail_exponent(double mu, double s) {
    const double q = mu / (1.0 - mu);
    return (1.0 - mu) * std::pow(mu, q) * std::pow(s, -q);
}

// s below which the density is numerically zero.
double left_cutoff(double mu) {
    const double q = mu / (1.0 - mu);
    const double a = (1.0 - mu) * std::pow(mu, q);
    return std::pow(a / 50.0, 1.0 / q);
}

// s above which the fitted algebraic tail carries mass below ~1e-9.
double right_cutoff(double mu) {
    return std::pow(std::tgamma(1.0 - mu) * 1e-9, -1.0 / mu);
}

} // namespace

double stable_density_point(double mu, double s) {
    if (s <= 0.0) return 0.0;
    if (left_tail_exponent(mu, s) > 50.0) return 0.0;

    // Large s: the expansion of the density in powers of s^(-mu) converges
    // for every s > 0 when mu < 1; it is numerically clean once the terms
    // decrease from the start (s^(-mu) <= 1/2).
    if (std::pow(s, -mu) <= 0.5) {
        double sum = 0.0, sign = 1.0;
        int tiny = 0;
        for (int k = 1; k <= 300; ++k) {
            // log-scale ratio of gamma factors: k! overflows past k = 170
            const double mag = std::exp(std::lgamma(k * mu + 1.0) -
                                        std::lgamma(k + 1.0) -
                                        (k * mu + 1.0) * std::log(s));
            const double term = sign * mag *
                                std::sin(k * std::numbers::pi * mu) /
                                std::numbers::pi;
            sum += term;
            // sin(k pi mu) hits exact zeros at rational mu, so demand a few
            // consecutive negligible terms before stopping
            if (std::abs(term) < 1e-17 * std::abs(sum)) {
                if (++tiny >= 4) break;
            } else {
                tiny = 0;
            }
            sign = -sign;
        }
        return sum;
    }

    // Otherwise the Zolotarev integral representation: a strictly positive
    // integrand, so no cancellation at any mu in (0, 1):
    //   f(s) = (q/pi) s^(-1/(1-mu)) int_0^pi A(phi) e^(-s^(-q) A(phi)) dphi,
    //   A(phi) = sin(mu phi)^q sin((1-mu) phi) / sin(phi)^(1+q),  q = mu/(1-mu).
    const double q = mu / (1.0 - mu);
    const double x = std::pow(s, -q);
    auto integrand = [&](double phi) {
        if (phi <= 0.0 || phi >= std::numbers::pi) return 0.0;
        const double a = std::pow(std::sin(mu * phi), q) *
                         std::sin((1.0 - mu) * phi) /
                         std::pow(std::sin(phi), 1.0 + q);
        const double e = x * a;
        return (e > 700.0) ? 0.0 : a * std::exp(-e);
    };
    std::function<double(double, double, double, double, double, double, int)> adapt =
        [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
            const double m = (a + b) / 2.0;
            const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
            const double flm = integrand(lm), frm = integrand(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) < 1e-14 * (1.0 + std::abs(whole)))
                return left + right;
            return adapt(a, m, fa, flm, fm, left, depth - 1) +
                   adapt(m, b, fm, frm, fb, right, depth - 1);
        };
    const double pi = std::numbers::pi;
    double integral = 0.0;
    // split into eighths so the adaptive rule sees the interior peak
    for (int seg = 0; seg < 8; ++seg) {
        const double a = pi * seg / 8.0, b = pi * (seg + 1) / 8.0;
        const double fa = integrand(a), fb = integrand(b), fm = integrand((a + b) / 2.0);
        integral += adapt(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 28);
    }
    return q / pi * std::pow(s, -1.0 / (1.0 - mu)) * integral;
}

SubordinatorDensity build_density(double mu, int node_count) {
    if (mu >= 1.0)
        throw config_error("mu = 1 is degenerate: the heat case bypasses subordination");
    if (!(mu > 0.0))
        throw config_error("build_density requires mu in (0, 1)");
    if (node_count < 64)
        throw config_error("build_density requires node_count >= 64");
    if (node_count % 2 == 0) ++node_count;  // composite Simpson wants odd

    SubordinatorDensity d;
    d.mu = mu;
    const double u0 = std::log(left_cutoff(mu));
    const double u1 = std::log(right_cutoff(mu));
    const double du = (u1 - u0) / (node_count - 1);

    d.s_nodes.resize(node_count);
    d.values.resize(node_count);
    d.weights.resize(node_count);
    for (int j = 0; j < node_count; ++j) {
        const double s = std::exp(u0 + j * du);
        d.s_nodes[j] = s;
        double f = stable_density_point(mu, s);
        if (f < 0.0) {
            if (f < -1e-12)
                throw accuracy_error("stable density node below the -1e-12 floor at s = " +
                                     std::to_string(s));
            // negative quadrature ripple: clamp and count
            double simpson = (j == 0 || j == node_count - 1) ? 1.0
                             : (j % 2 == 1)                  ? 4.0
                                                             : 2.0;
            d.clamp_mass += -f * s * du * simpson / 3.0;
            f = 0.0;
        }
        d.values[j] = f;
        // Simpson weights in log-s; ds = s du.
        const double simpson = (j == 0 || j == node_count - 1) ? 1.0
                               : (j % 2 == 1)                  ? 4.0
                                                               : 2.0;
        d.weights[j] = s * du * simpson / 3.0;
    }
    if (d.clamp_mass > 1e-8)
        throw accuracy_error("clamped quadrature mass exceeds 1e-8");

    // Algebraic right tail: fit c s^(-1-mu) at the last node and integrate.
    const double s_max = d.s_nodes.back();
    d.tail_coeff = d.values.back() * std::pow(s_max, 1.0 + mu);
    d.tail_mass = d.tail_coeff * std::pow(s_max, -mu) / mu;

    double mass = d.tail_mass;
    for (int j = 0; j < node_count; ++j) mass += d.weights[j] * d.values[j];
    d.mass_defect = std::abs(1.0 - mass);
    if (d.mass_defect > 1e-6)
        throw accuracy_error("subordinator mass defect " + std::to_string(d.mass_defect) +
                             " exceeds 1e-6 (mu = " + std::to_string(mu) +
                             ", nodes = " + std::to_string(node_count) + ")");
    return d;
}

double SubordinatorDensity::evaluate(double s) const {
    if (s <= 0.0 || s < s_nodes.front()) return 0.0;
    if (s >= s_nodes.back()) return tail_coeff * std::pow(s, -1.0 - mu);

    // Monotone cubic (Fritsch-Carlson) in u = log s.
    const double u = std::log(s);
    const double u0 = std::log(s_nodes.front());
    const double du = std::log(s_nodes[1]) - u0;
    int j = static_cast<int>((u - u0) / du);
    j = std::clamp(j, 0, static_cast<int>(s_nodes.size()) - 2);

    auto slope = [&](int i) { return (values[i + 1] - values[i]) / du; };
    auto deriv = [&](int i) -> double {
        if (i == 0) return slope(0);
        if (i == static_cast<int>(s_nodes.size()) - 1) return slope(i - 1);
        const double dl = slope(i - 1), dr = slope(i);
        if (dl * dr <= 0.0) return 0.0;
        return 2.0 * dl * dr / (dl + dr);  // harmonic mean keeps monotonicity
    };
    const double h = du;
    const double tt = (u - (u0 + j * du)) / h;
    const double y0 = values[j], y1 = values[j + 1];
    const double m0 = deriv(j) * h, m1 = deriv(j + 1) * h;
    const double t2 = tt * tt, t3 = t2 * tt;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + tt) * m0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
}

double laplace_transform(const SubordinatorDensity& density, double lambda) {
    double acc = 0.0;
    for (std::size_t j = 0; j < density.s_nodes.size(); ++j)
        acc += density.weights[j] * density.values[j] *
               std::exp(-lambda * density.s_nodes[j]);
    acc += density.tail_mass * std::exp(-lambda * density.s_nodes.back());
    return acc;
}

Field subordinate(const Field& f, const SubordinatorDensity& density, double t,
                  const std::function<Field(const Field&, double)>& heat) {
    if (!(t > 0.0))
        throw config_error("subordinate requires t > 0");
    validate(f);
    const double stretch = std::pow(t, 1.0 / density.mu);
    Field out(*f.grid, 0.0);
    for (std::size_t j = 0; j < density.s_nodes.size(); ++j) {
        const double w = density.weights[j] * density.values[j];
        if (w == 0.0) continue;
        const Field h = heat(f, density.s_nodes[j] * stretch);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * h[i];
    }
    if (density.tail_mass > 0.0) {
        const Field h = heat(f, density.s_nodes.back() * stretch);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += density.tail_mass * h[i];
    }
    return out;
}

void export_csv(const SubordinatorDensity& density, std::ostream& out) {
    out << "s,f\n";
    for (std::size_t j = 0; j < density.s_nodes.size(); ++j)
        out << density.s_nodes[j] << ',' << density.values[j] << '\n';
}

} // namespace fracsemi
