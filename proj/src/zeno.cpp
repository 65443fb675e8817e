// zeno.cpp

#include "sqz/zeno.hpp"

#include <cmath>
#include <limits>

#include "sqz/errors.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

namespace {

void check_rate(double gamma_decay) {
    if (std::isnan(gamma_decay) || gamma_decay < 0.0) throw InvalidParameter("zeno: decay parameter must be >= 0");
}

void check_duration(double tau_m) {
    if (!(tau_m > 0.0) || !std::isfinite(tau_m)) throw InvalidParameter("zeno: tau_m must be finite and > 0");
}

void check_instant(double t, const MeasurementWindow& w) {
    validate(w);
    if (!(t >= w.t_i && t <= w.t_f)) throw InvalidParameter("zeno: t lies outside the measurement window");
}

// 1 − x/(e^x − 1) for x >= 0.
double dwell_bracket(double x) {
    if (x < 1e-2) {
        // x/(e^x − 1) = 1 − x/2 + x²/12 − x⁴/720 + x⁶/30240 − ...
        const double x2 = x * x;
        return x / 2.0 - x2 / 12.0 + x2 * x2 / 720.0 - x2 * x2 * x2 / 30240.0;
    }
    return 1.0 - x / std::expm1(x);
}

}  // namespace

MeasurementWindow MeasurementWindow::from_duration(double tau_m, double t_i, double k_delta_E) {
    MeasurementWindow w{t_i, t_i + tau_m, k_delta_E};
    validate(w);
    return w;
}

void validate(const MeasurementWindow& w) {
    if (!std::isfinite(w.t_i) || !std::isfinite(w.t_f) || !std::isfinite(w.k_delta_E))
        throw InvalidParameter("measurement window: fields must be finite");
    if (!(w.t_f > w.t_i)) throw InvalidParameter("measurement window: t_f must exceed t_i");
}

cplx survival_weak_value(double t, const MeasurementWindow& w, double gamma_decay) {
    check_instant(t, w);
    check_rate(gamma_decay);
    const cplx rate{-gamma_decay, w.k_delta_E};
    const cplx denom = -num::expm1(rate * w.tau_m());
    const double envelope = std::exp(-gamma_decay * (t - w.t_i));
    if (denom == 0.0) {
        // Γ = kΔE = 0: the bracket tends to (t_f − t)/τ_m.
        return envelope * (w.t_f - t) / w.tau_m();
    }
    return envelope * (-num::expm1(rate * (w.t_f - t))) / denom;
}

double survival_weak_value_real(double t, const MeasurementWindow& w, double gamma_decay) {
    check_instant(t, w);
    check_rate(gamma_decay);
    const double envelope = std::exp(-gamma_decay * (t - w.t_i));
    if (gamma_decay == 0.0) return (w.t_f - t) / w.tau_m();
    return envelope * std::expm1(-gamma_decay * (w.t_f - t)) / std::expm1(-gamma_decay * w.tau_m());
}

double dwell_time_weak(double gamma_decay, double tau_m) {
    check_rate(gamma_decay);
    check_duration(tau_m);
    if (gamma_decay == 0.0) return 0.5 * tau_m;
    return dwell_bracket(gamma_decay * tau_m) / gamma_decay;
}

double dwell_time_frequent(double gamma_decay, double tau_m) {
    check_rate(gamma_decay);
    check_duration(tau_m);
    return 1.0 / (2.0 / tau_m + gamma_decay);
}

ZenoRatio coherence_dwell_ratio(double gamma_decay, double tau_m) {
    check_rate(gamma_decay);
    check_duration(tau_m);
    if (gamma_decay == 0.0) return {std::numeric_limits<double>::infinity(), true};
    const double ratio = 0.5 + 1.0 / (tau_m * gamma_decay);
    return {ratio, ratio > 1.0};
}

TimescaleReport with_dwell_time(TimescaleReport report, double tau_m) {
    if (report.gain) return report;
    report.tau_D = dwell_time_frequent(report.gamma_decay, tau_m);
    report.ratio = coherence_dwell_ratio(report.gamma_decay, tau_m).ratio;
    return report;
}

}  // namespace sqz
