// zeno.hpp — survival weak values, weak dwell time and the coherence/dwell ratio
//
// Between two field interactions at t_i and t_f (τ_m = t_f − t_i) the weak
// value of the survival projector for a post-selected state offset by kΔE is
//
//     P_w(t) = e^{−Γ(t−t_i)} [1 − e^{(−Γ + ikΔE)(t_f−t)}] / [1 − e^{(−Γ + ikΔE)τ_m}]
//
// For kΔE = 0 it is real and its time integral is the weak dwell time
//
//     τ_D = (1/Γ)[1 − Γτ_m/(e^{Γτ_m} − 1)]  →  1/(2/τ_m + Γ)  for Γτ_m ≪ 1.

#pragma once

#include <complex>

#include "sqz/coherence.hpp"

namespace sqz {

struct MeasurementWindow {
    double t_i{0.0};
    double t_f{1.0};
    double k_delta_E{0.0};

    double tau_m() const { return t_f - t_i; }

    static MeasurementWindow from_duration(double tau_m, double t_i = 0.0, double k_delta_E = 0.0);
};

// Throws InvalidParameter unless t_f > t_i and all fields are finite.
void validate(const MeasurementWindow& w);

// General complex survival weak value. Throws InvalidParameter when t lies
// outside [t_i, t_f] or Γ < 0.
cplx survival_weak_value(double t, const MeasurementWindow& w, double gamma_decay);

// The kΔE = 0 specialisation, evaluated in real arithmetic.
double survival_weak_value_real(double t, const MeasurementWindow& w, double gamma_decay);

// Closed-form weak dwell time; Γ = 0 gives τ_m/2.
double dwell_time_weak(double gamma_decay, double tau_m);

// Frequent-measurement limit 1/(2/τ_m + Γ).
double dwell_time_frequent(double gamma_decay, double tau_m);

struct ZenoRatio {
    double ratio{0.0};
    bool sustainable{false};  // ratio > 1
};

// τ_C/τ_D = ½ + 1/(τ_m Γ); Γ = 0 gives an infinite, sustainable ratio.
ZenoRatio coherence_dwell_ratio(double gamma_decay, double tau_m);

// Fills tau_D (frequent-measurement form) and ratio for a non-negative Γ.
// Reports with gain are returned unchanged.
TimescaleReport with_dwell_time(TimescaleReport report, double tau_m);

}  // namespace sqz
