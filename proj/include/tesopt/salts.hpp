#ifndef TESOPT_SALTS_HPP
#define TESOPT_SALTS_HPP

#include <map>
#include <string>
#include <vector>

namespace tesopt {

// Heat of vaporization of water, 2.26 MJ/kg expressed in kWh/kg.
inline constexpr double kWaterHeatOfVaporization = 2.26 / 3.6;

enum class RateModelKind { exponential, cubic };

// Hydration rate law fitted from TGA traces, time in minutes.
//   exponential: |dSOC/dt| = k * soc
//   cubic:       |dSOC/dt| = a * soc^(2/3)
struct RateModel {
    RateModelKind kind = RateModelKind::exponential;
    double coeff_per_min = 0.0;
};

double soc_rate_per_min(const RateModel& model, double soc);

struct SaltSpec {
    std::string name;
    double reaction_enthalpy_kwh_per_kg = 0.0;
    RateModel rate_model;
    // Published peak-load rating; used for sizing, not for dispatch caps.
    double rated_specific_power_kw_per_kg = 0.0;
    // Discharging efficiency (1 - humidification parasitic load) keyed by
    // relative-humidity scenario label, e.g. "rh20".
    std::map<std::string, double> humidification_efficiency;

    void validate() const;
    double humidification_efficiency_for(const std::string& label) const;
};

struct RagonePoint {
    double soc = 0.0;
    double specific_power_kw_per_kg = 0.0;
};

struct RagoneCurve {
    std::string salt_name;
    std::vector<RagonePoint> samples;  // soc strictly increasing over [0,1]

    double value_at(double soc) const;
};

struct LinearSegment {
    double slope = 0.0;      // kW/kg per unit soc
    double intercept = 0.0;  // kW/kg

    double at(double soc) const { return slope * soc + intercept; }
};

// Two-segment piecewise-linear power cap vs. state of charge, with the
// charging cap the mirror image of the discharging cap:
// charge(x) = discharge(1-x).
struct RagoneLimit {
    double breakpoint = 0.5;          // knee of the discharge curve
    LinearSegment discharge[2];       // over [0, breakpoint], [breakpoint, 1]
    LinearSegment charge[2];          // over [0, 1-breakpoint], [1-breakpoint, 1]

    double discharge_limit(double soc) const;
    double charge_limit(double soc) const;

    // Flat cap, same at every state of charge (constant-rating TES design).
    static RagoneLimit constant_rating(double kw_per_kg);
};

// Instantaneous specific power (kW/kg) released at the given state of charge.
double specific_power(const SaltSpec& salt, double soc);

// Samples the Ragone curve at n evenly spaced soc values including endpoints.
RagoneCurve build_ragone(const SaltSpec& salt, int n_samples);

// Chord interpolant of the curve through soc = {0, breakpoint, 1} plus its
// mirrored charging curve.
RagoneLimit linearize(const RagoneCurve& curve, double breakpoint);

// Discharging efficiency 1 - delta*h_vap/h_rx, floored at zero.
// delta = (P_target - P_outside) / P_target.
double humidification_efficiency(double delta, double h_vap_kwh_per_kg,
                                 double h_rx_kwh_per_kg);

}  // namespace tesopt

#endif
