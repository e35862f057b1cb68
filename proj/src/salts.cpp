#include "tesopt/salts.hpp"

#include <cmath>
#include <stdexcept>

namespace tesopt {

double soc_rate_per_min(const RateModel& model, double soc) {
    switch (model.kind) {
        case RateModelKind::exponential:
            return model.coeff_per_min * soc;
        case RateModelKind::cubic:
            return model.coeff_per_min * std::cbrt(soc * soc);
    }
    throw std::logic_error("unknown rate model");
}

void SaltSpec::validate() const {
    if (name.empty())
        throw std::invalid_argument("salt name must not be empty");
    if (reaction_enthalpy_kwh_per_kg <= 0.0)
        throw std::invalid_argument("salt " + name + ": reaction enthalpy must be > 0");
    if (rate_model.coeff_per_min <= 0.0)
        throw std::invalid_argument("salt " + name + ": rate coefficient must be > 0");
    if (rated_specific_power_kw_per_kg <= 0.0)
        throw std::invalid_argument("salt " + name + ": rated specific power must be > 0");
    for (const auto& [label, eff] : humidification_efficiency) {
        if (!(eff > 0.0 && eff <= 1.0))
            throw std::invalid_argument("salt " + name + ": humidification efficiency '" +
                                        label + "' outside (0,1]");
    }
}

double SaltSpec::humidification_efficiency_for(const std::string& label) const {
    auto it = humidification_efficiency.find(label);
    if (it == humidification_efficiency.end())
        throw std::invalid_argument("salt " + name +
                                    ": no humidification efficiency for scenario '" + label + "'");
    return it->second;
}

double specific_power(const SaltSpec& salt, double soc) {
    if (!(soc >= 0.0 && soc <= 1.0))
        throw std::domain_error("specific_power: soc outside [0,1]");
    // Rate laws are per minute; model power is kW against kWh/kg enthalpy.
    return soc_rate_per_min(salt.rate_model, soc) * 60.0 * salt.reaction_enthalpy_kwh_per_kg;
}

RagoneCurve build_ragone(const SaltSpec& salt, int n_samples) {
    if (n_samples < 3)
        throw std::invalid_argument("build_ragone: need at least 3 samples");
    RagoneCurve curve;
    curve.salt_name = salt.name;
    curve.samples.reserve(static_cast<size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        double soc = static_cast<double>(i) / (n_samples - 1);
        curve.samples.push_back({soc, specific_power(salt, soc)});
    }
    return curve;
}

double RagoneCurve::value_at(double soc) const {
    if (samples.size() < 2)
        throw std::logic_error("RagoneCurve: not enough samples");
    if (soc <= samples.front().soc) return samples.front().specific_power_kw_per_kg;
    if (soc >= samples.back().soc) return samples.back().specific_power_kw_per_kg;
    for (size_t i = 1; i < samples.size(); ++i) {
        if (soc <= samples[i].soc) {
            const auto& a = samples[i - 1];
            const auto& b = samples[i];
            double w = (soc - a.soc) / (b.soc - a.soc);
            return a.specific_power_kw_per_kg +
                   w * (b.specific_power_kw_per_kg - a.specific_power_kw_per_kg);
        }
    }
    return samples.back().specific_power_kw_per_kg;
}

namespace {

LinearSegment chord(double x0, double y0, double x1, double y1) {
    LinearSegment seg;
    seg.slope = (y1 - y0) / (x1 - x0);
    seg.intercept = y0 - seg.slope * x0;
    return seg;
}

// charge(x) = discharge(1-x) applied to one discharge segment.
LinearSegment mirrored(const LinearSegment& d) {
    return {-d.slope, d.slope + d.intercept};
}

}  // namespace

RagoneLimit linearize(const RagoneCurve& curve, double breakpoint) {
    if (!(breakpoint > 0.0 && breakpoint < 1.0))
        throw std::invalid_argument("linearize: breakpoint must lie strictly inside (0,1)");
    double y0 = curve.value_at(0.0);
    double ya = curve.value_at(breakpoint);
    double y1 = curve.value_at(1.0);

    RagoneLimit lim;
    lim.breakpoint = breakpoint;
    lim.discharge[0] = chord(0.0, y0, breakpoint, ya);
    lim.discharge[1] = chord(breakpoint, ya, 1.0, y1);
    // Mirror: the charge curve's knee sits at 1 - breakpoint, with the
    // segments swapping roles.
    lim.charge[0] = mirrored(lim.discharge[1]);
    lim.charge[1] = mirrored(lim.discharge[0]);
    return lim;
}

double RagoneLimit::discharge_limit(double soc) const {
    return soc <= breakpoint ? discharge[0].at(soc) : discharge[1].at(soc);
}

double RagoneLimit::charge_limit(double soc) const {
    return soc <= 1.0 - breakpoint ? charge[0].at(soc) : charge[1].at(soc);
}

RagoneLimit RagoneLimit::constant_rating(double kw_per_kg) {
    if (kw_per_kg < 0.0)
        throw std::invalid_argument("constant_rating: negative power cap");
    RagoneLimit lim;
    lim.breakpoint = 0.5;
    lim.discharge[0] = lim.discharge[1] = {0.0, kw_per_kg};
    lim.charge[0] = lim.charge[1] = {0.0, kw_per_kg};
    return lim;
}

double humidification_efficiency(double delta, double h_vap_kwh_per_kg,
                                 double h_rx_kwh_per_kg) {
    if (delta < 0.0 || delta > 1.0)
        throw std::domain_error("humidification_efficiency: delta outside [0,1]");
    if (h_vap_kwh_per_kg <= 0.0 || h_rx_kwh_per_kg <= 0.0)
        throw std::domain_error("humidification_efficiency: enthalpies must be > 0");
    double eff = 1.0 - delta * h_vap_kwh_per_kg / h_rx_kwh_per_kg;
    return eff < 0.0 ? 0.0 : eff;
}

}  // namespace tesopt
