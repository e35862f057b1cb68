#include "tesopt/sizing.hpp"

#include <cmath>
#include <stdexcept>

namespace tesopt {

SizingPolicy SizingPolicy::parse(const std::string& text) {
    SizingPolicy p;
    if (text == "variable") {
        p.kind = Kind::variable;
        return p;
    }
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    double value = 0.0;
    if (colon != std::string::npos) {
        try {
            value = std::stod(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("sizing policy: bad number in '" + text + "'");
        }
    }
    if (head == "incremental") {
        p.kind = Kind::incremental;
        if (colon != std::string::npos) p.step_kg = value;
        if (p.step_kg <= 0.0) throw std::invalid_argument("incremental sizing step must be > 0");
        return p;
    }
    if (head == "fixed") {
        p.kind = Kind::fixed;
        if (colon != std::string::npos) p.fixed_kg = value;
        if (p.fixed_kg <= 0.0) throw std::invalid_argument("fixed sizing mass must be > 0");
        return p;
    }
    throw std::invalid_argument("unknown sizing policy '" + text +
                                "' (expected variable|incremental:<kg>|fixed:<kg>)");
}

std::string SizingPolicy::describe() const {
    switch (kind) {
        case Kind::variable: return "variable";
        case Kind::incremental: return "incremental:" + std::to_string(step_kg);
        case Kind::fixed: return "fixed:" + std::to_string(fixed_kg);
    }
    return "?";
}

double size_tes(const SizingPolicy& policy, const SaltSpec& salt, double peak_load_kwh) {
    if (peak_load_kwh < 0.0)
        throw std::invalid_argument("size_tes: negative peak load");
    if (policy.kind == SizingPolicy::Kind::fixed) {
        if (policy.fixed_kg <= 0.0) throw std::invalid_argument("fixed sizing mass must be > 0");
        return policy.fixed_kg;
    }
    if (salt.reaction_enthalpy_kwh_per_kg <= 0.0 || salt.rated_specific_power_kw_per_kg <= 0.0)
        throw std::invalid_argument("size_tes: salt " + salt.name +
                                    " has nonpositive enthalpy or rated power");
    double mass = std::max(peak_load_kwh / salt.reaction_enthalpy_kwh_per_kg,
                           peak_load_kwh / salt.rated_specific_power_kw_per_kg);
    if (policy.kind == SizingPolicy::Kind::incremental) {
        if (policy.step_kg <= 0.0) throw std::invalid_argument("incremental sizing step must be > 0");
        mass = std::ceil(mass / policy.step_kg - 1e-12) * policy.step_kg;
    }
    return mass;
}

}  // namespace tesopt
