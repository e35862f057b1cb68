#ifndef TESOPT_SIZING_HPP
#define TESOPT_SIZING_HPP

#include <string>

#include "tesopt/salts.hpp"

namespace tesopt {

struct SizingPolicy {
    enum class Kind { variable, incremental, fixed };

    Kind kind = Kind::variable;
    double step_kg = 25.0;    // incremental rounding step
    double fixed_kg = 150.0;  // mass used for every household

    // Accepts "variable", "incremental:<kg>", "fixed:<kg>".
    static SizingPolicy parse(const std::string& text);
    std::string describe() const;
};

// Salt mass (kg) required for one household. Variable sizing takes the larger
// of the energy and power requirements at the annual peak hour.
double size_tes(const SizingPolicy& policy, const SaltSpec& salt, double peak_load_kwh);

}  // namespace tesopt

#endif
