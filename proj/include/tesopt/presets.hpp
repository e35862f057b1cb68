#ifndef TESOPT_PRESETS_HPP
#define TESOPT_PRESETS_HPP

#include <map>
#include <string>
#include <vector>

#include "tesopt/inputs.hpp"
#include "tesopt/salts.hpp"

namespace tesopt {

// The four studied salt hydrates with TGA rate fits, rated peak powers and
// humidification efficiencies per RH scenario.
const std::vector<SaltSpec>& builtin_salts();
const SaltSpec& find_salt(const std::string& name);

// Time-of-use presets for the twelve studied cities, keyed by lowercase city
// name ("detroit", "new_york", ...).
const std::vector<TouTariff>& builtin_tariffs();
const TouTariff& find_tariff(const std::string& name);

// Homes represented by each simulated household, per city.
const std::map<std::string, double>& city_scale_factors();

// Median cold-climate heat pump curve: COP 1.0 at -17 C up to 6.1 at +15 C,
// linear in between, clamped outside, floored by resistance backup.
CopCurve default_cop_curve();

}  // namespace tesopt

#endif
