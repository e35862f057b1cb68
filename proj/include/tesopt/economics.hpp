#ifndef TESOPT_ECONOMICS_HPP
#define TESOPT_ECONOMICS_HPP

#include <string>
#include <vector>

#include "tesopt/dispatch.hpp"
#include "tesopt/salts.hpp"

namespace tesopt {

struct EconomicsReport {
    std::string household_id;
    double cost_no_tes = 0.0;
    double cost_tes = 0.0;
    double annual_savings = 0.0;
    double mass_kg = 0.0;
    double savings_per_kg = 0.0;        // $/kg/yr
    double break_even_per_kg = 0.0;     // lifetime * savings / mass
    double break_even_per_kwh = 0.0;
    bool paper_compat = false;          // multiply by enthalpy instead of dividing
    double annual_discharge_kwh = 0.0;  // salt energy released
    double load_shift_fraction = 0.0;   // useful discharge / annual load
    double peak_reduction_kwh = 0.0;    // incidental reduction of peak electric draw
    double peak_reduction_fraction = 0.0;
    double annual_load_kwh = 0.0;
};

// Compares the TES dispatch against the no-TES baseline for the same case.
// compat_mode reproduces the published $/kWh convention (multiply by
// enthalpy); the default divides, which is the dimensionally correct form.
EconomicsReport report(const DispatchSolution& sol_no_tes, const DispatchSolution& sol_tes,
                       double mass_kg, const SaltSpec& salt, int lifetime_years,
                       bool compat_mode = false);

struct CityAggregate {
    std::string city;
    double scale_factor = 0.0;
    int households = 0;
    double total_cost_no_tes = 0.0;   // scaled to the city
    double total_cost_tes = 0.0;
    double total_savings = 0.0;
    double total_discharge_kwh = 0.0;
    double total_peak_reduction_kwh = 0.0;
    double min_savings = 0.0, max_savings = 0.0, mean_savings = 0.0;
    double min_break_even_per_kwh = 0.0, max_break_even_per_kwh = 0.0,
           mean_break_even_per_kwh = 0.0;
};

CityAggregate aggregate_city(const std::string& city, const std::vector<EconomicsReport>& reports,
                             double scale_factor);

}  // namespace tesopt

#endif
