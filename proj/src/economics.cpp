#include "tesopt/economics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tesopt {

EconomicsReport report(const DispatchSolution& sol_no_tes, const DispatchSolution& sol_tes,
                       double mass_kg, const SaltSpec& salt, int lifetime_years,
                       bool compat_mode) {
    if (sol_no_tes.household_id != sol_tes.household_id)
        throw std::invalid_argument("economics report: solutions are for different households ('" +
                                    sol_no_tes.household_id + "' vs '" + sol_tes.household_id +
                                    "')");
    if (sol_no_tes.purchased_electricity.size() != sol_tes.purchased_electricity.size())
        throw std::invalid_argument("economics report: solutions cover different horizons");
    if (lifetime_years <= 0) throw std::invalid_argument("economics report: lifetime must be > 0");

    EconomicsReport rep;
    rep.household_id = sol_tes.household_id;
    rep.cost_no_tes = sol_no_tes.annual_cost;
    rep.cost_tes = sol_tes.annual_cost;
    rep.paper_compat = compat_mode;
    rep.mass_kg = mass_kg;

    double savings = rep.cost_no_tes - rep.cost_tes;
    // Storage can always idle, so savings are nonnegative up to solver noise.
    double tol = 1e-6 * std::max(1.0, std::abs(rep.cost_no_tes));
    if (savings < -tol)
        throw std::runtime_error("economics report: TES dispatch cost exceeds baseline for " +
                                 rep.household_id + " (monotonicity violated by " +
                                 std::to_string(-savings) + ")");
    rep.annual_savings = std::max(savings, 0.0);

    if (mass_kg > 0.0) {
        rep.savings_per_kg = rep.annual_savings / mass_kg;
        rep.break_even_per_kg = lifetime_years * rep.annual_savings / mass_kg;
        rep.break_even_per_kwh = compat_mode
                                     ? rep.break_even_per_kg * salt.reaction_enthalpy_kwh_per_kg
                                     : rep.break_even_per_kg / salt.reaction_enthalpy_kwh_per_kg;
    }

    rep.annual_discharge_kwh = sol_tes.annual_discharge_kwh;
    rep.annual_load_kwh = sol_tes.annual_load_kwh;
    if (rep.annual_load_kwh > 0.0)
        rep.load_shift_fraction = sol_tes.annual_useful_discharge_kwh / rep.annual_load_kwh;
    rep.peak_reduction_kwh =
        sol_no_tes.peak_electric_demand_kwh - sol_tes.peak_electric_demand_kwh;
    if (sol_no_tes.peak_electric_demand_kwh > 0.0)
        rep.peak_reduction_fraction = rep.peak_reduction_kwh / sol_no_tes.peak_electric_demand_kwh;
    return rep;
}

CityAggregate aggregate_city(const std::string& city, const std::vector<EconomicsReport>& reports,
                             double scale_factor) {
    if (reports.empty())
        throw std::invalid_argument("aggregate_city: no household reports for " + city);
    if (scale_factor <= 0.0)
        throw std::invalid_argument("aggregate_city: scale factor must be > 0");

    CityAggregate agg;
    agg.city = city;
    agg.scale_factor = scale_factor;
    agg.households = static_cast<int>(reports.size());
    agg.min_savings = agg.max_savings = reports.front().annual_savings;
    agg.min_break_even_per_kwh = agg.max_break_even_per_kwh = reports.front().break_even_per_kwh;

    double sum_savings = 0.0, sum_break_even = 0.0;
    for (const auto& rep : reports) {
        agg.total_cost_no_tes += rep.cost_no_tes * scale_factor;
        agg.total_cost_tes += rep.cost_tes * scale_factor;
        agg.total_savings += rep.annual_savings * scale_factor;
        agg.total_discharge_kwh += rep.annual_discharge_kwh * scale_factor;
        agg.total_peak_reduction_kwh += rep.peak_reduction_kwh * scale_factor;
        sum_savings += rep.annual_savings;
        sum_break_even += rep.break_even_per_kwh;
        agg.min_savings = std::min(agg.min_savings, rep.annual_savings);
        agg.max_savings = std::max(agg.max_savings, rep.annual_savings);
        agg.min_break_even_per_kwh = std::min(agg.min_break_even_per_kwh, rep.break_even_per_kwh);
        agg.max_break_even_per_kwh = std::max(agg.max_break_even_per_kwh, rep.break_even_per_kwh);
    }
    agg.mean_savings = sum_savings / agg.households;
    agg.mean_break_even_per_kwh = sum_break_even / agg.households;
    return agg;
}

}  // namespace tesopt
