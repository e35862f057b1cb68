#ifndef TESOPT_DISPATCH_HPP
#define TESOPT_DISPATCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "tesopt/inputs.hpp"
#include "tesopt/lp.hpp"
#include "tesopt/salts.hpp"

namespace tesopt {

struct TesDevice {
    double mass_kg = 0.0;
    double energy_capacity_kwh = 0.0;  // mass * reaction enthalpy
    RagoneLimit ragone;
    double discharge_efficiency = 1.0;  // useful heat per kWh of salt energy released
    double charge_efficiency = 0.98;    // stored kWh per kWh of ASHP output
};

struct GasBackup {
    double threshold_temp_c = -4.0;     // ASHP unavailable strictly below this
    double price_per_kwh_thermal = 0.0;
};

// One household's dispatch problem: demand, prices, ASHP and optional TES.
struct HouseholdCase {
    LoadProfile profile;
    std::vector<double> cop;        // effective COP per hour (>= 1)
    std::vector<double> rates;      // $/kWh per hour
    std::vector<double> outdoor_temp_c;  // required only with gas backup
    double hp_capacity_kwh = 0.0;   // K^HP, set to the annual peak load
    std::optional<TesDevice> tes;
    FanLoadModel fan;
    std::optional<GasBackup> gas;   // absent = electric resistance backup

    size_t hours() const { return profile.hourly_load_kwh.size(); }
    bool is_gas_hour(size_t t) const;
    void validate() const;
};

struct DispatchSolution {
    std::string household_id;
    std::vector<double> hp_to_load;             // g^HP-L, kWh thermal
    std::vector<double> hp_to_tes;              // g^HP-TES, kWh thermal
    std::vector<double> tes_discharge;          // g^TES, kWh of salt energy released
    std::vector<double> soc;                    // x^TES, kWh
    std::vector<double> purchased_electricity;  // d^HP, kWh electric
    std::vector<double> gas_heat;               // kWh thermal from gas backup
    std::vector<double> fan_electricity;        // kWh electric billed at COP 1

    double annual_cost = 0.0;            // $, electricity + gas
    double annual_load_kwh = 0.0;        // total demand over the horizon
    double annual_discharge_kwh = 0.0;   // sum of tes_discharge
    double annual_useful_discharge_kwh = 0.0;
    double peak_electric_demand_kwh = 0.0;
    double discharge_efficiency = 1.0;
    double charge_efficiency = 1.0;
    int simultaneous_flow_hours = 0;  // hours charging and discharging together
    int fan_iterations = 0;
    lp::SolveStats stats;
};

// A dispatch LP plus the layout needed to extract a solution from it.
struct DispatchLp {
    lp::LinearProgram lp;
    const HouseholdCase* household = nullptr;
    int n_hours = 0;
    int stride = 0;
    int off_load = -1, off_charge = -1, off_discharge = -1, off_soc = -1,
        off_elec = -1, off_gas = -1;
    int shift_var = -1;             // d^s column (peak-shift model only)
    double initial_soc_kwh = 0.0;
    double baseline_cost = 0.0;     // peak-shift cost cap
    std::vector<double> fan_constants;  // per-hour fan kWh when not embedded
    bool fan_embedded = false;
};

// Cost-minimizing dispatch LP. Fan loads from constant-coefficient models are
// embedded exactly; higher-order models are linearized around demand (see
// solve_cost_min for the fixed-point refinement).
DispatchLp build_cost_min(const HouseholdCase& household, double initial_soc_kwh = 0.0);

// Peak-shift maximization (cost capped at the no-TES optimum, ASHP output at
// the annual peak hour reduced by the shifted amount d^s).
DispatchLp build_peak_shift(const HouseholdCase& household, double baseline_cost);

// Index of the annual peak demand hour, first occurrence on ties.
size_t peak_hour(const LoadProfile& profile);

DispatchSolution solve(const DispatchLp& model, const lp::SolveOptions& options = {});

// Cost-min solve including the fan fixed point (max 5 rounds, tol 1e-4 kWh).
DispatchSolution solve_cost_min(const HouseholdCase& household,
                                const lp::SolveOptions& options = {});

struct PeakShiftResult {
    DispatchSolution dispatch;
    double shifted_kwh = 0.0;   // d^s
    double peak_before_kwh = 0.0;
    double peak_after_kwh = 0.0;
};

PeakShiftResult solve_peak_shift(const HouseholdCase& household, double baseline_cost,
                                 const lp::SolveOptions& options = {});

// Sequential per-block solve chaining terminal SOC; an upper bound on the
// full-year optimum. Production runs use blocks of a day or more; any
// positive block length is accepted. The final block may be short.
DispatchSolution solve_horizon_blocks(const HouseholdCase& household, int block_hours,
                                      const lp::SolveOptions& options = {});

// Feasibility audit of an extracted solution against the case's constraints.
struct AuditReport {
    double demand_violation = 0.0;
    double capacity_violation = 0.0;
    double cop_violation = 0.0;
    double soc_recursion_violation = 0.0;
    double soc_bound_violation = 0.0;
    double ragone_discharge_violation = 0.0;
    double ragone_charge_violation = 0.0;
    double nonneg_violation = 0.0;
    int simultaneous_flow_hours = 0;

    double max_violation() const;
    bool ok(double tol = 1e-6) const { return max_violation() <= tol; }
};

AuditReport audit_solution(const HouseholdCase& household, const DispatchSolution& sol,
                           double initial_soc_kwh = 0.0);

}  // namespace tesopt

#endif
