#include "tesopt/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tesopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Builds either model; peak-shift adds the global cost cap and peak rows.
DispatchLp build_model(const HouseholdCase& hh, double initial_soc, bool peak_shift,
                       double baseline_cost, const std::vector<double>* fan_constants) {
    hh.validate();
    const int n = static_cast<int>(hh.hours());
    const bool has_tes = hh.tes.has_value();
    const bool has_gas = hh.gas.has_value();

    DispatchLp model;
    model.household = &hh;
    model.n_hours = n;
    model.initial_soc_kwh = initial_soc;
    model.baseline_cost = baseline_cost;

    model.off_load = 0;
    model.off_elec = 1;
    int stride = 2;  // L, E
    if (has_tes) {
        model.off_charge = 2;
        model.off_discharge = 3;
        model.off_soc = 4;
        stride = 5;
    }
    if (has_gas) {
        model.off_gas = stride;
        ++stride;
    }
    model.stride = stride;

    // Fan handling: constant-ratio models enter the COP row exactly;
    // higher-order polynomials are billed as per-hour constants.
    double fan_c0 = 0.0;
    bool fan_embedded = false;
    std::vector<double> fan_fixed;
    if (!hh.fan.is_zero()) {
        if (hh.fan.is_constant() && !fan_constants) {
            fan_c0 = clamp01(hh.fan.coefficients.empty() ? 0.0 : hh.fan.coefficients[0]);
            fan_embedded = true;
        } else if (fan_constants) {
            fan_fixed = *fan_constants;
        } else {
            // linearized around demand; solve_cost_min iterates this
            fan_fixed.resize(static_cast<size_t>(n));
            for (int t = 0; t < n; ++t) {
                double d = hh.profile.hourly_load_kwh[static_cast<size_t>(t)];
                fan_fixed[static_cast<size_t>(t)] = hh.fan.ratio(d) * d;
            }
        }
    }
    model.fan_embedded = fan_embedded;
    model.fan_constants = fan_fixed;

    auto& lp = model.lp;
    const TesDevice* tes = has_tes ? &*hh.tes : nullptr;
    const double eta_d = tes ? tes->discharge_efficiency : 1.0;
    const double eta_c = tes ? tes->charge_efficiency : 1.0;
    const double e_cap = tes ? tes->energy_capacity_kwh : 0.0;
    const double mass = tes ? tes->mass_kg : 0.0;

    // columns, hour-major so the normal equations stay banded
    for (int t = 0; t < n; ++t) {
        const bool gas_hour = hh.is_gas_hour(static_cast<size_t>(t));
        const double rate = hh.rates[static_cast<size_t>(t)];
        lp.add_variable(0.0, 0.0, gas_hour ? 0.0 : kInf);             // L
        lp.add_variable(peak_shift ? 0.0 : rate, 0.0, kInf);          // E
        if (has_tes) {
            lp.add_variable(0.0, 0.0, gas_hour ? 0.0 : kInf);  // C
            lp.add_variable(0.0, 0.0, kInf);                   // G
            lp.add_variable(0.0, 0.0, e_cap);                  // S
        }
        if (has_gas)
            lp.add_variable(peak_shift ? 0.0 : hh.gas->price_per_kwh_thermal, 0.0,
                            gas_hour ? kInf : 0.0);  // gas thermal
    }
    // The peak-shift objective maximizes the shifted amount only.
    if (peak_shift) {
        double d_peak = hh.profile.hourly_load_kwh[peak_hour(hh.profile)];
        model.shift_var = lp.add_variable(-1.0, 0.0, d_peak);
    }

    auto vL = [&](int t) { return t * stride + model.off_load; };
    auto vE = [&](int t) { return t * stride + model.off_elec; };
    auto vC = [&](int t) { return t * stride + model.off_charge; };
    auto vG = [&](int t) { return t * stride + model.off_discharge; };
    auto vS = [&](int t) { return t * stride + model.off_soc; };
    auto vGas = [&](int t) { return t * stride + model.off_gas; };

    // rows, hour-major
    for (int t = 0; t < n; ++t) {
        const size_t ut = static_cast<size_t>(t);
        const double demand = hh.profile.hourly_load_kwh[ut];
        const double cop = hh.cop[ut];

        std::vector<std::pair<int, double>> terms;

        // demand balance: L + eta_d*G + gas >= D
        terms = {{vL(t), 1.0}};
        if (has_tes) terms.emplace_back(vG(t), eta_d);
        if (has_gas) terms.emplace_back(vGas(t), 1.0);
        lp.add_row(lp::RowType::ge, demand, terms, lp::RowTag::demand_balance);

        // ASHP capacity: L + C <= K
        terms = {{vL(t), 1.0}};
        if (has_tes) terms.emplace_back(vC(t), 1.0);
        lp.add_row(lp::RowType::le, hh.hp_capacity_kwh, terms, lp::RowTag::hp_capacity);

        // electricity coupling: COP*E >= L + C + COP*fan
        if (fan_embedded) {
            terms = {{vE(t), cop}, {vL(t), -(1.0 + cop * fan_c0)}};
            if (has_tes) {
                terms.emplace_back(vC(t), -1.0);
                terms.emplace_back(vG(t), -cop * fan_c0 * eta_d);
            }
            if (has_gas) terms.emplace_back(vGas(t), -cop * fan_c0);
            lp.add_row(lp::RowType::ge, 0.0, terms, lp::RowTag::cop_coupling);
        } else {
            double fan_kwh = fan_fixed.empty() ? 0.0 : fan_fixed[ut];
            terms = {{vE(t), cop}, {vL(t), -1.0}};
            if (has_tes) terms.emplace_back(vC(t), -1.0);
            lp.add_row(lp::RowType::ge, cop * fan_kwh, terms, lp::RowTag::cop_coupling);
        }

        if (has_tes) {
            // SOC recursion: S_t - S_{t-1} - eta_c*C_t + G_t = 0
            terms = {{vS(t), 1.0}, {vC(t), -eta_c}, {vG(t), 1.0}};
            double rhs = 0.0;
            if (t == 0) rhs = initial_soc;
            else terms.emplace_back(vS(t - 1), -1.0);
            lp.add_row(lp::RowType::eq, rhs, terms, lp::RowTag::soc_recursion);

            // Ragone caps at the entering state of charge
            for (int seg = 0; seg < 2; ++seg) {
                double k = e_cap > 0.0 ? mass * tes->ragone.discharge[seg].slope / e_cap : 0.0;
                double b = mass * tes->ragone.discharge[seg].intercept;
                terms = {{vG(t), 1.0}};
                double rrhs = b;
                if (t == 0) rrhs += k * initial_soc;
                else terms.emplace_back(vS(t - 1), -k);
                lp.add_row(lp::RowType::le, rrhs, terms, lp::RowTag::ragone_discharge);
            }
            for (int seg = 0; seg < 2; ++seg) {
                double k = e_cap > 0.0 ? mass * tes->ragone.charge[seg].slope / e_cap : 0.0;
                double b = mass * tes->ragone.charge[seg].intercept;
                terms = {{vC(t), 1.0}};
                double rrhs = b;
                if (t == 0) rrhs += k * initial_soc;
                else terms.emplace_back(vS(t - 1), -k);
                lp.add_row(lp::RowType::le, rrhs, terms, lp::RowTag::ragone_charge);
            }
        }
    }

    if (peak_shift) {
        // total operating cost capped at the no-TES optimum
        std::vector<std::pair<int, double>> cost_terms;
        cost_terms.reserve(static_cast<size_t>(n) * 2);
        for (int t = 0; t < n; ++t) {
            cost_terms.emplace_back(vE(t), hh.rates[static_cast<size_t>(t)]);
            if (has_gas) cost_terms.emplace_back(vGas(t), hh.gas->price_per_kwh_thermal);
        }
        lp.add_row(lp::RowType::le, baseline_cost, std::move(cost_terms), lp::RowTag::cost_cap);

        // ASHP output at the annual peak hour makes room for the shift
        int pk = static_cast<int>(peak_hour(hh.profile));
        double d_peak = hh.profile.hourly_load_kwh[static_cast<size_t>(pk)];
        std::vector<std::pair<int, double>> peak_terms = {{vL(pk), 1.0},
                                                          {model.shift_var, 1.0}};
        if (has_tes) peak_terms.emplace_back(vC(pk), 1.0);
        lp.add_row(lp::RowType::le, d_peak, std::move(peak_terms), lp::RowTag::peak_limit);
    }

    return model;
}

DispatchSolution extract(const DispatchLp& model, const lp::LpSolution& raw) {
    const HouseholdCase& hh = *model.household;
    const int n = model.n_hours;

    DispatchSolution sol;
    sol.household_id = hh.profile.household_id;
    sol.stats = raw.stats;
    sol.hp_to_load.resize(static_cast<size_t>(n));
    sol.hp_to_tes.assign(static_cast<size_t>(n), 0.0);
    sol.tes_discharge.assign(static_cast<size_t>(n), 0.0);
    sol.soc.assign(static_cast<size_t>(n), 0.0);
    sol.purchased_electricity.resize(static_cast<size_t>(n));
    sol.gas_heat.assign(static_cast<size_t>(n), 0.0);
    sol.fan_electricity.assign(static_cast<size_t>(n), 0.0);
    if (hh.tes) {
        sol.discharge_efficiency = hh.tes->discharge_efficiency;
        sol.charge_efficiency = hh.tes->charge_efficiency;
    }

    double cost = 0.0;
    for (int t = 0; t < n; ++t) {
        const size_t ut = static_cast<size_t>(t);
        const double* x = raw.x.data() + static_cast<size_t>(t) * model.stride;
        sol.hp_to_load[ut] = x[model.off_load];
        sol.purchased_electricity[ut] = x[model.off_elec];
        cost += hh.rates[ut] * sol.purchased_electricity[ut];
        if (hh.tes) {
            sol.hp_to_tes[ut] = x[model.off_charge];
            sol.tes_discharge[ut] = x[model.off_discharge];
            sol.soc[ut] = x[model.off_soc];
            if (sol.hp_to_tes[ut] > 1e-9 && sol.tes_discharge[ut] > 1e-9)
                ++sol.simultaneous_flow_hours;
        }
        if (hh.gas) {
            sol.gas_heat[ut] = x[model.off_gas];
            cost += hh.gas->price_per_kwh_thermal * sol.gas_heat[ut];
        }
        if (model.fan_embedded) {
            double served = sol.hp_to_load[ut] +
                            sol.discharge_efficiency * sol.tes_discharge[ut] + sol.gas_heat[ut];
            sol.fan_electricity[ut] = hh.fan.ratio(0.0) * served;
        } else if (!model.fan_constants.empty()) {
            sol.fan_electricity[ut] = model.fan_constants[ut];
        }
        sol.annual_discharge_kwh += sol.tes_discharge[ut];
        sol.peak_electric_demand_kwh =
            std::max(sol.peak_electric_demand_kwh, sol.purchased_electricity[ut]);
    }
    sol.annual_useful_discharge_kwh = sol.discharge_efficiency * sol.annual_discharge_kwh;
    sol.annual_cost = cost;
    sol.annual_load_kwh = hh.profile.annual_total();
    return sol;
}

}  // namespace

bool HouseholdCase::is_gas_hour(size_t t) const {
    return gas && outdoor_temp_c[t] < gas->threshold_temp_c;
}

void HouseholdCase::validate() const {
    const size_t n = hours();
    if (n == 0) throw std::invalid_argument("household case: empty load profile");
    if (cop.size() != n || rates.size() != n)
        throw std::invalid_argument("household case: series lengths differ");
    if (gas && outdoor_temp_c.size() != n)
        throw std::invalid_argument("household case: gas backup requires outdoor temperatures");
    double ashp_peak = 0.0;
    for (size_t t = 0; t < n; ++t) {
        if (profile.hourly_load_kwh[t] < 0.0)
            throw std::invalid_argument("household case: negative demand");
        if (cop[t] < 1.0 - 1e-12)
            throw std::invalid_argument("household case: effective COP below 1");
        if (rates[t] < 0.0) throw std::invalid_argument("household case: negative rate");
        if (!is_gas_hour(t)) ashp_peak = std::max(ashp_peak, profile.hourly_load_kwh[t]);
    }
    if (hp_capacity_kwh + 1e-9 < ashp_peak)
        throw std::invalid_argument("household case: ASHP capacity below peak demand");
    if (tes) {
        if (tes->mass_kg < 0.0 || tes->energy_capacity_kwh < 0.0)
            throw std::invalid_argument("household case: negative TES size");
        if (!(tes->discharge_efficiency > 0.0 && tes->discharge_efficiency <= 1.0) ||
            !(tes->charge_efficiency > 0.0 && tes->charge_efficiency <= 1.0))
            throw std::invalid_argument("household case: TES efficiencies outside (0,1]");
    }
    if (gas && gas->price_per_kwh_thermal < 0.0)
        throw std::invalid_argument("household case: negative gas price");
}

size_t peak_hour(const LoadProfile& profile) {
    size_t best = 0;
    for (size_t t = 1; t < profile.hourly_load_kwh.size(); ++t)
        if (profile.hourly_load_kwh[t] > profile.hourly_load_kwh[best]) best = t;
    return best;
}

DispatchLp build_cost_min(const HouseholdCase& household, double initial_soc_kwh) {
    return build_model(household, initial_soc_kwh, false, 0.0, nullptr);
}

DispatchLp build_peak_shift(const HouseholdCase& household, double baseline_cost) {
    return build_model(household, 0.0, true, baseline_cost, nullptr);
}

DispatchSolution solve(const DispatchLp& model, const lp::SolveOptions& options) {
    return extract(model, lp::solve_lp(model.lp, options));
}

DispatchSolution solve_cost_min(const HouseholdCase& household, const lp::SolveOptions& options) {
    if (household.fan.is_zero() || household.fan.is_constant())
        return solve(build_cost_min(household), options);

    // outer fixed point on the fan constants for nonlinear polynomials
    const size_t n = household.hours();
    std::vector<double> served(household.profile.hourly_load_kwh);
    std::vector<double> fan(n, 0.0);
    DispatchSolution sol;
    constexpr int kMaxRounds = 5;
    constexpr double kTol = 1e-4;
    for (int round = 0; round < kMaxRounds; ++round) {
        for (size_t t = 0; t < n; ++t) fan[t] = household.fan.ratio(served[t]) * served[t];
        DispatchLp model = build_model(household, 0.0, false, 0.0, &fan);
        sol = solve(model, options);
        sol.fan_iterations = round + 1;
        double drift = 0.0;
        for (size_t t = 0; t < n; ++t) {
            double s = sol.hp_to_load[t] + sol.discharge_efficiency * sol.tes_discharge[t] +
                       sol.gas_heat[t];
            double f = household.fan.ratio(s) * s;
            drift = std::max(drift, std::abs(f - fan[t]));
            served[t] = s;
        }
        if (drift <= kTol) break;
    }
    return sol;
}

PeakShiftResult solve_peak_shift(const HouseholdCase& household, double baseline_cost,
                                 const lp::SolveOptions& options) {
    DispatchLp model = build_peak_shift(household, baseline_cost);
    lp::LpSolution raw = lp::solve_lp(model.lp, options);

    PeakShiftResult result;
    result.shifted_kwh = raw.x[static_cast<size_t>(model.shift_var)];
    size_t pk = peak_hour(household.profile);
    result.peak_before_kwh = household.profile.hourly_load_kwh[pk];
    result.peak_after_kwh = result.peak_before_kwh - result.shifted_kwh;
    result.dispatch = extract(model, raw);
    return result;
}

DispatchSolution solve_horizon_blocks(const HouseholdCase& household, int block_hours,
                                      const lp::SolveOptions& options) {
    household.validate();
    if (block_hours < 1)
        throw std::invalid_argument("solve_horizon_blocks: block must be at least one hour");
    const int n = static_cast<int>(household.hours());

    DispatchSolution full;
    full.household_id = household.profile.household_id;
    if (household.tes) {
        full.discharge_efficiency = household.tes->discharge_efficiency;
        full.charge_efficiency = household.tes->charge_efficiency;
    }

    // block template; per-block slices replace the series
    HouseholdCase block;
    block.profile.household_id = household.profile.household_id;
    block.profile.year = household.profile.year;
    block.hp_capacity_kwh = household.hp_capacity_kwh;
    block.tes = household.tes;
    block.fan = household.fan;
    block.gas = household.gas;

    double soc_in = 0.0;
    lp::LpSolution previous_raw;
    for (int start = 0; start < n; start += block_hours) {
        int len = std::min(block_hours, n - start);
        auto slice = [&](const std::vector<double>& v) {
            return std::vector<double>(v.begin() + start, v.begin() + start + len);
        };
        block.profile.hourly_load_kwh = slice(household.profile.hourly_load_kwh);
        block.cop = slice(household.cop);
        block.rates = slice(household.rates);
        if (!household.outdoor_temp_c.empty())
            block.outdoor_temp_c = slice(household.outdoor_temp_c);

        DispatchLp model = build_model(block, soc_in, false, 0.0, nullptr);
        // adjacent blocks look alike; seed the duals from the previous one
        lp::SolveOptions block_options = options;
        if (start > 0 && !previous_raw.row_duals.empty())
            block_options.warm_start = &previous_raw;
        lp::LpSolution raw = lp::solve_lp(model.lp, block_options);
        DispatchSolution part = extract(model, raw);
        previous_raw = std::move(raw);

        auto append = [](std::vector<double>& dst, const std::vector<double>& src) {
            dst.insert(dst.end(), src.begin(), src.end());
        };
        append(full.hp_to_load, part.hp_to_load);
        append(full.hp_to_tes, part.hp_to_tes);
        append(full.tes_discharge, part.tes_discharge);
        append(full.soc, part.soc);
        append(full.purchased_electricity, part.purchased_electricity);
        append(full.gas_heat, part.gas_heat);
        append(full.fan_electricity, part.fan_electricity);
        full.annual_cost += part.annual_cost;
        full.annual_load_kwh += part.annual_load_kwh;
        full.annual_discharge_kwh += part.annual_discharge_kwh;
        full.simultaneous_flow_hours += part.simultaneous_flow_hours;
        full.peak_electric_demand_kwh =
            std::max(full.peak_electric_demand_kwh, part.peak_electric_demand_kwh);
        full.stats.iterations += part.stats.iterations;
        full.stats.rel_gap = std::max(full.stats.rel_gap, part.stats.rel_gap);
        full.stats.primal_inf = std::max(full.stats.primal_inf, part.stats.primal_inf);
        full.stats.dual_inf = std::max(full.stats.dual_inf, part.stats.dual_inf);

        if (household.tes)
            soc_in = std::clamp(part.soc.back(), 0.0, household.tes->energy_capacity_kwh);
    }
    full.annual_useful_discharge_kwh = full.discharge_efficiency * full.annual_discharge_kwh;
    return full;
}

double AuditReport::max_violation() const {
    return std::max({demand_violation, capacity_violation, cop_violation,
                     soc_recursion_violation, soc_bound_violation, ragone_discharge_violation,
                     ragone_charge_violation, nonneg_violation});
}

AuditReport audit_solution(const HouseholdCase& hh, const DispatchSolution& sol,
                           double initial_soc_kwh) {
    AuditReport rep;
    const size_t n = hh.hours();
    const TesDevice* tes = hh.tes ? &*hh.tes : nullptr;
    const double eta_d = sol.discharge_efficiency;
    const double eta_c = sol.charge_efficiency;

    double prev_soc = initial_soc_kwh;
    for (size_t t = 0; t < n; ++t) {
        double L = sol.hp_to_load[t];
        double C = sol.hp_to_tes[t];
        double G = sol.tes_discharge[t];
        double S = sol.soc[t];
        double E = sol.purchased_electricity[t];
        double gas = sol.gas_heat[t];

        rep.nonneg_violation = std::max({rep.nonneg_violation, -L, -C, -G, -S, -E, -gas});
        rep.demand_violation = std::max(
            rep.demand_violation, hh.profile.hourly_load_kwh[t] - (L + eta_d * G + gas));
        rep.capacity_violation = std::max(rep.capacity_violation, L + C - hh.hp_capacity_kwh);
        rep.cop_violation =
            std::max(rep.cop_violation, L + C + sol.fan_electricity[t] - hh.cop[t] * E);

        if (tes) {
            rep.soc_recursion_violation =
                std::max(rep.soc_recursion_violation, std::abs(S - prev_soc - eta_c * C + G));
            rep.soc_bound_violation =
                std::max({rep.soc_bound_violation, -S, S - tes->energy_capacity_kwh});
            double frac = tes->energy_capacity_kwh > 0.0
                              ? clamp01(prev_soc / tes->energy_capacity_kwh)
                              : 0.0;
            rep.ragone_discharge_violation =
                std::max(rep.ragone_discharge_violation,
                         G - tes->mass_kg * tes->ragone.discharge_limit(frac));
            rep.ragone_charge_violation =
                std::max(rep.ragone_charge_violation,
                         C - tes->mass_kg * tes->ragone.charge_limit(frac));
            if (C > 1e-9 && G > 1e-9) ++rep.simultaneous_flow_hours;
        }
        prev_soc = S;
    }
    return rep;
}

}  // namespace tesopt
