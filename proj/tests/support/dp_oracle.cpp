#include "support/dp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace tesopt::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;

struct DpData {
    double e_cap = 0.0;
    double mass = 0.0;
    double eta_c = 1.0;
    double eta_d = 1.0;
    const RagoneLimit* ragone = nullptr;
};

// Minimal electricity cost of moving from soc_prev to soc_next in hour t,
// or +inf when the transition violates a cap. Pure charge or pure discharge
// is optimal for a fixed SOC delta whenever eta_c*eta_d <= 1.
double hour_cost(const HouseholdCase& hh, const DpData& dp, int t, double soc_prev,
                 double soc_next, double peak_cap) {
    const double demand = hh.profile.hourly_load_kwh[static_cast<size_t>(t)];
    const double rate = hh.rates[static_cast<size_t>(t)];
    const double cop = hh.cop[static_cast<size_t>(t)];
    const double delta = soc_next - soc_prev;
    const double frac = dp.e_cap > 0.0 ? std::clamp(soc_prev / dp.e_cap, 0.0, 1.0) : 0.0;

    double load = demand, charge = 0.0, discharge = 0.0;
    if (delta >= 0.0) {
        charge = delta / dp.eta_c;
        if (charge > dp.mass * dp.ragone->charge_limit(frac) + kFeasTol) return kInf;
    } else {
        discharge = -delta;
        if (discharge > dp.mass * dp.ragone->discharge_limit(frac) + kFeasTol) return kInf;
        load = std::max(0.0, demand - dp.eta_d * discharge);
    }
    if (load + charge > std::min(hh.hp_capacity_kwh, peak_cap) + kFeasTol) return kInf;
    return rate * (load + charge) / cop;
}

double dp_cost_with_peak_cap(const HouseholdCase& hh, int grid_points, double peak_cap) {
    const int n = static_cast<int>(hh.hours());
    if (!hh.tes || hh.tes->energy_capacity_kwh <= 0.0) {
        // no storage: serve demand directly
        double cost = 0.0;
        size_t pk = peak_hour(hh.profile);
        for (int t = 0; t < n; ++t) {
            double cap = (static_cast<size_t>(t) == pk) ? peak_cap : kInf;
            if (hh.profile.hourly_load_kwh[static_cast<size_t>(t)] > cap + kFeasTol) return kInf;
            cost += hh.rates[static_cast<size_t>(t)] *
                    hh.profile.hourly_load_kwh[static_cast<size_t>(t)] /
                    hh.cop[static_cast<size_t>(t)];
        }
        return cost;
    }

    DpData dp;
    dp.e_cap = hh.tes->energy_capacity_kwh;
    dp.mass = hh.tes->mass_kg;
    dp.eta_c = hh.tes->charge_efficiency;
    dp.eta_d = hh.tes->discharge_efficiency;
    dp.ragone = &hh.tes->ragone;

    const int N = grid_points;
    const double h = dp.e_cap / (N - 1);
    const size_t pk = peak_hour(hh.profile);

    std::vector<double> dist(static_cast<size_t>(N), kInf);
    dist[0] = 0.0;  // storage starts empty
    std::vector<double> next(static_cast<size_t>(N), kInf);
    for (int t = 0; t < n; ++t) {
        double cap = (static_cast<size_t>(t) == pk) ? peak_cap : kInf;
        std::fill(next.begin(), next.end(), kInf);
        for (int i = 0; i < N; ++i) {
            if (dist[static_cast<size_t>(i)] == kInf) continue;
            for (int j = 0; j < N; ++j) {
                double c = hour_cost(hh, dp, t, i * h, j * h, cap);
                if (c == kInf) continue;
                double total = dist[static_cast<size_t>(i)] + c;
                if (total < next[static_cast<size_t>(j)]) next[static_cast<size_t>(j)] = total;
            }
        }
        dist.swap(next);
    }
    double best = kInf;
    for (double v : dist) best = std::min(best, v);
    return best;
}

}  // namespace

double dp_optimal_cost(const HouseholdCase& hh, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("dp oracle: need at least 2 grid points");
    double cost = dp_cost_with_peak_cap(hh, grid_points, kInf);
    if (cost == kInf) throw std::runtime_error("dp oracle: instance infeasible on the grid");
    return cost;
}

double dp_peak_shift_max(const HouseholdCase& hh, double baseline_cost, int grid_points) {
    const double d_peak = hh.profile.hourly_load_kwh[peak_hour(hh.profile)];
    auto feasible = [&](double shift) {
        double c = dp_cost_with_peak_cap(hh, grid_points, d_peak - shift);
        return c <= baseline_cost + 1e-9 * (1.0 + std::abs(baseline_cost));
    };
    if (!feasible(0.0)) throw std::runtime_error("dp oracle: zero shift infeasible");
    double lo = 0.0, hi = d_peak;
    if (feasible(hi)) return hi;
    for (int iter = 0; iter < 60; ++iter) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

double sample_feasible_dispatch_cost(const HouseholdCase& hh, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n = static_cast<int>(hh.hours());
    const TesDevice* tes = hh.tes ? &*hh.tes : nullptr;
    double soc = 0.0;
    double cost = 0.0;
    for (int t = 0; t < n; ++t) {
        const double demand = hh.profile.hourly_load_kwh[static_cast<size_t>(t)];
        double discharge = 0.0, charge = 0.0;
        if (tes && tes->energy_capacity_kwh > 0.0) {
            double frac = std::clamp(soc / tes->energy_capacity_kwh, 0.0, 1.0);
            if (unit(rng) < 0.5) {
                double gmax = std::min(tes->mass_kg * tes->ragone.discharge_limit(frac), soc);
                discharge = unit(rng) * std::max(0.0, gmax);
            }
        }
        double load = std::max(0.0, demand - (tes ? tes->discharge_efficiency : 1.0) * discharge);
        if (tes && tes->energy_capacity_kwh > 0.0 && discharge == 0.0 && unit(rng) < 0.5) {
            double frac = std::clamp(soc / tes->energy_capacity_kwh, 0.0, 1.0);
            double cmax = std::min({tes->mass_kg * tes->ragone.charge_limit(frac),
                                    hh.hp_capacity_kwh - load,
                                    (tes->energy_capacity_kwh - soc) / tes->charge_efficiency});
            charge = unit(rng) * std::max(0.0, cmax);
        }
        if (tes) soc = std::clamp(soc + tes->charge_efficiency * charge - discharge, 0.0,
                                  tes->energy_capacity_kwh);
        cost += hh.rates[static_cast<size_t>(t)] * (load + charge) / hh.cop[static_cast<size_t>(t)];
    }
    return cost;
}

}  // namespace tesopt::testing
