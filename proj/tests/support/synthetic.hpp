#ifndef TESOPT_TESTS_SYNTHETIC_HPP
#define TESOPT_TESTS_SYNTHETIC_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tesopt/dispatch.hpp"

namespace tesopt::testing {

// Short flat-price case used by the toy examples. TES caps are generous
// constants unless a limit is supplied.
HouseholdCase toy_case(std::vector<double> demand, std::vector<double> rates, double cop,
                       double hp_capacity, double tes_capacity_kwh, double cap_kwh_per_hour,
                       double eta_c = 1.0, double eta_d = 1.0);

HouseholdCase no_tes_case(std::vector<double> demand, std::vector<double> rates,
                          std::vector<double> cop, double hp_capacity);

// Random no-TES instance for the closed-form baseline check.
HouseholdCase random_baseline_instance(std::uint64_t seed, int min_hours = 24,
                                       int max_hours = 240);

// Random storage instance whose demands, caps and capacity are multiples of
// the 201-point SOC grid spacing, with constant power caps and unit
// efficiencies; the gridded DP is exact on these.
HouseholdCase random_gridded_instance(std::uint64_t seed, int grid_points);

// Random storage instance with sloped two-segment Ragone caps and
// efficiencies below one.
HouseholdCase random_ragone_instance(std::uint64_t seed);

// Deterministic synthetic city (loads + weather CSVs) for pipeline tests.
void write_synthetic_city(const std::filesystem::path& dir, int n_households,
                          std::uint64_t seed);

}  // namespace tesopt::testing

#endif
