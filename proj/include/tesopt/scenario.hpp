#ifndef TESOPT_SCENARIO_HPP
#define TESOPT_SCENARIO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tesopt/dispatch.hpp"
#include "tesopt/economics.hpp"
#include "tesopt/inputs.hpp"
#include "tesopt/salts.hpp"
#include "tesopt/sizing.hpp"

namespace tesopt {

struct TesDesign {
    bool constant_rating = false;
    double constant_kw_per_kg = 0.100;
    double ragone_breakpoint = 0.5;
    int ragone_samples = 101;
};

struct ScenarioSpec {
    std::string id;
    std::optional<std::string> salt;  // absent = no TES
    SizingPolicy sizing;
    TesDesign design;
    bool gas_backup = false;
    std::string humidification_label = "rh20";
    std::optional<double> discharge_efficiency;  // explicit 1 - parasitic override
    double other_loss = 0.02;                    // non-parasitic round-trip penalty
};

struct RunConfig {
    std::string city = "detroit";
    double scale_factor = 0.0;
    std::filesystem::path loads_csv;
    std::filesystem::path weather_csv;
    TouTariff tariff;
    CopCurve cop_curve;
    FanLoadModel fan;
    int lifetime_years = 20;
    bool paper_compat = false;
    int horizon_block_hours = 0;  // 0 = single full-year LP
    int year = 2018;
    double gas_price_per_kwh_thermal = 0.04;
    double gas_threshold_temp_c = -4.0;
    std::vector<SaltSpec> salts;  // built-ins plus config additions/overrides
    std::vector<ScenarioSpec> scenarios;

    const SaltSpec& salt_by_name(const std::string& name) const;
};

// Scenarios 1-19: no-TES baseline, the four salts under variable, incremental
// and fixed sizing, constant-rating and gas-backup designs, and the high
// parasitic / high loss sensitivities expanded per salt ("16-MgSO4", ...).
std::vector<ScenarioSpec> default_scenario_matrix();

// Parses a JSON run configuration; relative paths resolve against the config
// file's directory. Unresolvable references throw with the reference name.
RunConfig load_config(const std::filesystem::path& path);

struct RunOverrides {
    int parallelism = 1;
    std::optional<SizingPolicy> sizing;
    std::vector<std::string> scenario_filter;  // empty = all
    std::optional<bool> paper_compat;
    std::optional<int> horizon_block_hours;
};

// Batch cost-min driver: writes results_<scenario>.csv and city_<scenario>.json
// per scenario. Returns a process exit status (nonzero if any household failed).
int run_scenarios(const RunConfig& config, const std::filesystem::path& out_dir,
                  const RunOverrides& overrides = {});

// Peak-shift driver: writes peakshift_<scenario>.csv per scenario.
int run_peak_shift(const RunConfig& config, const std::filesystem::path& out_dir,
                   const RunOverrides& overrides = {});

}  // namespace tesopt

#endif
