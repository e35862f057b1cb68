#include "tesopt/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "tesopt/presets.hpp"

namespace tesopt {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

SaltSpec salt_from_json(const json& j) {
    SaltSpec s;
    s.name = j.at("name").get<std::string>();
    s.reaction_enthalpy_kwh_per_kg = j.at("reaction_enthalpy_kwh_per_kg").get<double>();
    const json& rm = j.at("rate_model");
    std::string kind = rm.at("kind").get<std::string>();
    if (kind == "exponential") s.rate_model.kind = RateModelKind::exponential;
    else if (kind == "cubic") s.rate_model.kind = RateModelKind::cubic;
    else throw std::invalid_argument("salt " + s.name + ": unknown rate model '" + kind + "'");
    s.rate_model.coeff_per_min = rm.at("coeff_per_min").get<double>();
    s.rated_specific_power_kw_per_kg = j.at("rated_specific_power_kw_per_kg").get<double>();
    if (j.contains("humidification_efficiency"))
        for (auto& [label, eff] : j.at("humidification_efficiency").items())
            s.humidification_efficiency[label] = eff.get<double>();
    s.validate();
    return s;
}

TouTariff tariff_from_json(const json& j) {
    TouTariff t;
    t.name = j.value("name", std::string("inline"));
    if (j.contains("default_rate")) t.default_rate = j.at("default_rate").get<double>();
    for (const json& js : j.value("seasons", json::array())) {
        TariffSeason season;
        for (const json& m : js.at("months")) season.months.push_back(m.get<int>());
        for (const json& d : js.value("day_types", json::array({"weekday"}))) {
            std::string dt = d.get<std::string>();
            if (dt == "weekday") season.day_types.push_back(DayType::weekday);
            else if (dt == "weekend") season.day_types.push_back(DayType::weekend);
            else throw std::invalid_argument("tariff " + t.name + ": unknown day type '" + dt + "'");
        }
        for (const json& b : js.at("bands"))
            season.bands.push_back({b.at("start_hour").get<int>(), b.at("end_hour").get<int>(),
                                    b.at("rate").get<double>()});
        t.seasons.push_back(std::move(season));
    }
    for (const json& h : j.value("holiday_days", json::array()))
        t.holiday_days.push_back(h.get<int>());
    t.validate();
    return t;
}

ScenarioSpec scenario_from_json(const json& j) {
    ScenarioSpec sc;
    if (j.at("id").is_string()) sc.id = j.at("id").get<std::string>();
    else sc.id = std::to_string(j.at("id").get<long>());
    if (j.contains("salt") && !j.at("salt").is_null())
        sc.salt = j.at("salt").get<std::string>();
    if (j.contains("sizing")) sc.sizing = SizingPolicy::parse(j.at("sizing").get<std::string>());
    if (j.contains("tes_design")) {
        const json& d = j.at("tes_design");
        if (d.is_string()) {
            if (d.get<std::string>() != "ragone")
                throw std::invalid_argument("scenario " + sc.id + ": unknown tes_design '" +
                                            d.get<std::string>() + "'");
        } else {
            if (d.contains("constant_rating_kw_per_kg")) {
                sc.design.constant_rating = true;
                sc.design.constant_kw_per_kg = d.at("constant_rating_kw_per_kg").get<double>();
            }
            sc.design.ragone_breakpoint = d.value("breakpoint", sc.design.ragone_breakpoint);
            sc.design.ragone_samples = d.value("samples", sc.design.ragone_samples);
        }
    }
    if (j.contains("backup")) {
        std::string b = j.at("backup").get<std::string>();
        if (b == "gas") sc.gas_backup = true;
        else if (b != "electric")
            throw std::invalid_argument("scenario " + sc.id + ": unknown backup '" + b + "'");
    }
    sc.humidification_label = j.value("humidification_label", sc.humidification_label);
    if (j.contains("discharge_efficiency"))
        sc.discharge_efficiency = j.at("discharge_efficiency").get<double>();
    else if (j.contains("parasitic_load"))
        sc.discharge_efficiency = 1.0 - j.at("parasitic_load").get<double>();
    sc.other_loss = j.value("other_loss", sc.other_loss);
    return sc;
}

// Everything shared across households of one run.
struct RunContext {
    const RunConfig* config = nullptr;
    std::vector<LoadProfile> profiles;
    std::vector<double> temps;
    std::vector<double> rates;
    std::vector<double> cop;
    int block_hours = 0;
    bool paper_compat = false;
    lp::SolveOptions solve_options;
};

RunContext make_context(const RunConfig& config, const RunOverrides& overrides) {
    RunContext ctx;
    ctx.config = &config;
    ctx.profiles = load_profiles(config.loads_csv);
    ctx.temps = load_weather(config.weather_csv);
    ctx.rates = hourly_rates(config.tariff, config.year);
    ctx.cop.resize(ctx.temps.size());
    for (size_t t = 0; t < ctx.temps.size(); ++t)
        ctx.cop[t] = cop_at(config.cop_curve, ctx.temps[t]);
    ctx.block_hours = overrides.horizon_block_hours.value_or(config.horizon_block_hours);
    ctx.paper_compat = overrides.paper_compat.value_or(config.paper_compat);
    return ctx;
}

HouseholdCase make_case(const RunContext& ctx, const LoadProfile& profile,
                        const ScenarioSpec& scenario, const std::optional<SizingPolicy>& sizing) {
    const RunConfig& cfg = *ctx.config;
    HouseholdCase hc;
    hc.profile = profile;
    hc.cop = ctx.cop;
    hc.rates = ctx.rates;
    hc.outdoor_temp_c = ctx.temps;
    hc.hp_capacity_kwh = profile.peak();
    hc.fan = cfg.fan;
    if (scenario.gas_backup)
        hc.gas = GasBackup{cfg.gas_threshold_temp_c, cfg.gas_price_per_kwh_thermal};

    if (scenario.salt) {
        const SaltSpec& salt = cfg.salt_by_name(*scenario.salt);
        SizingPolicy policy = sizing.value_or(scenario.sizing);
        TesDevice tes;
        tes.mass_kg = size_tes(policy, salt, profile.peak());
        tes.energy_capacity_kwh = tes.mass_kg * salt.reaction_enthalpy_kwh_per_kg;
        if (scenario.design.constant_rating) {
            tes.ragone = RagoneLimit::constant_rating(scenario.design.constant_kw_per_kg);
        } else {
            tes.ragone = linearize(build_ragone(salt, scenario.design.ragone_samples),
                                   scenario.design.ragone_breakpoint);
        }
        tes.discharge_efficiency =
            scenario.discharge_efficiency
                ? *scenario.discharge_efficiency
                : salt.humidification_efficiency_for(scenario.humidification_label);
        tes.charge_efficiency = 1.0 - scenario.other_loss;
        hc.tes = tes;
    }
    return hc;
}

DispatchSolution solve_case(const RunContext& ctx, const HouseholdCase& hc) {
    DispatchSolution sol =
        ctx.block_hours > 0 ? solve_horizon_blocks(hc, ctx.block_hours, ctx.solve_options)
                            : solve_cost_min(hc, ctx.solve_options);
    AuditReport audit = audit_solution(hc, sol);
    if (!audit.ok(1e-6))
        throw std::runtime_error("solution failed feasibility audit (max violation " +
                                 std::to_string(audit.max_violation()) + ")");
    return sol;
}

// Baselines are cached per backup design; a gas-backed scenario compares
// against a gas-backed no-TES system.
struct BaselineSet {
    std::vector<DispatchSolution> electric;
    std::vector<DispatchSolution> gas;
    std::vector<std::string> errors;  // per household, empty when fine
};

template <typename Fn>
void parallel_for(int n_tasks, int parallelism, Fn&& fn) {
    if (parallelism <= 1 || n_tasks <= 1) {
        for (int i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    int n_workers = std::min(parallelism, n_tasks);
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

std::vector<const ScenarioSpec*> select_scenarios(const RunConfig& config,
                                                  const RunOverrides& overrides) {
    std::vector<const ScenarioSpec*> selected;
    for (const auto& sc : config.scenarios) {
        if (!overrides.scenario_filter.empty() &&
            std::find(overrides.scenario_filter.begin(), overrides.scenario_filter.end(),
                      sc.id) == overrides.scenario_filter.end())
            continue;
        selected.push_back(&sc);
    }
    if (!overrides.scenario_filter.empty() &&
        selected.size() != overrides.scenario_filter.size()) {
        for (const auto& want : overrides.scenario_filter) {
            bool found = false;
            for (const auto* sc : selected)
                if (sc->id == want) found = true;
            if (!found)
                throw std::invalid_argument("scenario filter references unknown scenario '" +
                                            want + "'");
        }
    }
    return selected;
}

BaselineSet compute_baselines(const RunContext& ctx,
                              const std::vector<const ScenarioSpec*>& scenarios,
                              int parallelism) {
    bool need_electric = false, need_gas = false;
    for (const auto* sc : scenarios) (sc->gas_backup ? need_gas : need_electric) = true;

    const int n = static_cast<int>(ctx.profiles.size());
    BaselineSet base;
    base.errors.assign(static_cast<size_t>(n), "");
    if (need_electric) base.electric.resize(static_cast<size_t>(n));
    if (need_gas) base.gas.resize(static_cast<size_t>(n));

    ScenarioSpec no_tes_electric;
    no_tes_electric.id = "baseline";
    ScenarioSpec no_tes_gas = no_tes_electric;
    no_tes_gas.gas_backup = true;

    std::vector<std::pair<int, bool>> tasks;  // (household, is_gas)
    for (int h = 0; h < n; ++h) {
        if (need_electric) tasks.emplace_back(h, false);
        if (need_gas) tasks.emplace_back(h, true);
    }
    parallel_for(static_cast<int>(tasks.size()), parallelism, [&](int i) {
        auto [h, is_gas] = tasks[static_cast<size_t>(i)];
        try {
            HouseholdCase hc = make_case(ctx, ctx.profiles[static_cast<size_t>(h)],
                                         is_gas ? no_tes_gas : no_tes_electric, std::nullopt);
            DispatchSolution sol = solve_case(ctx, hc);
            (is_gas ? base.gas : base.electric)[static_cast<size_t>(h)] = std::move(sol);
        } catch (const std::exception& e) {
            base.errors[static_cast<size_t>(h)] =
                std::string("baseline (") + (is_gas ? "gas" : "electric") + "): " + e.what();
        }
    });
    return base;
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<EconomicsReport>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "household_id,cost_no_tes,cost_tes,savings,mass_kg,break_even_per_kg,"
           "break_even_per_kwh,annual_discharge_kwh,load_shift_frac,peak_reduction_kwh\n";
    for (const auto& r : rows) {
        out << r.household_id << ',' << fmt(r.cost_no_tes) << ',' << fmt(r.cost_tes) << ','
            << fmt(r.annual_savings) << ',' << fmt(r.mass_kg) << ',' << fmt(r.break_even_per_kg)
            << ',' << fmt(r.break_even_per_kwh) << ',' << fmt(r.annual_discharge_kwh) << ','
            << fmt(r.load_shift_fraction) << ',' << fmt(r.peak_reduction_kwh) << '\n';
    }
}

void write_city_json(const std::filesystem::path& path, const std::string& scenario_id,
                     const CityAggregate& agg) {
    json j;
    j["city"] = agg.city;
    j["scenario"] = scenario_id;
    j["scale_factor"] = agg.scale_factor;
    j["households"] = agg.households;
    j["total_cost_no_tes"] = agg.total_cost_no_tes;
    j["total_cost_tes"] = agg.total_cost_tes;
    j["total_savings"] = agg.total_savings;
    j["total_discharge_kwh"] = agg.total_discharge_kwh;
    j["total_peak_reduction_kwh"] = agg.total_peak_reduction_kwh;
    j["savings"] = {{"min", agg.min_savings}, {"max", agg.max_savings}, {"mean", agg.mean_savings}};
    j["break_even_per_kwh"] = {{"min", agg.min_break_even_per_kwh},
                               {"max", agg.max_break_even_per_kwh},
                               {"mean", agg.mean_break_even_per_kwh}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

const SaltSpec& RunConfig::salt_by_name(const std::string& name) const {
    for (const auto& s : salts)
        if (s.name == name) return s;
    throw std::invalid_argument("config references unknown salt '" + name + "'");
}

std::vector<ScenarioSpec> default_scenario_matrix() {
    std::vector<ScenarioSpec> matrix;
    auto add = [&](ScenarioSpec sc) { matrix.push_back(std::move(sc)); };

    ScenarioSpec none;
    none.id = "1";
    add(none);

    const char* variable_order[] = {"SrBr2", "MgCl2", "K2CO3", "MgSO4"};
    int id = 2;
    for (const char* salt : variable_order) {
        ScenarioSpec sc;
        sc.id = std::to_string(id++);
        sc.salt = salt;
        add(sc);
    }
    const char* sensitivity_order[] = {"MgSO4", "MgCl2", "K2CO3", "SrBr2"};
    for (const char* salt : sensitivity_order) {
        ScenarioSpec sc;
        sc.id = std::to_string(id++);
        sc.salt = salt;
        sc.sizing = SizingPolicy::parse("incremental:25");
        add(sc);
    }
    for (const char* salt : sensitivity_order) {
        ScenarioSpec sc;
        sc.id = std::to_string(id++);
        sc.salt = salt;
        sc.sizing = SizingPolicy::parse("fixed:150");
        add(sc);
    }
    {
        ScenarioSpec sc;  // constant 100 W/kg rating
        sc.id = "14";
        sc.salt = "SrBr2";
        sc.design.constant_rating = true;
        sc.design.constant_kw_per_kg = 0.100;
        add(sc);
    }
    {
        ScenarioSpec sc;  // gas furnace backup
        sc.id = "15";
        sc.salt = "SrBr2";
        sc.gas_backup = true;
        add(sc);
    }
    // High parasitic loads (explicit per-salt discharge efficiencies).
    const std::map<std::string, double> parasitic16 = {
        {"MgSO4", 0.52}, {"MgCl2", 0.45}, {"K2CO3", 0.52}, {"SrBr2", 0.44}};
    const std::map<std::string, double> parasitic17 = {
        {"MgSO4", 0.54}, {"MgCl2", 0.70}, {"K2CO3", 0.66}, {"SrBr2", 0.70}};
    for (const char* salt : sensitivity_order) {
        ScenarioSpec sc;
        sc.id = std::string("16-") + salt;
        sc.salt = salt;
        sc.discharge_efficiency = 1.0 - parasitic16.at(salt);
        add(sc);
    }
    for (const char* salt : sensitivity_order) {
        ScenarioSpec sc;
        sc.id = std::string("17-") + salt;
        sc.salt = salt;
        sc.discharge_efficiency = 1.0 - parasitic17.at(salt);
        add(sc);
    }
    // Higher non-parasitic losses at the base humidification case.
    for (const char* salt : sensitivity_order) {
        ScenarioSpec sc;
        sc.id = std::string("18-") + salt;
        sc.salt = salt;
        sc.other_loss = 0.05;
        add(sc);
    }
    for (const char* salt : sensitivity_order) {
        ScenarioSpec sc;
        sc.id = std::string("19-") + salt;
        sc.salt = salt;
        sc.other_loss = 0.10;
        add(sc);
    }
    return matrix;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config " + path.string() + ": " + e.what());
    }
    const auto base_dir = path.has_parent_path() ? path.parent_path()
                                                 : std::filesystem::path(".");
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base_dir / fp;
    };

    RunConfig cfg;
    cfg.city = j.value("city", cfg.city);
    if (!j.contains("loads_csv")) throw std::runtime_error("config: missing loads_csv");
    if (!j.contains("weather_csv")) throw std::runtime_error("config: missing weather_csv");
    cfg.loads_csv = resolve(j.at("loads_csv").get<std::string>());
    cfg.weather_csv = resolve(j.at("weather_csv").get<std::string>());

    if (j.contains("scale_factor")) {
        cfg.scale_factor = j.at("scale_factor").get<double>();
    } else {
        auto it = city_scale_factors().find(cfg.city);
        if (it == city_scale_factors().end())
            throw std::runtime_error("config: no scale factor for city '" + cfg.city +
                                     "' and none given");
        cfg.scale_factor = it->second;
    }

    if (!j.contains("tariff") || j.at("tariff").is_string()) {
        std::string name = j.contains("tariff") ? j.at("tariff").get<std::string>() : cfg.city;
        cfg.tariff = find_tariff(name);
    } else {
        cfg.tariff = tariff_from_json(j.at("tariff"));
    }

    if (!j.contains("cop_curve") ||
        (j.at("cop_curve").is_string() && j.at("cop_curve").get<std::string>() == "default")) {
        cfg.cop_curve = default_cop_curve();
    } else {
        const json& cc = j.at("cop_curve");
        for (const json& p : cc.at("points"))
            cfg.cop_curve.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        cfg.cop_curve.backup_cop = cc.value("backup_cop", 1.0);
        cfg.cop_curve.validate();
    }

    if (j.contains("fan_coefficients"))
        for (const json& c : j.at("fan_coefficients"))
            cfg.fan.coefficients.push_back(c.get<double>());

    cfg.lifetime_years = j.value("lifetime_years", cfg.lifetime_years);
    cfg.paper_compat = j.value("paper_compat", cfg.paper_compat);
    cfg.horizon_block_hours = j.value("horizon_block_hours", cfg.horizon_block_hours);
    cfg.year = j.value("year", cfg.year);
    cfg.gas_price_per_kwh_thermal =
        j.value("gas_price_per_kwh_thermal", cfg.gas_price_per_kwh_thermal);
    cfg.gas_threshold_temp_c = j.value("gas_threshold_temp_c", cfg.gas_threshold_temp_c);

    cfg.salts = builtin_salts();
    for (const json& js : j.value("salts", json::array())) {
        SaltSpec s = salt_from_json(js);
        bool replaced = false;
        for (auto& existing : cfg.salts) {
            if (existing.name == s.name) {
                existing = s;
                replaced = true;
            }
        }
        if (!replaced) cfg.salts.push_back(std::move(s));
    }

    if (!j.contains("scenarios") ||
        (j.at("scenarios").is_string() && j.at("scenarios").get<std::string>() == "default")) {
        cfg.scenarios = default_scenario_matrix();
    } else {
        for (const json& js : j.at("scenarios")) cfg.scenarios.push_back(scenario_from_json(js));
    }

    // fail fast on dangling salt references
    for (const auto& sc : cfg.scenarios)
        if (sc.salt) cfg.salt_by_name(*sc.salt);
    return cfg;
}

int run_scenarios(const RunConfig& config, const std::filesystem::path& out_dir,
                  const RunOverrides& overrides) {
    RunContext ctx = make_context(config, overrides);
    std::filesystem::create_directories(out_dir);
    auto scenarios = select_scenarios(config, overrides);
    const int n_households = static_cast<int>(ctx.profiles.size());

    BaselineSet baselines = compute_baselines(ctx, scenarios, overrides.parallelism);

    struct Outcome {
        bool ok = false;
        std::string error;
        EconomicsReport eco;
    };
    std::vector<std::vector<Outcome>> outcomes(scenarios.size());
    for (auto& v : outcomes) v.resize(static_cast<size_t>(n_households));

    struct Task {
        int scenario;
        int household;
    };
    std::vector<Task> tasks;
    for (int s = 0; s < static_cast<int>(scenarios.size()); ++s)
        for (int h = 0; h < n_households; ++h) tasks.push_back({s, h});

    parallel_for(static_cast<int>(tasks.size()), overrides.parallelism, [&](int i) {
        const Task& task = tasks[static_cast<size_t>(i)];
        const ScenarioSpec& sc = *scenarios[static_cast<size_t>(task.scenario)];
        Outcome& outcome = outcomes[static_cast<size_t>(task.scenario)][static_cast<size_t>(task.household)];
        const std::string& base_err = baselines.errors[static_cast<size_t>(task.household)];
        if (!base_err.empty()) {
            outcome.error = base_err;
            return;
        }
        try {
            const DispatchSolution& baseline =
                (sc.gas_backup ? baselines.gas : baselines.electric)[static_cast<size_t>(task.household)];
            const LoadProfile& profile = ctx.profiles[static_cast<size_t>(task.household)];
            if (!sc.salt) {
                outcome.eco = report(baseline, baseline, 0.0, ctx.config->salts.front(),
                                     ctx.config->lifetime_years, ctx.paper_compat);
            } else {
                HouseholdCase hc = make_case(ctx, profile, sc, overrides.sizing);
                DispatchSolution sol = solve_case(ctx, hc);
                outcome.eco = report(baseline, sol, hc.tes->mass_kg,
                                     ctx.config->salt_by_name(*sc.salt),
                                     ctx.config->lifetime_years, ctx.paper_compat);
            }
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.error = e.what();
        }
    });

    int failures = 0;
    for (size_t s = 0; s < scenarios.size(); ++s) {
        const ScenarioSpec& sc = *scenarios[s];
        std::vector<EconomicsReport> rows;
        rows.reserve(static_cast<size_t>(n_households));
        for (int h = 0; h < n_households; ++h) {
            const Outcome& outcome = outcomes[s][static_cast<size_t>(h)];
            if (outcome.ok) {
                rows.push_back(outcome.eco);
            } else {
                ++failures;
                std::cerr << "scenario " << sc.id << " household "
                          << ctx.profiles[static_cast<size_t>(h)].household_id << ": "
                          << outcome.error << '\n';
            }
        }
        // profiles are already sorted by household id
        write_results_csv(out_dir / ("results_" + sc.id + ".csv"), rows);
        if (!rows.empty()) {
            CityAggregate agg = aggregate_city(config.city, rows, config.scale_factor);
            write_city_json(out_dir / ("city_" + sc.id + ".json"), sc.id, agg);
        }
    }
    return failures == 0 ? 0 : 1;
}

int run_peak_shift(const RunConfig& config, const std::filesystem::path& out_dir,
                   const RunOverrides& overrides) {
    RunContext ctx = make_context(config, overrides);
    std::filesystem::create_directories(out_dir);
    auto scenarios = select_scenarios(config, overrides);
    const int n_households = static_cast<int>(ctx.profiles.size());

    BaselineSet baselines = compute_baselines(ctx, scenarios, overrides.parallelism);

    struct Outcome {
        bool ok = false;
        std::string error;
        double baseline_cost = 0.0;
        double shifted = 0.0, before = 0.0, after = 0.0;
    };
    std::vector<std::vector<Outcome>> outcomes(scenarios.size());
    for (auto& v : outcomes) v.resize(static_cast<size_t>(n_households));

    struct Task {
        int scenario;
        int household;
    };
    std::vector<Task> tasks;
    for (int s = 0; s < static_cast<int>(scenarios.size()); ++s)
        for (int h = 0; h < n_households; ++h) tasks.push_back({s, h});

    parallel_for(static_cast<int>(tasks.size()), overrides.parallelism, [&](int i) {
        const Task& task = tasks[static_cast<size_t>(i)];
        const ScenarioSpec& sc = *scenarios[static_cast<size_t>(task.scenario)];
        Outcome& outcome = outcomes[static_cast<size_t>(task.scenario)][static_cast<size_t>(task.household)];
        const std::string& base_err = baselines.errors[static_cast<size_t>(task.household)];
        if (!base_err.empty()) {
            outcome.error = base_err;
            return;
        }
        try {
            const DispatchSolution& baseline =
                (sc.gas_backup ? baselines.gas : baselines.electric)[static_cast<size_t>(task.household)];
            const LoadProfile& profile = ctx.profiles[static_cast<size_t>(task.household)];
            HouseholdCase hc = make_case(ctx, profile, sc, overrides.sizing);
            PeakShiftResult result = solve_peak_shift(hc, baseline.annual_cost, ctx.solve_options);
            AuditReport audit = audit_solution(hc, result.dispatch);
            if (!audit.ok(1e-6))
                throw std::runtime_error("peak-shift solution failed feasibility audit");
            double cap_tol = 1e-6 * std::max(1.0, baseline.annual_cost);
            if (result.dispatch.annual_cost > baseline.annual_cost + cap_tol)
                throw std::runtime_error("peak-shift cost cap violated (" +
                                         std::to_string(result.dispatch.annual_cost) + " > " +
                                         std::to_string(baseline.annual_cost) + ")");
            outcome.baseline_cost = baseline.annual_cost;
            outcome.shifted = result.shifted_kwh;
            outcome.before = result.peak_before_kwh;
            outcome.after = result.peak_after_kwh;
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.error = e.what();
        }
    });

    int failures = 0;
    for (size_t s = 0; s < scenarios.size(); ++s) {
        const ScenarioSpec& sc = *scenarios[s];
        std::filesystem::path path = out_dir / ("peakshift_" + sc.id + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "household_id,baseline_cost,shifted_kwh,peak_before,peak_after\n";
        for (int h = 0; h < n_households; ++h) {
            const Outcome& outcome = outcomes[s][static_cast<size_t>(h)];
            if (!outcome.ok) {
                ++failures;
                std::cerr << "peakshift scenario " << sc.id << " household "
                          << ctx.profiles[static_cast<size_t>(h)].household_id << ": "
                          << outcome.error << '\n';
                continue;
            }
            out << ctx.profiles[static_cast<size_t>(h)].household_id << ','
                << fmt(outcome.baseline_cost) << ',' << fmt(outcome.shifted) << ','
                << fmt(outcome.before) << ',' << fmt(outcome.after) << '\n';
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace tesopt
