#include "tesopt/presets.hpp"

#include <stdexcept>

namespace tesopt {

namespace {

std::vector<SaltSpec> make_salts() {
    std::vector<SaltSpec> salts;

    SaltSpec srbr2;
    srbr2.name = "SrBr2";
    srbr2.reaction_enthalpy_kwh_per_kg = 0.356;
    srbr2.rate_model = {RateModelKind::exponential, 3.81e-2};
    srbr2.rated_specific_power_kw_per_kg = 0.811;
    srbr2.humidification_efficiency = {
        {"rh0", 0.40}, {"rh10", 0.56}, {"rh20", 1.0}, {"rh30", 1.0}};
    salts.push_back(srbr2);

    SaltSpec mgso4;
    mgso4.name = "MgSO4";
    mgso4.reaction_enthalpy_kwh_per_kg = 0.750;
    mgso4.rate_model = {RateModelKind::exponential, 6.28e-3};
    mgso4.rated_specific_power_kw_per_kg = 0.281;
    mgso4.humidification_efficiency = {
        {"rh0", 0.46}, {"rh10", 0.48}, {"rh20", 0.61}, {"rh30", 0.55}};
    salts.push_back(mgso4);

    SaltSpec mgcl2;
    mgcl2.name = "MgCl2";
    mgcl2.reaction_enthalpy_kwh_per_kg = 0.193;
    mgcl2.rate_model = {RateModelKind::exponential, 7.35e-3};
    mgcl2.rated_specific_power_kw_per_kg = 0.085;
    mgcl2.humidification_efficiency = {
        {"rh0", 0.30}, {"rh10", 0.55}, {"rh20", 1.0}, {"rh30", 1.0}};
    salts.push_back(mgcl2);

    SaltSpec k2co3;
    k2co3.name = "K2CO3";
    k2co3.reaction_enthalpy_kwh_per_kg = 0.186;
    k2co3.rate_model = {RateModelKind::cubic, 0.182};
    k2co3.rated_specific_power_kw_per_kg = 1.646;
    k2co3.humidification_efficiency = {
        {"rh0", 0.34}, {"rh10", 0.483}, {"rh20", 1.0}, {"rh30", 1.0}};
    salts.push_back(k2co3);

    for (const auto& s : salts) s.validate();
    return salts;
}

const std::vector<int> kAllMonths = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
const std::vector<DayType> kWeekdays = {DayType::weekday};

TariffSeason weekday_season(std::vector<int> months, std::vector<TariffBand> bands) {
    TariffSeason s;
    s.months = std::move(months);
    s.day_types = kWeekdays;
    s.bands = std::move(bands);
    return s;
}

std::vector<TouTariff> make_tariffs() {
    std::vector<TouTariff> tariffs;

    {
        TouTariff t;
        t.name = "atlanta";
        t.default_rate = 0.012614;
        t.seasons = {weekday_season(kAllMonths, {{14, 19, 0.117993}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "boston";
        t.default_rate = 0.13477;
        t.seasons = {weekday_season(kAllMonths, {{7, 20, 0.28783}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "boulder";
        t.default_rate = 0.12;
        t.seasons = {weekday_season(kAllMonths, {{13, 15, 0.15}, {15, 19, 0.19}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "chicago";
        t.default_rate = 0.02447;
        t.seasons = {weekday_season(
            kAllMonths, {{6, 14, 0.03970}, {14, 19, 0.06117}, {19, 22, 0.03970}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "detroit";
        t.default_rate = 0.1673;
        t.seasons = {weekday_season({6, 7, 8, 9}, {{15, 19, 0.1809}}),
                     weekday_season({10, 11, 12, 1, 2, 3, 4, 5}, {{15, 19, 0.2240}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "dallas";
        t.default_rate = 0.077926;
        t.seasons = {weekday_season(kAllMonths, {{13, 19, 0.245241}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "los_angeles";
        t.default_rate = 0.16826;
        t.seasons = {weekday_season(kAllMonths, {{10, 20, 0.21659}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "minneapolis";
        t.default_rate = 0.05171;
        t.seasons = {weekday_season({6, 7, 8, 9}, {{9, 21, 0.25879}}),
                     weekday_season({10, 11, 12, 1, 2, 3, 4, 5}, {{9, 21, 0.21408}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "new_york";
        t.default_rate = 0.0233;
        t.seasons = {weekday_season({6, 7, 8, 9, 10}, {{20, 24, 0.3305}}),
                     weekday_season({11, 12, 1, 2, 3, 4, 5}, {{20, 24, 0.1223}})};
        tariffs.push_back(t);
    }
    {
        // Table lists mid-peak hours without a separate mid rate; the mid
        // band is kept at the off-peak price.
        TouTariff t;
        t.name = "orlando";
        t.default_rate = 0.06520;
        t.seasons = {weekday_season(
            kAllMonths, {{7, 10, 0.08828}, {10, 18, 0.06520}, {18, 21, 0.08828}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "phoenix";
        t.default_rate = 0.12345;
        t.seasons = {weekday_season({5, 6, 7, 8, 9, 10}, {{16, 19, 0.34396}}),
                     weekday_season({11, 12, 1, 2, 3, 4}, {{16, 19, 0.32543}})};
        tariffs.push_back(t);
    }
    {
        TouTariff t;
        t.name = "seattle";
        t.default_rate = 0.08;
        t.seasons = {weekday_season(
            kAllMonths, {{6, 17, 0.13}, {17, 21, 0.15}, {21, 24, 0.13}})};
        tariffs.push_back(t);
    }

    for (const auto& t : tariffs) t.validate();
    return tariffs;
}

}  // namespace

const std::vector<SaltSpec>& builtin_salts() {
    static const std::vector<SaltSpec> salts = make_salts();
    return salts;
}

const SaltSpec& find_salt(const std::string& name) {
    for (const auto& s : builtin_salts())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown salt '" + name + "'");
}

const std::vector<TouTariff>& builtin_tariffs() {
    static const std::vector<TouTariff> tariffs = make_tariffs();
    return tariffs;
}

const TouTariff& find_tariff(const std::string& name) {
    for (const auto& t : builtin_tariffs())
        if (t.name == name) return t;
    throw std::invalid_argument("unknown tariff preset '" + name + "'");
}

const std::map<std::string, double>& city_scale_factors() {
    static const std::map<std::string, double> factors = {
        {"atlanta", 576.7},  {"boston", 701.8},      {"boulder", 113.1},
        {"chicago", 2964.5}, {"detroit", 664.3},     {"dallas", 1354.6},
        {"los_angeles", 3610.0}, {"minneapolis", 448.9}, {"new_york", 8509.9},
        {"orlando", 311.0},  {"phoenix", 1507.7},    {"seattle", 803.4},
    };
    return factors;
}

CopCurve default_cop_curve() {
    CopCurve curve;
    curve.points = {{-17.0, 1.0}, {15.0, 6.1}};
    curve.backup_cop = 1.0;
    curve.validate();
    return curve;
}

}  // namespace tesopt
