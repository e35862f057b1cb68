#ifndef TESOPT_INPUTS_HPP
#define TESOPT_INPUTS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tesopt {

inline constexpr int kHoursPerYear = 8760;  // non-leap model year

struct LoadProfile {
    std::string household_id;
    std::vector<double> hourly_load_kwh;  // exactly 8760 entries, all >= 0
    int year = 2018;

    double peak() const;
    double annual_total() const;
};

// CSV with header household_id,hour,load_kwh; hours 0..8759 per household.
std::vector<LoadProfile> load_profiles(const std::filesystem::path& path);

// CSV with header hour,temp_c; one city file applies to all its households.
std::vector<double> load_weather(const std::filesystem::path& path);

struct CopPoint {
    double temp_c = 0.0;
    double cop = 1.0;
};

struct CopCurve {
    std::vector<CopPoint> points;  // temps strictly increasing, cops nondecreasing
    double backup_cop = 1.0;       // resistance-heat floor

    void validate() const;
};

// Piecewise-linear interpolation clamped at the endpoints, floored at the
// backup COP.
double cop_at(const CopCurve& curve, double temp_c);

enum class DayType { weekday, weekend };

struct TariffBand {
    int start_hour = 0;  // inclusive
    int end_hour = 0;    // exclusive; bands never wrap midnight
    double rate = 0.0;   // $/kWh
};

struct TariffSeason {
    std::vector<int> months;        // 1..12
    std::vector<DayType> day_types;
    std::vector<TariffBand> bands;
};

struct TouTariff {
    std::string name;
    std::optional<double> default_rate;  // applies wherever no band matches
    std::vector<TariffSeason> seasons;
    std::vector<int> holiday_days;  // 0-based day of year, billed as weekend

    void validate() const;
};

double rate_at(const TouTariff& tariff, int month, DayType day_type, int hour);

// Calendar helpers for the 8760-hour model year.
int weekday_of_jan1(int year);              // 0 = Monday .. 6 = Sunday
int month_of_yearday(int yearday);          // 1..12 for 0-based day of year
DayType daytype_of_yearday(const TouTariff& tariff, int year, int yearday);

// Expands a tariff into an 8760-entry $/kWh series.
std::vector<double> hourly_rates(const TouTariff& tariff, int year);

// Polynomial fan-heating-load ratio vs. hourly served thermal load, clamped
// to [0,1]. Fan electricity is billed at COP 1.
struct FanLoadModel {
    std::vector<double> coefficients;  // c0 + c1*x + c2*x^2 + ...

    double ratio(double served_load_kwh) const;
    bool is_zero() const;
    bool is_constant() const;  // degree 0 (or empty)
};

}  // namespace tesopt

#endif
