#include "tesopt/inputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tesopt {

namespace {

constexpr int kDaysInMonth[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    while (end && *end == '\r') ++end;
    if (end == begin || (end && *end != '\0'))
        throw std::runtime_error(context + ": malformed number '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::string& context) {
    const char* begin = s.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    while (end && *end == '\r') ++end;
    if (end == begin || (end && *end != '\0'))
        throw std::runtime_error(context + ": malformed integer '" + s + "'");
    return v;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

double LoadProfile::peak() const {
    double p = 0.0;
    for (double v : hourly_load_kwh) p = std::max(p, v);
    return p;
}

double LoadProfile::annual_total() const {
    double s = 0.0;
    for (double v : hourly_load_kwh) s += v;
    return s;
}

std::vector<LoadProfile> load_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open loads file: " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path.string() + ": empty loads file");
    if (strip_cr(line) != "household_id,hour,load_kwh")
        throw std::runtime_error(path.string() +
                                 ": expected header household_id,hour,load_kwh");

    struct Partial {
        std::vector<double> load = std::vector<double>(kHoursPerYear,
                                                       std::numeric_limits<double>::quiet_NaN());
        int seen = 0;
    };
    std::map<std::string, Partial> partials;  // ordered for deterministic output

    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (fields.size() != 3)
            throw std::runtime_error(ctx + ": expected 3 fields, got " +
                                     std::to_string(fields.size()));
        const std::string& id = fields[0];
        long hour = parse_long(fields[1], ctx);
        double load = parse_double(fields[2], ctx);
        if (id.empty()) throw std::runtime_error(ctx + ": empty household_id");
        if (hour < 0 || hour >= kHoursPerYear)
            throw std::runtime_error(ctx + ": hour " + std::to_string(hour) +
                                     " outside 0.." + std::to_string(kHoursPerYear - 1));
        if (load < 0.0)
            throw std::runtime_error(ctx + ": negative load for household " + id);
        auto& partial = partials[id];
        if (!std::isnan(partial.load[static_cast<size_t>(hour)]))
            throw std::runtime_error(ctx + ": duplicate hour " + std::to_string(hour) +
                                     " for household " + id);
        partial.load[static_cast<size_t>(hour)] = load;
        ++partial.seen;
    }

    std::vector<LoadProfile> profiles;
    profiles.reserve(partials.size());
    for (auto& [id, partial] : partials) {
        if (partial.seen != kHoursPerYear) {
            int missing = -1;
            for (int h = 0; h < kHoursPerYear; ++h) {
                if (std::isnan(partial.load[static_cast<size_t>(h)])) { missing = h; break; }
            }
            throw std::runtime_error(path.string() + ": incomplete profile for household " + id +
                                     " (missing hour " + std::to_string(missing) + ")");
        }
        LoadProfile p;
        p.household_id = id;
        p.hourly_load_kwh = std::move(partial.load);
        profiles.push_back(std::move(p));
    }
    if (profiles.empty())
        throw std::runtime_error(path.string() + ": no households in loads file");
    return profiles;
}

std::vector<double> load_weather(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weather file: " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path.string() + ": empty weather file");
    if (strip_cr(line) != "hour,temp_c")
        throw std::runtime_error(path.string() + ": expected header hour,temp_c");

    std::vector<double> temps(kHoursPerYear, std::numeric_limits<double>::quiet_NaN());
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (fields.size() != 2)
            throw std::runtime_error(ctx + ": expected 2 fields");
        long hour = parse_long(fields[0], ctx);
        double temp = parse_double(fields[1], ctx);
        if (hour < 0 || hour >= kHoursPerYear)
            throw std::runtime_error(ctx + ": hour out of range");
        if (!std::isnan(temps[static_cast<size_t>(hour)]))
            throw std::runtime_error(ctx + ": duplicate hour " + std::to_string(hour));
        temps[static_cast<size_t>(hour)] = temp;
    }
    for (int h = 0; h < kHoursPerYear; ++h) {
        if (std::isnan(temps[static_cast<size_t>(h)]))
            throw std::runtime_error(path.string() + ": missing hour " + std::to_string(h));
    }
    return temps;
}

void CopCurve::validate() const {
    if (points.empty()) throw std::invalid_argument("CopCurve: no points");
    if (backup_cop <= 0.0) throw std::invalid_argument("CopCurve: backup COP must be > 0");
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].cop <= 0.0)
            throw std::invalid_argument("CopCurve: COP values must be > 0");
        if (i > 0) {
            if (points[i].temp_c <= points[i - 1].temp_c)
                throw std::invalid_argument("CopCurve: temperatures must be strictly increasing");
            if (points[i].cop < points[i - 1].cop)
                throw std::invalid_argument("CopCurve: COP must be nondecreasing with temperature");
        }
    }
}

double cop_at(const CopCurve& curve, double temp_c) {
    const auto& pts = curve.points;
    double value;
    if (temp_c <= pts.front().temp_c) {
        value = pts.front().cop;
    } else if (temp_c >= pts.back().temp_c) {
        value = pts.back().cop;
    } else {
        value = pts.back().cop;
        for (size_t i = 1; i < pts.size(); ++i) {
            if (temp_c <= pts[i].temp_c) {
                double w = (temp_c - pts[i - 1].temp_c) / (pts[i].temp_c - pts[i - 1].temp_c);
                value = pts[i - 1].cop + w * (pts[i].cop - pts[i - 1].cop);
                break;
            }
        }
    }
    return std::max(value, curve.backup_cop);
}

void TouTariff::validate() const {
    for (const auto& season : seasons) {
        if (season.months.empty())
            throw std::invalid_argument("tariff " + name + ": season without months");
        for (int m : season.months)
            if (m < 1 || m > 12)
                throw std::invalid_argument("tariff " + name + ": month out of range");
        for (const auto& band : season.bands) {
            if (band.start_hour < 0 || band.end_hour > 24 || band.start_hour >= band.end_hour)
                throw std::invalid_argument("tariff " + name + ": bad band hours");
            if (band.rate < 0.0)
                throw std::invalid_argument("tariff " + name + ": negative rate");
        }
    }
    if (default_rate && *default_rate < 0.0)
        throw std::invalid_argument("tariff " + name + ": negative default rate");
    // Every (month, day type, hour) must resolve to exactly one rate.
    for (int m = 1; m <= 12; ++m) {
        for (DayType dt : {DayType::weekday, DayType::weekend}) {
            for (int h = 0; h < 24; ++h) rate_at(*this, m, dt, h);
        }
    }
}

double rate_at(const TouTariff& tariff, int month, DayType day_type, int hour) {
    if (month < 1 || month > 12 || hour < 0 || hour > 23)
        throw std::invalid_argument("rate_at: invalid calendar coordinates");
    const TariffBand* match = nullptr;
    for (const auto& season : tariff.seasons) {
        if (std::find(season.months.begin(), season.months.end(), month) == season.months.end())
            continue;
        if (std::find(season.day_types.begin(), season.day_types.end(), day_type) ==
            season.day_types.end())
            continue;
        for (const auto& band : season.bands) {
            if (hour >= band.start_hour && hour < band.end_hour) {
                if (match)
                    throw std::runtime_error("tariff " + tariff.name +
                                             ": overlapping bands at month " +
                                             std::to_string(month) + " hour " +
                                             std::to_string(hour));
                match = &band;
            }
        }
    }
    if (match) return match->rate;
    if (tariff.default_rate) return *tariff.default_rate;
    throw std::runtime_error("tariff " + tariff.name + ": no rate for month " +
                             std::to_string(month) + " hour " + std::to_string(hour) +
                             " and no default rate");
}

int weekday_of_jan1(int year) {
    // Sakamoto's method; 0 = Monday.
    static const int t[] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
    int y = year - 1;  // January of `year`
    int dow_sun0 = (y + y / 4 - y / 100 + y / 400 + t[0] + 1) % 7;
    return (dow_sun0 + 6) % 7;
}

int month_of_yearday(int yearday) {
    int d = yearday;
    for (int m = 0; m < 12; ++m) {
        if (d < kDaysInMonth[m]) return m + 1;
        d -= kDaysInMonth[m];
    }
    throw std::out_of_range("month_of_yearday: yearday outside model year");
}

DayType daytype_of_yearday(const TouTariff& tariff, int year, int yearday) {
    if (std::find(tariff.holiday_days.begin(), tariff.holiday_days.end(), yearday) !=
        tariff.holiday_days.end())
        return DayType::weekend;
    int dow = (weekday_of_jan1(year) + yearday) % 7;
    return dow >= 5 ? DayType::weekend : DayType::weekday;
}

std::vector<double> hourly_rates(const TouTariff& tariff, int year) {
    std::vector<double> rates(kHoursPerYear, 0.0);
    for (int day = 0; day < 365; ++day) {
        int month = month_of_yearday(day);
        DayType dt = daytype_of_yearday(tariff, year, day);
        for (int h = 0; h < 24; ++h)
            rates[static_cast<size_t>(day) * 24 + h] = rate_at(tariff, month, dt, h);
    }
    return rates;
}

double FanLoadModel::ratio(double served_load_kwh) const {
    if (served_load_kwh < 0.0)
        throw std::domain_error("fan ratio: negative served load");
    double v = 0.0;
    double x = 1.0;
    for (double c : coefficients) {
        v += c * x;
        x *= served_load_kwh;
    }
    return std::clamp(v, 0.0, 1.0);
}

bool FanLoadModel::is_zero() const {
    for (double c : coefficients)
        if (c != 0.0) return false;
    return true;
}

bool FanLoadModel::is_constant() const {
    for (size_t i = 1; i < coefficients.size(); ++i)
        if (coefficients[i] != 0.0) return false;
    return true;
}

}  // namespace tesopt
