#include "stefan/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stefan/error.hpp"

namespace stefan {

Discretization Discretization::make(int N, int M, double T) {
    if (N < 2) throw ConfigError("discretization needs N >= 2 (dxi <= 1/2)");
    if (M < 1) throw ConfigError("discretization needs M >= 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("horizon must be finite and positive");
    return Discretization{N, M, T};
}

Discretization Discretization::from_steps(double dxi, double dt, double T) {
    if (!(dxi > 0.0) || !(dt > 0.0)) throw ConfigError("steps must be positive");
    const double n_real = 1.0 / dxi;
    const double m_real = T / dt;
    const long n = std::lround(n_real);
    const long m = std::lround(m_real);
    if (std::abs(n_real - n) > 1e-8 * n_real) {
        throw ConfigError("1/dxi must be an integer");
    }
    if (std::abs(m_real - m) > 1e-8 * m_real) {
        throw ConfigError("horizon/dt must be an integer");
    }
    return make(static_cast<int>(n), static_cast<int>(m), T);
}

int Discretization::time_index(double time) const {
    const long n = std::lround(time / dt());
    if (n < 0 || n > M) throw ConfigError("time outside [0, T]");
    return static_cast<int>(n);
}

void check_admissible(const BoundaryCurve& curve, const Discretization& disc) {
    if (curve.size() != static_cast<std::size_t>(disc.M + 1)) {
        throw CurveError("boundary curve has " + std::to_string(curve.size()) +
                         " samples, expected " + std::to_string(disc.M + 1));
    }
    if (curve[0] != 0.0) throw CurveError("boundary curve must start at s(0) = 0");
    for (std::size_t n = 1; n < curve.size(); ++n) {
        if (!(curve[n] > 0.0) || !std::isfinite(curve[n])) {
            throw CurveError("boundary curve must be positive for t > 0; s^" +
                             std::to_string(n) + " = " + format_double(curve[n]));
        }
    }
}

bool is_admissible(const BoundaryCurve& curve, const Discretization& disc) {
    try {
        check_admissible(curve, disc);
        return true;
    } catch (const CurveError&) {
        return false;
    }
}

TemperatureField::TemperatureField(int N, int M)
    : N_(N), M_(M), data_(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(M + 1), 0.0) {}

std::span<double> TemperatureField::column(int n) {
    return {data_.data() + index(0, n), static_cast<std::size_t>(N_ + 1)};
}

std::span<const double> TemperatureField::column(int n) const {
    return {data_.data() + index(0, n), static_cast<std::size_t>(N_ + 1)};
}

std::vector<double> trapezoid_prefix(std::span<const double> samples, double step) {
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t k = 1; k < samples.size(); ++k) {
        out[k] = out[k - 1] + 0.5 * step * (samples[k - 1] + samples[k]);
    }
    return out;
}

double trapezoid(std::span<const double> samples, double step) {
    if (samples.size() < 2) return 0.0;
    double sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t k = 1; k + 1 < samples.size(); ++k) sum += samples[k];
    return sum * step;
}

double one_sided_deriv(std::span<const double> column, End end, double step) {
    const std::size_t size = column.size();
    if (size < 3) throw ConfigError("one-sided difference needs at least 3 nodes");
    if (end == End::Left) {
        return (-3.0 * column[0] + 4.0 * column[1] - column[2]) / (2.0 * step);
    }
    return (3.0 * column[size - 1] - 4.0 * column[size - 2] + column[size - 3]) / (2.0 * step);
}

double one_sided_deriv(const TemperatureField& field, int n, End end, double dxi) {
    return one_sided_deriv(field.column(n), end, dxi);
}

double sampled_rate(std::span<const double> values, int n, double dt) {
    const int last = static_cast<int>(values.size()) - 1;
    if (last < 2) throw ConfigError("rate estimate needs at least 3 time levels");
    if (n < 0 || n > last) throw ConfigError("time index out of range");
    if (n == 0) return (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
    if (n == last) {
        return (3.0 * values[last] - 4.0 * values[last - 1] + values[last - 2]) / (2.0 * dt);
    }
    return (values[n + 1] - values[n - 1]) / (2.0 * dt);
}

double boundary_rate(const BoundaryCurve& curve, int n, double dt) {
    return sampled_rate(curve.values, n, dt);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_curve_csv(std::ostream& os, const BoundaryCurve& curve, const Discretization& disc) {
    os << "t,s\n";
    for (std::size_t n = 0; n < curve.size(); ++n) {
        os << format_double(disc.t(static_cast<int>(n))) << ',' << format_double(curve[n]) << '\n';
    }
}

void write_field_csv(std::ostream& os, const TemperatureField& field,
                     const Discretization& disc) {
    os << "t,xi,F\n";
    for (int n = 0; n <= field.M(); ++n) {
        for (int i = 0; i <= field.N(); ++i) {
            os << format_double(disc.t(n)) << ',' << format_double(disc.xi(i)) << ','
               << format_double(field.at(i, n)) << '\n';
        }
    }
}

BoundaryCurve read_curve_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty boundary CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,s") throw ConfigError("boundary CSV must start with header 't,s'");
    BoundaryCurve curve;
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("boundary CSV row " + std::to_string(row) + " has no comma");
        }
        const std::string value = line.substr(comma + 1);
        char* end = nullptr;
        const double s = std::strtod(value.c_str(), &end);
        if (end == value.c_str()) {
            throw ConfigError("boundary CSV row " + std::to_string(row) + " is not numeric");
        }
        curve.values.push_back(s);
    }
    return curve;
}

BoundaryCurve read_curve_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open boundary file '" + path + "'");
    return read_curve_csv(in);
}

}  // namespace stefan
