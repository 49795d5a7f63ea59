#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace stefan {

/// Uniform grid on the immobilized strip: xi_i = i/N (i = 0..N), t^n = n T/M (n = 0..M).
struct Discretization {
    int N = 10;
    int M = 10;
    double T = 1.0;

    /// Throws ConfigError unless N >= 2, M >= 1 and T > 0.
    static Discretization make(int N, int M, double T);
    /// Rounds 1/dxi and T/dt to integers; rejects steps that do not divide exactly.
    static Discretization from_steps(double dxi, double dt, double T);

    double dxi() const { return 1.0 / N; }
    double dt() const { return T / M; }
    double xi(int i) const { return static_cast<double>(i) / N; }
    double t(int n) const { return n * dt(); }
    /// Index of the time level closest to t.
    int time_index(double t) const;
};

/// Sampled interface positions s^n on the time grid.
struct BoundaryCurve {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t n) const { return values[n]; }
    double& operator[](std::size_t n) { return values[n]; }
};

/// Throws CurveError unless size == M+1, s^0 == 0 and s^n > 0 for n >= 1.
void check_admissible(const BoundaryCurve& curve, const Discretization& disc);
bool is_admissible(const BoundaryCurve& curve, const Discretization& disc);

/// Transformed temperature F(xi_i, t^n); one contiguous column per time level.
class TemperatureField {
public:
    TemperatureField() = default;
    TemperatureField(int N, int M);

    int N() const { return N_; }
    int M() const { return M_; }

    double& at(int i, int n) { return data_[index(i, n)]; }
    double at(int i, int n) const { return data_[index(i, n)]; }

    std::span<double> column(int n);
    std::span<const double> column(int n) const;

private:
    std::size_t index(int i, int n) const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(N_ + 1) +
               static_cast<std::size_t>(i);
    }

    int N_ = 0;
    int M_ = 0;
    std::vector<double> data_;
};

/// out[k] = trapezoid integral over the first k intervals; out[0] = 0.
std::vector<double> trapezoid_prefix(std::span<const double> samples, double step);
/// Composite trapezoid over the whole sample array.
double trapezoid(std::span<const double> samples, double step);

enum class End { Left, Right };

/// Second-order one-sided difference of column n at xi = 0 (Left) or xi = 1 (Right).
double one_sided_deriv(const TemperatureField& field, int n, End end, double dxi);
double one_sided_deriv(std::span<const double> column, End end, double step);

/// ds/dt at t^n: central inside, second-order one-sided at n = 0 and n = M.
double boundary_rate(const BoundaryCurve& curve, int n, double dt);
/// Same stencil applied to an arbitrary sampled function of time.
double sampled_rate(std::span<const double> values, int n, double dt);

// CSV: header row, LF, 17 significant digits.
void write_curve_csv(std::ostream& os, const BoundaryCurve& curve, const Discretization& disc);
void write_field_csv(std::ostream& os, const TemperatureField& field,
                     const Discretization& disc);
/// Reads the (t, s) table written by write_curve_csv.
BoundaryCurve read_curve_csv(std::istream& is);
BoundaryCurve read_curve_csv_file(const std::string& path);

std::string format_double(double v);

}  // namespace stefan
