#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace formopt {

inline constexpr std::size_t kNumElements = 5;

/// Fixed global element order: every 5-vector in the project uses it.
inline constexpr std::array<const char*, kNumElements> kElementNames = {
    "Mo", "Nb", "Ti", "V", "W"};

/// Point on the 5-element atomic-fraction simplex.
struct Composition {
    std::array<double, kNumElements> fractions{};

    double operator[](std::size_t i) const { return fractions[i]; }
};

inline bool is_valid_composition(const Composition& c, double tol = 1e-12) {
    double sum = 0.0;
    for (double f : c.fractions) {
        if (!(f >= 0.0 && f <= 1.0)) return false;
        sum += f;
    }
    return std::abs(sum - 1.0) <= tol * 16.0 + 1e-12;
}

inline Composition make_composition(const std::array<double, kNumElements>& fr) {
    Composition c{fr};
    if (!is_valid_composition(c))
        throw std::invalid_argument("composition fractions must be in [0,1] and sum to 1");
    return c;
}

/// Full-factorial simplex grid at a fixed atomic-fraction increment.
struct DesignGrid {
    double step = 0.0;
    std::vector<Composition> points;

    std::size_t size() const { return points.size(); }
};

/// Enumerates all compositions with fractions that are multiples of step,
/// in lexicographic order of the integer multiples.
inline DesignGrid generate_grid(double step) {
    if (!(step > 0.0) || step > 1.0)
        throw std::invalid_argument("grid step must be in (0, 1]");
    double m_real = 1.0 / step;
    long m = std::lround(m_real);
    if (m < 1 || std::abs(m_real - static_cast<double>(m)) > 1e-9)
        throw std::invalid_argument("grid step must be the reciprocal of an integer");

    DesignGrid grid;
    grid.step = step;
    for (long a = 0; a <= m; ++a)
        for (long b = 0; a + b <= m; ++b)
            for (long c = 0; a + b + c <= m; ++c)
                for (long d = 0; a + b + c + d <= m; ++d) {
                    long e = m - a - b - c - d;
                    Composition p;
                    p.fractions = {double(a) / m, double(b) / m, double(c) / m,
                                   double(d) / m, double(e) / m};
                    grid.points.push_back(p);
                }
    return grid;
}

/// w_i = 100 * x_i M_i / sum_j x_j M_j.
inline std::array<double, kNumElements> to_weight_percent(
    const Composition& c, const std::array<double, kNumElements>& molar_mass) {
    double total = 0.0;
    for (std::size_t i = 0; i < kNumElements; ++i) total += c[i] * molar_mass[i];
    std::array<double, kNumElements> w{};
    for (std::size_t i = 0; i < kNumElements; ++i) w[i] = 100.0 * c[i] * molar_mass[i] / total;
    return w;
}

/// Inverse of to_weight_percent: atomic fractions from weight percentages.
inline Composition from_weight_percent(
    const std::array<double, kNumElements>& wt, const std::array<double, kNumElements>& molar_mass) {
    double total = 0.0;
    for (std::size_t i = 0; i < kNumElements; ++i) total += wt[i] / molar_mass[i];
    Composition c;
    for (std::size_t i = 0; i < kNumElements; ++i) c.fractions[i] = (wt[i] / molar_mass[i]) / total;
    return c;
}

/// Vertices of the unit regular pentagon, Mo at 90 degrees, counterclockwise
/// in element order.
inline std::array<std::array<double, 2>, kNumElements> pentagon_vertices() {
    std::array<std::array<double, 2>, kNumElements> v{};
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < kNumElements; ++i) {
        double angle = pi / 2.0 + 2.0 * pi * double(i) / double(kNumElements);
        v[i] = {std::cos(angle), std::sin(angle)};
    }
    return v;
}

/// Affine projection of the composition simplex into the regular pentagon.
inline std::array<double, 2> pentagon_project(const Composition& c) {
    auto verts = pentagon_vertices();
    std::array<double, 2> p{0.0, 0.0};
    for (std::size_t i = 0; i < kNumElements; ++i) {
        p[0] += c[i] * verts[i][0];
        p[1] += c[i] * verts[i][1];
    }
    return p;
}

}  // namespace formopt
