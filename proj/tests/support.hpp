#pragma once

#include <cmath>
#include <vector>

#include "erz/field.hpp"
#include "erz/rng.hpp"

namespace erz::test {

inline Field cosine(const Grid& g, int mode, double amplitude = 1.0, double offset = 0.0) {
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = offset + amplitude * std::cos(mode * g.k0() * g.coordinate(i, 0));
    return f;
}

// Random band-limited field with modes |m_i| <= cutoff.
inline Field random_field(const Grid& g, int cutoff, Philox& rng, double offset = 0.0) {
    Field f(g, offset);
    const int d = g.dim();
    for (int m0 = 0; m0 <= cutoff; ++m0)
        for (int m1 = (d == 2 ? -cutoff : 0); m1 <= (d == 2 ? cutoff : 0); ++m1) {
            if (m0 == 0 && m1 <= 0) continue;
            const double a = rng.uniform(-1.0, 1.0) / (1.0 + m0 * m0 + m1 * m1);
            const double ph = rng.uniform(0.0, 2.0 * kPi);
            for (std::size_t i = 0; i < g.size(); ++i) {
                double arg = ph + g.k0() * m0 * g.coordinate(i, 0);
                if (d == 2) arg += g.k0() * m1 * g.coordinate(i, 1);
                f[i] += a * std::cos(arg);
            }
        }
    return f;
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace erz::test
