#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "erz/field.hpp"
#include "erz/rng.hpp"
#include "erz/spectral.hpp"

namespace erz {

/// Randomized positive trigonometric test functions
/// g = c + sum_{1 <= |k|_inf <= cutoff} a_k cos(k.x + theta_k), rescaled so min g >= c/2.
struct TestFunctionSpec {
    int dim = 1;
    int points = 64;
    double box_length = 2.0 * kPi;
    double floor = 1.0;
    int cutoff = 4;
    /// Upper bound on sum |a_k| relative to the floor before the min-g rescale.
    double amplitude_budget = 1.0;
    std::uint64_t seed = 0;

    Grid grid() const { return Grid(dim, points, box_length); }
    void validate() const;
};

struct RatioSample {
    double lhs = 0.0;
    double rhs = 0.0;
    /// Empty when rhs < 1e-14.
    std::optional<double> ratio;
    std::uint64_t trial = 0;
};

RatioSample make_sample(double lhs, double rhs, std::uint64_t trial = 0);

/// Test function of one trial; trial t draws from Philox stream t of spec.seed.
Field generate_test_function(const TestFunctionSpec& spec, std::uint64_t trial);

/// Zero-mean random trigonometric polynomial with modes 1 <= |k|_inf <= cutoff.
Field random_trig_polynomial(const Grid& g, int cutoff, double amplitude, Philox& rng);

/// lhs = int g^{1-2k} prod |d^{l_i} g|^2, rhs = int |grad^m g|^2 / g + int |grad g|^{2m} / g^{2m-1}.
RatioSample gns_ratio(const Field& g, int m, const std::vector<MultiIndex>& tuple);

/// lhs = ||Lambda^s (v.grad f) - v.grad Lambda^s f||_{L^2},
/// rhs = ||v||_{H^{d/2+1+s+eps}} ||f||_{H^s}.
RatioSample commutator_ratio(const std::vector<Field>& v, const Field& f, double s, double eps);

/// lhs = ||g^beta||^2_{H^k homogeneous},
/// rhs = ||g^{beta-1} |grad^k g| ||^2_{L^2} + ||grad ln g||_inf^{2k} ||g^beta||^2_{L^2}.
RatioSample power_sobolev_ratio(const Field& g, double beta, int k);

/// Squared full-tensor norm |grad^m g|^2 = sum_{|beta|=m} (m!/beta!) (d^beta g)^2, pointwise.
Field tensor_norm_sq(const Field& g, int m);

/// Orders (1, m-1) along axis 0, or (1) when m = 1.
std::vector<MultiIndex> default_gns_tuple(int m);

enum class Inequality { Gns, Commutator, Power };

const char* to_string(Inequality i);
Inequality inequality_from_string(const std::string& s);

struct SweepParams {
    int m = 3;
    /// Defaults to orders (1, m-1) along axis 0 when empty.
    std::vector<MultiIndex> tuple;
    double s = 0.5;
    double eps = 0.1;
    double beta = 2.5;
    int k = 2;
};

struct SweepSummary {
    Inequality which = Inequality::Gns;
    std::size_t trials = 0;
    std::size_t skipped = 0;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    std::uint64_t argmax_trial = 0;
    /// Running maximum over the first 100 trials and whether later trials stayed below ten times it.
    double early_max = 0.0;
    bool bounded = true;
    std::string finding;
    std::vector<RatioSample> samples;
};

/// Runs trials first_trial, ..., first_trial + trials - 1.
SweepSummary sweep(const TestFunctionSpec& spec, Inequality which, std::size_t trials, const SweepParams& params = {},
                   std::uint64_t first_trial = 0);

}  // namespace erz
