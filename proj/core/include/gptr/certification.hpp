#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "gptr/rng.hpp"
#include "gptr/surrogate.hpp"

namespace gptr {

/// Constants of the full-linearity framework. kappa_ef and kappa_eg bound the
/// value and gradient mismatch between surrogate and plant over a ball of
/// radius delta_tr; nu1m is the surrogate-gradient Lipschitz constant;
/// gamma_lh and kappa_bhh bound the mismatch function h = f - m (gradient
/// Lipschitz constant and Hessian norm); alpha is the certification
/// probability target, delta the tail probability of the confidence bound,
/// beta_cap the scaling of the posterior-std confidence envelope, and zeta
/// the assumed RKHS-norm bound of the plant.
struct FullLinearityConstants {
    double kappa_ef = 1.0;
    double kappa_eg = 1.0;
    double nu1m = 1.0;
    double gamma_lh = 1.0;
    double kappa_bhh = 1.0;
    double alpha = 0.5;
    double delta = 0.1;
    double beta_cap = 1.0;
    double zeta = 1.0;

    void validate() const;
};

void to_json(nlohmann::json& j, const FullLinearityConstants& c);
void from_json(const nlohmann::json& j, FullLinearityConstants& c);

/// Smallest admissible certification probability for radius factors
/// (gamma_inc, gamma_dec): the maximum of the three expressions relating
/// alpha to the radius update, always in [1/2, 1).
double alpha_lower_bound(double gamma_inc, double gamma_dec);

/// Confidence envelope half-width sqrt(beta_cap) * posterior_std(x): with a
/// well-calibrated beta_cap, |f(x) - m(x)| stays below this with probability
/// at least 1 - delta at each point.
double mismatch_bound(const GpModel& model, const Vector& x,
                      const FullLinearityConstants& consts);

/// Exact Gaussian calibration of beta_cap for a pointwise tail probability
/// delta: returns the squared two-sided normal quantile, so that
/// |N(0, s^2)| <= sqrt(beta_cap) * s holds with probability 1 - delta.
double calibrated_beta_cap(double delta);

/// Largest trust-region radius for which sampling can certify full linearity:
/// (6 / gamma_lh) * (kappa_eg - 2 kappa_ef - kappa_bhh). Throws
/// ArgumentError when the constants admit no positive radius.
double theorem2_radius_cap(const FullLinearityConstants& consts);

/// Outcome of an empirical certification sweep over a ball grid.
struct CertificationReport {
    int order = 0;          // 0: value mismatch, 1: gradient mismatch
    double kappa = 0.0;     // kappa_ef or kappa_eg
    double radius = 0.0;    // ball radius swept
    int grid = 0;           // number of grid points
    double max_error = 0.0; // worst |f - m| or ||grad f - grad m||
    double threshold = 0.0; // kappa * radius^2 or kappa * radius
    double ratio = 0.0;     // max_error / threshold
    bool passed = false;
    Vector worst_point;

    std::string to_text() const;
};

void to_json(nlohmann::json& j, const CertificationReport& r);

inline constexpr int kDefaultCertifyGrid = 256;

/// Sweeps |f - m| over the deterministic ball grid and compares the worst
/// mismatch against kappa_ef * radius^2. A ratio of exactly 1 passes.
CertificationReport certify_zeroth_order(const Surrogate& model,
                                         const Surrogate& oracle,
                                         const Vector& center, double radius,
                                         double kappa_ef,
                                         int grid = kDefaultCertifyGrid);

/// Same sweep for ||grad f - grad m|| against kappa_eg * radius.
CertificationReport certify_first_order(const Surrogate& model,
                                        const Surrogate& oracle,
                                        const Vector& center, double radius,
                                        double kappa_eg,
                                        int grid = kDefaultCertifyGrid);

/// Monte Carlo estimate of the certification probability: for each trial a
/// fresh model is built from noisy samples (the builder receives a trial-
/// specific RNG derived from (seed, trial)) and checked against both the
/// zeroth- and first-order criteria. Returns the passing fraction.
double estimate_alpha(const std::function<GpModel(RngEngine&)>& model_builder,
                      const Surrogate& oracle, const Vector& center,
                      double radius, const FullLinearityConstants& consts,
                      int trials, std::uint64_t seed,
                      int grid = kDefaultCertifyGrid);

}  // namespace gptr
