#include "gptr/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gptr/ball_grid.hpp"
#include "gptr/dataset.hpp"

namespace gptr {

void FullLinearityConstants::validate() const {
    std::ostringstream bad;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) bad << " " << name;
    };
    positive(kappa_ef, "kappa_ef");
    positive(kappa_eg, "kappa_eg");
    positive(nu1m, "nu1m");
    positive(gamma_lh, "gamma_lh");
    positive(kappa_bhh, "kappa_bhh");
    positive(beta_cap, "beta_cap");
    positive(zeta, "zeta");
    if (!(alpha > 0.0 && alpha < 1.0)) bad << " alpha";
    if (!(delta > 0.0 && delta < 1.0)) bad << " delta";
    if (!bad.str().empty())
        throw ArgumentError("invalid full-linearity constants:" + bad.str());
}

void to_json(nlohmann::json& j, const FullLinearityConstants& c) {
    j = nlohmann::json{{"kappa_ef", c.kappa_ef}, {"kappa_eg", c.kappa_eg},
                       {"nu1m", c.nu1m},         {"gamma_lh", c.gamma_lh},
                       {"kappa_bhh", c.kappa_bhh}, {"alpha", c.alpha},
                       {"delta", c.delta},       {"beta_cap", c.beta_cap},
                       {"zeta", c.zeta}};
}

void from_json(const nlohmann::json& j, FullLinearityConstants& c) {
    c = FullLinearityConstants{};
    if (j.contains("kappa_ef")) j.at("kappa_ef").get_to(c.kappa_ef);
    if (j.contains("kappa_eg")) j.at("kappa_eg").get_to(c.kappa_eg);
    if (j.contains("nu1m")) j.at("nu1m").get_to(c.nu1m);
    if (j.contains("gamma_lh")) j.at("gamma_lh").get_to(c.gamma_lh);
    if (j.contains("kappa_bhh")) j.at("kappa_bhh").get_to(c.kappa_bhh);
    if (j.contains("alpha")) j.at("alpha").get_to(c.alpha);
    if (j.contains("delta")) j.at("delta").get_to(c.delta);
    if (j.contains("beta_cap")) j.at("beta_cap").get_to(c.beta_cap);
    if (j.contains("zeta")) j.at("zeta").get_to(c.zeta);
}

double alpha_lower_bound(double gamma_inc, double gamma_dec) {
    require(gamma_inc > 1.0, "gamma_inc must exceed 1");
    require(gamma_dec > 0.0 && gamma_dec < 1.0, "gamma_dec must lie in (0,1)");
    const double a = (gamma_inc - 1.0) / gamma_inc;
    const double second =
        1.0 - a / (4.0 * (a / 2.0 + (1.0 - gamma_dec) / gamma_dec));
    const double third =
        1.0 -
        (1.0 - gamma_dec) / (2.0 * (gamma_inc * gamma_inc - gamma_dec));
    return std::max({0.5, second, third});
}

double mismatch_bound(const GpModel& model, const Vector& x,
                      const FullLinearityConstants& consts) {
    consts.validate();
    return std::sqrt(consts.beta_cap) * std::sqrt(model.posterior_var(x));
}

double calibrated_beta_cap(double delta) {
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    const double q = inverse_normal_cdf(1.0 - delta / 2.0);
    return q * q;
}

double theorem2_radius_cap(const FullLinearityConstants& consts) {
    consts.validate();
    const double gap =
        consts.kappa_eg - 2.0 * consts.kappa_ef - consts.kappa_bhh;
    if (!(gap > 0.0))
        throw ArgumentError(
            "no positive radius cap: kappa_eg must exceed "
            "2*kappa_ef + kappa_bhh");
    return 6.0 / consts.gamma_lh * gap;
}

std::string CertificationReport::to_text() const {
    std::ostringstream out;
    out << "certification: "
        << (order == 0 ? "zeroth-order (values)" : "first-order (gradients)")
        << "\n";
    out << "grid points:   " << grid << "\n";
    out << "kappa:         " << format_double(kappa) << "\n";
    out << "radius:        " << format_double(radius) << "\n";
    out << "max error:     " << format_double(max_error) << "\n";
    out << "threshold:     " << format_double(threshold) << "\n";
    out << "ratio:         " << format_double(ratio) << "\n";
    out << "result:        " << (passed ? "PASS" : "FAIL") << "\n";
    return out.str();
}

void to_json(nlohmann::json& j, const CertificationReport& r) {
    j = nlohmann::json{{"order", r.order},
                       {"kappa", r.kappa},
                       {"radius", r.radius},
                       {"grid", r.grid},
                       {"max_error", r.max_error},
                       {"threshold", r.threshold},
                       {"ratio", r.ratio},
                       {"passed", r.passed},
                       {"worst_point",
                        std::vector<double>(r.worst_point.data(),
                                            r.worst_point.data() +
                                                r.worst_point.size())}};
}

namespace {

CertificationReport sweep(const Surrogate& model, const Surrogate& oracle,
                          const Vector& center, double radius, double kappa,
                          int grid, int order) {
    require(radius > 0.0, "radius must be positive");
    require(kappa >= 0.0, "kappa must be nonnegative");
    require(model.dim() == center.size() && oracle.dim() == center.size(),
            "model, oracle, and center dimensions must agree");

    CertificationReport report;
    report.order = order;
    report.kappa = kappa;
    report.radius = radius;
    report.grid = grid;
    report.worst_point = center;
    for (const Vector& x : ball_grid(center, radius, grid)) {
        const double err =
            order == 0 ? std::abs(oracle.value(x) - model.value(x))
                       : (oracle.gradient(x) - model.gradient(x)).norm();
        if (err > report.max_error) {
            report.max_error = err;
            report.worst_point = x;
        }
    }
    report.threshold = order == 0 ? kappa * radius * radius : kappa * radius;
    if (report.threshold > 0.0)
        report.ratio = report.max_error / report.threshold;
    else
        report.ratio = report.max_error > 0.0
                           ? std::numeric_limits<double>::infinity()
                           : 0.0;
    report.passed = report.max_error <= report.threshold;
    return report;
}

}  // namespace

CertificationReport certify_zeroth_order(const Surrogate& model,
                                         const Surrogate& oracle,
                                         const Vector& center, double radius,
                                         double kappa_ef, int grid) {
    return sweep(model, oracle, center, radius, kappa_ef, grid, 0);
}

CertificationReport certify_first_order(const Surrogate& model,
                                        const Surrogate& oracle,
                                        const Vector& center, double radius,
                                        double kappa_eg, int grid) {
    return sweep(model, oracle, center, radius, kappa_eg, grid, 1);
}

double estimate_alpha(const std::function<GpModel(RngEngine&)>& model_builder,
                      const Surrogate& oracle, const Vector& center,
                      double radius, const FullLinearityConstants& consts,
                      int trials, std::uint64_t seed, int grid) {
    require(trials >= 1, "trials must be at least 1");
    int passes = 0;
    for (int t = 0; t < trials; ++t) {
        RngEngine rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        GpSurrogate model(model_builder(rng));
        const bool ok =
            certify_zeroth_order(model, oracle, center, radius,
                                 consts.kappa_ef, grid)
                .passed &&
            certify_first_order(model, oracle, center, radius, consts.kappa_eg,
                                grid)
                .passed;
        if (ok) ++passes;
    }
    return static_cast<double>(passes) / static_cast<double>(trials);
}

}  // namespace gptr
