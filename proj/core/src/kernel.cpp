#include "gptr/kernel.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

namespace gptr {

void Hyperparams::validate() const {
    std::ostringstream bad;
    if (!(signal_std > 0.0) || !std::isfinite(signal_std))
        bad << "signal_std must be a positive finite real; ";
    if (inv_lengthscales.size() == 0)
        bad << "inv_lengthscales must be nonempty; ";
    for (int i = 0; i < inv_lengthscales.size(); ++i) {
        if (!(inv_lengthscales[i] > 0.0) || !std::isfinite(inv_lengthscales[i])) {
            bad << "inv_lengthscales[" << i << "] must be a positive finite real; ";
            break;
        }
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
        bad << "noise_std must be a nonnegative finite real; ";
    const std::string msg = bad.str();
    if (!msg.empty()) throw ArgumentError("Hyperparams: " + msg);
}

Hyperparams Hyperparams::isotropic(int dim, double signal_std,
                                   double inv_lengthscale, double noise_std) {
    Hyperparams h;
    h.signal_std = signal_std;
    h.inv_lengthscales = Vector::Constant(dim, inv_lengthscale);
    h.noise_std = noise_std;
    return h;
}

void to_json(nlohmann::json& j, const Hyperparams& h) {
    j = nlohmann::json{{"signal_std", h.signal_std},
                       {"inv_lengthscales", std::vector<double>(
                                                h.inv_lengthscales.begin(),
                                                h.inv_lengthscales.end())},
                       {"noise_std", h.noise_std}};
}

void from_json(const nlohmann::json& j, Hyperparams& h) {
    h.signal_std = j.at("signal_std").get<double>();
    const auto ls = j.at("inv_lengthscales").get<std::vector<double>>();
    h.inv_lengthscales = Eigen::Map<const Vector>(ls.data(), ls.size());
    h.noise_std = j.at("noise_std").get<double>();
}

namespace {

void check_dims(const Vector& x_i, const Vector& x_j, const Hyperparams& theta,
                const char* who) {
    if (x_i.size() != x_j.size() || x_i.size() != theta.inv_lengthscales.size())
        throw ArgumentError(std::string(who) + ": dimension mismatch");
}

}  // namespace

double eval_kernel(const Vector& x_i, const Vector& x_j, const Hyperparams& theta) {
    check_dims(x_i, x_j, theta, "eval_kernel");
    const Vector d = x_i - x_j;
    const double q = d.cwiseProduct(theta.inv_lengthscales).dot(d);
    return theta.signal_var() * std::exp(-0.5 * q);
}

Vector kernel_grad_x(const Vector& x_i, const Vector& x_j, const Hyperparams& theta) {
    check_dims(x_i, x_j, theta, "kernel_grad_x");
    const double c = eval_kernel(x_i, x_j, theta);
    return -c * theta.inv_lengthscales.cwiseProduct(x_i - x_j);
}

Vector kernel_grad_log_hyper(const Vector& x_i, const Vector& x_j,
                             const Hyperparams& theta) {
    check_dims(x_i, x_j, theta, "kernel_grad_log_hyper");
    const int n = theta.input_dim();
    const double c = eval_kernel(x_i, x_j, theta);
    Vector g(n + 1);
    g[0] = 2.0 * c;  // d c / d log(signal_std)
    const Vector d2 = (x_i - x_j).cwiseAbs2();
    for (int i = 0; i < n; ++i)
        g[1 + i] = -0.5 * theta.inv_lengthscales[i] * d2[i] * c;
    return g;
}

Matrix cov_matrix(const Matrix& X, const Hyperparams& theta) {
    require(X.rows() >= 1, "cov_matrix: need at least one point");
    if (X.cols() != theta.inv_lengthscales.size())
        throw ArgumentError("cov_matrix: dimension mismatch");
    // Scaled squared distances via the usual |a-b|^2 = |a|^2 + |b|^2 - 2 a.b
    // expansion on sqrt(Lambda)-scaled coordinates.
    const Matrix Xs = X * theta.inv_lengthscales.cwiseSqrt().asDiagonal();
    const Vector sq = Xs.rowwise().squaredNorm();
    Matrix Q = -2.0 * Xs * Xs.transpose();
    Q.colwise() += sq;
    Q.rowwise() += sq.transpose();
    Matrix C = (-0.5 * Q.cwiseMax(0.0)).array().exp().matrix() * theta.signal_var();
    // Exact symmetry and exact diagonal.
    C = 0.5 * (C + C.transpose()).eval();
    C.diagonal().setConstant(theta.signal_var());
    return C;
}

Vector cov_vector(const Vector& x, const Matrix& X, const Hyperparams& theta) {
    if (x.size() != X.cols() || x.size() != theta.inv_lengthscales.size())
        throw ArgumentError("cov_vector: dimension mismatch");
    const auto l = X.rows();
    Vector c(l);
    for (Eigen::Index i = 0; i < l; ++i) {
        const Vector d = x - X.row(i).transpose();
        c[i] = theta.signal_var() *
               std::exp(-0.5 * d.cwiseProduct(theta.inv_lengthscales).dot(d));
    }
    return c;
}

}  // namespace gptr
