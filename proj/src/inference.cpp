#include "swe/inference.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "swe/error.hpp"

namespace swe {

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum_squares(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum_squares(x, h) + pairwise_sum_squares(x + h, n - h);
}

std::vector<double> second_diff(const std::vector<double>& s) {
    require(s.size() >= 3, "second differences need at least 3 values", ErrorCode::TooShort);
    std::vector<double> out(s.size() - 2);
    for (std::size_t k = 1; k + 1 < s.size(); ++k) out[k - 1] = s[k + 1] - 2.0 * s[k] + s[k - 1];
    return out;
}

namespace {
Eigen::MatrixXd diff_rows(const Eigen::MatrixXd& g) {
    return g.topRows(g.rows() - 2) - 2.0 * g.middleRows(1, g.rows() - 2) + g.bottomRows(g.rows() - 2);
}
Eigen::MatrixXd diff_cols(const Eigen::MatrixXd& g) {
    return g.leftCols(g.cols() - 2) - 2.0 * g.middleCols(1, g.cols() - 2) + g.rightCols(g.cols() - 2);
}
void check_grid(const Eigen::MatrixXd& g) {
    require(g.rows() >= 3 && g.cols() >= 3, "box increments need a grid of at least 3 x 3", ErrorCode::TooShort);
}
}  // namespace

Eigen::MatrixXd box_diff(const Eigen::MatrixXd& grid) {
    check_grid(grid);
    return diff_rows(diff_cols(grid));
}

Eigen::MatrixXd box_diff_time_first(const Eigen::MatrixXd& grid) {
    check_grid(grid);
    return diff_cols(diff_rows(grid));
}

const char* variation_kind_name(VariationKind k) {
    switch (k) {
        case VariationKind::Sp: return "sp";
        case VariationKind::Te: return "te";
        case VariationKind::BoxSp: return "box-sp";
        case VariationKind::BoxTe: return "box-te";
    }
    return "?";
}

VariationKind parse_variation_kind(const std::string& s) {
    if (s == "sp") return VariationKind::Sp;
    if (s == "te") return VariationKind::Te;
    if (s == "box-sp" || s == "box_sp") return VariationKind::BoxSp;
    if (s == "box-te" || s == "box_te") return VariationKind::BoxTe;
    throw Error(ErrorCode::InvalidArgument, "unknown variation kind '" + s + "'");
}

namespace {
DesignKind design_for(VariationKind k) {
    switch (k) {
        case VariationKind::Sp: return DesignKind::Spatial;
        case VariationKind::Te: return DesignKind::Temporal;
        default: return DesignKind::SpaceTime;
    }
}
}  // namespace

double rescaling_factor(VariationKind kind, const SamplingDesign& d, const NoiseProfile& p) {
    validate(d);
    require(d.kind == design_for(kind), std::string("variation kind ") + variation_kind_name(kind) +
                                            " does not match a " + design_kind_name(d.kind) + " design");
    const double b = p.beta;
    const double n = d.n, m = d.m;
    switch (kind) {
        case VariationKind::Sp: return std::pow(d.lambda, b - 2.0) / n;
        case VariationKind::Te: return std::pow(d.delta, b - 3.0) / (m * m);
        case VariationKind::BoxSp: return std::pow(d.lambda, b - 2.0) / (d.delta * n * m * m);
        case VariationKind::BoxTe: return std::pow(d.delta, b - 3.0) / (n * m * m);
    }
    return 0.0;
}

VariationResult variation(VariationKind kind, const double* x, std::size_t count, const SamplingDesign& design,
                          const NoiseProfile& profile) {
    const double f = rescaling_factor(kind, design, profile);
    require(static_cast<long long>(count) == design.size(),
            "expected " + std::to_string(design.size()) + " increments, got " + std::to_string(count),
            ErrorCode::ShapeMismatch);
    VariationResult r;
    r.kind = kind;
    r.raw = pairwise_sum_squares(x, count);
    r.rescaled = f * r.raw;
    return r;
}

VariationResult variation(VariationKind kind, const std::vector<double>& x, const SamplingDesign& design,
                          const NoiseProfile& profile) {
    return variation(kind, x.data(), x.size(), design, profile);
}

LimitLaw limit_law(VariationKind kind, const ConstantsTable& c, const SamplingDesign& d, double th) {
    require(th > 0.0, "vartheta must be positive");
    const double b = c.beta;
    switch (kind) {
        case VariationKind::Sp:
            return {d.t * c.c_sp_E / th, d.t * d.t * c.c_sp_V / (th * th), std::sqrt(static_cast<double>(d.n))};
        case VariationKind::Te:
            return {c.c_te_E * std::pow(th, -0.5 * b), c.c_te_V * std::pow(th, -b),
                    std::sqrt(static_cast<double>(d.m))};
        case VariationKind::BoxSp:
            return {c.c_box_sp_E / th, c.c_box_sp_V / (th * th), std::sqrt(static_cast<double>(d.n) * d.m)};
        case VariationKind::BoxTe:
            return {c.c_box_te_E * std::pow(th, -0.5 * b), c.c_box_te_V * std::pow(th, -b),
                    std::sqrt(static_cast<double>(d.n) * d.m)};
    }
    return {};
}

double normal_critical(double level) {
    require(level > 0.0 && level < 1.0, "level must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

EstimateWithCI estimate(VariationKind kind, const VariationResult& v, const ConstantsTable& c,
                        const SamplingDesign& d, double level) {
    require(v.rescaled > 0.0 && std::isfinite(v.rescaled), "rescaled variation must be positive",
            ErrorCode::NonPositiveVariation);
    const double q = normal_critical(level);
    const double b = c.beta;
    EstimateWithCI e;
    e.level = level;
    double ratio = 0.0;
    switch (kind) {
        case VariationKind::Sp:
            e.estimate = d.t * c.c_sp_E / v.rescaled;
            ratio = std::sqrt(c.c_sp_V) / c.c_sp_E;
            e.rate_factor = std::sqrt(static_cast<double>(d.n));
            break;
        case VariationKind::Te:
            e.estimate = std::pow(c.c_te_E / v.rescaled, 2.0 / b);
            ratio = 2.0 * std::sqrt(c.c_te_V) / (b * c.c_te_E);
            e.rate_factor = std::sqrt(static_cast<double>(d.m));
            break;
        case VariationKind::BoxSp:
            e.estimate = c.c_box_sp_E / v.rescaled;
            ratio = std::sqrt(c.c_box_sp_V) / c.c_box_sp_E;
            e.rate_factor = std::sqrt(static_cast<double>(d.n) * d.m);
            break;
        case VariationKind::BoxTe:
            e.estimate = std::pow(c.c_box_te_E / v.rescaled, 2.0 / b);
            ratio = 2.0 * std::sqrt(c.c_box_te_V) / (b * c.c_box_te_E);
            e.rate_factor = std::sqrt(static_cast<double>(d.n) * d.m);
            break;
    }
    const double half = e.estimate / e.rate_factor * ratio * q;
    e.lower = e.estimate - half;
    e.upper = e.estimate + half;
    return e;
}

double mle_q_direct(const std::vector<double>& u) {
    require(!u.empty(), "MLE needs at least one observation", ErrorCode::TooShort);
    const Eigen::Index m = static_cast<Eigen::Index>(u.size());
    Eigen::MatrixXd A(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            const double k = static_cast<double>(std::min(i, j) + 1);
            A(i, j) = k * k;
        }
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "A_m is not positive definite");
    const Eigen::Map<const Eigen::VectorXd> U(u.data(), m);
    const Eigen::VectorXd y = llt.solve(U);
    if (!y.allFinite()) throw Error(ErrorCode::SingularSystem, "solve of A_m y = U failed");
    return U.dot(y);
}

double mle_q_weighted(const std::vector<double>& u) {
    require(!u.empty(), "MLE needs at least one observation", ErrorCode::TooShort);
    const std::size_t m = u.size();
    double q = u[0] * u[0];
    for (std::size_t j = 1; j < m; ++j) {
        const double d = u[j] - u[j - 1];
        q += d * d / (2.0 * j + 1.0);
    }
    return q + u[m - 1] * u[m - 1] / (2.0 * m + 1.0);
}

MleResult mle_whitenoise(const std::vector<double>& u, double delta) {
    require(delta > 0.0, "delta must be positive");
    MleResult r;
    r.q_direct = mle_q_direct(u);
    r.q_weighted = mle_q_weighted(u);
    require(r.q_direct > 0.0, "Q_m must be positive", ErrorCode::NonPositiveVariation);
    const double root = delta * delta * static_cast<double>(u.size()) / (4.0 * r.q_direct);
    r.estimate = root * root;
    return r;
}

double hellinger_sq(double theta0, double theta1, double beta, int m) {
    require(theta0 > 0.0 && theta1 > 0.0, "wave speeds must be positive");
    require(beta > 0.0 && beta < 2.0, "beta must lie in (0, 2)");
    require(m >= 0, "m must be >= 0");
    const double a = std::pow(theta0, 0.5 * beta), b = std::pow(theta1, 0.5 * beta);
    const double r = (a - b) / (a + b);
    return 1.0 - std::pow(1.0 - r * r, 0.25 * (m + 2));
}

}  // namespace swe
