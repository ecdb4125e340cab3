#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "uniseek/faults.hpp"
#include "uniseek/geometry.hpp"

namespace uniseek {

enum class FieldType { circular, elliptical, rosenbrock, custom };

[[nodiscard]] inline const char* to_string(FieldType t) {
    switch (t) {
        case FieldType::circular: return "circular";
        case FieldType::elliptical: return "elliptical";
        case FieldType::rosenbrock: return "rosenbrock";
        case FieldType::custom: return "custom";
    }
    return "unknown";
}

/// Convert the rotationally-parameterized quadratic coefficients (q_r, q_p)
/// into the axis-aligned curvatures (q_x, q_y) = (q_r + 2 q_p, q_r - 2 q_p).
/// Rejects maps that are not strictly concave (q_r <= 2 |q_p|).
[[nodiscard]] inline std::pair<double, double> qxqy_from_qrqp(double q_r, double q_p) {
    if (!(q_r > 2.0 * std::fabs(q_p))) {
        throw InvalidParameter("quadratic map must satisfy q_r > 2|q_p| (got q_r=" +
                               std::to_string(q_r) + ", q_p=" + std::to_string(q_p) + ")");
    }
    return {q_r + 2.0 * q_p, q_r - 2.0 * q_p};
}

/// Inverse of qxqy_from_qrqp: q_r = (q_x + q_y)/2, q_p = (q_x - q_y)/4.
[[nodiscard]] inline std::pair<double, double> qrqp_from_qxqy(double q_x, double q_y) {
    if (!(q_x > 0.0) || !(q_y > 0.0)) {
        throw InvalidParameter("axis curvatures must be strictly positive (got q_x=" +
                               std::to_string(q_x) + ", q_y=" + std::to_string(q_y) + ")");
    }
    return {(q_x + q_y) / 2.0, (q_x - q_y) / 4.0};
}

/// The static scalar signal distribution J = f(r). Immutable after
/// construction; concave quadratic variants peak at the source with value
/// f_star, the Rosenbrock variant is the fixed benchmark surface
/// J = -x^2 - (y - x^2)^2, and custom wraps a black-box evaluator.
class ScalarField {
public:
    [[nodiscard]] static ScalarField circular(double f_star, Vec2 source, double q_r) {
        if (!(q_r > 0.0)) throw InvalidParameter("circular map requires q_r > 0");
        ScalarField f;
        f.type_ = FieldType::circular;
        f.f_star_ = f_star;
        f.source_ = source;
        f.q_r_ = q_r;
        return f;
    }

    [[nodiscard]] static ScalarField elliptical(double f_star, Vec2 source, double q_r, double q_p) {
        static_cast<void>(qxqy_from_qrqp(q_r, q_p));  // validates concavity
        ScalarField f;
        f.type_ = FieldType::elliptical;
        f.f_star_ = f_star;
        f.source_ = source;
        f.q_r_ = q_r;
        f.q_p_ = q_p;
        return f;
    }

    /// The benchmark surface with an isolated maximum of 0 at the origin.
    [[nodiscard]] static ScalarField rosenbrock() {
        ScalarField f;
        f.type_ = FieldType::rosenbrock;
        f.f_star_ = 0.0;
        f.source_ = {0.0, 0.0};
        return f;
    }

    [[nodiscard]] static ScalarField custom(std::function<double(Vec2)> eval,
                                            double f_star = 0.0, Vec2 source = {0.0, 0.0}) {
        if (!eval) throw InvalidParameter("custom field requires an evaluation function");
        ScalarField f;
        f.type_ = FieldType::custom;
        f.f_star_ = f_star;
        f.source_ = source;
        f.custom_ = std::move(eval);
        return f;
    }

    [[nodiscard]] FieldType type() const { return type_; }
    [[nodiscard]] double f_star() const { return f_star_; }
    [[nodiscard]] Vec2 source() const { return source_; }
    [[nodiscard]] bool is_quadratic() const {
        return type_ == FieldType::circular || type_ == FieldType::elliptical;
    }

    /// Rotational curvature q_r (quadratic variants only).
    [[nodiscard]] double q_r() const {
        require_quadratic("q_r");
        return q_r_;
    }

    /// Ellipticity q_p; zero for the circular variant.
    [[nodiscard]] double q_p() const {
        require_quadratic("q_p");
        return q_p_;
    }

    /// Signal value at a position; total over all finite positions.
    [[nodiscard]] double evaluate(Vec2 r) const {
        switch (type_) {
            case FieldType::circular:
            case FieldType::elliptical: {
                const double qx = q_r_ + 2.0 * q_p_;
                const double qy = q_r_ - 2.0 * q_p_;
                const double dx = r.x - source_.x;
                const double dy = r.y - source_.y;
                return f_star_ - qx * dx * dx - qy * dy * dy;
            }
            case FieldType::rosenbrock: {
                const double p = r.y - r.x * r.x;
                return -r.x * r.x - p * p;
            }
            case FieldType::custom:
                return custom_(r);
        }
        return 0.0;  // unreachable
    }

    /// Gradient and Hessian at a position: analytic for the built-in variants,
    /// central finite differences with step fd_step(r) for custom fields.
    [[nodiscard]] std::pair<Vec2, Mat2> gradient_hessian(Vec2 r) const {
        switch (type_) {
            case FieldType::circular:
            case FieldType::elliptical: {
                const double qx = q_r_ + 2.0 * q_p_;
                const double qy = q_r_ - 2.0 * q_p_;
                const Vec2 grad{-2.0 * qx * (r.x - source_.x), -2.0 * qy * (r.y - source_.y)};
                return {grad, Mat2{-2.0 * qx, 0.0, -2.0 * qy}};
            }
            case FieldType::rosenbrock: {
                const double p = r.y - r.x * r.x;
                const Vec2 grad{-2.0 * r.x + 4.0 * r.x * p, -2.0 * p};
                const Mat2 hess{-2.0 + 4.0 * p - 8.0 * r.x * r.x, 4.0 * r.x, -2.0};
                return {grad, hess};
            }
            case FieldType::custom:
                return fd_gradient_hessian(r);
        }
        return {};  // unreachable
    }

private:
    ScalarField() = default;

    void require_quadratic(const char* what) const {
        if (!is_quadratic()) {
            throw InvalidParameter(std::string(what) + " is defined only for quadratic fields");
        }
    }

    [[nodiscard]] double fd_step(Vec2 r) const {
        return 1e-5 * std::max(1.0, norm(r));
    }

    [[nodiscard]] std::pair<Vec2, Mat2> fd_gradient_hessian(Vec2 r) const {
        const double s = fd_step(r);
        const double fpx = custom_({r.x + s, r.y});
        const double fmx = custom_({r.x - s, r.y});
        const double fpy = custom_({r.x, r.y + s});
        const double fmy = custom_({r.x, r.y - s});
        const double f0 = custom_(r);
        const Vec2 grad{(fpx - fmx) / (2.0 * s), (fpy - fmy) / (2.0 * s)};
        Mat2 hess;
        hess.xx = (fpx - 2.0 * f0 + fmx) / (s * s);
        hess.yy = (fpy - 2.0 * f0 + fmy) / (s * s);
        const double fpp = custom_({r.x + s, r.y + s});
        const double fpm = custom_({r.x + s, r.y - s});
        const double fmp = custom_({r.x - s, r.y + s});
        const double fmm = custom_({r.x - s, r.y - s});
        hess.xy = (fpp - fpm - fmp + fmm) / (4.0 * s * s);
        return {grad, hess};
    }

    FieldType type_ = FieldType::circular;
    double f_star_ = 0.0;
    Vec2 source_{};
    double q_r_ = 1.0;
    double q_p_ = 0.0;
    std::function<double(Vec2)> custom_;
};

}  // namespace uniseek
