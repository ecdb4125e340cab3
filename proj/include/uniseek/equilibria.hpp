#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "uniseek/averaging.hpp"
#include "uniseek/faults.hpp"
#include "uniseek/params.hpp"
#include "uniseek/signal_field.hpp"

namespace uniseek {

/// Sign with sgn(0) = 0.
[[nodiscard]] inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

/// The eight gamma constants of the averaged analysis. gamma1..gamma6 depend
/// only on (a, g) [gamma6 also on nothing else]; gamma7 mixes in b, c and
/// gamma8 mixes in V_c, q_r, R, so the set is tied to a full parameter/field
/// pair.
struct GammaSet {
    double gamma1 = 0.0;  ///< 1 + I1(2a) - 2 I1^2            (> 0 for a, g > 0)
    double gamma2 = 0.0;  ///< I1(3a) + I1 - 2 I1(2a) I1      (> 0 for a, g > 0)
    double gamma3 = 0.0;  ///< (I1(3a) - I1) I2 + (1 - I1(2a)) I2(2a)
    double gamma4 = 0.0;  ///< gamma1 (1 - I1(2a))
    double gamma5 = 0.0;  ///< gamma2 I2 - 2 gamma1 I2(2a)
    double gamma6 = 0.0;  ///< (1 - I1(2a)) (I1^2 - I1(2a))
    double gamma7 = 0.0;  ///< b (I1(2a) - 1) / (2 c I2)      (< 0)
    double gamma8 = 0.0;  ///< 2 c V_c I1 I2 - b^2 q_r R gamma4
};

[[nodiscard]] inline GammaSet gamma_set(const ControllerParams& p, const ScalarField& field) {
    detail::require_quadratic(field, "gamma_set");
    p.validate();
    const double i1 = I1(p.a, p.g), i12 = I1(2.0 * p.a, p.g), i13 = I1(3.0 * p.a, p.g);
    const double i2 = I2(p.a, p.g), i22 = I2(2.0 * p.a, p.g);
    GammaSet s;
    s.gamma1 = 1.0 + i12 - 2.0 * i1 * i1;
    s.gamma2 = i13 + i1 - 2.0 * i12 * i1;
    s.gamma3 = (i13 - i1) * i2 + (1.0 - i12) * i22;
    s.gamma4 = s.gamma1 * (1.0 - i12);
    s.gamma5 = s.gamma2 * i2 - 2.0 * s.gamma1 * i22;
    s.gamma6 = (1.0 - i12) * (i1 * i1 - i12);
    s.gamma7 = p.b * (i12 - 1.0) / (2.0 * p.c * i2);
    s.gamma8 = 2.0 * p.c * p.V_c * i1 * i2 - p.b * p.b * field.q_r() * p.R * s.gamma4;
    return s;
}

/// Equilibrium radius and washout offset for the signed eccentricity branch
/// q_p_signed (call with +q_p or -q_p):
///   rho = (-V_c I1 + b q_p R^2 gamma2) / (b R (q_r + 2 q_p) gamma1)
///   e   = 2 R (q_r + 2 q_p) I1 rho - (q_r + 2 q_p) rho^2 - 2 q_p R^2 I1(2a)
struct RhoE {
    double rho = 0.0;
    double e = 0.0;
};

[[nodiscard]] inline RhoE rho_e(double q_p_signed, const ControllerParams& p,
                                const ScalarField& field) {
    detail::require_quadratic(field, "rho_e");
    const double qr = field.q_r();
    const double qs = qr + 2.0 * q_p_signed;
    if (qs == 0.0) {
        throw InvalidParameter("rho_e: q_r + 2 q_p_signed must be nonzero");
    }
    const double i1 = I1(p.a, p.g), i12 = I1(2.0 * p.a, p.g);
    const GammaSet gs = gamma_set(p, field);
    RhoE out;
    out.rho = (-p.V_c * i1 + p.b * q_p_signed * p.R * p.R * gs.gamma2) / (p.b * p.R * qs * gs.gamma1);
    out.e = 2.0 * p.R * qs * i1 * out.rho - qs * out.rho * out.rho -
            2.0 * q_p_signed * p.R * p.R * i12;
    return out;
}

/// One of the eight closed-form equilibria of the elliptical averaged system.
/// qp_branch records whether the radius/offset pair is rho(+q_p), e(+q_p)
/// (branch +1, equilibria 1, 2, 5, 6) or rho(-q_p), e(-q_p) (branch -1,
/// equilibria 3, 4, 7, 8). Inadmissible equilibria (first component <= 0) are
/// kept and flagged: the mirrored entries carry negative radii by
/// construction and the index logic needs them.
struct EquilibriumE {
    int index = 0;  ///< 1..8
    AvgStateElliptical state;
    double rho = 0.0;  ///< rho(qp_branch * q_p)
    double e = 0.0;    ///< e(qp_branch * q_p)
    int qp_branch = +1;
    bool admissible = false;  ///< state.r > 0
};

[[nodiscard]] inline std::array<EquilibriumE, 8> elliptical_equilibria(const ControllerParams& p,
                                                                       const ScalarField& field) {
    detail::require_quadratic(field, "elliptical_equilibria");
    const double qp = field.q_p();
    const RhoE plus = rho_e(qp, p, field);
    const RhoE minus = rho_e(-qp, p, field);
    const double pi = M_PI;
    const auto make = [](int idx, double r, double ts, double th, double e, double rho,
                         double e_val, int branch) {
        EquilibriumE q;
        q.index = idx;
        q.state = {r, ts, th, e};
        q.rho = rho;
        q.e = e_val;
        q.qp_branch = branch;
        q.admissible = r > 0.0;
        return q;
    };
    return {
        make(1, plus.rho, 0.0, 0.0, plus.e, plus.rho, plus.e, +1),
        make(2, plus.rho, pi, pi, plus.e, plus.rho, plus.e, +1),
        make(3, minus.rho, pi / 2.0, pi / 2.0, minus.e, minus.rho, minus.e, -1),
        make(4, minus.rho, -pi / 2.0, -pi / 2.0, minus.e, minus.rho, minus.e, -1),
        make(5, -plus.rho, pi, 0.0, plus.e, plus.rho, plus.e, +1),
        make(6, -plus.rho, 0.0, pi, plus.e, plus.rho, plus.e, +1),
        make(7, -minus.rho, -pi / 2.0, pi / 2.0, minus.e, minus.rho, minus.e, -1),
        make(8, -minus.rho, pi / 2.0, -pi / 2.0, minus.e, minus.rho, minus.e, -1),
    };
}

/// One of the four closed-form equilibria of the circular averaged system.
struct EquilibriumC {
    int index = 0;  ///< 1..4
    AvgStateCircular state;
    bool defined = true;      ///< equilibria 3/4 exist only when gamma_rho2 > 0 and gamma8 >= 0
    bool admissible = false;  ///< defined and state.r > 0
};

/// All four circular equilibria plus the shared scalars they are built from.
struct CircularEquilibriumSet {
    std::array<EquilibriumC, 4> eqs;
    double rho1 = 0.0;
    double e1 = 0.0;
    double gamma_rho2 = 0.0;  ///< c V_c I1 I2 + b^2 q_r R gamma6
    bool pair34_defined = false;
    double rho2 = 0.0;   ///< NaN when not defined
    double alpha = 0.0;  ///< in (pi/2, pi); NaN when not defined
    double e2 = 0.0;     ///< NaN when not defined
};

[[nodiscard]] inline CircularEquilibriumSet circular_equilibria(const ControllerParams& p,
                                                                const ScalarField& field) {
    detail::require_circular(field, "circular_equilibria");
    const double qr = field.q_r();
    const double i1 = I1(p.a, p.g), i2 = I2(p.a, p.g);
    const GammaSet gs = gamma_set(p, field);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    CircularEquilibriumSet out;
    out.rho1 = p.V_c * i1 / (p.b * qr * p.R * gs.gamma1);
    out.e1 = -2.0 * p.V_c * i1 * i1 / (p.b * gs.gamma1) -
             p.V_c * p.V_c * i1 * i1 / (qr * p.R * p.R * p.b * p.b * gs.gamma1 * gs.gamma1);
    out.gamma_rho2 = p.c * p.V_c * i1 * i2 + p.b * p.b * qr * p.R * gs.gamma6;
    out.pair34_defined = out.gamma_rho2 > 0.0 && gs.gamma8 >= 0.0;
    if (out.pair34_defined) {
        out.rho2 = std::sqrt(out.gamma_rho2 / (2.0 * p.c * p.c * i2 * i2 * qr * p.R));
        // alpha = arccos(gamma7 / rho2) through atan2 with the positive sine
        // branch; gamma7 < 0 keeps it in (pi/2, pi).
        const double sin_sq = std::max(out.rho2 * out.rho2 - gs.gamma7 * gs.gamma7, 0.0);
        out.alpha = std::atan2(std::sqrt(sin_sq), gs.gamma7);
        out.e2 = 2.0 * qr * p.R * gs.gamma7 * i1 - qr * out.rho2 * out.rho2;
    } else {
        out.rho2 = nan;
        out.alpha = nan;
        out.e2 = nan;
    }

    const auto make = [](int idx, double r, double th, double e, bool defined) {
        EquilibriumC q;
        q.index = idx;
        q.state = {r, th, e};
        q.defined = defined;
        q.admissible = defined && r > 0.0;
        return q;
    };
    out.eqs = {
        make(1, out.rho1, M_PI, out.e1, true),
        make(2, -out.rho1, 0.0, out.e1, true),
        make(3, out.rho2, out.alpha, out.e2, out.pair34_defined),
        make(4, out.rho2, -out.alpha, out.e2, out.pair34_defined),
    };
    return out;
}

/// Equilibrium-selection index. When defined, the averaged flow is predicted
/// to settle on the pair {eq_iota, eq_iota+1}.
struct IotaResult {
    bool defined = false;
    int iota = 0;            ///< 1, 3, 5 or 7 when defined
    std::string reason;      ///< why undefined (boundary description)
};

[[nodiscard]] inline IotaResult iota_index(const ControllerParams& p, const ScalarField& field) {
    detail::require_quadratic(field, "iota_index");
    IotaResult out;
    const double qp = field.q_p();
    if (qp == 0.0) {
        out.reason = "q_p = 0: circular case, index table inapplicable";
        return out;
    }
    const GammaSet gs = gamma_set(p, field);
    const double prod = qp * gs.gamma3;
    if (prod == 0.0) {
        out.reason = "q_p * gamma3 = 0: sign boundary";
        return out;
    }
    const double rho = prod < 0.0 ? rho_e(qp, p, field).rho : rho_e(-qp, p, field).rho;
    if (rho == 0.0) {
        out.reason = "selected rho = 0: admissibility boundary";
        return out;
    }
    out.defined = true;
    if (prod < 0.0) {
        out.iota = rho > 0.0 ? 1 : 5;
    } else {
        out.iota = rho > 0.0 ? 3 : 7;
    }
    return out;
}

/// Bias-velocity thresholds for both signed eccentricity branches, plus their
/// circular (q_p = 0) specializations.
struct VcThresholds {
    double vcl_plus = 0.0;   ///< V_c^l(+q_p)
    double vcu_plus = 0.0;   ///< V_c^u(+q_p)
    double vcl_minus = 0.0;  ///< V_c^l(-q_p)
    double vcu_minus = 0.0;  ///< V_c^u(-q_p)
    double v_io = 0.0;       ///< excluded bias value -sgn(gamma3 q_p) b q_p R^2 gamma2 / I1
    double vbar_l = 0.0;     ///< V_c^l(0)
    double vbar_u = 0.0;     ///< V_c^u(0)
};

namespace detail {

[[nodiscard]] inline double vc_lower(double qps, const ControllerParams& p, double qr,
                                     const GammaSet& gs, double i1, double i12) {
    return (-1.0 / (2.0 * i1 * i1)) *
           (p.b * p.R * p.R * (qr + 2.0 * qps) * gs.gamma1 * (1.0 + i12) + p.h * p.R * gs.gamma1 -
            2.0 * p.b * p.R * p.R * qps * gs.gamma2 * i1);
}

[[nodiscard]] inline double vc_upper(double qps, const ControllerParams& p, double qr,
                                     const GammaSet& gs, double i1, double i2) {
    return (p.b * p.b * p.R * (qr - 2.0 * qps) * gs.gamma4 +
            2.0 * p.b * p.c * qps * p.R * p.R * gs.gamma5) /
           (2.0 * p.c * i1 * i2);
}

}  // namespace detail

[[nodiscard]] inline VcThresholds vc_thresholds(const ControllerParams& p,
                                                const ScalarField& field) {
    detail::require_quadratic(field, "vc_thresholds");
    const double qr = field.q_r();
    const double qp = field.q_p();
    const double i1 = I1(p.a, p.g), i12 = I1(2.0 * p.a, p.g), i2 = I2(p.a, p.g);
    const GammaSet gs = gamma_set(p, field);
    VcThresholds out;
    out.vcl_plus = detail::vc_lower(qp, p, qr, gs, i1, i12);
    out.vcu_plus = detail::vc_upper(qp, p, qr, gs, i1, i2);
    out.vcl_minus = detail::vc_lower(-qp, p, qr, gs, i1, i12);
    out.vcu_minus = detail::vc_upper(-qp, p, qr, gs, i1, i2);
    out.v_io = -sgn(gs.gamma3 * qp) * p.b * qp * p.R * p.R * gs.gamma2 / i1;
    out.vbar_l = detail::vc_lower(0.0, p, qr, gs, i1, i12);
    out.vbar_u = detail::vc_upper(0.0, p, qr, gs, i1, i2);
    return out;
}

}  // namespace uniseek
