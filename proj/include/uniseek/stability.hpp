#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "uniseek/equilibria.hpp"
#include "uniseek/faults.hpp"
#include "uniseek/params.hpp"
#include "uniseek/signal_field.hpp"

namespace uniseek {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat4 = std::array<std::array<double, 4>, 4>;

/// Near-boundary tolerance: strict inequalities that hold/fail by less than
/// this are flagged so callers know the verdict sits on a knife edge.
inline constexpr double kBoundarySlack = 1e-9;

/// Which closed-form structure a 4x4 averaged Jacobian instantiates.
enum class EllipticalStructure { J1_plus, J1_minus, J2_plus, J2_minus };

/// Analytic Jacobian of the elliptical averaged system at one of the eight
/// equilibria. Only seven entries are nonzero besides the fixed -h corner;
/// the structure tag records which sign variant (J1/J2) and eccentricity
/// branch (+q_p / -q_p) built it.
struct JacobianE {
    int eq_index = 0;
    EllipticalStructure structure = EllipticalStructure::J1_plus;
    Mat4 m{};
    double a11 = 0.0, a14 = 0.0, a22 = 0.0, a23 = 0.0, a32 = 0.0, a33 = 0.0, a41 = 0.0;
    double h = 0.0;
    double s14 = 1.0;  ///< sign applied to a14/a41 (+1 for J1, -1 for J2)
};

/// Which closed-form structure a 3x3 circular Jacobian instantiates.
enum class CircularStructure { A_eq1, A_eq2, A_eq3, A_eq4 };

/// Analytic Jacobian of the circular averaged system. Equilibria 1/2 use the
/// m-coefficients, 3/4 the k-coefficients; unused entries are NaN. l0..l2 are
/// the closed-form characteristic-cubic coefficients (equilibria 3/4 only).
struct JacobianC {
    int eq_index = 0;
    CircularStructure structure = CircularStructure::A_eq1;
    Mat3 m{};
    double m11 = 0.0, m13 = 0.0, m22 = 0.0, m31 = 0.0;
    double k11 = 0.0, k12 = 0.0, k13 = 0.0, k21 = 0.0, k22 = 0.0, k23 = 0.0, k31 = 0.0,
           k32 = 0.0;
    double l0 = 0.0, l1 = 0.0, l2 = 0.0;
    double h = 0.0;
};

[[nodiscard]] inline JacobianE jacobian_elliptical(int eq_index, const ControllerParams& p,
                                                   const ScalarField& field) {
    detail::require_quadratic(field, "jacobian_elliptical");
    if (eq_index < 1 || eq_index > 8) {
        throw InvalidParameter("jacobian_elliptical: eq_index must be in 1..8");
    }
    const double qr = field.q_r();
    const double qp = field.q_p();
    // Equilibria 1/2 and 5/6 live on the +q_p branch, 3/4 and 7/8 on -q_p;
    // 5..8 are the mirrored (J2) variants with a14, a41 negated.
    const bool plus_branch = eq_index <= 2 || eq_index == 5 || eq_index == 6;
    const bool mirrored = eq_index >= 5;
    const double qps = plus_branch ? qp : -qp;
    const RhoE re = rho_e(qps, p, field);
    if (re.rho == 0.0) {
        throw InvalidParameter("jacobian_elliptical: rho = 0 (coefficient a23 divides by rho)");
    }
    const double i1 = I1(p.a, p.g), i12 = I1(2.0 * p.a, p.g), i13 = I1(3.0 * p.a, p.g);
    const double i2 = I2(p.a, p.g), i22 = I2(2.0 * p.a, p.g);
    const double qs = qr + 2.0 * qps;

    JacobianE J;
    J.eq_index = eq_index;
    J.structure = mirrored
                      ? (plus_branch ? EllipticalStructure::J2_plus : EllipticalStructure::J2_minus)
                      : (plus_branch ? EllipticalStructure::J1_plus : EllipticalStructure::J1_minus);
    J.h = p.h;
    J.s14 = mirrored ? -1.0 : 1.0;
    J.a11 = 2.0 * p.b * qs * re.rho * i1 - p.b * p.R * qs * (1.0 + i12);
    J.a14 = p.b * i1;
    J.a22 = -p.b * p.R * (qr - 2.0 * qps) * (1.0 - i12);
    J.a23 = 2.0 * p.b * p.R * qs * (i1 * i1 - i12) +
            ((3.0 * i13 - i1 - 2.0 * i12 * i1) * p.b * qps * p.R * p.R - p.V_c * i1) / re.rho;
    J.a32 = 2.0 * p.c * p.R * (qr - 2.0 * qps) * re.rho * i2;
    J.a33 = 4.0 * p.c * qps * p.R * p.R * i22 - 2.0 * p.c * p.R * qs * re.rho * i2;
    J.a41 = 2.0 * p.h * p.R * qs * i1 - 2.0 * p.h * qs * re.rho;

    J.m = {{{J.a11, 0.0, 0.0, J.s14 * J.a14},
            {0.0, J.a22, J.a23, 0.0},
            {0.0, J.a32, J.a33, 0.0},
            {J.s14 * J.a41, 0.0, 0.0, -p.h}}};
    return J;
}

[[nodiscard]] inline JacobianC jacobian_circular(int eq_index, const ControllerParams& p,
                                                 const ScalarField& field) {
    detail::require_circular(field, "jacobian_circular");
    if (eq_index < 1 || eq_index > 4) {
        throw InvalidParameter("jacobian_circular: eq_index must be in 1..4");
    }
    const double qr = field.q_r();
    const double i1 = I1(p.a, p.g), i12 = I1(2.0 * p.a, p.g), i2 = I2(p.a, p.g);
    const GammaSet gs = gamma_set(p, field);
    const CircularEquilibriumSet ce = circular_equilibria(p, field);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    JacobianC J;
    J.eq_index = eq_index;
    J.h = p.h;
    J.k11 = J.k12 = J.k13 = J.k21 = J.k22 = J.k23 = J.k31 = J.k32 = nan;
    J.l0 = J.l1 = J.l2 = nan;
    J.m11 = J.m13 = J.m22 = J.m31 = nan;

    if (eq_index <= 2) {
        J.structure = eq_index == 1 ? CircularStructure::A_eq1 : CircularStructure::A_eq2;
        J.m11 = -2.0 * p.b * qr * i1 * ce.rho1 - p.b * qr * p.R * i12 - p.b * qr * p.R;
        J.m13 = p.b * i1;
        J.m22 = 2.0 * p.c * p.V_c * i1 * i2 / (p.b * gs.gamma1) - p.b * qr * p.R * (1.0 - i12);
        J.m31 = 2.0 * p.h * qr * ce.rho1 + 2.0 * p.h * qr * p.R * i1;
        const double s = eq_index == 1 ? -1.0 : 1.0;
        J.m = {{{J.m11, 0.0, s * J.m13}, {0.0, J.m22, 0.0}, {s * J.m31, 0.0, -p.h}}};
        return J;
    }

    if (!ce.pair34_defined) {
        throw InvalidParameter(
            "jacobian_circular: equilibria 3/4 undefined (gamma_rho2 <= 0 or gamma8 < 0)");
    }
    J.structure = eq_index == 3 ? CircularStructure::A_eq3 : CircularStructure::A_eq4;
    const double rho2 = ce.rho2, al = ce.alpha;
    const double ca = std::cos(al), sa = std::sin(al), s2a = std::sin(2.0 * al);
    J.k11 = 2.0 * p.b * qr * gs.gamma7 * i1 - 2.0 * p.b * qr * p.R * ca * ca * i12 +
            p.b * qr * p.R * (i12 - 1.0);
    J.k12 = 2.0 * p.c * qr * p.R * rho2 * rho2 * sa * i2 + p.b * qr * p.R * rho2 * s2a * i12;
    J.k13 = p.b * ca * i1;
    J.k21 = -4.0 * p.c * qr * p.R * sa * i2 - 2.0 * p.b * qr * sa * i1 +
            p.b * qr * p.R * (s2a / rho2) * i12;
    J.k22 = -2.0 * p.b * qr * p.R * sa * sa * i12;
    J.k23 = -(p.b / rho2) * sa * i1;
    J.k31 = -2.0 * p.h * qr * rho2 + 2.0 * p.h * qr * p.R * ca * i1;
    J.k32 = -2.0 * p.h * qr * p.R * rho2 * sa * i1;
    J.l0 = 2.0 * p.h * qr * p.R * gs.gamma8;
    J.l1 = 2.0 * qr * p.R * gs.gamma8 + p.b * qr * (i1 / (p.c * i2)) * gs.gamma8 +
           p.h * p.b * qr * p.R * gs.gamma1;
    J.l2 = p.h + p.b * qr * p.R * (i12 + 1.0) - 2.0 * p.b * qr * gs.gamma7 * i1;
    const double s = eq_index == 3 ? 1.0 : -1.0;
    J.m = {{{J.k11, s * J.k12, J.k13},
            {s * J.k21, J.k22, s * J.k23},
            {J.k31, s * J.k32, -p.h}}};
    return J;
}

/// Monic characteristic polynomial lambda^degree + c[degree-1] lambda^(degree-1)
/// + ... + c[0], with any structure-derived factorization kept alongside.
struct CharPoly {
    enum class Form { generic, quad_times_quad, linear_times_quad, cubic_closed_form };
    int degree = 0;
    std::array<double, 4> c{};  ///< ascending; entries above degree-1 unused
    Form form = Form::generic;
    std::array<double, 2> quad1{};   ///< {c1, c0} of the first quadratic factor
    std::array<double, 2> quad2{};   ///< {c1, c0} of the second quadratic factor
    double linear_root = 0.0;        ///< r in the (lambda - r) factor
};

/// Characteristic polynomial of a matrix by the Faddeev-LeVerrier recursion
/// (exact in exact arithmetic; used as the structure-free oracle path).
template <std::size_t N>
[[nodiscard]] CharPoly char_poly_from_matrix(const std::array<std::array<double, N>, N>& A) {
    static_assert(N >= 1 && N <= 4);
    std::array<std::array<double, N>, N> M{};  // M_0 = 0
    std::array<double, N + 1> coeff{};         // descending: coeff[k] multiplies lambda^(N-k)
    coeff[0] = 1.0;
    for (std::size_t k = 1; k <= N; ++k) {
        // M_k = A * M_{k-1} + coeff[k-1] * I
        std::array<std::array<double, N>, N> AM{};
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                double acc = (i == j) ? coeff[k - 1] : 0.0;
                for (std::size_t l = 0; l < N; ++l) acc += A[i][l] * M[l][j];
                AM[i][j] = acc;
            }
        }
        M = AM;
        double tr = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (std::size_t l = 0; l < N; ++l) acc += A[i][l] * M[l][i];
            tr += acc;
        }
        coeff[k] = -tr / static_cast<double>(k);
    }
    CharPoly out;
    out.degree = static_cast<int>(N);
    for (std::size_t k = 0; k < N; ++k) out.c[k] = coeff[N - k];
    return out;
}

/// Characteristic quartic of an elliptical Jacobian: the block structure
/// factors it into two quadratics,
///   [lambda^2 + (h - a11) lambda - a11 h - a14 a41] *
///   [lambda^2 - (a22 + a33) lambda + a22 a33 - a23 a32].
[[nodiscard]] inline CharPoly char_poly(const JacobianE& J) {
    CharPoly out;
    out.degree = 4;
    out.form = CharPoly::Form::quad_times_quad;
    out.quad1 = {J.h - J.a11, -J.a11 * J.h - J.a14 * J.a41};
    out.quad2 = {-(J.a22 + J.a33), J.a22 * J.a33 - J.a23 * J.a32};
    const double p1 = out.quad1[0], q1 = out.quad1[1];
    const double p2 = out.quad2[0], q2 = out.quad2[1];
    out.c[3] = p1 + p2;
    out.c[2] = q1 + q2 + p1 * p2;
    out.c[1] = p1 * q2 + p2 * q1;
    out.c[0] = q1 * q2;
    return out;
}

/// Characteristic cubic of a circular Jacobian. Small-bias equilibria factor
/// as (lambda - m22)(lambda^2 + (h - m11) lambda - m11 h - m13 m31); the
/// orbit equilibria use the closed-form l-coefficients.
[[nodiscard]] inline CharPoly char_poly(const JacobianC& J) {
    CharPoly out;
    out.degree = 3;
    if (J.structure == CircularStructure::A_eq1 || J.structure == CircularStructure::A_eq2) {
        out.form = CharPoly::Form::linear_times_quad;
        out.linear_root = J.m22;
        out.quad1 = {J.h - J.m11, -J.m11 * J.h - J.m13 * J.m31};
        const double p1 = out.quad1[0], q1 = out.quad1[1];
        out.c[2] = p1 - J.m22;
        out.c[1] = q1 - J.m22 * p1;
        out.c[0] = -J.m22 * q1;
    } else {
        out.form = CharPoly::Form::cubic_closed_form;
        out.c[2] = J.l2;
        out.c[1] = J.l1;
        out.c[0] = J.l0;
    }
    return out;
}

/// Routh-Hurwitz verdict. slacks holds the left-hand sides of the strict
/// inequalities (positive = satisfied); near_boundary marks any |slack| below
/// kBoundarySlack, where the strict verdict is numerically unreliable.
struct HurwitzVerdict {
    bool stable = false;
    bool near_boundary = false;
    std::vector<double> slacks;
};

/// Routh-Hurwitz test for monic polynomials of degree 1..4. delta_cond is the
/// strictness margin (conditions must exceed it); 0 by default.
[[nodiscard]] inline HurwitzVerdict hurwitz(const CharPoly& poly, double delta_cond = 0.0) {
    HurwitzVerdict v;
    switch (poly.degree) {
        case 1:
            v.slacks = {poly.c[0]};
            break;
        case 2:
            v.slacks = {poly.c[1], poly.c[0]};
            break;
        case 3: {
            const double l2 = poly.c[2], l1 = poly.c[1], l0 = poly.c[0];
            v.slacks = {l2, l0, l1 * l2 - l0};
            break;
        }
        case 4: {
            const double a = poly.c[3], b = poly.c[2], cc = poly.c[1], d = poly.c[0];
            v.slacks = {a, d, a * b - cc, (a * b - cc) * cc - a * a * d};
            break;
        }
        default:
            throw InvalidParameter("hurwitz: polynomial degree must be 1..4 (monic)");
    }
    v.stable = true;
    for (const double s : v.slacks) {
        v.stable = v.stable && s > delta_cond;
        v.near_boundary = v.near_boundary || std::abs(s - delta_cond) < kBoundarySlack;
    }
    return v;
}

/// Roots of a monic CharPoly via its companion matrix (independent oracle for
/// the Routh-Hurwitz path; only the signs of real parts are contract-bearing).
[[nodiscard]] inline std::vector<std::complex<double>> eigenvalues(const CharPoly& poly) {
    const int n = poly.degree;
    if (n < 1) throw InvalidParameter("eigenvalues: empty polynomial");
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -poly.c[i];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(C);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

/// Eigenvalues of a small dense matrix (second oracle path, straight from the
/// Jacobian rather than its characteristic polynomial).
template <std::size_t N>
[[nodiscard]] std::vector<std::complex<double>> eigenvalues_of(
    const std::array<std::array<double, N>, N>& A) {
    Eigen::Matrix<double, N, N> M;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) M(i, j) = A[i][j];
    }
    Eigen::EigenSolver<Eigen::Matrix<double, N, N>> solver(M);
    std::vector<std::complex<double>> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = solver.eigenvalues()(static_cast<int>(i));
    return out;
}

/// Condition (40)-style admissibility check on b for the corollary: returns
/// the inequality b > rhs with its slack.
struct Condition40 {
    bool holds = false;
    double lhs = 0.0;  ///< b
    double rhs = 0.0;
};

[[nodiscard]] inline Condition40 condition40(const ControllerParams& p, const ScalarField& field) {
    detail::require_quadratic(field, "condition40");
    const GammaSet gs = gamma_set(p, field);
    const double qp = field.q_p();
    const double qr = field.q_r();
    const double s3 = sgn(gs.gamma3);
    Condition40 out;
    out.lhs = p.b;
    out.rhs = 2.0 * p.c * p.R * s3 * qp * gs.gamma5 / ((qr + 2.0 * s3 * qp) * gs.gamma4);
    out.holds = out.lhs > out.rhs;
    return out;
}

/// Theorem 1 hypothesis evaluation: the two eccentricity/sign branches, the
/// selected equilibrium pair, and its Hurwitz verdict.
struct Theorem1Report {
    bool cond35 = false;  ///< q_p gamma3 < 0
    bool cond36 = false;  ///< V_c in (V_c^l(q_p), V_c^u(q_p)) and V_c != V_io
    bool cond37 = false;  ///< q_p gamma3 > 0
    bool cond38 = false;  ///< V_c in (V_c^l(-q_p), V_c^u(-q_p)) and V_c != V_io
    bool branch_3536 = false;
    bool branch_3738 = false;
    bool any_branch = false;
    IotaResult iota;
    std::array<int, 2> selected_pair{0, 0};
    bool pair_evaluated = false;
    HurwitzVerdict pair_verdict;
    std::vector<std::complex<double>> pair_eigenvalues;
    GammaSet gammas;
    VcThresholds thresholds;
    bool near_boundary = false;
};

[[nodiscard]] inline Theorem1Report theorem1_check(const ControllerParams& p,
                                                   const ScalarField& field) {
    detail::require_quadratic(field, "theorem1_check");
    Theorem1Report rep;
    rep.gammas = gamma_set(p, field);
    rep.thresholds = vc_thresholds(p, field);
    rep.iota = iota_index(p, field);

    const double qp = field.q_p();
    const double prod = qp * rep.gammas.gamma3;
    const double vc = p.V_c;
    rep.cond35 = prod < 0.0;
    rep.cond37 = prod > 0.0;
    rep.cond36 = rep.thresholds.vcl_plus < vc && vc < rep.thresholds.vcu_plus &&
                 vc != rep.thresholds.v_io;
    rep.cond38 = rep.thresholds.vcl_minus < vc && vc < rep.thresholds.vcu_minus &&
                 vc != rep.thresholds.v_io;
    rep.branch_3536 = rep.cond35 && rep.cond36;
    rep.branch_3738 = rep.cond37 && rep.cond38;
    rep.any_branch = rep.branch_3536 || rep.branch_3738;

    const double interval_slacks[] = {
        std::abs(prod),
        std::abs(vc - rep.thresholds.v_io),
        std::abs(vc - (rep.branch_3536 || rep.cond35 ? rep.thresholds.vcl_plus
                                                     : rep.thresholds.vcl_minus)),
        std::abs(vc - (rep.branch_3536 || rep.cond35 ? rep.thresholds.vcu_plus
                                                     : rep.thresholds.vcu_minus)),
    };
    for (const double s : interval_slacks) rep.near_boundary = rep.near_boundary || s < kBoundarySlack;

    if (rep.any_branch && rep.iota.defined) {
        rep.selected_pair = {rep.iota.iota, rep.iota.iota + 1};
        const JacobianE J = jacobian_elliptical(rep.iota.iota, p, field);
        const CharPoly cp = char_poly(J);
        rep.pair_verdict = hurwitz(cp);
        rep.pair_eigenvalues = eigenvalues(cp);
        rep.pair_evaluated = true;
        rep.near_boundary = rep.near_boundary || rep.pair_verdict.near_boundary;
    }
    return rep;
}

/// Theorem 2 hypothesis evaluation for circular fields: which bias-velocity
/// branch applies and the corresponding equilibrium pair's verdict.
struct Theorem2Report {
    enum class Branch { none, small_bias, large_bias, boundary };
    Branch branch = Branch::none;
    double vbar_l = 0.0, vbar_u = 0.0;
    std::array<int, 2> predicted_pair{0, 0};
    bool pair_evaluated = false;
    // small-bias conditions (cc1)-(cc3)
    bool cc1 = false, cc2 = false, cc3 = false;
    // large-bias cubic Routh-Hurwitz conditions
    bool cubic_l2 = false, cubic_l0 = false, cubic_l1l2 = false;
    HurwitzVerdict verdict;
    std::vector<std::complex<double>> pair_eigenvalues;
    bool near_boundary = false;
};

[[nodiscard]] inline Theorem2Report theorem2_check(const ControllerParams& p,
                                                   const ScalarField& field) {
    detail::require_circular(field, "theorem2_check");
    Theorem2Report rep;
    const VcThresholds th = vc_thresholds(p, field);
    rep.vbar_l = th.vbar_l;
    rep.vbar_u = th.vbar_u;
    const double vc = p.V_c;

    rep.near_boundary = std::abs(vc) < kBoundarySlack || std::abs(vc - th.vbar_u) < kBoundarySlack ||
                        std::abs(vc - th.vbar_l) < kBoundarySlack;

    if (vc == 0.0 || vc == th.vbar_u || vc == th.vbar_l) {
        rep.branch = Theorem2Report::Branch::boundary;
        return rep;
    }
    if ((th.vbar_l < vc && vc < 0.0) || (0.0 < vc && vc < th.vbar_u)) {
        rep.branch = Theorem2Report::Branch::small_bias;
        rep.predicted_pair = {1, 2};
        const JacobianC J = jacobian_circular(1, p, field);
        rep.cc1 = J.m22 < 0.0;
        rep.cc2 = J.m11 - p.h < 0.0;
        rep.cc3 = -J.m11 * p.h - J.m13 * J.m31 > 0.0;
        const CharPoly cp = char_poly(J);
        rep.verdict = hurwitz(cp);
        rep.pair_eigenvalues = eigenvalues(cp);
        rep.pair_evaluated = true;
        rep.near_boundary = rep.near_boundary || rep.verdict.near_boundary;
        return rep;
    }
    if (vc > th.vbar_u) {
        rep.branch = Theorem2Report::Branch::large_bias;
        rep.predicted_pair = {3, 4};
        const JacobianC J = jacobian_circular(3, p, field);
        rep.cubic_l2 = J.l2 > 0.0;
        rep.cubic_l0 = J.l0 > 0.0;
        rep.cubic_l1l2 = J.l1 * J.l2 > J.l0;
        const CharPoly cp = char_poly(J);
        rep.verdict = hurwitz(cp);
        rep.pair_eigenvalues = eigenvalues(cp);
        rep.pair_evaluated = true;
        rep.near_boundary = rep.near_boundary || rep.verdict.near_boundary;
        return rep;
    }
    rep.branch = Theorem2Report::Branch::none;  // vc < vbar_l: no claim
    return rep;
}

/// Qualitative convergence prediction for slightly elliptical fields: which
/// axis the settled position sits on and how the heading relates to the
/// source, valid when the dither-scale and bias-sign preconditions hold.
struct Corollary1Prediction {
    bool applicable = false;
    std::string reason;  ///< set when not applicable
    enum class Axis { major, minor };
    enum class Heading { away, toward };
    Axis axis = Axis::major;
    Heading heading = Heading::away;
    int heading_bias_sign = +1;  ///< the small-V_c sign under which the heading claim holds
    Condition40 cond40;
};

[[nodiscard]] inline Corollary1Prediction corollary1_predict(const ControllerParams& p,
                                                             const ScalarField& field) {
    detail::require_quadratic(field, "corollary1_predict");
    Corollary1Prediction out;
    if (!(field.q_p() > 0.0)) {
        out.reason = "requires q_p > 0";
        return out;
    }
    const bool a_ok = (p.a > 0.0 && p.a < 1.0) || (p.a > 1.0 && p.a < 3.0);
    if (!a_ok) {
        out.reason = "requires a in (0,1) or (1,3)";
        return out;
    }
    if (!(p.g > 0.0 && p.g < 3.0)) {
        out.reason = "requires g in (0,3)";
        return out;
    }
    const Theorem1Report t1 = theorem1_check(p, field);
    if (!t1.any_branch) {
        out.reason = "theorem 1 hypotheses do not hold";
        return out;
    }
    out.cond40 = condition40(p, field);
    if (!out.cond40.holds) {
        out.reason = "bias-gain condition on b fails";
        return out;
    }
    out.applicable = true;
    if (p.a < 1.0) {
        out.axis = Corollary1Prediction::Axis::major;
        out.heading = Corollary1Prediction::Heading::away;
        out.heading_bias_sign = +1;
    } else {
        out.axis = Corollary1Prediction::Axis::minor;
        out.heading = Corollary1Prediction::Heading::toward;
        out.heading_bias_sign = -1;
    }
    return out;
}

}  // namespace uniseek
