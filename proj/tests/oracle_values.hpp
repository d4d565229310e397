#pragma once

// Reference values from tests/oracles/oracles.py (numpy, scipy, mpmath),
// computed independently of the library and frozen here.
namespace oracle {

// LP lower bounds of max|u'| over u(0) = 0, u(1/2) = 1 on a 4096-point grid.
inline constexpr double lp_min_slope_12 = 2.1862534325075718;
inline constexpr double lp_min_slope_32_odd = 2.069511572422572;
// Same problem over periodic piecewise-linear profiles: min (1/2) max|u'|.
inline constexpr double pl_min_half_slope = 1.0;

// π sin(0.4π) and -γ π sin(0.4π), γ = √2 - 1.
inline constexpr double twisted_speed_q1 = 2.98783216474155594437;
inline constexpr double twisted_speed_q2 = -1.23760060473051608446;

// μ_{x,T} defect for q1 = c t, H = cos 2π q1, s = 1/(2c), c T = 299 + 1/3.
inline constexpr double defect_T = 0.000920927999034173802;
inline constexpr double defect_2T = 0.000460463999517086901;

// ∂/∂s of sin²(πp) + 0.2 sin(2πs) sin(2πp) at s = 0.1, p = 0.3.
inline constexpr double dds_forced = 0.966882799046402540328;
// {sin(2π p1)/(2π), dq1} at p1 = 0.1.
inline constexpr double bracket_p01 = 0.809016994374947424102;

// q1 displacement per period of the forced family (scipy solve_ivp, rtol 1e-12).
inline constexpr double time_one_avg_p025 = 3.1415926535897936;
inline constexpr double time_one_avg_p01 = 1.8465818304905592;

// 2π / (2 · 512).
inline constexpr double sup_pad_cos_512 = 0.00613592315154256492;

}  // namespace oracle
