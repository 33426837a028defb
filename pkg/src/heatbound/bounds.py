"""Evaluators for the heat-trace and Riesz-mean bound families.

Heat-trace side: the volume bound, its exponentially decaying refinement, the
two-term refinement with the clamped remainder, the ball-average integral
bound, the width-integral bound, the direct long-section transform, the convex
comparison bound, the second-moment exponential improvement, the conjectured
exponential bound, and the horn-domain bounds.

Riesz side: the sharp semiclassical bound, its long-section and
width-distribution refinements, the shifted second-moment bound, the two-term
universal bound with its three-case remainder, and the order-lifting integral
identity.

Every product of Gamma ratios and powers is assembled in log space and
exponentiated once, so evaluation stays finite up to d ~ 700 (ratio forms are
provided for the regimes where the raw bound itself overflows a double).
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from . import config, geometry
from .errors import NumericError, ParameterError, UnsupportedDomainError
from .geometry import (
    Ball,
    Box,
    BoxUnion,
    Domain,
    averaged_width,
    faber_krahn_lambda,
    omega_lambda_breakpoints,
    omega_lambda_stats,
    second_moment_ball,
    tau_omega,
    width_breakpoints,
)
from .specfun import (
    delta_correction,
    epsilon,
    log_lcl,
    reg_inc_beta,
    sigma_d,
)

__all__ = [
    "kac_bound",
    "zlargetime_bound",
    "thmheat_bound",
    "thmheat_ratio",
    "corheat_bound",
    "corheat_ratio",
    "proheat_bound",
    "zm_bound",
    "zdirect_bound",
    "corberg_bound",
    "melas_kac_bound",
    "melas_kac_ratio",
    "hh_rhs",
    "hh_ratio",
    "horn_bounds",
    "bly_bound",
    "bly2_bound",
    "blysum_bound",
    "melas_riesz_bound",
    "thmriesz_bound",
    "thmriesz_main_term",
    "thmriesz_remainder",
    "thmriesz_case",
    "corriesz_bound",
    "aizenman_lieb_lift",
    "reduced_laplace",
    "laplace_heat_from_riesz",
    "box_lambda1",
    "MELAS_M2",
    "melas_mtilde",
]

_LOG_4PI = math.log(4.0 * math.pi)

# Only dimension 2 has a published second-moment constant.
MELAS_M2 = 1.0 / 32.0

# Relative slack when validating lambda against the Faber-Krahn level, so that
# a caller passing exactly the computed level never trips the check.
_LAM_SLACK = 1.0 - 1e-9


def _check_t(t: float) -> None:
    if not (t > 0 and math.isfinite(t)):
        raise ParameterError(f"t must be positive and finite, got {t}")


def _check_volume(vol: float) -> None:
    if not (vol > 0 and math.isfinite(vol)):
        raise ParameterError(f"volume must be positive and finite, got {vol}")


def _gammaincc(a: float, x: float) -> float:
    return float(special.gammaincc(a, x))


def _upper_gamma(a: float, x: float) -> float:
    """Unnormalised upper incomplete gamma Gamma(a, x)."""
    return math.exp(special.gammaln(a)) * _gammaincc(a, x)


def _quad(f, a, b, points=None) -> float:
    rtol = config.quad_rtol()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        kwargs = dict(epsabs=0.0, epsrel=rtol, limit=config.QUAD_LIMIT, full_output=1)
        if points is not None and math.isfinite(b):
            pts = sorted(p for p in points if a < p < b)
            if pts:
                kwargs["points"] = pts
        out = integrate.quad(f, a, b, **kwargs)
    val, err = out[0], out[1]
    if len(out) > 3 and err > max(abs(val) * 1e-6, 1e-280):
        raise NumericError(f"quadrature failed on [{a:g}, {b:g}]: {out[3]} (value {val:g} +- {err:g})")
    return float(val)


# ---------------------------------------------------------------------------
# Reduced Laplace transform with certified truncation


def reduced_laplace(
    f: Callable[[float], float],
    lam: float,
    t: float,
    tail_majorant: tuple[float, float] | None,
    points: Sequence[float] | None = None,
) -> float:
    """int_lam^inf f(Lambda) e^(-Lambda t) dLambda with certified truncation.

    `tail_majorant` = (C, p) asserts |f(Lambda)| <= C Lambda^p on the tail; the
    truncation point is pushed out until the majorant's closed-form tail drops
    below 1e-12 of the running value.
    """
    _check_t(t)
    if lam < 0:
        raise ParameterError(f"lambda must be >= 0, got {lam}")
    if tail_majorant is None:
        raise ParameterError("reduced_laplace needs a power-law tail majorant for truncation")
    C, p = tail_majorant
    if C < 0:
        raise ParameterError(f"tail majorant coefficient must be >= 0, got {C}")

    def weighted(L: float) -> float:
        return f(L) * math.exp(-L * t)

    if C == 0.0:
        return 0.0

    def log_tail(T: float) -> float:
        # log of int_T^inf C L^p e^{-Lt} dL = C t^{-p-1} Gamma(p+1, Tt)
        g = _gammaincc(p + 1.0, T * t)
        if g == 0.0:
            return -math.inf
        return math.log(C) - (p + 1.0) * math.log(t) + special.gammaln(p + 1.0) + math.log(g)

    T = max(float(special.gammainccinv(p + 1.0, 1e-16)) / t, lam * 1.5 + 1.0)
    total = _quad(weighted, lam, T, points=points)
    for _ in range(64):
        tail = log_tail(T)
        ref = max(abs(total), 1e-300)
        if tail == -math.inf or tail < math.log(ref) + math.log(1e-12):
            return total
        T_next = 2.0 * T
        total += _quad(weighted, T, T_next, points=points)
        T = T_next
    raise NumericError(f"reduced Laplace tail did not certify below 1e-12 by T={T:g}")


# ---------------------------------------------------------------------------
# Heat-trace bounds


def kac_bound(vol: float, d: int, t: float) -> float:
    """Volume bound |Omega| / (4 pi t)^{d/2}."""
    _check_volume(vol)
    _check_t(t)
    return float(np.exp(math.log(vol) - 0.5 * d * math.log(4.0 * math.pi * t)))


def zlargetime_bound(vol: float, d: int, sigma: float, lam: float, t: float) -> float:
    """Kac bound damped by the normalised upper incomplete gamma at lambda t."""
    _check_t(t)
    if sigma < 1:
        raise ParameterError(f"zlargetime requires sigma >= 1, got {sigma}")
    if lam < 0:
        raise ParameterError(f"lambda must be >= 0, got {lam}")
    return kac_bound(vol, d, t) * _gammaincc(sigma + 0.5 * d + 1.0, lam * t)


@lru_cache(maxsize=None)
def _two_term_constants(d: int) -> tuple[float, float, float, float, float]:
    """(a1, a2, a3, log c1, log c2) of the two-term heat bound."""
    sd = sigma_d(d)
    a1 = sd + 0.5 * d + 1.0
    a2 = sd + 0.5 * (d + 1)
    a3 = sd + 0.5 * (d - 1)
    log_beta = float(special.betaln(0.5, a2))
    lgam_half = float(special.gammaln(0.5 * (d + 1)))
    lgam_vol = float(special.gammaln(0.5 * d + 1.0))
    lc1 = log_beta - math.log(2.0) + (d - 1) / d * lgam_vol - lgam_half
    lc2 = (
        2.0 * math.log(math.pi)
        + math.log(d - 1.0)
        + log_beta
        - math.log(96.0 * (2.0 * sd + d - 1.0))
        + (d - 3) / d * lgam_vol
        - lgam_half
    ) if d > 1 else -math.inf
    return a1, a2, a3, lc1, lc2


def thmheat_ratio(vol: float, d: int, lam: float, t: float) -> float:
    """Two-term heat bound divided by the Kac bound (safe at any dimension)."""
    _check_volume(vol)
    _check_t(t)
    fk = faber_krahn_lambda(vol, d)
    if lam < fk * _LAM_SLACK:
        raise ParameterError(f"lambda={lam:g} lies below the Faber-Krahn level {fk:g}")
    a1, a2, a3, lc1, lc2 = _two_term_constants(d)
    x = lam * t
    log_v = math.log(vol)
    log4pit = math.log(4.0 * math.pi * t)
    main = _gammaincc(a1, x)
    r1 = math.exp(lc1 - log_v / d + 0.5 * log4pit) * _gammaincc(a2, x)
    r2 = math.exp(lc2 - 3.0 * log_v / d + 1.5 * log4pit) * _gammaincc(a3, x)
    return main - max(r1 - r2, 0.0)


def thmheat_bound(vol: float, d: int, lam: float, t: float) -> float:
    """Two-term refinement: damped Kac bound minus the clamped remainder."""
    return kac_bound(vol, d, t) * thmheat_ratio(vol, d, lam, t)


def corheat_ratio(vol: float, d: int, t: float) -> float:
    return thmheat_ratio(vol, d, faber_krahn_lambda(vol, d), t)


def corheat_bound(vol: float, d: int, t: float) -> float:
    """Two-term bound at the universal Faber-Krahn value of lambda."""
    return thmheat_bound(vol, d, faber_krahn_lambda(vol, d), t)


def proheat_bound(vol: float, d: int, lam: float, t: float) -> float:
    """Ball-average refinement: damped Kac bound minus the beta-weighted integral."""
    _check_volume(vol)
    _check_t(t)
    fk = faber_krahn_lambda(vol, d)
    if lam < fk * _LAM_SLACK:
        raise ParameterError(f"lambda={lam:g} lies below the Faber-Krahn level {fk:g}")
    sd = sigma_d(d)
    a1 = sd + 0.5 * d + 1.0
    p = sd + 0.5 * d
    # radius of the equal-volume ball
    log_R = (math.log(vol) + float(special.gammaln(0.5 * d + 1.0))) / d - 0.5 * math.log(math.pi)
    c = math.pi**2 * t / (4.0 * math.exp(2.0 * log_R))
    bdim = 0.5 * (d + 1)

    def integrand(s: float) -> float:
        u = min(c / s, 1.0)
        return math.exp(-s + p * math.log(s)) * reg_inc_beta(0.0, u, 0.5, bdim).value

    lo = lam * t
    hi = max(float(special.gammainccinv(p + 1.0, 1e-18)), lo + 10.0)
    integral = _quad(integrand, lo, hi)
    coeff = math.exp(math.log(vol) - 0.5 * d * math.log(4.0 * math.pi * t) - special.gammaln(a1))
    main = kac_bound(vol, d, t) * _gammaincc(a1, lam * t)
    return main - coeff * integral


def zm_bound(domain: Domain, lam: float, t: float) -> float:
    """Width-integral refinement using the direction-averaged M(pi / sqrt(Lambda))."""
    _check_t(t)
    vol = geometry.volume(domain)
    if not math.isfinite(vol):
        raise UnsupportedDomainError("the width-integral bound needs a finite-volume domain")
    d = domain.d
    fk = faber_krahn_lambda(vol, d)
    if lam < fk * _LAM_SLACK:
        raise ParameterError(f"lambda={lam:g} lies below the Faber-Krahn level {fk:g}")
    sd = sigma_d(d)
    a1 = sd + 0.5 * d + 1.0
    p = sd + 0.5 * d

    def f(L: float) -> float:
        _, M = averaged_width(domain, math.pi / math.sqrt(L))
        return M * math.exp(p * math.log(L))

    pts = set()
    for axis in geometry.supported_axes(domain):
        for b in width_breakpoints(domain, axis):
            if b > 0:
                pts.add(math.pi**2 / b**2)
    integral = reduced_laplace(f, lam, t, tail_majorant=(vol, p), points=sorted(pts))
    sub = math.exp((sd + 1.0) * math.log(t) - special.gammaln(sd + 1.0) + log_lcl(sd, d)) * integral
    main = kac_bound(vol, d, t) * _gammaincc(a1, lam * t)
    return main - sub


def box_lambda1(domain: Domain) -> float:
    """Exact ground state of a box or box union."""
    if isinstance(domain, Box):
        return math.pi**2 * sum(1.0 / a**2 for a in domain.sides)
    if isinstance(domain, BoxUnion):
        return min(
            math.pi**2 * sum(1.0 / (h - l) ** 2 for l, h in zip(lo, hi))
            for lo, hi in domain.boxes
        )
    raise UnsupportedDomainError(f"exact ground state available for boxes only, got {type(domain).__name__}")


def zdirect_bound(domain: Domain, sigma: float, t: float, lambda1: float | None = None) -> float:
    """Long-section transform bound; exact piecewise integration over the jumps.

    |Omega_Lambda| and d_Lambda are step functions of Lambda, so the two
    Laplace integrals reduce to incomplete-gamma differences on each piece.
    """
    _check_t(t)
    if sigma < 1.5:
        raise ParameterError(f"zdirect requires sigma >= 3/2, got {sigma}")
    d = domain.d
    lam1 = box_lambda1(domain) if lambda1 is None else float(lambda1)
    cuts = [lam1] + [b for b in omega_lambda_breakpoints(domain) if b > lam1]
    p1 = sigma + 0.5 * d
    p2 = sigma + 0.5 * (d - 1)

    def piece_integral(p: float, a: float, b: float) -> float:
        upper = _gammaincc(p + 1.0, a * t) - (0.0 if math.isinf(b) else _gammaincc(p + 1.0, b * t))
        return math.exp(special.gammaln(p + 1.0) - (p + 1.0) * math.log(t)) * upper

    I1 = 0.0
    I2 = 0.0
    for i, a in enumerate(cuts):
        b = cuts[i + 1] if i + 1 < len(cuts) else math.inf
        mid = a * 1.000000001 if math.isinf(b) else 0.5 * (a + b)
        vol_L, d_L = omega_lambda_stats(domain, mid)
        if vol_L == 0.0 and d_L == 0.0:
            continue
        I1 += vol_L * piece_integral(p1, a, b)
        I2 += d_L * piece_integral(p2, a, b)
    eps = epsilon(sigma + 0.5 * (d - 1))
    pref = math.exp((sigma + 1.0) * math.log(t) - special.gammaln(sigma + 1.0))
    return pref * (math.exp(log_lcl(sigma, d)) * I1 - eps * math.exp(log_lcl(sigma, d - 1)) * I2)


def corberg_bound(vol: float, d: int, t: float) -> float:
    """Convex-domain comparison bound transplanted to the equal-volume ball."""
    _check_volume(vol)
    _check_t(t)
    lgam_vol = float(special.gammaln(0.5 * d + 1.0))
    log_v = math.log(vol)
    log4pit = math.log(4.0 * math.pi * t)
    first = math.exp(log_v - 0.5 * d * log4pit)
    second = (
        math.log(d)
        + 0.5 * math.log(math.pi)
        - lgam_vol / d
        + (d - 1) / d * log_v
        - math.log(4.0)
        - 0.5 * (d - 1) * log4pit
    )
    value = first - math.exp(second)
    if d >= 2:
        third = (
            math.log(d)
            + (math.log(d - 1.0) if d > 1 else -math.inf)
            - 2.0 * lgam_vol / d
            + (d - 2) / d * log_v
            - math.log(8.0)
            - 0.5 * (d - 2) * log4pit
        )
        if d > 1:
            value += math.exp(third)
    return value


def melas_mtilde(d: int, M_d: float) -> float:
    """Ball-reduced exponent constant (d+2)/d * pi * Gamma(d/2+1)^{-2/d} * M_d."""
    return (d + 2.0) / d * math.pi * math.exp(-2.0 / d * float(special.gammaln(0.5 * d + 1.0))) * M_d


def _melas_md(d: int, M_d: float | None) -> float:
    if M_d is not None:
        return float(M_d)
    if d == 2:
        return MELAS_M2
    raise ParameterError(f"no published second-moment constant for d={d}; pass M_d explicitly")


def melas_kac_ratio(vol: float, d: int, t: float, M_d: float | None = None, I: float | None = None) -> float:
    _check_volume(vol)
    _check_t(t)
    md = _melas_md(d, M_d)
    moment = second_moment_ball(vol, d) if I is None else float(I)
    if not moment > 0:
        raise ParameterError(f"second moment must be positive, got {moment}")
    return math.exp(-md * vol * t / moment)


def melas_kac_bound(vol: float, d: int, t: float, M_d: float | None = None, I: float | None = None) -> float:
    """Kac bound times the second-moment exponential factor.

    With the default ball second moment this is the universal form with
    exponent constant melas_mtilde(d, M_d) / |Omega|^{2/d}.
    """
    return kac_bound(vol, d, t) * melas_kac_ratio(vol, d, t, M_d=M_d, I=I)


def hh_ratio(vol: float, d: int, t: float) -> float:
    return math.exp(-t * vol ** (-2.0 / d))


def hh_rhs(vol: float, d: int, t: float) -> float:
    """Conjectured exponential improvement Kac * exp(-t / |Omega|^{2/d})."""
    _check_volume(vol)
    _check_t(t)
    return kac_bound(vol, d, t) * hh_ratio(vol, d, t)


def _log_integral_with_log(p: float, x: float) -> float:
    """int_x^inf s^p ln(s) e^{-s} ds by adaptive quadrature."""
    return _quad(lambda s: math.exp(p * math.log(s) - s) * math.log(s), x, np.inf)


def horn_bounds(kind: str, d: int, mu: float | None, t: float) -> float:
    """Heat-trace bounds for horn-shaped domains.

    kind='mu'   planar power horn, mu > 0, mu != 1 (d = 2);
    kind='one'  planar horn at mu = 1 (d = 2);
    kind='thmhorn2' radial power horn, mu > 1, any d >= 2;
    kind='exp'  radial exponential horn, any d >= 2.
    """
    _check_t(t)
    if kind == "mu":
        if d != 2:
            raise ParameterError("the planar horn bound is two-dimensional")
        if mu is None or mu <= 0:
            raise ParameterError(f"kind='mu' requires mu > 0, got {mu}")
        if mu == 1.0:
            raise ParameterError("mu = 1 has its own logarithmic bound; use kind='one'")
        A = 4.0 / (105.0 * math.pi**1.5)
        x = 0.5 * math.pi**2 * t
        term1 = (
            A / (mu - 1.0)
            * (2.0 / math.pi**2) ** (0.5 * (mu - 1.0))
            * t ** (-0.5 * (mu + 1.0))
            * _upper_gamma(0.5 * mu + 4.0, x)
        )
        term2 = _gammaincc(4.5, x) / (4.0 * math.pi * t)
        term3 = (
            A * mu / (1.0 - mu)
            * (2.0 / math.pi**2) ** ((1.0 - mu) / (2.0 * mu))
            * t ** (-(1.0 + mu) / (2.0 * mu))
            * _upper_gamma(0.5 / mu + 4.0, x)
        )
        return term1 + term2 + term3
    if kind == "one":
        if d != 2:
            raise ParameterError("the planar horn bound is two-dimensional")
        x = 0.5 * math.pi**2 * t
        A = 4.0 / (105.0 * math.pi**1.5)
        ghat = _gammaincc(4.5, x)
        return (
            -math.log(t) / (4.0 * math.pi * t) * ghat
            - (2.0 * math.log(math.pi) - math.log(2.0)) / (4.0 * math.pi * t) * ghat
            + A / t * _log_integral_with_log(3.5, x)
        )
    if kind == "thmhorn2":
        if d < 2:
            raise ParameterError("thmhorn2 requires d >= 2")
        if mu is None or mu <= 1:
            raise ParameterError(f"thmhorn2 requires mu > 1, got {mu}")
        sd = sigma_d(d)
        log_coeff = (
            -0.5 * d * _LOG_4PI
            + (1.0 - mu) * math.log(math.pi)
            - math.log(mu - 1.0)
            + float(special.gammaln(sd + 0.5 * (d + mu + 1.0)))
            - float(special.gammaln(sd + 0.5 * d + 1.0))
        )
        return math.exp(log_coeff - 0.5 * (d - 1.0 + mu) * math.log(t))
    if kind == "exp":
        if d < 2:
            raise ParameterError("the exponential horn bound requires d >= 2")
        sd = sigma_d(d)
        a1 = sd + 0.5 * d + 1.0
        a2 = sd + 0.5 * (d + 1.0)
        x = math.pi**2 * t
        log4pit = math.log(4.0 * math.pi * t)
        g2_over = math.exp(special.gammaln(a2) - special.gammaln(a1)) * _gammaincc(a2, x)
        pref = 0.5 * math.log(math.pi) - 0.5 * (d - 1.0) * log4pit
        term1 = math.exp(-0.5 * d * log4pit) * _gammaincc(a1, x)
        term2 = math.exp(pref) / 4.0 * math.log(t) * g2_over
        term3 = math.exp(pref) / 2.0 * (math.log(math.pi) - 1.0) * g2_over
        term4 = math.exp(pref - special.gammaln(a1)) / 4.0 * _log_integral_with_log(sd + 0.5 * d, x)
        return term1 + term2 + term3 + term4
    raise ParameterError(f"unknown horn bound kind {kind!r}")


# ---------------------------------------------------------------------------
# Riesz-mean bounds


def bly_bound(vol: float, sigma: float, d: int, Lambda: float) -> float:
    """Sharp semiclassical bound L^cl |Omega| Lambda^{sigma + d/2} (sigma >= 1)."""
    _check_volume(vol)
    if sigma < 1:
        raise ParameterError(f"the semiclassical bound requires sigma >= 1, got {sigma}")
    if not Lambda > 0:
        raise ParameterError(f"Lambda must be positive, got {Lambda}")
    return math.exp(log_lcl(sigma, d) + math.log(vol) + (sigma + 0.5 * d) * math.log(Lambda))


def bly2_bound(domain: Domain, sigma: float, Lambda: float) -> float:
    """Long-section refinement with the lattice-defect correction (sigma >= 3/2)."""
    if sigma < 1.5:
        raise ParameterError(f"the refined bound requires sigma >= 3/2, got {sigma}")
    if not Lambda > 0:
        raise ParameterError(f"Lambda must be positive, got {Lambda}")
    d = domain.d
    vol_L, d_L = omega_lambda_stats(domain, Lambda)
    if vol_L == 0.0:
        return 0.0
    eps = epsilon(sigma + 0.5 * (d - 1))
    logL = math.log(Lambda)
    main = math.exp(log_lcl(sigma, d) + math.log(vol_L) + (sigma + 0.5 * d) * logL)
    corr = eps * math.exp(log_lcl(sigma, d - 1) + math.log(d_L) + (sigma + 0.5 * (d - 1)) * logL)
    return main - corr


def blysum_bound(domain: Domain, sigma: float, Lambda: float, mode: int | str = "avg") -> float:
    """Width-distribution refinement, per axis (mode=i) or direction-averaged.

    Uses the tail integral of m_i over [pi/sqrt(Lambda), inf), which stays
    finite for the infinite-volume horns, plus the delta-weighted boundary
    term (delta vanishes at sigma = sigma_d).
    """
    if sigma < 1.5:
        raise ParameterError(f"the width-distribution bound requires sigma >= 3/2, got {sigma}")
    if not Lambda > 0:
        raise ParameterError(f"Lambda must be positive, got {Lambda}")
    d = domain.d
    width = math.pi / math.sqrt(Lambda)
    if mode == "avg":
        m, M = averaged_width(domain, width)
        tail = geometry.volume(domain) - M
    else:
        profile = geometry.WidthProfile(domain, int(mode))
        m = profile.m(width)
        tail = profile.tail(width)
    if not math.isfinite(tail):
        raise UnsupportedDomainError(
            f"width tail along axis {mode} diverges; the bound does not apply"
        )
    delta = delta_correction(sigma, d)
    logL = math.log(Lambda)
    value = math.exp(log_lcl(sigma, d) + (sigma + 0.5 * d) * logL) * tail
    value += delta * m * math.exp((sigma + 0.5 * (d - 1)) * logL)
    return value


def melas_riesz_bound(
    vol: float, d: int, Lambda: float, M_d: float | None = None, I: float | None = None
) -> float:
    """Second-moment shift of the sigma = 1 semiclassical bound."""
    _check_volume(vol)
    if not Lambda > 0:
        raise ParameterError(f"Lambda must be positive, got {Lambda}")
    md = _melas_md(d, M_d)
    moment = second_moment_ball(vol, d) if I is None else float(I)
    shift = md * vol / moment
    gap = Lambda - shift
    if gap <= 0.0:
        return 0.0
    return math.exp(log_lcl(1.0, d) + math.log(vol) + (1.0 + 0.5 * d) * math.log(gap))


def thmriesz_case(vol: float, d: int, lam: float, Lambda: float) -> str:
    """Which remainder case applies: 'a1', 'a2' or 'a3'."""
    tau = tau_omega(vol, d)
    if lam >= tau:
        return "a1"
    return "a2" if Lambda < tau else "a3"


def thmriesz_main_term(vol: float, d: int, sigma: float, lam: float, Lambda: float) -> float:
    """Leading beta-damped semiclassical term of the two-term Riesz bound."""
    sd = sigma_d(d)
    bhat = reg_inc_beta(min(lam / Lambda, 1.0), 1.0, sd + 0.5 * d + 1.0, sigma - sd).value
    return math.exp(log_lcl(sigma, d) + math.log(vol) + (sigma + 0.5 * d) * math.log(Lambda)) * bhat


def thmriesz_remainder(vol: float, d: int, sigma: float, lam: float, Lambda: float) -> float:
    """Unclamped remainder S(Lambda, lambda) of the two-term Riesz bound."""
    sd = sigma_d(d)
    tau = tau_omega(vol, d)
    logL = math.log(Lambda)
    case = thmriesz_case(vol, d, lam, Lambda)
    a_half = sd + 0.5 * (d + 1.0)
    a_full = sd + 0.5 * d + 1.0

    def surface_term(lower: float) -> float:
        bhat = reg_inc_beta(min(lower / Lambda, 1.0), 1.0, a_half, sigma - sd).value
        log_coeff = (
            log_lcl(sigma, d - 1)
            + (d - 1) / d * math.log(vol)
            + (sigma + 0.5 * (d - 1.0)) * logL
            + float(special.betaln(0.5, a_half))
            - math.log(2.0)
        )
        return math.exp(log_coeff) * bhat

    def bulk_term(lo: float, hi: float) -> float:
        btilde = reg_inc_beta(min(lo / Lambda, 1.0), min(hi / Lambda, 1.0), a_full, sigma - sd).value
        log_coeff = (
            log_lcl(sigma, d) + math.log(vol) + (sigma + 0.5 * d) * logL - math.log(d)
        )
        return math.exp(log_coeff) * btilde

    if case == "a1":
        return surface_term(lam)
    if case == "a2":
        return bulk_term(lam, Lambda)
    return surface_term(tau) + bulk_term(lam, tau)


def thmriesz_bound(vol: float, d: int, sigma: float, lam: float, Lambda: float) -> float:
    """Two-term universal Riesz bound with the clamped three-case remainder."""
    _check_volume(vol)
    sd = sigma_d(d)
    if not sigma > sd:
        raise ParameterError(f"the two-term Riesz bound requires sigma > {sd}, got {sigma}")
    fk = faber_krahn_lambda(vol, d)
    if lam < fk * _LAM_SLACK:
        raise ParameterError(f"lambda={lam:g} lies below the Faber-Krahn level {fk:g}")
    if Lambda < lam:
        raise ParameterError(f"Lambda={Lambda:g} must be >= lambda={lam:g}")
    main = thmriesz_main_term(vol, d, sigma, lam, Lambda)
    S = thmriesz_remainder(vol, d, sigma, lam, Lambda)
    return main - max(S, 0.0)


def corriesz_bound(vol: float, d: int, gamma: float, Lambda: float) -> float:
    """Two-term Riesz bound at the universal Faber-Krahn lambda."""
    return thmriesz_bound(vol, d, gamma, faber_krahn_lambda(vol, d), Lambda)


def aizenman_lieb_lift(
    base: Callable[[float], float],
    sigma: float,
    gamma: float,
    lam: float,
    Lambda: float,
    kinks: Sequence[float] | None = None,
) -> float:
    """Lift a Riesz-mean evaluator from order sigma to gamma > sigma.

    Evaluates (1/B(sigma+1, gamma-sigma)) int_0^{Lambda-lam} tau^{gamma-sigma-1}
    base(Lambda - tau) dtau; the substitution u = tau^{gamma-sigma} removes the
    endpoint singularity.  `kinks` lists Lambda-values where base has kinks
    (e.g. eigenvalues) to split the quadrature.
    """
    if not gamma > sigma:
        raise ParameterError(f"lift requires gamma > sigma, got gamma={gamma}, sigma={sigma}")
    if Lambda < lam:
        raise ParameterError(f"Lambda={Lambda:g} must be >= lambda={lam:g}")
    beta = gamma - sigma
    Y = Lambda - lam
    if Y == 0.0:
        return 0.0

    def g(u: float) -> float:
        return base(Lambda - u ** (1.0 / beta))

    u_max = Y**beta
    cuts = [0.0]
    if kinks is not None:
        taus = sorted(Lambda - k for k in kinks if lam < k < Lambda)
        cuts.extend(tau**beta for tau in taus)
    cuts.append(u_max)
    cuts = sorted(set(cuts))
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        total += _quad(g, a, b)
    return total / (beta * math.exp(float(special.betaln(sigma + 1.0, beta))))


def laplace_heat_from_riesz(spectrum, sigma: float, t: float) -> float:
    """Heat trace recovered from R_sigma by numeric reduced Laplace transform.

    Integrates the exact Riesz mean piecewise between eigenvalue kinks up to a
    cutoff certified against the semiclassical majorant, then completes the
    tail with the majorant's closed form.  Independent of heat_trace_exact.
    """
    from .spectra import riesz_mean_exact  # local import to avoid a cycle

    _check_t(t)
    if sigma <= 0:
        raise ParameterError(f"requires sigma > 0, got {sigma}")
    d = spectrum.d
    p = sigma + 0.5 * d
    lam1 = spectrum.lambda_1
    cutoff = min(
        spectrum.lambda_max,
        max(float(special.gammainccinv(p + 1.0, 1e-15)) / t, 2.0 * lam1),
    )

    def f(L: float) -> float:
        return riesz_mean_exact(spectrum, sigma, L) * math.exp(-L * t)

    ev = spectrum.eigenvalues
    cuts = [lam1] + [float(e) for e in ev if lam1 < e < cutoff] + [cutoff]
    integral = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        integral += _quad(f, a, b)
    # semiclassical completion of the truncated tail
    log_tail = (
        log_lcl(sigma, d)
        + math.log(spectrum.volume)
        - (p + 1.0) * math.log(t)
        + float(special.gammaln(p + 1.0))
    )
    gtail = _gammaincc(p + 1.0, cutoff * t)
    tail = math.exp(log_tail) * gtail if gtail > 0.0 else 0.0
    pref = math.exp((sigma + 1.0) * math.log(t) - float(special.gammaln(sigma + 1.0)))
    return pref * (integral + tail)
