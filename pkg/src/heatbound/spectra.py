"""Exact Dirichlet spectra for boxes, box unions and balls (d = 2, 3).

These spectra are the ground truth every bound is checked against: the heat
trace Z(t) with a rigorous truncation-tail certificate, and the Riesz means
R_sigma(Lambda) for Lambda below the certified threshold.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import IncompleteSpectrumError, ParameterError, UnsupportedDomainError
from .geometry import Ball, Box, BoxUnion, Domain
from .specfun import bessel_j_zeros_upto, log_lcl

__all__ = [
    "Spectrum",
    "enumerate_eigenvalues",
    "heat_trace_exact",
    "riesz_mean_exact",
    "default_lambda_max",
    "export_spectrum_csv",
]

# Abort enumeration when the Weyl estimate predicts more than this many levels.
MAX_EIGENVALUES = 50_000_000


@dataclass(frozen=True)
class Spectrum:
    """Sorted exact eigenvalues with multiplicities, complete up to lambda_max."""

    eigenvalues: np.ndarray
    multiplicities: np.ndarray
    lambda_max: float
    domain: Domain
    volume: float = field(default=0.0)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        mult = np.asarray(self.multiplicities, dtype=np.int64)
        if ev.ndim != 1 or ev.shape != mult.shape or len(ev) == 0:
            raise ParameterError("Spectrum needs matching non-empty eigenvalue/multiplicity arrays")
        if np.any(np.diff(ev) <= 0):
            raise ParameterError("eigenvalues must be strictly increasing")
        ev.setflags(write=False)
        mult.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "multiplicities", mult)
        object.__setattr__(self, "volume", geometry.volume(self.domain))

    @property
    def d(self) -> int:
        return self.domain.d

    @property
    def lambda_1(self) -> float:
        return float(self.eigenvalues[0])

    def counting_function(self, Lambda: float) -> int:
        """N(Lambda): number of eigenvalues <= Lambda, counted with multiplicity."""
        idx = np.searchsorted(self.eigenvalues, Lambda, side="right")
        return int(self.multiplicities[:idx].sum())


def default_lambda_max(d: int, t_min: float, tol_factor: float = 1e-12) -> float:
    """Smallest threshold whose heat-trace tail bound is below tol_factor * Kac(t_min).

    The tail certificate is exp(-L t/2) Kac(t/2), so the requirement reduces to
    exp(-L t_min / 2) 2^{d/2} <= tol_factor.
    """
    if not t_min > 0:
        raise ParameterError(f"t_min must be positive, got {t_min}")
    return (2.0 / t_min) * (0.5 * d * math.log(2.0) - math.log(tol_factor))


def _box_eigenvalues(sides: tuple[float, ...], lambda_max: float) -> np.ndarray:
    """All pi^2 sum k_i^2/a_i^2 <= lambda_max, iterated axis-by-axis with cutoffs."""
    inv2 = np.array([math.pi**2 / a**2 for a in sides])
    levels = np.zeros(1)
    for w in inv2:
        k_top = int(math.floor(math.sqrt(max(lambda_max - levels.min(), 0.0) / w)))
        if k_top < 1:
            return np.zeros(0)
        k2 = w * np.arange(1, k_top + 1) ** 2
        levels = (levels[:, None] + k2[None, :]).ravel()
        levels = levels[levels <= lambda_max]
        if len(levels) == 0:
            return np.zeros(0)
    return levels


def _weyl_guard(d: int, vol: float, lambda_max: float) -> None:
    est = math.exp(log_lcl(0.0, d)) * vol * lambda_max ** (0.5 * d)
    if est > MAX_EIGENVALUES:
        raise ParameterError(
            f"Weyl estimate predicts ~{est:.3g} eigenvalues below {lambda_max:g}; "
            f"cap is {MAX_EIGENVALUES}"
        )


def _group(levels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    values, counts = np.unique(levels, return_counts=True)
    return values, counts


def _ball_levels(domain: Ball, lambda_max: float) -> tuple[np.ndarray, np.ndarray]:
    R = domain.radius
    x_max = math.sqrt(lambda_max) * R
    values = []
    mults = []
    order = 0
    while True:
        nu = order + 0.5 if domain.d == 3 else float(order)
        zeros = bessel_j_zeros_upto(nu, x_max)
        if len(zeros) == 0:
            break
        lam = (zeros / R) ** 2
        if domain.d == 2:
            mult = 1 if order == 0 else 2
        else:
            mult = 2 * order + 1
        values.append(lam)
        mults.append(np.full(len(lam), mult, dtype=np.int64))
        order += 1
    lam = np.concatenate(values)
    mult = np.concatenate(mults)
    srt = np.argsort(lam)
    lam, mult = lam[srt], mult[srt]
    # exact degeneracies across orders do not occur for Bessel zeros, but the
    # Spectrum invariant needs strict monotonicity
    out_l, out_m = [lam[0]], [int(mult[0])]
    for l, m in zip(lam[1:], mult[1:]):
        if l == out_l[-1]:
            out_m[-1] += int(m)
        else:
            out_l.append(l)
            out_m.append(int(m))
    return np.asarray(out_l), np.asarray(out_m, dtype=np.int64)


def enumerate_eigenvalues(domain: Domain, lambda_max: float) -> Spectrum:
    """Complete Dirichlet spectrum of a box, box union, or ball up to lambda_max.

    Disk multiplicities are 1 for angular index 0 and 2 otherwise; the 3-ball
    carries 2l+1 per angular degree l.  A box union is spectrally the disjoint
    union of its members.
    """
    if not lambda_max > 0:
        raise ParameterError(f"lambda_max must be positive, got {lambda_max}")
    if isinstance(domain, Box):
        _weyl_guard(domain.d, geometry.volume(domain), lambda_max)
        levels = _box_eigenvalues(domain.sides, lambda_max)
        if len(levels) == 0:
            raise ParameterError(
                f"lambda_max={lambda_max:g} lies below the ground state of {domain.describe()}"
            )
        values, counts = _group(np.sort(levels))
    elif isinstance(domain, BoxUnion):
        _weyl_guard(domain.d, geometry.volume(domain), lambda_max)
        parts = []
        for lo, hi in domain.boxes:
            sides = tuple(h - l for l, h in zip(lo, hi))
            parts.append(_box_eigenvalues(sides, lambda_max))
        levels = np.concatenate(parts)
        if len(levels) == 0:
            raise ParameterError(
                f"lambda_max={lambda_max:g} lies below the ground state of {domain.describe()}"
            )
        values, counts = _group(np.sort(levels))
    elif isinstance(domain, Ball):
        if domain.d not in (2, 3):
            raise UnsupportedDomainError("ball spectra implemented for d = 2 and 3 only")
        values, counts = _ball_levels(domain, lambda_max)
        if len(values) == 0 or values[0] > lambda_max:
            raise ParameterError(
                f"lambda_max={lambda_max:g} lies below the ground state of {domain.describe()}"
            )
    else:
        raise UnsupportedDomainError(
            f"exact spectra are available for Box, BoxUnion and Ball only, got {type(domain).__name__}"
        )
    return Spectrum(values, counts, float(lambda_max), domain)


def heat_trace_exact(spectrum: Spectrum, t: float) -> tuple[float, float]:
    """(Z(t) over the stored levels, rigorous bound on the omitted tail).

    The tail uses sum_{lambda > L} e^{-lambda t} <= e^{-L t/2} Z(t/2) together
    with the volume bound on Z(t/2).
    """
    if not t > 0:
        raise ParameterError(f"heat_trace_exact requires t > 0, got {t}")
    lam = spectrum.eigenvalues
    value = float(np.sum(spectrum.multiplicities * np.exp(-lam * t)))
    d = spectrum.d
    kac_half = spectrum.volume / (4.0 * math.pi * 0.5 * t) ** (0.5 * d)
    tail = math.exp(-spectrum.lambda_max * 0.5 * t) * kac_half
    return value, tail


def riesz_mean_exact(spectrum: Spectrum, sigma: float, Lambda: float) -> float:
    """R_sigma(Lambda) = sum mult (Lambda - lambda_k)_+^sigma, complete sums only."""
    if sigma < 0:
        raise ParameterError(f"riesz_mean_exact requires sigma >= 0, got {sigma}")
    if Lambda > spectrum.lambda_max:
        raise IncompleteSpectrumError(
            f"Lambda={Lambda:g} exceeds the certified threshold {spectrum.lambda_max:g}"
        )
    gap = Lambda - spectrum.eigenvalues
    pos = gap > 0
    if sigma == 0:
        return float(spectrum.multiplicities[pos].sum())
    return float(np.sum(spectrum.multiplicities[pos] * gap[pos] ** sigma))


def export_spectrum_csv(spectrum: Spectrum, path: str) -> None:
    """Write (index, lambda, multiplicity) rows with round-trip float formatting."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "lambda", "multiplicity"])
        for i, (lam, mult) in enumerate(zip(spectrum.eigenvalues, spectrum.multiplicities), start=1):
            writer.writerow([i, f"{lam:.17g}", int(mult)])
