"""Domain representations and geometric quantities.

Covers axis-aligned boxes and unions, balls, horn-shaped domains (planar and
radial, power-law and exponential profiles) and binary rasters, together with
the section-length / width-distribution machinery: m_i(tau), its running
integral M_i(y), the tail integral over [y, inf), direction averages, the
non-increasing column rearrangement of a raster, and the scalar invariants
tau_Omega, the Faber-Krahn ground-state bound and the ball second moment.

Axes are 1-based (i = 1..d); the distinguished section direction is the last
axis.  Domain values are immutable; every operation is a pure function.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError, UnsupportedDomainError
from .specfun import bessel_j_zero, log_gamma, reg_inc_beta

__all__ = [
    "Box",
    "BoxUnion",
    "Ball",
    "Horn2D",
    "Horn2DExp",
    "RadialHorn",
    "RadialHornExp",
    "Raster2D",
    "Domain",
    "WidthProfile",
    "volume",
    "section_length",
    "width_distribution",
    "integrated_width",
    "width_tail",
    "width_breakpoints",
    "averaged_width",
    "supported_axes",
    "mest_lower_bound",
    "tau_omega",
    "faber_krahn_lambda",
    "omega_lambda_stats",
    "omega_lambda_breakpoints",
    "raster_rearrange",
    "second_moment_ball",
    "unit_ball_volume",
    "parse_domain",
    "load_boxunion_json",
    "load_raster_pgm",
]


# ---------------------------------------------------------------------------
# Domain variants


@dataclass(frozen=True)
class Box:
    """Axis-aligned box (0, a_1) x ... x (0, a_d)."""

    sides: tuple[float, ...]

    def __post_init__(self):
        sides = tuple(float(a) for a in self.sides)
        if len(sides) < 1 or any(not (a > 0 and math.isfinite(a)) for a in sides):
            raise ParameterError(f"Box sides must be positive and finite, got {self.sides}")
        object.__setattr__(self, "sides", sides)

    @property
    def d(self) -> int:
        return len(self.sides)

    def describe(self) -> str:
        return "box:" + "x".join(f"{a:g}" for a in self.sides)


@dataclass(frozen=True)
class BoxUnion:
    """Union of pairwise-disjoint axis-aligned open boxes in a common dimension.

    Touching faces are allowed: shared boundary faces carry Dirichlet
    conditions, so each member contributes its own section intervals.
    """

    boxes: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...]

    def __post_init__(self):
        cleaned = []
        for lo, hi in self.boxes:
            lo = tuple(float(v) for v in lo)
            hi = tuple(float(v) for v in hi)
            if len(lo) != len(hi) or any(not (h > l) for l, h in zip(lo, hi)):
                raise ParameterError(f"invalid box corners lo={lo}, hi={hi}")
            cleaned.append((lo, hi))
        if not cleaned:
            raise ParameterError("BoxUnion requires at least one box")
        d = len(cleaned[0][0])
        if any(len(lo) != d for lo, _ in cleaned):
            raise ParameterError("BoxUnion members must share one dimension")
        for (lo1, hi1), (lo2, hi2) in itertools.combinations(cleaned, 2):
            if all(lo1[j] < hi2[j] and lo2[j] < hi1[j] for j in range(d)):
                raise ParameterError(f"BoxUnion members overlap: {lo1, hi1} and {lo2, hi2}")
        object.__setattr__(self, "boxes", tuple(cleaned))

    @property
    def d(self) -> int:
        return len(self.boxes[0][0])

    def extents(self, axis: int) -> list[float]:
        j = axis - 1
        return [hi[j] - lo[j] for lo, hi in self.boxes]

    def describe(self) -> str:
        return f"boxunion[{len(self.boxes)} boxes, d={self.d}]"


@dataclass(frozen=True)
class Ball:
    """Open ball of radius R in R^d."""

    d: int
    radius: float

    def __post_init__(self):
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 1):
            raise ParameterError(f"Ball dimension must be an integer >= 1, got {self.d}")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ParameterError(f"Ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "radius", float(self.radius))

    def describe(self) -> str:
        return f"ball:d={self.d},r={self.radius:g}"


@dataclass(frozen=True)
class Horn2D:
    """Planar horn under the profile f(s) = s^(-1/mu), s > 0 (infinite volume)."""

    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ParameterError(f"Horn2D requires mu > 0, got {self.mu}")
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def d(self) -> int:
        return 2

    def describe(self) -> str:
        return f"horn:mu={self.mu:g}"


@dataclass(frozen=True)
class Horn2DExp:
    """Planar horn under the profile f(s) = exp(-2 s) (volume 1/2)."""

    @property
    def d(self) -> int:
        return 2

    def describe(self) -> str:
        return "hornexp"


@dataclass(frozen=True)
class RadialHorn:
    """Radially symmetric horn in R^d whose last-axis width distribution is tau^(-mu)."""

    d: int
    mu: float

    def __post_init__(self):
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 2):
            raise ParameterError(f"RadialHorn requires integer d >= 2, got {self.d}")
        if not self.mu > 1:
            raise ParameterError(f"RadialHorn requires mu > 1, got {self.mu}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "mu", float(self.mu))

    def describe(self) -> str:
        return f"rhorn:d={self.d},mu={self.mu:g}"


@dataclass(frozen=True)
class RadialHornExp:
    """Radially symmetric horn with last-axis width distribution ln(1/tau); volume 1."""

    d: int

    def __post_init__(self):
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 2):
            raise ParameterError(f"RadialHornExp requires integer d >= 2, got {self.d}")
        object.__setattr__(self, "d", int(self.d))

    def describe(self) -> str:
        return f"rhornexp:d={self.d}"


@dataclass(frozen=True, eq=False)
class Raster2D:
    """Binary occupancy grid with square cells of side h.

    Array axis 0 runs along x_1, axis 1 along x_2; x_2 is the distinguished
    column direction used by the rearrangement.
    """

    occupancy: np.ndarray
    h: float

    def __post_init__(self):
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.ndim != 2:
            raise ParameterError("Raster2D occupancy must be a 2-d array")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ParameterError(f"Raster2D cell size must be positive, got {self.h}")
        occ = occ.copy()
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)
        object.__setattr__(self, "h", float(self.h))

    @property
    def d(self) -> int:
        return 2

    def describe(self) -> str:
        n1, n2 = self.occupancy.shape
        return f"raster[{n1}x{n2},h={self.h:g}]"


Domain = Box | BoxUnion | Ball | Horn2D | Horn2DExp | RadialHorn | RadialHornExp | Raster2D


# ---------------------------------------------------------------------------
# Volumes and sections


def unit_ball_volume(d: int) -> float:
    return math.exp(0.5 * d * math.log(math.pi) - log_gamma(0.5 * d + 1.0))


def volume(domain: Domain) -> float:
    """Lebesgue measure; +inf for domains of infinite volume."""
    if isinstance(domain, Box):
        return math.prod(domain.sides)
    if isinstance(domain, BoxUnion):
        return sum(math.prod(h - l for l, h in zip(lo, hi)) for lo, hi in domain.boxes)
    if isinstance(domain, Ball):
        return unit_ball_volume(domain.d) * domain.radius**domain.d
    if isinstance(domain, Horn2D):
        return math.inf
    if isinstance(domain, Horn2DExp):
        return 0.5
    if isinstance(domain, RadialHorn):
        return math.inf
    if isinstance(domain, RadialHornExp):
        return 1.0
    if isinstance(domain, Raster2D):
        return int(domain.occupancy.sum()) * domain.h**2
    raise UnsupportedDomainError(f"unknown domain {domain!r}")


def _check_axis(domain: Domain, axis: int) -> None:
    if not (isinstance(axis, (int, np.integer)) and 1 <= axis <= domain.d):
        raise ParameterError(f"axis must be in 1..{domain.d}, got {axis}")


def section_length(domain: Domain, axis: int, point) -> float:
    """One-dimensional measure of the section along `axis` through `point`.

    `point` holds the coordinates of the remaining axes in ascending axis
    order (a bare float is accepted when d = 2).
    """
    _check_axis(domain, axis)
    pt = np.atleast_1d(np.asarray(point, dtype=float))
    if pt.shape != (domain.d - 1,):
        raise ParameterError(f"expected {domain.d - 1} transverse coordinates, got {pt.shape}")

    if isinstance(domain, Box):
        others = [a for j, a in enumerate(domain.sides) if j != axis - 1]
        inside = all(0.0 < x < a for x, a in zip(pt, others))
        return domain.sides[axis - 1] if inside else 0.0
    if isinstance(domain, BoxUnion):
        total = 0.0
        for lo, hi in domain.boxes:
            rest = [(lo[j], hi[j]) for j in range(domain.d) if j != axis - 1]
            if all(l < x < h for x, (l, h) in zip(pt, rest)):
                total += hi[axis - 1] - lo[axis - 1]
        return total
    if isinstance(domain, Ball):
        r2 = float(np.dot(pt, pt))
        R2 = domain.radius**2
        return 2.0 * math.sqrt(R2 - r2) if r2 < R2 else 0.0
    if isinstance(domain, Horn2D):
        x = float(pt[0])
        if axis == 2:
            return x ** (-1.0 / domain.mu) if x > 0 else 0.0
        return x ** (-domain.mu) if x > 0 else 0.0
    if isinstance(domain, Horn2DExp):
        x = float(pt[0])
        if axis == 2:
            return math.exp(-2.0 * x) if x > 0 else 0.0
        return 0.5 * math.log(1.0 / x) if 0 < x < 1 else 0.0
    if isinstance(domain, RadialHorn):
        if axis != domain.d:
            raise UnsupportedDomainError("RadialHorn sections are only defined along the last axis")
        s = float(np.linalg.norm(pt))
        if s <= 0:
            return math.inf
        return (unit_ball_volume(domain.d - 1) * s ** (domain.d - 1)) ** (-1.0 / domain.mu)
    if isinstance(domain, RadialHornExp):
        if axis != domain.d:
            raise UnsupportedDomainError("RadialHornExp sections are only defined along the last axis")
        s = float(np.linalg.norm(pt))
        return math.exp(-unit_ball_volume(domain.d - 1) * s ** (domain.d - 1))
    if isinstance(domain, Raster2D):
        x = float(pt[0])
        occ = domain.occupancy
        n1, n2 = occ.shape
        h = domain.h
        if axis == 2:
            i = int(math.floor(x / h))
            if not 0 <= i < n1:
                return 0.0
            return h * int(occ[i, :].sum())
        j = int(math.floor(x / h))
        if not 0 <= j < n2:
            return 0.0
        return h * int(occ[:, j].sum())
    raise UnsupportedDomainError(f"unknown domain {domain!r}")


# ---------------------------------------------------------------------------
# Width distributions m_i, integrals M_i and tail integrals

# A profile is a list of (weight, p) pairs for piecewise-constant cases, or a
# closed form; everything funnels through WidthProfile.


def _step_profile(domain: Domain, axis: int) -> np.ndarray | None:
    """(weight, section length) pairs when m_i is a finite step function."""
    if isinstance(domain, Box):
        w = math.prod(a for j, a in enumerate(domain.sides) if j != axis - 1)
        return np.array([[w, domain.sides[axis - 1]]])
    if isinstance(domain, BoxUnion):
        d = domain.d
        others = [j for j in range(d) if j != axis - 1]
        coords = []
        for j in others:
            vals = sorted({lo[j] for lo, _ in domain.boxes} | {hi[j] for _, hi in domain.boxes})
            coords.append(vals)
        pairs = []
        for cell in itertools.product(*(range(len(c) - 1) for c in coords)):
            lo_c = [coords[m][i] for m, i in enumerate(cell)]
            hi_c = [coords[m][i + 1] for m, i in enumerate(cell)]
            mid = [(l + h) / 2 for l, h in zip(lo_c, hi_c)]
            weight = math.prod(h - l for l, h in zip(lo_c, hi_c))
            p = 0.0
            for lo, hi in domain.boxes:
                if all(lo[j] < mid[m] < hi[j] for m, j in enumerate(others)):
                    p += hi[axis - 1] - lo[axis - 1]
            if p > 0:
                pairs.append((weight, p))
        return np.array(pairs) if pairs else np.zeros((0, 2))
    if isinstance(domain, Raster2D):
        occ = domain.occupancy
        counts = occ.sum(axis=axis - 1)  # summing over the section direction
        h = domain.h
        pairs = [(h, h * int(c)) for c in counts if c > 0]
        return np.array(pairs) if pairs else np.zeros((0, 2))
    return None


class WidthProfile:
    """Width-distribution evaluator for one domain and axis.

    Exposes m(tau) = |{x': section length > tau}|_{d-1}, the running integral
    M(y) and the tail integral over [y, inf).  For Horn2D the profile is the
    rotated-frame upper envelope from the horn analysis, not the exact
    distribution function; `is_upper_envelope` flags this.
    """

    def __init__(self, domain: Domain, axis: int):
        _check_axis(domain, axis)
        if isinstance(domain, (RadialHorn, RadialHornExp)) and axis != domain.d:
            raise UnsupportedDomainError(
                f"{type(domain).__name__} width profile exists only for axis {domain.d}"
            )
        if isinstance(domain, Horn2D) and axis != 2:
            raise UnsupportedDomainError(
                "Horn2D exposes only the rotated-frame envelope on axis 2"
            )
        self.domain = domain
        self.axis = int(axis)
        self.is_upper_envelope = isinstance(domain, Horn2D)
        self._steps = _step_profile(domain, axis)

    # -- scalar evaluators ---------------------------------------------------

    def m(self, tau: float) -> float:
        if not tau > 0:
            raise ParameterError(f"width_distribution requires tau > 0, got {tau}")
        dom = self.domain
        if self._steps is not None:
            w, p = self._steps[:, 0], self._steps[:, 1]
            return float(w[p > tau].sum())
        if isinstance(dom, Ball):
            R = dom.radius
            u = 1.0 - tau * tau / (4.0 * R * R)
            if u <= 0.0:
                return 0.0
            return unit_ball_volume(dom.d - 1) * R ** (dom.d - 1) * u ** (0.5 * (dom.d - 1))
        if isinstance(dom, Horn2D):
            mu = dom.mu
            if tau >= math.sqrt(2.0):
                return 0.0
            return 2.0 ** (0.5 * (mu - 1.0)) * tau**-mu + 2.0 ** ((1.0 - mu) / (2.0 * mu)) * tau ** (-1.0 / mu)
        if isinstance(dom, Horn2DExp):
            if self.axis == 2:
                return 0.5 * math.log(1.0 / tau) if tau < 1.0 else 0.0
            return math.exp(-2.0 * tau)
        if isinstance(dom, RadialHorn):
            return tau**-dom.mu
        if isinstance(dom, RadialHornExp):
            return math.log(1.0 / tau) if tau < 1.0 else 0.0
        raise UnsupportedDomainError(f"no width distribution for {dom!r}")

    def M(self, y: float) -> float:
        if y < 0:
            raise ParameterError(f"integrated_width requires y >= 0, got {y}")
        if y == 0:
            return 0.0
        dom = self.domain
        if self._steps is not None:
            w, p = self._steps[:, 0], self._steps[:, 1]
            return float((w * np.minimum(p, y)).sum())
        if isinstance(dom, Ball):
            R = dom.radius
            s = min(y * y / (4.0 * R * R), 1.0)
            return volume(dom) * reg_inc_beta(0.0, s, 0.5, 0.5 * (dom.d + 1)).value
        if isinstance(dom, Horn2D):
            return math.inf  # the envelope is not integrable at tau = 0
        if isinstance(dom, Horn2DExp):
            if self.axis == 2:
                return 0.5 * (y * (1.0 - math.log(y))) if y < 1.0 else 0.5
            return 0.5 * (1.0 - math.exp(-2.0 * y))
        if isinstance(dom, RadialHorn):
            return math.inf
        if isinstance(dom, RadialHornExp):
            return y * (1.0 - math.log(y)) if y < 1.0 else 1.0
        raise UnsupportedDomainError(f"no integrated width for {dom!r}")

    def tail(self, y: float) -> float:
        """Tail integral of m over [y, inf); finite even when the volume is not."""
        if not y > 0:
            raise ParameterError(f"width_tail requires y > 0, got {y}")
        dom = self.domain
        if self._steps is not None:
            w, p = self._steps[:, 0], self._steps[:, 1]
            return float((w * np.maximum(p - y, 0.0)).sum())
        if isinstance(dom, Ball):
            return volume(dom) - self.M(y)
        if isinstance(dom, Horn2D):
            mu = dom.mu
            root2 = math.sqrt(2.0)
            if y >= root2:
                return 0.0
            if mu == 1.0:
                return math.log(2.0) - 2.0 * math.log(y)
            t1 = (2.0 ** (0.5 * (mu - 1.0)) * y ** (1.0 - mu) - 1.0) / (mu - 1.0)
            t2 = mu / (mu - 1.0) * (1.0 - 2.0 ** ((1.0 - mu) / (2.0 * mu)) * y ** ((mu - 1.0) / mu))
            return t1 + t2
        if isinstance(dom, Horn2DExp):
            return 0.5 - self.M(y)
        if isinstance(dom, RadialHorn):
            return y ** (1.0 - dom.mu) / (dom.mu - 1.0)
        if isinstance(dom, RadialHornExp):
            return 1.0 - self.M(y)
        raise UnsupportedDomainError(f"no width tail for {dom!r}")

    def breakpoints(self) -> np.ndarray:
        """tau values where m jumps or kinks (quadrature hints)."""
        dom = self.domain
        if self._steps is not None:
            return np.unique(self._steps[:, 1]) if len(self._steps) else np.zeros(0)
        if isinstance(dom, Ball):
            return np.array([2.0 * dom.radius])
        if isinstance(dom, Horn2D):
            return np.array([math.sqrt(2.0)])
        if isinstance(dom, (Horn2DExp, RadialHornExp)):
            return np.array([1.0])
        return np.zeros(0)


def supported_axes(domain: Domain) -> list[int]:
    if isinstance(domain, (RadialHorn, RadialHornExp)):
        return [domain.d]
    if isinstance(domain, Horn2D):
        return [2]
    return list(range(1, domain.d + 1))


def width_distribution(domain: Domain, axis: int, tau: float) -> float:
    """m_i(tau): transverse measure of sections longer than tau."""
    return WidthProfile(domain, axis).m(tau)


def integrated_width(domain: Domain, axis: int, y: float) -> float:
    """M_i(y) = int_0^y m_i(tau) dtau."""
    return WidthProfile(domain, axis).M(y)


def width_tail(domain: Domain, axis: int, y: float) -> float:
    """int_y^inf m_i(tau) dtau (equals |Omega| - M_i(y) at finite volume)."""
    return WidthProfile(domain, axis).tail(y)


def width_breakpoints(domain: Domain, axis: int) -> np.ndarray:
    return WidthProfile(domain, axis).breakpoints()


def averaged_width(domain: Domain, y_or_tau: float) -> tuple[float, float]:
    """Direction-averaged (m(tau), M(y)) evaluated at the same argument.

    Raises UnsupportedDomainError naming the axes whose width profile is
    unavailable or divergent.
    """
    axes = supported_axes(domain)
    bad = [i for i in range(1, domain.d + 1) if i not in axes]
    if bad or isinstance(domain, (Horn2D, RadialHorn)):
        missing = bad if bad else axes
        raise UnsupportedDomainError(
            f"averaged width undefined for {type(domain).__name__}: axes {missing} diverge or are unavailable"
        )
    profiles = [WidthProfile(domain, i) for i in axes]
    m = sum(p.m(y_or_tau) for p in profiles) / domain.d
    M = sum(p.M(y_or_tau) for p in profiles) / domain.d
    return m, M


# ---------------------------------------------------------------------------
# Scalar invariants


def mest_lower_bound(vol: float, d: int, y: float) -> float:
    """Universal lower bound min(|Omega|/d, |Omega|^{(d-1)/d} y) on the averaged M(y)."""
    if not (vol > 0 and math.isfinite(vol)):
        raise ParameterError(f"mest_lower_bound requires finite volume > 0, got {vol}")
    if y < 0:
        raise ParameterError(f"mest_lower_bound requires y >= 0, got {y}")
    return min(vol / d, vol ** ((d - 1) / d) * y)


def tau_omega(vol: float, d: int) -> float:
    """Case threshold pi^2 d^2 |Omega|^{-2/d} of the Riesz-mean theorem."""
    if not vol > 0:
        raise ParameterError(f"tau_omega requires volume > 0, got {vol}")
    return math.pi**2 * d**2 * vol ** (-2.0 / d)


@lru_cache(maxsize=None)
def _fk_constant(d: int) -> float:
    j = bessel_j_zero(0.5 * d - 1.0, 1).value
    return math.pi * j * j * math.exp(-(2.0 / d) * log_gamma(0.5 * d + 1.0))


def faber_krahn_lambda(vol: float, d: int) -> float:
    """Faber-Krahn lower bound on the ground state from the volume alone."""
    if not vol > 0:
        raise ParameterError(f"faber_krahn_lambda requires volume > 0, got {vol}")
    if d < 2:
        raise ParameterError(f"faber_krahn_lambda requires d >= 2, got {d}")
    return _fk_constant(int(d)) * vol ** (-2.0 / d)


def second_moment_ball(vol: float, d: int) -> float:
    """I(B) = min_a int_B |x-a|^2 dx for the ball of the given volume."""
    if not vol > 0:
        raise ParameterError(f"second_moment_ball requires volume > 0, got {vol}")
    omega_d = unit_ball_volume(d)
    R = (vol / omega_d) ** (1.0 / d)
    return d * omega_d * R ** (d + 2) / (d + 2)


# ---------------------------------------------------------------------------
# Omega_Lambda statistics (boxes only)


def _as_union(domain: Domain) -> BoxUnion:
    if isinstance(domain, Box):
        return BoxUnion((((0.0,) * domain.d, domain.sides),))
    if isinstance(domain, BoxUnion):
        return domain
    raise UnsupportedDomainError(
        f"Omega_Lambda statistics require an axis-aligned box domain, got {type(domain).__name__}"
    )


def omega_lambda_stats(domain: Domain, Lambda: float) -> tuple[float, float]:
    """(|Omega_Lambda|, d_Lambda) for boxes, with sections along the last axis.

    A member box counts when its last-axis extent strictly exceeds
    l_Lambda = pi / sqrt(Lambda); it then contributes its full volume to
    |Omega_Lambda| and its base area to d_Lambda.
    """
    if not Lambda > 0:
        raise ParameterError(f"omega_lambda_stats requires Lambda > 0, got {Lambda}")
    union = _as_union(domain)
    l_lam = math.pi / math.sqrt(Lambda)
    vol = 0.0
    dlam = 0.0
    for lo, hi in union.boxes:
        ext = hi[-1] - lo[-1]
        if ext > l_lam:
            base = math.prod(h - l for l, h in zip(lo[:-1], hi[:-1]))
            vol += base * ext
            dlam += base
    return vol, dlam


def omega_lambda_breakpoints(domain: Domain) -> np.ndarray:
    """Lambda values where |Omega_Lambda| or d_Lambda jump."""
    union = _as_union(domain)
    pts = sorted({math.pi**2 / (hi[-1] - lo[-1]) ** 2 for lo, hi in union.boxes})
    return np.asarray(pts)


# ---------------------------------------------------------------------------
# Raster rearrangement


def raster_rearrange(domain: Raster2D) -> Raster2D:
    """Discrete non-increasing rearrangement along the column (x_2) direction.

    Each column's occupied cells are pushed down to a contiguous run starting
    at row 0, preserving the per-column occupancy count.
    """
    if not isinstance(domain, Raster2D):
        raise UnsupportedDomainError("raster_rearrange expects a Raster2D domain")
    occ = domain.occupancy
    n1, n2 = occ.shape
    counts = occ.sum(axis=1)
    out = np.zeros_like(occ)
    rows = np.arange(n2)
    for i in range(n1):
        out[i, :] = rows < counts[i]
    return Raster2D(occupancy=out, h=domain.h)


# ---------------------------------------------------------------------------
# Loaders and the CLI mini-grammar


def load_boxunion_json(path: str) -> BoxUnion:
    """Load a BoxUnion from a JSON array of {"lo": [...], "hi": [...]} objects."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "boxes" in data:
        data = data["boxes"]
    if not isinstance(data, list):
        raise ParameterError(f"{path}: expected a JSON array of boxes")
    boxes = []
    for entry in data:
        try:
            boxes.append((tuple(entry["lo"]), tuple(entry["hi"])))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"{path}: each box needs 'lo' and 'hi' arrays") from exc
    return BoxUnion(tuple(boxes))


def load_raster_pgm(path: str, h: float) -> Raster2D:
    """Load a PGM image (P2 or P5) as a raster; cells at >= 50% of maxval are occupied.

    Image rows map to x_2 top-to-bottom reversed (row 0 of the file is the
    largest x_2), columns to x_1.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4 and pos < len(data):
        m = re.compile(rb"\s*(#[^\n]*\n|\S+)").match(data, pos)
        if m is None:
            break
        pos = m.end()
        tok = m.group(1)
        if not tok.startswith(b"#"):
            tokens.append(tok)
    if len(tokens) < 4 or tokens[0] not in (b"P2", b"P5"):
        raise ParameterError(f"{path}: not a PGM file")
    magic = tokens[0]
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if magic == b"P5":
        raw = data[pos + 1 : pos + 1 + width * height * (1 if maxval < 256 else 2)]
        dtype = np.uint8 if maxval < 256 else ">u2"
        img = np.frombuffer(raw, dtype=dtype, count=width * height).reshape(height, width)
    else:
        vals = np.array(data[pos:].split(), dtype=int)
        img = vals[: width * height].reshape(height, width)
    occ = img.astype(float) >= 0.5 * maxval
    # file row 0 is the top of the image = largest x_2
    return Raster2D(occupancy=occ[::-1, :].T, h=h)


def parse_domain(spec: str) -> Domain:
    """Parse the CLI mini-grammar, e.g. box:1x1, ball:d=2,r=1, rhorn:d=3,mu=2."""
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    head = head.lower()

    def kv(text: str) -> dict[str, str]:
        out = {}
        for part in text.split(","):
            if not part:
                continue
            key, _, val = part.partition("=")
            out[key.strip()] = val.strip()
        return out

    try:
        if head == "box":
            return Box(tuple(float(s) for s in rest.split("x")))
        if head == "boxunion":
            return load_boxunion_json(rest)
        if head == "ball":
            args = kv(rest)
            return Ball(d=int(args["d"]), radius=float(args["r"]))
        if head == "horn":
            return Horn2D(mu=float(kv(rest)["mu"]))
        if head == "hornexp":
            return Horn2DExp()
        if head == "rhorn":
            args = kv(rest)
            return RadialHorn(d=int(args["d"]), mu=float(args["mu"]))
        if head == "rhornexp":
            return RadialHornExp(d=int(kv(rest)["d"]))
        if head == "raster":
            path, _, tail_part = rest.partition(",")
            args = kv(tail_part)
            return load_raster_pgm(path, h=float(args["h"]))
    except ParameterError:
        raise
    except (KeyError, ValueError, OSError) as exc:
        raise ParameterError(f"cannot parse domain spec {spec!r}: {exc}") from exc
    raise ParameterError(f"unknown domain kind {head!r} in {spec!r}")
