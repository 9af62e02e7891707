"""The three spectrum sets, residual experiments, and the witness.

For prime q the relevant subsets of the complex plane are

    sigma0 : the three points (q^2+q+1) e^{2 pi i k/3},
    sigma1 : the cusped curve (q^{3/2}+q^{1/2}) e^{i a} + q e^{-2 i a},
    sigma2 : the filled cusped region { q(s1+s2+s3) : |s_i| = 1, s1 s2 s3 = 1 }.

Membership in sigma2 reduces to one companion cubic: lambda lies in the
region iff every root of X^3 - (lambda/q) X^2 + (conj(lambda)/q) X - 1 is
unimodular (for unimodular roots with product one the linear coefficient
is forced to be the conjugate of the quadratic one, so the single cubic is
exhaustive).  The cusp value q^{3/2} + q + q^{1/2} of sigma1 exceeds the
sigma2 cusp 3q for every q >= 2, which is the non-Ramanujan margin; the
residual sweep certifies that the same point is an approximate eigenvalue.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import validate_q
from .eigen import (
    SpectralParam, Stratum, eigenfunction_grid, eigenvalue_pair,
    solve_unit_cubic,
)
from .operator import GridFunction, L2Space, _grid_mn


class InvalidEpsilon(ValueError):
    """Damping parameter outside (0, 1/2)."""


class TruncationTooCoarse(ValueError):
    """Masked boundary shell holds more than the allowed mass fraction."""


class SetTag(Enum):
    SIGMA0 = "Sigma0"
    SIGMA1 = "Sigma1"
    SIGMA2_BOUNDARY = "Sigma2Boundary"
    SIGMA2_INTERIOR = "Sigma2Interior"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class SpectrumPoint:
    lam: complex
    set_tag: SetTag


# ---------------------------------------------------------------------------
# the sets
# ---------------------------------------------------------------------------

def sigma0(q: int) -> list[complex]:
    """The three rotations of q^2 + q + 1."""
    validate_q(q)
    k = q * q + q + 1
    return [k * cmath.exp(2j * cmath.pi * j / 3) for j in range(3)]


def sigma1_point(q: int, theta: float) -> complex:
    validate_q(q)
    return ((q ** 1.5 + q ** 0.5) * cmath.exp(1j * theta)
            + q * cmath.exp(-2j * theta))


def sigma1_distance(q: int, la: complex, samples: int = 4096) -> float:
    """min over theta of |la - sigma1(theta)|: coarse grid plus
    golden-section refinement around the best sample."""
    validate_q(q)
    thetas = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    pts = ((q ** 1.5 + q ** 0.5) * np.exp(1j * thetas)
           + q * np.exp(-2j * thetas))
    dist = np.abs(complex(la) - pts)
    best = int(np.argmin(dist))
    span = 2 * np.pi / samples
    lo, hi = thetas[best] - span, thetas[best] + span

    def f(th):
        return abs(complex(la) - sigma1_point(q, th))

    phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    for _ in range(80):
        if f(c) < f(d):
            b, d = d, c
            c = b - phi * (b - a)
        else:
            a, c = c, d
            d = a + phi * (b - a)
    return f((a + b) / 2)


def sigma2_contains(q: int, la: complex, tol: float = 1e-6) -> bool:
    """Companion-cubic test: all three roots unimodular within tol."""
    validate_q(q)
    if tol <= 0:
        raise ValueError("tol must be positive")
    la = complex(la)
    roots = solve_unit_cubic(la / q, la.conjugate() / q)
    return all(abs(abs(r) - 1) <= tol for r in roots)


def sigma2_boundary_point(q: int, phi: float) -> complex:
    """Boundary parametrization q(2 e^{i phi} + e^{-2 i phi})."""
    return q * (2 * cmath.exp(1j * phi) + cmath.exp(-2j * phi))


def classify_point(q: int, la: complex, tol: float = 1e-6,
                   boundary_tol: float = 1e-4) -> SpectrumPoint:
    """Tag a point; membership in neither set is reported as Outside
    (the classification makes no claim about such points)."""
    la = complex(la)
    if min(abs(la - p) for p in sigma0(q)) <= tol:
        return SpectrumPoint(la, SetTag.SIGMA0)
    if sigma1_distance(q, la) <= tol:
        return SpectrumPoint(la, SetTag.SIGMA1)
    if sigma2_contains(q, la, tol):
        roots = solve_unit_cubic(la / q, la.conjugate() / q)
        gaps = [abs(roots[0] - roots[1]), abs(roots[0] - roots[2]),
                abs(roots[1] - roots[2])]
        tag = (SetTag.SIGMA2_BOUNDARY if min(gaps) <= boundary_tol
               else SetTag.SIGMA2_INTERIOR)
        return SpectrumPoint(la, tag)
    return SpectrumPoint(la, SetTag.OUTSIDE)


# ---------------------------------------------------------------------------
# residual experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    s: tuple[complex, complex, complex]
    epsilon: float
    depth: int
    residual_plus: float
    residual_minus: float
    norm: float
    truncation_fraction: float


DEPTH_COEFF = 12.0   # depth rule M = ceil(12 / eps) keeps boundary mass tiny
TRUNC_LIMIT = 0.01


def _damped_report(q: int, param: SpectralParam, eps: float, depth: int) -> ResidualReport:
    space = L2Space(q, depth)
    f = eigenfunction_grid(q, param, depth)
    if eps > 0:
        m, _ = _grid_mn(depth)
        f = GridFunction(depth, f.values * np.power(1.0 - eps, m))
    pair = eigenvalue_pair(q, param)
    keep = ~space.boundary_mask
    total_sq = space.norm(f) ** 2
    kept = space.norm(f, where=keep)
    frac = 1.0 - kept ** 2 / total_sq if total_sq > 0 else 1.0
    if frac >= TRUNC_LIMIT:
        raise TruncationTooCoarse(
            f"masked shell holds {frac:.3%} of the mass at depth {depth}")
    ratios = []
    for sign, lam in ((+1, pair.lambda_plus), (-1, pair.lambda_minus)):
        af, _ = space.apply(sign, f)
        resid = GridFunction(depth, af.values - lam * f.values)
        ratios.append(space.norm(resid, where=keep) / kept)
    return ResidualReport(s=param.s, epsilon=eps, depth=depth,
                          residual_plus=ratios[0], residual_minus=ratios[1],
                          norm=math.sqrt(total_sq),
                          truncation_fraction=frac)


def residual_sweep(q: int, param: SpectralParam, eps_list,
                   depth_coeff: float = DEPTH_COEFF) -> list[ResidualReport]:
    """Damped-family residual ratios for each eps, at depth ceil(coeff/eps).

    Trivial parameters need no damping (the eigenfunction is already
    square-summable and exact); they are swept undamped at the same depths
    and reported with epsilon 0.
    """
    validate_q(q)
    reports = []
    for eps in eps_list:
        if not 0 < eps < 0.5:
            raise InvalidEpsilon(f"damping {eps} outside (0, 1/2)")
        depth = math.ceil(depth_coeff / eps)
        used = 0.0 if param.stratum is Stratum.TRIVIAL else eps
        reports.append(_damped_report(q, param, used, depth))
    return reports


def is_decreasing(reports, slack: float = 1.05) -> bool:
    """Residual ratios decrease along the sweep, up to 5% truncation slack."""
    for a, b in zip(reports, reports[1:]):
        if b.residual_plus > slack * a.residual_plus:
            return False
        if b.residual_minus > slack * a.residual_minus:
            return False
    return True


def norm_divergence(q: int, param: SpectralParam, depths) -> list[float]:
    """Partial sums of the squared norm of the undamped eigenfunction up to
    each requested depth (strictly increasing; bounded only for trivial s)."""
    validate_q(q)
    depths = sorted(depths)
    top = depths[-1]
    space = L2Space(q, top)
    f = eigenfunction_grid(q, param, top)
    mass = np.abs(f.values * space.sqrt_weights) ** 2
    m, _ = _grid_mn(top)
    out = []
    for d in depths:
        out.append(float(mass[m <= d].sum()))
    return out


@dataclass(frozen=True)
class WitnessReport:
    q: int
    lambda_star: float
    in_sigma2: bool
    margin: float
    sweep: list
    decreasing: bool


def non_ramanujan_witness(q: int, eps_list=(0.2, 0.1, 0.05, 0.025)) -> WitnessReport:
    """The cusp of sigma1 sits outside sigma2 by margin q^{3/2}+q^{1/2}-2q > 0
    yet passes the residual sweep: an approximate eigenvalue beyond the
    region, so the quotient fails the Ramanujan property."""
    validate_q(q)
    lam = q ** 1.5 + q + q ** 0.5
    margin = q ** 1.5 + q ** 0.5 - 2 * q
    r = math.sqrt(q)
    param = SpectralParam.from_triple(q, r, 1.0, 1.0 / r)
    sweep = residual_sweep(q, param, eps_list)
    return WitnessReport(q=q, lambda_star=lam,
                         in_sigma2=sigma2_contains(q, lam),
                         margin=margin, sweep=sweep,
                         decreasing=is_decreasing(sweep))


# ---------------------------------------------------------------------------
# figure
# ---------------------------------------------------------------------------

def render_spectra(q: int, path, samples: int = 256) -> str:
    """Write an SVG of the three sets: filled inner region, outer cusped
    curve, three point markers, with the axis-scale annotations."""
    validate_q(q)
    size = 640.0
    half = size / 2
    scale = 280.0 / (q * q + q + 1)

    def xy(z: complex) -> tuple[float, float]:
        return half + scale * z.real, half - scale * z.imag

    def path_d(points) -> str:
        coords = [xy(z) for z in points]
        head = f"M {coords[0][0]:.3f} {coords[0][1]:.3f}"
        rest = " ".join(f"L {x:.3f} {y:.3f}" for x, y in coords[1:])
        return f"{head} {rest} Z"

    phis = [2 * math.pi * k / samples for k in range(samples)]
    inner = [sigma2_boundary_point(q, p) for p in phis]
    outer = [sigma1_point(q, p) for p in phis]

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" '
        f'height="{size:.0f}" viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<line x1="0" y1="{half}" x2="{size}" y2="{half}" '
        'stroke="#888" stroke-dasharray="6,5" stroke-width="1"/>',
        f'<line x1="{half}" y1="0" x2="{half}" y2="{size}" '
        'stroke="#888" stroke-dasharray="6,5" stroke-width="1"/>',
        f'<path d="{path_d(inner)}" fill="#3a3a3a" stroke="black" stroke-width="1.2"/>',
        f'<path d="{path_d(outer)}" fill="none" stroke="black" stroke-width="1.4"/>',
    ]
    for pt in sigma0(q):
        x, y = xy(pt)
        lines.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="black"/>')

    def annotate(label, z, dy):
        x, y = xy(z)
        lines.append(f'<line x1="{x:.3f}" y1="{y - dy:.3f}" x2="{x:.3f}" '
                     f'y2="{y - 6:.3f}" stroke="black" stroke-width="1"/>')
        lines.append(f'<text x="{x:.3f}" y="{y - dy - 6:.3f}" font-size="15" '
                     f'text-anchor="middle">{label}</text>')

    annotate("3q", complex(3 * q, 0), 60)
    annotate("√q(q+√q+1)", complex(q ** 1.5 + q + q ** 0.5, 0), 100)
    annotate("q^2+q+1", complex(q * q + q + 1, 0), 140)
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return str(path)
