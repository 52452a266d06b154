"""Vector seminorms induced by a semi-inner product and a positive weight.

Given a semi-inner product T with codomain R^n and a weight u in F+, the
map x -> T(x,x) [*] u is a vector seminorm: positive, absolutely
homogeneous, subadditive. Its square satisfies (T(x,x) [*] u)^2 = T(x,x)*u
because the codomain is square root closed, which turns every triangle-type
statement into algebra on the Gram values a = T(x,x), b = T(x,y),
c = T(y,y):

    seminorm_sq(x + y)      = (a + 2b + c)*u
    (norm(x) + norm(y))^2   = a*u + c*u + 2*(a*c [*] u^2)     (squared rhs)
    middle                  = rhs_sq - D(x,y)*u

and the sharpened triangle chain lhs_sq <= middle <= rhs_sq holds with
middle - lhs_sq = 2*(|b| - b)*u = 4*(T(x,y)*u)^- exactly. That identity is
what makes the equality case decidable: equality in the triangle
inequality holds iff T(x,y)*u is in F+, and both sides of the iff are
computed from quantities that agree to rounding error.

Checks here return raw residual vectors or record dataclasses; scale
normalization follows the package-wide policy (componentwise scale of the
largest participating quantity plus an absolute floor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    NotInPositiveCone,
    as_lattice_vector,
    f_mul,
    in_positive_cone,
)
from .means import box_plus, box_times
from .cauchy_schwarz import CONE_BAND, defect_closed
from .sip import AxiomReport, Sip, sip_eval


class PreconditionViolated(ValueError):
    """A theorem's hypothesis does not hold for the given inputs."""


@dataclass(frozen=True)
class SeminormSpec:
    """A semi-inner product together with a weight u in F+."""

    sip: Sip
    u: np.ndarray

    def __post_init__(self):
        u = as_lattice_vector(self.u, self.sip.codomain_dim)
        if not in_positive_cone(u, tol=DEFAULT_ABS_TOL):
            raise NotInPositiveCone(f"weight entry {np.min(u)} is negative")
        object.__setattr__(self, "u", np.maximum(u, 0.0))


def _cone_floor(*vecs: np.ndarray) -> float:
    # Scale-aware clamp for geometric means of computed (hence rounded)
    # positive-cone values.
    return DEFAULT_REL_TOL * float(sum(np.max(np.abs(v)) for v in vecs)) + DEFAULT_ABS_TOL


def seminorm_eval(spec: SeminormSpec, x) -> np.ndarray:
    """norm_u(x) = T(x,x) [*] u."""
    a = sip_eval(spec.sip, x, x)
    return box_times(a, spec.u, floor=_cone_floor(a, spec.u))


def seminorm_sq(spec: SeminormSpec, x) -> np.ndarray:
    """T(x,x)*u, the f-algebra square of seminorm_eval(spec, x)."""
    return f_mul(sip_eval(spec.sip, x, x), spec.u)


def vsn_axiom_check(spec: SeminormSpec, samples: int = 1000, seed: int = 0,
                    tol: float = 1e-9,
                    floor: float = DEFAULT_ABS_TOL) -> AxiomReport:
    """Seminorm axioms on random samples: positivity, homogeneity, triangle.

    Homogeneity residuals compare norm(alpha*x) with |alpha|*norm(x);
    triangle residuals are normalized one-sided violations of
    norm(x+y) <= norm(x) + norm(y).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    m = spec.sip.domain_dim
    pos = 0.0
    hom = 0.0
    tri = 0.0
    for k in range(samples):
        x = rng.uniform(-10.0, 10.0, m)
        y = rng.uniform(-10.0, 10.0, m)
        alpha = rng.uniform(-4.0, 4.0)
        sx = seminorm_eval(spec, x)
        sy = seminorm_eval(spec, y)
        sxy = seminorm_eval(spec, x + y)
        sax = seminorm_eval(spec, alpha * x)
        pos = max(pos, float(np.max(np.maximum(-sx, 0.0) / (np.abs(sx) + floor))))
        ref = np.abs(alpha) * sx
        hom = max(hom, float(np.max(np.abs(sax - ref) / (np.maximum(np.abs(sax), ref) + floor))))
        bound = sx + sy
        tri = max(tri, float(np.max((sxy - bound) / (np.maximum(sxy, bound) + floor))))
    res = {"positivity": pos, "homogeneity": hom, "triangle": max(tri, 0.0)}
    return AxiomReport(residuals=res, samples=samples, tol=tol)


def _domain_pair(spec: SeminormSpec, x, y) -> tuple[np.ndarray, np.ndarray]:
    return (as_lattice_vector(x, spec.sip.domain_dim),
            as_lattice_vector(y, spec.sip.domain_dim))


def triangle_residual(spec: SeminormSpec, x, y) -> np.ndarray:
    """Raw slack norm(x) + norm(y) - norm(x+y), in F+ when the axioms hold."""
    x, y = _domain_pair(spec, x, y)
    return seminorm_eval(spec, x) + seminorm_eval(spec, y) - seminorm_eval(spec, x + y)


@dataclass(frozen=True)
class SharpTriangle:
    """Both forms of the sharpened triangle inequality at one (x, y).

    The squared chain is lhs_sq <= middle <= rhs_sq with
    middle = rhs_sq - D(x,y)*u; the sqrt form compares norm(x+y),
    sqrt(middle) and norm(x) + norm(y). chain_ok covers both forms.
    equality_holds means the sharpened bound is attained, lhs_sq = middle,
    and condition_holds means T(x,y)*u in F+; the two must agree on every
    non-borderline input. (Equality of lhs_sq with rhs_sq itself is the
    additivity characterization, handled by additivity_check.)
    """

    lhs_sq: np.ndarray
    middle: np.ndarray
    rhs_sq: np.ndarray
    chain_ok: bool
    equality_holds: bool
    condition_holds: bool
    borderline: bool


CHAIN_FLOOR = 1e-10


def sharpened_triangle(spec: SeminormSpec, x, y, band: float = CONE_BAND,
                       floor: float = DEFAULT_ABS_TOL) -> SharpTriangle:
    x, y = _domain_pair(spec, x, y)
    sx = seminorm_eval(spec, x)
    sy = seminorm_eval(spec, y)
    ssum = sx + sy
    lhs_sq = seminorm_sq(spec, x + y)
    rhs_sq = f_mul(ssum, ssum)
    defect = defect_closed(spec.sip, x, y)
    middle = rhs_sq - f_mul(defect, spec.u)

    scale = np.maximum(np.abs(lhs_sq), np.maximum(np.abs(middle), np.abs(rhs_sq))) + floor
    chain_sq = (np.min((middle - lhs_sq) / scale) >= -CHAIN_FLOOR
                and np.min((rhs_sq - middle) / scale) >= -CHAIN_FLOOR)

    sxy = seminorm_eval(spec, x + y)
    mid_sqrt = np.sqrt(np.maximum(middle, 0.0))
    lin_scale = np.maximum(sxy, np.maximum(mid_sqrt, ssum)) + floor
    chain_lin = (np.min((mid_sqrt - sxy) / lin_scale) >= -CHAIN_FLOOR
                 and np.min((ssum - mid_sqrt) / lin_scale) >= -CHAIN_FLOOR)

    # middle - lhs_sq = 4*(T(x,y)*u)^- exactly; testing the gap at
    # band*4*scale and the cone violation at band*scale gives matched
    # thresholds, so the biconditional cannot disagree outside the
    # borderline window.
    bu = f_mul(sip_eval(spec.sip, x, y), spec.u)
    neg = float(np.max(np.maximum(-bu, 0.0) / scale))
    eq_gap = float(max(np.max((middle - lhs_sq) / (4.0 * scale)), 0.0))
    return SharpTriangle(
        lhs_sq=lhs_sq,
        middle=middle,
        rhs_sq=rhs_sq,
        chain_ok=bool(chain_sq and chain_lin),
        equality_holds=eq_gap <= band,
        condition_holds=neg <= band,
        borderline=band / 8.0 < max(neg, eq_gap) < 8.0 * band,
    )


@dataclass(frozen=True)
class AdditivityCheck:
    """norm(x+y) = norm(x) + norm(y) iff T(x,y)*u in F+ and D(x,y)*u = 0."""

    additive: bool
    condition_pos: bool
    condition_defect_zero: bool
    borderline: bool


def additivity_check(spec: SeminormSpec, x, y, band: float = CONE_BAND,
                     floor: float = DEFAULT_ABS_TOL) -> AdditivityCheck:
    """Characterize equality in the triangle inequality.

    Decided in the squared domain, where the gap decomposes exactly:
    rhs_sq - lhs_sq = D(x,y)*u + 4*(T(x,y)*u)^-. Normalizing all three
    quantities by the same componentwise scale makes the conjunction
    coherent: additive uses threshold 2*band, each condition uses band,
    and inputs within (band/8, 8*band) of a threshold are borderline.
    """
    x, y = _domain_pair(spec, x, y)
    sx = seminorm_eval(spec, x)
    sy = seminorm_eval(spec, y)
    ssum = sx + sy
    lhs_sq = seminorm_sq(spec, x + y)
    rhs_sq = f_mul(ssum, ssum)
    scale = np.maximum(np.abs(lhs_sq), np.abs(rhs_sq)) + floor

    gap = float(max(np.max((rhs_sq - lhs_sq) / scale), 0.0))
    du = f_mul(defect_closed(spec.sip, x, y), spec.u)
    d_n = float(max(np.max(du / scale), 0.0))
    bu = f_mul(sip_eval(spec.sip, x, y), spec.u)
    p_n = float(np.max(4.0 * np.maximum(-bu, 0.0) / scale))

    def near(v: float) -> bool:
        return band / 8.0 < v < 8.0 * band

    return AdditivityCheck(
        additive=gap <= 2.0 * band,
        condition_pos=p_n <= band,
        condition_defect_zero=d_n <= band,
        borderline=near(d_n) or near(p_n),
    )


def pythagoras_check(spec: SeminormSpec, x, y,
                     precond_tol: float = 1e-10,
                     floor: float = DEFAULT_ABS_TOL) -> np.ndarray:
    """Raw residual of norm(x+y) = norm(x) [+] norm(y) for orthogonal x, y.

    Raises PreconditionViolated unless T(x,y) = 0 up to precond_tol
    relative to the Cauchy-Schwarz scale sqrt(T(x,x)*T(y,y)).
    """
    x, y = _domain_pair(spec, x, y)
    a = sip_eval(spec.sip, x, x)
    b = sip_eval(spec.sip, x, y)
    c = sip_eval(spec.sip, y, y)
    scale = np.sqrt(np.maximum(a * c, 0.0)) + floor
    worst = float(np.max(np.abs(b) / scale))
    if worst > precond_tol:
        raise PreconditionViolated(
            f"T(x,y) is not zero: normalized residual {worst}")
    return seminorm_eval(spec, x + y) - box_plus(seminorm_eval(spec, x),
                                                 seminorm_eval(spec, y))


def parallelogram_residual(spec: SeminormSpec, x, y) -> np.ndarray:
    """Raw residual of norm(x+y) [+] norm(x-y) = sqrt(2)*(norm(x) [+] norm(y)).

    Holds for all x, y, orthogonal or not.
    """
    x, y = _domain_pair(spec, x, y)
    lhs = box_plus(seminorm_eval(spec, x + y), seminorm_eval(spec, x - y))
    rhs = np.sqrt(2.0) * box_plus(seminorm_eval(spec, x), seminorm_eval(spec, y))
    return lhs - rhs
