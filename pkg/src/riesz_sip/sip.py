"""Vector semi-inner products with values in the lattice R^n.

A map T: R^m x R^m -> R^n is a vector semi-inner product when it is
additive and scalar-homogeneous in each slot, symmetric, and T(x,x) lies
in the positive cone for every x. Two concrete families:

  PsdFamilySip      T(x,y)_j = x' A_j y for symmetric PSD matrices A_j.
                    Degenerate A_j are allowed, so T(x,x) = 0 does not
                    force x = 0 (these are semi-inner products).
  MultiplicationSip T(x,y) = x*y componentwise on R^n itself; its
                    Cauchy-Schwarz defect vanishes identically, which makes
                    it the standard witness for every equality case.

check_axioms verifies the five axioms on random samples with normalized
residuals; it is also the detector for deliberately broken instances fed
in through the fault-injection path, so nothing here assumes its input is
well formed beyond shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .lattice import (
    DEFAULT_ABS_TOL,
    DimensionMismatch,
    as_lattice_vector,
)

SYMMETRY_ABS_TOL = 1e-12   # matrix asymmetry tolerated at construction
EIGENVALUE_FLOOR = -1e-10  # smallest admissible eigenvalue of a PSD member


class NoNontrivialOrthogonal(Exception):
    """No nonzero y with T(x, y) = 0 exists for the given T and x."""


@dataclass(frozen=True)
class MultiplicationSip:
    """T(x, y) = x*y on R^dim; domain and codomain coincide."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")

    @property
    def domain_dim(self) -> int:
        return self.dim

    @property
    def codomain_dim(self) -> int:
        return self.dim

    def eval_batch(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return X * Y

    def eval(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return x * y


class PsdFamilySip:
    """T(x, y)_j = x' A_j y for a family of symmetric PSD m x m matrices.

    validate=False skips the symmetry/eigenvalue admission checks; the
    fault-injection path relies on this to build broken witnesses that the
    axiom checker must then catch.
    """

    def __init__(self, matrices, validate: bool = True):
        A = np.asarray(matrices, dtype=np.float64)
        if A.ndim != 3 or A.shape[1] != A.shape[2]:
            raise DimensionMismatch(
                f"expected matrices of shape (n, m, m), got {A.shape}")
        if A.shape[0] < 1 or A.shape[1] < 1:
            raise DimensionMismatch("need n >= 1 matrices of size m >= 1")
        if not np.all(np.isfinite(A)):
            raise ValueError("matrix entries must be finite")
        if validate:
            asym = np.max(np.abs(A - np.transpose(A, (0, 2, 1))))
            if asym > SYMMETRY_ABS_TOL:
                raise ValueError(f"matrix family is asymmetric by {asym}")
            for j, Aj in enumerate(A):
                lo = float(np.min(scipy.linalg.eigvalsh(Aj)))
                if lo < EIGENVALUE_FLOOR:
                    raise ValueError(
                        f"matrix {j} has eigenvalue {lo} below the PSD floor")
        self.matrices = A

    @property
    def domain_dim(self) -> int:
        return int(self.matrices.shape[1])

    @property
    def codomain_dim(self) -> int:
        return int(self.matrices.shape[0])

    def eval_batch(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        # (s, m) x (n, m, m) x (s, m) -> (s, n)
        return np.einsum("jab,sa,sb->sj", self.matrices, X, Y, optimize=True)

    def eval(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.matrices @ y @ x


Sip = MultiplicationSip | PsdFamilySip


def sip_eval(T: Sip, x, y) -> np.ndarray:
    """Evaluate T(x, y) with dimension checking."""
    x = as_lattice_vector(x, T.domain_dim)
    y = as_lattice_vector(y, T.domain_dim)
    return T.eval(x, y)


@dataclass(frozen=True)
class AxiomReport:
    residuals: dict  # per-axiom worst normalized residual
    samples: int
    tol: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())


def _worst(diff: np.ndarray, scale: np.ndarray, floor: float) -> float:
    return float(np.max(np.abs(diff) / (scale + floor)))


def check_axioms(T: Sip, samples: int = 1000, seed: int = 0,
                 tol: float = 1e-9, floor: float = DEFAULT_ABS_TOL) -> AxiomReport:
    """Check the five semi-inner-product axioms on random samples.

    Residuals are normalized by the magnitudes of the values entering each
    identity, so the report is scale free: additivity in each slot, scalar
    homogeneity in each slot, symmetry, and positivity of T(x, x).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    m = T.domain_dim
    X = rng.uniform(-10.0, 10.0, (samples, m))
    Y = rng.uniform(-10.0, 10.0, (samples, m))
    Z = rng.uniform(-10.0, 10.0, (samples, m))
    lam = rng.uniform(-4.0, 4.0, (samples, 1))

    Txy = T.eval_batch(X, Y)
    Tyx = T.eval_batch(Y, X)
    Txz = T.eval_batch(X, Z)
    Tyz = T.eval_batch(Y, Z)
    Txx = T.eval_batch(X, X)
    scale_pair = np.abs(Txy) + np.abs(Txz) + np.abs(Tyz)

    res = {
        "additivity_left": _worst(
            T.eval_batch(X + Y, Z) - (Txz + Tyz), scale_pair, floor),
        "additivity_right": _worst(
            T.eval_batch(Z, X + Y) - (T.eval_batch(Z, X) + T.eval_batch(Z, Y)),
            scale_pair, floor),
        "homogeneity_left": _worst(
            T.eval_batch(lam * X, Y) - lam * Txy, np.abs(lam * Txy), floor),
        "homogeneity_right": _worst(
            T.eval_batch(X, lam * Y) - lam * Txy, np.abs(lam * Txy), floor),
        "symmetry": _worst(Txy - Tyx, np.abs(Txy), floor),
        "positivity": _worst(np.maximum(-Txx, 0.0), np.abs(Txx), floor),
    }
    return AxiomReport(residuals=res, samples=samples, tol=tol)


def make_psd_sip(m: int, n: int, seed: int = 0) -> PsdFamilySip:
    """Random PSD family A_j = B_j' B_j with B_j entries uniform in [-1, 1].

    Gram construction guarantees PSD; the explicit symmetrization only
    irons out einsum rounding, which is below the admission tolerance
    anyway.
    """
    rng = np.random.default_rng(seed)
    B = rng.uniform(-1.0, 1.0, (n, m, m))
    A = np.einsum("jka,jkb->jab", B, B)
    A = 0.5 * (A + np.transpose(A, (0, 2, 1)))
    return PsdFamilySip(A)


def orthogonal_sample(T: Sip, x, seed: int = 0,
                      tol: float = 1e-10) -> np.ndarray:
    """Random nonzero y with T(x, y) = 0, normalized to sup norm 1.

    T(x, .) is the linear map y -> (x' A_j y)_j, so its kernel is the null
    space of the n x m matrix with rows (A_j x)'. A random element of that
    null space is returned; when the null space is trivial (generic when
    m <= n) NoNontrivialOrthogonal is raised. For the multiplication sip
    the kernel is exactly the coordinates where x vanishes.
    """
    x = as_lattice_vector(x, T.domain_dim)
    if isinstance(T, MultiplicationSip):
        rows = np.diag(x)  # row j of T(x, .) is x_j * e_j'
    else:
        # row j is x' A_j, not (A_j x)': the two differ on (invalid)
        # asymmetric families, and the kernel must match eval exactly.
        rows = np.einsum("jab,a->jb", T.matrices, x)
    basis = scipy.linalg.null_space(rows, rcond=1e-10)
    if basis.shape[1] == 0:
        raise NoNontrivialOrthogonal(
            f"T(x, .) has trivial kernel (m={T.domain_dim}, n={T.codomain_dim})")
    rng = np.random.default_rng(seed)
    for _ in range(16):
        y = basis @ rng.standard_normal(basis.shape[1])
        norm = np.max(np.abs(y))
        if norm > 1e-8:
            y = y / norm
            resid = float(np.max(np.abs(T.eval(x, y))))
            if resid <= tol * max(1.0, float(np.max(np.abs(x)))):
                return y
    raise NoNontrivialOrthogonal("could not draw a numerically orthogonal sample")


def sip_to_dict(T: Sip) -> dict:
    """Serializable description, the sip part of the instance format."""
    if isinstance(T, MultiplicationSip):
        return {"kind": "multiplication", "m": T.dim, "n": T.dim}
    return {
        "kind": "psd_family",
        "m": T.domain_dim,
        "n": T.codomain_dim,
        "matrices": T.matrices.tolist(),
    }


def sip_from_dict(d: dict) -> Sip:
    """Inverse of sip_to_dict.

    Never validates PSD-ness or symmetry: deserialized instances are the
    fault-injection surface and broken families must load so the axiom
    checker can flag them.
    """
    kind = d.get("kind")
    if kind == "multiplication":
        if d["m"] != d["n"]:
            raise DimensionMismatch("multiplication sip requires m == n")
        return MultiplicationSip(int(d["n"]))
    if kind == "psd_family":
        A = np.asarray(d["matrices"], dtype=np.float64)
        if A.shape != (int(d["n"]), int(d["m"]), int(d["m"])):
            raise DimensionMismatch(
                f"matrices shape {A.shape} does not match m={d['m']}, n={d['n']}")
        return PsdFamilySip(A, validate=False)
    raise ValueError(f"unknown sip kind: {kind!r}")
