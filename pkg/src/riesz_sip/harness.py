"""Randomized verification harness.

Runs named theorem suites over randomly generated semi-inner-product
instances and aggregates the results into a deterministic JSON report.
Every trial draws its randomness from a substream keyed by
(config.seed, trial_index), so reports are reproducible bit for bit
(wall time aside) and any recorded counterexample can be replayed or
shrunk offline from its serialized instance alone. Checks themselves are
deterministic functions of (instance, config): anything sampled inside a
check uses fixed seeds or fixed scalar sets, never fresh entropy.

Suite names:

  axioms         semi-inner-product axioms on random families
  cs             Cauchy-Schwarz identity, inequality, defect oracle, and
                 the equality <-> zero-defect biconditional
  means          biadditivity and homogeneity of the lattice means
  vsn            vector seminorm axioms and the square identity
  sharp          sharpened triangle chain in both forms, equality case,
                 and the weighted-defect grid cross-check
  additivity     characterization of equality in the triangle inequality
  pythagoras     norm(x+y) = norm(x) [+] norm(y) for orthogonal pairs
  parallelogram  the square-mean parallelogram law for all pairs
  oracle         closed forms of both means against their grid oracles
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .lattice import DimensionMismatch, NotInPositiveCone, abs_val, f_mul, rel_residual
from .means import (
    AngleGrid,
    ThetaGrid,
    box_plus,
    box_plus_oracle,
    box_times,
    box_times_oracle,
    theta_minimizer,
)
from .cauchy_schwarz import (
    INEQ_FLOOR,
    LambdaGrid,
    cs_check,
    cs_identity_residual,
    defect_closed,
    defect_with_oracle,
)
from .seminorms import (
    CHAIN_FLOOR,
    SeminormSpec,
    additivity_check,
    parallelogram_residual,
    pythagoras_check,
    seminorm_eval,
    seminorm_sq,
    sharpened_triangle,
)
from .sip import (
    MultiplicationSip,
    NoNontrivialOrthogonal,
    PsdFamilySip,
    check_axioms,
    orthogonal_sample,
    sip_eval,
    sip_from_dict,
    sip_to_dict,
)

REPORT_SCHEMA = "riesz-sip/1"

THEOREMS = ("axioms", "cs", "means", "vsn", "sharp", "additivity",
            "pythagoras", "parallelogram", "oracle")

# Pinned check tolerances beyond the config-level rel/abs/cone_band.
DEFECT_GAP_REL_TOL = 1e-4   # lambda-grid over-estimate of the defect
BT_GAP_REL_TOL = 1e-3       # theta-grid over-estimate of the [*] infimum
BP_GAP_REL_TOL = 1e-5       # angle-grid under-estimate of the [+] supremum
QUARTER_REL_TOL = 1e-12     # quarter- vs full-circle [+] oracle on F+
MEANS_REL_TOL = 1e-10       # mean biadditivity/homogeneity identities
SQUARE_REL_TOL = 1e-10      # seminorm_sq vs f_mul(s, s)
SANDWICH_FLOOR = 1e-10      # one-sided oracle bounds
PRECOND_TOL = 1e-10         # orthogonality precondition
BICOND_TOL = 0.5            # indicator residuals are 0 or 1
AXIOM_SAMPLES = 64
MAX_COUNTEREXAMPLES = 10


class ConfigError(ValueError):
    """Invalid verification configuration (CLI exit code 2)."""


class GenerationExhausted(RuntimeError):
    """Instance generation gave up after repeated retries."""


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-9
    abs: float = 1e-12
    cone_band: float = 1e-8

    def validate(self) -> None:
        if not (0.0 < self.rel < 1.0 and 0.0 < self.abs < 1.0
                and 0.0 < self.cone_band < 1.0):
            raise ConfigError("tolerances must lie strictly between 0 and 1")


@dataclass(frozen=True)
class TrialConfig:
    """Everything a verification run depends on, hence everything a report echoes."""

    seed: int = 0
    trials: int = 10_000
    m_lo: int = 2
    m_hi: int = 6
    n_lo: int = 1
    n_hi: int = 4
    entry_hi: float = 10.0
    u_hi: float = 10.0
    log_entry_lo: float = 1e-3
    log_entry_hi: float = 1e3
    tolerances: Tolerances = field(default_factory=Tolerances)
    theta_lo: float = 1e-8
    theta_hi: float = 1e8
    theta_count: int = 10_000
    angle_count: int = 4096
    lambda_lo: float = 1e-6
    lambda_hi: float = 1e6
    lambda_count: int = 2001
    theorems: tuple = THEOREMS

    def __post_init__(self):
        object.__setattr__(self, "theorems", tuple(self.theorems))
        self.validate()

    def validate(self) -> None:
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not (1 <= self.m_lo <= self.m_hi <= 64):
            raise ConfigError("domain dimension range must satisfy 1 <= lo <= hi <= 64")
        if not (1 <= self.n_lo <= self.n_hi <= 64):
            raise ConfigError("codomain dimension range must satisfy 1 <= lo <= hi <= 64")
        if not (self.entry_hi > 0.0 and self.u_hi > 0.0):
            raise ConfigError("entry ranges must be positive")
        if not (0.0 < self.log_entry_lo < self.log_entry_hi):
            raise ConfigError("log-uniform entry range must satisfy 0 < lo < hi")
        self.tolerances.validate()
        if not (0.0 < self.theta_lo < self.theta_hi and self.theta_count >= 2):
            raise ConfigError("invalid theta grid")
        if self.angle_count < 4:
            raise ConfigError("invalid angle grid")
        if not (0.0 < self.lambda_lo < self.lambda_hi and self.lambda_count >= 2):
            raise ConfigError("invalid lambda grid")
        unknown = set(self.theorems) - set(THEOREMS)
        if unknown:
            raise ConfigError(f"unknown theorems: {sorted(unknown)}")
        if "pythagoras" in self.theorems:
            if not (self.m_hi > self.n_lo or self.n_hi >= 2):
                raise ConfigError(
                    "pythagoras trials need m > n possible or codomain dim >= 2")


@dataclass(frozen=True)
class Grids:
    theta: ThetaGrid
    angle: AngleGrid
    lam: LambdaGrid


def build_grids(config: TrialConfig) -> Grids:
    return Grids(
        theta=ThetaGrid.log_spaced(config.theta_lo, config.theta_hi, config.theta_count),
        angle=AngleGrid.uniform(config.angle_count),
        lam=LambdaGrid.log_spaced(config.lambda_lo, config.lambda_hi, config.lambda_count),
    )


@dataclass(frozen=True)
class Instance:
    sip: object
    u: np.ndarray
    x: np.ndarray
    y: np.ndarray

    @property
    def kind(self) -> str:
        return "multiplication" if isinstance(self.sip, MultiplicationSip) else "psd_family"

    def to_dict(self) -> dict:
        d = sip_to_dict(self.sip)
        d["u"] = np.asarray(self.u, dtype=np.float64).tolist()
        d["x"] = np.asarray(self.x, dtype=np.float64).tolist()
        d["y"] = np.asarray(self.y, dtype=np.float64).tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        # Dimensions of u/x/y are deliberately not cross-checked here:
        # malformed instances are fault-injection inputs and must fail in
        # the checks, not at load time. Non-finite entries are rejected,
        # NaN cannot participate in tolerance comparisons meaningfully.
        vecs = {}
        for key in ("u", "x", "y"):
            v = np.asarray(d[key], dtype=np.float64)
            if v.ndim != 1 or not np.all(np.isfinite(v)):
                raise ValueError(f"instance field {key!r} must be a finite vector")
            vecs[key] = v
        return cls(sip=sip_from_dict(d), **vecs)


# Instance recipe per suite: generic signed draws, positive log-uniform
# draws for the mean identities and oracles, orthogonal pairs for the
# Pythagorean identity.
PURPOSES = {
    "axioms": "generic",
    "cs": "generic",
    "means": "positive_log",
    "vsn": "generic",
    "sharp": "generic",
    "additivity": "generic",
    "pythagoras": "orthogonal",
    "parallelogram": "generic",
    "oracle": "positive_log",
}


def _random_psd(rng: np.random.Generator, m: int, n: int) -> PsdFamilySip:
    B = rng.uniform(-1.0, 1.0, (n, m, m))
    A = np.einsum("jka,jkb->jab", B, B)
    A = 0.5 * (A + np.transpose(A, (0, 2, 1)))
    # Gram construction is PSD by design; skip the admission checks.
    return PsdFamilySip(A, validate=False)


def _random_weight(rng: np.random.Generator, n: int, u_hi: float) -> np.ndarray:
    u = rng.uniform(0.0, u_hi, n)
    r = rng.random()
    if r < 0.02:
        u = np.zeros(n)  # fully degenerate weight
    elif r < 0.15:
        k = int(rng.integers(1, n + 1))
        u[rng.choice(n, size=min(k, n), replace=False)] = 0.0
    return u


def generate_instance(config: TrialConfig, trial_index: int,
                      purpose: str = "generic") -> Instance:
    """Deterministic instance for one trial, keyed by (seed, trial_index).

    generic draws mix both sip kinds and bias a quarter of the pairs to
    colinear y and (for the multiplication sip) a quarter to positive-cone
    pairs, so equality branches of the biconditionals appear with
    non-negligible frequency. orthogonal draws return a pair with
    T(x, y) = 0 built by orthogonal_sample, preferring PSD families with
    m > n. positive_log draws signed entries with log-uniform magnitudes
    on the multiplication sip, the stress regime for the grid oracles.
    """
    rng = np.random.default_rng((config.seed, trial_index))

    if purpose == "generic":
        mult = rng.random() < 0.5
        n = int(rng.integers(config.n_lo, config.n_hi + 1))
        if mult:
            m = n
            T = MultiplicationSip(n)
        else:
            m = int(rng.integers(config.m_lo, config.m_hi + 1))
            T = _random_psd(rng, m, n)
        u = _random_weight(rng, n, config.u_hi)
        x = rng.uniform(-config.entry_hi, config.entry_hi, m)
        style = rng.random()
        if style < 0.25:
            y = float(rng.uniform(-3.0, 3.0)) * x
        elif style < 0.5 and mult:
            x = np.abs(x)
            y = rng.uniform(0.0, config.entry_hi, m)
        else:
            y = rng.uniform(-config.entry_hi, config.entry_hi, m)
        return Instance(sip=T, u=u, x=x, y=y)

    if purpose == "positive_log":
        n = int(rng.integers(config.n_lo, config.n_hi + 1))
        T = MultiplicationSip(n)
        lo, hi = np.log10(config.log_entry_lo), np.log10(config.log_entry_hi)
        x = rng.choice([-1.0, 1.0], n) * 10.0 ** rng.uniform(lo, hi, n)
        y = rng.choice([-1.0, 1.0], n) * 10.0 ** rng.uniform(lo, hi, n)
        u = rng.uniform(0.0, config.u_hi, n)
        return Instance(sip=T, u=u, x=x, y=y)

    if purpose == "orthogonal":
        psd_possible = config.m_hi > config.n_lo
        mult_possible = config.n_hi >= 2
        use_psd = psd_possible and (not mult_possible or rng.random() < 0.7)
        for attempt in range(100):
            if use_psd:
                n = int(rng.integers(config.n_lo, min(config.n_hi, config.m_hi - 1) + 1))
                m = int(rng.integers(max(config.m_lo, n + 1), config.m_hi + 1))
                T = _random_psd(rng, m, n)
                x = rng.uniform(-config.entry_hi, config.entry_hi, m)
            else:
                n = int(rng.integers(max(config.n_lo, 2), config.n_hi + 1))
                m = n
                T = MultiplicationSip(n)
                x = rng.uniform(-config.entry_hi, config.entry_hi, m)
                k = int(rng.integers(1, m))  # nonempty proper zero support
                x[rng.choice(m, size=k, replace=False)] = 0.0
            try:
                y = orthogonal_sample(T, x, seed=(config.seed, trial_index, attempt))
            except NoNontrivialOrthogonal:
                continue
            y = y * float(rng.uniform(0.5, config.entry_hi))
            u = rng.uniform(0.0, config.u_hi, n)
            return Instance(sip=T, u=u, x=x, y=y)
        raise GenerationExhausted(
            f"no orthogonal pair after 100 attempts at trial {trial_index}")

    raise ConfigError(f"unknown generation purpose: {purpose!r}")


@dataclass(frozen=True)
class TrialResult:
    status: str  # pass | fail | borderline
    residuals: dict
    tols: dict
    failed: tuple
    tags: tuple = ()

    @property
    def ratio(self) -> float:
        """Largest residual in units of its own tolerance."""
        return max((v / self.tols[k] for k, v in self.residuals.items()), default=0.0)


def _result(residuals: dict, tols: dict, borderline: bool = False,
            tags: tuple = ()) -> TrialResult:
    # not (v <= tol) instead of v > tol so NaN residuals count as failures
    failed = tuple(sorted(k for k, v in residuals.items() if not v <= tols[k]))
    status = "fail" if failed else ("borderline" if borderline else "pass")
    return TrialResult(status=status, residuals=residuals, tols=tols,
                       failed=failed, tags=tags)


def _cone_gap(vec: np.ndarray, scale: np.ndarray) -> float:
    return float(np.max(np.maximum(-vec, 0.0) / scale))


def check_axioms_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    rep = check_axioms(inst.sip, samples=AXIOM_SAMPLES, seed=0,
                       tol=config.tolerances.rel, floor=config.tolerances.abs)
    tols = {k: config.tolerances.rel for k in rep.residuals}
    return _result(dict(rep.residuals), tols, tags=(inst.kind,))


def check_cs_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    T, x, y = inst.sip, inst.x, inst.y
    tol = config.tolerances
    a = sip_eval(T, x, x)
    b = sip_eval(T, x, y)
    c = sip_eval(T, y, y)
    bound = np.sqrt(np.maximum(a, 0.0) * np.maximum(c, 0.0))
    scale = np.maximum(bound, np.abs(b)) + tol.abs

    ident = float(np.max(np.abs(cs_identity_residual(T, x, y, floor=tol.abs)) / scale))
    ineq = _cone_gap(bound - np.abs(b), scale)

    res = defect_with_oracle(T, x, y, grids.lam)
    dscale = np.maximum(np.abs(a), np.maximum(np.abs(c), np.maximum(
        np.abs(res.closed), np.abs(res.grid)))) + tol.abs
    sandwich = _cone_gap(res.gap, dscale)
    gap = float(max(np.max(res.gap / dscale), 0.0))

    chk = cs_check(T, x, y, band=tol.cone_band, floor=tol.abs)
    mismatch = 0.0 if (chk.borderline or chk.equality_holds == chk.defect_zero) else 1.0

    residuals = {
        "identity": ident,
        "inequality": ineq,
        "defect_sandwich": sandwich,
        "defect_gap": gap,
        "equality_iff_defect_zero": mismatch,
    }
    tols = {
        "identity": tol.rel,
        "inequality": INEQ_FLOOR,
        "defect_sandwich": SANDWICH_FLOOR,
        "defect_gap": DEFECT_GAP_REL_TOL,
        "equality_iff_defect_zero": BICOND_TOL,
    }
    tags = ("equality",) if chk.equality_holds else ("strict",)
    return _result(residuals, tols, borderline=chk.borderline, tags=tags)


# Scalars for homogeneity-style identities; |x_0| adds a data-dependent
# value while keeping every check a pure function of the instance.
def _scalar_set(x: np.ndarray) -> tuple:
    return (0.0, 0.5, 1.0, 4.0, float(np.abs(x[0])))


def check_means_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    a, b, c = abs_val(inst.x), abs_val(inst.y), inst.u
    floor = config.tolerances.abs
    biadd = rel_residual(box_times(a + b, c, floor=floor),
                         box_plus(box_times(a, c, floor=floor),
                                  box_times(b, c, floor=floor)), floor=floor)
    hom = 0.0
    ab = box_times(a, b, floor=floor)
    for lam in _scalar_set(inst.x):
        ref = np.sqrt(lam) * ab
        hom = max(hom, rel_residual(box_times(lam * a, b, floor=floor), ref, floor=floor))
        hom = max(hom, rel_residual(box_times(a, lam * b, floor=floor), ref, floor=floor))
    residuals = {"biadditivity": biadd, "homogeneity": hom}
    tols = {"biadditivity": MEANS_REL_TOL, "homogeneity": MEANS_REL_TOL}
    return _result(residuals, tols)


def check_vsn_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    spec = SeminormSpec(inst.sip, inst.u)
    tol = config.tolerances
    x, y = inst.x, inst.y
    sx = seminorm_eval(spec, x)
    sy = seminorm_eval(spec, y)
    sxy = seminorm_eval(spec, x + y)

    pos = max(_cone_gap(sx, np.abs(sx) + tol.abs), _cone_gap(sy, np.abs(sy) + tol.abs))
    hom = 0.0
    for alpha in (-2.5, -1.0, 0.0, 0.5) + (float(x[0]),):
        hom = max(hom, rel_residual(seminorm_eval(spec, alpha * x),
                                    np.abs(alpha) * sx, floor=tol.abs))
    tri = _cone_gap(sx + sy - sxy, np.maximum(sxy, sx + sy) + tol.abs)
    square = rel_residual(f_mul(sx, sx), seminorm_sq(spec, x), floor=tol.abs)

    residuals = {"positivity": pos, "homogeneity": hom, "triangle": tri, "square": square}
    tols = {"positivity": tol.rel, "homogeneity": tol.rel,
            "triangle": tol.rel, "square": SQUARE_REL_TOL}
    return _result(residuals, tols)


def check_sharp_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    spec = SeminormSpec(inst.sip, inst.u)
    tol = config.tolerances
    x, y = inst.x, inst.y
    st = sharpened_triangle(spec, x, y, band=tol.cone_band, floor=tol.abs)

    scale = np.maximum(np.abs(st.lhs_sq),
                       np.maximum(np.abs(st.middle), np.abs(st.rhs_sq))) + tol.abs
    chain = max(_cone_gap(st.middle - st.lhs_sq, scale),
                _cone_gap(st.rhs_sq - st.middle, scale))
    sxy = seminorm_eval(spec, x + y)
    ssum = seminorm_eval(spec, x) + seminorm_eval(spec, y)
    mid_sqrt = np.sqrt(np.maximum(st.middle, 0.0))
    lin_scale = np.maximum(sxy, np.maximum(mid_sqrt, ssum)) + tol.abs
    chain = max(chain,
                _cone_gap(mid_sqrt - sxy, lin_scale),
                _cone_gap(ssum - mid_sqrt, lin_scale))

    # Independent oracle for the weighted defect: sample the defining
    # family of D(x,y)*u through seminorm_sq on lambda*x - y directly.
    lam = grids.lam.signed
    Z = lam[:, None] * np.asarray(x)[None, :] - np.asarray(y)[None, :]
    fam = (inst.sip.eval_batch(Z, Z) * spec.u[None, :]) / np.abs(lam)[:, None]
    wgrid = fam.min(axis=0)
    wclosed = f_mul(defect_closed(inst.sip, x, y), spec.u)
    a = sip_eval(inst.sip, x, x)
    c = sip_eval(inst.sip, y, y)
    wscale = np.maximum(
        np.maximum(np.abs(a), np.abs(c)) * spec.u,
        np.maximum(np.abs(wclosed), np.abs(wgrid))) + tol.abs
    wsandwich = _cone_gap(wgrid - wclosed, wscale)
    wgap = float(max(np.max((wgrid - wclosed) / wscale), 0.0))

    mismatch = 0.0 if (st.borderline or st.equality_holds == st.condition_holds) else 1.0
    residuals = {
        "chain": chain,
        "equality_iff_positive": mismatch,
        "weighted_sandwich": wsandwich,
        "weighted_gap": wgap,
    }
    tols = {
        "chain": CHAIN_FLOOR,
        "equality_iff_positive": BICOND_TOL,
        "weighted_sandwich": SANDWICH_FLOOR,
        "weighted_gap": DEFECT_GAP_REL_TOL,
    }
    tags = ("equality",) if st.equality_holds else ("strict",)
    return _result(residuals, tols, borderline=st.borderline, tags=tags)


def check_additivity_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    spec = SeminormSpec(inst.sip, inst.u)
    tol = config.tolerances
    ac = additivity_check(spec, inst.x, inst.y, band=tol.cone_band, floor=tol.abs)
    agreed = ac.additive == (ac.condition_pos and ac.condition_defect_zero)
    mismatch = 0.0 if (ac.borderline or agreed) else 1.0
    residuals = {"characterization": mismatch}
    tols = {"characterization": BICOND_TOL}
    tags = (
        "additive" if ac.additive else "nonadditive",
        "cond_pos_true" if ac.condition_pos else "cond_pos_false",
        "cond_defect_true" if ac.condition_defect_zero else "cond_defect_false",
    )
    return _result(residuals, tols, borderline=ac.borderline, tags=tags)


def check_pythagoras_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    spec = SeminormSpec(inst.sip, inst.u)
    tol = config.tolerances
    x, y = inst.x, inst.y
    a = sip_eval(inst.sip, x, x)
    b = sip_eval(inst.sip, x, y)
    c = sip_eval(inst.sip, y, y)
    pre = float(np.max(np.abs(b) / (np.sqrt(np.maximum(a * c, 0.0)) + tol.abs)))
    if pre > PRECOND_TOL:
        return _result({"orthogonality": pre, "identity": 0.0},
                       {"orthogonality": PRECOND_TOL, "identity": tol.rel},
                       tags=(inst.kind,))
    raw = pythagoras_check(spec, x, y, precond_tol=PRECOND_TOL, floor=tol.abs)
    lhs = seminorm_eval(spec, x + y)
    rhs = box_plus(seminorm_eval(spec, x), seminorm_eval(spec, y))
    ident = float(np.max(np.abs(raw) / (np.maximum(lhs, rhs) + tol.abs)))
    return _result({"orthogonality": pre, "identity": ident},
                   {"orthogonality": PRECOND_TOL, "identity": tol.rel},
                   tags=(inst.kind,))


def check_parallelogram_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    spec = SeminormSpec(inst.sip, inst.u)
    tol = config.tolerances
    raw = parallelogram_residual(spec, inst.x, inst.y)
    lhs = box_plus(seminorm_eval(spec, inst.x + inst.y),
                   seminorm_eval(spec, inst.x - inst.y))
    rhs = np.sqrt(2.0) * box_plus(seminorm_eval(spec, inst.x),
                                  seminorm_eval(spec, inst.y))
    ident = float(np.max(np.abs(raw) / (np.maximum(lhs, rhs) + tol.abs)))
    return _result({"identity": ident}, {"identity": tol.rel}, tags=(inst.kind,))


def check_oracle_trial(inst: Instance, config: TrialConfig, grids: Grids) -> TrialResult:
    tol = config.tolerances
    u, v = abs_val(inst.x), abs_val(inst.y)

    bt = box_times(u, v, floor=tol.abs)
    bt_o = box_times_oracle(u, v, grids.theta, floor=tol.abs)
    bt_scale = np.maximum(bt, bt_o) + tol.abs
    bt_sandwich = _cone_gap(bt_o - bt, bt_scale)
    covered = grids.theta.covers(theta_minimizer(u, v))
    bt_gap = float(max(np.max((bt_o - bt) / bt_scale), 0.0)) if covered else 0.0

    a, b = inst.x, inst.y
    bp = box_plus(a, b)
    bp_o = box_plus_oracle(a, b, grids.angle)
    bp_scale = np.maximum(bp, np.abs(bp_o)) + tol.abs
    bp_sandwich = _cone_gap(bp - bp_o, bp_scale)
    bp_gap = float(np.max(np.abs(bp - bp_o) / bp_scale))

    q_full = box_plus_oracle(u, v, grids.angle)
    q_quarter = box_plus_oracle(u, v, grids.angle, quarter=True)
    quarter = rel_residual(q_full, q_quarter, floor=tol.abs)

    residuals = {
        "box_times_sandwich": bt_sandwich,
        "box_times_gap": bt_gap,
        "box_plus_sandwich": bp_sandwich,
        "box_plus_gap": bp_gap,
        "quarter_circle": quarter,
    }
    tols = {
        "box_times_sandwich": SANDWICH_FLOOR,
        "box_times_gap": BT_GAP_REL_TOL,
        "box_plus_sandwich": SANDWICH_FLOOR,
        "box_plus_gap": BP_GAP_REL_TOL,
        "quarter_circle": QUARTER_REL_TOL,
    }
    tags = () if covered else ("minimizer_not_covered",)
    return _result(residuals, tols, tags=tags)


CHECKS = {
    "axioms": check_axioms_trial,
    "cs": check_cs_trial,
    "means": check_means_trial,
    "vsn": check_vsn_trial,
    "sharp": check_sharp_trial,
    "additivity": check_additivity_trial,
    "pythagoras": check_pythagoras_trial,
    "parallelogram": check_parallelogram_trial,
    "oracle": check_oracle_trial,
}


def _run_check(theorem: str, inst: Instance, config: TrialConfig,
               grids: Grids) -> TrialResult:
    try:
        return CHECKS[theorem](inst, config, grids)
    except (DimensionMismatch, NotInPositiveCone, ValueError):
        # Structurally broken instance (fault injection): counted as a
        # failure, never silently skipped.
        return _result({"invalid_instance": 1.0}, {"invalid_instance": BICOND_TOL})


def _grid_params(config: TrialConfig) -> dict:
    return {
        "theta_lo": config.theta_lo, "theta_hi": config.theta_hi,
        "theta_count": config.theta_count,
        "angle_count": config.angle_count,
        "lambda_lo": config.lambda_lo, "lambda_hi": config.lambda_hi,
        "lambda_count": config.lambda_count,
    }


@dataclass(frozen=True)
class Counterexample:
    theorem: str
    failed: tuple
    residuals: dict
    instance: dict
    params: dict

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "theorem": self.theorem,
            "failed": list(self.failed),
            "residuals": dict(self.residuals),
            "instance": self.instance,
            "params": self.params,
        }


def config_from_params(params: dict) -> TrialConfig:
    """Minimal config honoring a counterexample's stored tolerances and grids."""
    base = TrialConfig(trials=1)
    tolerances = Tolerances(**params.get("tolerances", {}))
    return replace(base, tolerances=tolerances, **params.get("grids", {}))


def replay_counterexample(ce: dict) -> TrialResult:
    """Re-run the named check on the embedded instance with stored params."""
    config = config_from_params(ce.get("params", {}))
    inst = Instance.from_dict(ce["instance"])
    return _run_check(ce["theorem"], inst, config, build_grids(config))


@dataclass
class VerificationReport:
    config: dict
    theorems: dict
    wall_time_s: float
    schema: str = REPORT_SCHEMA

    @property
    def ok(self) -> bool:
        return all(t["failures"] == 0 for t in self.theorems.values())

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "ok": self.ok,
            "config": self.config,
            "theorems": self.theorems,
            "wall_time_s": self.wall_time_s,
        }


def run_suite(config: TrialConfig, injected: tuple = ()) -> VerificationReport:
    """Run every selected theorem suite and aggregate a report.

    injected instances (the fault-injection surface) are appended to every
    selected suite after the generated trials, so the reported trial count
    is config.trials + len(injected) per theorem.
    """
    start = time.perf_counter()
    grids = build_grids(config)
    theorems = {}
    for name in config.theorems:
        purpose = PURPOSES[name]
        passes = failures = borderline = 0
        residual_max: dict = {}
        counts: dict = {}
        worst = None  # (ratio, summary dict)
        counterexamples = []
        params = {"tolerances": asdict(config.tolerances), "grids": _grid_params(config)}

        def record(inst: Instance | None, res: TrialResult):
            nonlocal passes, failures, borderline, worst
            for k, v in res.residuals.items():
                residual_max[k] = max(residual_max.get(k, 0.0), v)
            for t in res.tags:
                counts[t] = counts.get(t, 0) + 1
            ratio = res.ratio
            if worst is None or ratio > worst[0]:
                worst = (ratio, {
                    "ratio": ratio,
                    "residuals": dict(res.residuals),
                    "failed": list(res.failed),
                    "instance": inst.to_dict() if inst is not None else None,
                })
            if res.status == "fail":
                failures += 1
                if inst is not None and len(counterexamples) < MAX_COUNTEREXAMPLES:
                    counterexamples.append(Counterexample(
                        theorem=name, failed=res.failed,
                        residuals=dict(res.residuals),
                        instance=inst.to_dict(), params=params).to_dict())
            elif res.status == "borderline":
                borderline += 1
            else:
                passes += 1

        for i in range(config.trials):
            try:
                inst = generate_instance(config, i, purpose)
            except GenerationExhausted:
                record(None, _result({"generation": 1.0}, {"generation": BICOND_TOL}))
                continue
            record(inst, _run_check(name, inst, config, grids))
        for inst in injected:
            record(inst, _run_check(name, inst, config, grids))

        theorems[name] = {
            "trials": config.trials + len(injected),
            "passes": passes,
            "failures": failures,
            "borderline": borderline,
            "max_residual": max(residual_max.values(), default=0.0),
            "residuals": residual_max,
            "counts": counts,
            "worst_instance": worst[1] if worst else None,
            "counterexamples": counterexamples,
        }

    return VerificationReport(
        config=asdict(config),
        theorems=theorems,
        wall_time_s=time.perf_counter() - start,
    )


def shrink(inst: Instance, theorem: str, config: TrialConfig) -> tuple:
    """Greedy minimization of a failing instance.

    Tries, in order: dropping a codomain coordinate, dropping a domain
    coordinate (PSD families), zeroing single entries of x, y, u, and
    zeroing symmetric matrix entry pairs. A move is kept iff the named
    check still fails. Every kept move strictly reduces dimension count or
    nonzero count, so the loop terminates. Returns (instance, result);
    raises ConfigError when the input does not fail to begin with.
    """
    grids = build_grids(config)

    def run(cand: Instance) -> TrialResult:
        return _run_check(theorem, cand, config, grids)

    res = run(inst)
    if res.status != "fail":
        raise ConfigError("shrink requires an instance that fails the check")

    def candidates(cur: Instance):
        d = cur.to_dict()
        n = len(d["u"])
        mult = d["kind"] == "multiplication"
        if n > 1:
            for j in range(n):
                nd = json.loads(json.dumps(d))
                nd["u"] = d["u"][:j] + d["u"][j + 1:]
                nd["n"] = n - 1
                if mult:
                    nd["x"] = d["x"][:j] + d["x"][j + 1:]
                    nd["y"] = d["y"][:j] + d["y"][j + 1:]
                    nd["m"] = n - 1
                else:
                    nd["matrices"] = d["matrices"][:j] + d["matrices"][j + 1:]
                yield nd
        if not mult and d["m"] > 1:
            m = d["m"]
            for k in range(m):
                nd = json.loads(json.dumps(d))
                nd["x"] = d["x"][:k] + d["x"][k + 1:]
                nd["y"] = d["y"][:k] + d["y"][k + 1:]
                nd["m"] = m - 1
                nd["matrices"] = [
                    [[A[r][c] for c in range(m) if c != k]
                     for r in range(m) if r != k]
                    for A in d["matrices"]]
                yield nd
        for key in ("x", "y", "u"):
            for i, val in enumerate(d[key]):
                if val != 0.0:
                    nd = json.loads(json.dumps(d))
                    nd[key][i] = 0.0
                    yield nd
        if not mult:
            m = d["m"]
            for j in range(len(d["matrices"])):
                for r in range(m):
                    for c in range(r, m):
                        if d["matrices"][j][r][c] != 0.0:
                            nd = json.loads(json.dumps(d))
                            nd["matrices"][j][r][c] = 0.0
                            nd["matrices"][j][c][r] = 0.0
                            yield nd

    current = inst
    progress = True
    while progress:
        progress = False
        for cand_dict in candidates(current):
            cand = Instance.from_dict(cand_dict)
            cand_res = run(cand)
            if cand_res.status == "fail":
                current, res = cand, cand_res
                progress = True
                break
    return current, res


@dataclass
class StudyReport:
    config: dict
    grid_sizes: list
    rows: list
    monotone_ok: bool
    sandwich_ok: bool
    wall_time_s: float
    schema: str = REPORT_SCHEMA

    @property
    def ok(self) -> bool:
        return self.monotone_ok and self.sandwich_ok

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "ok": self.ok,
            "config": self.config,
            "grid_sizes": self.grid_sizes,
            "rows": self.rows,
            "monotone_ok": self.monotone_ok,
            "sandwich_ok": self.sandwich_ok,
            "wall_time_s": self.wall_time_s,
        }


def convergence_study(config: TrialConfig,
                      grid_sizes: tuple = (100, 1000, 10000)) -> StudyReport:
    """Worst oracle gaps as a function of grid resolution.

    For each size G the three grid oracles run with G points against the
    closed forms over config.trials instances (positive log-uniform pairs
    for the means, generic mixed instances for the defect). Gaps must stay
    one-sided (sandwich_ok) and their maxima must not increase under
    refinement (monotone_ok).
    """
    sizes = sorted(set(int(g) for g in grid_sizes))
    if len(sizes) < 2 or sizes[0] < 4:
        raise ConfigError("need at least two grid sizes, all >= 4")
    start = time.perf_counter()
    floor = config.tolerances.abs
    rows = []
    sandwich_ok = True
    for G in sizes:
        theta = ThetaGrid.log_spaced(config.theta_lo, config.theta_hi, G)
        angle = AngleGrid.uniform(G)
        lam = LambdaGrid.log_spaced(config.lambda_lo, config.lambda_hi, G)
        bt_gap = bp_gap = df_gap = 0.0
        for i in range(config.trials):
            pos = generate_instance(config, i, "positive_log")
            u, v = abs_val(pos.x), abs_val(pos.y)
            bt = box_times(u, v, floor=floor)
            bt_o = box_times_oracle(u, v, theta, floor=floor)
            s = np.maximum(bt, bt_o) + floor
            if _cone_gap(bt_o - bt, s) > SANDWICH_FLOOR:
                sandwich_ok = False
            bt_gap = max(bt_gap, float(np.max((bt_o - bt) / s)))

            bp = box_plus(pos.x, pos.y)
            bp_o = box_plus_oracle(pos.x, pos.y, angle)
            s = np.maximum(bp, np.abs(bp_o)) + floor
            if _cone_gap(bp - bp_o, s) > SANDWICH_FLOOR:
                sandwich_ok = False
            bp_gap = max(bp_gap, float(np.max(np.abs(bp - bp_o) / s)))

            gen = generate_instance(config, i, "generic")
            res = defect_with_oracle(gen.sip, gen.x, gen.y, lam)
            a = sip_eval(gen.sip, gen.x, gen.x)
            c = sip_eval(gen.sip, gen.y, gen.y)
            s = np.maximum(np.abs(a), np.maximum(np.abs(c), np.maximum(
                np.abs(res.closed), np.abs(res.grid)))) + floor
            if _cone_gap(res.gap, s) > SANDWICH_FLOOR:
                sandwich_ok = False
            df_gap = max(df_gap, float(np.max(res.gap / s)))
        rows.append({
            "grid_size": G,
            "box_times_gap": bt_gap,
            "box_plus_gap": bp_gap,
            "defect_gap": df_gap,
        })

    monotone_ok = True
    for key in ("box_times_gap", "box_plus_gap", "defect_gap"):
        vals = [r[key] for r in rows]
        if any(vals[i + 1] > vals[i] + 1e-15 for i in range(len(vals) - 1)):
            monotone_ok = False

    return StudyReport(
        config=asdict(config),
        grid_sizes=sizes,
        rows=rows,
        monotone_ok=monotone_ok,
        sandwich_ok=sandwich_ok,
        wall_time_s=time.perf_counter() - start,
    )


def report_to_json(report) -> str:
    """Stable serialization: sorted keys, fixed indentation, newline at EOF."""
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def emit_report(report, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
