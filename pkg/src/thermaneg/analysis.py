"""Threshold temperatures, bound-entanglement windows, and area-law
diagnostics built on top of the two negativity engines.

A partition counts as PPT when its E_N drops below ``EPS_PPT``; the
same constant drives sweep flags, threshold bisection, and window
verification so that every module reaches identical verdicts.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianModel
from .lattice import (
    MAX_SPIN_SITES_DEFAULT,
    ModelSpec,
    build_potential,
    build_spin_hamiltonian,
)
from .spin import SpinModel

__all__ = [
    "EPS_PPT",
    "SweepRow",
    "SweepGrid",
    "ThresholdError",
    "ThresholdResult",
    "WindowResult",
    "GapRow",
    "GapTable",
    "CrossingError",
    "make_engine",
    "sweep",
    "threshold_temperature",
    "bound_entanglement_window",
    "rank1_factorizability",
    "type2_gap_table",
    "star_external_crossing",
]

# A partition is declared PPT when E_N falls below this; far above
# eigensolver noise for every dimension used here, far below any
# physical negativity in the regimes of interest.
EPS_PPT = 1e-10

_DEFAULT_BRACKET = (0.01, 20.0)


@dataclass(frozen=True)
class SweepRow:
    """One (temperature, partition) cell of a negativity sweep."""

    kind: str
    topology: str
    n: int
    c: float
    h: float
    temperature: float
    beta: float
    partition_id: str
    partition_mask: str
    area: int
    e_n: float
    e_l: float
    is_ppt: bool
    error: str = ""


@dataclass(frozen=True)
class SweepGrid:
    """Complete temperature-by-partition table for one model."""

    spec: ModelSpec
    rows: tuple


class ThresholdError(RuntimeError):
    """Raised when a PPT threshold cannot be bracketed as requested."""


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of one threshold bisection.

    The bracket satisfies E_N(bracket_lo) > EPS_PPT >= E_N(bracket_hi)
    with bracket width at most the requested tolerance; t_threshold is
    the bracket midpoint.
    """

    spec: ModelSpec
    partition_id: str
    t_threshold: float
    bracket: tuple
    tolerance: float
    evaluations: int
    warning: str | None = None


@dataclass(frozen=True)
class WindowResult:
    """Temperature window where the certificate partition is PPT while
    the witness partition still carries negativity."""

    spec: ModelSpec
    certificate_id: str
    witness_id: str
    window: tuple | None
    note: str = ""
    midpoint_certificate_e_n: float | None = None
    midpoint_witness_e_n: float | None = None


@dataclass(frozen=True)
class GapRow:
    n: int
    t_certificate: float
    t_witness: float
    gap: float


@dataclass(frozen=True)
class GapTable:
    """Threshold gaps across a family of sizes.

    ``max_rel_deviation`` is (max gap - min gap) / |mean gap|; zero for
    a single row.  A small value says the gap stays constant as the
    system grows, a large one that it drifts with size.
    """

    rows: tuple
    max_rel_deviation: float


class CrossingError(RuntimeError):
    """Raised when two negativity curves do not cross as expected."""


def make_engine(spec: ModelSpec, max_spin_sites: int = MAX_SPIN_SITES_DEFAULT):
    """Negativity engine for a model: Gaussian or dense spin."""
    if spec.kind == "harmonic":
        return GaussianModel(build_potential(spec))
    return SpinModel(build_spin_hamiltonian(spec, max_sites=max_spin_sites))


def _beta_of(temperature: float) -> float:
    return math.inf if temperature == 0.0 else 1.0 / temperature


def sweep(
    spec: ModelSpec,
    temperatures,
    partitions,
    jobs: int = 1,
    engine=None,
    max_spin_sites: int = MAX_SPIN_SITES_DEFAULT,
) -> SweepGrid:
    """Evaluate every (temperature, partition) cell of the grid.

    Rows come out in deterministic order, temperature outermost, and
    that order never depends on ``jobs``: cells are keyed by grid
    position, not by completion time.  A failing cell is recorded in
    its row's ``error`` field instead of aborting the grid.
    """
    temperatures = [float(t) for t in temperatures]
    partitions = list(partitions)
    if len(set(temperatures)) != len(temperatures):
        raise ValueError("temperature list contains duplicates")
    if len({p.id for p in partitions}) != len(partitions):
        raise ValueError("partition list contains duplicate ids")
    if engine is None and partitions:
        engine = make_engine(spec, max_spin_sites=max_spin_sites)

    cells = [(t, p) for t in temperatures for p in partitions]

    def evaluate(cell):
        t, part = cell
        e_n = e_l = float("nan")
        error = ""
        try:
            e_n, e_l = engine.negativity_pair(t, part)
        except Exception as exc:  # recorded per cell, grid continues
            error = f"{type(exc).__name__}: {exc}"
        return SweepRow(
            kind=spec.kind,
            topology=spec.topology,
            n=spec.n_sites,
            c=spec.c,
            h=spec.h,
            temperature=t,
            beta=_beta_of(t),
            partition_id=part.id,
            partition_mask=part.mask,
            area=part.area,
            e_n=e_n,
            e_l=e_l,
            is_ppt=bool(e_n < EPS_PPT) if not error else False,
            error=error,
        )

    if jobs <= 1 or len(cells) < 2:
        rows = [evaluate(cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(evaluate, cells))
    return SweepGrid(spec=spec, rows=tuple(rows))


def threshold_temperature(
    spec: ModelSpec,
    partition,
    t_lo: float = _DEFAULT_BRACKET[0],
    t_hi: float = _DEFAULT_BRACKET[1],
    tol: float = 1e-6,
    scan_points: int = 64,
    engine=None,
    max_spin_sites: int = MAX_SPIN_SITES_DEFAULT,
) -> ThresholdResult:
    """Temperature where the partition's negativity dies out.

    A coarse scan over ``scan_points`` equally spaced temperatures
    locates the sign change of E_N - EPS_PPT, then bisection narrows
    the bracket below ``tol``.  The partition must be entangled at
    ``t_lo`` and PPT at ``t_hi``; each failure mode gets its own
    message.  Should the scan see several sign changes, the largest-T
    one is refined and a warning is attached.
    """
    if engine is None:
        engine = make_engine(spec, max_spin_sites=max_spin_sites)
    evaluations = 0

    def e_n(t: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return engine.negativity_pair(t, partition)[0]

    lo_val = e_n(t_lo)
    if lo_val <= EPS_PPT:
        raise ThresholdError(
            f"not entangled at T_lo={t_lo:g} (E_N={lo_val:.3e}); no threshold to find"
        )
    hi_val = e_n(t_hi)
    if hi_val > EPS_PPT:
        raise ThresholdError(
            f"still entangled at T_hi={t_hi:g} (E_N={hi_val:.3e}); enlarge the bracket"
        )

    ts = np.linspace(t_lo, t_hi, scan_points)
    vals = [lo_val] + [e_n(t) for t in ts[1:-1]] + [hi_val]
    crossings = [
        i for i in range(len(ts) - 1) if vals[i] > EPS_PPT >= vals[i + 1]
    ]
    warning = None
    if len(crossings) > 1:
        warning = (
            f"coarse scan found {len(crossings)} sign changes; "
            f"refining the largest-T crossing"
        )
        warnings.warn(warning, stacklevel=2)
    lo, hi = float(ts[crossings[-1]]), float(ts[crossings[-1] + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if e_n(mid) > EPS_PPT:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(
        spec=spec,
        partition_id=partition.id,
        t_threshold=0.5 * (lo + hi),
        bracket=(lo, hi),
        tolerance=tol,
        evaluations=evaluations,
        warning=warning,
    )


def bound_entanglement_window(
    spec: ModelSpec,
    certificate,
    witness,
    t_lo: float = _DEFAULT_BRACKET[0],
    t_hi: float = _DEFAULT_BRACKET[1],
    tol: float = 1e-6,
    engine=None,
    max_spin_sites: int = MAX_SPIN_SITES_DEFAULT,
) -> WindowResult:
    """Window between the two partitions' thresholds, verified at its
    midpoint (certificate PPT, witness entangled).

    When the caller's certificate turns out to have the larger
    threshold the roles are swapped and the swap is noted; the window
    is a statement about the numerically earlier threshold either way.
    If neither partition is ever entangled the window is empty.
    """
    if engine is None:
        engine = make_engine(spec, max_spin_sites=max_spin_sites)
    notes = []
    if spec.topology == "star":
        notes.append(
            "star topology has no translational symmetry; the PPT verdict "
            "certifies this partition only"
        )

    def try_threshold(part):
        try:
            return threshold_temperature(
                spec, part, t_lo=t_lo, t_hi=t_hi, tol=tol, engine=engine
            ).t_threshold
        except ThresholdError as exc:
            if "not entangled" in str(exc):
                return None
            raise

    t_cert = try_threshold(certificate)
    t_wit = try_threshold(witness)

    def empty(reason: str) -> WindowResult:
        notes.append(reason)
        return WindowResult(
            spec=spec,
            certificate_id=certificate.id,
            witness_id=witness.id,
            window=None,
            note="; ".join(notes),
        )

    if t_wit is None and t_cert is None:
        return empty("neither partition is entangled anywhere in the bracket")
    if t_wit is None:
        return empty("witness partition is PPT across the whole bracket")
    cert_id, wit_id = certificate.id, witness.id
    cert_part, wit_part = certificate, witness
    if t_cert is None:
        lo, hi = t_lo, t_wit
        notes.append("certificate partition is PPT across the whole bracket")
    else:
        lo, hi = t_cert, t_wit
        if lo > hi:
            cert_id, wit_id = wit_id, cert_id
            cert_part, wit_part = wit_part, cert_part
            lo, hi = hi, lo
            notes.append(
                f"threshold order swapped the roles: {cert_id} certifies, "
                f"{wit_id} witnesses"
            )
    if hi - lo <= tol:
        return empty("thresholds coincide within tolerance; no window")

    mid = 0.5 * (lo + hi)
    cert_en = engine.negativity_pair(mid, cert_part)[0]
    wit_en = engine.negativity_pair(mid, wit_part)[0]
    if cert_en >= EPS_PPT or wit_en < EPS_PPT:
        return empty(
            f"midpoint verification failed at T={mid:g} "
            f"(certificate E_N={cert_en:.3e}, witness E_N={wit_en:.3e})"
        )
    return WindowResult(
        spec=spec,
        certificate_id=cert_id,
        witness_id=wit_id,
        window=(lo, hi),
        note="; ".join(notes),
        midpoint_certificate_e_n=cert_en,
        midpoint_witness_e_n=wit_en,
    )


def rank1_factorizability(grid: SweepGrid) -> float:
    """Distance of the E_N table from an exact product f(T) g(partition).

    The grid's E_N values are arranged as a temperature-by-partition
    matrix M; the result is the Frobenius distance from M to its best
    rank-one approximation, divided by the Frobenius norm of M.  A
    residual at numerical zero certifies that the negativity factorizes
    into a temperature profile times a partition profile; a residual
    well above zero refutes such a factorization.  Single-row and
    single-column grids are trivially rank one.
    """
    bad = [r for r in grid.rows if r.error]
    if bad:
        raise ValueError(
            f"grid contains {len(bad)} failed cells; factorizability needs a clean grid"
        )
    temps = sorted({r.temperature for r in grid.rows})
    pids = list(dict.fromkeys(r.partition_id for r in grid.rows))
    table = {(r.temperature, r.partition_id): r.e_n for r in grid.rows}
    if len(table) != len(temps) * len(pids):
        raise ValueError("grid is not a complete temperature-by-partition table")
    m = np.array([[table[(t, pid)] for pid in pids] for t in temps])
    if not np.any(m > 0.0):
        raise ValueError("all-zero grid: factorizability is undefined without entanglement")
    if min(m.shape) == 1:
        return 0.0
    s = np.linalg.svd(m, compute_uv=False)
    return float(math.sqrt(float((s[1:] ** 2).sum()) / float((s**2).sum())))


def type2_gap_table(
    model_factory,
    n_list,
    certificate_factory,
    witness_factory,
    t_lo: float = _DEFAULT_BRACKET[0],
    t_hi: float = _DEFAULT_BRACKET[1],
    tol: float = 1e-4,
    max_spin_sites: int = MAX_SPIN_SITES_DEFAULT,
) -> GapTable:
    """Threshold gap t_witness - t_certificate across system sizes.

    ``model_factory``, ``certificate_factory`` and ``witness_factory``
    map a size n to the model and the two partitions.  The deviation
    statistic quantifies how constant the gap stays over ``n_list``.
    """
    rows = []
    for n in n_list:
        spec = model_factory(int(n))
        engine = make_engine(spec, max_spin_sites=max_spin_sites)
        t_cert = threshold_temperature(
            spec, certificate_factory(int(n)), t_lo=t_lo, t_hi=t_hi, tol=tol, engine=engine
        ).t_threshold
        t_wit = threshold_temperature(
            spec, witness_factory(int(n)), t_lo=t_lo, t_hi=t_hi, tol=tol, engine=engine
        ).t_threshold
        rows.append(GapRow(n=int(n), t_certificate=t_cert, t_witness=t_wit, gap=t_wit - t_cert))
    gaps = [r.gap for r in rows]
    if len(gaps) > 1:
        mean = sum(gaps) / len(gaps)
        deviation = (max(gaps) - min(gaps)) / abs(mean) if mean else math.inf
    else:
        deviation = 0.0
    return GapTable(rows=tuple(rows), max_rel_deviation=deviation)


def star_external_crossing(
    n_a: int,
    n_b: int,
    h: float,
    t_range: tuple = (1.5, 3.0),
    tol: float = 1e-4,
    scan_points: int = 33,
    max_spin_sites: int = MAX_SPIN_SITES_DEFAULT,
) -> float:
    """Temperature where two star sizes trade places in external-site
    negativity.

    Below the returned T* the larger of the two systems has the smaller
    single-external-site E_N; above it the larger system wins.  The
    difference small-system minus large-system is scanned over
    ``t_range`` for a positive-to-negative sign change and bisected to
    ``tol``.  No such change, or only changes of the opposite
    orientation, raise CrossingError.
    """
    from .partitions import single_external_vs_rest

    if n_a == n_b:
        raise ValueError("crossing needs two different system sizes")
    n_small, n_large = sorted((int(n_a), int(n_b)))
    engines = {}
    parts = {}
    for n in (n_small, n_large):
        spec = ModelSpec(kind="spin_half", topology="star", n_sites=n, h=h)
        engines[n] = make_engine(spec, max_spin_sites=max_spin_sites)
        parts[n] = single_external_vs_rest(n, 2)

    def diff(t: float) -> float:
        small = engines[n_small].negativity_pair(t, parts[n_small])[0]
        large = engines[n_large].negativity_pair(t, parts[n_large])[0]
        return small - large

    ts = np.linspace(t_range[0], t_range[1], scan_points)
    vals = [diff(t) for t in ts]
    crossings = [i for i in range(len(ts) - 1) if vals[i] > 0.0 >= vals[i + 1]]
    if not crossings:
        reversed_changes = any(
            vals[i] < 0.0 <= vals[i + 1] for i in range(len(ts) - 1)
        )
        if reversed_changes:
            raise CrossingError(
                "curves cross with the opposite orientation in "
                f"({t_range[0]:g}, {t_range[1]:g})"
            )
        raise CrossingError(
            f"no crossing of external-site negativities in ({t_range[0]:g}, {t_range[1]:g})"
        )
    if len(crossings) > 1:
        warnings.warn(
            f"{len(crossings)} crossings in the scan; refining the largest-T one",
            stacklevel=2,
        )
    lo, hi = float(ts[crossings[-1]]), float(ts[crossings[-1] + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if diff(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
