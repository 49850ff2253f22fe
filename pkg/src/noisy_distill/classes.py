"""Error classes of the 256 noise types, distillable intervals, measurement-noise splitting."""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .constants import CURVE_TOL
from .engine import (
    CLASS_TAGS,
    analytic_class_terms,
    branch_table,
    fidelity_increment,
    noisy_round_analytic,
    noisy_round_oracle,
)
from .errors import EmptyInterval, OutOfRange, Unclassified
from .noise import (
    BIT_TYPE,
    NOISE_TYPES,
    PHASE_TYPE,
    NoiseDistribution,
    absorb_measurement_noise,
    compose_distributions,
    depolarizing_distribution,
    single_type_distribution,
    uniform_over,
    validate_noise_type,
)

# F in {0.25, 0.26, ..., 1.00}
DEFAULT_GRID = tuple(round(0.25 + 0.01 * n, 2) for n in range(76))

REPRESENTATIVES = {"I": ("IIII", "XXZZ"), "M": ("IIIX", "ZZZX"),
                   "C1": ("IZII", "XYXX"), "C2": ("IXII", "ZYZZ")}

CARDINALITIES = {"I": 32, "M": 128, "C1": 32, "C2": 64}

_SAME_PAIRS = frozenset({"II", "XX", "YY", "ZZ"})
_C1_PAIRS = frozenset({"IZ", "ZI", "XY", "YX"})


def _mixed(a, b):
    return (a in PHASE_TYPE) != (b in PHASE_TYPE)


def classify_by_rule(t):
    """Class of a noise type from its Pauli letters alone."""
    t = validate_noise_type(t)
    if _mixed(t[2], t[3]):
        return "M"
    first = t[:2]
    if first in _SAME_PAIRS:
        return "I"
    if first in _C1_PAIRS:
        return "C1"
    return "C2"


def class_members(tag):
    return [t for t in NOISE_TYPES if classify_by_rule(t) == tag]


def class_distribution(tag, p):
    """Weight p spread evenly over every member of one class."""
    return uniform_over(class_members(tag), p)


def _check_grid(grid):
    grid = [float(F) for F in grid]
    if len(grid) < 10 or min(grid) < 0.25 or max(grid) > 1.0:
        raise OutOfRange("classification grid needs >= 10 points inside [0.25, 1]")
    return grid


def _analytic_curves(grid):
    terms = [analytic_class_terms(F) for F in grid]
    return {tag: (np.array([t.numerator(tag) for t in terms]),
                  np.array([t.denominator(tag) for t in terms])) for tag in CLASS_TAGS}


def _match(num, den, curves, tol):
    for tag in CLASS_TAGS:
        n_ref, d_ref = curves[tag]
        if np.max(np.abs(num - n_ref)) <= tol and np.max(np.abs(den - d_ref)) <= tol:
            return tag
    return None


def classify_by_curve(t, grid=DEFAULT_GRID, tol=CURVE_TOL):
    """Class of a noise type from its simulated (numerator, denominator) curve."""
    grid = _check_grid(grid)
    num, den = branch_table(grid)
    i = NOISE_TYPES.index(validate_noise_type(t))
    tag = _match(num[i], den[i], _analytic_curves(grid), tol)
    if tag is None:
        raise Unclassified(f"{t} matches none of the four class curves")
    return tag


def classify_all(grid=DEFAULT_GRID, tol=CURVE_TOL):
    """Rule and curve class for every noise type, in canonical order."""
    grid = _check_grid(grid)
    num, den = branch_table(grid)
    curves = _analytic_curves(grid)
    rows = []
    for i, t in enumerate(NOISE_TYPES):
        curve = _match(num[i], den[i], curves, tol)
        rows.append((t, classify_by_rule(t), curve))
    return rows


def distinct_curves(grid=DEFAULT_GRID, tol=1e-10):
    """Group the 256 simulated curves by equality, without reference to the closed forms.

    Returns a list of groups (lists of noise types) in order of first appearance.
    """
    num, den = branch_table(_check_grid(grid))
    return _cluster(np.hstack([num, den]), list(NOISE_TYPES), tol)


def _cluster(curves, names, tol):
    reps, groups = [], []
    for c, name in zip(curves, names):
        for k, r in enumerate(reps):
            if np.max(np.abs(c - r)) <= tol:
                groups[k].append(name)
                break
        else:
            reps.append(c)
            groups.append([name])
    return groups


@dataclass(frozen=True)
class DistillableInterval:
    f_min: float
    f_max: float
    noise: NoiseDistribution = field(repr=False, compare=False, default=None)

    def contains(self, other, tol=0.0):
        return self.f_min <= other.f_min + tol and other.f_max <= self.f_max + tol

    @property
    def width(self):
        return self.f_max - self.f_min


def find_interval(g, lo=0.25, hi=1.0, step=1e-3, xtol=1e-9, edge=1e-6):
    """Interval on which ``g > 0``, from a grid scan plus bisection.

    When several disjoint positive runs exist the widest one is returned.
    The upper end is reported as exactly ``hi`` when ``g(hi - edge) > 0``.
    """
    n = int(round((hi - lo) / step))
    xs = np.linspace(lo, hi, n + 1)
    gs = np.array([g(x) for x in xs])
    pos = gs > 0
    if not pos.any():
        raise EmptyInterval("fidelity increment is non-positive on the whole grid")

    runs, start = [], None
    for i, flag in enumerate(pos):
        if flag and start is None:
            start = i
        if not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(xs) - 1))
    a, b = max(runs, key=lambda r: xs[r[1]] - xs[r[0]])

    if a == 0:
        f_min = xs[0]
    else:
        f_min = bisect(g, xs[a - 1], xs[a], xtol=xtol)
    if b == len(xs) - 1 or (b == len(xs) - 2 and g(hi - edge) > 0):
        f_max = hi
    else:
        f_max = bisect(g, xs[b], xs[b + 1], xtol=xtol)
    return float(f_min), float(f_max)


def distillable_interval(d):
    """Range of Werner fidelities that one noisy round strictly improves."""
    f_min, f_max = find_interval(lambda F: fidelity_increment(F, d))
    return DistillableInterval(f_min, f_max, d)


def class_interval(tag, p, representative=None):
    if tag not in CLASS_TAGS:
        raise ValueError(f"unknown error class {tag!r}")
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")
    t = representative or REPRESENTATIVES[tag][0]
    return distillable_interval(single_type_distribution(t, p))


def class_weights_depolarizing(p):
    """Per-class weights of uniform noise: class size / 256 times p."""
    return tuple(p * CARDINALITIES[tag] / len(NOISE_TYPES) for tag in CLASS_TAGS)


def depolarization_decomposition(p, F):
    """Output fidelity under uniform noise, from the class mixture.

    Returns ``(mixture, oracle)``; the oracle simulates all 256 branches.
    """
    mixture = noisy_round_analytic(F, class_weights_depolarizing(p), p).fidelity_out
    oracle = noisy_round_oracle(F, depolarizing_distribution(p)).fidelity_out
    return mixture, oracle


# --- measurement noise ---------------------------------------------------


@dataclass
class CurveCluster:
    label: str
    base_class: str
    members: list
    delta: np.ndarray
    interval: DistillableInterval | None


@dataclass
class MeasurementCurves:
    eta: float
    p: float
    grid: tuple
    # label -> cluster, plus the measurement-only and depolarizing reference curves
    clusters: dict
    ideal: CurveCluster
    depolarizing: CurveCluster

    def clusters_of(self, tag):
        return [c for c in self.clusters.values() if c.base_class == tag]

    def subcluster_of(self, t):
        for c in self.clusters.values():
            if t in c.members:
                return c.label
        raise KeyError(t)


def _safe_interval(d):
    try:
        return distillable_interval(d)
    except EmptyInterval:
        return None


def _delta_from_table(d, num, den, grid):
    q = d.probabilities()
    return (q @ num) / (q @ den) - np.asarray(grid)


def measurement_noise_curves(eta, p, grid=DEFAULT_GRID, tol=CURVE_TOL, intervals=True):
    """Fidelity-increment curves of every noise type combined with imperfect measurement.

    Each type ``t`` gets weight ``p`` and is composed with the bit-flip noise
    equivalent to measurement imperfection ``eta``. Within every error class
    the resulting curves are clustered; clusters are labelled ``<class>-<n>``
    in order of increasing F_min (empty intervals last).
    """
    grid = tuple(float(F) for F in grid)
    meas = absorb_measurement_noise(eta)
    num, den = branch_table(grid)

    ideal_d = meas
    ideal = CurveCluster("ideal", "ideal", [], _delta_from_table(ideal_d, num, den, grid),
                         _safe_interval(ideal_d) if intervals else None)
    dep_d = compose_distributions(depolarizing_distribution(p), meas)
    dep = CurveCluster("D", "D", [], _delta_from_table(dep_d, num, den, grid),
                       _safe_interval(dep_d) if intervals else None)

    clusters = {}
    for tag in CLASS_TAGS:
        members = class_members(tag)
        dists = {t: compose_distributions(single_type_distribution(t, p), meas) for t in members}
        deltas = {t: _delta_from_table(dists[t], num, den, grid) for t in members}
        groups = _cluster([deltas[t] for t in members], members, tol)
        found = []
        for g in groups:
            iv = _safe_interval(dists[g[0]]) if intervals else None
            found.append((g, iv))
        found.sort(key=lambda gi: (np.inf if gi[1] is None else gi[1].f_min, gi[0][0]))
        for n, (g, iv) in enumerate(found, 1):
            label = f"{tag}-{n}"
            clusters[label] = CurveCluster(label, tag, g, deltas[g[0]], iv)
    return MeasurementCurves(eta, p, grid, clusters, ideal, dep)
