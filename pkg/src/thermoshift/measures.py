"""Cylinder measures, Gibbs constructions and equilibrium statistics.

Measures are stored as weights on depth-n cylinders (words are tuples).
Three sources:

* "sup-weight" — mass proportional to exp(t sup f_n|[w]);
* "cesaro" — a sup-weight measure pushed through an orbit average, the
  constructive route to an invariant limit;
* "spectral" — the stationary Markov chain from the dominant eigendata of
  the weighted block matrix (exact equilibrium for additive locally
  constant potentials).

Entropy and Lyapunov estimators work on anything exposing ``mass(word)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (ConditionNotMet, NumericalError, ValidationError)
from .linalg import dominant_pair
from .potentials import DecayPotential, Potential
from .pressure import _first_level, weighted_block_matrix
from .shifts import ShiftModel, admissible_words, is_primitive


@dataclass
class CylinderMeasure:
    """A probability vector on depth-``depth`` cylinders."""

    shift: ShiftModel
    depth: int
    weights: dict
    source: str = "raw"
    _levels: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_weights(cls, shift: ShiftModel, depth: int, weights: Mapping,
                     source: str = "raw") -> "CylinderMeasure":
        clean = {}
        total = 0.0
        for w, v in weights.items():
            w = tuple(w)
            if len(w) != depth:
                raise ValidationError(f"weight key {w!r} has length != {depth}")
            if not shift.is_admissible(w):
                raise ValidationError(f"weight on inadmissible word {w!r}")
            v = float(v)
            if v < 0:
                raise ValidationError(f"negative mass on {w!r}")
            if v > 0:
                clean[w] = v
                total += v
        if total <= 0:
            raise ValidationError("measure has no mass")
        norm = {w: v / total for w, v in clean.items()}
        return cls(shift, depth, norm, source)

    def total(self) -> float:
        return math.fsum(self.weights.values())

    def level(self, k: int) -> dict:
        """Depth-k marginal, 1 <= k <= depth."""
        if not 1 <= k <= self.depth:
            raise ValidationError(f"marginal depth {k} outside 1..{self.depth}")
        if k == self.depth:
            return self.weights
        if k not in self._levels:
            acc: dict = {}
            for w, v in self.weights.items():
                key = w[:k]
                acc[key] = acc.get(key, 0.0) + v
            self._levels[k] = acc
        return self._levels[k]

    def mass(self, word) -> float:
        word = tuple(word)
        if len(word) == 0:
            return self.total()
        if len(word) > self.depth:
            raise ValidationError(
                f"cylinder of length {len(word)} not determined at depth {self.depth}")
        return self.level(len(word)).get(word, 0.0)

    def marginal_vector(self, k: int = 1) -> dict:
        table = self.level(k)
        if k == 1:
            return {w[0]: v for w, v in sorted(table.items())}
        return dict(sorted(table.items()))

    def invariance_defect(self) -> float:
        """max over (depth-1)-cylinders of |mu(preimage) - mu(cylinder)|."""
        if self.depth < 2:
            return 0.0
        short = self.level(self.depth - 1)
        pre: dict = {}
        for w, v in self.weights.items():
            key = w[1:]
            pre[key] = pre.get(key, 0.0) + v
        keys = set(short) | set(pre)
        return max(abs(pre.get(k, 0.0) - short.get(k, 0.0)) for k in keys)


def gibbs_weights(shift: ShiftModel, pot: Potential, t: float, n: int,
                  budget: int | None = 2_000_000) -> CylinderMeasure:
    """Mass on depth-n cylinders proportional to exp(t sup f_n|[w])."""
    words = admissible_words(shift, n, budget=budget)
    raw = {w: math.exp(t * pot.sup(w, shift)) for w in words}
    return CylinderMeasure.from_weights(shift, n, raw, source="sup-weight")


def orbit_measure(shift: ShiftModel, word, depth: int) -> CylinderMeasure:
    """Depth-d marginals of the periodic orbit obtained by repeating ``word``."""
    word = tuple(word)
    n = len(word)
    if n == 0:
        raise ValidationError("empty orbit word")
    if not shift.is_admissible(word) or not shift.is_edge(word[-1], word[0]):
        raise ValidationError(f"word {word!r} does not close an admissible loop")
    acc: dict = {}
    for k in range(n):
        cyl = tuple(word[(k + i) % n] for i in range(depth))
        acc[cyl] = acc.get(cyl, 0.0) + 1.0 / n
    return CylinderMeasure.from_weights(shift, depth, acc, source="orbit")


def gibbs_construct(shift: ShiftModel, pot: Potential, t: float, n: int,
                    m: int, depth: int,
                    budget: int | None = 2_000_000) -> CylinderMeasure:
    """Average the depth-n sup-weight measure over m shifts, reported on
    depth-``depth`` cylinders.  Needs m < n and depth <= n - m + 1 so every
    shifted cylinder is still determined by the depth-n weights."""
    if m < 1:
        raise ValidationError("averaging window m must be >= 1")
    if m >= n:
        raise ValidationError(
            f"averaging window m={m} must be smaller than the construction depth n={n}")
    if depth < 1 or depth > n - m + 1:
        raise ValidationError(
            f"report depth must lie in 1..{n - m + 1} for n={n}, m={m}")
    nu = gibbs_weights(shift, pot, t, n, budget=budget)
    acc: dict = {}
    inv_m = 1.0 / m
    for u, v in nu.weights.items():
        share = v * inv_m
        for j in range(m):
            key = u[j:j + depth]
            acc[key] = acc.get(key, 0.0) + share
    return CylinderMeasure.from_weights(shift, depth, acc, source="cesaro")


# -- spectral equilibrium --------------------------------------------------


@dataclass
class RPFEquilibrium:
    """Stationary Markov chain built from the dominant eigendata of the
    weighted block matrix; its cylinder masses realize the equilibrium
    state of t*F for additive locally constant F."""

    shift: ShiftModel
    pot: Potential
    t: float
    depth: int
    states: tuple
    pi: np.ndarray
    p: np.ndarray
    lam: float

    @property
    def pressure(self) -> float:
        return math.log(self.lam)

    def _index(self) -> dict:
        if not hasattr(self, "_idx"):
            self._idx = {w: i for i, w in enumerate(self.states)}
        return self._idx

    def mass(self, word) -> float:
        word = tuple(word)
        n = len(word)
        r = self.depth
        idx = self._index()
        if n == 0:
            return 1.0
        if n < r:
            return math.fsum(self.pi[i] for w, i in idx.items() if w[:n] == word)
        windows = [word[k:k + r] for k in range(n - r + 1)]
        try:
            path = [idx[w] for w in windows]
        except KeyError:
            return 0.0
        mass = float(self.pi[path[0]])
        for a, b in zip(path, path[1:]):
            mass *= float(self.p[a, b])
        return mass

    def as_cylinder_measure(self, depth: int) -> CylinderMeasure:
        words = admissible_words(self.shift, depth)
        raw = {w: self.mass(w) for w in words}
        return CylinderMeasure.from_weights(self.shift, depth, raw,
                                            source="spectral")

    def entropy(self) -> float:
        """Exact Kolmogorov-Sinai entropy of the stationary chain."""
        acc = []
        for i in range(len(self.states)):
            if self.pi[i] <= 0:
                continue
            for j in range(len(self.states)):
                q = self.p[i, j]
                if q > 0:
                    acc.append(-self.pi[i] * q * math.log(q))
        return math.fsum(acc)

    def lyapunov_exact(self) -> float:
        """integral of f_1 for the stationary chain (additive families)."""
        return math.fsum(float(self.pi[i]) * _first_level(self.pot, w)
                         for i, w in enumerate(self.states))


def rpf_equilibrium(shift: ShiftModel, pot: Potential, t: float,
                    depth: int | None = None) -> RPFEquilibrium:
    if not pot.is_additive or pot.depth is None:
        raise ValidationError(
            "spectral equilibrium needs an additive locally constant potential")
    r = depth if depth is not None else pot.depth
    if r < pot.depth:
        raise ValidationError("block depth must cover the potential depth")
    states, B, adj = weighted_block_matrix(shift, pot, t, depth=r)
    block = ShiftModel(tuple(states), adj, assumed_mixing=True)
    if not is_primitive(block):
        raise ConditionNotMet(
            f"spectral route at block depth {r} needs a primitive transition "
            "structure")
    lam, right, left = dominant_pair(B)
    h = right
    pi = left * h
    total = float(pi.sum())
    if not math.isfinite(total) or total <= 0:
        raise NumericalError("stationary weights collapsed")
    pi = pi / total
    with np.errstate(divide="ignore", invalid="ignore"):
        p = B * h[None, :] / (lam * h[:, None])
    p = np.where(np.isfinite(p), p, 0.0)
    rowsum = p.sum(axis=1)
    # Row sums must be 1 where the chain actually lives; states whose
    # eigenvector entries underflowed carry no stationary mass and only get
    # a direction repair below.
    heavy = pi > 1e-12
    if heavy.any():
        row_err = float(np.abs(rowsum[heavy] - 1.0).max())
        if row_err > 1e-9:
            raise NumericalError(
                f"stochasticization failed: row sums off by {row_err:.3e}")
    for i in np.flatnonzero(~(rowsum > 0)):
        p[i] = B[i] / B[i].sum()
    p = p / p.sum(axis=1, keepdims=True)
    return RPFEquilibrium(shift, pot, t, r, tuple(states), pi, p, lam)


# -- entropy and Lyapunov estimators ---------------------------------------


@dataclass(frozen=True)
class EntropyEstimate:
    sequence: tuple          # (n, H_n, H_n / n)
    value: float             # H_{n_max} - H_{n_max - 1}
    ratio_value: float       # min_n H_n / n
    ratios_monotone: bool


def entropy_estimate(shift: ShiftModel, measure, n_max: int,
                     budget: int | None = 2_000_000) -> EntropyEstimate:
    """Cylinder entropies H_n with the conditional-difference estimator.

    H_n / n decreases to the entropy for invariant measures; the difference
    H_n - H_{n-1} converges faster and is exact for Markov measures."""
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    seq = []
    prev_H = 0.0
    value = math.nan
    for n in range(1, n_max + 1):
        words = admissible_words(shift, n, budget=budget)
        acc = []
        for w in words:
            mu = measure.mass(w)
            if mu > 0:
                acc.append(-mu * math.log(mu))
        H = math.fsum(acc)
        seq.append((n, H, H / n))
        value = H - prev_H
        prev_H = H
    ratios = [r for _, _, r in seq]
    monotone = all(b <= a + 1e-12 for a, b in zip(ratios, ratios[1:]))
    return EntropyEstimate(tuple(seq), value, min(ratios), monotone)


@dataclass(frozen=True)
class LyapunovEstimate:
    sequence: tuple          # (n, a_n)
    value: float             # running minimum
    bias_bound: float        # resolution floor from the variation constant


def lyapunov(shift: ShiftModel, pot: Potential, measure, n_max: int,
             budget: int | None = 2_000_000) -> LyapunovEstimate:
    """a_n = (1/n) sum_w mu[w] (sup f_n|[w] + C_aa); almost additivity makes
    the sequence an upper scheme whose running minimum estimates the
    exponent."""
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    seq = []
    best = math.inf
    for n in range(1, n_max + 1):
        words = admissible_words(shift, n, budget=budget)
        acc = []
        for w in words:
            mu = measure.mass(w)
            if mu > 0:
                acc.append(mu * (pot.sup(w, shift) + pot.aa_const))
        a_n = math.fsum(acc) / n
        seq.append((n, a_n))
        best = min(best, a_n)
    bias = (pot.bv_const + pot.aa_const) / n_max
    return LyapunovEstimate(tuple(seq), best, bias)


# -- Gibbs certificate -----------------------------------------------------


@dataclass(frozen=True)
class GibbsCertificate:
    c_lower: float           # min mu[w] exp(n P - t sup f_n|[w])
    c_upper: float           # max of the same ratio
    bound: float             # exp(t C_bv) (1 + slack)
    slack: float
    passed: bool
    n_range: tuple
    worst_word: tuple


def gibbs_certificate(shift: ShiftModel, pot: Potential, t: float, measure,
                      pressure: float, n_range: Sequence[int],
                      slack: float = 1e-9,
                      budget: int | None = 2_000_000) -> GibbsCertificate:
    """Two-sided cylinder-ratio scan against exp(t C_bv) (1 + slack).

    With the running-infimum pressure and sup-weight masses the upper ratio
    is provably below exp(t C_bv); spectral measures carry their own
    distortion constants and may exceed the tight bound."""
    c_lo = math.inf
    c_hi = 0.0
    worst = ()
    for n in n_range:
        for w in admissible_words(shift, n, budget=budget):
            mu = measure.mass(w)
            if mu <= 0:
                continue
            ratio = mu * math.exp(n * pressure - t * pot.sup(w, shift))
            if ratio > c_hi:
                c_hi, worst = ratio, w
            c_lo = min(c_lo, ratio)
    if c_hi == 0.0:
        raise NumericalError("measure assigns no mass in the scanned range")
    bound = math.exp(t * pot.bv_const) * (1.0 + slack)
    passed = c_hi <= bound and c_lo > 0.0
    return GibbsCertificate(c_lo, c_hi, bound, slack, passed,
                            tuple(n_range), worst)


# -- tightness on countable alphabets --------------------------------------


@dataclass(frozen=True)
class TightSet:
    eps: float
    t: float
    s_lower: float           # lower bound on the log normalizer
    cutoffs: tuple           # n_m per coordinate, m = 1..len(cutoffs)
    targets: tuple           # per-coordinate tail-mass budgets eps / 2^{m+1}
    numeric_tails: tuple     # verified weight tails at each cutoff


def tight_set(pot: DecayPotential, t: float, eps: float, m_max: int,
              s_lower: float) -> TightSet:
    """Coordinate cutoffs n_m making {x : x_m <= n_m for all m} carry mass
    >= 1 - eps for every measure obeying the marginal bound
    mu[i] <= exp(C_bv + t f_1|[i] - S).

    Each cutoff is the smallest n whose analytic tail bound meets the budget
    (eps / 2^{m+1}) exp(S - C_bv); the numeric tail is then required to beat
    the budget strictly."""
    if not isinstance(pot, DecayPotential):
        raise ValidationError("tightness cutoffs need a decay-law potential")
    if eps <= 0 or eps >= 1:
        raise ValidationError("eps must lie in (0, 1)")
    if not pot.summable(t):
        raise ConditionNotMet("the t-scaled series diverges; no tight set")
    scale = math.exp(s_lower - t * pot.bv_const)
    cutoffs = []
    targets = []
    tails = []
    for m in range(1, m_max + 1):
        budget = (eps / 2.0 ** (m + 1)) * scale
        n = _smallest_n(lambda k: pot.tail_weight_bound(k, t), budget)
        # strict numeric confirmation (partial sum + remainder bound)
        while pot.tail_weight_numeric(n, t) >= budget:
            n += 1
        cutoffs.append(n)
        targets.append(eps / 2.0 ** (m + 1))
        tails.append(pot.tail_weight_numeric(n, t))
    return TightSet(eps, t, s_lower, tuple(cutoffs), tuple(targets),
                    tuple(tails))


def _smallest_n(bound, budget: float, cap: int = 10 ** 9) -> int:
    if bound(1) <= budget:
        return 1
    lo, hi = 1, 2
    while bound(hi) > budget:
        lo, hi = hi, hi * 2
        if hi > cap:
            raise NumericalError("tail cutoff search exceeded its cap")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= budget:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ExcessMass:
    total: float
    per_position: tuple
    positions_checked: int


def excess_mass(measure: CylinderMeasure, cutoffs: Sequence[int]) -> ExcessMass:
    """Mass escaping the box {x : x_m <= cutoffs[m-1]} positionwise, summed
    over the coordinates the measure's depth can see."""
    per = []
    checked = min(len(cutoffs), measure.depth)
    for m in range(1, checked + 1):
        cut = cutoffs[m - 1]
        w = math.fsum(v for word, v in measure.weights.items()
                      if word[m - 1] > cut)
        per.append(w)
    return ExcessMass(math.fsum(per), tuple(per), checked)


@dataclass(frozen=True)
class MarginalBoundRow:
    symbol: object
    mass: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class MarginalBoundCheck:
    rows: tuple
    all_ok: bool
    worst_ratio: float


def marginal_bound_check(pot: Potential, t: float, measure,
                         s_lower: float) -> MarginalBoundCheck:
    """Check mu[i] <= exp(t C_bv + t f_1|[i] - S) per first-coordinate symbol;
    bounds at or above 1 are vacuous and count as satisfied."""
    marg = measure.marginal_vector(1)
    rows = []
    worst = 0.0
    for sym in sorted(marg):
        mu = marg[sym]
        bound = math.exp(t * pot.bv_const + t * pot.sup((sym,), measure.shift)
                         - s_lower)
        ok = bound >= 1.0 or mu <= bound + 1e-15
        if bound > 0:
            worst = max(worst, mu / bound)
        rows.append(MarginalBoundRow(sym, mu, bound, ok))
    return MarginalBoundCheck(tuple(rows), all(r.ok for r in rows), worst)


# -- entropy tails on countable alphabets ----------------------------------


@dataclass(frozen=True)
class EntropyTailBound:
    value: float
    constant: float          # the cylinder-mass constant C_{t,n}
    cutoff: int
    n: int
    applicable: bool


def entropy_tail_bound(pot: DecayPotential, t: float, n: int, cutoff: int,
                       pressure: float, terms: int = 20000) -> EntropyTailBound:
    """Bound the depth-n entropy contribution of cylinders whose first symbol
    exceeds ``cutoff``.

    Uses mu[w] <= C exp(t sup f_n|[w]) with
    C = exp(t C_bv + n t C_aa + t (n-1) sup f_1 - n P) and the monotonicity
    of -x log x below 1/e.  Raises when C exp(t f_1|[cutoff+1]) >= 1/e, naming
    the smallest workable cutoff."""
    if not isinstance(pot, DecayPotential):
        raise ValidationError("entropy tail bounds need a decay-law potential")
    if not pot.summable(t):
        raise ConditionNotMet("the t-scaled series diverges at this t")
    C = math.exp(t * pot.bv_const + n * t * pot.aa_const
                 + t * (n - 1) * pot.sup_f1 - n * pressure)
    edge = C * math.exp(t * pot.value(cutoff + 1))
    if edge >= 1.0 / math.e:
        needed = cutoff + 1
        while C * math.exp(t * pot.value(needed + 1)) >= 1.0 / math.e:
            needed += 1
            if needed > 10 ** 9:
                raise NumericalError("no workable cutoff below the search cap")
        raise ConditionNotMet(
            f"cutoff {cutoff} too small for the -x log x regime; "
            f"smallest workable cutoff is {needed}")
    W = pot.tail_weight_numeric(cutoff, t, terms=terms)
    G = pot.weighted_log_tail(cutoff, t, terms=terms)
    value = n * C * ((-math.log(C)) * W + G)
    return EntropyTailBound(value, C, cutoff, n, True)
