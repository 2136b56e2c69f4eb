"""Potential families on Markov shifts.

A potential here is a sequence of functions f_n evaluated on cylinders.  The
families shipped:

* :class:`LocallyConstant` — additive Birkhoff sums of a function of the
  first ``depth`` symbols;
* :class:`DecayPotential` — additive with first-level values following a
  decay law on a countable alphabet (``-coef*log i`` or ``-coef*i``);
* :class:`MatrixCocycle` — log of the max-row-sum norm of an ordered product
  of strictly positive matrices (almost additive but not additive);
* :class:`AffinePotential` — ``mult*f_n + n*shift`` on top of another family
  (used for scaling and normalizing the cocycle family).

``sup``/``inf`` evaluate the cylinder supremum/infimum of f_n on [w] with
|w| = n; for every family except depth >= 2 locally constant the two agree
because f_n is constant on n-cylinders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .shifts import ShiftModel, admissible_words, count_admissible_words


class Potential:
    """Common interface; see module docstring for the families."""

    family: str = "abstract"
    is_additive: bool = False
    depth: int | None = None  # locally-constant depth, if any

    @property
    def aa_const(self) -> float:
        """Declared almost-additivity constant."""
        raise NotImplementedError

    @property
    def bv_const(self) -> float:
        """Declared bounded-variation (Bowen) constant."""
        raise NotImplementedError

    @property
    def sup_f1(self) -> float:
        raise NotImplementedError

    def sup(self, word: Sequence, shift: ShiftModel | None = None) -> float:
        raise NotImplementedError

    def inf(self, word: Sequence, shift: ShiftModel | None = None) -> float:
        raise NotImplementedError

    def at_periodic(self, word: Sequence) -> float:
        """f_n at the periodic point obtained by repeating ``word``."""
        raise NotImplementedError

    def scale(self, t: float) -> "Potential":
        """The potential t*F.  Constants scale by |t|."""
        return AffinePotential(self, float(t), 0.0)

    def normalize(self) -> "Potential":
        """Subtract n*(sup f_1 + aa_const) from f_n, making every value <= 0."""
        return AffinePotential(self, 1.0, -(self.sup_f1 + self.aa_const))

    def descriptor(self) -> str:
        raise NotImplementedError


def _as_symbol_key(key):
    if isinstance(key, tuple):
        return key
    return (key,)


class LocallyConstant(Potential):
    """Additive potential whose first-level function depends on ``depth``
    leading symbols.  The table maps depth-tuples (or bare symbols when
    depth is 1) to values."""

    is_additive = True

    def __init__(self, table: Mapping, depth: int = 1):
        if depth < 1:
            raise ValidationError("locally constant depth must be >= 1")
        items = {}
        for k, v in table.items():
            key = _as_symbol_key(k)
            if len(key) != depth:
                raise ValidationError(
                    f"table key {k!r} does not have {depth} symbols")
            items[key] = float(v)
        if not items:
            raise ValidationError("empty potential table")
        self._table = items
        self._depth = depth
        self.family = "locally_constant"

    @classmethod
    def constant(cls, shift: ShiftModel, value: float) -> "LocallyConstant":
        return cls({(s,): float(value) for s in shift.symbols}, depth=1)

    @property
    def depth(self) -> int:  # type: ignore[override]
        return self._depth

    @depth.setter
    def depth(self, _):  # pragma: no cover - dataclass-style guard
        raise AttributeError("depth is read-only")

    @property
    def table(self) -> dict:
        return dict(self._table)

    @property
    def aa_const(self) -> float:
        return 0.0

    @property
    def bv_const(self) -> float:
        if self._depth == 1:
            return 0.0
        vals = self._table.values()
        return (self._depth - 1) * (max(vals) - min(vals))

    @property
    def sup_f1(self) -> float:
        return max(self._table.values())

    def _window(self, key: tuple) -> float:
        try:
            return self._table[key]
        except KeyError:
            raise ValidationError(
                f"word {key!r} is outside the potential domain") from None

    def _terms(self, full: Sequence, start: int, count: int) -> list[float]:
        r = self._depth
        return [self._window(tuple(full[k:k + r])) for k in range(start, start + count)]

    def _extreme(self, word, shift, best) -> float:
        n = len(word)
        if n == 0:
            return 0.0
        r = self._depth
        if r == 1:
            return math.fsum(self._window((s,)) for s in word)
        if n >= r:
            base = math.fsum(self._terms(word, 0, n - r + 1))
            open_count = r - 1
        else:
            base = 0.0
            open_count = n
        if shift is None:
            raise ValidationError(
                "cylinder extrema of a depth >= 2 potential need the shift")
        exts = _extensions(shift, word[-1], r - 1)
        if not exts:
            raise ValidationError("word admits no continuation in this shift")
        vals = []
        for u in exts:
            full = tuple(word) + u
            vals.append(math.fsum(self._terms(full, n - open_count, open_count)))
        return base + best(vals)

    def sup(self, word, shift=None) -> float:
        return self._extreme(word, shift, max)

    def inf(self, word, shift=None) -> float:
        return self._extreme(word, shift, min)

    def at_periodic(self, word) -> float:
        n = len(word)
        r = self._depth
        return math.fsum(self._window(tuple(word[(k + i) % n] for i in range(r)))
                         for k in range(n))

    def scale(self, t: float) -> "LocallyConstant":
        return LocallyConstant({k: t * v for k, v in self._table.items()}, self._depth)

    def normalize(self) -> "LocallyConstant":
        c = self.sup_f1 + self.aa_const
        return LocallyConstant({k: v - c for k, v in self._table.items()}, self._depth)

    def descriptor(self) -> str:
        entries = ",".join(f"{k!r}:{v!r}" for k, v in sorted(self._table.items(),
                                                             key=lambda kv: repr(kv[0])))
        return f"locally_constant(depth={self._depth},table={{{entries}}})"


def _extensions(shift: ShiftModel, last, length: int) -> list[tuple]:
    if length == 0:
        return [()]
    out = []
    stack = [((), last)]
    while stack:
        word, u = stack.pop()
        if len(word) == length:
            out.append(word)
            continue
        for s in shift.successors(u):
            stack.append((word + (s,), s))
    return sorted(out)


class DecayPotential(Potential):
    """Additive depth-1 potential on the alphabet 1, 2, 3, ... with
    f_1|[i] = offset - coef*log(i) (law "log") or offset - coef*i ("linear")."""

    is_additive = True
    depth = 1

    def __init__(self, law: str, coef: float, offset: float = 0.0):
        if law not in ("log", "linear"):
            raise ValidationError(f"unknown decay law {law!r}")
        if coef < 0:
            raise ValidationError("decay coefficient must be >= 0")
        self.law = law
        self.coef = float(coef)
        self.offset = float(offset)
        self.family = "decay"

    def value(self, i: int) -> float:
        if not isinstance(i, (int, np.integer)) or i < 1:
            raise ValidationError(
                f"decay potentials are defined on positive integer symbols, got {i!r}")
        if self.law == "log":
            return self.offset - self.coef * math.log(i)
        return self.offset - self.coef * i

    @property
    def aa_const(self) -> float:
        return 0.0

    @property
    def bv_const(self) -> float:
        return 0.0

    @property
    def sup_f1(self) -> float:
        return self.value(1)

    def sup(self, word, shift=None) -> float:
        return math.fsum(self.value(s) for s in word)

    inf = sup

    def at_periodic(self, word) -> float:
        return self.sup(word)

    def scale(self, t: float) -> "DecayPotential":
        if t < 0:
            raise ValidationError("decay potentials scale by nonnegative t only")
        return DecayPotential(self.law, self.coef * t, self.offset * t)

    def normalize(self) -> "DecayPotential":
        return DecayPotential(self.law, self.coef, self.offset - self.sup_f1)

    # -- analytic tails ----------------------------------------------------

    def summable(self, t: float = 1.0) -> bool:
        """Whether sum_i exp(t*f_1|[i]) converges."""
        if self.law == "log":
            return t * self.coef > 1.0
        return t * self.coef > 0.0

    def tail_weight_bound(self, n: int, t: float = 1.0) -> float:
        """Upper bound on sum_{i>n} exp(t*f_1|[i]) (exact for the linear law)."""
        if not self.summable(t):
            return math.inf
        scale = math.exp(t * self.offset)
        if self.law == "log":
            s = t * self.coef
            return scale * n ** (1.0 - s) / (s - 1.0)
        c = t * self.coef
        return scale * math.exp(-c * (n + 1)) / (1.0 - math.exp(-c))

    def tail_weight_numeric(self, n: int, t: float = 1.0, terms: int = 20000) -> float:
        """Partial tail sum plus a bound on the remainder."""
        if not self.summable(t):
            return math.inf
        partial = math.fsum(math.exp(t * self.value(i))
                            for i in range(n + 1, n + terms + 1))
        return partial + self.tail_weight_bound(n + terms, t)

    def weighted_log_tail(self, n: int, t: float, terms: int = 20000) -> float:
        """sum_{i>n} (-t*f_1|[i]) * exp(t*f_1|[i]), partial sum plus remainder bound.

        This is the t-weighted summability series; it converges whenever the
        plain series does (for the log law it needs t*coef > 1).
        """
        if not self.summable(t):
            return math.inf
        partial = math.fsum((-t * self.value(i)) * math.exp(t * self.value(i))
                            for i in range(n + 1, n + terms + 1))
        X = n + terms
        scale = math.exp(t * self.offset)
        if self.law == "log":
            s = t * self.coef
            # integral bounds for sum x^{-s} and sum x^{-s} log x beyond X
            t1 = X ** (1.0 - s) / (s - 1.0)
            t2 = X ** (1.0 - s) * (math.log(X) / (s - 1.0) + 1.0 / (s - 1.0) ** 2)
            rem = scale * (s * t2 - t * self.offset * t1)
        else:
            c = t * self.coef
            q = math.exp(-c)
            geo = q ** (X + 1) / (1.0 - q)
            # sum_{i > X} i q^i = q^{X+1} ((X+1) - X q) / (1-q)^2
            lin = q ** (X + 1) * ((X + 1) - X * q) / (1.0 - q) ** 2
            rem = scale * (c * lin - t * self.offset * geo)
        return partial + max(rem, 0.0)

    def descriptor(self) -> str:
        return f"decay(law={self.law},coef={self.coef!r},offset={self.offset!r})"


class MatrixCocycle(Potential):
    """f_n(x) = log || A_{x_1} ... A_{x_n} || with the max-row-sum norm.

    Matrices must be strictly positive.  The declared almost-additivity
    constant defaults to max_i log(max entry / min entry of A_i): for
    positive matrices ||PQ|| >= ||P|| ||Q|| * min/max entry ratio of Q's
    first factor, and ||PQ|| <= ||P|| ||Q|| always.
    """

    is_additive = False
    depth = None

    def __init__(self, matrices: Mapping, aa_const: float | None = None):
        mats = {}
        dim = None
        for k, m in matrices.items():
            arr = np.asarray(m, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValidationError(f"matrix for symbol {k!r} is not square")
            if dim is None:
                dim = arr.shape[0]
            elif arr.shape[0] != dim:
                raise ValidationError("cocycle matrices must share one dimension")
            if not (arr > 0).all():
                raise ValidationError(
                    f"matrix for symbol {k!r} must be strictly positive")
            arr.setflags(write=False)
            mats[k] = arr
        if not mats:
            raise ValidationError("empty cocycle family")
        self._mats = mats
        self._declared_aa = (float(aa_const) if aa_const is not None
                             else max(float(np.log(m.max() / m.min()))
                                      for m in mats.values()))
        self.family = "matrix_cocycle"

    @property
    def matrices(self) -> dict:
        return dict(self._mats)

    @property
    def aa_const(self) -> float:
        return self._declared_aa

    @property
    def bv_const(self) -> float:
        return 0.0  # f_n is constant on n-cylinders

    @property
    def sup_f1(self) -> float:
        return max(float(np.log(np.abs(m).sum(axis=1).max()))
                   for m in self._mats.values())

    def _log_norm_product(self, word) -> float:
        if len(word) == 0:
            return 0.0
        try:
            prod = self._mats[word[0]].copy()
        except KeyError:
            raise ValidationError(
                f"symbol {word[0]!r} is outside the potential domain") from None
        logscale = 0.0
        for s in word[1:]:
            try:
                prod = prod @ self._mats[s]
            except KeyError:
                raise ValidationError(
                    f"symbol {s!r} is outside the potential domain") from None
            nrm = float(np.abs(prod).sum(axis=1).max())
            if nrm > 1e100 or nrm < 1e-100:
                logscale += math.log(nrm)
                prod = prod / nrm
        return logscale + math.log(float(np.abs(prod).sum(axis=1).max()))

    def sup(self, word, shift=None) -> float:
        return self._log_norm_product(word)

    inf = sup

    def at_periodic(self, word) -> float:
        return self._log_norm_product(word)

    def normalize(self) -> "MatrixCocycle":
        s = math.exp(-(self.sup_f1 + self.aa_const))
        return MatrixCocycle({k: m * s for k, m in self._mats.items()},
                             aa_const=self._declared_aa)

    def descriptor(self) -> str:
        parts = ",".join(f"{k!r}:{np.asarray(m).tolist()!r}"
                         for k, m in sorted(self._mats.items(), key=lambda kv: repr(kv[0])))
        return f"matrix_cocycle(aa={self._declared_aa!r},mats={{{parts}}})"


class AffinePotential(Potential):
    """mult * f_n + n * shift on top of a base family."""

    def __init__(self, base: Potential, mult: float, shift: float):
        self.base = base
        self.mult = float(mult)
        self.shift_per_n = float(shift)
        self.family = f"affine({base.family})"
        self.is_additive = base.is_additive
        self.depth = base.depth

    @property
    def aa_const(self) -> float:
        return abs(self.mult) * self.base.aa_const

    @property
    def bv_const(self) -> float:
        return abs(self.mult) * self.base.bv_const

    @property
    def sup_f1(self) -> float:
        if self.mult < 0:
            raise ValidationError("sup_f1 undefined for negatively scaled families")
        return self.mult * self.base.sup_f1 + self.shift_per_n

    def sup(self, word, shift=None) -> float:
        n = len(word)
        inner = self.base.sup(word, shift) if self.mult >= 0 else self.base.inf(word, shift)
        return self.mult * inner + n * self.shift_per_n

    def inf(self, word, shift=None) -> float:
        n = len(word)
        inner = self.base.inf(word, shift) if self.mult >= 0 else self.base.sup(word, shift)
        return self.mult * inner + n * self.shift_per_n

    def at_periodic(self, word) -> float:
        return self.mult * self.base.at_periodic(word) + len(word) * self.shift_per_n

    def scale(self, t: float) -> "AffinePotential":
        return AffinePotential(self.base, self.mult * t, self.shift_per_n * t)

    def normalize(self) -> "AffinePotential":
        return AffinePotential(self.base, self.mult,
                               self.shift_per_n - (self.sup_f1 + self.aa_const))

    def descriptor(self) -> str:
        return (f"affine(mult={self.mult!r},shift={self.shift_per_n!r},"
                f"base={self.base.descriptor()})")


def potential_from_config(cfg: Mapping) -> Potential:
    """Build a potential from its JSON description."""
    if not isinstance(cfg, Mapping):
        raise ValidationError("potential: expected an object")
    family = cfg.get("family")
    if family == "locally_constant":
        depth = cfg.get("depth", 1)
        table = cfg.get("table")
        if not isinstance(table, Mapping) or not table:
            raise ValidationError("potential.table: required mapping")
        parsed = {}
        for k, v in table.items():
            parts = str(k).split(",")
            key = tuple(_parse_symbol(p) for p in parts)
            parsed[key if len(key) > 1 else key[0]] = float(v)
        return LocallyConstant(parsed, depth=depth)
    if family == "decay":
        return DecayPotential(cfg.get("law", "log"), cfg.get("coef", 0.0),
                              cfg.get("offset", 0.0))
    if family == "matrix_cocycle":
        mats_cfg = cfg.get("matrices")
        if not isinstance(mats_cfg, Mapping) or not mats_cfg:
            raise ValidationError("potential.matrices: required mapping")
        mats = {}
        for k, rows in mats_cfg.items():
            mats[_parse_symbol(str(k))] = [[float(x) for x in row] for row in rows]
        return MatrixCocycle(mats, aa_const=cfg.get("aa_const"))
    raise ValidationError(f"potential.family: unknown family {family!r}")


def _parse_symbol(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return text


# -- empirical constants ---------------------------------------------------


@dataclass(frozen=True)
class ConstantsReport:
    """Empirical almost-additivity and variation constants from a word scan.

    The maxima are lower bounds for the true constants; the check of record
    is emp <= declared.
    """

    aa_emp: float
    bv_emp: float
    sup_f1: float
    variation_by_depth: tuple
    depths_scanned: int
    budget_hit: bool
    declared_aa: float
    declared_bv: float

    @property
    def within_declared(self) -> bool:
        return self.aa_emp <= self.declared_aa + 1e-12 and \
            self.bv_emp <= self.declared_bv + 1e-12


def _deterministic_extension(shift: ShiftModel, word: tuple, extra: int) -> tuple:
    out = tuple(word)
    for _ in range(extra):
        out = out + (shift.successors(out[-1])[0],)
    return out


def constants_report(shift: ShiftModel, pot: Potential, depth: int,
                     word_budget: int = 500_000) -> ConstantsReport:
    """Scan all admissible words up to ``depth`` and measure additivity
    defects |f_{n+m} - f_n - f_m o sigma^n| at one point per cylinder, plus
    the variation of f_n over n-cylinders."""
    if depth < 2:
        raise ValidationError("constants_report needs depth >= 2")
    additive_lc = isinstance(pot, (LocallyConstant, DecayPotential)) or (
        isinstance(pot, AffinePotential) and pot.is_additive)
    ext = (pot.depth - 1) if (additive_lc and pot.depth and pot.depth > 1) else 0

    aa_emp = 0.0
    bv_emp = 0.0
    variations = []
    budget_hit = False
    scanned = 0
    # value cache by length for non-additive families (suffix lookups)
    cache: dict[int, dict[tuple, float]] = {}
    for n in range(1, depth + 1):
        if count_admissible_words(shift, n) > word_budget:
            budget_hit = True
            break
        words = admissible_words(shift, n)
        scanned = n
        var_n = 0.0
        level_cache: dict[tuple, float] = {}
        for w in words:
            s = pot.sup(w, shift)
            v = pot.inf(w, shift)
            var_n = max(var_n, s - v)
            if not additive_lc:
                level_cache[w] = s
        cache[n] = level_cache
        variations.append(var_n)
        bv_emp = max(bv_emp, var_n)
        if n < 2:
            continue
        for w in words:
            if additive_lc:
                full = _deterministic_extension(shift, w, ext) if ext else w
                if isinstance(pot, AffinePotential):
                    base = pot.base
                    terms = [pot.mult * x + pot.shift_per_n
                             for x in _birkhoff_terms(base, full, n)]
                else:
                    terms = [x for x in _birkhoff_terms(pot, full, n)]
                for k in range(1, n):
                    # exact cancellation: the same window terms appear on
                    # both sides of the additivity identity
                    defect = math.fsum(terms[:n] + [-x for x in terms[:k]]
                                       + [-x for x in terms[k:n]])
                    aa_emp = max(aa_emp, abs(defect))
            else:
                total = cache[n][w]
                for k in range(1, n):
                    fa = cache[k][w[:k]]
                    fb = cache[n - k][w[k:]]
                    aa_emp = max(aa_emp, abs(total - fa - fb))
    return ConstantsReport(aa_emp, bv_emp, pot.sup_f1, tuple(variations),
                           scanned, budget_hit, pot.aa_const, pot.bv_const)


def _birkhoff_terms(pot, full: tuple, n: int) -> list[float]:
    if isinstance(pot, DecayPotential):
        return [pot.value(s) for s in full[:n]]
    r = pot.depth
    return [pot._window(tuple(full[k:k + r])) for k in range(n)]


# -- summability -----------------------------------------------------------


@dataclass(frozen=True)
class SummabilityReport:
    verdict: str            # "summable" | "not-summable" | "unknown"
    partial_sum: float      # sum_i exp(sup f_1|[i]) over the scanned range
    tail_bound: float       # analytic bound on the remainder (inf if divergent)
    t: float
    partial_sum_t: float    # t-weighted series sum_i (-t f_1|[i]) exp(t f_1|[i])
    tail_bound_t: float
    t_variant_summable: bool
    terms: int


def summability_report(pot: Potential, t: float = 1.0,
                       shift: ShiftModel | None = None,
                       terms: int = 10_000) -> SummabilityReport:
    """Partial sums and analytic tail bounds for the summability series."""
    if isinstance(pot, DecayPotential):
        n = terms
        partial = math.fsum(math.exp(pot.value(i)) for i in range(1, n + 1))
        tail = pot.tail_weight_bound(n, 1.0)
        partial_t = math.fsum((-t * pot.value(i)) * math.exp(t * pot.value(i))
                              for i in range(1, n + 1))
        tail_t = pot.weighted_log_tail(n, t, terms=0) if pot.summable(t) else math.inf
        verdict = "summable" if pot.summable(1.0) else "not-summable"
        return SummabilityReport(verdict, partial, tail, t, partial_t, tail_t,
                                 pot.summable(t), n)
    if shift is not None:
        vals = [pot.sup((s,), shift) for s in shift.symbols]
        partial = math.fsum(math.exp(v) for v in vals)
        partial_t = math.fsum((-t * v) * math.exp(t * v) for v in vals)
        return SummabilityReport("summable", partial, 0.0, t, partial_t, 0.0,
                                 True, len(vals))
    return SummabilityReport("unknown", math.nan, math.inf, t, math.nan,
                             math.inf, False, 0)
