"""Weight functions on the index semigroup and numeric checks of their axioms.

A weight is submultiplicative, ``w(unit) = 1`` and ``w >= 1``.  It is
admissible when ``w(n*x) ** (1/n) -> 1``.  Additive-domain weights are
functions of the exponent ``lambda``; multiplicative-domain weights (for the
ordinary index set) are functions of ``n`` and are defined through
``lambda = log n``, so ``(1 + log n) ** alpha`` is the polynomial family.

Everything is evaluated in log space so that the doubling check in
:func:`check_admissible` never overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .semigroup import IndexSet, format_rational, parse_rational

SUBMULT_TOL = 1e-12
ADMISSIBLE_TOL = 1e-3
DEFAULT_DOUBLING_DEPTH = 256

KINDS = ("trivial", "polynomial", "subexponential", "exponential", "table")
DOMAINS = ("additive", "multiplicative")


@dataclass(frozen=True)
class Weight:
    kind: str
    domain: str = "additive"
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    table: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown weight domain {self.domain!r}")
        if self.kind == "polynomial" and not self.alpha >= 0:
            raise ValueError("polynomial weight needs alpha >= 0")
        if self.kind in ("subexponential", "exponential") and not self.beta > 0:
            raise ValueError(f"{self.kind} weight needs beta > 0")
        if self.kind == "subexponential" and not 0 < self.gamma < 1:
            raise ValueError("subexponential weight needs 0 < gamma < 1")
        if self.kind == "table":
            entries = tuple(sorted((self._key(k), float(v)) for k, v in dict(self.table).items()))
            if any(v < 1 for _, v in entries):
                raise ValueError("weights take values in [1, inf)")
            object.__setattr__(self, "table", entries)

    # -- constructors --------------------------------------------------------

    @classmethod
    def trivial(cls, domain="additive"):
        return cls("trivial", domain)

    @classmethod
    def polynomial(cls, alpha, domain="additive"):
        return cls("polynomial", domain, alpha=float(alpha))

    @classmethod
    def subexponential(cls, beta, gamma, domain="additive"):
        return cls("subexponential", domain, beta=float(beta), gamma=float(gamma))

    @classmethod
    def exponential(cls, beta, domain="additive"):
        return cls("exponential", domain, beta=float(beta))

    @classmethod
    def from_table(cls, mapping, domain="additive"):
        return cls("table", domain, table=tuple(dict(mapping).items()))

    # -- evaluation ------------------------------------------------------------

    def _key(self, idx):
        if self.domain == "multiplicative":
            if isinstance(idx, bool) or int(idx) != idx or idx < 1:
                raise ValueError(f"multiplicative weights take positive integers, got {idx!r}")
            return int(idx)
        q = idx if isinstance(idx, Fraction) else parse_rational(idx)
        if q < 0:
            raise ValueError("additive weights take lambda >= 0")
        return q

    def _log_at_exponent(self, x: float) -> float:
        """``log w`` at exponent ``x`` (``lambda``, or ``log n``)."""
        if self.kind == "trivial" or x == 0.0:
            return 0.0
        if self.kind == "polynomial":
            return self.alpha * math.log1p(x)
        if self.kind == "subexponential":
            return self.beta * math.exp(self.gamma * math.log(x))
        if self.kind == "exponential":
            return self.beta * x
        raise TypeError("table weights have no closed form")

    def log_evaluate(self, idx) -> float:
        key = self._key(idx)
        if self.kind == "table":
            lookup = dict(self.table)
            if key not in lookup:
                raise KeyError(f"weight table has no entry for {idx!r}")
            return math.log(lookup[key])
        x = math.log(key) if self.domain == "multiplicative" else float(key)
        return self._log_at_exponent(x)

    def evaluate(self, idx) -> float:
        return math.exp(self.log_evaluate(idx))

    def values(self, index_set: IndexSet) -> np.ndarray:
        """Weight at every element of ``index_set`` (in element order)."""
        self.require_compatible(index_set)
        return np.array([self.evaluate(e) for e in index_set.elements])

    def require_compatible(self, index_set: IndexSet):
        wanted = "multiplicative" if index_set.kind == "ordinary" else "additive"
        if self.domain != wanted:
            raise ValueError(
                f"{self.domain} weight cannot be used on a {index_set.kind} index set"
            )

    # -- serialisation ---------------------------------------------------------

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "domain": self.domain}
        if self.kind == "polynomial":
            doc["alpha"] = self.alpha
        elif self.kind == "subexponential":
            doc.update(beta=self.beta, gamma=self.gamma)
        elif self.kind == "exponential":
            doc["beta"] = self.beta
        elif self.kind == "table":
            doc["table"] = [
                [k if isinstance(k, int) else format_rational(k), v] for k, v in self.table
            ]
        return doc

    @classmethod
    def from_json(cls, doc: dict, default_domain: str = "additive") -> "Weight":
        allowed = {
            "trivial": set(),
            "polynomial": {"alpha"},
            "subexponential": {"beta", "gamma"},
            "exponential": {"beta"},
            "table": {"table"},
        }
        if not isinstance(doc, dict) or doc.get("kind") not in allowed:
            raise ValueError(f"bad weight document: {doc!r}")
        kind = doc["kind"]
        extra = set(doc) - {"kind", "domain"} - allowed[kind]
        if extra:
            raise ValueError(f"unknown weight fields: {sorted(extra)}")
        missing = allowed[kind] - set(doc)
        if missing:
            raise ValueError(f"missing weight fields: {sorted(missing)}")
        domain = doc.get("domain", default_domain)
        if kind == "table":
            return cls.from_table({k: v for k, v in doc["table"]}, domain)
        params = {k: float(doc[k]) for k in allowed[kind]}
        return cls(kind, domain, **params)


@dataclass
class PropertyReport:
    """Outcome of a numeric property check.

    ``worst`` is the worst submultiplicativity ratio, or the largest final
    root estimate for the admissibility check.
    """

    name: str
    passed: bool
    worst: float
    witness: object = None
    trajectories: dict = field(default_factory=dict)


def check_submultiplicative(
    weight: Weight, index_set: IndexSet, sample_count: int | None = None, seed: int = 0
) -> PropertyReport:
    """Worst ``w(a*b) / (w(a) w(b))`` over decomposition pairs of the window.

    Exhaustive when ``sample_count`` is None or covers every pair, otherwise a
    seeded random sample.  Passes iff the ratio stays <= 1 + 1e-12.
    """
    weight.require_compatible(index_set)
    logs = np.array([weight.log_evaluate(e) for e in index_set.elements])
    out, left, right = index_set.pair_table
    rows = np.arange(len(out))
    if sample_count is not None and sample_count < len(rows):
        rows = np.random.default_rng(seed).choice(rows, size=sample_count, replace=False)
    log_ratio = logs[out[rows]] - logs[left[rows]] - logs[right[rows]]
    k = int(np.argmax(log_ratio))
    worst = float(np.exp(log_ratio[k]))
    els = index_set.elements
    witness = (els[left[rows[k]]], els[right[rows[k]]])
    unit_ok = logs[index_set.unit_position] == 0.0
    return PropertyReport(
        "submultiplicative", bool(unit_ok and worst <= 1 + SUBMULT_TOL), worst, witness
    )


def check_admissible(
    weight: Weight,
    samples,
    doubling_depth: int = DEFAULT_DOUBLING_DEPTH,
    tol: float = ADMISSIBLE_TOL,
) -> PropertyReport:
    """Estimate ``lim w(n x) ** (1/n)`` along ``n = 2**k``, ``k <= doubling_depth``.

    A sample passes when its final estimate is <= 1 + tol and the estimates
    are non-increasing for k > 3.  ``trajectories`` maps each sample to its
    list of estimates.
    """
    if doubling_depth < 10:
        raise ValueError("doubling_depth must be >= 10")
    passed = True
    worst = 0.0
    witness = None
    trajectories = {}
    for sample in samples:
        key = weight._key(sample)
        logs = []
        for k in range(doubling_depth + 1):
            n = 2**k
            if weight.kind == "table":
                multiple = key**n if weight.domain == "multiplicative" else key * n
                logs.append(weight.log_evaluate(multiple) / n)
            else:
                x = math.log(key) if weight.domain == "multiplicative" else float(key)
                logs.append(weight._log_at_exponent(n * x) / n)
        est = [math.exp(v) for v in logs]
        trajectories[sample] = est
        monotone = all(est[k] <= est[k - 1] * (1 + 1e-12) for k in range(4, len(est)))
        ok = monotone and est[-1] <= 1 + tol
        if est[-1] > worst:
            worst, witness = est[-1], sample
        passed = passed and ok
    return PropertyReport("admissible", passed, worst, witness, trajectories)
