"""Complete explanation enumeration.

Two interconnected oracles drive the main enumerator: a SAT oracle over the
explanation query and a minimum hitting-set oracle over the explanations of
the dual kind found so far.  Each round either confirms the hitting set as
a new target explanation (already minimal thanks to the hitting-set
minimality guarantee) or extracts a fresh dual explanation from the
counterexample.  A plain blocking-clause loop over the single-CXp engine is
provided as well.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .core import AXP, CXP
from .encoding import Encoding
from .explain import ContractError, NoCxpExists, one_cxp, reduce_dual
from .oracle import OracleSession, OracleTimeout


class Exhausted(Exception):
    """Internal marker: the hitting-set oracle has no unblocked solution."""


def _totalizer(session: OracleSession, lits: list[int]) -> list[int]:
    """Output variables o[0..n-1] with o[i] forced true whenever at least
    i+1 of the input literals are true (counting direction only)."""
    if not lits:
        return []
    if len(lits) == 1:
        return [lits[0]]
    half = len(lits) // 2
    left = _totalizer(session, lits[:half])
    right = _totalizer(session, lits[half:])
    out = [session.new_var() for _ in range(len(left) + len(right))]
    for a in range(len(left) + 1):
        for b in range(len(right) + 1):
            if a + b == 0:
                continue
            clause = [out[a + b - 1]]
            if a:
                clause.append(-left[a - 1])
            if b:
                clause.append(-right[b - 1])
            session.add_clause(clause)
    return out


class HittingSetOracle:
    """Minimum-cardinality hitting sets over a growing set family.

    Implemented as iterative SAT on a private session: one variable per
    universe element, sets-to-hit as positive clauses, blocked solutions as
    negative clauses, and a totalizer whose outputs tighten the cardinality
    bound through assumptions.  Ties between minimum-size solutions break
    lexicographically on sorted element lists.
    """

    def __init__(self, universe):
        self.universe = sorted(universe)
        self.session = OracleSession()
        self.elem_var = {e: self.session.new_var() for e in self.universe}
        self.outputs = _totalizer(
            self.session, [self.elem_var[e] for e in self.universe]
        )
        self.sets_to_hit: list[frozenset] = []
        self.blocked: list[frozenset] = []
        self._lower_bound = 0

    def add_set(self, s) -> None:
        """Register a new set that every future answer must intersect."""
        s = frozenset(s)
        if not s:
            raise ContractError("an empty set-to-hit is unhittable")
        if not s <= set(self.universe):
            raise ContractError(f"set {sorted(s)} leaves the universe")
        self.sets_to_hit.append(s)
        self.session.add_clause([self.elem_var[e] for e in sorted(s)])

    def block(self, s) -> None:
        """Never again emit `s` or any superset of it."""
        s = frozenset(s)
        self.blocked.append(s)
        self.session.add_clause([-self.elem_var[e] for e in sorted(s)])

    def _bound(self, k: int) -> list[int]:
        # assumptions enforcing |solution| <= k
        if k >= len(self.outputs):
            return []
        return [-self.outputs[k]]

    def next(self, deadline: float | None = None) -> frozenset | None:
        """A minimum-cardinality unblocked hitting set, or None."""
        res = self.session.solve(self._bound(len(self.universe)), deadline=deadline)
        if not res.sat:
            return None
        size = sum(res.lit_true(self.elem_var[e]) for e in self.universe)
        while size > self._lower_bound:
            res = self.session.solve(self._bound(size - 1), deadline=deadline)
            if not res.sat:
                break
            size = sum(res.lit_true(self.elem_var[e]) for e in self.universe)
        self._lower_bound = size

        # lexicographically smallest solution of the minimum size
        bound = self._bound(size)
        fixed: list[int] = []
        banned: list[int] = []
        for e in self.universe:
            if len(fixed) == size:
                break
            assumps = (
                bound
                + [self.elem_var[f] for f in fixed]
                + [-self.elem_var[b] for b in banned]
                + [self.elem_var[e]]
            )
            if self.session.solve(assumps, deadline=deadline).sat:
                fixed.append(e)
            else:
                banned.append(e)
        return frozenset(fixed)


def _sort_key(s: frozenset):
    return tuple(sorted(s))


@dataclass
class ExplanationReport:
    """Everything enumerated for one instance, plus bookkeeping."""

    instance: tuple[int, ...]
    pred_class: int
    mode: str
    axps: list[frozenset] = field(default_factory=list)
    cxps: list[frozenset] = field(default_factory=list)
    complete: bool = True
    wall_time: float = 0.0
    oracle_calls: int = 0

    def finalize(self) -> "ExplanationReport":
        self.axps = sorted({frozenset(x) for x in self.axps}, key=_sort_key)
        self.cxps = sorted({frozenset(y) for y in self.cxps}, key=_sort_key)
        return self

    @property
    def counts(self) -> dict[str, int]:
        return {"axps": len(self.axps), "cxps": len(self.cxps)}

    @property
    def average_sizes(self) -> dict[str, float | None]:
        def avg(groups):
            return sum(map(len, groups)) / len(groups) if groups else None

        return {"axps": avg(self.axps), "cxps": avg(self.cxps)}


def _unit_mcs_bootstrap(enc, session, deadline):
    """Exhaustively test every single soft literal's removal; the found
    unit correction sets seed the hitting-set oracle."""
    softs = list(enc.soft)
    units = []
    for j in range(len(softs)):
        rest = softs[:j] + softs[j + 1:]
        if session.solve(rest, deadline=deadline).sat:
            units.append(frozenset([j]))
    return units


def enumerate_marco(
    enc: Encoding,
    session: OracleSession,
    target: str,
    deadline: float | None = None,
) -> ExplanationReport:
    """Enumerate all AXps and all CXps, driving the hitting-set oracle
    towards `target` explanations; the dual kind falls out as a by-product
    and is reduced before being recorded.
    """
    if target not in (AXP, CXP):
        raise ValueError(f"unknown target kind {target!r}")
    start = time.monotonic()
    calls0 = session.stats.calls
    report = ExplanationReport(enc.instance.point, enc.pred_class,
                               f"marco-{target}")
    softs = list(enc.soft)
    m = len(softs)
    mhs = HittingSetOracle(range(m))
    axps: list[frozenset] = []
    cxps: list[frozenset] = []

    try:
        for unit in _unit_mcs_bootstrap(enc, session, deadline):
            cxps.append(unit)
            if target == AXP:
                mhs.add_set(unit)
            else:
                mhs.block(unit)

        while True:
            h = mhs.next(deadline=deadline)
            if h is None:
                break
            if target == AXP:
                res = session.solve([softs[j] for j in sorted(h)],
                                    deadline=deadline)
                if not res.sat:
                    axps.append(h)  # minimal by hitting-set minimality
                    mhs.block(h)
                else:
                    falsified = frozenset(
                        j for j in range(m) if not res.lit_true(softs[j])
                    )
                    cxp = reduce_dual(enc, session, CXP, falsified,
                                      deadline=deadline)
                    cxps.append(cxp.features)
                    mhs.add_set(cxp.features)
            else:
                kept = [softs[j] for j in range(m) if j not in h]
                res = session.solve(kept, deadline=deadline)
                if res.sat:
                    cxps.append(h)
                    mhs.block(h)
                else:
                    core_feats = frozenset(softs.index(l) for l in res.core)
                    axp = reduce_dual(enc, session, AXP, core_feats,
                                      deadline=deadline)
                    axps.append(axp.features)
                    if not axp.features:
                        # hard clauses alone are unsatisfiable: the empty
                        # AXp is the only explanation of either kind
                        break
                    mhs.add_set(axp.features)
    except OracleTimeout:
        report.complete = False

    report.axps = axps
    report.cxps = cxps
    report.wall_time = time.monotonic() - start
    report.oracle_calls = (
        session.stats.calls - calls0 + mhs.session.stats.calls
    )
    return report.finalize()


def enumerate_cxp_lbx(
    enc: Encoding,
    session: OracleSession,
    deadline: float | None = None,
) -> ExplanationReport:
    """All CXps by repeated single-CXp extraction; each one is blocked with
    one clause under this instance's selector, which is switched off at the
    end so the session can serve other instances."""
    start = time.monotonic()
    calls0 = session.stats.calls
    report = ExplanationReport(enc.instance.point, enc.pred_class, "lbx")
    softs = list(enc.soft)
    selector = session.new_selector(enabled=True)
    cxps: list[frozenset] = []
    try:
        while True:
            try:
                cxp = one_cxp(enc, session, deadline=deadline)
            except NoCxpExists:
                break
            cxps.append(cxp.features)
            session.add_clause(
                [softs[j] for j in sorted(cxp.features)], selector=selector
            )
    except OracleTimeout:
        report.complete = False
    finally:
        session.set_selector(selector, False)

    report.cxps = cxps
    report.wall_time = time.monotonic() - start
    report.oracle_calls = session.stats.calls - calls0
    return report.finalize()
