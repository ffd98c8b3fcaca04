"""Single-explanation engines: one AXp (an MUS of the query) or one CXp
(an MCS), plus the reduction procedure used on dual candidates during
enumeration.

All engines traverse soft literals in ascending feature order, so results
are deterministic for a given model and instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import AXP, CXP, Explanation
from .encoding import Encoding
from .oracle import OracleSession


class NoCxpExists(Exception):
    """The hard clauses alone are unsatisfiable: the prediction can never
    change, so no contrastive explanation exists."""


class ContractError(ValueError):
    """A candidate handed to reduce_dual violates its precondition."""


KEPT = "kept"
DROPPED = "dropped"
UNDECIDED = "undecided"


@dataclass
class SoftState:
    """Working state of the deletion-based searches: one status per soft
    literal, in feature order."""

    literals: list[int]
    status: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.status:
            self.status = [UNDECIDED] * len(self.literals)

    def active(self, exclude: int | None = None) -> list[int]:
        return [
            lit
            for j, lit in enumerate(self.literals)
            if self.status[j] != DROPPED and j != exclude
        ]

    def features(self, status: str) -> frozenset[int]:
        return frozenset(j for j, s in enumerate(self.status) if s == status)


def load_encoding(
    enc: Encoding,
    session: OracleSession | None = None,
    selector: int | None = None,
) -> OracleSession:
    """Load the hard clauses into a session (fresh one by default).

    With a selector, clauses join the session guarded and can be switched
    off later, letting several instances share one session.  Selectors must
    live above the encoding's variable range.
    """
    if session is None:
        session = OracleSession(enc.varmap.var_count)
    else:
        session.ensure_vars(enc.varmap.var_count)
    if selector is not None and selector <= enc.varmap.var_count:
        raise ValueError(
            "selector variable collides with the encoding; allocate it "
            "after sizing the session (see attach_instance)"
        )
    for cl in enc.hard:
        session.add_clause(cl, selector=selector)
    return session


def attach_instance(session: OracleSession, enc: Encoding) -> int:
    """Add an instance's hard clauses to a shared session behind a fresh
    selector (returned enabled); disable it to shelve the instance."""
    session.ensure_vars(enc.varmap.var_count)
    selector = session.new_selector(enabled=True)
    load_encoding(enc, session=session, selector=selector)
    return selector


def one_axp(
    enc: Encoding,
    session: OracleSession,
    deadline: float | None = None,
    use_cores: bool = True,
) -> Explanation:
    """Deletion-based linear search for one abductive explanation.

    Tentatively drops each soft literal in ascending feature order and
    keeps it exactly when the query turns satisfiable; unsatisfiable
    answers may shrink the working set further via the returned core.
    """
    state = SoftState(list(enc.soft))
    lit_to_idx = {lit: j for j, lit in enumerate(state.literals)}
    for j in range(len(state.literals)):
        if state.status[j] == DROPPED:
            continue
        res = session.solve(state.active(exclude=j), deadline=deadline)
        if res.sat:
            state.status[j] = KEPT
        else:
            state.status[j] = DROPPED
            if use_cores and res.core is not None:
                keep = {lit_to_idx[l] for l in res.core}
                for i in range(len(state.literals)):
                    if state.status[i] == UNDECIDED and i not in keep:
                        state.status[i] = DROPPED
    return Explanation(AXP, state.features(KEPT))


def one_axp_quickxplain(
    enc: Encoding,
    session: OracleSession,
    deadline: float | None = None,
) -> Explanation:
    """QuickXplain-style divide-and-conquer minimization; returns some
    subset-minimal AXp, not necessarily the linear search's one."""
    softs = list(enc.soft)

    def solve(lits) -> bool:
        return session.solve(lits, deadline=deadline).sat

    def qx(base: list[int], target: list[int], base_changed: bool) -> list[int]:
        if base_changed and not solve(base):
            return []
        if len(target) == 1:
            return target
        half = len(target) // 2
        left, right = target[:half], target[half:]
        m2 = qx(base + left, right, bool(left))
        m1 = qx(base + m2, left, bool(m2))
        return m1 + m2

    if solve(softs):
        raise ContractError("explanation query is satisfiable with all softs")
    core = [] if not solve([]) else qx([], softs, False)
    feats = frozenset(softs.index(l) for l in core)
    return Explanation(AXP, feats)


def one_cxp(
    enc: Encoding,
    session: OracleSession,
    deadline: float | None = None,
) -> Explanation:
    """One contrastive explanation via satisfiable-subset growing with the
    clause-D step: each round adds the disjunction of the still-falsified
    soft literals (under a throwaway selector) and asks for a model
    satisfying one more of them.
    """
    res = session.solve((), deadline=deadline)
    if not res.sat:
        raise NoCxpExists("hard clauses are unsatisfiable; prediction is fixed")
    softs = list(enc.soft)
    satisfied = [l for l in softs if res.lit_true(l)]
    falsified = [l for l in softs if not res.lit_true(l)]
    cld = session.new_selector(enabled=True)
    try:
        while falsified:
            session.add_clause(list(falsified), selector=cld)
            res = session.solve(satisfied, deadline=deadline)
            if not res.sat:
                break
            satisfied = [l for l in softs if res.lit_true(l)]
            falsified = [l for l in softs if not res.lit_true(l)]
    finally:
        session.retire_selector(cld)
    feats = frozenset(softs.index(l) for l in falsified)
    return Explanation(CXP, feats)


def reduce_dual(
    enc: Encoding,
    session: OracleSession,
    kind: str,
    candidate,
    deadline: float | None = None,
) -> Explanation:
    """Shrink a sufficiency-preserving candidate to a subset-minimal
    explanation by deletion, ascending feature order."""
    softs = list(enc.soft)
    cand = sorted(candidate)

    if kind == AXP:
        def holds(feats) -> bool:
            return not session.solve(
                [softs[j] for j in feats], deadline=deadline
            ).sat
    elif kind == CXP:
        all_feats = set(range(len(softs)))

        def holds(feats) -> bool:
            kept = sorted(all_feats - set(feats))
            return session.solve(
                [softs[j] for j in kept], deadline=deadline
            ).sat
    else:
        raise ValueError(f"unknown explanation kind {kind!r}")

    current = list(cand)
    if not holds(current):
        raise ContractError(f"candidate {sorted(candidate)} is not a valid {kind} seed")
    for j in cand:
        trial = [x for x in current if x != j]
        if holds(trial):
            current = trial
    return Explanation(kind, frozenset(current))
