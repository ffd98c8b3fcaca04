"""Polynomial abductive explanations for decision lists whose rules are
pairwise inconsistent (each rule clashes with every earlier one).

For such models one explanation is a minimal correction subset of a Horn
system decided by unit propagation alone: variable u_i stands for "feature
i stays free"; hard clauses force the firing rule's features to be kept
and, per earlier rule with a different prediction, demand that at least one
feature carrying a point-inconsistent literal stays kept.  Soft unit
clauses prefer freeing every feature.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import AXP, DecisionList, Explanation, Instance, classify, is_self_determining


class NotRestricted(ValueError):
    """The model (or firing situation) is outside the polynomial class."""


class ContractViolation(ValueError):
    """A HornQuery violated its invariants (unsatisfiable hard clauses)."""


def check_restricted(dl: DecisionList, strict: bool = True) -> bool:
    """Eligibility for the polynomial path.

    Always requires every non-default rule to be self-consistent and
    inconsistent with all of its predecessors.  In strict mode the default
    must additionally predict a class no other rule predicts; the relaxed
    mode drops that requirement and is sound when the firing rule is not
    the default.
    """
    if not all(dl.consistent):
        return False
    if not all(is_self_determining(dl, i) for i in range(dl.num_rules)):
        return False
    if strict:
        used = {r.prediction for r in dl.rules}
        if dl.default.prediction in used:
            return False
    return True


@dataclass
class HornQuery:
    """Horn system over "feature stays free" variables u_1..u_m.

    Hard clauses hold only negated u literals, so unit propagation decides
    satisfiability.  Clauses are stored as tuples of feature indices whose
    u variables appear negated; soft clauses are the positive units u_i in
    feature order.  checks_used counts propagation-based satisfiability
    checks.
    """

    num_features: int
    hard: list[tuple[int, ...]]
    target_rule: int
    checks_used: int = 0

    def up_satisfiable(self, forced_true: frozenset[int]) -> bool:
        """Unit propagation check: with u_i true for i in forced_true and
        every other u free, all-negative clauses are satisfiable unless one
        is fully forced; no search happens."""
        self.checks_used += 1
        return not any(
            all(i in forced_true for i in clause) for clause in self.hard
        )


def _conflict_features(rule, point) -> tuple[int, ...]:
    """Features on which the rule carries a literal falsified by the point."""
    return tuple(sorted({
        l.feature for l in rule.antecedent if not l.holds(point)
    }))


def build_horn_query(dl: DecisionList, inst: Instance) -> HornQuery:
    """Constraints for one explanation of the instance's prediction."""
    c, k = classify(dl, inst.point)
    hard: list[tuple[int, ...]] = []
    if k != dl.default_index:
        # earlier rules with a different prediction must stay inconsistent
        for j in range(k):
            if dl.rules[j].prediction != c and dl.consistent[j]:
                hard.append(_conflict_features(dl.rules[j], inst.point))
        # the firing rule's own features must all be kept
        for feat in sorted(dl.rules[k].features):
            hard.append((feat,))
    else:
        # default fired: every rule must stay inconsistent
        for j in range(dl.num_rules):
            if dl.consistent[j]:
                hard.append(_conflict_features(dl.rules[j], inst.point))
    return HornQuery(dl.space.num_features, hard, k)


def horn_mcs(query: HornQuery) -> frozenset[int]:
    """A minimal correction subset of the soft units u_1..u_m.

    Linear search: the initial propagation check certifies the hard
    clauses; every soft unit is then offered once, largest feature first,
    and kept when jointly satisfiable, so corrections gravitate to the
    smallest feature indices.  Exactly num_features + 1 checks.
    """
    if not query.up_satisfiable(frozenset()):
        raise ContractViolation("hard clauses are unsatisfiable on their own")
    kept: set[int] = set()
    removed: set[int] = set()
    for i in reversed(range(query.num_features)):
        if query.up_satisfiable(frozenset(kept | {i})):
            kept.add(i)
        else:
            removed.add(i)
    return frozenset(removed)


def horn_axp(dl: DecisionList, inst: Instance) -> Explanation:
    """One abductive explanation through the Horn correction set."""
    expl, _ = horn_axp_detailed(dl, inst)
    return expl


def horn_axp_detailed(
    dl: DecisionList, inst: Instance
) -> tuple[Explanation, HornQuery]:
    """Like horn_axp but also returns the solved query, whose checks_used
    field certifies the unit-propagation budget."""
    _, k = classify(dl, inst.point)
    if not check_restricted(dl, strict=True):
        relaxed = check_restricted(dl, strict=False)
        if not (relaxed and k != dl.default_index):
            raise NotRestricted(
                "rules are not self-determining/consistent, or the default "
                "fired without the strict class separation"
            )
    query = build_horn_query(dl, inst)
    removed = horn_mcs(query)
    return Explanation(AXP, removed), query
