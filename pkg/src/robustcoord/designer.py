"""Optimal robust design via the potential-to-welfare threshold rule.

The designer invites everyone or no one in each state (perfect coordination);
the only question is which states get invited and with what probability. States
are ranked by score = potential(N) / V(N), and invitation mass is granted
greedily from the top until the prior-weighted potential budget is exhausted,
with one fractional state at the boundary. This is the exact optimum of the
sequential-obedience LP whenever the potential and welfare convexity
assumptions hold, at a cost of one sort plus two linear passes over the states,
independent of the number of agents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import (
    Environment,
    WelfareSpec,
    check_assumptions,
    full_coop_value,
    potential,
)
from .seqpolicy import SequentialPolicy


class InfeasibleDesignError(RuntimeError):
    """No state admits a positive full-cooperation potential: nothing beyond
    the all-defect outcome is robustly implementable."""


class StrictModeError(ValueError):
    """Raised in strict mode when the environment fails a modeling assumption
    the construction otherwise only warns about."""


@dataclass
class OpCounter:
    """Counts designer work items (score evaluations, sort keys, scan steps)
    so tests can pin the N-independence of the construction."""

    ops: int = 0

    def tick(self, k: int = 1) -> None:
        self.ops += k


@dataclass(frozen=True, eq=False)
class ThresholdPolicy:
    """Designer output: ranked scores plus the boundary state and its mass."""

    scores: np.ndarray
    order: tuple[int, ...]  # state indices, nondecreasing score, stable on ties
    threshold_state: int
    threshold_label: str
    mixing_weight: float  # invitation probability at the threshold state
    expected_welfare: float
    degenerate: bool  # True when every state is invited outright
    warnings: tuple[str, ...] = ()

    def invite_probabilities(self) -> np.ndarray:
        """Per-state invitation probability implied by the threshold."""
        q = np.zeros(len(self.scores))
        rank = {s: r for r, s in enumerate(self.order)}
        t = rank[self.threshold_state]
        for s, r in rank.items():
            if self.scores[s] == -math.inf:
                continue
            if r > t:
                q[s] = 1.0
            elif r == t:
                q[s] = self.mixing_weight
        return q

    def to_dict(self, labels: tuple[str, ...] | None = None) -> dict:
        # JSON has no infinities; encode the sentinel scores as strings
        return {
            "scores": [
                ("inf" if x > 0 else "-inf") if math.isinf(x) else x
                for x in self.scores.tolist()
            ],
            "order": list(self.order),
            "threshold_state": self.threshold_state,
            "threshold_label": self.threshold_label,
            "mixing_weight": self.mixing_weight,
            "expected_welfare": self.expected_welfare,
            "degenerate": self.degenerate,
            "warnings": list(self.warnings),
            "invite_probabilities": self.invite_probabilities().tolist(),
            "states": list(labels) if labels is not None else None,
        }


def score(env: Environment, welfare: WelfareSpec, state: int) -> float:
    """Potential-to-welfare score of one state; +/-inf when the stake is 0."""
    f = potential(env, state, env.n_agents)
    v = full_coop_value(welfare, state)
    if v > 0.0:
        return f / v
    return math.inf if f > 0.0 else -math.inf


def design(
    env: Environment,
    welfare: WelfareSpec,
    *,
    strict: bool = False,
    counter: OpCounter | None = None,
) -> ThresholdPolicy:
    """Compute the optimal robust invitation policy.

    Scores every state, sorts them (stable, so ties keep input order), then
    scans from the highest score accumulating the prior-weighted potential.
    States with a nonnegative potential are always invited; the first state
    whose inclusion would push the running sum below zero becomes the threshold
    state and receives the fractional mass that balances the sum to exactly
    zero. If the total is nonnegative the policy degenerates to inviting every
    state outright.
    """
    if welfare.n_agents != env.n_agents or welfare.n_states != env.n_states:
        raise ValueError("welfare spec does not match the environment's dimensions")
    report = check_assumptions(env, welfare)
    warnings = report.findings()

    n_states = env.n_states
    counter = counter if counter is not None else OpCounter()
    f_vals = np.empty(n_states)
    scores = np.empty(n_states)
    for s in range(n_states):
        f_vals[s] = potential(env, s, env.n_agents)
        v = full_coop_value(welfare, s)
        if v > 0.0:
            scores[s] = f_vals[s] / v
        elif strict:
            raise StrictModeError(
                f"state {s} has zero full-cooperation welfare (strict mode)"
            )
        else:
            scores[s] = math.inf if f_vals[s] > 0.0 else -math.inf
        counter.tick()

    if strict and not report.passed:
        raise StrictModeError("; ".join(warnings))

    if not np.any(f_vals > 0.0):
        raise InfeasibleDesignError(
            "no state has a positive full-cooperation potential"
        )

    order = tuple(sorted(range(n_states), key=lambda s: scores[s]))
    for _ in order:
        counter.tick()

    # -inf states are never invited and never enter the budget
    eligible = [s for s in order if scores[s] > -math.inf]
    total = sum(env.prior[s] * f_vals[s] for s in eligible)
    if total >= 0.0:
        t_state = eligible[0]
        mix = 1.0
        degenerate = True
    else:
        cum = 0.0
        t_state, mix, degenerate = eligible[-1], 0.0, False
        for s in reversed(eligible):
            counter.tick()
            step = env.prior[s] * f_vals[s]
            if f_vals[s] >= 0.0 or cum + step > 0.0:
                cum += step
            else:
                # total < 0 guarantees this branch fires at some f < 0 state
                t_state = s
                mix = cum / (-step) if step != 0.0 else 1.0
                break

    rank = {s: r for r, s in enumerate(order)}
    wel = 0.0
    for s in eligible:
        counter.tick()
        if rank[s] > rank[t_state]:
            wel += env.prior[s] * full_coop_value(welfare, s)
        elif s == t_state:
            wel += mix * env.prior[s] * full_coop_value(welfare, s)

    return ThresholdPolicy(
        scores=scores,
        order=order,
        threshold_state=int(t_state),
        threshold_label=env.labels[t_state],
        mixing_weight=float(mix),
        expected_welfare=float(wel),
        degenerate=degenerate,
        warnings=warnings,
    )


def to_sequential_policy(tp: ThresholdPolicy, env: Environment) -> SequentialPolicy:
    """Materialize the threshold policy: invited mass rides the uniform mixture
    over full orderings, the rest sits on the empty sequence."""
    q = tp.invite_probabilities()
    entries: dict[tuple[int, tuple[int, ...]], float] = {}
    uniform_full: dict[int, float] = {}
    for s in range(env.n_states):
        if q[s] > 0.0:
            uniform_full[s] = float(q[s])
        if q[s] < 1.0:
            entries[(s, ())] = float(1.0 - q[s])
    return SequentialPolicy(env.n_agents, env.n_states, entries, uniform_full)
