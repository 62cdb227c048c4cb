"""Classical persuasion baselines and robust-versus-optimistic comparisons.

The optimistic benchmark recommends cooperation state-by-state subject only to
the pooled one-shot obedience constraint, crediting agents with full mutual
trust (everyone assumes everyone else complies). Its realized counterpart
strips that bootstrap by re-evaluating the same recommendations under
smallest-equilibrium play. Policies here are symmetric all-or-none: recommend
cooperation to everyone with a state-dependent probability, which is where the
one-shot analogue of the threshold rule is exact.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .designer import InfeasibleDesignError, design
from .env import (
    Environment,
    WelfareSpec,
    full_coop_value,
    marginal_gain,
    welfare_value,
)
from .equilibrium import (
    PUBLIC,
    EventOutcome,
    RealizedEvaluation,
    posterior_from_event,
    smallest_equilibrium,
)


@dataclass(frozen=True, eq=False)
class BaselinePolicy:
    """All-or-none recommendation policy with one fractional boundary state."""

    invite_probs: np.ndarray
    mixing_state: int | None
    mixing_label: str | None
    mixing_weight: float
    first_full_state: int | None
    first_full_label: str | None
    predicted_welfare: float
    degenerate: bool
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "invite_probs": self.invite_probs.tolist(),
            "mixing_state": self.mixing_state,
            "mixing_label": self.mixing_label,
            "mixing_weight": self.mixing_weight,
            "first_full_state": self.first_full_state,
            "first_full_label": self.first_full_label,
            "predicted_welfare": self.predicted_welfare,
            "degenerate": self.degenerate,
            "notes": list(self.notes),
        }


@dataclass(frozen=True, eq=False)
class ComparisonRecord:
    """One cost point: robust optimum against both baseline readings."""

    cost: float
    robust_welfare: float
    bce_predicted: float
    bce_realized: float
    theta_star: str | None
    p_star: float | None
    bce_threshold: str | None
    bce_first_full: str | None
    robust_degenerate: bool
    notes: tuple[str, ...] = ()

    def gap_predicted(self) -> float:
        return self.bce_predicted - self.robust_welfare

    def gap_realized(self) -> float:
        return self.robust_welfare - self.bce_realized


def design_bce_optimistic(env: Environment, welfare: WelfareSpec) -> BaselinePolicy:
    """Optimal all-or-none recommendation under the pooled one-shot constraint.

    Identical greedy structure to the robust designer, with the full-trust
    gain (benefit - cost + complementarity) in place of the potential: rank
    states by gain-to-welfare score, invite from the top, mix at the boundary
    so the pooled constraint binds exactly.
    """
    if welfare.n_agents != env.n_agents or welfare.n_states != env.n_states:
        raise ValueError("welfare spec does not match the environment's dimensions")
    n_states = env.n_states
    g_full = np.array(
        [marginal_gain(env, s, env.n_agents - 1) for s in range(n_states)]
    )
    v_full = np.array([full_coop_value(welfare, s) for s in range(n_states)])
    scores = np.where(
        v_full > 0,
        np.divide(g_full, v_full, out=np.zeros_like(g_full), where=v_full > 0),
        np.where(g_full > 0, math.inf, -math.inf),
    )
    order = sorted(range(n_states), key=lambda s: scores[s])
    eligible = [s for s in order if scores[s] > -math.inf]

    q = np.zeros(n_states)
    notes: tuple[str, ...] = ()
    if not np.any(g_full > 0.0):
        return BaselinePolicy(
            invite_probs=q,
            mixing_state=None,
            mixing_label=None,
            mixing_weight=0.0,
            first_full_state=None,
            first_full_label=None,
            predicted_welfare=0.0,
            degenerate=False,
            notes=("no state supports cooperation even with full trust",),
        )

    total = sum(env.prior[s] * g_full[s] for s in eligible)
    if total >= 0.0:
        for s in eligible:
            q[s] = 1.0
        mix_state, mix = eligible[0], 1.0
        degenerate = True
    else:
        cum = 0.0
        mix_state, mix, degenerate = eligible[-1], 0.0, False
        for s in reversed(eligible):
            step = env.prior[s] * g_full[s]
            if g_full[s] >= 0.0 or cum + step > 0.0:
                q[s] = 1.0
                cum += step
            else:
                mix = cum / (-step) if step != 0.0 else 1.0
                q[s] = mix
                mix_state = s
                break

    predicted = float(sum(env.prior[s] * q[s] * v_full[s] for s in range(n_states)))
    full = [s for s in range(n_states) if q[s] == 1.0]
    first_full = min(full, key=lambda s: scores[s]) if full else None
    return BaselinePolicy(
        invite_probs=q,
        mixing_state=int(mix_state),
        mixing_label=env.labels[mix_state],
        mixing_weight=float(mix),
        first_full_state=None if first_full is None else int(first_full),
        first_full_label=None if first_full is None else env.labels[first_full],
        predicted_welfare=predicted,
        degenerate=degenerate,
        notes=notes,
    )


def evaluate_bce_realized(
    policy: BaselinePolicy,
    env: Environment,
    welfare: WelfareSpec,
    tol: float = 1e-12,
) -> RealizedEvaluation:
    """Same recommendations under smallest-equilibrium play: two public
    events (recommend-all, recommend-none), each with its Bayes posterior."""
    q = policy.invite_probs
    total = 0.0
    events = []
    for label, probs in (("recommend-all", q), ("recommend-none", 1.0 - q)):
        mass = float((env.prior * probs).sum())
        # below tol the event is float dust from q near 0 or 1
        if mass <= tol:
            continue
        belief = posterior_from_event(env, probs)
        out = smallest_equilibrium(env, belief, tol=tol)
        contrib = float(
            sum(
                env.prior[s] * probs[s] * welfare_value(welfare, s, out.coop_count)
                for s in range(env.n_states)
            )
        )
        total += contrib
        events.append(
            EventOutcome(
                label=label,
                probs=tuple(float(p) for p in probs),
                posterior=tuple(float(p) for p in belief.probs),
                coop_count=out.coop_count,
                welfare_contribution=contrib,
            )
        )
    return RealizedEvaluation(
        welfare=total, mode=PUBLIC, obedient=None, events=tuple(events)
    )


def compare(env: Environment, welfare: WelfareSpec) -> ComparisonRecord:
    """Robust optimum, optimistic prediction, and its realized value."""
    notes: list[str] = []
    try:
        tp = design(env, welfare)
        robust = tp.expected_welfare
        theta_star: str | None = tp.threshold_label
        p_star: float | None = tp.mixing_weight
        degenerate = tp.degenerate
        notes.extend(tp.warnings)
    except InfeasibleDesignError:
        robust, theta_star, p_star, degenerate = 0.0, None, None, False
        notes.append("robust design infeasible; falling back to all-defect")

    bce = design_bce_optimistic(env, welfare)
    realized = evaluate_bce_realized(bce, env, welfare)
    notes.extend(bce.notes)
    return ComparisonRecord(
        cost=env.cost,
        robust_welfare=robust,
        bce_predicted=bce.predicted_welfare,
        bce_realized=realized.welfare,
        theta_star=theta_star,
        p_star=p_star,
        bce_threshold=bce.mixing_label,
        bce_first_full=bce.first_full_label,
        robust_degenerate=degenerate,
        notes=tuple(notes),
    )


def sweep(
    env: Environment,
    welfare: WelfareSpec,
    costs: Sequence[float],
    max_workers: int | None = None,
) -> list[ComparisonRecord]:
    """Compare across action costs, in parallel, results in cost order."""
    costs = [float(c) for c in costs]

    def one(c: float) -> ComparisonRecord:
        return compare(env.with_cost(c), welfare)

    if len(costs) <= 1:
        return [one(c) for c in costs]
    with ThreadPoolExecutor(max_workers=max_workers or min(8, len(costs))) as pool:
        return list(pool.map(one, costs))


def sweep_boundaries(records: Sequence[ComparisonRecord], tol: float = 1e-9) -> dict:
    """Regime boundaries read off a sweep, reported with the sweep's own
    resolution: last cost where the robust design still invites every state,
    last cost where all three welfare readings coincide, and the first costs
    where each curve hits zero."""
    recs = sorted(records, key=lambda r: r.cost)

    def last_cost(pred) -> float | None:
        out = None
        for r in recs:
            if pred(r):
                out = r.cost
            else:
                break
        return out

    def first_cost(pred) -> float | None:
        for r in recs:
            if pred(r):
                return r.cost
        return None

    return {
        "robust_all_invite_max_cost": last_cost(lambda r: r.robust_degenerate),
        "coincide_max_cost": last_cost(
            lambda r: abs(r.robust_welfare - r.bce_predicted) <= tol
            and abs(r.robust_welfare - r.bce_realized) <= tol
        ),
        "robust_zero_min_cost": first_cost(lambda r: r.robust_welfare <= tol),
        "optimistic_zero_min_cost": first_cost(lambda r: r.bce_predicted <= tol),
        "realized_zero_min_cost": first_cost(lambda r: r.bce_realized <= tol),
    }
