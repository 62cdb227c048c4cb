"""Game environment: states, payoffs, potential, welfare, and assumption checks.

The game is binary-action and supermodular: each agent either cooperates (1) or
stays out (0), cooperation costs ``cost``, and pays a state-dependent benefit
plus a complementarity term that scales with the fraction of other cooperators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# welfare kinds
POWER = "power"
TABULATED = "tabulated"

# default tolerance for payoff comparisons
DEFAULT_TOL = 1e-9

# kappa(agent, others_profile, state) -> float; never sees the agent's own action
HeterogeneityFn = Callable[[int, tuple[int, ...], int], float]


@dataclass(frozen=True, eq=False)
class Environment:
    """Primitives of the coordination game.

    States are indexed 0..n_states-1 in input order; outputs elsewhere refer to
    states by index plus label. ``heterogeneity`` is an optional additive
    utility term that cannot depend on the agent's own action (it only receives
    the others' profile); it is deliberately ignored by ``marginal_gain`` and
    ``potential``, which it cannot affect.
    """

    n_agents: int
    labels: tuple[str, ...]
    prior: np.ndarray
    benefit: np.ndarray
    complementarity: np.ndarray
    cost: float
    heterogeneity: HeterogeneityFn | None = None

    def __init__(
        self,
        n_agents: int,
        labels: Sequence[str],
        prior: Sequence[float],
        benefit: Sequence[float],
        complementarity: Sequence[float],
        cost: float,
        heterogeneity: HeterogeneityFn | None = None,
    ):
        object.__setattr__(self, "n_agents", int(n_agents))
        object.__setattr__(self, "labels", tuple(str(x) for x in labels))
        object.__setattr__(self, "prior", np.asarray(prior, dtype=np.float64))
        object.__setattr__(self, "benefit", np.asarray(benefit, dtype=np.float64))
        object.__setattr__(
            self, "complementarity", np.asarray(complementarity, dtype=np.float64)
        )
        object.__setattr__(self, "cost", float(cost))
        object.__setattr__(self, "heterogeneity", heterogeneity)
        self._validate()

    def _validate(self) -> None:
        if self.n_agents < 2:
            raise ValueError(f"n_agents must be >= 2, got {self.n_agents}")
        k = len(self.labels)
        if k < 1:
            raise ValueError("need at least one state")
        for name in ("prior", "benefit", "complementarity"):
            arr = getattr(self, name)
            if arr.shape != (k,):
                raise ValueError(
                    f"{name} has shape {arr.shape}, expected ({k},) to match labels"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        if np.any(self.prior < 0):
            s = int(np.argmax(self.prior < 0))
            raise ValueError(f"prior must be nonnegative, state {s} is {self.prior[s]}")
        if abs(float(self.prior.sum()) - 1.0) > 1e-12:
            raise ValueError(f"prior must sum to 1, got {self.prior.sum()!r}")
        if np.any(self.complementarity < 0):
            s = int(np.argmax(self.complementarity < 0))
            raise ValueError(
                f"complementarity must be nonnegative, state {s} is "
                f"{self.complementarity[s]}"
            )
        if not math.isfinite(self.cost):
            raise ValueError("cost must be finite")

    @property
    def n_states(self) -> int:
        return len(self.labels)

    def with_cost(self, cost: float) -> "Environment":
        """Same environment at a different action cost (used by cost sweeps)."""
        return Environment(
            self.n_agents,
            self.labels,
            self.prior,
            self.benefit,
            self.complementarity,
            cost,
            self.heterogeneity,
        )


@dataclass(frozen=True, eq=False)
class WelfareSpec:
    """Designer's objective: value of n cooperators in state s.

    POWER: V(n, s) = alpha[s] * (n / N) ** beta with alpha > 0, beta >= 1.
    TABULATED: explicit table of shape (n_states, N + 1), V(0, s) = 0 and
    weakly increasing in n. Convexity (V(n, s) <= (n/N) V(N, s)) is an
    assumption to be *checked*, not enforced at construction.
    """

    kind: str
    n_agents: int
    alpha: np.ndarray | None = None
    beta: float = 1.0
    table: np.ndarray | None = None

    @classmethod
    def power(cls, n_agents: int, alpha: Sequence[float], beta: float) -> "WelfareSpec":
        alpha = np.asarray(alpha, dtype=np.float64)
        if np.any(~np.isfinite(alpha)) or np.any(alpha <= 0):
            raise ValueError("power welfare requires finite alpha > 0 for every state")
        if not (math.isfinite(beta) and beta >= 1.0):
            raise ValueError(f"power welfare requires beta >= 1, got {beta}")
        spec = object.__new__(cls)
        object.__setattr__(spec, "kind", POWER)
        object.__setattr__(spec, "n_agents", int(n_agents))
        object.__setattr__(spec, "alpha", alpha)
        object.__setattr__(spec, "beta", float(beta))
        object.__setattr__(spec, "table", None)
        return spec

    @classmethod
    def tabulated(cls, table: Sequence[Sequence[float]]) -> "WelfareSpec":
        table = np.asarray(table, dtype=np.float64)
        if table.ndim != 2 or table.shape[1] < 3:
            raise ValueError("welfare table must be (n_states, n_agents + 1)")
        if not np.all(np.isfinite(table)):
            raise ValueError("welfare table contains non-finite entries")
        if np.any(table[:, 0] != 0.0):
            s = int(np.argmax(table[:, 0] != 0.0))
            raise ValueError(f"welfare at zero cooperators must be 0, state {s} is not")
        if np.any(np.diff(table, axis=1) < 0):
            s, n = np.argwhere(np.diff(table, axis=1) < 0)[0]
            raise ValueError(
                f"welfare must be weakly increasing in cooperators, "
                f"state {s} decreases at n={n + 1}"
            )
        spec = object.__new__(cls)
        object.__setattr__(spec, "kind", TABULATED)
        object.__setattr__(spec, "n_agents", int(table.shape[1]) - 1)
        object.__setattr__(spec, "alpha", None)
        object.__setattr__(spec, "beta", 1.0)
        object.__setattr__(spec, "table", table)
        return spec

    @property
    def n_states(self) -> int:
        if self.kind == POWER:
            return len(self.alpha)
        return self.table.shape[0]


@dataclass(frozen=True)
class AssumptionReport:
    """Result of check_assumptions; witnesses are (state, count) or state index."""

    dominance: bool
    dominance_witness: int | None
    convex_welfare: bool
    convex_welfare_witness: tuple[int, int] | None
    convex_potential: bool
    convex_potential_witness: tuple[int, int] | None

    @property
    def passed(self) -> bool:
        return self.dominance and self.convex_welfare and self.convex_potential

    def findings(self) -> tuple[str, ...]:
        out = []
        if not self.dominance:
            out.append("no state has benefit - cost > 0 (dominance fails)")
        if not self.convex_welfare:
            s, n = self.convex_welfare_witness
            out.append(f"welfare exceeds the linear hull at state {s}, n={n}")
        if not self.convex_potential:
            s, n = self.convex_potential_witness
            out.append(f"potential is not convex at state {s}, n={n}")
        return tuple(out)


def utility(env: Environment, agent: int, profile: Sequence[int], state: int) -> float:
    """Realized payoff of ``agent`` under a full binary action profile."""
    n = env.n_agents
    if len(profile) != n:
        raise ValueError(f"profile has length {len(profile)}, expected {n}")
    if any(a not in (0, 1) for a in profile):
        raise ValueError("profile must be binary")
    if not 0 <= agent < n:
        raise ValueError(f"agent {agent} out of range")
    if not 0 <= state < env.n_states:
        raise ValueError(f"state {state} out of range")
    others = tuple(profile[:agent]) + tuple(profile[agent + 1 :])
    n_others = sum(others)
    a_i = profile[agent]
    u = a_i * (
        env.benefit[state] + env.complementarity[state] * n_others / (n - 1)
    ) - env.cost * a_i
    if env.heterogeneity is not None:
        u += env.heterogeneity(agent, others, state)
    return float(u)


def marginal_gain(env: Environment, state: int, count: int) -> float:
    """Gain from cooperating when ``count`` other agents cooperate."""
    if not 0 <= count <= env.n_agents - 1:
        raise ValueError(f"count must be in 0..{env.n_agents - 1}, got {count}")
    return float(
        env.benefit[state]
        - env.cost
        + env.complementarity[state] * count / (env.n_agents - 1)
    )


def potential(env: Environment, state: int, n: int) -> float:
    """Exact potential at n cooperators; successive differences are the
    marginal gains, so the closed form below telescopes them."""
    if not 0 <= n <= env.n_agents:
        raise ValueError(f"n must be in 0..{env.n_agents}, got {n}")
    b = env.benefit[state] - env.cost
    lam = env.complementarity[state]
    return float(b * n + lam * n * (n - 1) / (2 * (env.n_agents - 1)))


def welfare_value(welfare: WelfareSpec, state: int, n: int) -> float:
    """Designer value of ``n`` cooperators in ``state``."""
    if not 0 <= n <= welfare.n_agents:
        raise ValueError(f"n must be in 0..{welfare.n_agents}, got {n}")
    if not 0 <= state < welfare.n_states:
        raise ValueError(f"state {state} out of range")
    if welfare.kind == POWER:
        return float(welfare.alpha[state] * (n / welfare.n_agents) ** welfare.beta)
    return float(welfare.table[state, n])


def full_coop_value(welfare: WelfareSpec, state: int) -> float:
    """V at full cooperation, the per-state stake in the designer's score."""
    return welfare_value(welfare, state, welfare.n_agents)


def check_assumptions(env: Environment, welfare: WelfareSpec) -> AssumptionReport:
    """Check dominance, welfare convexity, and potential convexity.

    Potential convexity reduces to complementarity >= 0 because the second
    difference of the potential is the constant lambda / (N - 1); welfare
    convexity for POWER reduces to beta >= 1. Both shortcuts keep this O(1)
    per state so the designer's operation count stays independent of N.
    """
    if welfare.n_agents != env.n_agents or welfare.n_states != env.n_states:
        raise ValueError("welfare spec does not match the environment's dimensions")
    dom_witness = None
    for s in range(env.n_states):
        if env.benefit[s] - env.cost > 0:
            dom_witness = s
            break

    cw_ok, cw_witness = True, None
    if welfare.kind == TABULATED:
        n_vals = np.arange(welfare.n_agents + 1)
        hull = np.outer(welfare.table[:, -1], n_vals / welfare.n_agents)
        bad = welfare.table > hull + DEFAULT_TOL
        if bad.any():
            s, n = np.argwhere(bad)[0]
            cw_ok, cw_witness = False, (int(s), int(n))
    # POWER: (n/N)^beta <= n/N holds for every n once beta >= 1

    cp_ok, cp_witness = True, None
    for s in range(env.n_states):
        if env.complementarity[s] < 0:
            cp_ok, cp_witness = False, (s, 1)
            break

    return AssumptionReport(
        dominance=dom_witness is not None,
        dominance_witness=dom_witness,
        convex_welfare=cw_ok,
        convex_welfare_witness=cw_witness,
        convex_potential=cp_ok,
        convex_potential_witness=cp_witness,
    )
