"""Ordered invitation policies and sequential-obedience checks.

A policy maps each state to a distribution over ordered sequences of distinct
agents (including the empty sequence). An invited agent is willing to follow
when, conditional on being invited, cooperating is profitable assuming only the
agents invited *before* them comply; a non-invited agent must not want to join
assuming everyone invited complies. The uniform mixture over all N! full
orderings is stored implicitly (one mass per state) because its per-agent
obedience value has the closed form potential(N) / N, which is what makes
large-N checks tractable.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .env import Environment, WelfareSpec, marginal_gain, potential, welfare_value

# hard cap on explicit sequence enumeration (and on LP columns)
MAX_SEQUENCES = 2_000_000

DEFAULT_TOL = 1e-9

Sequence_ = tuple[int, ...]


class CapacityError(RuntimeError):
    """Raised when explicit enumeration would exceed MAX_SEQUENCES."""


def count_sequences(n_agents: int) -> int:
    """Number of ordered sequences of distinct agents, empty one included."""
    if n_agents < 1:
        raise ValueError("n_agents must be >= 1")
    total = 0
    term = 1  # n! / (n-k)! built incrementally
    for k in range(n_agents + 1):
        total += term
        term *= n_agents - k
    return total


def enumerate_sequences(n_agents: int) -> list[Sequence_]:
    """All ordered sequences in canonical order: by length, then lexicographic."""
    n = count_sequences(n_agents)
    if n > MAX_SEQUENCES:
        raise CapacityError(
            f"{n} sequences for {n_agents} agents exceeds the cap of {MAX_SEQUENCES}"
        )
    out: list[Sequence_] = []
    for k in range(n_agents + 1):
        out.extend(itertools.permutations(range(n_agents), k))
    return out


def predecessors(seq: Sequence_, agent: int) -> int:
    """Agents strictly before ``agent`` in ``seq``; |seq| if not invited."""
    for pos, a in enumerate(seq):
        if a == agent:
            return pos
    return len(seq)


@dataclass(frozen=True, eq=False)
class SequentialPolicy:
    """Sparse (state, sequence) -> probability map, plus the implicit uniform
    mixture over full orderings per state."""

    n_agents: int
    n_states: int
    entries: dict[tuple[int, Sequence_], float]
    uniform_full: dict[int, float]

    def __init__(
        self,
        n_agents: int,
        n_states: int,
        entries: Mapping[tuple[int, Iterable[int]], float] | None = None,
        uniform_full: Mapping[int, float] | None = None,
    ):
        object.__setattr__(self, "n_agents", int(n_agents))
        object.__setattr__(self, "n_states", int(n_states))
        clean: dict[tuple[int, Sequence_], float] = {}
        items = entries.items() if hasattr(entries, "items") else (entries or [])
        for (s, seq), p in items:
            seq = tuple(int(a) for a in seq)
            key = (int(s), seq)
            if not 0 <= key[0] < self.n_states:
                raise ValueError(f"state {key[0]} out of range")
            if any(not 0 <= a < self.n_agents for a in seq):
                raise ValueError(f"sequence {seq} has an agent out of range")
            if len(set(seq)) != len(seq):
                raise ValueError(f"sequence {seq} repeats an agent")
            p = float(p)
            if not math.isfinite(p) or p < -1e-12:
                raise ValueError(f"probability {p} for {key} is invalid")
            if p > 0.0:
                clean[key] = clean.get(key, 0.0) + p
        uf: dict[int, float] = {}
        for s, p in (uniform_full or {}).items():
            s = int(s)
            if not 0 <= s < self.n_states:
                raise ValueError(f"state {s} out of range")
            p = float(p)
            if not math.isfinite(p) or p < -1e-12:
                raise ValueError(f"uniform-full mass {p} for state {s} is invalid")
            if p > 0.0:
                uf[s] = p
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "uniform_full", uf)
        for s in range(self.n_states):
            if self.state_mass(s) > 1.0 + 1e-9:
                raise ValueError(f"state {s} carries probability mass above 1")

    def canonical_items(self) -> list[tuple[tuple[int, Sequence_], float]]:
        # length-prefixed sequence ordering gives a stable, canonical listing
        return sorted(self.entries.items(), key=lambda kv: (kv[0][0], len(kv[0][1]), kv[0][1]))

    def state_mass(self, state: int) -> float:
        total = self.uniform_full.get(state, 0.0)
        for (s, _), p in self.entries.items():
            if s == state:
                total += p
        return total


@dataclass(frozen=True)
class ObedienceReport:
    """Per-agent obedience values and per-state feasibility for one policy."""

    so_c: tuple[float, ...]  # invited-agent values, must all be >= -tol
    so_n: tuple[float, ...]  # non-invited values, must all be <= tol
    state_mass: tuple[float, ...]
    feasible: bool
    passed: bool
    tol: float

    def to_dict(self) -> dict:
        return {
            "so_c": list(self.so_c),
            "so_n": list(self.so_n),
            "state_mass": list(self.state_mass),
            "feasible": self.feasible,
            "pass": self.passed,
            "tol": self.tol,
        }


def check_feasibility(
    policy: SequentialPolicy, tol: float = DEFAULT_TOL
) -> tuple[bool, np.ndarray]:
    """Per-state masses must each sum to 1 within tol."""
    mass = np.zeros(policy.n_states)
    for (s, _), p in policy.entries.items():
        mass[s] += p
    for s, p in policy.uniform_full.items():
        mass[s] += p
    ok = bool(np.all(np.abs(mass - 1.0) <= tol))
    return ok, mass


def so_c_value(policy: SequentialPolicy, env: Environment, agent: int) -> float:
    """Prior-weighted gain of ``agent`` over all invitations, assuming only the
    agents sequenced before them cooperate. Nonnegative for every agent is the
    cooperation half of sequential obedience."""
    total = 0.0
    for (s, seq), p in policy.entries.items():
        if agent in seq:
            total += env.prior[s] * p * marginal_gain(env, s, predecessors(seq, agent))
    # uniform full orderings: position is uniform, so the average gain
    # telescopes to potential(N) / N
    for s, p in policy.uniform_full.items():
        total += env.prior[s] * p * potential(env, s, env.n_agents) / env.n_agents
    return float(total)


def so_n_value(policy: SequentialPolicy, env: Environment, agent: int) -> float:
    """Prior-weighted gain of ``agent`` from joining uninvited, assuming every
    invited agent cooperates. Nonpositive for every agent is the exclusion half
    of sequential obedience. Full sequences invite everyone, so the uniform-full
    block never contributes."""
    total = 0.0
    for (s, seq), p in policy.entries.items():
        if agent not in seq:
            total += env.prior[s] * p * marginal_gain(env, s, len(seq))
    return float(total)


def check_policy(
    policy: SequentialPolicy, env: Environment, tol: float = DEFAULT_TOL
) -> ObedienceReport:
    """Feasibility plus both obedience halves for every agent."""
    if policy.n_agents != env.n_agents or policy.n_states != env.n_states:
        raise ValueError("policy does not match the environment's dimensions")
    feasible, mass = check_feasibility(policy, tol)
    so_c = tuple(so_c_value(policy, env, i) for i in range(env.n_agents))
    so_n = tuple(so_n_value(policy, env, i) for i in range(env.n_agents))
    passed = (
        feasible
        and all(v >= -tol for v in so_c)
        and all(v <= tol for v in so_n)
    )
    return ObedienceReport(
        so_c=so_c,
        so_n=so_n,
        state_mass=tuple(float(m) for m in mass),
        feasible=feasible,
        passed=passed,
        tol=tol,
    )


def expected_welfare(
    policy: SequentialPolicy, env: Environment, welfare: WelfareSpec
) -> float:
    """Designer value if every invitation is followed (the policy objective)."""
    total = 0.0
    for (s, seq), p in policy.entries.items():
        total += env.prior[s] * p * welfare_value(welfare, s, len(seq))
    for s, p in policy.uniform_full.items():
        total += env.prior[s] * p * welfare_value(welfare, s, env.n_agents)
    return float(total)


def expand_uniform_full(policy: SequentialPolicy) -> SequentialPolicy:
    """Explicit form of the uniform-full block: N! entries per flagged state."""
    if not policy.uniform_full:
        return policy
    if count_sequences(policy.n_agents) > MAX_SEQUENCES:
        raise CapacityError(
            f"cannot expand uniform-full orderings for {policy.n_agents} agents"
        )
    entries = dict(policy.entries)
    share = 1.0 / math.factorial(policy.n_agents)
    for s, p in policy.uniform_full.items():
        for seq in itertools.permutations(range(policy.n_agents)):
            key = (s, seq)
            entries[key] = entries.get(key, 0.0) + p * share
    return SequentialPolicy(policy.n_agents, policy.n_states, entries, {})


def policy_to_dict(policy: SequentialPolicy, labels: Iterable[str] | None = None) -> dict:
    labels = list(labels) if labels is not None else None
    out = {
        "n_agents": policy.n_agents,
        "n_states": policy.n_states,
        "entries": [
            {"state": s, "sequence": list(seq), "prob": p}
            for (s, seq), p in policy.canonical_items()
        ],
        "uniform_full": [
            {"state": s, "prob": p} for s, p in sorted(policy.uniform_full.items())
        ],
    }
    if labels is not None:
        out["states"] = labels
    return out


def policy_from_dict(data: Mapping) -> SequentialPolicy:
    try:
        entries = {
            (e["state"], tuple(e["sequence"])): e["prob"] for e in data["entries"]
        }
        uniform_full = {e["state"]: e["prob"] for e in data.get("uniform_full", [])}
        return SequentialPolicy(
            data["n_agents"], data["n_states"], entries, uniform_full
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed policy payload: {exc}") from exc


def policy_to_json(policy: SequentialPolicy, labels: Iterable[str] | None = None) -> str:
    return json.dumps(policy_to_dict(policy, labels), indent=2, sort_keys=True)


def policy_from_json(text: str) -> SequentialPolicy:
    return policy_from_dict(json.loads(text))
