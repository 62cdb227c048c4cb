"""Exact LP formulation of the design problem over explicit sequences.

One variable per (state, sequence) pair, one mass-balance equality per state,
and one row per agent for each obedience half. Solved with the in-package
simplex so results are bit-reproducible; this is the ground truth the
threshold designer is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .env import Environment, WelfareSpec, marginal_gain, welfare_value
from .seqpolicy import (
    MAX_SEQUENCES,
    CapacityError,
    SequentialPolicy,
    count_sequences,
    enumerate_sequences,
    predecessors,
)
from .simplex import SimplexResult, solve_min

GE = ">="
LE = "<="


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """max objective @ x subject to eq rows and signed inequality rows."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    ineq_matrix: np.ndarray
    ineq_rhs: np.ndarray
    ineq_senses: tuple[str, ...]
    row_labels: tuple[str, ...]  # eq rows first, then inequality rows
    var_index: tuple[tuple[int, tuple[int, ...]], ...]
    n_agents: int
    n_states: int

    @property
    def n_vars(self) -> int:
        return len(self.var_index)


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str  # OPTIMAL | INFEASIBLE | ITERATION_LIMIT
    value: float
    x: np.ndarray
    eq_residuals: np.ndarray
    ineq_slacks: np.ndarray
    duals_eq: np.ndarray
    duals_ineq: np.ndarray
    reduced_costs: np.ndarray
    iterations: int
    basis: tuple[int, ...]

    def assignment(
        self, lp: LinearProgram, tol: float = 1e-12
    ) -> list[tuple[int, tuple[int, ...], float]]:
        return [
            (s, seq, float(v))
            for (s, seq), v in zip(lp.var_index, self.x)
            if v > tol
        ]

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "iterations": self.iterations,
            "eq_residuals": self.eq_residuals.tolist(),
            "ineq_slacks": self.ineq_slacks.tolist(),
            "duals_eq": self.duals_eq.tolist(),
            "duals_ineq": self.duals_ineq.tolist(),
        }


def build_lp(env: Environment, welfare: WelfareSpec) -> LinearProgram:
    """Assemble the sequential-obedience LP for an explicit sequence grid."""
    if welfare.n_agents != env.n_agents or welfare.n_states != env.n_states:
        raise ValueError("welfare spec does not match the environment's dimensions")
    n_seq = count_sequences(env.n_agents)
    if n_seq * env.n_states > MAX_SEQUENCES:
        raise CapacityError(
            f"{n_seq} sequences x {env.n_states} states exceeds the "
            f"{MAX_SEQUENCES}-variable cap"
        )
    seqs = enumerate_sequences(env.n_agents)
    n_states, n_agents = env.n_states, env.n_agents
    var_index = tuple((s, seq) for s in range(n_states) for seq in seqs)
    nv = len(var_index)

    objective = np.empty(nv)
    eq_matrix = np.zeros((n_states, nv))
    ineq_matrix = np.zeros((2 * n_agents, nv))
    for j, (s, seq) in enumerate(var_index):
        objective[j] = env.prior[s] * welfare_value(welfare, s, len(seq))
        eq_matrix[s, j] = 1.0
        for i in seq:
            ineq_matrix[i, j] = env.prior[s] * marginal_gain(
                env, s, predecessors(seq, i)
            )
        if len(seq) < n_agents:
            g_out = env.prior[s] * marginal_gain(env, s, len(seq))
            for i in range(n_agents):
                if i not in seq:
                    ineq_matrix[n_agents + i, j] = g_out

    row_labels = tuple(
        [f"mass[{env.labels[s]}]" for s in range(n_states)]
        + [f"obey_invited[{i}]" for i in range(n_agents)]
        + [f"stay_out[{i}]" for i in range(n_agents)]
    )
    senses = tuple([GE] * n_agents + [LE] * n_agents)
    return LinearProgram(
        objective=objective,
        eq_matrix=eq_matrix,
        eq_rhs=np.ones(n_states),
        ineq_matrix=ineq_matrix,
        ineq_rhs=np.zeros(2 * n_agents),
        ineq_senses=senses,
        row_labels=row_labels,
        var_index=var_index,
        n_agents=n_agents,
        n_states=n_states,
    )


def solve(lp: LinearProgram, maxiter: int | None = None) -> LpSolution:
    """Maximize the program with the two-phase simplex."""
    # simplex minimizes over <= rows: negate the objective and the >= rows
    sense_sign = np.array([1.0 if s == LE else -1.0 for s in lp.ineq_senses])
    A_ub = lp.ineq_matrix * sense_sign[:, None]
    b_ub = lp.ineq_rhs * sense_sign
    res: SimplexResult = solve_min(
        -lp.objective, lp.eq_matrix, lp.eq_rhs, A_ub, b_ub, maxiter=maxiter
    )
    eq_residuals = lp.eq_matrix @ res.x - lp.eq_rhs
    ineq_values = lp.ineq_matrix @ res.x
    ineq_slacks = (lp.ineq_rhs - ineq_values) * sense_sign  # >= 0 when satisfied
    return LpSolution(
        status=res.status,
        value=float(lp.objective @ res.x),
        x=res.x,
        eq_residuals=eq_residuals,
        ineq_slacks=ineq_slacks,
        duals_eq=-res.duals_eq,  # back to the maximization reading
        duals_ineq=-res.duals_ub * sense_sign,
        reduced_costs=-res.reduced_costs,
        iterations=res.iterations,
        basis=tuple(int(b) for b in res.basis),
    )


def extract_policy(lp: LinearProgram, sol: LpSolution) -> SequentialPolicy:
    """Positive-mass variables as an explicit sequential policy."""
    entries = {
        (s, seq): p for (s, seq, p) in sol.assignment(lp)
    }
    return SequentialPolicy(lp.n_agents, lp.n_states, entries, {})


def lp_to_text(lp: LinearProgram) -> str:
    """Plain-text interchange dump: objective, then one row per line."""
    lines = [f"max {_combo(lp.objective, lp.var_index)}"]
    for r in range(lp.eq_matrix.shape[0]):
        lines.append(
            f"{lp.row_labels[r]}: {_combo(lp.eq_matrix[r], lp.var_index)} "
            f"= {lp.eq_rhs[r]:.10g}"
        )
    n_eq = lp.eq_matrix.shape[0]
    for r in range(lp.ineq_matrix.shape[0]):
        lines.append(
            f"{lp.row_labels[n_eq + r]}: {_combo(lp.ineq_matrix[r], lp.var_index)} "
            f"{lp.ineq_senses[r]} {lp.ineq_rhs[r]:.10g}"
        )
    lines.append("bounds: x >= 0")
    return "\n".join(lines) + "\n"


def _combo(coeffs: np.ndarray, var_index) -> str:
    terms = []
    for j in np.nonzero(coeffs)[0]:
        s, seq = var_index[j]
        name = f"pi[{s}|{','.join(map(str, seq)) or '-'}]"
        terms.append(f"{coeffs[j]:+.10g} {name}")
    return " ".join(terms) if terms else "0"
