"""Feasible reward sets: membership tests, canonical (zeta, V) parametrization,
zeta caps, volume upper bounds, and the H-representation polytope.

A problem bundles a tabular MDP without reward, the optimal expert's policy,
and any number of sub-optimal experts, each with a known performance-gap
budget xi and a constraint mode (gap <= xi, >= xi, or == xi).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .mdp import (
    MdpNoReward,
    Policy,
    RewardFunction,
    apply_policy,
    mask_unsupported,
    occupancy_matrix,
    value_functions,
)

DEFAULT_TOL = 1e-8
COEF_CLEAN_TOL = 1e-12


class ConstraintMode(enum.Enum):
    """How an expert's performance gap V^{opt} - V^{expert} is constrained."""

    UPPER = "le"  # gap <= xi (the default, a known upper bound on sub-optimality)
    LOWER = "ge"  # gap >= xi
    EXACT = "eq"  # gap == xi


@dataclass(frozen=True)
class ExpertSpec:
    policy: Policy
    xi: float
    mode: ConstraintMode = ConstraintMode.UPPER

    def __post_init__(self):
        if not (self.xi > 0):
            raise ValueError(f"xi must be strictly positive, got {self.xi}")


@dataclass(frozen=True)
class IrlSeProblem:
    """An IRL problem with one optimal expert and n >= 0 sub-optimal experts."""

    mdp: MdpNoReward
    optimal_policy: Policy
    experts: tuple = ()

    def __post_init__(self):
        shape = (self.mdp.num_states, self.mdp.num_actions)
        if self.optimal_policy.probs.shape != shape:
            raise ValueError("optimal policy shape does not match MDP")
        experts = tuple(self.experts)
        for idx, ex in enumerate(experts):
            if ex.policy.probs.shape != shape:
                raise ValueError(f"expert {idx} policy shape does not match MDP")
        object.__setattr__(self, "experts", experts)

    @property
    def num_states(self) -> int:
        return self.mdp.num_states

    @property
    def num_actions(self) -> int:
        return self.mdp.num_actions

    @property
    def num_experts(self) -> int:
        return len(self.experts)

    @property
    def dim(self) -> int:
        return self.num_states * self.num_actions

    def without_expert(self, index: int) -> "IrlSeProblem":
        experts = tuple(ex for j, ex in enumerate(self.experts) if j != index)
        return IrlSeProblem(self.mdp, self.optimal_policy, experts)


@dataclass(frozen=True)
class Violation:
    condition: str  # "optimality_eq", "optimality_le", "expert_gap"
    state: int
    action: int  # -1 for state-level (expert gap) conditions
    margin: float  # positive amount by which the condition is violated
    expert: int = -1


@dataclass(frozen=True)
class MembershipReport:
    is_member: bool
    violations: tuple

    def __bool__(self) -> bool:
        return self.is_member


def _expert_gap_violation(gap: float, xi: float, mode: ConstraintMode, tol: float) -> float:
    """Positive violation margin of the per-state gap constraint, 0 if satisfied."""
    if mode is ConstraintMode.UPPER:
        margin = gap - xi
    elif mode is ConstraintMode.LOWER:
        margin = xi - gap
    else:
        margin = abs(gap - xi)
    return margin if margin > tol else 0.0


def _check_reward_box(problem: IrlSeProblem, r: RewardFunction, tol: float) -> np.ndarray:
    vals = np.asarray(r.values, dtype=float)
    if vals.shape != (problem.num_states, problem.num_actions):
        raise ValueError("reward shape does not match problem")
    if np.any(vals < -tol) or np.any(vals > 1.0 + tol):
        raise ValueError("reward lies outside [0, 1] beyond tolerance")
    return vals


def membership_implicit(problem: IrlSeProblem, r: RewardFunction,
                        tol: float = DEFAULT_TOL) -> MembershipReport:
    """Membership via the implicit conditions on Q/V of the optimal policy.

    (i) supported pairs have zero advantage, (ii) unsupported pairs have
    non-positive advantage, (iii) each expert's per-state value gap respects
    its xi constraint under its mode.
    """
    _check_reward_box(problem, r, tol)
    pi1 = problem.optimal_policy
    q1, v1, _ = value_functions(problem.mdp, r, pi1)
    support = pi1.support_mask()
    violations = []
    for s in range(problem.num_states):
        for a in range(problem.num_actions):
            diff = q1[s, a] - v1[s]
            if support[s, a]:
                if abs(diff) > tol:
                    violations.append(Violation("optimality_eq", s, a, abs(diff)))
            elif diff > tol:
                violations.append(Violation("optimality_le", s, a, diff))
    for i, ex in enumerate(problem.experts):
        _, vi, _ = value_functions(problem.mdp, r, ex.policy)
        for s in range(problem.num_states):
            margin = _expert_gap_violation(v1[s] - vi[s], ex.xi, ex.mode, tol)
            if margin > 0.0:
                violations.append(Violation("expert_gap", s, -1, margin, expert=i))
    return MembershipReport(not violations, tuple(violations))


def membership_q(problem: IrlSeProblem, r: RewardFunction,
                 tol: float = DEFAULT_TOL) -> MembershipReport:
    """Membership via the Q-level variant of the expert condition.

    For UPPER-mode experts the gap condition is tested as
    Q^{opt}(s, a) <= V^{expert}(s) + xi for every pair, which is equivalent
    to the value-level condition once optimality holds; serves as an
    independent oracle for membership_implicit. Other modes fall back to the
    value-level test.
    """
    _check_reward_box(problem, r, tol)
    pi1 = problem.optimal_policy
    q1, v1, _ = value_functions(problem.mdp, r, pi1)
    support = pi1.support_mask()
    violations = []
    for s in range(problem.num_states):
        for a in range(problem.num_actions):
            diff = q1[s, a] - v1[s]
            if support[s, a]:
                if abs(diff) > tol:
                    violations.append(Violation("optimality_eq", s, a, abs(diff)))
            elif diff > tol:
                violations.append(Violation("optimality_le", s, a, diff))
    for i, ex in enumerate(problem.experts):
        _, vi, _ = value_functions(problem.mdp, r, ex.policy)
        if ex.mode is ConstraintMode.UPPER:
            for s in range(problem.num_states):
                for a in range(problem.num_actions):
                    margin = q1[s, a] - vi[s] - ex.xi
                    if margin > tol:
                        violations.append(Violation("expert_gap", s, a, margin, expert=i))
        else:
            for s in range(problem.num_states):
                margin = _expert_gap_violation(v1[s] - vi[s], ex.xi, ex.mode, tol)
                if margin > 0.0:
                    violations.append(Violation("expert_gap", s, -1, margin, expert=i))
    return MembershipReport(not violations, tuple(violations))


@dataclass(frozen=True)
class CanonicalParams:
    """The canonical decomposition r = -Bbar zeta + (E - gamma P) V."""

    zeta: np.ndarray  # (S, A), >= 0
    v: np.ndarray  # (S,)

    def __post_init__(self):
        zeta = np.asarray(self.zeta, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if np.any(zeta < 0):
            raise ValueError("zeta must be element-wise non-negative")
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "v", v)


def reward_from_params(problem: IrlSeProblem, params: CanonicalParams):
    """Assemble r = -Bbar^{opt} zeta + (E - gamma P) V.

    Returns (values, in_box): the raw table and a flag telling whether it
    landed inside [0, 1]; out-of-box outputs are flagged, not rejected.
    """
    m, pi1 = problem.mdp, problem.optimal_policy
    zeta = np.asarray(params.zeta, dtype=float)
    v = np.asarray(params.v, dtype=float)
    if zeta.shape != pi1.probs.shape or v.shape != (m.num_states,):
        raise ValueError("parameter shapes do not match problem")
    shaping = v[:, None] - m.discount * (m.transition @ v)
    values = -mask_unsupported(pi1, zeta) + shaping
    in_box = bool(np.all(values >= -DEFAULT_TOL) and np.all(values <= 1.0 + DEFAULT_TOL))
    return values, in_box


def params_from_reward(problem: IrlSeProblem, r: RewardFunction,
                       tol: float = DEFAULT_TOL) -> CanonicalParams:
    """Canonical witness of a member reward: V = V^{opt}, zeta = -Adv masked.

    Raises ValueError when r is not a member; the canonical witness makes
    the round trip through reward_from_params exact.
    """
    report = membership_implicit(problem, r, tol)
    if not report:
        raise ValueError(f"reward is not a member ({len(report.violations)} violations)")
    _, v1, adv = value_functions(problem.mdp, r, problem.optimal_policy)
    zeta = np.clip(mask_unsupported(problem.optimal_policy, -adv), 0.0, None)
    return CanonicalParams(zeta, v1)


def expert_zeta_load(problem: IrlSeProblem, expert: ExpertSpec, zeta: np.ndarray) -> np.ndarray:
    """Per-state load y = D^{expert} (pi_expert applied to Bbar^{opt} zeta)."""
    masked = mask_unsupported(problem.optimal_policy, zeta)
    per_state = apply_policy(expert.policy, masked)
    d = occupancy_matrix(problem.mdp, expert.policy)
    return d @ per_state


@dataclass(frozen=True)
class ZetaConstraintVerdict:
    satisfied: bool
    slack: np.ndarray  # xi - y per state


def check_zeta_constraints(problem: IrlSeProblem, zeta, tol: float = DEFAULT_TOL):
    """Check the per-expert linear constraints on zeta; returns one verdict
    per expert with the slack vector xi - y."""
    zeta = np.asarray(zeta, dtype=float)
    if np.any(zeta < -tol):
        raise ValueError("zeta must be non-negative")
    verdicts = []
    for ex in problem.experts:
        y = expert_zeta_load(problem, ex, zeta)
        slack = ex.xi - y
        if ex.mode is ConstraintMode.UPPER:
            ok = bool(np.all(slack >= -tol))
        elif ex.mode is ConstraintMode.LOWER:
            ok = bool(np.all(slack <= tol))
        else:
            ok = bool(np.all(np.abs(slack) <= tol))
        verdicts.append(ZetaConstraintVerdict(ok, slack))
    return verdicts


@dataclass(frozen=True)
class ZetaCaps:
    """Element-wise caps on zeta: g = min(k, 1/(1-gamma)) where k is finite."""

    g: np.ndarray  # (S, A)
    k: np.ndarray  # (S, A), +inf where no expert contributes
    contributing_experts: tuple  # tuple of tuples, expert indices per (s, a)


def zeta_caps(problem: IrlSeProblem) -> ZetaCaps:
    """Necessary caps on zeta from the experts' occupancy-weighted constraints.

    For each pair unplayed by the optimal expert, k(s,a) minimizes
    xi_i / (d^{expert_i}_{s'}(s) * pi_i(a|s)) over contributing experts i and
    start states s'; occupancy terms that are zero impose nothing and are
    skipped.
    """
    S, A = problem.num_states, problem.num_actions
    horizon = 1.0 / (1.0 - problem.mdp.discount)
    support1 = problem.optimal_policy.support_mask()
    k = np.full((S, A), np.inf)
    contributing = [[() for _ in range(A)] for _ in range(S)]
    occupancies = [occupancy_matrix(problem.mdp, ex.policy) for ex in problem.experts]
    for s in range(S):
        for a in range(A):
            if support1[s, a]:
                continue
            contrib = tuple(i for i, ex in enumerate(problem.experts)
                            if ex.policy.probs[s, a] > 0.0)
            contributing[s][a] = contrib
            best = np.inf
            for i in contrib:
                ex = problem.experts[i]
                weights = occupancies[i][:, s] * ex.policy.probs[s, a]
                positive = weights[weights > COEF_CLEAN_TOL]
                if positive.size:
                    best = min(best, float(ex.xi / positive.max()))
            k[s, a] = best
    g = np.where(np.isfinite(k), np.minimum(k, horizon), horizon)
    return ZetaCaps(g, k, tuple(tuple(row) for row in contributing))


def volume_upper_bounds(problem: IrlSeProblem):
    """Upper bounds on the volume of feasible zeta values over unplayed pairs:
    the single-agent product of 1/(1-gamma) and the expert-capped product of g."""
    horizon = 1.0 / (1.0 - problem.mdp.discount)
    unplayed = ~problem.optimal_policy.support_mask()
    caps = zeta_caps(problem)
    single = float(horizon ** np.count_nonzero(unplayed))
    multi = float(np.prod(caps.g[unplayed])) if np.any(unplayed) else 1.0
    return single, multi


@dataclass(frozen=True)
class RewardPolytope:
    """H-representation {r : G vec(r) <= h} of a feasible reward set.

    vec(r) flattens the (S, A) table row-major. Labels record each row's
    provenance ("box", "optimality", "equality", "expert:i").
    """

    num_states: int
    num_actions: int
    G: np.ndarray
    h: np.ndarray
    labels: tuple

    @property
    def dim(self) -> int:
        return self.num_states * self.num_actions

    def contains(self, r, tol: float = DEFAULT_TOL) -> bool:
        vec = np.asarray(r.values if isinstance(r, RewardFunction) else r,
                         dtype=float).reshape(-1)
        return bool(np.all(self.G @ vec <= self.h + tol))

    def contains_many(self, rewards: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Vectorized membership for an (N, dim) array of flattened rewards."""
        return np.all(rewards @ self.G.T <= self.h[None, :] + tol, axis=1)


def _value_functional(m: MdpNoReward, pi: Policy) -> np.ndarray:
    """Matrix W with V^{pi} = W vec(r): W = (I - gamma pi P)^{-1} diag-expand(pi)."""
    S, A = pi.probs.shape
    occ = occupancy_matrix(m, pi)
    # (pi r)(s') = sum_a pi[s',a] r[s',a]; expand to (S, S*A)
    w = np.zeros((S, S * A))
    for s_prime in range(S):
        w[:, s_prime * A:(s_prime + 1) * A] = occ[:, s_prime:s_prime + 1] * pi.probs[s_prime]
    return w


def polytope_h_rep(problem: IrlSeProblem, tol: float = DEFAULT_TOL) -> RewardPolytope:
    """Affine transcription of the membership conditions into G vec(r) <= h.

    Emits box rows, optimality rows for pairs unplayed by the optimal expert,
    paired equality rows for supported pairs when the optimal policy is
    stochastic, and per-state expert-gap rows per mode. Best-effort redundancy
    elimination drops rows implied by the box or by a scaled duplicate.
    """
    S, A = problem.num_states, problem.num_actions
    d = S * A
    m, pi1 = problem.mdp, problem.optimal_policy
    w_v1 = _value_functional(m, pi1)
    p_flat = m.transition.reshape(d, S)
    w_q1 = np.eye(d) + m.discount * (p_flat @ w_v1)

    rows, bounds, labels = [], [], []
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1.0
        rows.append(e)
        bounds.append(1.0)
        labels.append("box")
        rows.append(-e)
        bounds.append(0.0)
        labels.append("box")

    support = pi1.support_mask()
    deterministic = bool(np.all(support.sum(axis=1) == 1))
    for s in range(S):
        for a in range(A):
            row = w_q1[s * A + a] - w_v1[s]
            if not support[s, a]:
                rows.append(row)
                bounds.append(0.0)
                labels.append("optimality")
            elif not deterministic:
                rows.append(row)
                bounds.append(0.0)
                labels.append("equality")
                rows.append(-row)
                bounds.append(0.0)
                labels.append("equality")

    for i, ex in enumerate(problem.experts):
        w_vi = _value_functional(m, ex.policy)
        gap_rows = w_v1 - w_vi  # per-state gap functionals
        for s in range(S):
            if ex.mode in (ConstraintMode.UPPER, ConstraintMode.EXACT):
                rows.append(gap_rows[s])
                bounds.append(ex.xi)
                labels.append(f"expert:{i}")
            if ex.mode in (ConstraintMode.LOWER, ConstraintMode.EXACT):
                rows.append(-gap_rows[s])
                bounds.append(-ex.xi)
                labels.append(f"expert:{i}")

    G = np.array(rows)
    h = np.array(bounds)
    G[np.abs(G) < COEF_CLEAN_TOL] = 0.0
    G, h, labels = _drop_redundant_rows(G, h, labels)
    return RewardPolytope(S, A, G, h, tuple(labels))


def _drop_redundant_rows(G: np.ndarray, h: np.ndarray, labels):
    """Drop rows implied by the unit box alone or by a scaled duplicate row.

    Box rows themselves are always kept; exact minimality is not attempted.
    """
    keep = []
    kept_normed = []  # (normalized row, normalized bound)
    for idx in range(G.shape[0]):
        row, bound, label = G[idx], h[idx], labels[idx]
        if label != "box":
            # implied by the box: max of row . r over [0,1]^d
            if np.sum(np.clip(row, 0.0, None)) <= bound + COEF_CLEAN_TOL:
                continue
        scale = np.max(np.abs(row))
        if scale <= COEF_CLEAN_TOL:
            continue  # 0 <= h rows (h >= 0 guaranteed by the box check above)
        normed_row, normed_bound = row / scale, bound / scale
        duplicate = False
        for other_row, other_bound in kept_normed:
            if (np.max(np.abs(other_row - normed_row)) < 1e-10
                    and other_bound <= normed_bound + 1e-10):
                duplicate = True
                break
        if duplicate:
            continue
        keep.append(idx)
        kept_normed.append((normed_row, normed_bound))
    return G[keep], h[keep], [labels[i] for i in keep]
