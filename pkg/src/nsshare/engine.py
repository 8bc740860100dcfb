"""Sequential measurement engine: Lüders updates and behavior extraction.

Each round, Charlie draws one of his two inputs uniformly at random, measures,
and forwards his qubit.  Averaged over input and outcome the state update is

    rho -> 1/2 sum_{z,c} (I (x) I (x) sqrt(F_{c|z})) rho (I (x) I (x) sqrt(F_{c|z})),

which is trace preserving and completely positive.  Alice and Bob never update
the state; their statistics enter only through the behavior table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import effect_sqrt
from .measurements import GammaSchedule, alice_bob_setting, charlie_setting
from .states import TripartiteState

ENTRY_FLOOR = -1e-12
NORMALIZATION_ATOL = 1e-12
NO_SIGNALING_ATOL = 1e-10


def _ab_stack() -> np.ndarray:
    stack = np.empty((2, 2, 2, 2), dtype=complex)
    for x in (0, 1):
        m0, m1 = alice_bob_setting("A", x).matrices()
        stack[x, 0] = m0
        stack[x, 1] = m1
    return stack


_AB_EFFECTS = _ab_stack()  # identical for Alice and Bob

# all twelve indices are binary, so the unoptimized kernel (4096 terms) beats
# einsum's path machinery
_BEHAVIOR_SUBSCRIPTS = "pqrstu,xasp,ybtq,zcur->xyzabc"


def _charlie_stack(theta: float, gamma_k: float) -> np.ndarray:
    stack = np.empty((2, 2, 2, 2), dtype=complex)
    for z in (0, 1):
        m0, m1 = charlie_setting(theta, gamma_k, z).matrices()
        stack[z, 0] = m0
        stack[z, 1] = m1
    return stack


@dataclass(frozen=True)
class BehaviorTable:
    """Conditional probabilities P(abc|xyz) for one round, indexed [x,y,z,a,b,c]."""

    probs: np.ndarray
    round_index: int = 1

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).copy()
        if p.shape != (2, 2, 2, 2, 2, 2):
            raise ValueError(f"behavior table must have shape (2,)*6, got {p.shape}")
        if p.min() < ENTRY_FLOOR:
            raise ValueError(f"behavior entries must be >= {ENTRY_FLOOR}, min is {p.min()!r}")
        sums = p.sum(axis=(3, 4, 5))
        if np.max(np.abs(sums - 1.0)) > NORMALIZATION_ATOL:
            worst = np.unravel_index(np.argmax(np.abs(sums - 1.0)), sums.shape)
            raise ValueError(
                f"block (x,y,z)={worst} sums to {sums[worst]!r}, expected 1"
            )
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def as_vector(self) -> np.ndarray:
        """The 64 probabilities in C order over (x, y, z, a, b, c)."""
        return self.probs.reshape(64).copy()

    @classmethod
    def from_vector(cls, vector, round_index: int = 1) -> "BehaviorTable":
        vec = np.asarray(vector, dtype=float)
        if vec.shape != (64,):
            raise ValueError(f"expected 64 probabilities, got shape {vec.shape}")
        return cls(vec.reshape(2, 2, 2, 2, 2, 2), round_index)

    def flip_outcomes(self, flip_a: bool = False, flip_b: bool = False,
                      flip_c: bool = False) -> "BehaviorTable":
        """Relabel outcomes a -> 1-a (and/or b, c) for every input."""
        p = self.probs
        if flip_a:
            p = p[:, :, :, ::-1, :, :]
        if flip_b:
            p = p[:, :, :, :, ::-1, :]
        if flip_c:
            p = p[:, :, :, :, :, ::-1]
        return BehaviorTable(p.copy(), self.round_index)


_MARGINAL_FAMILIES = (
    # (outcome axes summed out, input axes that must not matter, label)
    ((5,), (2,), "P(ab|xy) vs z"),
    ((4,), (1,), "P(ac|xz) vs y"),
    ((3,), (0,), "P(bc|yz) vs x"),
    ((4, 5), (1, 2), "P(a|x) vs y,z"),
    ((3, 5), (0, 2), "P(b|y) vs x,z"),
    ((3, 4), (0, 1), "P(c|z) vs x,y"),
)


def no_signaling_residual(table: BehaviorTable) -> tuple[float, str]:
    """Largest input-dependence over all single- and two-party marginals.

    Returns (residual, label of the worst marginal family).
    """
    worst = 0.0
    worst_label = _MARGINAL_FAMILIES[0][2]
    for outcome_axes, input_axes, label in _MARGINAL_FAMILIES:
        marginal = table.probs.sum(axis=outcome_axes)
        spread = marginal.max(axis=input_axes) - marginal.min(axis=input_axes)
        residual = float(spread.max())
        if residual > worst:
            worst = residual
            worst_label = label
    return worst, worst_label


def luders_update(state: TripartiteState, theta: float, gamma_k: float) -> TripartiteState:
    """One Charlie round averaged over his uniformly random input choice."""
    if not isinstance(state, TripartiteState):
        raise TypeError("luders_update expects a TripartiteState")
    out = np.zeros((8, 8), dtype=complex)
    for z in (0, 1):
        setting = charlie_setting(theta, gamma_k, z)
        for effect in setting.effects:
            # I_4 (x) sqrt(F) is block diagonal; the Kraus operators are Hermitian
            k8 = np.zeros((8, 8), dtype=complex)
            root = effect_sqrt(effect)
            for block in range(4):
                k8[2 * block:2 * block + 2, 2 * block:2 * block + 2] = root
            out += 0.5 * (k8 @ state.rho @ k8)
    return TripartiteState(out, label=state.label)


def behavior(state: TripartiteState, theta: float, gamma_k: float,
             round_index: int = 1) -> BehaviorTable:
    """Full behavior P(abc|xyz) = tr[rho (X_{a|x} (x) Y_{b|y} (x) Z_{c|z})]."""
    if not isinstance(state, TripartiteState):
        raise TypeError("behavior expects a TripartiteState")
    zs = _charlie_stack(theta, gamma_k)
    rho6 = state.rho.reshape(2, 2, 2, 2, 2, 2)
    probs = np.einsum(_BEHAVIOR_SUBSCRIPTS, rho6, _AB_EFFECTS, _AB_EFFECTS, zs,
                      optimize=False)
    imag_max = float(np.max(np.abs(probs.imag)))
    if imag_max > 1e-10:
        raise ValueError(f"behavior probabilities acquired imaginary parts ({imag_max!r})")
    return BehaviorTable(probs.real, round_index)


@dataclass(frozen=True)
class SequentialScenario:
    """A run plan: initial state, Charlie angle, sharpness schedule, round count."""

    initial: TripartiteState
    theta: float
    schedule: GammaSchedule
    rounds: int

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError(f"rounds must be at least 1, got {self.rounds!r}")
        if self.rounds > self.schedule.valid_upto:
            raise ValueError(
                f"rounds={self.rounds} exceeds the schedule's valid prefix "
                f"(valid_upto={self.schedule.valid_upto})"
            )
        if not 0.0 < self.theta < np.pi / 2:
            raise ValueError(f"theta must lie in (0, pi/2), got {self.theta!r}")


def run_sequence(scenario: SequentialScenario) -> list[BehaviorTable]:
    """Behavior tables for rounds 1..n; round k+1 sees the round-k Lüders update."""
    tables = []
    state = scenario.initial
    for k in range(1, scenario.rounds + 1):
        gamma_k = scenario.schedule.gammas[k - 1]
        tables.append(behavior(state, scenario.theta, gamma_k, round_index=k))
        if k < scenario.rounds:
            state = luders_update(state, scenario.theta, gamma_k)
    return tables
