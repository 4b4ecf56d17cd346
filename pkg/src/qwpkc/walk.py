"""Dense state-vector simulation of a coined quantum walk on a cycle.

The walker lives on ``N`` discrete positions arranged in a circle and carries
a two-level coin.  Amplitudes are stored as a flat complex vector of length
``2N`` indexed by ``2*position + coin`` with coin 0 meaning "right-mover"
(|R>) and coin 1 meaning "left-mover" (|L>).  One step of the walk applies a
2x2 coin unitary on every position followed by the coin-conditioned cyclic
shift.  All operations are pure and return new states; states are immutable
after construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "COIN_RIGHT",
    "COIN_LEFT",
    "COIN_LABELS",
    "QuantumState",
    "CoinParams",
    "build_coin",
    "apply_coin",
    "apply_shift",
    "apply_shift_inverse",
    "walk_step",
    "walk_evolve",
    "walk_evolve_inverse",
    "apply_translation",
    "measure_position",
    "state_fidelity",
]

COIN_RIGHT = 0
COIN_LEFT = 1
COIN_LABELS = ("R", "L")

NORM_TOL = 1e-10


def as_generator(rng: np.random.Generator | int | None) -> np.random.Generator:
    """Coerce a seed / generator / None into a ``numpy.random.Generator``."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class QuantumState:
    """Unit-norm amplitude vector over the position (x) coin space.

    Parameters
    ----------
    n_positions:
        Number of cycle positions ``N`` (at least 2).
    amplitudes:
        Complex array of length ``2*N``, flat index ``2*position + coin``.
    check:
        Validate length and unit norm on construction.  Internal callers that
        have just applied a norm-preserving operation may skip the check.
    """

    __slots__ = ("n_positions", "amplitudes")

    def __init__(self, n_positions: int, amplitudes, *, check: bool = True):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if check:
            if n_positions < 2:
                raise ValueError(f"need at least 2 positions, got {n_positions}")
            if amps.shape != (2 * n_positions,):
                raise ValueError(
                    f"amplitude vector has shape {amps.shape}, "
                    f"expected ({2 * n_positions},)"
                )
            norm = np.linalg.norm(amps)
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"state is not normalized: |psi| = {norm!r}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "n_positions", n_positions)
        object.__setattr__(self, "amplitudes", amps)

    def __setattr__(self, name, value):
        raise AttributeError("QuantumState is immutable")

    @classmethod
    def basis(cls, n_positions: int, position: int, coin: int) -> "QuantumState":
        """Basis state |position>|coin> with coin 0 = |R>, 1 = |L>."""
        if not 0 <= position < n_positions:
            raise ValueError(f"position {position} outside 0..{n_positions - 1}")
        if coin not in (COIN_RIGHT, COIN_LEFT):
            raise ValueError(f"coin index must be 0 (R) or 1 (L), got {coin}")
        amps = np.zeros(2 * n_positions, dtype=np.complex128)
        amps[2 * position + coin] = 1.0
        return cls(n_positions, amps)

    def pairs(self) -> NDArray[np.complex128]:
        """Amplitudes as an (N, 2) view, row i = (right, left) at position i."""
        return self.amplitudes.reshape(self.n_positions, 2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def position_probabilities(self) -> NDArray[np.float64]:
        """Born weights per position, coin degree traced out."""
        return (np.abs(self.pairs()) ** 2).sum(axis=1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantumState):
            return NotImplemented
        return self.n_positions == other.n_positions and np.array_equal(
            self.amplitudes, other.amplitudes
        )

    def __repr__(self) -> str:
        return f"QuantumState(n_positions={self.n_positions})"


@dataclass(frozen=True)
class CoinParams:
    """Angles (theta, xi, zeta) of the coin unitary, in radians."""

    theta: float
    xi: float
    zeta: float

    @classmethod
    def from_index(cls, coin_index: int, divisor: int) -> "CoinParams":
        """Member ``coin_index`` of the walk family of size ``divisor``.

        All three angles equal ``2*pi*coin_index/divisor``; index ``divisor``
        gives full-turn angles and hence the identity coin.
        """
        if divisor < 1:
            raise ValueError(f"divisor must be positive, got {divisor}")
        if not 1 <= coin_index <= divisor:
            raise ValueError(
                f"coin index {coin_index} outside 1..{divisor}"
            )
        angle = 2.0 * math.pi * coin_index / divisor
        return cls(theta=angle, xi=angle, zeta=angle)


def build_coin(params: CoinParams) -> NDArray[np.complex128]:
    """2x2 coin unitary for the given angles, ordered basis (|R>, |L>).

    Rows/columns follow the flat-index coin ordering:

        [[ exp(i*xi)*cos(theta),   exp(i*zeta)*sin(theta)],
         [-exp(-i*zeta)*sin(theta), exp(-i*xi)*cos(theta)]]
    """
    ct, st = math.cos(params.theta), math.sin(params.theta)
    return np.array(
        [
            [cmath.exp(1j * params.xi) * ct, cmath.exp(1j * params.zeta) * st],
            [-cmath.exp(-1j * params.zeta) * st, cmath.exp(-1j * params.xi) * ct],
        ],
        dtype=np.complex128,
    )


def apply_coin(state: QuantumState, coin: NDArray[np.complex128]) -> QuantumState:
    """Apply the 2x2 coin unitary to the coin pair at every position."""
    new_pairs = state.pairs() @ coin.T
    return QuantumState(state.n_positions, new_pairs.reshape(-1), check=False)


def apply_shift(state: QuantumState) -> QuantumState:
    """Move right-mover amplitude to position+1 and left-mover to position-1.

    Both moves are cyclic modulo the number of positions.
    """
    pairs = state.pairs()
    new_pairs = np.empty_like(pairs)
    new_pairs[:, COIN_RIGHT] = np.roll(pairs[:, COIN_RIGHT], 1)
    new_pairs[:, COIN_LEFT] = np.roll(pairs[:, COIN_LEFT], -1)
    return QuantumState(state.n_positions, new_pairs.reshape(-1), check=False)


def apply_shift_inverse(state: QuantumState) -> QuantumState:
    """Adjoint of :func:`apply_shift` (right-mover to position-1, left to +1)."""
    pairs = state.pairs()
    new_pairs = np.empty_like(pairs)
    new_pairs[:, COIN_RIGHT] = np.roll(pairs[:, COIN_RIGHT], -1)
    new_pairs[:, COIN_LEFT] = np.roll(pairs[:, COIN_LEFT], 1)
    return QuantumState(state.n_positions, new_pairs.reshape(-1), check=False)


def walk_step(state: QuantumState, coin: NDArray[np.complex128]) -> QuantumState:
    """One walk step: coin first, then the conditional shift."""
    return apply_shift(apply_coin(state, coin))


def walk_evolve(
    state: QuantumState, coin: NDArray[np.complex128], steps: int
) -> QuantumState:
    """Apply ``steps`` successive walk steps (``steps >= 0``)."""
    if steps < 0:
        raise ValueError(f"step count must be non-negative, got {steps}")
    for _ in range(steps):
        state = walk_step(state, coin)
    return state


def walk_evolve_inverse(
    state: QuantumState, coin: NDArray[np.complex128], steps: int
) -> QuantumState:
    """Undo ``steps`` walk steps.

    Each inverse step applies the inverse shift followed by the adjoint coin,
    i.e. the conjugate transpose of each forward factor in reverse order, so
    ``walk_evolve_inverse(walk_evolve(psi, c, t), c, t)`` returns ``psi``.
    """
    if steps < 0:
        raise ValueError(f"step count must be non-negative, got {steps}")
    coin_inv = coin.conj().T
    for _ in range(steps):
        state = apply_coin(apply_shift_inverse(state), coin_inv)
    return state


def apply_translation(state: QuantumState, shift: int) -> QuantumState:
    """Relabel positions by ``+shift`` modulo N, coin untouched.

    Implemented as a single cyclic index relabeling, not ``shift`` repeated
    unit translations, so the cost does not depend on ``shift``.
    """
    if not 0 <= shift < state.n_positions:
        raise ValueError(
            f"shift {shift} outside 0..{state.n_positions - 1}"
        )
    new_pairs = np.roll(state.pairs(), shift, axis=0)
    return QuantumState(state.n_positions, new_pairs.reshape(-1), check=False)


def measure_position(
    state: QuantumState, rng: np.random.Generator | int | None = None
) -> tuple[int, QuantumState]:
    """Projectively measure the position register.

    Samples an outcome with Born probability |amp(i,R)|^2 + |amp(i,L)|^2 and
    returns it together with the renormalized post-measurement state.  For a
    position eigenstate the outcome is deterministic regardless of the seed.

    ``rng`` may be a ``numpy.random.Generator``, a seed, or None (fresh
    unseeded generator).
    """
    rng = as_generator(rng)
    probs = state.position_probabilities()
    total = probs.sum()
    if total < 1e-12:
        raise ValueError("state carries no measurable position weight; corrupted input")
    outcome = int(rng.choice(state.n_positions, p=probs / total))

    collapsed = np.zeros_like(state.amplitudes)
    pair = state.amplitudes[2 * outcome : 2 * outcome + 2]
    collapsed[2 * outcome : 2 * outcome + 2] = pair / np.linalg.norm(pair)
    return outcome, QuantumState(state.n_positions, collapsed, check=False)


def state_fidelity(a: QuantumState, b: QuantumState) -> float:
    """Squared overlap |<a|b>|^2; insensitive to global phase."""
    if a.n_positions != b.n_positions:
        raise ValueError(
            f"dimension mismatch: {a.n_positions} vs {b.n_positions} positions"
        )
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
