"""Numerical security analysis of the walk-based cryptosystem.

Builds the eavesdropper's view by brute-force ensemble averaging over all
initial basis states, computes von Neumann and Shannon entropies in bits,
reports the Holevo bound and its gap to the key entropy, and enumerates
every candidate secret key against a captured cipher at tiny parameters.
Density matrices are plain ``(2N, 2N)`` complex arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .protocol import SecretKey, WalkConfig
from .walk import (
    COIN_LABELS,
    CoinParams,
    QuantumState,
    build_coin,
    walk_evolve,
    walk_evolve_inverse,
)

__all__ = [
    "KeyDistribution",
    "SecurityReport",
    "EavesdropperTable",
    "check_density_matrix",
    "public_key_density",
    "public_key_density_full",
    "cipher_density",
    "von_neumann_entropy",
    "shannon_entropy_secret_key",
    "holevo_report",
    "candidate_message",
    "exhaustive_eavesdropper",
]

MAX_DENSE_POSITIONS = 64
EIGENSTATE_TOL = 1e-9
EIGENVALUE_CUTOFF = 1e-14

# exhaustive key enumeration stays tractable only at toy sizes
MAX_ENUM_DIVISOR = 16
MAX_ENUM_STEPS = 16
MAX_ENUM_BITS = 4


@dataclass(frozen=True)
class KeyDistribution:
    """Per-component key-sampling probabilities and their product."""

    coin_probs: NDArray[np.float64]
    step_probs: NDArray[np.float64]
    initial_probs: NDArray[np.float64]
    key_prob: float

    @classmethod
    def uniform(cls, config: WalkConfig) -> "KeyDistribution":
        d = config.coin_divisor
        t_count = config.t_set_size
        pairs = 2 * config.message_space
        return cls(
            coin_probs=np.full(d, 1.0 / d),
            step_probs=np.full(t_count, 1.0 / t_count),
            initial_probs=np.full(pairs, 1.0 / pairs),
            key_prob=1.0 / (d * t_count * pairs),
        )


@dataclass(frozen=True)
class SecurityReport:
    """Entropy accounting for one protocol configuration, all in bits."""

    von_neumann_entropy_bits: float
    shannon_entropy_bits: float
    holevo_bound_bits: float
    holevo_gap_bits: float
    consistent_key_count: int | None = None

    def as_dict(self) -> dict:
        return {
            "von_neumann_entropy_bits": self.von_neumann_entropy_bits,
            "shannon_entropy_bits": self.shannon_entropy_bits,
            "holevo_bound_bits": self.holevo_bound_bits,
            "holevo_gap_bits": self.holevo_gap_bits,
            "consistent_key_count": self.consistent_key_count,
        }


@dataclass(frozen=True)
class EavesdropperTable:
    """Outcome of full key enumeration against one cipher.

    ``message_counts[m]`` is the number of candidate keys that decode the
    cipher to message ``m`` deterministically; keys whose inverse walk leaves
    a genuine superposition are tallied under ``ambiguous`` and excluded.
    """

    message_counts: dict[int, int]
    ambiguous: int
    total_keys: int


def check_density_matrix(
    rho: NDArray[np.complex128],
    *,
    hermitian_tol: float = 1e-12,
    trace_tol: float = 1e-12,
    eigenvalue_floor: float = -1e-12,
) -> None:
    """Raise ``ValueError`` unless ``rho`` is a valid density matrix."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm_dev = np.abs(rho - rho.conj().T).max()
    if herm_dev > hermitian_tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {herm_dev:g})")
    trace_dev = abs(np.trace(rho) - 1.0)
    if trace_dev > trace_tol:
        raise ValueError(f"trace differs from 1 by {trace_dev:g}")
    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < eigenvalue_floor:
        raise ValueError(f"matrix has negative eigenvalue {min_eig:g}")


def _check_dense_size(config: WalkConfig) -> None:
    if config.circle_size > MAX_DENSE_POSITIONS:
        raise ValueError(
            f"circle of {config.circle_size} positions exceeds the dense "
            f"analysis limit of {MAX_DENSE_POSITIONS}"
        )


def public_key_density(
    config: WalkConfig, coin_index: int, steps: int
) -> NDArray[np.complex128]:
    """Ensemble average of the published state over all initial basis states.

    The walk choice and step count are held fixed (the eavesdropper may even
    know them); only the initial position and coin are averaged.  Summation
    runs in a fixed (position, coin) order so results are bit-reproducible.
    """
    _check_dense_size(config)
    if steps < 0:
        raise ValueError(f"step count must be non-negative, got {steps}")
    coin = build_coin(CoinParams.from_index(coin_index, config.coin_divisor))
    dim = 2 * config.circle_size
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for position in range(config.message_space):
        for coin_state in (0, 1):
            initial = QuantumState.basis(config.circle_size, position, coin_state)
            evolved = walk_evolve(initial, coin, steps).amplitudes
            rho += np.outer(evolved, evolved.conj())
    return rho / (2 * config.message_space)


def public_key_density_full(config: WalkConfig) -> NDArray[np.complex128]:
    """Variant averaging over the entire key space, walk and steps included.

    A convex mixture of the fixed-walk ensembles, so it equals
    :func:`public_key_density` for any single (walk, steps) choice.
    """
    _check_dense_size(config)
    dim = 2 * config.circle_size
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for coin_index in range(1, config.coin_divisor + 1):
        for steps in config.step_choices:
            rho += public_key_density(config, coin_index, steps)
    return rho / (config.coin_divisor * config.t_set_size)


def cipher_density(
    config: WalkConfig, message: int, coin_index: int, steps: int
) -> NDArray[np.complex128]:
    """Ensemble average of the encrypted state over all initial basis states."""
    if not 0 <= message < config.message_space:
        raise ValueError(
            f"message {message} outside 0..{config.message_space - 1}"
        )
    rho = public_key_density(config, coin_index, steps)
    # translation permutes the position blocks of the flat index
    perm = np.arange(2 * config.circle_size).reshape(config.circle_size, 2)
    perm = np.roll(perm, message, axis=0).reshape(-1)
    return rho[np.ix_(perm, perm)]


def von_neumann_entropy(rho: NDArray[np.complex128]) -> float:
    """Entropy -sum(lambda * log2 lambda) over the eigenvalues, in bits."""
    eigenvalues = np.linalg.eigvalsh(rho)
    if eigenvalues.min() < -1e-10:
        raise ValueError(
            f"matrix has negative eigenvalue {eigenvalues.min():g}; "
            "not a density matrix"
        )
    positive = eigenvalues[eigenvalues > EIGENVALUE_CUTOFF]
    return float(-np.sum(positive * np.log2(positive)))


def shannon_entropy_secret_key(config: WalkConfig) -> float:
    """Entropy of the uniform secret-key distribution, in bits.

    Closed form for the uniform case: log2(d * |T|) + (n + 1), with the
    (n + 1) positional/coin part kept exact by construction.
    """
    return float(
        np.log2(config.coin_divisor * config.t_set_size) + (config.message_bits + 1)
    )


def holevo_report(
    config: WalkConfig, coin_index: int = 1, steps: int | None = None
) -> SecurityReport:
    """Assemble the entropy accounting for one configuration.

    The Holevo bound on what any measurement reveals about the secret key is
    the von Neumann entropy of the averaged public-key state; the gap to the
    Shannon entropy of the key is the eavesdropper's residual uncertainty.
    """
    if steps is None:
        steps = config.t_min
    rho = public_key_density(config, coin_index, steps)
    vn = von_neumann_entropy(rho)
    shannon = shannon_entropy_secret_key(config)
    if config.coin_divisor * config.t_set_size > 1 and not vn < shannon:
        raise RuntimeError(
            f"entropy ordering violated: S = {vn!r} must stay below H = {shannon!r}"
        )
    return SecurityReport(
        von_neumann_entropy_bits=vn,
        shannon_entropy_bits=shannon,
        holevo_bound_bits=vn,
        holevo_gap_bits=shannon - vn,
    )


def candidate_message(
    cipher: QuantumState, config: WalkConfig, sk: SecretKey
) -> int | None:
    """Message the candidate key would decode, or None if genuinely ambiguous.

    Runs the candidate's inverse walk and reads the position off exactly;
    valid whenever the outcome probability clears ``1 - EIGENSTATE_TOL``.
    """
    coin = build_coin(CoinParams.from_index(sk.coin_index, config.coin_divisor))
    final = walk_evolve_inverse(cipher, coin, sk.steps)
    probs = final.position_probabilities()
    if probs.max() < 1.0 - EIGENSTATE_TOL:
        return None
    outcome = int(probs.argmax())
    return (outcome - sk.start_position) % config.circle_size


def exhaustive_eavesdropper(
    cipher: QuantumState, config: WalkConfig
) -> EavesdropperTable:
    """Enumerate every secret key and tally which message each decodes.

    Only feasible at toy sizes; anything beyond the enumeration caps raises
    ``ValueError``.
    """
    if config.coin_divisor > MAX_ENUM_DIVISOR:
        raise ValueError(
            f"coin family of {config.coin_divisor} exceeds the enumeration "
            f"cap of {MAX_ENUM_DIVISOR}"
        )
    if config.t_set_size > MAX_ENUM_STEPS:
        raise ValueError(
            f"step set of {config.t_set_size} exceeds the enumeration "
            f"cap of {MAX_ENUM_STEPS}"
        )
    if config.message_bits > MAX_ENUM_BITS:
        raise ValueError(
            f"{config.message_bits}-bit messages exceed the enumeration "
            f"cap of {MAX_ENUM_BITS} bits"
        )
    if cipher.n_positions != config.circle_size:
        raise ValueError(
            f"cipher has {cipher.n_positions} positions, "
            f"config expects {config.circle_size}"
        )

    counts = {m: 0 for m in range(config.circle_size)}
    ambiguous = 0
    total = 0
    for coin_index in range(1, config.coin_divisor + 1):
        for steps in config.step_choices:
            # the inverse walk, and hence ambiguity, is shared by all (l, s)
            decoded = candidate_message(
                cipher,
                config,
                SecretKey(coin_index, steps, 0, COIN_LABELS[0]),
            )
            for start_position in range(config.message_space):
                for start_coin in COIN_LABELS:
                    total += 1
                    if decoded is None:
                        ambiguous += 1
                    else:
                        counts[(decoded - start_position) % config.circle_size] += 1
    return EavesdropperTable(
        message_counts=counts, ambiguous=ambiguous, total_keys=total
    )
