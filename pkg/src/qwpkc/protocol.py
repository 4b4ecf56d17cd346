"""Public-key encryption protocol built on the cycle walk.

Key generation evolves a random basis state ``|l>|s>`` for ``t`` steps of a
randomly chosen walk; the resulting state is published.  Encryption of an
n-bit message ``m`` translates the published state by ``m`` positions.
Decryption runs the walk backwards, measures the position register and
subtracts ``l`` modulo the circle size.  For honest executions the
pre-measurement state is a position eigenstate, so recovery is exact.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .walk import (
    COIN_LABELS,
    CoinParams,
    QuantumState,
    apply_translation,
    as_generator,
    build_coin,
    measure_position,
    walk_evolve,
    walk_evolve_inverse,
)

__all__ = [
    "WalkConfig",
    "SecretKey",
    "PublicKey",
    "ProtocolTranscript",
    "NonEigenstateWarning",
    "sample_secret_key",
    "generate_public_key",
    "encrypt",
    "decrypt",
    "roundtrip",
]

EIGENSTATE_TOL = 1e-9


class NonEigenstateWarning(UserWarning):
    """Cipher did not decode to a position eigenstate; likely tampering."""


@dataclass(frozen=True)
class WalkConfig:
    """Public protocol parameters shared by all parties.

    ``message_bits`` fixes the message space {0..2^n - 1}.  Omitted fields
    get desk-scale defaults: a circle of exactly 2^n positions, a coin family
    of size 2^n, and step counts between n and n^2.
    """

    message_bits: int
    circle_size: int | None = None
    coin_divisor: int | None = None
    t_min: int | None = None
    t_max: int | None = None

    def __post_init__(self):
        n = self.message_bits
        if n < 0:
            raise ValueError(f"message_bits must be non-negative, got {n}")
        if self.circle_size is None:
            object.__setattr__(self, "circle_size", 2**n)
        if self.coin_divisor is None:
            object.__setattr__(self, "coin_divisor", 2**n)
        if self.t_min is None:
            object.__setattr__(self, "t_min", max(1, n))
        if self.t_max is None:
            object.__setattr__(self, "t_max", max(1, n * n))
        if self.circle_size < 2:
            raise ValueError(f"circle needs at least 2 positions, got {self.circle_size}")
        if self.circle_size < 2**n:
            raise ValueError(
                f"circle of {self.circle_size} positions cannot carry "
                f"{n}-bit messages"
            )
        if self.coin_divisor < 1:
            raise ValueError(f"coin_divisor must be positive, got {self.coin_divisor}")
        if not 1 <= self.t_min <= self.t_max:
            raise ValueError(
                f"need 1 <= t_min <= t_max, got [{self.t_min}, {self.t_max}]"
            )

    @property
    def message_space(self) -> int:
        return 2**self.message_bits

    @property
    def step_choices(self) -> range:
        return range(self.t_min, self.t_max + 1)

    @property
    def t_set_size(self) -> int:
        return self.t_max - self.t_min + 1


@dataclass(frozen=True)
class SecretKey:
    """Alice's private tuple: walk choice, step count, initial basis state."""

    coin_index: int
    steps: int
    start_position: int
    start_coin: str  # "R" or "L"

    def __post_init__(self):
        if self.start_coin not in COIN_LABELS:
            raise ValueError(f"start_coin must be 'R' or 'L', got {self.start_coin!r}")


@dataclass(frozen=True)
class PublicKey:
    config: WalkConfig
    state: QuantumState


@dataclass(frozen=True)
class ProtocolTranscript:
    """Record of one honest protocol run, kept for analysis and the CLI."""

    config: WalkConfig
    secret_key: SecretKey
    message: int
    public_key: PublicKey
    cipher: QuantumState
    decoded_position: int
    recovered: int


def _check_key(sk: SecretKey, config: WalkConfig) -> None:
    if not 1 <= sk.coin_index <= config.coin_divisor:
        raise ValueError(
            f"coin index {sk.coin_index} outside 1..{config.coin_divisor}"
        )
    if sk.steps not in config.step_choices:
        raise ValueError(
            f"step count {sk.steps} outside "
            f"{config.t_min}..{config.t_max}"
        )
    if not 0 <= sk.start_position < config.message_space:
        raise ValueError(
            f"start position {sk.start_position} outside "
            f"0..{config.message_space - 1}"
        )


def sample_secret_key(
    config: WalkConfig, rng: np.random.Generator | int | None = None
) -> SecretKey:
    """Draw a uniform secret key; deterministic for a fixed seed.

    The four draws (coin index, step count, start position, start coin) are
    independent and happen in that order.
    """
    rng = as_generator(rng)
    coin_index = int(rng.integers(1, config.coin_divisor + 1))
    steps = int(rng.integers(config.t_min, config.t_max + 1))
    start_position = int(rng.integers(0, config.message_space))
    start_coin = COIN_LABELS[int(rng.integers(0, 2))]
    return SecretKey(coin_index, steps, start_position, start_coin)


def generate_public_key(sk: SecretKey, config: WalkConfig) -> PublicKey:
    """Evolve |start_position>|start_coin> for ``sk.steps`` walk steps."""
    _check_key(sk, config)
    coin = build_coin(CoinParams.from_index(sk.coin_index, config.coin_divisor))
    initial = QuantumState.basis(
        config.circle_size, sk.start_position, COIN_LABELS.index(sk.start_coin)
    )
    return PublicKey(config, walk_evolve(initial, coin, sk.steps))


def encrypt(pk: PublicKey, message: int) -> QuantumState:
    """Translate the public-key state by ``message`` positions."""
    if not 0 <= message < pk.config.message_space:
        raise ValueError(
            f"message {message} outside 0..{pk.config.message_space - 1}"
        )
    return apply_translation(pk.state, message)


def decrypt(
    cipher: QuantumState,
    sk: SecretKey,
    config: WalkConfig,
    rng: np.random.Generator | int | None = None,
) -> int:
    """Run the walk backwards, measure, and subtract the start position.

    For a cipher produced honestly under ``sk`` the pre-measurement state is
    a position eigenstate and the result is exact.  Otherwise a
    :class:`NonEigenstateWarning` is emitted and the sampled outcome is
    returned anyway.
    """
    _check_key(sk, config)
    if cipher.n_positions != config.circle_size:
        raise ValueError(
            f"cipher has {cipher.n_positions} positions, "
            f"config expects {config.circle_size}"
        )
    coin = build_coin(CoinParams.from_index(sk.coin_index, config.coin_divisor))
    final = walk_evolve_inverse(cipher, coin, sk.steps)
    if final.position_probabilities().max() < 1.0 - EIGENSTATE_TOL:
        warnings.warn(
            "decrypted state is not a position eigenstate; "
            "cipher may have been tampered with",
            NonEigenstateWarning,
            stacklevel=2,
        )
    outcome, _ = measure_position(final, rng)
    return (outcome - sk.start_position) % config.circle_size


def roundtrip(
    config: WalkConfig,
    message: int,
    rng: np.random.Generator | int | None = None,
) -> tuple[int, ProtocolTranscript]:
    """Execute one full keygen/encrypt/decrypt cycle with a fresh key."""
    rng = as_generator(rng)
    sk = sample_secret_key(config, rng)
    pk = generate_public_key(sk, config)
    cipher = encrypt(pk, message)
    recovered = decrypt(cipher, sk, config, rng)
    decoded_position = (recovered + sk.start_position) % config.circle_size
    transcript = ProtocolTranscript(
        config=config,
        secret_key=sk,
        message=message,
        public_key=pk,
        cipher=cipher,
        decoded_position=decoded_position,
        recovered=recovered,
    )
    return recovered, transcript
