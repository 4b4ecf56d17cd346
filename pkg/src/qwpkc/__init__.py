"""Public-key encryption from discrete-time coined quantum walks on a cycle.

The package splits into four layers: :mod:`qwpkc.walk` simulates the walk
itself, :mod:`qwpkc.protocol` implements the keygen/encrypt/decrypt scheme
on top of it, :mod:`qwpkc.security` reproduces the entropy and Holevo-bound
accounting numerically, and :mod:`qwpkc.serialize`/:mod:`qwpkc.cli` provide
file formats and command-line workflows.
"""

from .protocol import (
    NonEigenstateWarning,
    ProtocolTranscript,
    PublicKey,
    SecretKey,
    WalkConfig,
    decrypt,
    encrypt,
    generate_public_key,
    roundtrip,
    sample_secret_key,
)
from .security import (
    EavesdropperTable,
    KeyDistribution,
    SecurityReport,
    candidate_message,
    check_density_matrix,
    cipher_density,
    exhaustive_eavesdropper,
    holevo_report,
    public_key_density,
    public_key_density_full,
    shannon_entropy_secret_key,
    von_neumann_entropy,
)
from .serialize import (
    StateFormatError,
    parse_state,
    read_secret_key,
    read_sidecar,
    read_state,
    state_to_text,
    write_secret_key,
    write_sidecar,
    write_state,
)
from .walk import (
    COIN_LABELS,
    COIN_LEFT,
    COIN_RIGHT,
    CoinParams,
    QuantumState,
    apply_coin,
    apply_shift,
    apply_shift_inverse,
    apply_translation,
    build_coin,
    measure_position,
    state_fidelity,
    walk_evolve,
    walk_evolve_inverse,
    walk_step,
)

__version__ = "0.1.0"
