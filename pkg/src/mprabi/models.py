"""Two-level and three-level multiphoton absorption models.

Two-level model: a single mode of frequency ``omega`` drives a transition of
frequency ``omega0`` through simultaneous absorption of ``multiplicity`` = M
photons (rotating-wave form).  With hbar = 1 and basis (excited, ground):

    H = omega n + (omega0/2) sigma_z + i g (a†^M sigma_- - a^M sigma_+)

The i*g phase makes the interaction Hermitian for real coupling g >= 0; every
derived quantity depends only on g**2, so no generality is lost.  The operator
N = n + M |e><e| commutes with H and splits the space into blocks of at most
two states, {|n, e>, |n+M, g>}.

Three-level model: two beams of frequencies ``omega_l1``, ``omega_l2`` drive
the bottom->top transition directly, M photons from beam 1 and K = total - M
from beam 2.  Level energies enter through the transition frequencies only
(``gauge_decompose`` strips the arbitrary energy origin), via the inversion
S = diag(1, 0, -1) and its square, basis ordered (top, middle, bottom):

    H = omega_l1 n1 + omega_l2 n2 + (omega0+omega1)/2 S - (omega0-omega1)/2 S^2
        + i g (a1†^M a2†^K Sigma_- - a1^M a2^K Sigma_+)

with Sigma_+ = |top><bottom|.  N1 = n1 + (M/2) S and N2 = n2 + (K/2) S commute
with H, as does S^2 (the middle level never mixes), so invariant blocks again
pair at most two states.

Ladder truncation breaks the canonical commutator at the top of each mode, so
operator identities are only asserted on the buffered subspace returned by
``two_level_buffer`` / ``three_level_buffer`` (the top M resp. K number states
of each mode are masked out).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Ket, Operator, basis_ket, commutator, frobenius, identity, kron, projector_keep
from .fock import ladder_power, number_operator

__all__ = [
    "TwoLevelParams",
    "ThreeLevelParams",
    "TwoLevelModel",
    "ThreeLevelModel",
    "LevelBasis",
    "InvariantBlock",
    "sigma_z",
    "sigma_plus",
    "sigma_minus",
    "excited_projector",
    "build_two_level",
    "build_three_level",
    "level_basis",
    "gauge_decompose",
    "gauge_reconstruct",
    "block_decompose",
    "two_level_buffer",
    "three_level_buffer",
    "two_level_ket",
    "three_level_ket",
]

TWO_LEVEL_NAMES = ("e", "g")
THREE_LEVEL_NAMES = ("t", "m", "b")


@dataclass(frozen=True)
class TwoLevelParams:
    """Physical parameters of the two-level M-photon model.

    ``fock_dim`` must leave room for at least one coupled block plus the
    truncation buffer: fock_dim >= multiplicity + 2.
    """

    omega: float
    omega0: float
    g: float
    multiplicity: int
    fock_dim: int

    def __post_init__(self) -> None:
        if self.omega < 0 or self.omega0 < 0 or self.g < 0:
            raise ValueError("frequencies and coupling must be nonnegative")
        if self.multiplicity < 1:
            raise ValueError(f"photon multiplicity must be >= 1, got {self.multiplicity}")
        if self.fock_dim < self.multiplicity + 2:
            raise ValueError(
                f"fock_dim must be >= multiplicity + 2, got {self.fock_dim} < {self.multiplicity + 2}"
            )


@dataclass(frozen=True)
class ThreeLevelParams:
    """Parameters of the three-level two-beam model.

    ``omega0`` is the lower (bottom->middle) transition frequency, ``omega1``
    the upper (middle->top) one.  Beam 1 supplies ``multiplicity`` = M photons
    per transition, beam 2 the remaining ``total_photons`` - M.
    """

    omega_l1: float
    omega_l2: float
    omega0: float
    omega1: float
    g: float
    multiplicity: int
    total_photons: int
    dim1: int
    dim2: int

    def __post_init__(self) -> None:
        if min(self.omega_l1, self.omega_l2, self.omega0, self.omega1, self.g) < 0:
            raise ValueError("frequencies and coupling must be nonnegative")
        if self.multiplicity < 1:
            raise ValueError(f"photon multiplicity must be >= 1, got {self.multiplicity}")
        if self.total_photons < self.multiplicity:
            raise ValueError(
                f"total photon number {self.total_photons} must be >= multiplicity {self.multiplicity}"
            )
        if self.dim1 < self.multiplicity + 2:
            raise ValueError(f"dim1 must be >= multiplicity + 2, got {self.dim1}")
        k = self.total_photons - self.multiplicity
        if self.dim2 < k + 2:
            raise ValueError(f"dim2 must be >= (total - multiplicity) + 2, got {self.dim2}")

    @property
    def second_multiplicity(self) -> int:
        """Photons absorbed from beam 2 per transition."""
        return self.total_photons - self.multiplicity


def sigma_z() -> Operator:
    """Pauli inversion diag(1, -1), basis (excited, ground)."""
    return Operator(np.diag([1.0, -1.0]), (2,))


def sigma_plus() -> Operator:
    """|e><g|."""
    mat = np.zeros((2, 2), dtype=complex)
    mat[0, 1] = 1.0
    return Operator(mat, (2,))


def sigma_minus() -> Operator:
    """|g><e|."""
    return sigma_plus().dag()


def excited_projector() -> Operator:
    """|e><e| as an exact diagonal."""
    return Operator(np.diag([1.0, 0.0]), (2,))


@dataclass(frozen=True)
class TwoLevelModel:
    """Assembled two-level operators: Hamiltonian, conserved N, full-space sigma_z."""

    params: TwoLevelParams
    h: Operator
    conserved: Operator
    sigma_z: Operator


def build_two_level(params: TwoLevelParams) -> TwoLevelModel:
    """Construct the two-level Hamiltonian and its constant of motion."""
    d = params.fock_dim
    m = params.multiplicity
    i_mode = identity(d)
    i_level = identity(2)
    lower = ladder_power(d, m)
    raise_ = lower.dag()
    h = (
        params.omega * kron(number_operator(d), i_level)
        + 0.5 * params.omega0 * kron(i_mode, sigma_z())
        + 1j * params.g * (kron(raise_, sigma_minus()) - kron(lower, sigma_plus()))
    )
    conserved = kron(number_operator(d), i_level) + float(m) * kron(i_mode, excited_projector())
    return TwoLevelModel(params, h, conserved, kron(i_mode, sigma_z()))


def _inversion3() -> Operator:
    return Operator(np.diag([1.0, 0.0, -1.0]), (3,))


def _raise_bottom_to_top() -> Operator:
    mat = np.zeros((3, 3), dtype=complex)
    mat[0, 2] = 1.0
    return Operator(mat, (3,))


@dataclass(frozen=True)
class ThreeLevelModel:
    """Assembled three-level operators.

    ``s`` and ``s_squared`` act on the full space; ``s_squared`` is itself a
    constant of motion (the middle level is uncoupled) and is what makes
    every invariant block at most 2x2.
    """

    params: ThreeLevelParams
    h: Operator
    n1: Operator
    n2: Operator
    s: Operator
    s_squared: Operator


def build_three_level(params: ThreeLevelParams) -> ThreeLevelModel:
    """Construct the three-level Hamiltonian and its constants of motion."""
    m = params.multiplicity
    k = params.second_multiplicity
    d1, d2 = params.dim1, params.dim2
    i1, i2, i3 = identity(d1), identity(d2), identity(3)
    s = _inversion3()
    s2 = s @ s
    sig_plus = _raise_bottom_to_top()
    sig_minus = sig_plus.dag()

    lower1 = ladder_power(d1, m)
    if k >= 1:
        lower2 = ladder_power(d2, k)
    else:
        lower2 = identity(d2)
    raise1, raise2 = lower1.dag(), lower2.dag()

    h = (
        params.omega_l1 * kron(kron(number_operator(d1), i2), i3)
        + params.omega_l2 * kron(kron(i1, number_operator(d2)), i3)
        + 0.5 * (params.omega0 + params.omega1) * kron(kron(i1, i2), s)
        - 0.5 * (params.omega0 - params.omega1) * kron(kron(i1, i2), s2)
        + 1j
        * params.g
        * (kron(kron(raise1, raise2), sig_minus) - kron(kron(lower1, lower2), sig_plus))
    )
    s_full = kron(kron(i1, i2), s)
    n1 = kron(kron(number_operator(d1), i2), i3) + 0.5 * m * s_full
    n2 = kron(kron(i1, number_operator(d2)), i3) + 0.5 * k * s_full
    return ThreeLevelModel(params, h, n1, n2, s_full, kron(kron(i1, i2), s2))


@dataclass(frozen=True)
class LevelBasis:
    """Matrix-unit basis of the 3x3 level space with its structure constants.

    Generator index table (1-based, basis ordered top, middle, bottom):

        1: |t><t|   2: |t><m|   3: |t><b|
        4: |m><t|   5: |m><m|   6: |m><b|
        7: |b><t|   8: |b><m|   9: |b><b|

    so the middle-level projector sits at index 5, the inversion is
    generator 1 minus generator 9, and the direct bottom->top raising
    operator (index 3) factors as the product of the two single-step
    raisers, gen2 @ gen6.  ``structure_constants`` maps (i, j, k) to the
    coefficient of generator k in [gen_i, gen_j]; absent keys are zero.
    """

    s: Operator
    middle_projector: Operator
    generators: tuple[Operator, ...]
    structure_constants: dict[tuple[int, int, int], complex]


def level_basis() -> LevelBasis:
    """Build the level-space generator basis; constants found by brute force."""
    gens = []
    for i in range(3):
        for j in range(3):
            mat = np.zeros((3, 3), dtype=complex)
            mat[i, j] = 1.0
            gens.append(Operator(mat, (3,)))
    constants: dict[tuple[int, int, int], complex] = {}
    for i, gi in enumerate(gens, start=1):
        for j, gj in enumerate(gens, start=1):
            comm = commutator(gi, gj)
            for k, gk in enumerate(gens, start=1):
                # matrix units are orthonormal under the Frobenius inner product
                coeff = complex(np.trace(gk.mat.conj().T @ comm.mat))
                if coeff != 0:
                    constants[(i, j, k)] = coeff
    return LevelBasis(
        s=_inversion3(),
        middle_projector=Operator(np.diag([0.0, 1.0, 0.0]), (3,)),
        generators=tuple(gens),
        structure_constants=constants,
    )


def gauge_decompose(e1: float, e2: float, e3: float) -> tuple[float, float, float]:
    """Strip the energy origin from absolute level energies (e1 <= bottom).

    Returns (omega0, omega1, shift) with omega0 = e2 - e1, omega1 = e3 - e2
    and shift = e2, so that only transition frequencies remain once the
    shift is dropped.
    """
    return e2 - e1, e3 - e2, e2


def gauge_reconstruct(omega0: float, omega1: float, shift: float) -> Operator:
    """Rebuild diag(e3, e2, e1) from transition frequencies and the shift.

    Algebraically this is (omega0+omega1)/2 S - (omega0-omega1)/2 S^2
    + shift I; since S and S^2 have exact 0/±1 entries that expression
    collapses per diagonal entry, and evaluating the collapsed form keeps
    the round trip against ``gauge_decompose`` free of intermediate
    rounding.
    """
    return Operator(np.diag([shift + omega1, shift, shift - omega0]).astype(complex), (3,))


@dataclass(frozen=True)
class InvariantBlock:
    """Restriction of a Hamiltonian to one joint eigenspace of its constants.

    ``splitting`` is the eigenvalue gap for 2x2 blocks, 0.0 for singletons
    and None for anything larger.
    """

    key: tuple[float, ...]
    labels: tuple[tuple, ...]
    indices: tuple[int, ...]
    matrix: np.ndarray
    splitting: float | None


_DIAG_TOL = 1e-12
_COMM_TOL = 1e-10


def _level_names(n_levels: int) -> tuple[str, ...]:
    if n_levels == 2:
        return TWO_LEVEL_NAMES
    if n_levels == 3:
        return THREE_LEVEL_NAMES
    return tuple(str(i) for i in range(n_levels))


def _state_label(index: int, factors: tuple[int, ...], names: tuple[str, ...]) -> tuple:
    occ = []
    rem = index
    for d in reversed(factors):
        occ.append(rem % d)
        rem //= d
    occ.reverse()
    return tuple(occ[:-1]) + (names[occ[-1]],)


def block_decompose(
    h: Operator, conserved: list[Operator] | tuple[Operator, ...]
) -> list[InvariantBlock]:
    """Split H into invariant blocks labeled by conserved eigenvalues.

    Each conserved operator must be diagonal in the computational basis and
    commute with H; basis states sharing all conserved eigenvalues form one
    block.  Off-block matrix elements of H are checked to vanish.  The last
    tensor factor of H is taken to be the level space for labeling.
    """
    scale = max(frobenius(h), 1.0)
    diags = []
    for c in conserved:
        off = c.mat - np.diag(np.diag(c.mat))
        if frobenius(off) > _DIAG_TOL * max(frobenius(c), 1.0):
            raise ValueError("conserved operator is not diagonal in the computational basis")
        if frobenius(commutator(c, h)) > _COMM_TOL * scale:
            raise ValueError("conserved operator does not commute with the Hamiltonian")
        diags.append(np.diag(c.mat).real)

    groups: dict[tuple[float, ...], list[int]] = {}
    for idx in range(h.dim):
        key = tuple(round(d[idx], 9) for d in diags)
        groups.setdefault(key, []).append(idx)

    names = _level_names(h.factors[-1])
    blocks = []
    for key in sorted(groups):
        idx = groups[key]
        sub = h.mat[np.ix_(idx, idx)]
        if len(idx) == 1:
            splitting: float | None = 0.0
        elif len(idx) == 2:
            ev = np.linalg.eigvalsh(sub)
            splitting = float(ev[1] - ev[0])
        else:
            splitting = None
        labels = tuple(_state_label(i, h.factors, names) for i in idx)
        blocks.append(InvariantBlock(key, labels, tuple(idx), sub, splitting))

    mask = np.ones((h.dim, h.dim), dtype=bool)
    for b in blocks:
        mask[np.ix_(b.indices, b.indices)] = False
    worst = float(np.abs(h.mat[mask]).max()) if mask.any() else 0.0
    if worst > _DIAG_TOL * scale:
        raise ValueError(f"off-block matrix elements as large as {worst:.3e} remain")
    return blocks


def two_level_buffer(params: TwoLevelParams) -> Operator:
    """Projector onto mode states unaffected by ladder truncation."""
    return projector_keep(
        (params.fock_dim, 2), (params.fock_dim - params.multiplicity, None)
    )


def three_level_buffer(params: ThreeLevelParams) -> Operator:
    """Projector masking the top M / K number states of each mode."""
    return projector_keep(
        (params.dim1, params.dim2, 3),
        (
            params.dim1 - params.multiplicity,
            params.dim2 - params.second_multiplicity,
            None,
        ),
    )


def two_level_ket(params: TwoLevelParams, n: int, level: str) -> Ket:
    """Bare product state |n, level> with level in {"e", "g"}."""
    if level not in TWO_LEVEL_NAMES:
        raise ValueError(f"level must be one of {TWO_LEVEL_NAMES}, got {level!r}")
    if not 0 <= n < params.fock_dim:
        raise ValueError(f"photon number {n} outside truncation [0, {params.fock_dim})")
    return basis_ket(2 * params.fock_dim, 2 * n + TWO_LEVEL_NAMES.index(level))


def three_level_ket(params: ThreeLevelParams, n1: int, n2: int, level: str) -> Ket:
    """Bare product state |n1, n2, level> with level in {"t", "m", "b"}."""
    if level not in THREE_LEVEL_NAMES:
        raise ValueError(f"level must be one of {THREE_LEVEL_NAMES}, got {level!r}")
    if not 0 <= n1 < params.dim1:
        raise ValueError(f"beam-1 photon number {n1} outside [0, {params.dim1})")
    if not 0 <= n2 < params.dim2:
        raise ValueError(f"beam-2 photon number {n2} outside [0, {params.dim2})")
    index = (n1 * params.dim2 + n2) * 3 + THREE_LEVEL_NAMES.index(level)
    return basis_ket(params.dim1 * params.dim2 * 3, index)
