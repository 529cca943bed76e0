"""Closed-form, intensity-dependent Rabi frequencies.

The two-level M-photon oscillation frequency, for a state of photon number
``n`` in the sector where the conserved quantity N = n + M |e><e| has
eigenvalue ``n_conserved``:

    Omega^2 = (M omega - omega0)^2
              + 2 g^2 [ M * weight_sum(n) - weight_window(n) * (M - 2 n_conserved + 2 n) ]

For M = 1 and n_conserved = n + 1 this collapses to the familiar linear form
(omega - omega0)^2 + 4 g^2 (n + 1); for M >= 2 the dependence on n is
genuinely nonlinear.  The inner bracket is evaluated in exact integer
arithmetic, so the collapse is bit-exact.

The three-level model carries two frequencies, one for the center-of-energies
motion (coefficient of the inversion S) and one for the relative-energy
motion (coefficient of S^2), both built from the two-beam detuning

    eps = 2 [ omega0 + omega1 - M omega_l1 - (total - M) omega_l2 ].

Squared frequencies can come out negative in detuned regions; values are
returned signed, and the sweep tables carry an explicit sign column so
consumers can take real or imaginary roots deliberately.  Exact integer
weights that exceed the double range raise OverflowError rather than
producing a wrong number; sweeps flag such rows instead of aborting.
"""

from __future__ import annotations

import math
from typing import Iterable

from .fock import (
    ladder_weight_sum,
    ladder_weight_window,
    two_mode_weight_sum,
    two_mode_weight_window,
)
from .models import ThreeLevelParams, TwoLevelParams

__all__ = [
    "detuning",
    "rabi_frequency_squared",
    "two_beam_detuning",
    "center_rabi_squared",
    "relative_rabi_squared",
    "sweep_two_level",
    "sweep_three_level",
]


def detuning(params: TwoLevelParams) -> float:
    """M-photon drive detuning M*omega - omega0."""
    return params.multiplicity * params.omega - params.omega0


def _to_float(weight: int) -> float:
    try:
        return float(weight)
    except OverflowError:
        raise OverflowError(
            "transition weight exceeds the double-precision range; "
            "reduce the photon numbers or multiplicities"
        ) from None


def rabi_frequency_squared(params: TwoLevelParams, n: int, n_conserved: int) -> float:
    """Signed squared Rabi frequency of the two-level model at (n, N).

    ``n_conserved`` - ``n`` selects the spin sector and must be 0 (ground)
    or M (excited).
    """
    m = params.multiplicity
    if n < 0:
        raise ValueError(f"photon number must be nonnegative, got {n}")
    if n_conserved - n not in (0, m):
        raise ValueError(
            f"n_conserved - n must be 0 or {m} (the two spin sectors), "
            f"got {n_conserved - n}"
        )
    bracket = m * ladder_weight_sum(n, m) - ladder_weight_window(n, m) * (
        m - 2 * n_conserved + 2 * n
    )
    delta = detuning(params)
    return delta * delta + 2.0 * params.g * params.g * _to_float(bracket)


def two_beam_detuning(params: ThreeLevelParams) -> float:
    """Twice the N-photon resonance mismatch of the two-beam drive."""
    return 2.0 * (
        params.omega0
        + params.omega1
        - params.multiplicity * params.omega_l1
        - params.second_multiplicity * params.omega_l2
    )


def center_rabi_squared(params: ThreeLevelParams, n1: int, n2: int) -> float:
    """Signed squared center-of-energies frequency at photon numbers (n1, n2)."""
    eps = two_beam_detuning(params)
    weight = two_mode_weight_sum(n1, n2, params.multiplicity, params.total_photons)
    return (
        -0.5 * eps * (params.omega0 + params.omega1 - params.multiplicity * params.omega_l1)
        + 0.5 * eps * params.second_multiplicity * params.omega_l2
        - params.g * params.g * _to_float(weight)
    )


def relative_rabi_squared(params: ThreeLevelParams, n1: int, n2: int) -> float:
    """Signed squared relative-energy frequency at photon numbers (n1, n2)."""
    eps = two_beam_detuning(params)
    weight = two_mode_weight_window(n1, n2, params.multiplicity, params.total_photons)
    return -0.5 * eps * (params.omega1 - params.omega0) - 2.0 * params.g * params.g * _to_float(
        weight
    )


def _signed_row(value: float) -> dict:
    return {
        "rabi_squared": value,
        "rabi_abs": math.sqrt(abs(value)),
        "sign": (value > 0) - (value < 0),
    }


def sweep_two_level(params: TwoLevelParams, n_values: Iterable[int]) -> list[dict]:
    """Tabulate the two-level frequency over photon numbers.

    Each row is evaluated in the excited sector (n_conserved = n + M, the
    sector that actually oscillates).  Overflowing rows are flagged with
    status "overflow" and carry no numbers.
    """
    rows = []
    for n in n_values:
        row: dict = {"n": int(n), "n_conserved": int(n) + params.multiplicity}
        try:
            row.update(_signed_row(rabi_frequency_squared(params, n, n + params.multiplicity)))
            row["status"] = "ok"
        except OverflowError:
            row.update({"rabi_squared": None, "rabi_abs": None, "sign": None})
            row["status"] = "overflow"
        rows.append(row)
    return rows


def sweep_three_level(
    params: ThreeLevelParams, n1_values: Iterable[int], n2_values: Iterable[int]
) -> list[dict]:
    """Tabulate both three-level frequencies over a (n1, n2) grid."""
    eps = two_beam_detuning(params)
    rows = []
    for n1 in n1_values:
        for n2 in n2_values:
            row: dict = {"n1": int(n1), "n2": int(n2), "two_beam_detuning": eps}
            try:
                center = center_rabi_squared(params, n1, n2)
                relative = relative_rabi_squared(params, n1, n2)
            except OverflowError:
                row.update(
                    {
                        "center_rabi_squared": None,
                        "center_rabi_abs": None,
                        "center_sign": None,
                        "relative_rabi_squared": None,
                        "relative_rabi_abs": None,
                        "relative_sign": None,
                        "status": "overflow",
                    }
                )
            else:
                c = _signed_row(center)
                r = _signed_row(relative)
                row.update(
                    {
                        "center_rabi_squared": c["rabi_squared"],
                        "center_rabi_abs": c["rabi_abs"],
                        "center_sign": c["sign"],
                        "relative_rabi_squared": r["rabi_squared"],
                        "relative_rabi_abs": r["rabi_abs"],
                        "relative_sign": r["sign"],
                        "status": "ok",
                    }
                )
            rows.append(row)
    return rows
