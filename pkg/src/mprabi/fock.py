"""Truncated bosonic ladder operators and exact transition-weight arithmetic.

A mode truncated at ``dim`` keeps the number states |0>..|dim-1>.  The
annihilation matrix follows the usual <n-1|a|n> = sqrt(n) convention; all
multiphoton matrix elements are square roots of the exact integer products
computed by the functions below.

Conventions for the integer weights, used throughout:

* the reciprocal factorial of a negative integer is zero, so an m-step
  lowering weight vanishes below the vacuum,
* empty sums are 0 and empty products are 1, which makes the two-mode
  weights collapse to the single-mode ones when the second mode carries
  zero photons per transition.

All weights are plain Python integers, hence exact at any size; conversion
to floating point (done by consumers) is where range errors can occur and
is reported there as :class:`OverflowError`, never as a wrong number.
"""

from __future__ import annotations

import numpy as np

from .algebra import Operator

__all__ = [
    "annihilation",
    "creation",
    "number_operator",
    "ladder_power",
    "falling_factorial",
    "rising_factorial",
    "ladder_weight_sum",
    "ladder_weight_window",
    "two_mode_weight_sum",
    "two_mode_weight_window",
]


def _check_dim(dim: int) -> None:
    if dim < 2:
        raise ValueError(f"Fock truncation must keep at least 2 states, got {dim}")


def annihilation(dim: int) -> Operator:
    """Truncated annihilation operator, <n-1|a|n> = sqrt(n)."""
    _check_dim(dim)
    return Operator(np.diag(np.sqrt(np.arange(1.0, dim)), 1), (dim,))


def creation(dim: int) -> Operator:
    """Truncated creation operator, the conjugate transpose of annihilation."""
    return annihilation(dim).dag()


def number_operator(dim: int) -> Operator:
    """Photon-number operator as an exact integer diagonal.

    Built directly as diag(0..dim-1) rather than as the product a†a, whose
    sqrt(n)*sqrt(n) entries pick up rounding; conservation residuals stay
    exactly zero this way.
    """
    _check_dim(dim)
    return Operator(np.diag(np.arange(dim, dtype=float)), (dim,))


def ladder_power(dim: int, steps: int, raising: bool = False) -> Operator:
    """m-fold matrix power of the truncated ladder operator.

    The raising power is returned as the conjugate transpose of the lowering
    power so the pair is exactly mutually adjoint.
    """
    if steps < 1:
        raise ValueError(f"ladder power must be >= 1, got {steps}")
    low = Operator(np.linalg.matrix_power(annihilation(dim).mat, steps), (dim,))
    return low.dag() if raising else low


def falling_factorial(n: int, m: int) -> int:
    """n(n-1)...(n-m+1), and 0 when n < m (lowering below the vacuum).

    ``m = 0`` is the empty product, 1.
    """
    _check_args(n, m)
    if n < m:
        return 0
    out = 1
    for k in range(m):
        out *= n - k
    return out


def rising_factorial(n: int, m: int) -> int:
    """(n+1)(n+2)...(n+m); the empty product for m = 0."""
    _check_args(n, m)
    out = 1
    for k in range(1, m + 1):
        out *= n + k
    return out


def _check_args(n: int, m: int) -> None:
    if n < 0:
        raise ValueError(f"photon number must be nonnegative, got {n}")
    if m < 0:
        raise ValueError(f"step count must be nonnegative, got {m}")


def ladder_weight_sum(n: int, m: int) -> int:
    """Combined m-photon emission + absorption weight at |n>.

    Equals the diagonal matrix element <n| a†^m a^m + a^m a†^m |n> of an
    untruncated mode: falling_factorial(n, m) + rising_factorial(n, m).
    """
    if m < 1:
        raise ValueError(f"photon multiplicity must be >= 1, got {m}")
    return falling_factorial(n, m) + rising_factorial(n, m)


def ladder_weight_window(n: int, m: int) -> int:
    """Window sum of (m-1)-step weights over |n>..|n+m-1>.

    Sum over alpha = 0..m-1 of (n+alpha)! / (n-m+alpha+1)!, each term a
    falling factorial of length m-1.  Satisfies the telescoping identity
    rising - falling = m * window, which the tests exploit as an
    independent oracle.
    """
    if m < 1:
        raise ValueError(f"photon multiplicity must be >= 1, got {m}")
    _check_args(n, m)
    return sum(falling_factorial(n + alpha, m - 1) for alpha in range(m))


def _check_two_mode(m: int, total: int) -> None:
    if m < 1:
        raise ValueError(f"photon multiplicity must be >= 1, got {m}")
    if total < m:
        raise ValueError(
            f"total photon number {total} must be >= the first-beam multiplicity {m}"
        )


def two_mode_weight_sum(n1: int, n2: int, m: int, total: int) -> int:
    """Two-beam emission + absorption weight at |n1, n2>.

    Product form: falling(n1,m)*falling(n2,total-m)
    + rising(n1,m)*rising(n2,total-m).  For total = m the second-mode
    factors are empty products, so this collapses to the single-mode
    weight sum.
    """
    _check_two_mode(m, total)
    k = total - m
    return falling_factorial(n1, m) * falling_factorial(n2, k) + rising_factorial(
        n1, m
    ) * rising_factorial(n2, k)


def two_mode_weight_window(n1: int, n2: int, m: int, total: int) -> int:
    """Two-beam analog of the window weight.

    m * falling(n2, total-m) * window(n1, m)
    + (total-m) * falling(n1, m) * window(n2, total-m), with the second
    term dropping out entirely when total = m (its window sum is empty).
    """
    _check_two_mode(m, total)
    k = total - m
    first = m * falling_factorial(n2, k) * ladder_weight_window(n1, m)
    second = 0
    if k >= 1:
        second = k * falling_factorial(n1, m) * ladder_weight_window(n2, k)
    return first + second
