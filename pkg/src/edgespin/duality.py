"""Sublattice duality between the ZXZ chain and two coupled Ising chains.

The duality acts on the Pauli generators as a string-attachment rewrite:

* ``X_i -> X_i``,
* ``Z_{2j-1} -> L_j Z_{2j-1}`` with the left-going even-sublattice string
  ``L_j = prod_{k<j} X_{2k}``,
* ``Z_{2j} -> Z_{2j} R_j`` with the right-going odd-sublattice string
  ``R_j = prod_{k>j} X_{2k-1}``,

extended multiplicatively to arbitrary Pauli strings (a site carrying both
masks maps to image(X) * image(Z), phases resolved by the exact product rule).
Under this map the three-site ZXZ stabilizers become the two-site Ising
bonds of the matching sublattice, the rewrite is an involution, and any
operator even under both sublattice spin flips keeps a local image.

Sign normalization: the even-site rewrite carries no sign for any chain
length.  The corresponding dense unitary is the X-diagonal product ``V W``
(built in :func:`dense_duality_unitary`) times a global even-sublattice spin
flip when ``M = L/2`` is odd; all variants are Hermitian involutions, and the
normalized one is the unique choice for which the boundary triple maps to
``(Z2 G_o, i Z1 Z2 G_o, Z1)`` with no M-dependent sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import ModelError, symmetry_operators
from .pauli import DimensionError, OperatorSum, _parity, is_symmetric

__all__ = ["DualityContext", "SymmetryError", "dualize", "dense_duality_unitary",
           "MAX_DENSE_DUALITY_SITES"]

MAX_DENSE_DUALITY_SITES = 10


class SymmetryError(ValueError):
    """Operator fails a required symmetry condition."""


@dataclass(frozen=True)
class DualityContext:
    """Chain geometry for the duality: L = 2M sites."""

    L: int

    def __post_init__(self):
        if self.L < 4 or self.L % 2:
            raise ModelError(f"duality needs an even L >= 4, got {self.L}")

    @property
    def M(self) -> int:
        return self.L // 2


def _generator_images(L: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Per-site bare-key images (x_img, z_img) of X_i and Z_i."""
    M = L // 2
    ximg = [(1 << i, 0) for i in range(L)]
    zimg = []
    for i in range(1, L + 1):
        zbit = 1 << (i - 1)
        if i % 2:  # odd site: left string of even-site X's
            j = (i + 1) // 2
            s = 0
            for k in range(1, j):
                s |= 1 << (2 * k - 1)
            zimg.append((s, zbit))
        else:  # even site: right string of odd-site X's
            j = i // 2
            s = 0
            for k in range(j + 1, M + 1):
                s |= 1 << (2 * k - 2)
            zimg.append((s, zbit))
    return ximg, zimg


def dualize(op: OperatorSum, ctx: DualityContext | None = None, *,
            require_symmetric: bool = False) -> OperatorSum:
    """Apply the duality rewrite to every term of ``op``.

    Non-symmetric inputs are mapped faithfully (their images may carry global
    strings); with ``require_symmetric`` such inputs are rejected instead.
    """
    if ctx is None:
        ctx = DualityContext(op.n_sites)
    if op.n_sites != ctx.L:
        raise DimensionError(f"operator has {op.n_sites} sites, context expects {ctx.L}")
    if require_symmetric:
        ge, go = symmetry_operators(ctx.L)
        if not (is_symmetric(op, ge) and is_symmetric(op, go)):
            raise SymmetryError("operator is not even under both sublattice spin flips")
    ximg, zimg = _generator_images(ctx.L)
    out: dict[tuple[int, int], complex] = {}
    for (x, z), c in op.items():
        ax = az = 0
        sign = 0  # exponent of (-1) from reordering bare factors
        m = x | z
        while m:
            i0 = (m & -m).bit_length() - 1  # lowest occupied site, 0-based
            m &= m - 1
            mask = 1 << i0
            if x & mask:
                fx, fz = ximg[i0]
                sign ^= _parity(az & fx)
                ax ^= fx
                az ^= fz
            if z & mask:
                fx, fz = zimg[i0]
                sign ^= _parity(az & fx)
                ax ^= fx
                az ^= fz
        key = (ax, az)
        cc = -c if sign else c
        prev = out.get(key)
        out[key] = cc if prev is None else prev + cc
    return OperatorSum(ctx.L, out, op.tol)


def dense_duality_unitary(ctx: DualityContext) -> np.ndarray:
    """Dense oracle for the duality: Hermitian involutive unitary U.

    ``U = V W`` with ``W`` a product of even-site spin flips over alternate
    unit cells and ``V`` a product of controlled odd-site flips conditioned on
    the even-sublattice parity to the left; for odd ``M`` a global
    even-sublattice flip is appended so the conjugation action matches
    :func:`dualize` at every L.  Limited to ``L <= 10`` (2^L dense).
    """
    L = ctx.L
    if L > MAX_DENSE_DUALITY_SITES:
        raise ModelError(
            f"dense duality oracle supports L <= {MAX_DENSE_DUALITY_SITES}, got {L}")
    M = ctx.M
    dim = 1 << L
    idx = np.arange(dim)

    def xflip(site: int) -> np.ndarray:
        P = np.zeros((dim, dim))
        P[idx ^ (1 << (site - 1)), idx] = 1.0
        return P

    I = np.eye(dim)
    W = I
    for j in range(1, M + 1, 2):
        W = W @ (-xflip(2 * j))
    V = I
    for j in range(1, M + 1):
        S = I
        for i in range(1, j):
            S = S @ xflip(2 * i)
        P = (I - S) / 2
        V = V @ (-xflip(2 * j - 1) @ P + (I - P))
    U = V @ W
    if M % 2:
        Ge = I
        for j in range(1, M + 1):
            Ge = Ge @ xflip(2 * j)
        U = U @ Ge
    return U
