"""Exact algebra of signed Pauli strings and sparse operator sums.

Encoding
--------
A Pauli string on ``n`` sites is stored as two bitmasks plus a phase:

* ``x_mask`` bit ``i-1`` set  <->  an X factor on site ``i`` (sites are 1-based),
* ``z_mask`` bit ``i-1`` set  <->  a Z factor on site ``i``,
* ``phase`` in ``{1, 1j, -1, -1j}``.

The matrix realization is ``phase * prod_i X_i^{x_i} Z_i^{z_i}`` with the X
factor to the left of the Z factor on each site, so a site carrying both bits
is ``X Z = -i Y``; equivalently ``Y = i X Z``.  Products then obey

    (x1, z1) * (x2, z2) = (-1)^{|z1 & x2|} (x1 ^ x2, z1 ^ z2),

which keeps all phases inside ``{1, i, -1, -i}`` exactly.

`OperatorSum` stores a sparse map from phase-free ("bare") keys ``(x, z)`` to
coefficients; all phases live in the coefficients.  Coefficients may be any
scalar supporting field arithmetic: ``float``/``complex`` for numerical work,
``int``/``fractions.Fraction`` for exact work (the bare-key product phase is
always just a sign, so rational coefficients stay rational).

Both value types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Tuple

__all__ = [
    "DimensionError",
    "PauliFormatError",
    "PauliString",
    "OperatorSum",
    "multiply",
    "commutator",
    "anticommutes",
    "trace_inner_product",
    "weight",
    "support",
    "is_symmetric",
    "format_operator",
    "parse_operator",
    "DEFAULT_PRUNE_TOL",
]

DEFAULT_PRUNE_TOL = 1e-14

PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

Key = Tuple[int, int]


class DimensionError(ValueError):
    """Operands are defined on different numbers of sites."""


class PauliFormatError(ValueError):
    """A textual operator could not be parsed."""


def _parity(n: int) -> int:
    return n.bit_count() & 1


def _check_sites(a, b) -> None:
    if a.n_sites != b.n_sites:
        raise DimensionError(
            f"operands act on different chains: {a.n_sites} vs {b.n_sites} sites"
        )


_FACTOR_RE = re.compile(r"^([XYZ])([0-9]+)$")


def _masks_from_factors(spec: str, n_sites: int | None) -> tuple[int, int, int, int]:
    """Parse 'X1 Y2 Z4' into (x_mask, z_mask, y_count, max_site)."""
    x = z = 0
    y_count = 0
    max_site = 0
    for token in spec.split():
        m = _FACTOR_RE.match(token)
        if not m:
            raise PauliFormatError(f"bad site factor {token!r}")
        letter, site_s = m.groups()
        site = int(site_s)
        if site < 1:
            raise PauliFormatError(f"site index must be >= 1, got {site}")
        if n_sites is not None and site > n_sites:
            raise PauliFormatError(f"site {site} outside chain of {n_sites} sites")
        bitmask = 1 << (site - 1)
        if (x | z) & bitmask:
            raise PauliFormatError(f"repeated site in factor list: {token!r}")
        if letter in ("X", "Y"):
            x |= bitmask
        if letter in ("Z", "Y"):
            z |= bitmask
        if letter == "Y":
            y_count += 1
        max_site = max(max_site, site)
    return x, z, y_count, max_site


@dataclass(frozen=True)
class PauliString:
    """A single signed Pauli string in canonical form.

    Two strings are equal iff all four fields are equal.  A string is
    Hermitian iff ``phase**2 == (-1)**y_count`` where ``y_count`` counts sites
    carrying both masks (i.e. real phase with an even number of Y's, or
    imaginary phase with an odd number).
    """

    n_sites: int
    x_mask: int
    z_mask: int
    phase: complex = 1 + 0j

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be positive, got {self.n_sites}")
        full = (1 << self.n_sites) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits outside the chain")
        if self.phase not in PHASES:
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase!r}")
        object.__setattr__(self, "phase", complex(self.phase))

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n_sites: int) -> "PauliString":
        return cls(n_sites, 0, 0, 1 + 0j)

    @classmethod
    def from_label(cls, n_sites: int, spec: str, phase: complex = 1 + 0j) -> "PauliString":
        """Build from a factor list such as ``"X1 Y2 Z4"`` (Hermitian letters).

        The Y letters contribute their ``i`` bookkeeping, so the result is the
        Hermitian product of the listed single-site operators times ``phase``.
        """
        x, z, y_count, _ = _masks_from_factors(spec, n_sites)
        ph = complex(phase) * PHASES[y_count % 4]
        return cls(n_sites, x, z, ph)

    # -- structure ---------------------------------------------------------

    @property
    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def is_hermitian(self) -> bool:
        return self.phase ** 2 == PHASES[2 * (self.y_count % 2)]

    def dagger(self) -> "PauliString":
        sign = -1 if self.y_count & 1 else 1
        return PauliString(self.n_sites, self.x_mask, self.z_mask,
                           self.phase.conjugate() * sign)

    def inverse(self) -> "PauliString":
        # bare keys square to (-1)^{y_count}
        sign = -1 if self.y_count & 1 else 1
        return PauliString(self.n_sites, self.x_mask, self.z_mask,
                           sign / self.phase)

    def as_operator_sum(self) -> "OperatorSum":
        return OperatorSum(self.n_sites, {(self.x_mask, self.z_mask): self.phase})

    def label(self) -> str:
        """Hermitian-letter factor list, e.g. ``"X1 Y2 Z4"`` (phase not shown)."""
        facs = []
        for i in range(1, self.n_sites + 1):
            hx = self.x_mask >> (i - 1) & 1
            hz = self.z_mask >> (i - 1) & 1
            if hx and hz:
                facs.append(f"Y{i}")
            elif hx:
                facs.append(f"X{i}")
            elif hz:
                facs.append(f"Z{i}")
        return " ".join(facs) if facs else "I"

    def __repr__(self) -> str:
        ph = {1 + 0j: "+", 1j: "+i", -1 + 0j: "-", -1j: "-i"}[self.phase]
        return f"PauliString({ph} {self.label()}, n={self.n_sites})"

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Canonical product ``p q`` with the accumulated {+-1, +-i} phase."""
    _check_sites(p, q)
    sign = -1 if _parity(p.z_mask & q.x_mask) else 1
    return PauliString(p.n_sites, p.x_mask ^ q.x_mask, p.z_mask ^ q.z_mask,
                       p.phase * q.phase * sign)


def anticommutes(p: PauliString | Key, q: PauliString | Key) -> bool:
    """True iff the two strings anticommute (odd symplectic overlap)."""
    if isinstance(p, PauliString):
        p = (p.x_mask, p.z_mask)
    if isinstance(q, PauliString):
        q = (q.x_mask, q.z_mask)
    return bool(_parity(p[1] & q[0]) ^ _parity(q[1] & p[0]))


def weight(p: PauliString) -> int:
    """Number of sites acted on non-trivially."""
    return (p.x_mask | p.z_mask).bit_count()


def support(p: PauliString) -> frozenset[int]:
    """Set of 1-based sites acted on non-trivially."""
    m = p.x_mask | p.z_mask
    return frozenset(i + 1 for i in range(p.n_sites) if m >> i & 1)


class OperatorSum:
    """Sparse complex-weighted sum of bare Pauli keys.

    Term keys are phase-canonical ``(x_mask, z_mask)`` pairs; phases live in
    the coefficients.  Coefficients with magnitude below ``tol`` are dropped
    on construction and after every operation (``tol=0`` keeps everything but
    exact zeros, which is the right setting for exact-rational work).
    """

    __slots__ = ("n_sites", "_terms", "tol")

    def __init__(self, n_sites: int, terms: Mapping[Key, complex] | None = None,
                 tol: float = DEFAULT_PRUNE_TOL):
        if n_sites < 1:
            raise ValueError(f"n_sites must be positive, got {n_sites}")
        self.n_sites = n_sites
        self.tol = tol
        full = (1 << n_sites) - 1
        out = {}
        if terms:
            for (x, z), c in terms.items():
                if (x & ~full) or (z & ~full):
                    raise ValueError("term key has bits outside the chain")
                if c == 0 or (tol and abs(c) < tol):
                    continue
                out[(x, z)] = c
        self._terms = out

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_sites: int, tol: float = DEFAULT_PRUNE_TOL) -> "OperatorSum":
        return cls(n_sites, {}, tol)

    @classmethod
    def identity(cls, n_sites: int, coeff=1.0, tol: float = DEFAULT_PRUNE_TOL) -> "OperatorSum":
        return cls(n_sites, {(0, 0): coeff}, tol)

    @classmethod
    def from_terms(cls, n_sites: int, terms: Iterable[tuple], tol: float = DEFAULT_PRUNE_TOL) -> "OperatorSum":
        """Build from ``(coeff, "X1 Z2")`` pairs with Hermitian letters.

        A term ``(c, "Y1 Z2")`` contributes ``c * Y_1 Z_2``; internally the Y
        bookkeeping moves an ``i`` per Y into the stored key coefficient.
        """
        out: dict[Key, complex] = {}
        for c, spec in terms:
            x, z, y_count, _ = _masks_from_factors(spec, n_sites)
            cc = c * PHASES[y_count % 4]
            key = (x, z)
            prev = out.get(key)
            out[key] = cc if prev is None else prev + cc
        return cls(n_sites, out, tol)

    # -- mapping access ----------------------------------------------------

    def terms(self) -> Mapping[Key, complex]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Key, complex]]:
        return iter(self._terms.items())

    def coefficient(self, key: Key | PauliString):
        """Coefficient of a bare key (any phase on a PauliString is divided out)."""
        if isinstance(key, PauliString):
            c = self._terms.get((key.x_mask, key.z_mask), 0)
            return c / key.phase if c else 0
        return self._terms.get(key, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, OperatorSum)
                and self.n_sites == other.n_sites
                and self._terms == other._terms)

    def __repr__(self) -> str:
        return f"OperatorSum(n={self.n_sites}, {len(self._terms)} terms)"

    # -- linear structure ----------------------------------------------------

    def _new(self, terms: dict) -> "OperatorSum":
        return OperatorSum(self.n_sites, terms, self.tol)

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        _check_sites(self, other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return self._new(out)

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        _check_sites(self, other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) - c
        return self._new(out)

    def __neg__(self) -> "OperatorSum":
        return self._new({k: -c for k, c in self._terms.items()})

    def __mul__(self, scalar) -> "OperatorSum":
        return self._new({k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "OperatorSum") -> "OperatorSum":
        """Operator product with exact sign bookkeeping."""
        _check_sites(self, other)
        out: dict[Key, complex] = {}
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                c = c1 * c2
                if _parity(z1 & x2):
                    c = -c
                k = (x1 ^ x2, z1 ^ z2)
                prev = out.get(k)
                out[k] = c if prev is None else prev + c
        return self._new(out)

    def dagger(self) -> "OperatorSum":
        out = {}
        for (x, z), c in self._terms.items():
            cc = c.conjugate()
            if (x & z).bit_count() & 1:
                cc = -cc
            out[(x, z)] = cc
        return self._new(out)

    def conjugate_by(self, g: PauliString) -> "OperatorSum":
        """Return ``g op g^{-1}``: each term flips sign iff it anticommutes with g."""
        _check_sites(self, g)
        gk = (g.x_mask, g.z_mask)
        return self._new({k: (-c if anticommutes(k, gk) else c)
                          for k, c in self._terms.items()})

    # -- metric structure ----------------------------------------------------

    def norm(self) -> float:
        """Normalized trace norm sqrt(Tr(A^dag A) / 2^L) = sqrt(sum |c|^2)."""
        return float(sum(abs(c) ** 2 for c in self._terms.values())) ** 0.5

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """True iff each coefficient matches its key's Hermiticity constraint.

        A bare key with an even Y-count is Hermitian (needs a real
        coefficient); an odd Y-count key is anti-Hermitian (needs an
        imaginary coefficient).
        """
        for (x, z), c in self._terms.items():
            sign = -1 if (x & z).bit_count() & 1 else 1
            if abs(c.conjugate() * sign - c) > tol:
                return False
        return True

    def prune(self, tol: float) -> "OperatorSum":
        return OperatorSum(self.n_sites,
                           {k: c for k, c in self._terms.items() if abs(c) >= tol},
                           self.tol)


def commutator(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    """``[a, b] = ab - ba`` with commuting term pairs skipped exactly.

    Two bare keys commute iff their symplectic overlap is even; for the rest
    the two orderings differ only by a sign, so every surviving pair
    contributes ``2 (-1)^{|z1 & x2|} c1 c2`` on the product key.
    """
    _check_sites(a, b)
    out: dict[Key, complex] = {}
    for (x1, z1), c1 in a._terms.items():
        for (x2, z2), c2 in b._terms.items():
            p1 = _parity(z1 & x2)
            if p1 == _parity(z2 & x1):
                continue
            c = 2 * c1 * c2
            if p1:
                c = -c
            k = (x1 ^ x2, z1 ^ z2)
            prev = out.get(k)
            out[k] = c if prev is None else prev + c
    return OperatorSum(a.n_sites, out, a.tol)


def trace_inner_product(a: OperatorSum, b: OperatorSum):
    """Normalized Hilbert-Schmidt inner product ``Tr(a^dag b) / 2^L``.

    Bare keys are trace-orthonormal, so this is an exact sparse sum over
    shared keys.
    """
    _check_sites(a, b)
    if len(b._terms) < len(a._terms):
        return sum(b._terms[k] * a._terms[k].conjugate()
                   for k in b._terms.keys() & a._terms.keys())
    return sum(a._terms[k].conjugate() * b._terms[k]
               for k in a._terms.keys() & b._terms.keys())


def is_symmetric(op: OperatorSum, g: PauliString) -> bool:
    """True iff ``[g, op] = 0`` exactly (every term commutes with g)."""
    _check_sites(op, g)
    gk = (g.x_mask, g.z_mask)
    return not any(anticommutes(k, gk) for k in op._terms.keys())


# -- textual round-trip format ---------------------------------------------
#
# One term per line: "(coefficient) X1 Z2"; the coefficient parses with
# Python's float/complex syntax, the factors use Hermitian letters.  Lines
# starting with '#' and blank lines are ignored.

def _format_coeff(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    return repr(c).strip("()")


def format_operator(op: OperatorSum) -> str:
    """Serialize one term per line, Hermitian letters, deterministic order."""
    lines = []
    for (x, z), c in sorted(op.items()):
        y_count = (x & z).bit_count()
        # letters absorb an i per Y: letter coefficient = c * i^{y}
        cc = complex(c) * PHASES[y_count % 4]
        p = PauliString(op.n_sites, x, z, 1 + 0j)
        facs = p.label()
        lines.append(f"({_format_coeff(cc)})" + ("" if facs == "I" else f" {facs}"))
    return "\n".join(lines)


_LINE_RE = re.compile(r"^\(([^)]*)\)\s*(.*)$")


def parse_operator(text: str, n_sites: int | None = None) -> OperatorSum:
    """Parse the textual term format back into an OperatorSum.

    If ``n_sites`` is omitted it is inferred from the largest site index
    (identity-only operators then default to one site).
    """
    entries = []
    max_site = 0
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise PauliFormatError(f"line {ln}: expected '(coeff) factors', got {raw!r}")
        coeff_s, factors = m.groups()
        try:
            coeff = complex(coeff_s.strip())
        except ValueError as exc:
            raise PauliFormatError(f"line {ln}: bad coefficient {coeff_s!r}") from exc
        if factors.strip() in ("", "I"):
            entries.append((coeff, 0, 0, 0))
            continue
        x, z, y_count, hi = _masks_from_factors(factors.strip(), n_sites)
        entries.append((coeff, x, z, y_count))
        max_site = max(max_site, hi)
    n = n_sites if n_sites is not None else max(max_site, 1)
    terms: dict[Key, complex] = {}
    for coeff, x, z, y_count in entries:
        cc = coeff * PHASES[y_count % 4]
        key = (x, z)
        terms[key] = terms.get(key, 0) + cc
    return OperatorSum(n, terms)
