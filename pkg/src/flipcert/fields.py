"""Prime fields, small extension fields, and the Frobenius trace machinery.

Extension elements are kept as coefficient tuples over the prime field in the
power basis of a monic irreducible modulus.  The module also provides the
trace bilinear form, Gram matrices, dual bases, and coefficient extraction
via trace products, plus the plain-text field spec format used by the CLI.

Everything is exact; there are no floats anywhere in this module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ParseError, SingularTraceForm, UsageError

# Witness set is deterministic for n < 3.3e24, far beyond desk-scale moduli.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the integer sizes used here."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng: random.Random, bits: int) -> int:
    """Uniform-ish prime with exactly `bits` bits; bits must be >= 16."""
    if bits < 16:
        raise UsageError(f"prime width {bits} below the 16-bit floor")
    while True:
        cand = rng.getrandbits(bits - 1) | (1 << (bits - 1)) | 1
        if is_prime(cand):
            return cand


def int_bitlength(n: int) -> int:
    # Accounting convention: 0 costs one bit, a sign costs one bit.
    return max(1, abs(n).bit_length()) + (1 if n < 0 else 0)


class IntegerRing:
    """The ring of plain Python integers, used for exact evaluation."""

    name = "ZZ"

    @staticmethod
    def from_int(n: int) -> int:
        return n

    @staticmethod
    def coerce(x) -> int:
        if isinstance(x, bool) or not isinstance(x, int):
            raise UsageError(f"expected an integer, got {type(x).__name__}")
        return x

    zero = 0
    one = 1

    def __repr__(self) -> str:
        return "ZZ"


ZZ = IntegerRing()


@dataclass(frozen=True)
class PrimeFieldElement:
    """Residue in F_q; arithmetic stays inside the parent field."""

    value: int
    field: "PrimeField"

    def _peer(self, other) -> "PrimeFieldElement":
        if isinstance(other, PrimeFieldElement):
            if other.field.q != self.field.q:
                raise UsageError("mixed prime fields")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElement((self.value + o.value) % self.field.q, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElement((self.value - o.value) % self.field.q, self.field)

    def __rsub__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElement(self.value * o.value % self.field.q, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value % self.field.q, self.field)

    def __pow__(self, e: int):
        return PrimeFieldElement(pow(self.value, e, self.field.q), self.field)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        return PrimeFieldElement(pow(self.value, -1, self.field.q), self.field)

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.value == other % self.field.q
        return (
            isinstance(other, PrimeFieldElement)
            and other.field.q == self.field.q
            and other.value == self.value
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.value))

    def __repr__(self) -> str:
        return f"{self.value}"


class PrimeField:
    """F_q for prime q."""

    def __init__(self, q: int):
        if not is_prime(q):
            raise UsageError(f"{q} is not prime")
        self.q = q
        self.name = f"F{q}"
        self.zero = PrimeFieldElement(0, self)
        self.one = PrimeFieldElement(1, self)

    def element(self, v: int) -> PrimeFieldElement:
        return PrimeFieldElement(v % self.q, self)

    from_int = element

    def coerce(self, x) -> PrimeFieldElement:
        if isinstance(x, PrimeFieldElement):
            if x.field.q != self.q:
                raise UsageError("element from a different prime field")
            return x
        if isinstance(x, int):
            return self.element(x)
        raise UsageError(f"cannot coerce {type(x).__name__} into {self.name}")

    def elements(self) -> Iterator[PrimeFieldElement]:
        for v in range(self.q):
            yield PrimeFieldElement(v, self)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# Polynomial helpers over F_q.  Polynomials are tuples of residues, ascending
# degree, normalized so the last entry is nonzero (the zero poly is ()).


def _poly_trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_add(a, b, q):
    n = max(len(a), len(b))
    return _poly_trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n)])


def _poly_mul(a, b, q):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _poly_trim(out)


def _poly_mod(a, f, q):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i in range(df + 1):
                a[shift + i] = (a[shift + i] - lead * f[i]) % q
        a.pop()
    return _poly_trim(a)


def _poly_powmod(a, e, f, q):
    result = (1,)
    base = _poly_mod(a, f, q)
    while e > 0:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, q), f, q)
        base = _poly_mod(_poly_mul(base, base, q), f, q)
        e >>= 1
    return result


def _poly_gcd(a, b, q):
    while b:
        lead_inv = pow(b[-1], -1, q)
        bm = tuple(c * lead_inv % q for c in b)
        a, b = b, _poly_mod(a, bm, q)
    if not a:
        return ()
    lead_inv = pow(a[-1], -1, q)
    return tuple(c * lead_inv % q for c in a)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_is_irreducible(f: Sequence[int], q: int) -> bool:
    """Rabin's test for a monic polynomial over F_q."""
    f = tuple(v % q for v in f)
    l = len(f) - 1
    if l < 1 or f[-1] != 1:
        return False
    x = (0, 1)
    # x^(q^l) == x mod f
    if _poly_powmod(x, q**l, f, q) != _poly_mod(x, f, q):
        return False
    for p in _prime_factors(l):
        h = _poly_powmod(x, q ** (l // p), f, q)
        diff = _poly_add(h, tuple(-c % q for c in x), q)
        if _poly_gcd(diff, f, q) != (1,):
            return False
    return True


def find_irreducible(q: int, l: int) -> tuple[int, ...]:
    """First monic irreducible of degree l, scanning the non-leading
    coefficients (f_0, ..., f_{l-1}) in little-endian numeric order."""
    if l == 1:
        return (0, 1)
    for code in range(q**l):
        coeffs, rest = [], code
        for _ in range(l):
            coeffs.append(rest % q)
            rest //= q
        f = tuple(coeffs) + (1,)
        if poly_is_irreducible(f, q):
            return f
    raise UsageError(f"no irreducible of degree {l} over F_{q}")  # unreachable


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtFieldElement:
    """Element of F_{q^l}, stored as power-basis coordinates (len l)."""

    coeffs: tuple[int, ...]
    field: "ExtField"

    def _peer(self, other):
        if isinstance(other, ExtFieldElement):
            if other.field is not self.field and other.field != self.field:
                raise UsageError("mixed extension fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, PrimeFieldElement):
            return self.field.from_int(other.value)
        return NotImplemented

    def __add__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        q = self.field.q
        return ExtFieldElement(
            tuple((a + b) % q for a, b in zip(self.coeffs, o.coeffs)), self.field
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        q = self.field.q
        return ExtFieldElement(
            tuple((a - b) % q for a, b in zip(self.coeffs, o.coeffs)), self.field
        )

    def __rsub__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return o
        F = self.field
        prod = _poly_mod(_poly_mul(self.coeffs, o.coeffs, F.q), F.modulus, F.q)
        return ExtFieldElement(F._pad(prod), F)

    __rmul__ = __mul__

    def __neg__(self):
        q = self.field.q
        return ExtFieldElement(tuple(-a % q for a in self.coeffs), self.field)

    def __pow__(self, e: int):
        F = self.field
        if e < 0:
            return self.inverse() ** (-e)
        out = _poly_powmod(self.coeffs, e, F.modulus, F.q)
        return ExtFieldElement(F._pad(out), F)

    def inverse(self) -> "ExtFieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        # valid because the modulus is irreducible: x^(q^l - 2) = x^-1
        return self ** (self.field.q**self.field.l - 2)

    def frobenius(self) -> "ExtFieldElement":
        return self**self.field.q

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == self.field.from_int(other)
        return (
            isinstance(other, ExtFieldElement)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.field.modulus, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append("t" if c == 1 else f"{c}*t")
            else:
                terms.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
        return " + ".join(terms) if terms else "0"


class ExtField:
    """F_{q^l} presented as F_q[t] modulo a monic irreducible of degree l.

    A designated F_q-basis (default: the power basis 1, t, ..., t^(l-1))
    travels with the field; coefficient extraction and the trace form Gram
    matrix are relative to it.
    """

    def __init__(
        self,
        q: int,
        l: int,
        modulus: Sequence[int] | None = None,
        basis_coords: Sequence[Sequence[int]] | None = None,
    ):
        if l < 1:
            raise UsageError(f"extension degree must be >= 1, got {l}")
        self.base = PrimeField(q)
        self.q = q
        self.l = l
        if modulus is None:
            modulus = find_irreducible(q, l)
        modulus = tuple(v % q for v in modulus)
        if len(modulus) != l + 1 or modulus[-1] != 1:
            raise UsageError("modulus must be monic of degree l")
        if not poly_is_irreducible(modulus, q):
            raise UsageError(f"modulus {modulus} is reducible over F_{q}")
        self.modulus = modulus
        self.name = f"F{q}^{l}"
        if basis_coords is None:
            coords = [[1 if j == i else 0 for j in range(l)] for i in range(l)]
        else:
            coords = [[int(v) % q for v in row] for row in basis_coords]
            if len(coords) != l or any(len(r) != l for r in coords):
                raise UsageError("basis needs l vectors of length l")
            if _matrix_inverse_mod(coords, q) is None:
                raise UsageError("basis coordinate matrix is singular")
        self.basis = tuple(ExtFieldElement(tuple(r), self) for r in coords)
        self.zero = ExtFieldElement((0,) * l, self)
        self.one = self.from_int(1)

    def _pad(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        return tuple(coeffs) + (0,) * (self.l - len(coeffs))

    def element(self, coeffs: Sequence[int]) -> ExtFieldElement:
        """Element from power-basis coordinates."""
        if len(coeffs) > self.l:
            raise UsageError("too many coordinates")
        return ExtFieldElement(self._pad([v % self.q for v in coeffs]), self)

    def from_int(self, n: int) -> ExtFieldElement:
        return self.element([n % self.q])

    def coerce(self, x) -> ExtFieldElement:
        if isinstance(x, ExtFieldElement):
            if x.field != self:
                raise UsageError("element from a different extension field")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, PrimeFieldElement):
            return self.from_int(x.value)
        raise UsageError(f"cannot coerce {type(x).__name__} into {self.name}")

    def gen(self) -> ExtFieldElement:
        """The residue class of t."""
        return self.element([0, 1])

    def elements(self) -> Iterator[ExtFieldElement]:
        for code in range(self.q**self.l):
            coeffs, rest = [], code
            for _ in range(self.l):
                coeffs.append(rest % self.q)
                rest //= self.q
            yield ExtFieldElement(tuple(coeffs), self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtField)
            and other.q == self.q
            and other.l == self.l
            and other.modulus == self.modulus
            and tuple(b.coeffs for b in other.basis) == tuple(b.coeffs for b in self.basis)
        )

    def __hash__(self) -> int:
        return hash(("ExtField", self.q, self.l, self.modulus))

    def __repr__(self) -> str:
        return f"{self.name}(mod {list(self.modulus)})"


def frobenius_trace(x: ExtFieldElement) -> PrimeFieldElement:
    """Trace to the prime field: x + x^q + ... + x^(q^(l-1))."""
    F = x.field
    acc = F.zero
    y = x
    for _ in range(F.l):
        acc = acc + y
        y = y.frobenius()
    if any(acc.coeffs[1:]):
        raise SingularTraceForm("trace landed outside the prime field")  # impossible
    return F.base.element(acc.coeffs[0])


def trace_form_gram(F: ExtField) -> list[list[int]]:
    """Gram matrix G[i][j] = trace(b_i * b_j) as residues, over F's basis."""
    return [
        [frobenius_trace(bi * bj).value for bj in F.basis] for bi in F.basis
    ]


def _matrix_inverse_mod(rows: Sequence[Sequence[int]], q: int):
    """Inverse of a square matrix over F_q, or None if singular."""
    n = len(rows)
    a = [[rows[i][j] % q for j in range(n)] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c] % q), None)
        if piv is None:
            return None
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, q)
        a[r] = [v * inv % q for v in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(a[i][j] - f * a[r][j]) % q for j in range(2 * n)]
        r += 1
    return [row[n:] for row in a]


def dual_basis(F: ExtField) -> tuple[ExtFieldElement, ...]:
    """Basis (b_i*) with trace(b_i* b_j) = delta_ij.

    Raises SingularTraceForm when the Gram matrix is not invertible (cannot
    happen for a separable extension with a genuine basis, but the check is
    what makes the construction trustworthy).
    """
    G = trace_form_gram(F)
    Ginv = _matrix_inverse_mod(G, F.q)
    if Ginv is None:
        raise SingularTraceForm(f"trace form is degenerate on {F.name}")
    out = []
    for i in range(F.l):
        acc = F.zero
        for j in range(F.l):
            acc = acc + F.from_int(Ginv[i][j]) * F.basis[j]
        out.append(acc)
    return tuple(out)


def extract_coeffs(x: ExtFieldElement) -> tuple[int, ...]:
    """Coordinates of x over the field's basis, via trace against the dual."""
    F = x.field
    duals = dual_basis(F)
    return tuple(frobenius_trace(d * x).value for d in duals)


def element_from_coeffs(F: ExtField, coeffs: Sequence[int]) -> ExtFieldElement:
    """Rebuild sum_i coeffs[i] * b_i over the field's designated basis."""
    if len(coeffs) != F.l:
        raise UsageError(f"need exactly {F.l} coordinates")
    acc = F.zero
    for c, b in zip(coeffs, F.basis):
        acc = acc + F.from_int(c) * b
    return acc


def format_field_spec(F: ExtField) -> str:
    """One line: q l f_0 ... f_l (modulus coefficients, ascending)."""
    return " ".join(str(v) for v in (F.q, F.l, *F.modulus))


def parse_field_spec(text: str) -> ExtField:
    parts = text.split()
    if len(parts) < 3:
        raise ParseError("field spec needs at least 'q l f_0 ... f_l'")
    try:
        vals = [int(p) for p in parts]
    except ValueError as e:
        raise ParseError(f"field spec has a non-integer token: {e}") from None
    q, l, mod = vals[0], vals[1], vals[2:]
    if len(mod) != l + 1:
        raise ParseError(f"expected {l + 1} modulus coefficients, got {len(mod)}")
    if not is_prime(q):
        raise ParseError(f"{q} is not prime")
    return ExtField(q, l, modulus=mod)
