"""
Exact arithmetic substrate.

Polynomials are sparse ``PolyElement`` objects of ``sympy.polys.rings`` over
``ZZ``, ``QQ`` or ``QQ_I``; big rationals and Gaussian rationals are the
elements of those domains. This module adds what the rest of the workbench
needs on top: cross-ring substitution, checked division, simple number fields
``Q[x]/(m)`` and exact integer rank.
"""
import logging
import numpy as np
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union
from sympy import QQ, ZZ, QQ_I, randprime
from sympy.polys.rings import ring, PolyElement, PolyRing
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

MultiPoly = PolyElement

def poly_ring(names: str, domain=QQ) -> Tuple[PolyRing, ...]:
    """
    Shorthand for ``sympy.polys.rings.ring``, returns ``(R, x1, ..., xn)``
    """
    return ring(names, domain)

def _generator_index(f: MultiPoly, key) -> int:
    if isinstance(key, int):
        return key
    if isinstance(key, PolyElement):
        key = key.as_expr()
    return [str(s) for s in f.ring.symbols].index(str(key))

def poly_substitute(
    f: MultiPoly,
    assignment: Mapping,
    target: Optional[PolyRing] = None
) -> MultiPoly:
    """
    Substitute a polynomial for every variable of f and expand.

    :param f: polynomial to substitute into
    :param assignment: maps a variable (generator, symbol name or index) to a
                       polynomial of the target ring or to a scalar
    :param target: the ring of the result, defaults to the ring of the first
                   polynomial value in the assignment
    :return: the exact expansion of the composite, an element of ``target``
    """
    values = {}
    for key, value in assignment.items():
        try:
            values[_generator_index(f, key)] = value
        except ValueError:
            raise ValueError("{} is not a variable of {}".format(key, f.ring))

    missing = [str(s) for i, s in enumerate(f.ring.symbols) if i not in values]
    if missing:
        raise ValueError("Assignment is missing the variable(s) {}".format(", ".join(missing)))

    if target is None:
        rings = [v.ring for v in values.values() if isinstance(v, PolyElement)]
        if not rings:
            raise ValueError("A target ring is required when every value is a scalar")
        target = rings[0]

    images = [target(values[i]) if not isinstance(values[i], PolyElement) else values[i].set_ring(target)
              for i in range(f.ring.ngens)]
    powers: Dict[Tuple[int,int], MultiPoly] = {}

    def power(i: int, e: int) -> MultiPoly:
        if (i, e) not in powers:
            powers[(i, e)] = images[i]**e
        return powers[(i, e)]

    result = target.zero
    source = f.ring.domain
    for monom, coeff in f.terms():
        term = target(target.domain.convert(coeff, source))
        for i, e in enumerate(monom):
            if e:
                term = term*power(i, e)
        result += term
    return result

def poly_divrem(f: MultiPoly, g: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    """
    Division with remainder with respect to the lex order of the common ring.

    For univariate f, g this is ordinary long division; for several variables
    the remainder has no term divisible by the leading term of g, so it is
    zero exactly when g divides f.
    """
    if f.ring != g.ring:
        raise ValueError("Both polynomials must live in the same ring")
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    domain = f.ring.domain
    if not domain.is_Field and not domain.is_unit(g.LC):
        raise ValueError("Leading coefficient {} is not invertible in {}".format(g.LC, domain))
    quotient, remainder = f.div(g)
    return quotient, remainder

class QuotRing:
    """
    The ring ``K[x]/(m)`` for a univariate modulus m over a field K.
    The modulus is stored monic, so representatives are canonical.
    """
    def __init__(self, modulus: MultiPoly):
        if modulus.ring.ngens != 1:
            raise ValueError("The modulus must be univariate")
        if not modulus.ring.domain.is_Field:
            modulus = modulus.set_ring(modulus.ring.clone(domain=modulus.ring.domain.get_field()))
        if modulus.degree() < 1:
            raise ValueError("The modulus must have positive degree")
        self.ring = modulus.ring
        self.modulus = modulus.monic()
        self.degree = self.modulus.degree()

    def __call__(self, value) -> "QuotElem":
        if isinstance(value, QuotElem):
            return value
        if isinstance(value, PolyElement):
            return QuotElem(self, value.set_ring(self.ring))
        return QuotElem(self, self.ring(value))

    @property
    def gen(self) -> "QuotElem":
        return self(self.ring.gens[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, QuotRing) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return "QuotRing({})".format(self.modulus.as_expr())

class QuotElem:
    __slots__ = ("parent", "value")

    def __init__(self, parent: QuotRing, value: MultiPoly):
        self.parent = parent
        self.value = value.rem(parent.modulus)

    def _coerce(self, other) -> "QuotElem":
        if isinstance(other, QuotElem):
            if other.parent != self.parent:
                raise ValueError("Elements of different quotient rings")
            return other
        return self.parent(other)

    def __add__(self, other):
        return QuotElem(self.parent, self.value + self._coerce(other).value)

    __radd__ = __add__

    def __sub__(self, other):
        return QuotElem(self.parent, self.value - self._coerce(other).value)

    def __rsub__(self, other):
        return QuotElem(self.parent, self._coerce(other).value - self.value)

    def __neg__(self):
        return QuotElem(self.parent, -self.value)

    def __mul__(self, other):
        return QuotElem(self.parent, self.value*self._coerce(other).value)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse()**(-e)
        result, base = self.parent(1), self
        while e:
            if e & 1:
                result = result*base
            base = base*base
            e >>= 1
        return result

    def inverse(self) -> "QuotElem":
        s, _, h = self.value.gcdex(self.parent.modulus)
        if h.degree() != 0:
            raise ZeroDivisionError("{} is not invertible modulo {}".format(
                self.value.as_expr(), self.parent.modulus.as_expr()))
        return QuotElem(self.parent, s.quo_ground(h.LC))

    def __truediv__(self, other):
        return self*self._coerce(other).inverse()

    def __eq__(self, other) -> bool:
        try:
            return self.value == self._coerce(other).value
        except (ValueError, TypeError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.parent, self.value))

    def __bool__(self) -> bool:
        return bool(self.value)

    def coeffs(self) -> List:
        """Coefficients of the canonical representative, constant term first."""
        dense = [self.parent.ring.domain.zero]*self.parent.degree
        for (e,), c in self.value.terms():
            dense[e] = c
        return dense

    def matrix(self) -> List[List]:
        """Matrix of multiplication by self in the basis 1, x, ..., x^(n-1)."""
        n = self.parent.degree
        x = self.parent.gen
        columns, basis = [], self.parent(1)
        for _ in range(n):
            columns.append((self*basis).coeffs())
            basis = basis*x
        return [[columns[j][i] for j in range(n)] for i in range(n)]

    def __repr__(self) -> str:
        return "QuotElem({} mod {})".format(self.value.as_expr(), self.parent.modulus.as_expr())

def rank_primes(count: int = 3, bits: int = 30) -> List[int]:
    """Distinct random primes of the given bit length, largest first."""
    primes = set()
    while len(primes) < count:
        primes.add(randprime(1 << (bits - 1), 1 << bits))
    return sorted(primes, reverse=True)

def modular_rref(rows, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over F_p by Gaussian elimination on int64 arrays,
    with the list of pivot columns. p must be below 2^31 so that products fit.
    """
    a = np.array([[int(v) % p for v in row] for row in rows], dtype=np.int64).reshape(len(rows), -1)
    pivots: List[int] = []
    if a.size == 0:
        return a, pivots
    nrows, ncols = a.shape
    for col in range(ncols):
        rank = len(pivots)
        if rank == nrows:
            break
        nonzero = np.nonzero(a[rank:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] = (a[rank]*pow(int(a[rank, col]), -1, p)) % p
        factors = a[:, col].copy()
        factors[rank] = 0
        touched = np.nonzero(factors)[0]
        if touched.size:
            a[touched] = (a[touched] - np.outer(factors[touched], a[rank])) % p
        pivots.append(col)
    return a, pivots

def modular_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(modular_rref(rows, p)[1])

def modular_solve(a, b, p: int) -> np.ndarray:
    """X with A X = B over F_p, for a square A invertible modulo p."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    n = a.shape[0]
    reduced, pivots = modular_rref(np.hstack([a, b]), p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("The matrix is singular modulo {}".format(p))
    return reduced[:, n:]

def int_rank(rows: Sequence[Sequence[int]], exact: bool = True) -> int:
    """
    Rank over Q of an integer matrix.

    The exact rank comes from fraction-free elimination over ZZ; it is
    cross-checked against the rank modulo three random 30-bit primes.
    A modular rank can only drop at a prime dividing all maximal minors, so a
    modular rank above the exact one means the elimination is wrong.

    :param rows: the matrix as a sequence of integer rows
    :param exact: skip the elimination and return the largest modular rank
    """
    rows = [[int(v) for v in row] for row in rows]
    if not rows or not rows[0]:
        return 0
    modular = {p: modular_rank(rows, p) for p in rank_primes()}
    if not exact:
        return max(modular.values())

    shape = (len(rows), len(rows[0]))
    matrix = DomainMatrix([[ZZ(v) for v in row] for row in rows], shape, ZZ)
    _, _, pivots = matrix.rref_den()
    rank = len(pivots)
    for p, r in modular.items():
        if r > rank:
            raise RuntimeError("Rank mod {} is {} but the exact rank is {}".format(p, r, rank))
        if r < rank:
            logger.warning("Rank drops to %d modulo %d (exact rank %d)", r, p, rank)
    logger.debug("Exact rank %d of a %dx%d matrix", rank, *shape)
    return rank
