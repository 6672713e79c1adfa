"""
Finite fields F_q, q = p^k with k <= 4.

An element is addressed by its integer code sum(c_i * p^i), where c_i is the
coefficient of X^i in the representative modulo the defining polynomial.
Codes make every field element a valid numpy index, so the counting kernels
work on whole arrays of points at once: for k = 1 the arithmetic is plain
modular arithmetic on int64, for k > 1 it goes through addition and
multiplication tables built from discrete logarithms of a primitive element.
"""
import itertools
import logging
import numpy as np
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union
from sympy import ZZ, factorint, isprime
from sympy.polys.galoistools import (
    gf_gcd,
    gf_irreducible_p,
    gf_mul,
    gf_pow_mod,
    gf_rem,
    gf_sub,
    gf_add,
    gf_neg,
    gf_strip
)
from sympy.polys.rings import PolyElement
from maschke_octic.exceptions import BadReductionError

logger = logging.getLogger(__name__)

TABLE_LIMIT = 2500

class FieldCtx:
    """
    Arithmetic context for F_{p^k}.

    :param p: the characteristic
    :param k: the extension degree
    :param modulus: monic irreducible polynomial of degree k over F_p, dense,
                    highest coefficient first (galoistools convention)
    :param table_limit: build full addition/multiplication tables when q is at most this
    """
    def __init__(self, p: int, k: int, modulus: Sequence[int], table_limit: int = TABLE_LIMIT):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(int(c) for c in modulus)
        self.has_tables = k == 1 or self.q <= table_limit
        self._powers: Dict[int, np.ndarray] = {}
        if k == 1:
            self._build_prime_tables()
        elif self.has_tables:
            self._build_extension_tables()

    # -- construction --------------------------------------------------------

    def _build_prime_tables(self) -> None:
        p = self.p
        x = np.arange(p, dtype=np.int64)
        squares = (x*x) % p
        self._chi = np.full(p, -1, dtype=np.int8)
        self._chi[squares] = 1
        self._chi[0] = 0
        self._sqrt = np.full(p, -1, dtype=np.int64)
        self._sqrt[squares[::-1]] = x[::-1]
        self._inv = np.zeros(p, dtype=np.int64)
        self._inv[1:] = [pow(int(v), -1, p) for v in range(1, p)]

    def _build_extension_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        generator = self._primitive_code()
        exp = np.zeros(q - 1, dtype=np.int64)
        current = [1]
        gen_poly = self._to_gf(generator)
        for e in range(q - 1):
            exp[e] = self._from_gf(current)
            current = gf_rem(gf_mul(current, gen_poly, p, ZZ), list(self.modulus), p, ZZ)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)

        digits = np.array([[(c // p**i) % p for i in range(k)] for c in range(q)], dtype=np.int64)
        weights = p**np.arange(k, dtype=np.int64)
        add = np.zeros((q, q), dtype=np.int32)
        for i in range(k):
            add += (((digits[:, None, i] + digits[None, :, i]) % p)*weights[i]).astype(np.int32)
        mul = exp[(log[:, None] + log[None, :]) % (q - 1)].astype(np.int32)
        mul[0, :] = 0
        mul[:, 0] = 0

        self._exp, self._log = exp, log
        self._add, self._mul = add, mul
        self._neg = (((-digits) % p)*weights).sum(axis=1)
        self._inv = np.zeros(q, dtype=np.int64)
        self._inv[1:] = exp[(-log[1:]) % (q - 1)]
        self._chi = np.where(log % 2 == 0, 1, -1).astype(np.int8)
        self._chi[0] = 0
        self._sqrt = np.full(q, -1, dtype=np.int64)
        half = np.arange(0, q - 1, 2, dtype=np.int64)
        self._sqrt[exp[half]] = exp[half // 2]
        self._sqrt[0] = 0
        logger.debug("Built arithmetic tables for F_%d (generator code %d)", q, generator)

    def _primitive_code(self) -> int:
        order = self.q - 1
        prime_divisors = list(factorint(order))
        for code in range(2, self.q):
            poly = self._to_gf(code)
            if all(gf_pow_mod(poly, order // l, list(self.modulus), self.p, ZZ) != [1]
                   for l in prime_divisors):
                return code
        raise RuntimeError("F_{} has no primitive element, the modulus is not irreducible".format(self.q))

    # -- codes ---------------------------------------------------------------

    def coeffs(self, code: int) -> Tuple[int, ...]:
        """Coefficients of X^0, ..., X^(k-1)."""
        return tuple((code // self.p**i) % self.p for i in range(self.k))

    def code(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.k:
            raise ValueError("Expected at most {} coefficients, got {}".format(self.k, len(coeffs)))
        return sum((int(c) % self.p)*self.p**i for i, c in enumerate(coeffs))

    def _to_gf(self, code: int) -> List[int]:
        return gf_strip(list(reversed(self.coeffs(code))))

    def _from_gf(self, poly: Sequence[int]) -> int:
        return self.code([int(c) for c in reversed(poly)])

    def constant(self, value: int) -> int:
        return int(value) % self.p

    def element(self, value: Union[int, Sequence[int], "FqElem"]) -> "FqElem":
        if isinstance(value, FqElem):
            return value
        if isinstance(value, (list, tuple)):
            return FqElem(self, self.code(value))
        return FqElem(self, self.constant(value))

    def elements(self) -> List["FqElem"]:
        return [FqElem(self, c) for c in range(self.q)]

    # -- scalar arithmetic on codes -----------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.has_tables:
            return self._add.item(a, b)
        return self._from_gf(gf_add(self._to_gf(a), self._to_gf(b), self.p, ZZ))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.has_tables:
            return self._neg.item(a)
        return self._from_gf(gf_neg(self._to_gf(a), self.p, ZZ))

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        if self.has_tables:
            return self._add.item(a, self._neg.item(b))
        return self._from_gf(gf_sub(self._to_gf(a), self._to_gf(b), self.p, ZZ))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a*b) % self.p
        if self.has_tables:
            return self._mul.item(a, b)
        return self._from_gf(gf_rem(gf_mul(self._to_gf(a), self._to_gf(b), self.p, ZZ),
                                    list(self.modulus), self.p, ZZ))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        if self.has_tables:
            return self._exp.item((self._log.item(a)*e) % (self.q - 1))
        return self._from_gf(gf_pow_mod(self._to_gf(a), e, list(self.modulus), self.p, ZZ))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_{}".format(self.q))
        if self.has_tables:
            return self._inv.item(a)
        return self.pow(a, self.q - 2)

    def chi(self, a: int) -> int:
        """Quadratic character, table lookup or a^((q-1)/2)."""
        if self.has_tables:
            return self._chi.item(a)
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def sqrt(self, a: int) -> Optional[int]:
        """A square root of a, or None for a non-square."""
        if self.has_tables:
            root = self._sqrt.item(a)
            return None if root < 0 else root
        if a == 0:
            return 0
        roots = _distinct_roots([self.neg(a), 0, 1], self)
        return roots[0] if roots else None

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    # -- vectorised arithmetic on code arrays --------------------------------

    def _require_tables(self) -> None:
        if not self.has_tables:
            raise ValueError("Vector arithmetic over F_{} needs q <= the table limit".format(self.q))

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a + b) % self.p
        self._require_tables()
        return self._add[a, b].astype(np.int64)

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (-a) % self.p
        self._require_tables()
        return self._neg[a]

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a*b) % self.p
        self._require_tables()
        return self._mul[a, b].astype(np.int64)

    def vscale(self, c: int, a: np.ndarray) -> np.ndarray:
        """Multiply an array by the field constant with code c."""
        if self.k == 1:
            return (c*a) % self.p
        self._require_tables()
        return self._mul[c][a].astype(np.int64)

    def power_table(self, e: int) -> np.ndarray:
        if e not in self._powers:
            self._require_tables()
            self._powers[e] = np.array([self.pow(c, e) for c in range(self.q)], dtype=np.int64)
        return self._powers[e]

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        if e == 1:
            return a
        return self.power_table(e)[a]

    def vinv(self, a: np.ndarray) -> np.ndarray:
        """Elementwise inverse, 0 is sent to 0."""
        self._require_tables()
        return self._inv[a]

    def vchi(self, a: np.ndarray) -> np.ndarray:
        self._require_tables()
        return self._chi[a].astype(np.int64)

    def vsqrt(self, a: np.ndarray) -> np.ndarray:
        """Elementwise square root, -1 marks non-squares."""
        self._require_tables()
        return self._sqrt[a]

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return "FieldCtx(p={}, k={}, modulus={})".format(self.p, self.k, list(self.modulus))

class FqElem:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = int(code)

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.ctx.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.ctx != self.ctx:
                raise ValueError("Elements of different fields")
            return other.code
        return self.ctx.constant(other)

    def __add__(self, other):
        return FqElem(self.ctx, self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FqElem(self.ctx, self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FqElem(self.ctx, self.ctx.sub(self._other(other), self.code))

    def __neg__(self):
        return FqElem(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, other):
        return FqElem(self.ctx, self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FqElem(self.ctx, self.ctx.mul(self.code, self.ctx.inv(self._other(other))))

    def __pow__(self, e: int):
        return FqElem(self.ctx, self.ctx.pow(self.code, e))

    def inverse(self) -> "FqElem":
        return FqElem(self.ctx, self.ctx.inv(self.code))

    def frobenius(self) -> "FqElem":
        return FqElem(self.ctx, self.ctx.frobenius(self.code))

    def sqrt(self) -> Optional["FqElem"]:
        root = self.ctx.sqrt(self.code)
        return None if root is None else FqElem(self.ctx, root)

    def __eq__(self, other) -> bool:
        if isinstance(other, (FqElem, int)):
            return self.code == self._other(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        return "FqElem({}, q={})".format(list(self.coeffs), self.ctx.q)

@lru_cache(maxsize=None)
def build_ext(p: int, k: int = 1, check_reduction: bool = True, table_limit: int = TABLE_LIMIT) -> FieldCtx:
    """
    Deterministic F_{p^k}: the modulus is the first monic irreducible
    polynomial of degree k, scanning the lower coefficients in lexicographic
    order (highest first).

    :param p: odd prime, > 5 unless ``check_reduction`` is off
    :param k: extension degree, 1 to 4
    """
    if not isprime(p) or p == 2:
        raise ValueError("{} is not an odd prime".format(p))
    if check_reduction and p <= 5:
        raise BadReductionError(status_code=2, message="p = {} has bad reduction, need p > 5".format(p))
    if not 1 <= k <= 4:
        raise ValueError("Extension degree must be between 1 and 4, got {}".format(k))
    if k == 1:
        return FieldCtx(p, 1, (1, 0), table_limit)

    for lower in itertools.product(range(p), repeat=k):
        modulus = [1] + list(lower)
        if gf_irreducible_p(modulus, p, ZZ):
            _verify_modulus(modulus, p, k)
            return FieldCtx(p, k, modulus, table_limit)
    raise RuntimeError("No irreducible polynomial of degree {} over F_{}".format(k, p))

def _verify_modulus(modulus: List[int], p: int, k: int) -> None:
    x = [1, 0]
    for j in range(1, k):
        frob = gf_pow_mod(x, p**j, modulus, p, ZZ)
        if gf_gcd(gf_sub(frob, x, p, ZZ), modulus, p, ZZ) != [1]:
            raise RuntimeError("{} has a factor of degree {} over F_{}".format(modulus, j, p))
    if gf_sub(gf_pow_mod(x, p**k, modulus, p, ZZ), x, p, ZZ) != []:
        raise RuntimeError("X^(p^k) != X modulo {}".format(modulus))

def quad_char(u: FqElem) -> int:
    """
    0 for u = 0, +1 for a non-zero square, -1 otherwise
    """
    return u.ctx.chi(u.code)

# -- polynomials over F_q as code lists, constant term first -----------------

def _trim(f: List[int]) -> List[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f

def _psub(a: List[int], b: List[int], ctx: FieldCtx) -> List[int]:
    n = max(len(a), len(b))
    a = list(a) + [0]*(n - len(a))
    b = list(b) + [0]*(n - len(b))
    return _trim([ctx.sub(x, y) for x, y in zip(a, b)])

def _pmul(a: List[int], b: List[int], ctx: FieldCtx) -> List[int]:
    if not a or not b:
        return []
    out = [0]*(len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return _trim(out)

def _pdivmod(f: List[int], g: List[int], ctx: FieldCtx) -> Tuple[List[int], List[int]]:
    f, g = _trim(f), _trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return [], f
    inv_lc = ctx.inv(g[-1])
    r = list(f)
    quotient = [0]*(len(f) - len(g) + 1)
    for i in range(len(f) - len(g), -1, -1):
        c = ctx.mul(r[i + len(g) - 1], inv_lc)
        quotient[i] = c
        if c:
            for j, gj in enumerate(g):
                if gj:
                    r[i + j] = ctx.sub(r[i + j], ctx.mul(c, gj))
    return _trim(quotient), _trim(r[:len(g) - 1])

def _monic(f: List[int], ctx: FieldCtx) -> List[int]:
    inv_lc = ctx.inv(f[-1])
    return [ctx.mul(c, inv_lc) for c in f]

def _pgcd(a: List[int], b: List[int], ctx: FieldCtx) -> List[int]:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdivmod(a, b, ctx)[1]
    return _monic(a, ctx) if a else []

def _ppowmod(base: List[int], e: int, m: List[int], ctx: FieldCtx) -> List[int]:
    result = [1]
    base = _pdivmod(base, m, ctx)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, ctx), m, ctx)[1]
        base = _pdivmod(_pmul(base, base, ctx), m, ctx)[1]
        e >>= 1
    return result

def _split(h: List[int], ctx: FieldCtx) -> List[int]:
    """Roots of a monic product of distinct linear factors."""
    degree = len(h) - 1
    if degree <= 0:
        return []
    if degree == 1:
        return [ctx.neg(h[0])]
    half = (ctx.q - 1) // 2
    for shift in range(ctx.q):
        g = _pgcd(_psub(_ppowmod([shift, 1], half, h, ctx), [1], ctx), h, ctx)
        if 0 < len(g) - 1 < degree:
            return _split(g, ctx) + _split(_pdivmod(h, g, ctx)[0], ctx)
    raise RuntimeError("Equal-degree splitting failed, the input has repeated roots")

def _distinct_roots(f: Sequence[int], ctx: FieldCtx) -> List[int]:
    """Codes of the distinct roots in F_q of f (codes, constant term first)."""
    f = _trim(f)
    if len(f) <= 1:
        return []
    f = _monic(f, ctx)
    frobenius = _ppowmod([0, 1], ctx.q, f, ctx)
    h = _pgcd(_psub(frobenius, [0, 1], ctx), f, ctx)
    return sorted(_split(h, ctx))

def low_degree_roots(
    f: Sequence[Union[int, FqElem]],
    ctx: FieldCtx
) -> List[Tuple[FqElem, int]]:
    """
    Roots in F_q of a polynomial of degree at most 4, with multiplicities.

    :param f: coefficients, constant term first; integers are read as elements of F_p
    :param ctx: the field
    :return: pairs (root, multiplicity) ordered by code
    """
    codes = _trim([ctx.element(c).code for c in f])
    if not codes:
        raise ValueError("The zero polynomial has every element as a root")
    if len(codes) - 1 > 4:
        raise ValueError("Degree {} is above 4".format(len(codes) - 1))

    found = []
    for root in _distinct_roots(codes, ctx):
        multiplicity, current = 0, codes
        while True:
            quotient, remainder = _pdivmod(current, [ctx.neg(root), 1], ctx)
            if remainder:
                break
            multiplicity += 1
            current = quotient
        found.append((FqElem(ctx, root), multiplicity))
    return found

class PolyEvaluator:
    """
    Vectorised evaluation of an integer polynomial at arrays of F_q points.

    :param poly: a ``PolyElement`` over ZZ (or QQ with integral coefficients)
    :param ctx: the field to evaluate in
    """
    def __init__(self, poly: PolyElement, ctx: FieldCtx):
        self.ctx = ctx
        self.nvars = poly.ring.ngens
        self.terms = []
        for monom, coeff in sorted(poly.terms()):
            code = ctx.constant(int(coeff))
            if code:
                self.terms.append((code, tuple((i, e) for i, e in enumerate(monom) if e)))

    def __call__(self, *coords: np.ndarray) -> np.ndarray:
        if len(coords) != self.nvars:
            raise ValueError("Expected {} coordinate arrays, got {}".format(self.nvars, len(coords)))
        ctx = self.ctx
        shape = np.broadcast(*coords).shape
        total = np.zeros(shape, dtype=np.int64)
        for code, factors in self.terms:
            value = np.full(shape, code, dtype=np.int64)
            for i, e in factors:
                value = ctx.vmul(value, ctx.vpow(np.broadcast_to(coords[i], shape), e))
            total = ctx.vadd(total, value)
        return total
