"""
The Hecke character of L = Q(sqrt(-15)) behind the K3 surface W.

O_L = Z[alpha] with alpha = (1 + sqrt(-15))/2, minimal polynomial
x^2 - x + 4, so N(a + b alpha) = a^2 + ab + 4b^2. The class number is 2,
hence the square of every prime ideal is principal and the character sends a
prime I to the generator beta of I^2 normalised by phi_3(beta) = 1, where
phi_3 : O_L -> Z/3 is the ring homomorphism with alpha -> -1.
"""
import logging
from dataclasses import dataclass
from math import isqrt
from typing import List, Optional, Tuple
from sympy import isprime, legendre_symbol
from maschke_octic.exceptions import BadReductionError, VerificationError

logger = logging.getLogger(__name__)

DISCRIMINANT = -15

@dataclass(frozen=True)
class QuadRingElem:
    """a + b*alpha in Z[alpha], alpha^2 = alpha - 4."""
    a: int
    b: int

    def __add__(self, other: "QuadRingElem") -> "QuadRingElem":
        return QuadRingElem(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QuadRingElem") -> "QuadRingElem":
        return QuadRingElem(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QuadRingElem":
        return QuadRingElem(-self.a, -self.b)

    def __mul__(self, other: "QuadRingElem") -> "QuadRingElem":
        a, b, c, d = self.a, self.b, other.a, other.b
        return QuadRingElem(a*c - 4*b*d, a*d + b*c + b*d)

    def __pow__(self, e: int) -> "QuadRingElem":
        result = QuadRingElem(1, 0)
        for _ in range(e):
            result = result*self
        return result

    def conjugate(self) -> "QuadRingElem":
        return QuadRingElem(self.a + self.b, -self.b)

    def norm(self) -> int:
        return self.a*self.a + self.a*self.b + 4*self.b*self.b

    def trace(self) -> int:
        return 2*self.a + self.b

    def phi3(self) -> int:
        return (self.a - self.b) % 3

def _check_prime(p: int) -> None:
    if not isprime(p):
        raise ValueError("{} is not a prime".format(p))
    if p <= 5:
        raise BadReductionError(status_code=2, message="p = {} has bad reduction, need p > 5".format(p))

def split_type(p: int) -> str:
    """'split', 'inert' or 'ramified' for the prime p in L."""
    _check_prime(p)
    if DISCRIMINANT % p == 0:
        return 'ramified'
    return 'split' if legendre_symbol(DISCRIMINANT % p, p) == 1 else 'inert'

def norm_solutions(n: int) -> List[QuadRingElem]:
    """All a + b alpha of norm n with b != 0, from 4n = (2a + b)^2 + 15 b^2."""
    solutions = []
    bound = isqrt(4*n // 15)
    for b in range(-bound, bound + 1):
        if b == 0:
            continue
        rest = 4*n - 15*b*b
        root = isqrt(rest)
        if root*root != rest:
            continue
        for s in {root, -root}:
            if (s - b) % 2 == 0:
                solutions.append(QuadRingElem((s - b) // 2, b))
    return solutions

def normalise(beta: QuadRingElem) -> QuadRingElem:
    """The associate +-beta with phi_3 = 1."""
    if beta.phi3() == 1:
        return beta
    if beta.phi3() == 2:
        return -beta
    raise ValueError("{} is divisible by the prime above 3".format(beta))

def hecke_generator(p: int) -> Optional[QuadRingElem]:
    """
    chi of a prime above a split p: the normalised generator of its square,
    the one with b < 0 when both conjugates qualify. None for inert p.
    """
    if split_type(p) != 'split':
        return None
    candidates = sorted({normalise(beta) for beta in norm_solutions(p*p)}, key=lambda e: (e.b, e.a))
    if not candidates:
        raise VerificationError(
            status_code=1,
            message="No element of norm {}^2 for the split prime {}, check the norm form".format(p, p)
        )
    traces = {beta.trace() for beta in candidates}
    if len(traces) != 1:
        raise VerificationError(
            status_code=1,
            message="Generators above {} give different traces {}".format(p, sorted(traces))
        )
    return candidates[0]

def hecke_ap(p: int) -> int:
    """Weight 3 coefficient a_p: 0 for inert p, beta + conj(beta) for split p."""
    beta = hecke_generator(p)
    if beta is None:
        return 0
    logger.debug("chi above %d is %d%+d*alpha", p, beta.a, beta.b)
    return beta.trace()

def hecke_prime_power(p: int, k: int = 2) -> int:
    """
    a_{p^2}. Split: beta^2 + conj(beta)^2. Inert: chi((p)) = p^2 (the
    normalised generator of (p)^2) taken twice, so a_{p^2} = 2 p^2.
    """
    if k != 2:
        raise ValueError("Only k = 2 is supported, got {}".format(k))
    beta = hecke_generator(p)
    if beta is None:
        return 2*p*p
    return (beta*beta).trace()

def hecke_row(p: int) -> Tuple[int,str,Optional[int],Optional[int],int]:
    """(p, split type, a, b, a_p) as printed by the ``hecke`` subcommand."""
    beta = hecke_generator(p)
    if beta is None:
        return p, split_type(p), None, None, 0
    return p, 'split', beta.a, beta.b, beta.trace()
