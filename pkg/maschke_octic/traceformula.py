"""
Traces of linear automorphisms on the primitive cohomology of a smooth
hypersurface of degree d in P^(n+1), and of its cyclic r:1 cover branched
along it. Only the multiplicities of the d-th roots of unity as eigenvalues
enter.
"""
from dataclasses import dataclass, field
from typing import Dict, Tuple
from sympy import QQ
from maschke_octic.exceptions import IntegralityError

@dataclass(frozen=True)
class MultSpec:
    """
    Eigenvalue data of one automorphism.

    ``mults[j]`` is the multiplicity of exp(2 pi i j / d) as an eigenvalue;
    missing exponents have multiplicity zero.
    """
    d: int
    n: int
    r: int = 1
    mults: Dict[int,int] = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 2 or self.n < 1:
            raise ValueError("Need d >= 2 and n >= 1, got d={} n={}".format(self.d, self.n))
        if self.r < 1 or self.d % self.r:
            raise ValueError("Cover order {} does not divide {}".format(self.r, self.d))
        for j, m in self.mults.items():
            if not 0 <= j < self.d or m < 0:
                raise ValueError("Bad multiplicity {} for exponent {}".format(m, j))

    def multiplicity(self, j: int) -> int:
        return self.mults.get(j % self.d, 0)

    def with_cover(self, r: int) -> "MultSpec":
        return MultSpec(self.d, self.n, r, dict(self.mults))

    def with_trivial_eigenvalue(self) -> "MultSpec":
        """The same map extended by one more coordinate with eigenvalue 1."""
        mults = dict(self.mults)
        mults[0] = mults.get(0, 0) + 1
        return MultSpec(self.d, self.n + 1, self.r, mults)

def _integral(value, what: str) -> int:
    if value.denominator != 1:
        raise IntegralityError(status_code=1, message="{} = {} is not an integer".format(what, value))
    return int(value.numerator)

def euler_and_primitive(d: int, n: int) -> Tuple[int,int]:
    """
    Euler characteristic and primitive middle Betti number of a smooth
    hypersurface of degree d and dimension n.
    """
    if d < 2 or n < 1:
        raise ValueError("Need d >= 2 and n >= 1, got d={} n={}".format(d, n))
    top = (1 - d)**(n + 2)
    chi = _integral(QQ(n + 2) + QQ(top - 1, d), "chi(d={}, n={})".format(d, n))
    primitive = _integral(QQ((-1)**n*(top + d - 1), d), "h_pr(d={}, n={})".format(d, n))
    return chi, primitive

def _root_sum(eigen: MultSpec, step: int) -> int:
    return sum((1 - eigen.d)**eigen.multiplicity(j) for j in range(0, eigen.d, step))

def chenevert_hypersurface(eigen: MultSpec) -> int:
    """
    Trace on the primitive cohomology of the hypersurface,
    (-1)^n/d * sum over alpha^d = 1 of (1-d)^m_alpha.
    """
    value = QQ((-1)**eigen.n*_root_sum(eigen, 1), eigen.d)
    return _integral(value, "hypersurface trace for {}".format(eigen))

def chenevert_cover(eigen: MultSpec) -> int:
    """
    Trace on the primitive middle cohomology of the r:1 cover, for the lift
    acting trivially on the cover coordinate. The second sum runs over the
    (d/r)-th roots of unity, i.e. the exponents divisible by r.
    """
    total = _root_sum(eigen, 1) - eigen.r*_root_sum(eigen, eigen.r)
    value = QQ((-1)**(eigen.n + 1)*total, eigen.d)
    return _integral(value, "cover trace for {}".format(eigen))
