"""
Finite matrix groups over Q(i): the Heisenberg group H of order 64 in its
Schroedinger representation, Maschke's group G of order 46080, conjugacy
classes, eigenvalue multiplicities and the trace class functions on
H^2(S)_pr and H^3(X).
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union
from sympy import QQ, QQ_I, Symbol, cyclotomic_poly, totient
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing, ring
from maschke_octic.algebra import QuotRing
from maschke_octic.exceptions import ClosureBoundError, IntegralityError
from maschke_octic.traceformula import MultSpec, chenevert_cover, chenevert_hypersurface

logger = logging.getLogger(__name__)

DIM = 4
GaussInt = Union[int, Tuple[int,int]]

@dataclass(frozen=True)
class GroupElement:
    """
    A 4x4 matrix (re + i*im) / 2^shift with Gaussian integer numerators.
    Instances are normalised (no common factor 2 left in the numerators
    while shift > 0) so equal matrices compare and hash equal.
    """
    re: Tuple[int, ...]
    im: Tuple[int, ...]
    shift: int = 0

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[GaussInt]], shift: int = 0) -> "GroupElement":
        re, im = [], []
        for row in rows:
            if len(row) != DIM:
                raise ValueError("Expected {} columns, got {}".format(DIM, len(row)))
            for entry in row:
                a, b = (entry, 0) if isinstance(entry, int) else entry
                re.append(a)
                im.append(b)
        if len(re) != DIM*DIM:
            raise ValueError("Expected a {0}x{0} matrix".format(DIM))
        return cls._normalised(re, im, shift)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls.from_rows([[1 if i == j else 0 for j in range(DIM)] for i in range(DIM)])

    @classmethod
    def scalar(cls, a: int, b: int = 0) -> "GroupElement":
        return cls.from_rows([[(a, b) if i == j else 0 for j in range(DIM)] for i in range(DIM)])

    @staticmethod
    def _normalised(re: List[int], im: List[int], shift: int) -> "GroupElement":
        while shift > 0 and all(v % 2 == 0 for v in re) and all(v % 2 == 0 for v in im):
            re = [v // 2 for v in re]
            im = [v // 2 for v in im]
            shift -= 1
        return GroupElement(tuple(re), tuple(im), shift)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        ar, ai, br, bi = self.re, self.im, other.re, other.im
        re, im = [0]*(DIM*DIM), [0]*(DIM*DIM)
        for i in range(DIM):
            row = i*DIM
            for k in range(DIM):
                xr, xi = ar[row + k], ai[row + k]
                if not xr and not xi:
                    continue
                col = k*DIM
                for j in range(DIM):
                    yr, yi = br[col + j], bi[col + j]
                    re[row + j] += xr*yr - xi*yi
                    im[row + j] += xr*yi + xi*yr
        return GroupElement._normalised(re, im, self.shift + other.shift)

    def __pow__(self, e: int) -> "GroupElement":
        if e < 0:
            return self.inverse()**(-e)
        result, base = GroupElement.identity(), self
        while e:
            if e & 1:
                result = result*base
            base = base*base
            e >>= 1
        return result

    def conjugate_transpose(self) -> "GroupElement":
        re = [self.re[j*DIM + i] for i in range(DIM) for j in range(DIM)]
        im = [-self.im[j*DIM + i] for i in range(DIM) for j in range(DIM)]
        return GroupElement(tuple(re), tuple(im), self.shift)

    def inverse(self) -> "GroupElement":
        """Inverse of a unitary element (all the groups here are unitary)."""
        candidate = self.conjugate_transpose()
        if self*candidate != GroupElement.identity():
            raise ValueError("Only unitary elements can be inverted, got {}".format(self))
        return candidate

    def order(self, bound: int = 1000) -> int:
        one, power = GroupElement.identity(), self
        for n in range(1, bound + 1):
            if power == one:
                return n
            power = power*self
        raise ValueError("Element order exceeds {}".format(bound))

    def entry(self, i: int, j: int):
        den = 2**self.shift
        return QQ_I(QQ(self.re[i*DIM + j], den), QQ(self.im[i*DIM + j], den))

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([[self.entry(i, j) for j in range(DIM)] for i in range(DIM)], (DIM, DIM), QQ_I)

    def det(self):
        return self.to_domain_matrix().det()

    def linear_forms(self, target: PolyRing) -> List[PolyElement]:
        """Coordinates of g(x) as linear forms in the generators of ``target`` (over QQ_I)."""
        gens = target.gens
        return [sum((target(self.entry(i, j))*gens[j] for j in range(DIM)), target.zero) for i in range(DIM)]

    def reduce(self, ctx, i_code: int) -> List[List[int]]:
        """
        Entries as codes of F_q, with ``i_code`` a square root of -1 there.

        :param ctx: a ``FieldCtx`` of odd characteristic
        """
        half = ctx.pow(ctx.inv(ctx.constant(2)), self.shift)
        rows = []
        for i in range(DIM):
            row = []
            for j in range(DIM):
                value = ctx.add(ctx.constant(self.re[i*DIM + j]),
                                ctx.mul(ctx.constant(self.im[i*DIM + j]), i_code))
                row.append(ctx.mul(value, half))
            rows.append(row)
        return rows

    def __repr__(self) -> str:
        rows = []
        for i in range(DIM):
            rows.append(" ".join("{}{:+d}i".format(self.re[i*DIM + j], self.im[i*DIM + j]) for j in range(DIM)))
        return "GroupElement([{}] / 2^{})".format("; ".join(rows), self.shift)

I = (0, 1)

def heisenberg_generators() -> Dict[str,GroupElement]:
    """h_abcd = U_(1,(a,b),(c,d)) on the basis x0..x3, and c = i*Id."""
    return {
        'h0001': GroupElement.from_rows([[1,0,0,0],[0,-1,0,0],[0,0,1,0],[0,0,0,-1]]),
        'h0010': GroupElement.from_rows([[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]]),
        'h0100': GroupElement.from_rows([[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]),
        'h1000': GroupElement.from_rows([[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]]),
        'c': GroupElement.scalar(0, 1),
    }

def maschke_generators() -> Tuple[GroupElement,GroupElement]:
    g1 = GroupElement.from_rows([[1,0,0,0],[0,1,0,0],[0,0,I,0],[0,0,0,I]])
    g2 = GroupElement.from_rows([
        [-1, (0,-1), (0,-1), -1],
        [I, 1, -1, (0,-1)],
        [I, -1, 1, (0,-1)],
        [1, (0,-1), (0,-1), 1],
    ], shift=1)
    return g1, g2

def heisenberg_elements() -> List[Tuple[int,Tuple[int,int,int,int],GroupElement]]:
    """
    All 64 elements i^s * h1000^a h0100^b h0010^c h0001^d with their labels.
    """
    gens = heisenberg_generators()
    out = []
    for s in range(4):
        for a, b, c, d in product(range(2), repeat=4):
            element = (gens['c']**s)*(gens['h1000']**a)*(gens['h0100']**b)*(gens['h0010']**c)*(gens['h0001']**d)
            out.append((s, (a, b, c, d), element))
    return out

def symplectic_form(v: Sequence[int], w: Sequence[int]) -> int:
    """E((x,x*),(y,y*)) = x*.y + y*.x mod 2 on (Z/2)^4 = {(a,b,c,d)}."""
    return (v[2]*w[0] + v[3]*w[1] + w[2]*v[0] + w[3]*v[1]) % 2

def heisenberg_commutator_check() -> bool:
    """U_w U_v U_w^-1 = (-1)^E(v,w) U_v for all labelled v, w."""
    labelled = {label: element for s, label, element in heisenberg_elements() if s == 0}
    minus = GroupElement.scalar(-1)
    for v, uv in labelled.items():
        for w, uw in labelled.items():
            expected = uv if symplectic_form(v, w) == 0 else minus*uv
            if uw*uv*uw.inverse() != expected:
                logger.warning("Commutator relation fails for v=%s w=%s", v, w)
                return False
    return True

class GroupTable:
    """
    All elements of a finite group, indexed in generation order
    (the identity first).
    """
    def __init__(self, generators: Sequence[GroupElement], elements: List[GroupElement]):
        self.generators = tuple(generators)
        self.elements = elements
        self.index = {g: i for i, g in enumerate(elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, element: GroupElement) -> bool:
        return element in self.index

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

def generate_group(generators: Sequence[GroupElement], bound: int = 10**6) -> GroupTable:
    """
    Closure of the generators under multiplication, breadth first.

    :param generators: invertible elements of finite order
    :param bound: give up once more elements than this have been found
    """
    identity = GroupElement.identity()
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for gen in generators:
                candidate = element*gen
                if candidate not in seen:
                    seen.add(candidate)
                    elements.append(candidate)
                    next_frontier.append(candidate)
                    if len(elements) > bound:
                        raise ClosureBoundError(
                            status_code=1,
                            message="Group closure exceeds {} elements, check the generators".format(bound)
                        )
        frontier = next_frontier
    logger.info("Generated a group of order %d from %d generators", len(elements), len(generators))
    return GroupTable(generators, elements)

@dataclass(frozen=True)
class ConjugacyClass:
    representative: GroupElement
    size: int
    members: Tuple[int, ...]

class ClassTable:
    """
    The conjugacy classes of a ``GroupTable``; behaves as a sequence of
    ``ConjugacyClass`` and knows the class of every element.
    """
    def __init__(self, table: GroupTable, classes: List[ConjugacyClass]):
        self.table = table
        self.classes = classes
        self.class_of: Dict[GroupElement,int] = {}
        for c, cls in enumerate(classes):
            for member in cls.members:
                self.class_of[table.elements[member]] = c
        self._inverse = [self.class_of[cls.representative.inverse()] for cls in classes]

    def inverse_class(self, c: int) -> int:
        return self._inverse[c]

    def sizes(self) -> List[int]:
        return [cls.size for cls in self.classes]

    def center(self) -> List[GroupElement]:
        return [cls.representative for cls in self.classes if cls.size == 1]

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self) -> Iterator[ConjugacyClass]:
        return iter(self.classes)

    def __getitem__(self, c: int) -> ConjugacyClass:
        return self.classes[c]

def conjugacy_classes(table: GroupTable) -> ClassTable:
    """
    Partition into conjugacy classes; a class is the orbit of an element
    under conjugation by the generators, which in a finite group is the
    orbit under the whole group.
    """
    conjugators = [(g, g.inverse()) for g in table.generators]
    assigned = [False]*table.order
    classes = []
    for start, element in enumerate(table.elements):
        if assigned[start]:
            continue
        orbit = {element}
        stack = [element]
        while stack:
            current = stack.pop()
            for g, g_inv in conjugators:
                image = g*current*g_inv
                if image not in orbit:
                    orbit.add(image)
                    stack.append(image)
        members = tuple(sorted(table.index[m] for m in orbit))
        for m in members:
            assigned[m] = True
        classes.append(ConjugacyClass(element, len(members), members))

    if sum(c.size for c in classes) != table.order:
        raise RuntimeError("Conjugacy classes do not partition the group")
    logger.info("Found %d conjugacy classes in a group of order %d", len(classes), table.order)
    return ClassTable(table, classes)

class ClassFunction:
    """Rational values, one per conjugacy class (all characters used here are rational)."""
    def __init__(self, classes: ClassTable, values: Sequence):
        if len(values) != len(classes):
            raise ValueError("Expected {} values, got {}".format(len(classes), len(values)))
        self.classes = classes
        self.values = tuple(QQ.convert(v) for v in values)

    @classmethod
    def constant(cls, classes: ClassTable, value=1) -> "ClassFunction":
        return cls(classes, [value]*len(classes))

    def __call__(self, element: GroupElement):
        return self.values[self.classes.class_of[element]]

    def __getitem__(self, c: int):
        return self.values[c]

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.classes, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.classes, [a - b for a, b in zip(self.values, other.values)])

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values)

    def as_ints(self) -> List[int]:
        if not self.is_integral():
            raise IntegralityError(status_code=1, message="Class function has non-integral values")
        return [int(v.numerator) for v in self.values]

def _cyclotomic_field(m: int) -> QuotRing:
    Rt, t = ring("t", QQ)
    return QuotRing(Rt.from_expr(cyclotomic_poly(m, Symbol("t"))))

def eig_mults(g: GroupElement, d: int, r: int = 1) -> MultSpec:
    """
    Multiplicities of the d-th roots of unity as eigenvalues of g.

    The computation happens in Q(zeta_m), m = lcm(4, d), which contains i
    and every d-th root of unity. A 4x4 matrix over that field is replaced
    by its rational block matrix (each entry by its multiplication matrix),
    whose rank is phi(m) times the rank over the number field.
    """
    m = lcm(4, d)
    field = _cyclotomic_field(m)
    phi = int(totient(m))
    zeta = field.gen
    i = zeta**(m // 4)
    entries = [[field(QQ(g.re[a*DIM + b], 2**g.shift)) + i*QQ(g.im[a*DIM + b], 2**g.shift)
                for b in range(DIM)] for a in range(DIM)]
    mults = {}
    for j in range(d):
        alpha = zeta**(j*(m // d))
        blocks = [[(entries[a][b] - (alpha if a == b else 0)).matrix() for b in range(DIM)] for a in range(DIM)]
        rows = []
        for a in range(DIM):
            for u in range(phi):
                rows.append([blocks[a][b][u][v] for b in range(DIM) for v in range(phi)])
        rank = DomainMatrix(rows, (DIM*phi, DIM*phi), QQ).rank()
        if rank % phi:
            raise RuntimeError("Rank {} over Q is not a multiple of {}".format(rank, phi))
        multiplicity = DIM - rank // phi
        if multiplicity:
            mults[j] = multiplicity
    return MultSpec(d=d, n=2, r=r, mults=mults)

def _traces_of(element: GroupElement) -> Tuple[int,int]:
    eigen = eig_mults(element, 8)
    return chenevert_hypersurface(eigen), chenevert_cover(eigen.with_cover(2))

def trace_class_functions(classes: ClassTable, workers: int = 1) -> Tuple[ClassFunction,ClassFunction]:
    """
    t_S on H^2(S)_pr (degree 8 surface) and t_X on H^3(X) (its double cover),
    evaluated on one representative per class.
    """
    representatives = [cls.representative for cls in classes]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(_traces_of, representatives))
    else:
        traces = [_traces_of(rep) for rep in representatives]
    t_s = ClassFunction(classes, [a for a, _ in traces])
    t_x = ClassFunction(classes, [b for _, b in traces])
    logger.info("Trace class functions on %d classes: t_S(1)=%s, t_X(1)=%s", len(classes), t_s[0], t_x[0])
    return t_s, t_x

def class_inner(t1: ClassFunction, t2: ClassFunction):
    """
    (1/|G|) sum over g of t1(g) t2(g^-1), computed class by class.
    """
    classes = t1.classes
    if t2.classes is not classes:
        raise ValueError("Class functions on different groups")
    total = QQ(0)
    for c, cls in enumerate(classes):
        total += cls.size*t1[c]*t2[classes.inverse_class(c)]
    return total/classes.table.order

def epsilon_character(classes: ClassTable) -> Tuple[ClassFunction,str]:
    """
    The sign-like one dimensional character of G, realised from the
    determinant. Tries det, then det^2, and keeps the first that is
    +-1-valued and non-trivial.
    """
    dets = [cls.representative.det() for cls in classes]
    for name, values in (("det", dets), ("det^2", [v*v for v in dets])):
        if all(v.y == 0 and abs(v.x) == 1 for v in values) and any(v.x == -1 for v in values):
            logger.debug("Epsilon character realised as %s", name)
            return ClassFunction(classes, [v.x for v in values]), name
    raise RuntimeError("Neither det nor det^2 gives a non-trivial +-1 character")

def h_isotypic_dims(t_x: ClassFunction) -> Dict[Tuple[int,int,int,int],int]:
    """
    Dimensions of the isotypic pieces of H^3(X) for the 16 characters of H
    that factor through H / mu_4 = (Z/2)^4, chi_u(i^s h^v) = (-1)^(u.v).
    """
    elements = heisenberg_elements()
    dims = {}
    for u in product(range(2), repeat=4):
        total = QQ(0)
        for _, v, element in elements:
            sign = -1 if sum(a*b for a, b in zip(u, v)) % 2 else 1
            total += sign*QQ.convert(t_x(element))
        value = total/len(elements)
        if value.denominator != 1:
            raise IntegralityError(status_code=1, message="Isotypic dimension {} for {} is not an integer".format(value, u))
        dims[u] = int(value.numerator)
    return dims
