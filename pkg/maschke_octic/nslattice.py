"""
Lines on Maschke's octic over finite fields.

Over a field containing i, sqrt(-3) and sqrt(5) the surface carries 352
lines, the G-orbits of two seed lines (160 + 192). Lines are stored by the
reduced row echelon form of a 2x4 spanning matrix, which is unique per
line, together with normalised Pluecker coordinates. The intersection
matrix of the lines spans L_S; the Frobenius permutation of the lines gives
the Galois character on L_S, whose decomposition into Dirichlet signatures
is recovered exactly.
"""
import logging
import numpy as np
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
from sympy import QQ, nextprime
from sympy.polys.matrices import DomainMatrix
from maschke_octic import models
from maschke_octic.algebra import int_rank, modular_rank, modular_rref, modular_solve, rank_primes
from maschke_octic.exceptions import IntegralityError, VerificationError
from maschke_octic.ffield import FieldCtx, PolyEvaluator, build_ext, low_degree_roots
from maschke_octic.grouprep import maschke_generators
from maschke_octic.lefschetz import ALL_SIGNATURES, sigma

logger = logging.getLogger(__name__)

EXPECTED_LINES = 352
L_S_RANK = 202
EXPECTED_ORBITS = {'l3': 160, 'l5': 192}
BRUTE_FORCE_LIMIT = 128
Point = Tuple[int, int, int, int]
PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

@dataclass(frozen=True)
class LineFq:
    rows: Tuple[Point, Point]
    plucker: Tuple[int, ...]

def line_through(u: Sequence[int], v: Sequence[int], ctx: FieldCtx) -> LineFq:
    """The line spanned by two points (codes), in canonical form."""
    m = [list(u), list(v)]
    rank = 0
    for col in range(4):
        pivot = next((r for r in range(rank, 2) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = ctx.inv(m[rank][col])
        m[rank] = [ctx.mul(c, inv) for c in m[rank]]
        other = 1 - rank
        factor = m[other][col]
        if factor:
            m[other] = [ctx.sub(a, ctx.mul(factor, b)) for a, b in zip(m[other], m[rank])]
        rank += 1
        if rank == 2:
            break
    if rank < 2:
        raise ValueError("The points {} and {} do not span a line".format(u, v))
    r1, r2 = tuple(m[0]), tuple(m[1])
    coords = [ctx.sub(ctx.mul(r1[i], r2[j]), ctx.mul(r1[j], r2[i])) for i, j in PLUCKER_PAIRS]
    lead = ctx.inv(next(c for c in coords if c))
    return LineFq((r1, r2), tuple(ctx.mul(c, lead) for c in coords))

def plucker_relation(line: LineFq, ctx: FieldCtx) -> int:
    p01, p02, p03, p12, p13, p23 = line.plucker
    return ctx.add(ctx.sub(ctx.mul(p01, p23), ctx.mul(p02, p13)), ctx.mul(p03, p12))

def _evaluation_field(ctx: FieldCtx) -> FieldCtx:
    # a degree 8 form vanishing at 9 points of P^1 vanishes identically; F_7 has only 8
    if ctx.q >= 8:
        return ctx
    if ctx.k != 1:
        raise ValueError("Cannot test lines over F_{}".format(ctx.q))
    return build_ext(ctx.p, 2)

def _test_parameters(ctx: FieldCtx) -> List[int]:
    return list(range(8))

def on_surface(line: LineFq, ctx: FieldCtx) -> bool:
    """F vanishes at 9 points of the line (r1 + t r2 for 8 values of t, and r2)."""
    ectx = _evaluation_field(ctx)
    evaluate = PolyEvaluator(models.F, ectx)
    r1, r2 = line.rows
    ts = np.array(_test_parameters(ectx), dtype=np.int64)
    coords = [ectx.vadd(np.full(ts.size, a, dtype=np.int64), ectx.vscale(b, ts)) for a, b in zip(r1, r2)]
    if np.any(evaluate(*coords) != 0):
        return False
    return int(evaluate(*[np.array([c], dtype=np.int64) for c in r2])[0]) == 0

# RREF patterns of a 2x4 matrix; None marks a free entry
_PATTERNS = (
    ((1, 0, None, None), (0, 1, None, None)),
    ((1, None, 0, None), (0, 0, 1, None)),
    ((1, None, None, 0), (0, 0, 0, 1)),
    ((0, 1, 0, None), (0, 0, 1, None)),
    ((0, 1, None, 0), (0, 0, 0, 1)),
    ((0, 0, 1, 0), (0, 0, 0, 1)),
)

def _pattern_blocks(pattern, q: int, block_size: int) -> Iterator[Tuple[List[np.ndarray],List[np.ndarray]]]:
    free = sum(entry is None for row in pattern for entry in row)
    total = q**free
    for start in range(0, total, block_size):
        idx = np.arange(start, min(total, start + block_size), dtype=np.int64)
        digit = 0
        rows = []
        for row in pattern:
            coords = []
            for entry in row:
                if entry is None:
                    coords.append((idx // q**digit) % q)
                    digit += 1
                else:
                    coords.append(np.full(idx.size, entry, dtype=np.int64))
            rows.append(coords)
        yield rows[0], rows[1]

def enumerate_lines(ctx: FieldCtx, block_size: int = 1 << 18) -> List[LineFq]:
    """
    Every F_q-rational line on S, by scanning the canonical representatives
    of all lines of P^3 and keeping those on which F vanishes at 9 points.
    """
    if ctx.q > BRUTE_FORCE_LIMIT:
        raise ValueError("Brute force line enumeration is limited to q <= {}".format(BRUTE_FORCE_LIMIT))
    ectx = _evaluation_field(ctx)
    evaluate = PolyEvaluator(models.F, ectx)
    found = []
    for pattern in _PATTERNS:
        for r1, r2 in _pattern_blocks(pattern, ctx.q, block_size):
            alive = np.arange(r1[0].size)
            for t in _test_parameters(ectx):
                coords = [ectx.vadd(a[alive], ectx.vscale(t, b[alive])) for a, b in zip(r1, r2)]
                alive = alive[evaluate(*coords) == 0]
                if alive.size == 0:
                    break
            if alive.size:
                alive = alive[evaluate(*[b[alive] for b in r2]) == 0]
            for j in alive.tolist():
                found.append(line_through([int(c[j]) for c in r1], [int(c[j]) for c in r2], ctx))
    logger.info("Found %d lines on S over F_%d by brute force", len(found), ctx.q)
    return sorted(found, key=lambda l: l.rows)

def lines_field(p: int) -> FieldCtx:
    """F_p when i, sqrt(-3) and sqrt(5) are in F_p (p = 1 mod 12 and p = +-1 mod 5), else F_{p^2}."""
    k = 1 if p % 12 == 1 and p % 5 in (1, 4) else 2
    return build_ext(p, k)

def _sqrt(ctx: FieldCtx, value: int, what: str) -> int:
    root = ctx.sqrt(ctx.constant(value))
    if root is None:
        raise ValueError("{} is not in F_{}".format(what, ctx.q))
    return root

def sqrt_minus_one(ctx: FieldCtx) -> int:
    return _sqrt(ctx, -1, "i")

def seed_lines(ctx: FieldCtx) -> Dict[str,LineFq]:
    """
    l3 = <(alpha:1:0:0), (0:0:alpha:1)> with alpha^4 - 2alpha^3 + 2alpha^2 + 2alpha + 1 = 0,
    l5 = <(1:a:ai:0), (0:a:-ai:1)> with a = (1+i)(1+sqrt 5)/4.
    """
    roots = low_degree_roots([1, 2, 2, -2, 1], ctx)
    if not roots:
        raise ValueError("alpha^4 - 2alpha^3 + 2alpha^2 + 2alpha + 1 has no root in F_{}".format(ctx.q))
    alpha = roots[0][0].code
    i = sqrt_minus_one(ctx)
    root5 = _sqrt(ctx, 5, "sqrt(5)")
    a = ctx.mul(ctx.mul(ctx.add(1, i), ctx.add(1, root5)), ctx.inv(ctx.constant(4)))
    ai = ctx.mul(a, i)
    seeds = {
        'l3': line_through((alpha, 1, 0, 0), (0, 0, alpha, 1), ctx),
        'l5': line_through((1, a, ai, 0), (0, a, ctx.neg(ai), 1), ctx),
    }
    for name, line in seeds.items():
        if not on_surface(line, ctx):
            raise VerificationError(status_code=1, message="Seed line {} is not on S over F_{}".format(name, ctx.q))
    return seeds

def reduced_generators(ctx: FieldCtx) -> List[List[List[int]]]:
    i = sqrt_minus_one(ctx)
    return [g.reduce(ctx, i) for g in maschke_generators()]

def apply(matrix: List[List[int]], point: Sequence[int], ctx: FieldCtx) -> Point:
    out = []
    for row in matrix:
        acc = 0
        for a, b in zip(row, point):
            if a and b:
                acc = ctx.add(acc, ctx.mul(a, b))
        out.append(acc)
    return tuple(out)

def transform(line: LineFq, matrix: List[List[int]], ctx: FieldCtx) -> LineFq:
    r1, r2 = line.rows
    return line_through(apply(matrix, r1, ctx), apply(matrix, r2, ctx), ctx)

def orbit_lines(seed: LineFq, ctx: FieldCtx, generators: Optional[List[List[List[int]]]] = None) -> List[LineFq]:
    """Closure of the seed under the reduced generators of G, breadth first."""
    generators = generators or reduced_generators(ctx)
    orbit = [seed]
    seen = {seed}
    frontier = [seed]
    while frontier:
        next_frontier = []
        for line in frontier:
            for g in generators:
                image = transform(line, g, ctx)
                if image not in seen:
                    seen.add(image)
                    orbit.append(image)
                    next_frontier.append(image)
        frontier = next_frontier
    return orbit

@dataclass
class LineSet:
    ctx: FieldCtx
    lines: List[LineFq]
    orbits: Dict[str,List[int]]

    def index(self) -> Dict[LineFq,int]:
        return {line: j for j, line in enumerate(self.lines)}

def all_lines(ctx: FieldCtx) -> LineSet:
    """The union of the orbits of l3 and l5, which must be disjoint."""
    generators = reduced_generators(ctx)
    lines: List[LineFq] = []
    orbits = {}
    for name, seed in seed_lines(ctx).items():
        orbit = orbit_lines(seed, ctx, generators)
        if set(orbit) & set(lines):
            raise VerificationError(status_code=1, message="The orbits of the seed lines meet over F_{}".format(ctx.q))
        orbits[name] = list(range(len(lines), len(lines) + len(orbit)))
        lines.extend(orbit)
        logger.info("Orbit of %s over F_%d has %d lines", name, ctx.q, len(orbit))
    return LineSet(ctx, lines, orbits)

def _plucker_array(lines: Sequence[LineFq]) -> np.ndarray:
    return np.array([line.plucker for line in lines], dtype=np.int64).reshape(len(lines), 6)

def incidence(lines: Sequence[LineFq], ctx: FieldCtx) -> np.ndarray:
    """
    meets[i, j] for i != j: the Pluecker pairing, which is the determinant
    of the four stacked spanning points up to sign, vanishes.
    """
    if len(set(lines)) != len(lines):
        raise ValueError("The line list has duplicates")
    pl = _plucker_array(lines)
    # p01 q23 - p02 q13 + p03 q12 + p12 q03 - p13 q02 + p23 q01
    terms = ((0, 5, 1), (1, 4, -1), (2, 3, 1), (3, 2, 1), (4, 1, -1), (5, 0, 1))
    n = len(lines)
    pairing = np.zeros((n, n), dtype=np.int64)
    for a, b, sign in terms:
        product = ctx.vmul(pl[:, a][:, None], pl[:, b][None, :])
        pairing = ctx.vadd(pairing, product if sign > 0 else ctx.vneg(product))
    meets = pairing == 0
    np.fill_diagonal(meets, False)
    return meets

def gram_matrix(lines: Sequence[LineFq], ctx: FieldCtx) -> np.ndarray:
    """-6 on the diagonal (l^2 = -2 - l.K on an octic), 1 for meeting lines."""
    gram = incidence(lines, ctx).astype(np.int64)
    np.fill_diagonal(gram, -6)
    return gram

def gram_and_rank(lines: Sequence[LineFq], ctx: FieldCtx, exact: bool = True) -> Tuple[np.ndarray,int]:
    gram = gram_matrix(lines, ctx)
    rank = int_rank(gram.tolist(), exact=exact)
    logger.info("Gram matrix of %d lines over F_%d has rank %d", len(lines), ctx.q, rank)
    return gram, rank

def frobenius_permutation(line_set: LineSet) -> List[int]:
    """perm[j] is the index of the image of line j under x -> x^p."""
    ctx = line_set.ctx
    index = line_set.index()
    perm = []
    for line in line_set.lines:
        r1, r2 = line.rows
        image = line_through([ctx.frobenius(c) for c in r1], [ctx.frobenius(c) for c in r2], ctx)
        if image not in index:
            raise VerificationError(status_code=1, message="Frobenius does not preserve the lines over F_{}".format(ctx.q))
        perm.append(index[image])
    return perm

def permutation_order(perm: Sequence[int]) -> int:
    order, current = 1, list(perm)
    identity = list(range(len(perm)))
    while current != identity:
        current = [perm[j] for j in current]
        order += 1
    return order

def span_trace(gram: np.ndarray, perm: Sequence[int], ell: int) -> int:
    """
    Trace of the line permutation on the column space of the Gram matrix.

    A basis B of pivot columns and an invertible square block B[R] give the
    matrix of the permutation on the span as B[R]^-1 (P B)[R]. The trace of a
    finite order rational matrix is an integer of absolute value at most the
    rank, so computing it modulo a prime ell above twice the rank is exact
    whenever the rank modulo ell is the rank over Q.
    """
    _, columns = modular_rref(gram, ell)
    basis = gram[:, columns] % ell
    _, rows = modular_rref(basis.T, ell)
    moved = np.empty_like(basis)
    moved[np.asarray(perm)] = basis
    solution = modular_solve(basis[rows], moved[rows], ell)
    trace = int(np.trace(solution) % ell)
    return trace - ell if trace > ell // 2 else trace

def signature_class(p: int) -> Tuple[int,int,int]:
    return (int(p % 4 == 3), int(p % 3 == 2), int(p % 5 in (2, 3)))

def signature_primes(start: int = 7) -> List[int]:
    """The smallest prime >= start in each of the 8 classes of (p mod 4, p mod 3, p mod 5 up to squares)."""
    chosen: Dict[Tuple[int,int,int],int] = {}
    p = start - 1
    while len(chosen) < 8:
        p = nextprime(p)
        chosen.setdefault(signature_class(p), p)
    return sorted(chosen.values())

@dataclass
class GaloisDecomposition:
    traces: Dict[int,int]
    multiplicities: Dict[str,int]
    orders: Dict[int,int]

def frobenius_trace_on_lines(p: int, ell: Optional[int] = None) -> Tuple[int,int]:
    """(trace of Frob_p on L_S, order of the Frobenius permutation), computed over lines_field(p)."""
    ctx = lines_field(p)
    line_set = all_lines(ctx)
    if len(line_set.lines) != EXPECTED_LINES:
        raise VerificationError(
            status_code=1,
            message="Found {} lines over F_{}, expected {}".format(len(line_set.lines), ctx.q, EXPECTED_LINES)
        )
    gram = gram_matrix(line_set.lines, ctx)
    ell = ell or rank_primes(1)[0]
    rank = modular_rank(gram, ell)
    if rank != L_S_RANK:
        raise VerificationError(
            status_code=1,
            message="Gram rank over F_{} is {}, not {}".format(ctx.q, rank, L_S_RANK)
        )
    perm = frobenius_permutation(line_set)
    return span_trace(gram, perm, ell), permutation_order(perm)

def _good_prime_in_class(p: int, traces: Dict[int,int], orders: Dict[int,int], attempts: int = 5) -> int:
    """Frobenius data at p, or at the next primes of the same class when the lines degenerate at p."""
    target = signature_class(p)
    for _ in range(attempts):
        try:
            traces[p], orders[p] = frobenius_trace_on_lines(p)
            return p
        except VerificationError as err:
            logger.warning("Skipping p = %d for the Galois character: %s", p, err.message)
        p = nextprime(p)
        while signature_class(p) != target:
            p = nextprime(p)
    raise VerificationError(status_code=1, message="No good prime found in the class {}".format(target))

def galois_multiplicities(primes: Optional[Sequence[int]] = None) -> GaloisDecomposition:
    """
    Multiplicities of the eight signatures in L_S from the Frobenius traces
    at one prime per signature class, by an exact solve of the 8x8 system
    sum_sigma m_sigma sigma(p) = tr(Frob_p | L_S).
    """
    traces, orders = {}, {}
    if primes is None:
        for p in signature_primes():
            _good_prime_in_class(p, traces, orders)
        primes = sorted(traces)
    else:
        primes = list(primes)
        if len({signature_class(p) for p in primes}) != 8:
            raise ValueError("Need one prime in each of the 8 signature classes, got {}".format(primes))
        for p in primes:
            traces[p], orders[p] = frobenius_trace_on_lines(p)
    for p in primes:
        logger.info("tr(Frob_%d | L_S) = %d, permutation order %d", p, traces[p], orders[p])
    system = DomainMatrix([[QQ(sigma(sig, p)) for sig in ALL_SIGNATURES] for p in primes], (8, 8), QQ)
    rhs = DomainMatrix([[QQ(traces[p])] for p in primes], (8, 1), QQ)
    solution = system.lu_solve(rhs).to_Matrix()
    multiplicities = {}
    for sig, value in zip(ALL_SIGNATURES, solution):
        if value.q != 1 or value < 0:
            raise IntegralityError(status_code=1, message="Multiplicity of sigma_{} is {}".format(sig.label, value))
        multiplicities[sig.label] = int(value)
    return GaloisDecomposition(traces, multiplicities, orders)
