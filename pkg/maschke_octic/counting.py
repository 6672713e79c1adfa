"""
Exact point counts #V(F_q) for the varieties of the workbench.

Every kernel walks the F_q-points of a base projective space P^n in a fixed
chart order (x0 = 1 first, then x0 = 0, x1 = 1, ...), evaluates the defining
polynomials on numpy blocks of points and sums a per-point contribution:
``1`` on a hypersurface, ``1 + chi(f)`` on a double cover branched along
f = 0, or the number of solutions of a low degree equation in the remaining
coordinate. A flat index into that walk lets a count be cut into disjoint
shards that sum to the same total in any order.
"""
import logging
import time
import numpy as np
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple
from maschke_octic import models
from maschke_octic.config import VARIETY_IDS
from maschke_octic.exceptions import BadReductionError
from maschke_octic.ffield import FieldCtx, FqElem, PolyEvaluator, build_ext, low_degree_roots
from maschke_octic.lefschetz import resolve_count

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1 << 18

@dataclass(frozen=True)
class VarietySpec:
    id: str
    ambient: str
    description: str
    base_dim: int
    kernels: Tuple[str, ...]
    resolves: Optional[str] = None

VARIETIES: Dict[str,VarietySpec] = {v.id: v for v in (
    VarietySpec('S', 'P3', "Maschke's octic F = 0", 3, ('naive', 'structured')),
    VarietySpec('Sbar', 'P3', 'the quartic in the squares, F(x) = Sbar(x^2)', 3, ('naive',)),
    VarietySpec('X', 'weighted double cover', 'w^2 = F(x) in P(1,1,1,1,4)', 3, ('naive', 'structured')),
    VarietySpec('U', 'P4', 'G_I = G_M = 0, the image of S in the Igusa quartic', 4, ('naive', 'structured')),
    VarietySpec('Utilde', 'P4', 'U with its 30 nodes resolved', 4, ('naive', 'structured'), resolves='U'),
    VarietySpec('W', 'P3', 'the 12-nodal quartic U / iota', 3, ('naive',)),
    VarietySpec('Wtilde', 'P3', 'W with its 12 nodes resolved', 3, ('naive',), resolves='W'),
    VarietySpec('Z', 'P4', 'the Igusa quartic G_I = 0', 4, ('naive', 'structured')),
    VarietySpec('Y', 'P5', 'w^2 = G_M(y) over the Igusa quartic', 4, ('naive', 'structured')),
    VarietySpec('Cplus', 'P1xP1', 'closure of g+(x, y) = 0', 1, ('naive', 'structured')),
    VarietySpec('Cminus', 'P1xP1', 'closure of g-(x, y) = 0', 1, ('naive', 'structured')),
    VarietySpec('Ctilde', 'double cover of Cplus', 'branched over the zeros of A(y)', 1, ('naive', 'structured')),
    VarietySpec('C3', 'superelliptic over P1', 'w^2 = A(y, v)', 1, ('naive',)),
    VarietySpec('Cbar', 'superelliptic over P1', 's^2 = Q^2 - 4P^2', 1, ('naive',)),
    VarietySpec('C7', 'superelliptic over P1', 'u^2 = A (Q^2 - 4P^2)', 1, ('naive',)),
)}

def get_variety(variety_id: str) -> VarietySpec:
    try:
        return VARIETIES[variety_id]
    except KeyError:
        raise ValueError("Unknown variety {}, expected one of {}".format(variety_id, ", ".join(VARIETY_IDS)))

@dataclass
class CountRecord:
    variety: str
    p: int
    k: int
    q: int
    count: int
    kernel: str
    ms: int = 0

    FIELDS = ('variety', 'p', 'k', 'q', 'count', 'kernel', 'ms')

    def as_row(self) -> Dict[str,object]:
        return {name: getattr(self, name) for name in self.FIELDS}

def projective_size(n: int, q: int) -> int:
    return sum(q**i for i in range(n + 1))

def iter_blocks(n: int, ctx: FieldCtx, start: int, stop: int, block_size: int = BLOCK_SIZE) -> Iterator[List[np.ndarray]]:
    """
    Coordinate arrays of the points of P^n(F_q) with flat index in [start, stop).

    Stratum s holds the points (0 : ... : 0 : 1 : *), the 1 in position s,
    and the free coordinates are the base-q digits of the local index.
    """
    q = ctx.q
    offset = 0
    for s in range(n + 1):
        size = q**(n - s)
        lo, hi = max(start, offset), min(stop, offset + size)
        pos = lo
        while pos < hi:
            end = min(hi, pos + block_size)
            idx = np.arange(pos - offset, end - offset, dtype=np.int64)
            coords = []
            for j in range(n + 1):
                if j < s:
                    coords.append(np.zeros(idx.size, dtype=np.int64))
                elif j == s:
                    coords.append(np.ones(idx.size, dtype=np.int64))
                else:
                    coords.append((idx // q**(j - s - 1)) % q)
            yield coords
            pos = end
        offset += size

_POLYS = {
    'F': models.F,
    'SBAR': models.SBAR,
    'W': models.W_QUARTIC,
    'GI': models.IGUSA,
    'GM': models.QUADRIC,
    'A': models.A_HOM,
    'DISC': models.DISC_HOM,
    'A_DISC': models.A_HOM*models.DISC_HOM,
    'P': models.P_HOM,
    'Q': models.Q_HOM,
    'PM': models.P_MINUS_HOM,
    'QM': models.Q_MINUS_HOM,
    'GPLUS': models.G_PLUS_BIHOM,
    'GMINUS': models.G_MINUS_BIHOM,
}

@lru_cache(maxsize=None)
def _evaluator(name: str, ctx: FieldCtx) -> PolyEvaluator:
    return PolyEvaluator(_POLYS[name], ctx)

def _zeros(values: np.ndarray) -> int:
    return int(np.count_nonzero(values == 0))

def _cover_weight(ctx: FieldCtx, values: np.ndarray) -> np.ndarray:
    return 1 + ctx.vchi(values)

def _squares(ctx: FieldCtx, coords: List[np.ndarray]) -> List[np.ndarray]:
    return [ctx.vmul(c, c) for c in coords]

# -- surfaces in P^3 ---------------------------------------------------------

def _s_naive(ctx, coords, cache):
    return _zeros(_evaluator('F', ctx)(*coords))

def _quartic_weight(ctx: FieldCtx, c0: int, c1: int, c2: int) -> int:
    coefficients = [FqElem(ctx, c0), FqElem(ctx, c1), FqElem(ctx, c2), 0, 1]
    return sum(1 + ctx.chi(root.code) for root, _ in low_degree_roots(coefficients, ctx))

def _s_structured(ctx, coords, cache):
    # base is P^2 of (x1:x2:x3); F is a monic quartic in s = x0^2 with no cubic term
    u, v, w = _squares(ctx, coords)
    u2, v2, w2 = ctx.vmul(u, u), ctx.vmul(v, v), ctx.vmul(w, w)
    c2 = ctx.vscale(ctx.constant(14), ctx.vadd(ctx.vadd(u2, v2), w2))
    c1 = ctx.vscale(ctx.constant(168), ctx.vmul(ctx.vmul(u, v), w))
    mixed = ctx.vadd(ctx.vadd(ctx.vmul(u2, v2), ctx.vmul(u2, w2)), ctx.vmul(v2, w2))
    c0 = ctx.vadd(ctx.vadd(ctx.vadd(ctx.vmul(u2, u2), ctx.vmul(v2, v2)), ctx.vmul(w2, w2)),
                  ctx.vscale(ctx.constant(14), mixed))
    q = ctx.q
    keys, counts = np.unique((c0*q + c1)*q + c2, return_counts=True)
    total = 0
    for key, mult in zip(keys.tolist(), counts.tolist()):
        if key not in cache:
            cache[key] = _quartic_weight(ctx, key // (q*q), (key // q) % q, key % q)
        total += cache[key]*mult
    return total

def _x_structured(ctx, coords, cache):
    return int(np.sum(_cover_weight(ctx, _evaluator('F', ctx)(*coords))))

def _x_naive(ctx, coords, cache):
    # w runs over all of F_q; normalising x in P^3 absorbs the weight-4 scaling of w
    if 'square_counts' not in cache:
        w = np.arange(ctx.q, dtype=np.int64)
        cache['square_counts'] = np.bincount(ctx.vmul(w, w), minlength=ctx.q)
    return int(np.sum(cache['square_counts'][_evaluator('F', ctx)(*coords)]))

def _sbar_naive(ctx, coords, cache):
    return _zeros(_evaluator('SBAR', ctx)(*coords))

def _w_naive(ctx, coords, cache):
    return _zeros(_evaluator('W', ctx)(*coords))

# -- the Igusa quartic and what lives on it, in P^4 --------------------------

def _z_naive(ctx, coords, cache):
    return _zeros(_evaluator('GI', ctx)(*coords))

def _y_naive(ctx, coords, cache):
    on_z = _evaluator('GI', ctx)(*coords) == 0
    return int(np.sum(_cover_weight(ctx, _evaluator('GM', ctx)(*coords))[on_z]))

def _u_naive(ctx, coords, cache):
    on_z = _evaluator('GI', ctx)(*coords) == 0
    return int(np.count_nonzero(on_z & (_evaluator('GM', ctx)(*coords) == 0)))

def _igusa_in_s(ctx: FieldCtx, coords: List[np.ndarray]):
    """
    G_I = s^2 + b s + c with s = y4^2, and G_M = m + 6 s, over the base
    point (y0:y1:y2:y3).
    """
    y0, y1, y2, y3 = coords
    s0, s1, s2, s3 = _squares(ctx, coords)
    b = ctx.vsub(ctx.vsub(ctx.vsub(s0, s1), s2), s3)
    c = ctx.vadd(ctx.vadd(ctx.vmul(s1, s2), ctx.vmul(s1, s3)), ctx.vmul(s2, s3))
    c = ctx.vsub(c, ctx.vscale(ctx.constant(2), ctx.vmul(ctx.vmul(y0, y1), ctx.vmul(y2, y3))))
    m = ctx.vadd(s0, ctx.vscale(ctx.constant(3), ctx.vadd(ctx.vadd(s1, s2), s3)))
    return b, c, m

def _quadratic_roots(ctx: FieldCtx, b: np.ndarray, c: np.ndarray):
    """Roots of s^2 + b s + c: (chi(disc), root1, root2); root1 == root2 when disc = 0."""
    disc = ctx.vsub(ctx.vmul(b, b), ctx.vscale(ctx.constant(4), c))
    chi = ctx.vchi(disc)
    root = np.where(chi >= 0, ctx.vsqrt(disc), 0)
    half = ctx.inv(ctx.constant(2))
    minus_b = ctx.vneg(b)
    return chi, ctx.vscale(half, ctx.vadd(minus_b, root)), ctx.vscale(half, ctx.vsub(minus_b, root))

def _sum_over_roots(chi: np.ndarray, first: np.ndarray, second: np.ndarray) -> int:
    return int(np.sum(first[chi >= 0]) + np.sum(second[chi == 1]))

def _z_structured(ctx, coords, cache):
    b, c, _ = _igusa_in_s(ctx, coords)
    chi, r1, r2 = _quadratic_roots(ctx, b, c)
    return _sum_over_roots(chi, _cover_weight(ctx, r1), _cover_weight(ctx, r2))

def _y_structured(ctx, coords, cache):
    b, c, m = _igusa_in_s(ctx, coords)
    chi, r1, r2 = _quadratic_roots(ctx, b, c)
    six = ctx.constant(6)

    def weight(s):
        return _cover_weight(ctx, s)*_cover_weight(ctx, ctx.vadd(m, ctx.vscale(six, s)))

    return _sum_over_roots(chi, weight(r1), weight(r2))

def _u_structured(ctx, coords, cache):
    b, c, m = _igusa_in_s(ctx, coords)
    s = ctx.vscale(ctx.neg(ctx.inv(ctx.constant(6))), m)
    on_z = ctx.vadd(ctx.vmul(s, ctx.vadd(s, b)), c) == 0
    return int(np.sum(_cover_weight(ctx, s)[on_z]))

# -- curves, enumerated over P^1_(y:v) ---------------------------------------

_PAIR = {'Cplus': ('P', 'Q', 'GPLUS'), 'Cminus': ('PM', 'QM', 'GMINUS')}

def _fibre_structured(ctx: FieldCtx, y: np.ndarray, v: np.ndarray, curve: str) -> np.ndarray:
    """
    Points over each (y:v) of P(x^4 + u^4) - Q x^2 u^2 = 0: the point u = 0
    when P = 0, and the square roots of the roots X of P X^2 - Q X + P.
    """
    p_name, q_name, _ = _PAIR[curve]
    P, Q = _evaluator(p_name, ctx)(y, v), _evaluator(q_name, ctx)(y, v)
    p_zero = P == 0
    count = p_zero.astype(np.int64)

    disc = ctx.vsub(ctx.vmul(Q, Q), ctx.vscale(ctx.constant(4), ctx.vmul(P, P)))
    chi = np.where(p_zero, -1, ctx.vchi(disc))
    root = np.where(chi >= 0, ctx.vsqrt(disc), 0)
    inv_2p = ctx.vinv(ctx.vscale(ctx.constant(2), P))
    first = ctx.vmul(ctx.vadd(Q, root), inv_2p)
    second = ctx.vmul(ctx.vsub(Q, root), inv_2p)
    count += np.where(chi >= 0, _cover_weight(ctx, first), 0)
    count += np.where(chi == 1, _cover_weight(ctx, second), 0)

    count += np.where(p_zero & (Q != 0), 1, 0)
    count += np.where(p_zero & (Q == 0), ctx.q, 0)
    return count

def _p1_points(ctx: FieldCtx) -> Tuple[np.ndarray,np.ndarray]:
    x, u = next(iter_blocks(1, ctx, 0, ctx.q + 1, ctx.q + 1))
    return x, u

def _fibre_naive(ctx: FieldCtx, y: np.ndarray, v: np.ndarray, curve: str) -> np.ndarray:
    x, u = _p1_points(ctx)
    values = _evaluator(_PAIR[curve][2], ctx)(x[None, :], u[None, :], y[:, None], v[:, None])
    return np.count_nonzero(values == 0, axis=1).astype(np.int64)

_FIBRES = {'naive': _fibre_naive, 'structured': _fibre_structured}

def _curve_kernel(curve: str, kernel: str) -> Callable:
    def count(ctx, coords, cache):
        return int(np.sum(_FIBRES[kernel](ctx, coords[0], coords[1], curve)))
    return count

def _ctilde_kernel(kernel: str) -> Callable:
    def count(ctx, coords, cache):
        fibres = _FIBRES[kernel](ctx, coords[0], coords[1], 'Cplus')
        return int(np.sum(fibres*_cover_weight(ctx, _evaluator('A', ctx)(*coords))))
    return count

def _superelliptic_kernel(name: str) -> Callable:
    def count(ctx, coords, cache):
        return int(np.sum(_cover_weight(ctx, _evaluator(name, ctx)(*coords))))
    return count

_KERNELS: Dict[Tuple[str,str],Tuple[int,Callable]] = {
    ('S', 'naive'): (3, _s_naive),
    ('S', 'structured'): (2, _s_structured),
    ('Sbar', 'naive'): (3, _sbar_naive),
    ('X', 'naive'): (3, _x_naive),
    ('X', 'structured'): (3, _x_structured),
    ('W', 'naive'): (3, _w_naive),
    ('Z', 'naive'): (4, _z_naive),
    ('Z', 'structured'): (3, _z_structured),
    ('Y', 'naive'): (4, _y_naive),
    ('Y', 'structured'): (3, _y_structured),
    ('U', 'naive'): (4, _u_naive),
    ('U', 'structured'): (3, _u_structured),
    ('Cplus', 'naive'): (1, _curve_kernel('Cplus', 'naive')),
    ('Cplus', 'structured'): (1, _curve_kernel('Cplus', 'structured')),
    ('Cminus', 'naive'): (1, _curve_kernel('Cminus', 'naive')),
    ('Cminus', 'structured'): (1, _curve_kernel('Cminus', 'structured')),
    ('Ctilde', 'naive'): (1, _ctilde_kernel('naive')),
    ('Ctilde', 'structured'): (1, _ctilde_kernel('structured')),
    ('C3', 'naive'): (1, _superelliptic_kernel('A')),
    ('Cbar', 'naive'): (1, _superelliptic_kernel('DISC')),
    ('C7', 'naive'): (1, _superelliptic_kernel('A_DISC')),
}

def _resolve_kernel(variety: VarietySpec, kernel: str) -> str:
    if kernel == 'auto':
        return variety.kernels[-1]
    if kernel not in variety.kernels:
        raise ValueError("Variety {} has no {} kernel, expected one of {}".format(variety.id, kernel, ", ".join(variety.kernels)))
    return kernel

def base_size(variety_id: str, kernel: str, q: int) -> int:
    base_dim, _ = _KERNELS[(variety_id, kernel)]
    return projective_size(base_dim, q)

def count_range(
    ctx: FieldCtx,
    variety_id: str,
    kernel: str,
    start: int,
    stop: int,
    block_size: int = BLOCK_SIZE
) -> int:
    """The contribution of the base points with flat index in [start, stop)."""
    base_dim, fn = _KERNELS[(variety_id, kernel)]
    cache: Dict = {}
    total = 0
    for coords in iter_blocks(base_dim, ctx, start, stop, block_size):
        total += fn(ctx, coords, cache)
    logger.debug("%s over F_%d, base points [%d, %d): %d", variety_id, ctx.q, start, stop, total)
    return total

def count_partial(
    variety_id: str,
    p: int,
    k: int,
    kernel: str,
    start: int,
    stop: int,
    block_size: int = BLOCK_SIZE
) -> int:
    """Worker entry point: rebuilds the field from (p, k) and counts one shard."""
    return count_range(build_ext(p, k), variety_id, kernel, start, stop, block_size)

def shard_bounds(total: int, shards: int) -> List[Tuple[int,int]]:
    return [(total*i // shards, total*(i + 1) // shards) for i in range(shards)]

def count_points(
    variety_id: str,
    ctx: FieldCtx,
    kernel: str = 'auto',
    workers: int = 1,
    block_size: int = BLOCK_SIZE
) -> CountRecord:
    """
    Exact number of F_q-points of the given model.

    :param variety_id: one of ``VARIETY_IDS``; Utilde and Wtilde are counted
                       on U and W and resolved with ``lefschetz.resolve_count``
    :param ctx: the field, of characteristic p > 5
    :param kernel: ``naive``, ``structured`` or ``auto`` (the structured
                   kernel when there is one)
    :param workers: shard the base enumeration over this many processes
    """
    variety = get_variety(variety_id)
    if ctx.p <= 5:
        raise BadReductionError(status_code=2, message="p = {} has bad reduction, need p > 5".format(ctx.p))
    kernel = _resolve_kernel(variety, kernel)

    if variety.resolves:
        base = count_points(variety.resolves, ctx, kernel, workers, block_size)
        return CountRecord(variety.id, ctx.p, ctx.k, ctx.q, resolve_count(variety.id, ctx.q, base.count), kernel, base.ms)

    started = time.perf_counter()
    total = base_size(variety.id, kernel, ctx.q)
    if workers > 1 and total > block_size:
        bounds = shard_bounds(total, workers*4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(count_partial, variety.id, ctx.p, ctx.k, kernel, lo, hi, block_size)
                       for lo, hi in bounds]
            count = sum(f.result() for f in futures)
    else:
        count = count_range(ctx, variety.id, kernel, 0, total, block_size)
    ms = int((time.perf_counter() - started)*1000)
    logger.info("#%s(F_%d) = %d (%s kernel, %d ms)", variety.id, ctx.q, count, kernel, ms)
    return CountRecord(variety.id, ctx.p, ctx.k, ctx.q, count, kernel, ms)

def structured_kernel_S(ctx: FieldCtx) -> CountRecord:
    if ctx.k > 2:
        raise ValueError("The structured S kernel is meant for k <= 2, got k = {}".format(ctx.k))
    return count_points('S', ctx, kernel='structured')

def count_curve_pair(p: int, kernel: str = 'auto') -> Tuple[int,int]:
    """(#C+(F_p), #C~+(F_p))."""
    ctx = build_ext(p)
    return count_points('Cplus', ctx, kernel).count, count_points('Ctilde', ctx, kernel).count

def count_ambient(n: int, ctx: FieldCtx) -> int:
    """Points of P^n reached by the chart walk, block by block."""
    return sum(int(coords[0].size) for coords in iter_blocks(n, ctx, 0, projective_size(n, ctx.q)))
