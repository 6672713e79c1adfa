"""
Exact symbolic checks: invariant ring identities, the four-tangent line
discriminant, the 32 common lines of C+ and C-, the quartic W and its lines,
invariance of F under G, the infinitesimal Abel-Jacobi computation and the
quotient curves of C~+, plus the genus bookkeeping of those curves.

A check passes when a polynomial difference is exactly zero in the stated
ring; otherwise the non-zero residue is kept as the witness.
"""
import hashlib
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple
from sympy import QQ, QQ_I, ZZ
from sympy.polys.rings import PolyElement, ring
from maschke_octic import models
from maschke_octic.algebra import poly_divrem, poly_substitute
from maschke_octic.config import CHECK_IDS
from maschke_octic.grouprep import maschke_generators

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class SymbolicCheck:
    id: str
    verdict: str
    witness: str

    @property
    def passed(self) -> bool:
        return self.verdict == 'pass'

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.witness.encode()).hexdigest()[:16]

    def as_dict(self) -> Dict[str,str]:
        return {'id': self.id, 'verdict': self.verdict, 'witness': self.witness, 'digest': self.digest}

def _verdict(check_id: str, residues: Sequence[Tuple[str,PolyElement]]) -> SymbolicCheck:
    """pass iff every residue is zero; the witness lists the identities or the first non-zero residue."""
    for name, residue in residues:
        if residue:
            return SymbolicCheck(check_id, 'fail', "{}: {}".format(name, residue.as_expr()))
    return SymbolicCheck(check_id, 'pass', "; ".join(name for name, _ in residues))

def _sub(f: PolyElement, assignment: Dict, target=None) -> PolyElement:
    return poly_substitute(f, assignment, target)

def check_abc() -> SymbolicCheck:
    R, x, y, t = ring("x,y,t", ZZ)
    restricted = _sub(models.F, {0: x, 1: R.one, 2: t*y, 3: t}, R)
    A, B, C = (_sub(f, {0: x, 1: y}, R) for f in (models.A, models.B, models.C))
    return _verdict('ABC', [("F(x,1,ty,t) = A t^8 + B t^4 + C", restricted - (A*t**8 + B*t**4 + C))])

def check_delta() -> SymbolicCheck:
    residue = models.B**2 - 4*models.A*models.C - 48*models.G_PLUS*models.G_MINUS
    return _verdict('DELTA', [("B^2 - 4AC = 48 g+ g-", residue)])

def check_twist() -> SymbolicCheck:
    R, x, y = ring("x,y", QQ_I)
    i = R(QQ_I(0, 1))
    twisted = _sub(models.G_PLUS.set_ring(R), {0: i*x, 1: i*y}, R)
    return _verdict('TWIST', [("g-(x, y) = g+(ix, iy)", models.G_MINUS.set_ring(R) - twisted)])

def _invariant_images() -> Dict[int,PolyElement]:
    return dict(enumerate(models.P_INVARIANTS))

def check_igusa() -> SymbolicCheck:
    return _verdict('IGUSA', [("G_I(p0, ..., p4) = 0", _sub(models.IGUSA, _invariant_images(), models.P3))])

def check_gm() -> SymbolicCheck:
    image = _sub(models.QUADRIC, _invariant_images(), models.P3)
    return _verdict('GM', [("G_M(p0, ..., p4) = F", image - models.F)])

def _igusa_in_square() -> PolyElement:
    """G_I with y4^2 renamed s, in QQ[y0, y1, y2, y3, s]."""
    T = ring("y0,y1,y2,y3,s", QQ)[0]
    terms = {}
    for monom, coeff in models.IGUSA.terms():
        if monom[4] % 2:
            raise ValueError("G_I has an odd power of y4")
        terms[monom[:4] + (monom[4] // 2,)] = QQ.convert(coeff, ZZ)
    return T.from_dict(terms)

def check_wquartic() -> SymbolicCheck:
    W, w0, w1, w2, w3 = ring("w0,w1,w2,w3", QQ)
    s = -(w0**2 + 3*(w1**2 + w2**2 + w3**2))/6
    image = _sub(_igusa_in_square(), {0: w0, 1: w1, 2: w2, 3: w3, 4: s}, W)
    quartic = models.W_QUARTIC.set_ring(W)
    ratio = image.LC/quartic.LC
    residue = image - quartic*ratio
    if not ratio or residue:
        return SymbolicCheck('WQUARTIC', 'fail', "G_I(y4^2 = s) - ({}) H: {}".format(ratio, residue.as_expr()))
    return SymbolicCheck('WQUARTIC', 'pass', "G_I(y4^2 = -(y0^2 + 3(y1^2 + y2^2 + y3^2))/6) = ({}) H".format(ratio))

def check_wlines() -> SymbolicCheck:
    K, s, l, m = ring("s,l,m", QQ)
    omega = (s - 1)/2
    lines = {
        'm': ((3, 0, s, 0), (0, 3, 0, s)),
        "m'": ((omega - 1, -omega, 1, 0), (-omega - 2, omega + 1, 0, 1)),
    }
    residues = []
    for name, (u, v) in lines.items():
        point = {j: l*K(a) + m*K(b) for j, (a, b) in enumerate(zip(u, v))}
        _, remainder = poly_divrem(_sub(models.W_QUARTIC, point, K), s**2 + 3)
        residues.append(("{} lies on W over Q[s]/(s^2 + 3)".format(name), remainder))
    return _verdict('WLINES', residues)

def check_lines32() -> SymbolicCheck:
    x, y = models.x, models.y
    C = models.C
    diagonal = {0: x, 1: x}
    factor_a = x**4 - 2*x**3 + 2*x**2 + 2*x + 1
    factor_b = x**4 + 2*x**3 + 2*x**2 - 2*x + 1
    residues = [
        ("g+(x, x) = 2(x^8 + 14x^4 + 1)", _sub(models.G_PLUS, diagonal) - 2*C),
        ("g-(x, x) = 2(x^8 + 14x^4 + 1)", _sub(models.G_MINUS, diagonal) - 2*C),
        ("x^8 + 14x^4 + 1 factors into two quartics", C - factor_a*factor_b),
        ("g+ is even in y", _sub(models.G_PLUS, {0: x, 1: -y}) - models.G_PLUS),
        ("g- is even in y", _sub(models.G_MINUS, {0: x, 1: -y}) - models.G_MINUS),
    ]
    # y -> 1/y symmetry: the y-coefficients P, Q are palindromic
    swap = {0: models.vh, 1: models.yh}
    for name, f in (("P", models.P_HOM), ("Q", models.Q_HOM), ("P-", models.P_MINUS_HOM), ("Q-", models.Q_MINUS_HOM)):
        residues.append(("{} is palindromic".format(name), _sub(f, swap) - f))
    Rx = ring("x", QQ)[0]
    c = Rx.from_dict({(m[0],): QQ.convert(v, ZZ) for m, v in C.terms()})
    distinct = [
        ("x^8 + 14x^4 + 1 is squarefree", Rx.one - c.gcd(c.diff(Rx.gens[0]))),
        ("x^4 != 1 on the roots, so +-x, +-1/x are distinct", Rx.one - c.gcd(Rx.gens[0]**4 - 1)),
    ]
    verdict = _verdict('LINES32', residues + distinct)
    if verdict.passed:
        return SymbolicCheck('LINES32', 'pass', "8 roots x 4 values of y = 32 lines; " + verdict.witness)
    return verdict

def check_ginvar() -> SymbolicCheck:
    R = models.P3.clone(domain=QQ_I)
    F = models.F.set_ring(R)
    residues = []
    for name, g in zip(('g1', 'g2'), maschke_generators()):
        image = _sub(F, dict(enumerate(g.linear_forms(R))), R)
        residues.append(("F o {} = F".format(name), image - F))
    return _verdict('GINVAR', residues)

AJ_Y = 2

def check_aj() -> SymbolicCheck:
    """
    Deform the line t -> (x, 1, ty, t) to (x + e(a + ct), 1, ty + e(b + dt), t)
    and F to F + e X0^2 X1^4 X2^2, e^2 = 0. The first order part k(t) must be
    divisible by f_c(t) ~ 2A t^4 + B for the line to stay four-tangent; at
    y = 2 its remainder has a t^2 coefficient in Q[x]/(g+(x, 2)) that is a
    non-zero constant in a, b, c, d.
    """
    R, a, b, c, d, t, x = ring("a,b,c,d,t,x", QQ)
    y = R(AJ_Y)
    point = {0: x, 1: R.one, 2: t*y, 3: t}
    x0, x1, x2, x3 = models.P3.gens
    k = (_sub(models.F.diff(x0), point, R)*(a + c*t)
         + _sub(models.F.diff(x2), point, R)*(b + d*t)
         + _sub(x0**2*x1**4*x2**2, point, R))
    A = _sub(models.A, {0: x, 1: y}, R)
    B = _sub(models.B, {0: x, 1: y}, R)
    modulus = [(2*A*t**4 + B).monic(), _sub(models.G_PLUS, {0: x, 1: y}, R).monic()]
    remainder = k.rem(modulus)
    coefficient = R.zero
    for monom, coeff in remainder.terms():
        if monom[4] == 2:
            coefficient += R({monom[:4] + (0,) + monom[5:]: coeff})
    depends = any(any(monom[:4]) for monom in coefficient.monoms())
    if not coefficient or depends:
        return SymbolicCheck('AJ', 'fail', "t^2 coefficient of k mod f_c: {}".format(coefficient.as_expr()))
    return SymbolicCheck('AJ', 'pass', "t^2 coefficient of k mod f_c at y = 2: {}".format(coefficient.as_expr()))

def check_quot() -> SymbolicCheck:
    """
    C+ / <x -> -x, x -> 1/x>: with z = x^2, P z^2 - Q z + P = 0 becomes
    s^2 = Q^2 - 4P^2 through s = 2Pz - Q; combined with t^2 = A this gives
    u^2 = A(Q^2 - 4P^2), u = st.
    """
    R, s, t, x, y = ring("s,t,x,y", QQ)
    P, Q, A = (_sub(f, {0: x, 1: y}, R) for f in (models.P, models.Q, models.A))
    g_plus = _sub(models.G_PLUS, {0: x, 1: y}, R)
    disc = Q**2 - 4*P**2
    relations = [s**2 - disc, t**2 - A]
    residues = [
        ("(2P x^2 - Q)^2 - (Q^2 - 4P^2) = 4P g+", (2*P*x**2 - Q)**2 - disc - 4*P*g_plus),
        ("(st)^2 = A (Q^2 - 4P^2) on s^2 = Q^2 - 4P^2, t^2 = A", ((s*t)**2).rem(relations) - A*disc),
    ]
    verdict = _verdict('QUOT', residues)
    if verdict.passed:
        degrees = "deg(Q^2 - 4P^2) = {}, deg(A (Q^2 - 4P^2)) = {}".format(disc.degree(y), (A*disc).degree(y))
        return SymbolicCheck('QUOT', 'pass', verdict.witness + "; " + degrees)
    return verdict

_CHECKS: Dict[str,Callable[[],SymbolicCheck]] = {
    'ABC': check_abc,
    'DELTA': check_delta,
    'TWIST': check_twist,
    'IGUSA': check_igusa,
    'GM': check_gm,
    'WQUARTIC': check_wquartic,
    'WLINES': check_wlines,
    'LINES32': check_lines32,
    'GINVAR': check_ginvar,
    'AJ': check_aj,
    'QUOT': check_quot,
}

def run_check(check_id: str) -> SymbolicCheck:
    if check_id not in _CHECKS:
        raise ValueError("Unknown check {}, expected one of {}".format(check_id, ", ".join(CHECK_IDS)))
    result = _CHECKS[check_id]()
    logger.info("Check %s: %s", check_id, result.verdict)
    return result

def run_checks(check_ids: Optional[Sequence[str]] = None, workers: int = 1) -> List[SymbolicCheck]:
    """Run the selected checks (all by default) and report them in the fixed id order."""
    selected = [c for c in CHECK_IDS if not check_ids or c in check_ids]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_check, selected))
    return [run_check(c) for c in selected]

# -- genus bookkeeping ------------------------------------------------------

@dataclass
class GenusReport:
    c_plus: int
    c_tilde: int
    c3: int
    cbar: int
    c7: int
    branch_points: int
    certificates: Dict[str,bool] = field(default_factory=dict)

_Ry, _y = ring("y", QQ)

def _in_y(f: PolyElement) -> PolyElement:
    """A polynomial in y alone, from any of the model rings."""
    index = [str(s) for s in f.ring.symbols].index('y')
    terms = {}
    for monom, coeff in f.terms():
        if any(e for j, e in enumerate(monom) if j != index):
            raise ValueError("{} is not a polynomial in y alone".format(f.as_expr()))
        terms[(monom[index],)] = QQ.convert(coeff, f.ring.domain)
    return _Ry.from_dict(terms)

def _squarefree(f: PolyElement) -> bool:
    return f.gcd(f.diff(_y)).degree() == 0

def _coprime(f: PolyElement, g: PolyElement) -> bool:
    return f.gcd(g).degree() == 0

def _strip(f: PolyElement, factor: PolyElement) -> PolyElement:
    while f.degree() > 0:
        common = f.gcd(factor)
        if common.degree() == 0:
            break
        f = f.quo(common)
    return f

def smooth_bidegree_44(g: PolyElement, P: PolyElement, Q: PolyElement) -> bool:
    """
    g = P(y) x^4 - Q(y) x^2 + P(y) has no singular point in P^1 x P^1.

    Affine singular points with P(y) != 0 are common roots of
    Res_x(g, dg/dx) and Res_x(g, dg/dy), both of which also pick up the
    leading coefficient P, so those factors are removed first. Over a root
    of P the curve meets only x = 0, where dg/dy = P'(y) != 0 if P is
    squarefree. The charts at infinity are copies of the affine one because
    g is palindromic in x and in y.
    """
    R = ring("x,y", QQ)[0]
    g = R.from_dict({m: QQ.convert(c, ZZ) for m, c in g.terms()})
    x, y = R.gens
    res_x = _in_y(g.resultant(g.diff(x)))
    res_y = _in_y(g.resultant(g.diff(y)))
    P, Q = _in_y(P), _in_y(Q)
    common = _strip(res_x.gcd(res_y), P)
    return common.degree() == 0 and _squarefree(P) and _coprime(P, Q)

def _hyperelliptic_genus(f: PolyElement) -> int:
    """Genus of u^2 = f for squarefree f of even degree."""
    return (f.degree() - 1) // 2

def curve_invariants() -> GenusReport:
    A, P, Q = _in_y(models.A), _in_y(models.P), _in_y(models.Q)
    disc = Q**2 - 4*P**2
    certificates = {
        'C+ smooth': smooth_bidegree_44(models.G_PLUS, models.P, models.Q),
        'A squarefree': _squarefree(A),
        'Q^2 - 4P^2 squarefree': _squarefree(disc),
        'A prime to P': _coprime(A, P),
        'A prime to Q^2 - 4P^2': _coprime(A, disc),
    }
    if not all(certificates.values()):
        failed = [name for name, ok in certificates.items() if not ok]
        raise ValueError("Genus certificates fail: {}".format(", ".join(failed)))

    g_plus = (4 - 1)*(4 - 1)
    # over each of the 8 roots of A the map C+ -> P^1_y is unramified with 4 points
    branch = A.degree()*4
    g_tilde = (2*(2*g_plus - 2) + branch + 2) // 2
    report = GenusReport(g_plus, g_tilde, _hyperelliptic_genus(A), _hyperelliptic_genus(disc),
                         _hyperelliptic_genus(A*disc), branch, certificates)
    logger.info("Genera: C+ %d, C~+ %d, C3 %d, Cbar %d, C7 %d", g_plus, g_tilde, report.c3, report.cbar, report.c7)
    return report
