"""Exact exponent formulas for pencils, multiplicative approximation and quasi-norms.

All maxima run over explicit finite sets of rational candidate subspaces;
the answer is exact for the candidate set and reports which candidate
attains it.  Index sets are 0-based: forms ``0..m-1`` are
``L_i(p, q) = Y_i q - p_i`` and forms ``m..m+n-1`` are the coordinates of
``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .exact import linalg
from .exact.field import common_field, real_value, sign, to_mpf
from .exact.subspace import Subspace
from .slopes.lattice import rational_subspaces
from .slopes.polygon import GraysonPolygon

__all__ = [
    "INFINITY",
    "HomFamily",
    "MultPencil",
    "QuasiNorm",
    "ExponentResult",
    "DirichletWitness",
    "rank_image",
    "beta_formula",
    "pencil_forms",
    "s_rank",
    "omega_formula",
    "pencil_contains",
    "polytope_vertices",
    "in_polytope",
    "dirichlet_witness",
    "alpha_growth",
    "beta_alpha_formula",
    "gamma_bridge",
    "empirical_exponent",
    "candidate_set",
]

INFINITY = math.inf


@dataclass(frozen=True)
class HomFamily:
    """Sample maps ``K^d -> K^m`` given as ``m x d`` matrices."""

    samples: tuple
    label: str = ""

    def __post_init__(self):
        mats = tuple(linalg.as_matrix(s) for s in self.samples)
        if not mats:
            raise ValueError("a family needs at least one sample")
        shape = (len(mats[0]), len(mats[0][0]))
        for s in mats:
            if (len(s), len(s[0]) if s else 0) != shape or any(len(r) != shape[1] for r in s):
                raise ValueError("samples must share one shape")
        common_field(x for s in mats for r in s for x in r)
        object.__setattr__(self, "samples", mats)

    @property
    def shape(self) -> tuple:
        return len(self.samples[0]), len(self.samples[0][0])

    @property
    def source_dim(self) -> int:
        return self.shape[1]


@dataclass(frozen=True)
class MultPencil:
    I: tuple
    J: tuple
    r: int
    s: int
    W: Subspace
    m: int
    n: int

    def __post_init__(self):
        I, J = tuple(sorted(self.I)), tuple(sorted(self.J))
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "J", J)
        top = set(range(self.m))
        if not I or not set(I) <= top:
            raise ValueError("I must be a nonempty subset of the first m indices")
        if not top <= set(J) or len(J) >= self.m + self.n or not set(J) <= set(range(self.m + self.n)):
            raise ValueError("J must contain the first m indices and be proper")
        if self.W.ambient_dim != self.m + self.n:
            raise ValueError("W lives in the wrong dimension")

    def ratio(self):
        k = self.W.dim
        if self.r == 0:
            return INFINITY
        return Fraction((k - self.s) * len(self.I), self.r * (self.m + self.n - len(self.J)))

    def to_dict(self) -> dict:
        return {"I": list(self.I), "J": list(self.J), "r": self.r, "s": self.s,
                "W": self.W.to_lists(), "ratio": _fmt(self.ratio())}


@dataclass(frozen=True)
class QuasiNorm:
    alphas: tuple
    dual_basis: tuple

    def __post_init__(self):
        alphas = tuple(Fraction(a) for a in self.alphas)
        if any(a <= 0 for a in alphas):
            raise ValueError("quasi-norm exponents must be positive")
        U = linalg.as_matrix(self.dual_basis)
        if len(U) != len(alphas) or any(len(r) != len(alphas) for r in U):
            raise ValueError("need d independent forms for d exponents")
        if linalg.rank(U) != len(alphas):
            raise ValueError("dual basis forms are dependent")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "dual_basis", U)

    @classmethod
    def standard(cls, alphas) -> "QuasiNorm":
        return cls(tuple(alphas), linalg.identity(len(alphas)))

    @property
    def dim(self) -> int:
        return len(self.alphas)


@dataclass
class ExponentResult:
    value: object  # Fraction or INFINITY
    certificate: dict
    candidates: int
    height: int | None = None

    def to_dict(self) -> dict:
        return {"value": _fmt(self.value), "certificate": self.certificate,
                "candidates": self.candidates, "height": self.height}


def _fmt(v):
    return "inf" if v == INFINITY else str(v)


def candidate_set(d: int, height: int, extra: Iterable[Subspace] = ()) -> list:
    """Nonzero rational subspaces of height <= ``height`` together with ``extra`` and the full space."""
    out = set(rational_subspaces(d, height))
    out.update(extra)
    out.add(Subspace.full(d))
    out.discard(Subspace.zero(d))
    return sorted(out, key=Subspace.sort_key)


def _with_full(candidates, d):
    cands = [W for W in candidates if not W.is_zero()]
    if Subspace.full(d) not in cands:
        cands.append(Subspace.full(d))
    return cands


def _restricted(forms, W: Subspace):
    """Matrix of the forms (rows) evaluated on the basis of W."""
    return [[linalg._dot(f, w) for w in W.basis] for f in forms]


def rank_image(fam: HomFamily, W: Subspace) -> int:
    """``max over samples of dim x(W)``."""
    if W.ambient_dim != fam.source_dim:
        raise ValueError("W and the family have different source dimensions")
    if W.is_zero():
        return 0
    return max(linalg.rank(_restricted(x, W)) for x in fam.samples)


def beta_formula(fam: HomFamily, candidates: Sequence[Subspace], height: int | None = None) -> ExponentResult:
    """``max_W dim W / r(W) - 1`` over nonzero candidates; infinite when some r(W) = 0."""
    d = fam.source_dim
    cands = _with_full(candidates, d)
    best = None
    for W in cands:
        r = rank_image(fam, W)
        val = INFINITY if r == 0 else Fraction(W.dim, r) - 1
        if best is None or val > best[0]:
            best = (val, W, r)
        if val == INFINITY:
            break
    val, W, r = best
    cert = {"W": W.to_lists(), "dim": W.dim, "r": r}
    if r == 0:
        cert["kernel_vector"] = list(_canonical_int(W.lattice_basis()[0]))
    return ExponentResult(val, cert, len(cands), height)


def _canonical_int(v):
    v = tuple(int(x) for x in v)
    nz = next((x for x in v if x), 0)
    return tuple(-x for x in v) if nz < 0 else v


# ---------------------------------------------------------------------------
# multiplicative pencils


def pencil_forms(Y) -> list:
    """Rows of the ``(m+n) x (m+n)`` matrix of forms ``L_Y`` in coordinates ``(p, q)``."""
    Y = linalg.as_matrix(Y)
    m, n = len(Y), len(Y[0])
    rows = []
    for i in range(m):
        rows.append(tuple([Fraction(-1) if j == i else Fraction(0) for j in range(m)] + list(Y[i])))
    for j in range(n):
        rows.append(tuple(Fraction(int(c == m + j)) for c in range(m + n)))
    return rows


def s_rank(Y, I: Iterable[int], W: Subspace) -> int:
    """Rank of the forms ``L_i`` (i in I) restricted to W."""
    forms = pencil_forms(Y)
    if W.ambient_dim != len(forms):
        raise ValueError("W must live in dimension m + n")
    I = sorted(set(I))
    if not I or W.is_zero():
        return 0
    return linalg.rank(_restricted([forms[i] for i in I], W))


def _index_pairs(m, n):
    tops = list(range(m))
    for a in range(1, m + 1):
        for I in combinations(tops, a):
            for b in range(n):
                for extra in combinations(range(m, m + n), b):
                    yield I, tuple(tops) + extra


def omega_formula(Ys: Sequence, candidates: Sequence[Subspace], height: int | None = None) -> ExponentResult:
    """Max of ``(dim W - s)|I| / (r (m+n-|J|))`` over candidates W and index pairs (I, J).

    ``r`` and ``s`` are maxima over the samples, so the certificate pencil
    contains every sample.  ``r = 0`` with ``dim W > s`` gives infinity.
    """
    Ys = [linalg.as_matrix(Y) for Y in Ys]
    if not Ys:
        raise ValueError("need at least one sample")
    m, n = len(Ys[0]), len(Ys[0][0])
    if any((len(Y), len(Y[0])) != (m, n) for Y in Ys):
        raise ValueError("samples must share one shape")
    forms = [pencil_forms(Y) for Y in Ys]
    cands = _with_full(candidates, m + n)
    best = None
    for W in cands:
        k = W.dim
        restricted = [_restricted(F, W) for F in forms]
        rank_cache = {}

        def srank(idx):
            if idx not in rank_cache:
                rank_cache[idx] = max(linalg.rank([R[i] for i in idx]) for R in restricted)
            return rank_cache[idx]

        for I, J in _index_pairs(m, n):
            r, s = srank(I), srank(J)
            if r == 0 and k == s:
                continue
            p = MultPencil(I, J, r, s, W, m, n)
            val = p.ratio()
            if best is None or val > best[0]:
                best = (val, p)
        if best is not None and best[0] == INFINITY:
            break
    val, p = best
    cert = p.to_dict()
    if p.r == 0:
        cert["kernel_form"] = next(i for i in p.I if _srank_single(forms, p.W, i) == 0)
        cert["kernel_vector"] = list(_canonical_int(p.W.lattice_basis()[0]))
    return ExponentResult(val, cert, len(cands), height)


def _srank_single(forms, W, i):
    return max(linalg.rank(_restricted([F[i]], W)) for F in forms)


def pencil_contains(Y, pencil: MultPencil) -> bool:
    """Exact re-check that ``s_{I,W} <= r`` and ``s_{J,W} <= s`` for the sample Y."""
    return s_rank(Y, pencil.I, pencil.W) <= pencil.r and s_rank(Y, pencil.J, pencil.W) <= pencil.s


# ---------------------------------------------------------------------------
# the vertex polytope


def polytope_vertices(f: int, g: int) -> list:
    """The ``g f`` vertices ``p_{a,b}`` as ``(c, d)`` tuples of Fractions."""
    if f < 1 or g < 1:
        raise ValueError("f and g must be positive")
    out = []
    for a in range(g):
        for b in range(1, f + 1):
            height = Fraction(g - a, b)
            c = tuple([height] * b + [Fraction(0)] * (f - b))
            d = tuple([Fraction(0)] * a + [Fraction(1)] * (g - a))
            if not in_polytope(c, d):
                raise AssertionError("vertex outside the polytope")
            out.append((c, d))
    return out


def in_polytope(c: Sequence, d: Sequence) -> bool:
    """Membership in ``c`` nonincreasing >= 0, ``d`` nondecreasing in [0, 1], ``sum d >= sum c``."""
    if any(x < y for x, y in zip(c, c[1:])) or (c and c[-1] < 0):
        return False
    if any(x > y for x, y in zip(d, d[1:])) or (d and (d[0] < 0 or d[-1] > 1)):
        return False
    return sum(d) >= sum(c)


# ---------------------------------------------------------------------------
# Dirichlet witnesses


@dataclass
class DirichletWitness:
    v: tuple
    kernel: bool
    indices: tuple  # selected forms i_1..i_k
    r: int
    s: int
    k: int
    ratio: object
    c0: Fraction
    Q: Fraction
    lhs: float = 0.0  # prod_{i<m} |L_i(v)|
    rhs: float = 0.0  # C * prod_j |q_j|_+^(-ratio)
    C: float = 0.0
    points: int = 0

    @property
    def ok(self) -> bool:
        return self.kernel or self.lhs <= self.rhs * (1 + 1e-12)

    def to_dict(self) -> dict:
        return {"v": list(self.v), "kernel": self.kernel, "indices": list(self.indices),
                "r": self.r, "s": self.s, "k": self.k, "ratio": _fmt(self.ratio),
                "c0": str(self.c0), "Q": str(self.Q), "lhs": self.lhs, "rhs": self.rhs,
                "C": self.C, "points": self.points}


def _greedy(rows, pools):
    chosen = []
    for pool in pools:
        for i in pool:
            if i in chosen:
                continue
            if linalg.rank([rows[j] for j in chosen + [i]]) == len(chosen) + 1:
                chosen.append(i)
        yield list(chosen)


def _abs_le(x, bound: Fraction) -> bool:
    return sign(bound - x) >= 0 and sign(bound + x) >= 0


def _upper(x, bits=60) -> float:
    lo, hi = real_value(x, bits)
    return float(max(abs(lo), abs(hi))) * (1 + 1e-12)


def dirichlet_witness(Y, W: Subspace, I, J, Q, max_points: int = 10 ** 6, max_doublings: int = 40) -> DirichletWitness:
    """Nonzero ``v`` in ``W cap Z^{m+n}`` inside the box from Minkowski's theorem.

    The box bounds the selected forms by ``Q^-(k-s)``, ``c0`` and ``Q^r``
    on the three index blocks.  ``c0`` starts at 1 and doubles until a
    lattice point appears; when ``s == r`` the middle block is empty and
    ``c0`` scales the last block instead.
    """
    Y = linalg.as_matrix(Y)
    m, n = len(Y), len(Y[0])
    forms = pencil_forms(Y)
    Q = Fraction(Q)
    if Q < 1:
        raise ValueError("Q must be >= 1")
    I, J = sorted(set(I)), sorted(set(J))
    MultPencil(tuple(I), tuple(J), 0, 0, W, m, n)  # index validation only
    k = W.dim
    if k == 0:
        raise ValueError("W must be nonzero")
    rows = _restricted(forms, W)
    r = linalg.rank([rows[i] for i in I])
    s = linalg.rank([rows[i] for i in J])
    basis = [list(_canonical_int(b)) for b in W.lattice_basis()]
    if r == 0:
        v = tuple(basis[0])
        return DirichletWitness(v, True, (), 0, s, k, INFINITY, Fraction(1), Q)
    if s >= k:
        raise ValueError("s >= dim W: the box gives no exponent")
    ratio = Fraction((k - s) * len(I), r * (m + n - len(J)))
    chosen = None
    for chosen in _greedy(rows, (I, J, range(m + n))):
        pass
    idx = tuple(chosen)
    # forms on the lattice basis: y = F B c
    FB = [[linalg._dot(forms[i], b) for b in basis] for i in idx]
    FBinv = linalg.inverse(FB)
    c0 = Fraction(1)
    for _ in range(max_doublings):
        bounds = []
        for ell in range(k):
            if ell < r:
                bounds.append(Q ** -(k - s))
            elif ell < s:
                bounds.append(c0)
            else:
                bounds.append(Q ** r * (c0 if s == r else 1))
        ranges = [math.floor(sum(_upper(FBinv[j][l]) * float(bounds[l]) for l in range(k))) for j in range(k)]
        total = math.prod(2 * x + 1 for x in ranges)
        if total > max_points:
            raise RuntimeError(f"witness box holds {total} points, above the cap of {max_points}")
        best = None
        for coeffs in product(*[range(-x, x + 1) for x in ranges]):
            if not any(coeffs):
                continue
            v = [sum(c * b[t] for c, b in zip(coeffs, basis)) for t in range(m + n)]
            if all(_abs_le(linalg._dot(forms[i], v), bounds[l]) for l, i in enumerate(idx)):
                key = (sum(x * x for x in v), _canonical_int(v))
                if best is None or key < best:
                    best = key
        if best is not None:
            v = best[1]
            wit = DirichletWitness(v, False, idx, r, s, k, ratio, c0, Q, points=total)
            _record_bound(wit, forms, rows, idx, bounds, m, n)
            return wit
        c0 *= 2
    raise RuntimeError("no witness found before c0 reached its cap")


def _record_bound(wit, forms, rows, idx, bounds, m, n):
    # every form on W is a combination of the selected ones, which bounds it on the box
    St = linalg.transpose([rows[i] for i in idx])
    prec = 80

    def fbound(i):
        coef = linalg.solve(St, rows[i])
        return sum(_upper(cf) * float(b) for cf, b in zip(coef, bounds))

    C = 1.0
    for i in range(m):
        C *= fbound(i)
    for j in range(n):
        C *= max(1.0, fbound(m + j)) ** float(wit.ratio)
    lhs = 1.0
    for i in range(m):
        lhs *= float(abs(to_mpf(linalg._dot(forms[i], wit.v), prec)))
    rhs = C
    for j in range(n):
        rhs *= max(1, abs(wit.v[m + j])) ** -float(wit.ratio)
    wit.C, wit.lhs, wit.rhs = C, lhs, rhs


def alpha_growth(W: Subspace, qn: QuasiNorm) -> Fraction:
    """``sum of alpha_i`` over the greedy index set of independent restricted dual forms."""
    if W.is_zero():
        raise ValueError("growth rate of the zero subspace is undefined")
    if W.ambient_dim != qn.dim:
        raise ValueError("dimension mismatch")
    rows = _restricted(qn.dual_basis, W)
    chosen = None
    for chosen in _greedy(rows, (range(qn.dim),)):
        pass
    return sum((qn.alphas[i] for i in chosen), Fraction(0))


def beta_alpha_formula(fam: HomFamily, candidates: Sequence[Subspace], qn: QuasiNorm,
                       height: int | None = None) -> ExponentResult:
    """``max_W min_y alpha(W cap ker y) / (dim W - dim(W cap ker y))``.

    Kernels are taken exactly in the samples' field; the minimum over the
    family is taken over the given samples.
    """
    d = fam.source_dim
    if qn.dim != d:
        raise ValueError("quasi-norm dimension differs from the source dimension")
    kernels = [Subspace(d, linalg.kernel_basis(y, d)) for y in fam.samples]
    cands = _with_full(candidates, d)
    best = None
    for W in cands:
        vals = []
        for K in kernels:
            WK = W & K
            den = W.dim - WK.dim
            if den == 0:
                vals.append((INFINITY, WK))
            else:
                num = alpha_growth(WK, qn) if not WK.is_zero() else Fraction(0)
                vals.append((Fraction(num) / den, WK))
        v, WK = min(vals, key=lambda p: p[0])
        if best is None or v > best[0]:
            best = (v, W, WK)
    v, W, WK = best
    cert = {"W": W.to_lists(), "W_cap_ker": WK.to_lists(), "dim": W.dim, "dim_cap": WK.dim}
    return ExponentResult(v, cert, len(cands), height)


def gamma_bridge(polygon: GraysonPolygon, n: int, m: int) -> Fraction:
    """``(n + m) / (gamma + m) - 1`` with ``gamma`` the smallest polygon slope."""
    if polygon.dim != n + m:
        raise ValueError("polygon must live over a space of dimension n + m")
    gamma = min(polygon.slopes)
    if gamma + m <= 0:
        raise ValueError(f"degenerate bridge: gamma + m = {gamma + m} <= 0")
    return Fraction(n + m) / (gamma + m) - 1


def empirical_exponent(Y, N: int, start: int | None = None):
    """Slope fit of ``-log prod|Y_i q - p_i|`` against ``log prod |q_j|_+`` on record holders.

    Scans ``||q||_sup <= N`` with ``p`` nearest to ``Y q``.  Returns
    INFINITY when an exact zero occurs, else the least-squares slope over
    the record holders with ``prod |q_j|_+ >= start`` (default ``sqrt N``).
    """
    Y = linalg.as_matrix(Y)
    m, n = len(Y), len(Y[0])
    if start is None:
        start = max(2, math.isqrt(N))
    pts = []
    for q in product(range(-N, N + 1), repeat=n):
        if not any(q) or next(x for x in q if x) < 0:
            continue
        prodL = 1.0
        zero = False
        for i in range(m):
            yq = sum((c * qj for c, qj in zip(Y[i], q) if qj), Fraction(0))
            lo, hi = real_value(yq, 80)
            p = math.floor(float((lo + hi) / 2) + 0.5)
            val = yq - p
            if sign(val) == 0:
                zero = True
                break
            prodL *= float(abs(to_mpf(val, 80)))
        if zero:
            return INFINITY
        qp = math.prod(max(1, abs(x)) for x in q)
        pts.append((qp, prodL))
    pts.sort()
    records = []
    best = math.inf
    for qp, L in pts:
        if L < best:
            best = L
            if qp >= start:
                records.append((math.log(qp), -math.log(L)))
    if len(records) < 2:
        return None
    xs, ys = zip(*records)
    xm, ym = sum(xs) / len(xs), sum(ys) / len(ys)
    den = sum((x - xm) ** 2 for x in xs)
    if den == 0:
        return None
    return sum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / den
