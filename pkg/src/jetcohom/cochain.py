"""Exact energy-graded Chevalley-Eilenberg pipeline.

Cochains of the positive-mode algebra are wedges of dual modes e^{i,l}
with level l >= 1; the differential preserves the energy k = sum of
levels, so everything happens in independent (degree, energy) cells.
Matrices are exact rationals: the differential is integral, the metric
on wedges is induced by the compact-involution form (Gram of a wedge =
determinant of pairwise Grams), and kernels come from fraction-free
elimination.

Sign conventions.  The positive semi-definite cell Laplacian acts on the
isotypic component of lowest weight lam at energy k by the scalar
c*k + <rho, lam> - ||lam||^2/2, the negative of ``eigenvalue_of`` (which
follows the closed-form operator of the semi-infinite model; see the
fock module).  Harmonicity, the vanishing locus, is the same either way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from . import exactlinalg as xl
from .liealg import AlgebraData, FiniteWeight, casimir_eigenvalue, is_dominant
from .reptheory import IrrepSummand, decompose, weights_of_basis
from .affine import AffineWeight, laplacian_shift

Mode = Tuple[int, int]  # (level >= 1, basis index)
Wedge = Tuple[Mode, ...]


@dataclass(frozen=True)
class CochainBasis:
    degree: int
    energy: int
    monomials: Tuple[Wedge, ...]

    def __len__(self) -> int:
        return len(self.monomials)

    def index(self) -> Dict[Wedge, int]:
        return {w: i for i, w in enumerate(self.monomials)}


def _signatures(p: int, k: int, n: int) -> Iterable[Tuple[int, ...]]:
    """Level multisets (ascending tuples) with p parts summing to k, each
    level used at most n times (wedge exclusion within one level)."""

    def rec(min_level: int, parts: int, total: int):
        if parts == 0:
            if total == 0:
                yield ()
            return
        for level in range(min_level, total - parts + 2):
            max_count = min(n, parts, total // level)
            for count in range(1, max_count + 1):
                if level * count > total - (parts - count):
                    continue
                for rest in rec(level + 1, parts - count, total - level * count):
                    yield (level,) * count + rest

    return rec(1, p, k)


def build_basis(data: AlgebraData, p: int, k: int) -> CochainBasis:
    """Canonical basis of the (degree p, energy k) cell.

    Monomials are grouped by level signature (signatures in lex order),
    then by lexicographic index combinations per level; within a wedge,
    modes are ascending in (level, index).
    """
    if p < 0 or k < 0:
        raise ValueError("degree and energy must be nonnegative")
    n = data.dim
    if p == 0:
        return CochainBasis(0, k, ((),) if k == 0 else ())
    if k == 0 or p > k:
        return CochainBasis(p, k, ())
    monomials: List[Wedge] = []
    for sig in sorted(_signatures(p, k, n)):
        levels = sorted(set(sig))
        per_level = [
            list(itertools.combinations(range(n), sig.count(level))) for level in levels
        ]
        for combo in itertools.product(*per_level):
            wedge: List[Mode] = []
            for level, idxs in zip(levels, combo):
                wedge.extend((level, a) for a in idxs)
            monomials.append(tuple(wedge))
    return CochainBasis(p, k, tuple(monomials))


def _insert_modes(wedge: Sequence[Mode], skip: int, new: Sequence[Mode]) -> Tuple[int, Wedge] | None:
    """Orientation of new_1 ^ ... ^ new_q ^ (wedge minus position ``skip``)
    against the sorted wedge: (sign, sorted wedge), or None on a repeat.

    The caller accounts for the extra (-1)^(q * skip) that moves the block
    from position ``skip`` to the front.
    """
    rest = [m for i, m in enumerate(wedge) if i != skip]
    out = list(rest)
    sign = 1
    for m in reversed(new):
        lo = 0
        hi = len(out)
        while lo < hi:
            mid = (lo + hi) // 2
            if out[mid] < m:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(out) and out[lo] == m:
            return None
        # moving m past the first `lo` factors
        sign *= -1 if lo % 2 else 1
        out.insert(lo, m)
    return sign, tuple(out)


@dataclass
class GradedComplexBlock:
    basisIn: CochainBasis
    basisOut: CochainBasis
    dMatrix: Dict[Tuple[int, int], int]  # (row, col) -> integer entry

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.basisOut), len(self.basisIn))

    def dense(self) -> List[List[Fraction]]:
        rows, cols = self.shape
        out = xl.zeros(rows, cols)
        for (r, c), v in self.dMatrix.items():
            out[r][c] = Fraction(v)
        return out

    def to_json_dict(self, algebra_hash: str) -> dict:
        return {
            "algebra_hash": algebra_hash,
            "degree": self.basisIn.degree,
            "energy": self.basisIn.energy,
            "dim_in": len(self.basisIn),
            "dim_out": len(self.basisOut),
            "monomials_in": [[list(m) for m in w] for w in self.basisIn.monomials],
            "monomials_out": [[list(m) for m in w] for w in self.basisOut.monomials],
            "triples": sorted([r, c, v] for (r, c), v in self.dMatrix.items()),
        }


def differential_block(data: AlgebraData, p: int, k: int) -> GradedComplexBlock:
    """Chevalley-Eilenberg differential A^p(k) -> A^{p+1}(k), exact integers."""
    basis_in = build_basis(data, p, k)
    basis_out = build_basis(data, p + 1, k)
    out_index = basis_out.index()
    entries: Dict[Tuple[int, int], int] = {}
    n = data.dim
    for col, wedge in enumerate(basis_in.monomials):
        for j, (level, m) in enumerate(wedge):
            outer_sign = -1 if j % 2 else 1
            # d(e^{m,level}) = - sum_{u<v} C_{uv}^m e^u ^ e^v over mode pairs
            for l1 in range(1, level // 2 + 1):
                l2 = level - l1
                for a in range(n):
                    col_a = data.structure[a]
                    for b, coeffs in col_a.items():
                        c = coeffs.get(m)
                        if c is None:
                            continue
                        u, v = (l1, a), (l2, b)
                        if u >= v:
                            continue  # each unordered mode pair once, ascending
                        ins = _insert_modes(wedge, j, (u, v))
                        if ins is None:
                            continue
                        sign, new_wedge = ins
                        row = out_index[new_wedge]
                        val = entries.get((row, col), 0) - outer_sign * sign * c
                        if val:
                            entries[(row, col)] = val
                        else:
                            entries.pop((row, col), None)
    return GradedComplexBlock(basis_in, basis_out, entries)


def _pair_metric(metric, m1: Mode, m2: Mode) -> Fraction:
    if m1[0] != m2[0]:
        return Fraction(0)
    return metric[m1[1]][m2[1]]


def wedge_gram(metric: Sequence[Sequence[Fraction]], basis: CochainBasis) -> List[List[Fraction]]:
    """Gram matrix of wedge monomials for a mode-level metric: entry =
    det of pairwise metrics.  Blocks off different level signatures vanish."""
    mons = basis.monomials
    dim = len(mons)
    out = xl.zeros(dim, dim)
    for i in range(dim):
        for j in range(i, dim):
            wi, wj = mons[i], mons[j]
            if tuple(m[0] for m in wi) != tuple(m[0] for m in wj):
                continue
            p = len(wi)
            g = [[_pair_metric(metric, wi[a], wj[b]) for b in range(p)] for a in range(p)]
            v = xl.det(g) if p else Fraction(1)
            out[i][j] = v
            out[j][i] = v
    return out


class CellComplex:
    """Lazy per-algebra store of blocks, grams and Laplacians."""

    def __init__(self, data: AlgebraData):
        self.data = data
        self._dual_metric = xl.invert([list(r) for r in data.hermGram])
        self._vector_metric = [list(r) for r in data.hermGram]
        self._blocks: Dict[Tuple[int, int], GradedComplexBlock] = {}
        self._bases: Dict[Tuple[int, int], CochainBasis] = {}

    def basis(self, p: int, k: int) -> CochainBasis:
        key = (p, k)
        if key not in self._bases:
            self._bases[key] = build_basis(self.data, p, k)
        return self._bases[key]

    def block(self, p: int, k: int) -> GradedComplexBlock:
        key = (p, k)
        if key not in self._blocks:
            self._blocks[key] = differential_block(self.data, p, k)
            self._bases[(p, k)] = self._blocks[key].basisIn
            self._bases[(p + 1, k)] = self._blocks[key].basisOut
        return self._blocks[key]

    def gram(self, p: int, k: int) -> List[List[Fraction]]:
        return wedge_gram(self._dual_metric, self.basis(p, k))

    def gram_inverse(self, p: int, k: int) -> List[List[Fraction]]:
        # the inverse of a compound matrix is the compound of the inverse,
        # so the inverse Gram is the wedge Gram of the vector metric
        return wedge_gram(self._vector_metric, self.basis(p, k))

    def codifferential(self, p: int, k: int) -> List[List[Fraction]]:
        """Adjoint of d: A^p -> A^{p+1} with respect to the wedge metrics."""
        block = self.block(p, k)
        g_out = self.gram(p + 1, k)
        g_in_inv = self.gram_inverse(p, k)
        dt = xl.transpose(block.dense())
        return xl.matmul(g_in_inv, xl.matmul(dt, g_out))

    def laplacian(self, p: int, k: int) -> List[List[Fraction]]:
        dim = len(self.basis(p, k))
        L = xl.zeros(dim, dim)
        if dim == 0:
            return L
        up = self.block(p, k)
        if len(up.basisOut):
            L = xl.mat_add(L, xl.matmul(self.codifferential(p, k), up.dense()))
        if p > 0:
            down = self.block(p - 1, k)
            if len(down.basisIn):
                L = xl.mat_add(L, xl.matmul(down.dense(), self.codifferential(p - 1, k)))
        # self-adjointness in the cell metric: G L symmetric
        G = self.gram(p, k)
        GL = xl.matmul(G, L)
        assert all(GL[i][j] == GL[j][i] for i in range(dim) for j in range(i + 1, dim))
        return L


def laplacian_block(data: AlgebraData, p: int, k: int) -> List[List[Fraction]]:
    return CellComplex(data).laplacian(p, k)


def eigenvalue_of(data: AlgebraData, lowestWeight: Sequence[Fraction], energy: int) -> Fraction:
    """Closed-form scalar of the twisted Laplacian on a lowest-weight irrep.

    Returns -<rho, lam> + ||lam||^2/2 - c*k and checks it equals
    (||lam_hat - rho_hat||^2 - ||rho_hat||^2)/2 under the affine pairing.
    The positive semi-definite cell Laplacian acts by the negative of this.
    """
    lam = tuple(Fraction(x) for x in lowestWeight)
    if not is_dominant(data, tuple(-x for x in lam)):
        raise ValueError("lowest weight must be antidominant")
    if energy < 0:
        raise ValueError("energy must be nonnegative")
    value = casimir_eigenvalue(data, lam) - data.coxeter * energy
    affine = laplacian_shift(data, AffineWeight(Fraction(energy), lam, Fraction(0)))
    assert value == affine, "Theorem-form and pairing-form eigenvalues must agree"
    return value


def laplacian_scalar(data: AlgebraData, lowestWeight: Sequence[Fraction], energy: int) -> Fraction:
    """Scalar of the PSD Laplacian on the component: -eigenvalue_of."""
    return -eigenvalue_of(data, lowestWeight, energy)


@dataclass
class HarmonicSpace:
    degree: int
    energy: int
    basis: List[List[Fraction]]
    dimension: int
    weight_multiset: Dict[FiniteWeight, int]
    decomposition: List[IrrepSummand]


def _weight_of_wedge(data: AlgebraData, wedge: Wedge) -> FiniteWeight:
    w = [Fraction(0)] * data.rank
    for _level, idx in wedge:
        for i, c in enumerate(data.basis_weights[idx]):
            w[i] -= c
    return tuple(w)


def harmonic_space(data: AlgebraData, p: int, k: int, complex_: CellComplex | None = None) -> HarmonicSpace:
    """Exact kernel of the cell Laplacian, refined by torus weight.

    The Laplacian commutes with the torus action, so it is block diagonal
    over the (weight-homogeneous) monomial basis; kernels are computed per
    weight block and reassembled.  Hodge consistency and annihilation by
    d and d* are asserted exactly.
    """
    cc = complex_ or CellComplex(data)
    basis = cc.basis(p, k)
    dim = len(basis)
    L = cc.laplacian(p, k)

    groups: Dict[FiniteWeight, List[int]] = {}
    for i, wedge in enumerate(basis.monomials):
        groups.setdefault(_weight_of_wedge(data, wedge), []).append(i)
    for w, idxs in groups.items():
        others = [j for j in range(dim) if j not in set(idxs)]
        assert all(L[i][j] == 0 for i in idxs for j in others), "L must preserve weight blocks"

    kernel_vectors: List[List[Fraction]] = []
    weight_multiset: Dict[FiniteWeight, int] = {}
    for w in sorted(groups):
        idxs = groups[w]
        sub = [[L[i][j] for j in idxs] for i in idxs]
        for vec in xl.kernel_basis(sub):
            full = [Fraction(0)] * dim
            for pos, j in enumerate(idxs):
                full[j] = vec[pos]
            kernel_vectors.append(full)
        nk = len(sub) - xl.rank(sub) if sub else 0
        if nk:
            weight_multiset[w] = nk

    h_dim = len(kernel_vectors)
    rank_up = xl.rank(cc.block(p, k).dense()) if len(cc.block(p, k).basisOut) else 0
    rank_down = 0
    if p > 0 and len(cc.block(p - 1, k).basisIn):
        rank_down = xl.rank(cc.block(p - 1, k).dense())
    assert h_dim == dim - rank_up - rank_down, "Hodge consistency"

    if kernel_vectors:
        d_up = cc.block(p, k).dense()
        dstar_down = cc.codifferential(p - 1, k) if p > 0 and len(cc.block(p - 1, k).basisIn) else None
        for vec in kernel_vectors:
            if d_up:
                assert all(
                    sum(row[j] * vec[j] for j in range(dim) if vec[j] != 0) == 0 for row in d_up
                ), "kernel vector not closed"
            if dstar_down is not None:
                assert all(
                    sum(row[j] * vec[j] for j in range(dim) if vec[j] != 0) == 0
                    for row in dstar_down
                ), "kernel vector not co-closed"

    decomposition = decompose(data, weight_multiset) if weight_multiset else []
    return HarmonicSpace(
        degree=p,
        energy=k,
        basis=kernel_vectors,
        dimension=h_dim,
        weight_multiset=weight_multiset,
        decomposition=decomposition,
    )


def _action_matrix(data: AlgebraData, basis: CochainBasis, gen: int) -> Dict[Tuple[int, int], Fraction]:
    """Matrix of the coadjoint generator action on a cell (derivation, no sign)."""
    index = basis.index()
    out: Dict[Tuple[int, int], Fraction] = {}
    for col, wedge in enumerate(basis.monomials):
        for j, (level, m) in enumerate(wedge):
            pos_sign = -1 if j % 2 else 1  # single replaced factor: (-1)^skip
            # gen . e^{m,level} = - sum_b C_{gen b}^{m} e^{b,level}
            for b, coeffs in data.structure[gen].items():
                c = coeffs.get(m)
                if c is None:
                    continue
                ins = _insert_modes(wedge, j, ((level, b),))
                if ins is None:
                    continue
                sign, new_wedge = ins
                row = index[new_wedge]
                out[(row, col)] = out.get((row, col), Fraction(0)) - pos_sign * sign * c
    return {rc: v for rc, v in out.items() if v != 0}


def casimir_matrix(data: AlgebraData, basis: CochainBasis) -> List[List[Fraction]]:
    """Half the gram-inverse-paired square of the generator action."""
    dim = len(basis)
    n = data.dim
    gram_inv = xl.invert([list(r) for r in data.gram])
    actions = [_action_matrix(data, basis, a) for a in range(n)]
    dense_actions = {}

    def as_dense(a: int) -> List[List[Fraction]]:
        if a not in dense_actions:
            mat = xl.zeros(dim, dim)
            for (r, c), v in actions[a].items():
                mat[r][c] = v
            dense_actions[a] = mat
        return dense_actions[a]

    out = xl.zeros(dim, dim)
    for a in range(n):
        for b in range(n):
            w = gram_inv[a][b]
            if w == 0:
                continue
            prod = xl.matmul(as_dense(a), as_dense(b))
            out = xl.mat_add(out, xl.scale(prod, w / 2))
    return out


@dataclass
class IsotypicVerdict:
    degree: int
    energy: int
    components: List[Tuple[FiniteWeight, Fraction, bool]]  # (lowest, PSD scalar, ok)
    minimal_polynomial_ok: bool
    laplacian_matches_casimir: bool

    @property
    def passed(self) -> bool:
        return (
            self.minimal_polynomial_ok
            and self.laplacian_matches_casimir
            and all(ok for _, _, ok in self.components)
        )

    def first_violation(self):
        for lw, scalar, ok in self.components:
            if not ok:
                return (lw, scalar)
        return None


def isotypic_eigen_check(
    data: AlgebraData, p: int, k: int, complex_: CellComplex | None = None
) -> IsotypicVerdict:
    """Verify the Laplacian acts by the predicted exact scalar per component.

    Exact checks: the Casimir matrix satisfies its predicted minimal
    polynomial, L + Casimir = c*k*Id, and for each isotypic projector P_v
    built from the Casimir, (L - (c*k - v)) P_v = 0.
    """
    cc = complex_ or CellComplex(data)
    basis = cc.basis(p, k)
    dim = len(basis)
    if dim == 0:
        return IsotypicVerdict(p, k, [], True, True)
    L = cc.laplacian(p, k)
    summands = decompose(data, weights_of_basis(data, basis.monomials))
    C = casimir_matrix(data, basis)

    values: Dict[Fraction, FiniteWeight] = {}
    for s in summands:
        values.setdefault(casimir_eigenvalue(data, s.lowestWeight), s.lowestWeight)

    poly = xl.identity(dim)
    for v in values:
        shifted = [[C[i][j] - (v if i == j else 0) for j in range(dim)] for i in range(dim)]
        poly = xl.matmul(poly, shifted)
    min_poly_ok = xl.is_zero_matrix(poly)

    ck = Fraction(data.coxeter * k)
    LC = xl.mat_add(L, C)
    l_matches = all(
        LC[i][j] == (ck if i == j else 0) for i in range(dim) for j in range(dim)
    )

    components: List[Tuple[FiniteWeight, Fraction, bool]] = []
    vlist = sorted(values)
    for v in vlist:
        lw = values[v]
        scalar = laplacian_scalar(data, lw, k)
        assert scalar == ck - v
        proj = xl.identity(dim)
        for v2 in vlist:
            if v2 == v:
                continue
            shifted = [[(C[i][j] - (v2 if i == j else 0)) / (v - v2) for j in range(dim)] for i in range(dim)]
            proj = xl.matmul(proj, shifted)
        test = [[L[i][j] - (scalar if i == j else 0) for j in range(dim)] for i in range(dim)]
        ok = xl.is_zero_matrix(xl.matmul(test, proj))
        components.append((lw, scalar, ok))

    return IsotypicVerdict(p, k, components, min_poly_ok, l_matches)
