"""Lie algebras given by structure constants, and their Chevalley-Eilenberg calculus."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .exterior import KForm, basis_indices, perm_sign, _index_lookup

log = logging.getLogger(__name__)

RANK_TOL = 1e-7
DANGER_FACTOR = 10.0
# eigenvalues of ad-operators closer than this are treated as one (Jordan blocks
# split a repeated eigenvalue by roughly eps**(1/size))
EIG_CLUSTER_TOL = 1e-4
REAL_TOL = 1e-9


class NumericalDegeneracy(RuntimeError):
    pass


class NotSolvable(RuntimeError):
    pass


@dataclass(frozen=True)
class RankResult:
    rank: int
    flagged: bool
    singular_values: tuple[float, ...]


def numerical_rank(M: np.ndarray, rel_tol: float = RANK_TOL, floor: float = 1e-12) -> RankResult:
    """Rank from singular values with threshold ``rel_tol * sigma_max``.

    A singular value within a factor DANGER_FACTOR of the threshold marks the
    decision as unstable instead of being silently rounded.
    """
    M = np.atleast_2d(M)
    if M.size == 0:
        return RankResult(0, False, ())
    s = np.linalg.svd(M, compute_uv=False)
    smax = float(s[0]) if len(s) else 0.0
    if smax <= floor:
        return RankResult(0, False, tuple(map(float, s)))
    thr = rel_tol * smax
    rank = int(np.sum(s > thr))
    flagged = bool(np.any((s > thr / DANGER_FACTOR) & (s < thr * DANGER_FACTOR)))
    return RankResult(rank, flagged, tuple(map(float, s)))


def null_space(M: np.ndarray, rel_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of M."""
    M = np.atleast_2d(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=M.dtype)
    _, s, vh = np.linalg.svd(M)
    if len(s) == 0 or s[0] <= 1e-12:
        return np.eye(n, dtype=M.dtype)
    rank = int(np.sum(s > rel_tol * s[0]))
    return vh[rank:].conj().T


def orth(M: np.ndarray, rel_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column span of M."""
    M = np.atleast_2d(M)
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=M.dtype)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if len(s) == 0 or s[0] <= 1e-12:
        return np.zeros((M.shape[0], 0), dtype=M.dtype)
    rank = int(np.sum(s > rel_tol * s[0]))
    return u[:, :rank]


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of a Lie algebra, stored with an orthonormal basis (columns)."""

    basis: np.ndarray
    parent: "LieAlgebra | None" = None

    @classmethod
    def span(cls, vectors, parent=None, rel_tol: float = RANK_TOL) -> "Subspace":
        vectors = np.asarray(vectors, dtype=float)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        return cls(orth(vectors, rel_tol), parent)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def distance_to(self, v: np.ndarray) -> float:
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.projector() @ v))

    def contains(self, v: np.ndarray, tol: float = 1e-9) -> bool:
        return self.distance_to(v) <= tol

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(np.hstack([self.basis, other.basis]), self.parent)

    def same_as(self, other: "Subspace", tol: float = 1e-9) -> bool:
        return self.dim == other.dim and float(np.max(np.abs(self.projector() - other.projector()), initial=0.0)) <= tol


class LieAlgebra:
    """Structure constants c[i, j, k] = e^k([e_i, e_j]) on a fixed basis e_1..e_n.

    Only the entries with i < j are read from the input; the tensor is
    antisymmetrized by construction.
    """

    def __init__(self, structure: np.ndarray, name: str | None = None):
        c = np.asarray(structure, dtype=float)
        n = c.shape[0]
        if c.shape != (n, n, n):
            raise ValueError("structure tensor must have shape (n, n, n)")
        full = np.zeros_like(c)
        for i, j in combinations(range(n), 2):
            full[i, j] = c[i, j]
            full[j, i] = -c[i, j]
        full.setflags(write=False)
        self.c = full
        self.dim = n
        self.name = name

    @classmethod
    def abelian(cls, dim: int = 7) -> "LieAlgebra":
        return cls(np.zeros((dim, dim, dim)), name="abelian")

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict[tuple[int, int], dict[int, float]], name=None) -> "LieAlgebra":
        """Build from 1-based data ``{(i, j): {k: coeff}}`` meaning [e_i, e_j] = sum coeff e_k."""
        c = np.zeros((dim, dim, dim))
        for (i, j), rhs in brackets.items():
            for k, v in rhs.items():
                if i < j:
                    c[i - 1, j - 1, k - 1] += v
                else:
                    c[j - 1, i - 1, k - 1] -= v
        return cls(c, name)

    def conjugate(self, h: np.ndarray, name: str | None = None) -> "LieAlgebra":
        """The bracket h.mu(x, y) = h mu(h^-1 x, h^-1 y)."""
        hinv = np.linalg.inv(h)
        c = np.einsum("ai,bj,ijk,ck->abc", hinv.T, hinv.T, self.c, h)
        return LieAlgebra(c, name or self.name)

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, name={self.name!r})"

    # bracket and adjoint ----------------------------------------------------
    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, float), np.asarray(y, float), self.c)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad x, columns indexed by the argument."""
        return np.einsum("i,ijk->kj", np.asarray(x, float), self.c)

    @cached_property
    def ad_basis(self) -> np.ndarray:
        """ad_basis[i] = ad e_i."""
        return np.einsum("ijk->ikj", self.c)

    def jacobi_residual(self) -> float:
        c = self.c
        # [[e_i, e_j], e_l] = c_ijm c_mlk
        t = np.einsum("ijm,mlk->ijlk", c, c)
        jac = t + np.einsum("ijlk->jlik", t) + np.einsum("ijlk->lijk", t)
        return float(np.max(np.abs(jac), initial=0.0))

    def trace_form(self) -> np.ndarray:
        """Killing form B(x, y) = tr(ad x ad y)."""
        ads = self.ad_basis
        return np.einsum("iab,jba->ij", ads, ads)

    def mean_curvature_traces(self) -> np.ndarray:
        return np.trace(self.ad_basis, axis1=1, axis2=2)

    def unimodular(self, tol: float = 1e-9) -> tuple[bool, float]:
        w = float(np.max(np.abs(self.mean_curvature_traces()), initial=0.0))
        return w <= tol, w

    # Chevalley-Eilenberg -------------------------------------------------------
    def d_one_form(self, k: int) -> KForm:
        """d e^k = -sum_{i<j} c_ij^k e^ij (0-based k)."""
        terms = {(i, j): -self.c[i, j, k] for i, j in combinations(range(self.dim), 2) if self.c[i, j, k] != 0.0}
        return KForm(self.dim, 2, terms)

    @cached_property
    def _d_matrices(self) -> tuple[np.ndarray, ...]:
        n = self.dim
        d1 = [self.d_one_form(k) for k in range(n)]
        mats = [np.zeros((n, 1))]  # d on 0-forms vanishes
        for deg in range(1, n):
            src = basis_indices(n, deg)
            tgt = _index_lookup(n, deg + 1)
            M = np.zeros((len(tgt), len(src)))
            for col, idx in enumerate(src):
                for pos, k in enumerate(idx):
                    sign = (-1) ** pos
                    for pair, coef in d1[k].terms.items():
                        full = idx[:pos] + pair + idx[pos + 1:]
                        s = perm_sign(full)
                        if s:
                            M[tgt[tuple(sorted(full))], col] += sign * s * coef
            mats.append(M)
        mats.append(np.zeros((0, 1)))
        for m in mats:
            m.setflags(write=False)
        return tuple(mats)

    def d_matrix(self, degree: int) -> np.ndarray:
        """Matrix of d: Lambda^degree -> Lambda^(degree+1) in lexicographic bases."""
        if degree == 0:
            return np.zeros((self.dim, 1))
        if degree >= self.dim:
            return np.zeros((0, 1))
        return self._d_matrices[degree]

    def ce_differential(self, a: KForm) -> KForm:
        if a.dim != self.dim:
            raise ValueError("form dimension does not match the algebra")
        if a.degree >= self.dim:
            raise ValueError("cannot differentiate a top-degree form")
        if a.degree == 0:
            return KForm(self.dim, 1)
        return KForm.from_vector(self.dim, a.degree + 1, self.d_matrix(a.degree) @ a.to_vector())

    d = ce_differential

    def d_squared_norm(self) -> float:
        """Norm of d o d on 1-forms; vanishes iff the Jacobi identity holds."""
        return float(np.linalg.norm(self.d_matrix(2) @ self.d_matrix(1)))

    # cohomology -------------------------------------------------------------
    def betti(self, rel_tol: float = RANK_TOL) -> tuple[list[int], bool]:
        """Betti numbers b_0..b_n and whether any rank decision was unstable."""
        n = self.dim
        ranks = [0] * (n + 1)  # ranks[k] = rank of d on Lambda^k
        flagged = False
        for k in range(1, n):
            r = numerical_rank(self.d_matrix(k), rel_tol)
            ranks[k] = r.rank
            flagged |= r.flagged
        b = []
        for k in range(n + 1):
            kernel = comb(n, k) - ranks[k]
            image = ranks[k - 1] if k >= 1 else 0
            b.append(kernel - image)
        return b, flagged

    # series ---------------------------------------------------------------------
    def bracket_span(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Orthonormal basis of [U, V] for subspaces given by column bases."""
        if U.shape[1] == 0 or V.shape[1] == 0:
            return np.zeros((self.dim, 0))
        prods = np.einsum("ia,jb,ijk->kab", U, V, self.c).reshape(self.dim, -1)
        return orth(prods)

    def derived_series(self) -> list[Subspace]:
        cur = np.eye(self.dim)
        out = [Subspace(cur, self)]
        while cur.shape[1] > 0:
            nxt = self.bracket_span(cur, cur)
            if nxt.shape[1] == cur.shape[1]:
                break
            cur = nxt
            out.append(Subspace(cur, self))
        return out

    def is_solvable(self) -> bool:
        return self.derived_series()[-1].dim == 0

    def lower_central_series(self, sub: Subspace | None = None) -> list[Subspace]:
        """C^1 = s, C^(k+1) = [s, C^k] for a subalgebra s (default: the whole algebra)."""
        base = np.eye(self.dim) if sub is None else sub.basis
        cur = base
        out = [Subspace(cur, self)]
        while cur.shape[1] > 0:
            nxt = self.bracket_span(base, cur)
            if nxt.shape[1] == cur.shape[1]:
                break
            cur = nxt
            out.append(Subspace(cur, self))
        return out

    def nilpotency_degree(self, sub: Subspace | None = None) -> int | None:
        """k such that the (k+1)-th lower central term vanishes; 1 means abelian.

        None when the series stabilizes at a nonzero subspace (not nilpotent).
        """
        series = self.lower_central_series(sub)
        if series[-1].dim != 0:
            return None
        if len(series) == 1:  # zero subalgebra
            return 0
        return len(series) - 1

    def is_ideal(self, sub: Subspace, tol: float = 1e-9) -> bool:
        prods = np.einsum("ia,jb,ijk->kab", np.eye(self.dim), sub.basis, self.c).reshape(self.dim, -1)
        resid = prods - sub.projector() @ prods
        return float(np.max(np.abs(resid), initial=0.0)) <= tol

    def is_subalgebra(self, sub: Subspace, tol: float = 1e-9) -> bool:
        prods = np.einsum("ia,jb,ijk->kab", sub.basis, sub.basis, self.c).reshape(self.dim, -1)
        resid = prods - sub.projector() @ prods
        return float(np.max(np.abs(resid), initial=0.0)) <= tol

    # triangularization ----------------------------------------------------------
    def ideal_chain(self) -> list[np.ndarray]:
        """Elements b_0..b_{n-1} with I_k = span(b_k, .., b_{n-1}) a chain of
        codimension-one ideals, each containing the derived algebra of the previous."""
        n = self.dim
        cur = np.eye(n)
        chain = []
        while cur.shape[1] > 0:
            D = self.bracket_span(cur, cur)
            if D.shape[1] >= cur.shape[1]:
                raise NotSolvable("derived algebra does not shrink: not solvable")
            # orthogonal complement of D inside cur
            P = cur - D @ (D.T @ cur)
            comp = orth(P)
            b = comp[:, -1]
            chain.append(b)
            cur = orth(np.hstack([D, comp[:, :-1]]))
        return chain

    def triangularizing_flag(self) -> "Flag":
        """Constructive Lie-theorem flag over C for the adjoint representation."""
        n = self.dim
        chain = self.ideal_chain()
        mats = [self.ad(b) for b in chain]
        U = np.zeros((n, 0), dtype=complex)
        all_real = True
        for _ in range(n):
            Q = _complement(U, n)
            quot = [Q.conj().T @ M @ Q for M in mats]
            W = np.eye(Q.shape[1], dtype=complex)
            for X in reversed(quot):
                XW = W.conj().T @ X @ W
                lam, real = _choose_eigenvalue(np.linalg.eigvals(XW))
                all_real &= real
                scale = max(1.0, float(np.linalg.norm(XW)))
                K = null_space(XW - lam * np.eye(XW.shape[0]), rel_tol=RANK_TOL)
                if K.shape[1] == 0 or np.linalg.svd(XW - lam * np.eye(XW.shape[0]), compute_uv=False)[-1] > 1e-6 * scale:
                    raise NumericalDegeneracy("no common eigenvector found: not solvable or numerically degenerate")
                W = W @ K
                W = orth(W)
            v = Q @ W[:, 0]
            U = np.hstack([U, (v / np.linalg.norm(v))[:, None]])
        ads = [U.conj().T @ A @ U for A in self.ad_basis]
        lower = max(float(np.max(np.abs(np.tril(T, -1)), initial=0.0)) for T in ads)
        if lower > 1e-7:
            raise NumericalDegeneracy(f"flag does not triangularize ad (residual {lower:.2e})")
        weights = np.array([np.diag(T) for T in ads]).T  # weights[p, i] = diag entry p of ad e_i
        return Flag(U, weights, all_real, lower)

    def is_completely_solvable(self) -> bool:
        return self.triangularizing_flag().real

    def nilradical(self) -> Subspace:
        """Maximal nilpotent ideal of a solvable algebra: the common kernel of the
        flag weights (linear functionals on the algebra), plus the derived algebra."""
        flag = self.triangularizing_flag()
        W = flag.weights
        kernel = null_space(np.vstack([W.real, W.imag]))
        derived = self.bracket_span(np.eye(self.dim), np.eye(self.dim))
        return Subspace.span(np.hstack([kernel, derived]), self)

    # derivations ---------------------------------------------------------------
    @cached_property
    def _derivation_system(self) -> np.ndarray:
        n = self.dim
        c = self.c
        eye = np.eye(n)
        # rows (i, j, k), columns (a, b) for D[a, b]
        T = np.einsum("ak,ijb->ijkab", eye, c)
        T -= np.einsum("bi,ajk->ijkab", eye, c)
        T -= np.einsum("bj,iak->ijkab", eye, c)
        iu = [(i, j) for i, j in combinations(range(n), 2)]
        rows = np.array([T[i, j] for i, j in iu]).reshape(len(iu) * n, n * n)
        return rows

    def derivations(self, rel_tol: float = RANK_TOL) -> list[np.ndarray]:
        n = self.dim
        N = null_space(self._derivation_system, rel_tol)
        return [N[:, k].reshape(n, n) for k in range(N.shape[1])]

    def derivation_rank(self, rel_tol: float = RANK_TOL) -> RankResult:
        return numerical_rank(self._derivation_system, rel_tol)

    def skew_derivations(self, rel_tol: float = RANK_TOL) -> list[np.ndarray]:
        n = self.dim
        K = skew_basis(n)
        M = self._derivation_system @ np.array([k.ravel() for k in K]).T
        N = null_space(M, rel_tol)
        return [sum(N[p, q] * K[p] for p in range(len(K))) for q in range(N.shape[1])]

    def skew_derivations_dim(self, rel_tol: float = RANK_TOL) -> int:
        return len(self.skew_derivations(rel_tol))

    def derivation_residual(self, D: np.ndarray) -> float:
        return float(np.max(np.abs(self._derivation_system @ np.asarray(D).ravel()), initial=0.0))

    def automorphism_residual(self, h: np.ndarray) -> float:
        """max |h[x, y] - [hx, hy]| over basis pairs."""
        lhs = np.einsum("ijm,km->ijk", self.c, h)
        rhs = np.einsum("ai,bj,abk->ijk", h, h, self.c)
        return float(np.max(np.abs(lhs - rhs), initial=0.0))

    # spectra ---------------------------------------------------------------------
    def projective_spectrum(self, x, sub: Subspace, tol: float = 1e-9) -> np.ndarray:
        """Eigenvalues of ad x on an ad x-invariant subspace, up to a real scalar.

        Normalized by the largest modulus; the sign is chosen so that the
        largest-modulus entry has positive real part (positive imaginary part
        if it is purely imaginary). Sorted by (real, imag).
        """
        A = self.ad(x)
        B = sub.basis
        img = A @ B
        if float(np.max(np.abs(img - B @ (B.T @ img)), initial=0.0)) > tol:
            raise ValueError("subspace is not invariant under ad x")
        ev = np.linalg.eigvals(B.T @ A @ B)
        return normalize_projective(ev)


@dataclass(frozen=True)
class Flag:
    basis: np.ndarray  # unitary, columns v_1..v_n
    weights: np.ndarray  # weights[p, i]
    real: bool
    residual: float


def normalize_projective(ev: np.ndarray, zero_tol: float = 1e-12) -> np.ndarray:
    ev = np.asarray(ev, dtype=complex)
    m = np.max(np.abs(ev), initial=0.0)
    if m <= zero_tol:
        return np.zeros_like(ev)
    ev = ev / m
    big = ev[np.abs(np.abs(ev) - 1.0) < 1e-9]
    # pick the sign from the most positive max-modulus entry
    lead = big[np.lexsort((np.round(big.imag, 9), np.round(big.real, 9)))][-1]
    neg = lead.real < -1e-12 or (abs(lead.real) <= 1e-12 and lead.imag < 0)
    if neg:
        ev = -ev
    order = np.lexsort((np.round(ev.imag, 9), np.round(ev.real, 9)))
    return ev[order]


def _complement(U: np.ndarray, n: int) -> np.ndarray:
    if U.shape[1] == 0:
        return np.eye(n, dtype=complex)
    q, _ = np.linalg.qr(np.hstack([U, np.eye(n, dtype=complex)]))
    return q[:, U.shape[1]:n]


def _choose_eigenvalue(ev: np.ndarray) -> tuple[complex, bool]:
    """Cluster eigenvalues and return a cluster mean, preferring real clusters."""
    ev = list(np.asarray(ev, dtype=complex))
    clusters: list[list[complex]] = []
    for z in sorted(ev, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            if min(abs(z - w) for w in cl) < EIG_CLUSTER_TOL:
                cl.append(z)
                break
        else:
            clusters.append([z])
    means = [complex(np.mean(cl)) for cl in clusters]
    real = [m for m in means if abs(m.imag) <= REAL_TOL]
    if real:
        return complex(sorted(real, key=lambda m: m.real)[0].real), True
    return sorted(means, key=lambda m: (m.real, m.imag))[0], False


def skew_basis(n: int) -> list[np.ndarray]:
    out = []
    for i, j in combinations(range(n), 2):
        K = np.zeros((n, n))
        K[i, j] = -1.0
        K[j, i] = 1.0
        out.append(K)
    return out


def heisenberg_plus_abelian(dim: int = 7) -> LieAlgebra:
    """[e1, e2] = e3, all other brackets zero (test fixture)."""
    return LieAlgebra.from_brackets(dim, {(1, 2): {3: 1.0}}, name="heis3+R4")
