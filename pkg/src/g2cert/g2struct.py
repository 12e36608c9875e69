"""Left-invariant G2-structures on a 7-dimensional Lie algebra.

The 3-form determines the metric; torsion, the ERP identity, Ricci curvature,
soliton certificates, exactness and SU(3) restrictions are all computed on
left-invariant forms through the Chevalley-Eilenberg differential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import sqrtm

from .exterior import Frame, KForm, contract, e, form_norm, form_norm2, hodge, inner, pullback, volume_form
from .liealg import LieAlgebra, numerical_rank, orth
from .quadruple import reference_phi

SOLITON_TOL = 1e-8


class NotPositive(ValueError):
    pass


class NotClosed(ValueError):
    pass


class NotSubalgebra(ValueError):
    pass


def metric_from_phi(phi: KForm) -> tuple[np.ndarray, KForm]:
    """Metric and volume form induced by a positive 3-form.

    B_ij vol0 = (e_i ⌟ phi) ^ (e_j ⌟ phi) ^ phi / 6, then g = det(B)^(-1/9) B.
    """
    if phi.dim != 7 or phi.degree != 3:
        raise ValueError("expected a 3-form in dimension 7")
    slots = [contract(np.eye(7)[i], phi) for i in range(7)]
    B = np.zeros((7, 7))
    for i in range(7):
        for j in range(i, 7):
            top = slots[i] ^ slots[j] ^ phi
            B[i, j] = B[j, i] = top.coefficient(range(7)) / 6.0
    det = np.linalg.det(B)
    if det <= 0 or np.min(np.linalg.eigvalsh(B)) <= 0:
        raise NotPositive("not a positive 3-form")
    g = det ** (-1.0 / 9.0) * B
    return g, det ** (1.0 / 9.0) * volume_form(7)


def derivation_action(D: np.ndarray, a: KForm) -> KForm:
    """Theta(D) a = -a(D., ., .) - a(., D., .) - ... for an endomorphism D."""
    D = np.asarray(D, dtype=float)
    out = KForm(a.dim, a.degree)
    for idx, c in a.terms.items():
        for pos, i in enumerate(idx):
            for j in np.flatnonzero(D[i]):
                new = idx[:pos] + (int(j),) + idx[pos + 1:]
                out = out + KForm(a.dim, a.degree, {new: -c * D[i, j]})
    return out


@dataclass(frozen=True)
class CurvatureData:
    ricci: np.ndarray  # Ricci tensor in an orthonormal frame
    scalar: float
    mean_curvature_vector: np.ndarray

    @property
    def ricci_norm2(self) -> float:
        return float(np.sum(self.ricci ** 2))


def orthonormalize(L: LieAlgebra, metric: np.ndarray | None) -> tuple[LieAlgebra, np.ndarray]:
    """Structure constants in the orthonormal frame f_i = h e_i, h = g^(-1/2); returns (L', h)."""
    if metric is None or np.allclose(metric, np.eye(L.dim), atol=1e-14, rtol=0):
        return L, np.eye(L.dim)
    h = np.real(sqrtm(np.linalg.inv(metric)))
    return L.conjugate(np.linalg.inv(h)), h


def ricci(L: LieAlgebra, metric: np.ndarray | None = None) -> CurvatureData:
    """Ricci curvature of the left-invariant metric, in an orthonormal frame.

    Ric = M - B/2 - S(ad H), with B the Killing form, <H, x> = tr ad x and
    M(x, y) = -1/2 sum <[x,e_i],e_j><[y,e_i],e_j> + 1/4 sum <[e_i,e_j],x><[e_i,e_j],y>.
    """
    L, _ = orthonormalize(L, metric)
    c = L.c
    M = -0.5 * np.einsum("aij,bij->ab", c, c) + 0.25 * np.einsum("ija,ijb->ab", c, c)
    H = L.mean_curvature_traces()
    adH = L.ad(H)
    ric = M - 0.5 * L.trace_form() - 0.5 * (adH + adH.T)
    ric = 0.5 * (ric + ric.T)
    return CurvatureData(ric, float(np.trace(ric)), H)


def pinching_gap(curv: CurvatureData) -> float:
    """scal^2 - 3 |Ric|^2, which is <= 0 for closed G2-structures and 0 in the ERP case."""
    return curv.scalar ** 2 - 3.0 * curv.ricci_norm2


@dataclass(frozen=True)
class SolitonResult:
    success: bool
    constant: float  # c for Ricci solitons, lambda for Laplacian ones
    derivation: np.ndarray
    residual: float
    identifiable: bool = True

    @property
    def expanding(self) -> bool:
        return self.success and self.constant < 0


def ricci_soliton_solve(L: LieAlgebra, metric: np.ndarray | None = None, tol: float = SOLITON_TOL) -> SolitonResult:
    """Least squares for Ric = c I + D over c and D in Der(L) (orthonormal frame)."""
    Lo, _ = orthonormalize(L, metric)
    ric = ricci(Lo).ricci
    ders = Lo.derivations()
    n = Lo.dim
    cols = [np.eye(n).ravel()] + [D.ravel() for D in ders]
    X = np.array(cols).T
    sol, *_ = np.linalg.lstsq(X, ric.ravel(), rcond=None)
    D = sum((x * Dk for x, Dk in zip(sol[1:], ders)), np.zeros((n, n)))
    resid = float(np.linalg.norm(X @ sol - ric.ravel()))
    ident = numerical_rank(X).rank == numerical_rank(X[:, 1:]).rank + 1 if ders else True
    return SolitonResult(resid < tol, float(sol[0]), D, resid, ident)


def _in_span(target: np.ndarray, cols: np.ndarray, tol: float = 1e-9) -> bool:
    if cols.shape[1] == 0:
        return False
    sol, *_ = np.linalg.lstsq(cols, target, rcond=None)
    return float(np.linalg.norm(cols @ sol - target)) < tol * max(1.0, float(np.linalg.norm(target)))


class G2Structure:
    """A 3-form phi on a Lie algebra, with eagerly computed metric, star and torsion."""

    def __init__(self, algebra: LieAlgebra, phi: KForm | None = None, closed_tol: float = 1e-9):
        if algebra.dim != 7:
            raise ValueError("G2-structures live on 7-dimensional algebras")
        self.algebra = algebra
        self.phi = reference_phi() if phi is None else phi
        self.metric, self.vol = metric_from_phi(self.phi)
        self.frame = Frame(7, self.metric)
        self.star_phi = hodge(self.phi, self.frame)
        self.closed_tol = closed_tol
        self.dphi_norm = form_norm(algebra.d(self.phi))

    def star(self, a: KForm) -> KForm:
        return hodge(a, self.frame)

    def norm2(self, a: KForm) -> float:
        return form_norm2(a, self.frame)

    @property
    def is_closed(self) -> bool:
        return self.dphi_norm < self.closed_tol

    @cached_property
    def torsion(self) -> KForm:
        """tau = -*d*phi; requires d phi = 0."""
        if not self.is_closed:
            raise NotClosed(f"phi is not closed (|d phi| = {self.dphi_norm:.2e})")
        return -self.star(self.algebra.d(self.star_phi))

    def torsion_identity_residual(self) -> float:
        """| d*phi - tau ^ phi |."""
        return form_norm(self.algebra.d(self.star_phi) - (self.torsion ^ self.phi), self.frame)

    def erp_residual(self) -> float:
        tau = self.torsion
        rhs = self.norm2(tau) / 6.0 * self.phi + self.star(tau ^ tau) / 6.0
        return form_norm(self.algebra.d(tau) - rhs, self.frame)

    @cached_property
    def curvature(self) -> CurvatureData:
        return ricci(self.algebra, self.metric)

    def pinching_gap(self) -> float:
        return pinching_gap(self.curvature)

    def ricci_soliton(self, tol: float = SOLITON_TOL) -> SolitonResult:
        return ricci_soliton_solve(self.algebra, self.metric, tol)

    def laplacian_soliton(self, tol: float = SOLITON_TOL) -> SolitonResult:
        """Solve d tau = lambda phi + Theta(D) phi over lambda and D in Der(L).

        When phi itself lies in span{Theta(D) phi} the constant is not determined
        by the equation; the minimal-norm solution is then reported with
        ``identifiable=False``.
        """
        L = self.algebra
        ders = L.derivations()
        target = L.d(self.torsion).to_vector()
        phi_v = self.phi.to_vector()
        acts = np.array([derivation_action(D, self.phi).to_vector() for D in ders]).T.reshape(len(phi_v), len(ders))
        X = np.column_stack([phi_v, acts])
        sol, *_ = np.linalg.lstsq(X, target, rcond=None)
        lam = float(sol[0])
        ident = not _in_span(phi_v, acts)
        if not ident:
            # choose the representative with lambda = 0 when it also solves the equation
            sub, *_ = np.linalg.lstsq(acts, target, rcond=None)
            if np.linalg.norm(acts @ sub - target) <= np.linalg.norm(X @ sol - target) + 1e-12:
                sol = np.concatenate([[0.0], sub])
                lam = 0.0
        D = sum((x * Dk for x, Dk in zip(sol[1:], ders)), np.zeros((7, 7)))
        resid = float(np.linalg.norm(X @ sol - target))
        return SolitonResult(resid < tol, lam, D, resid, ident)

    def exactness_residual(self, inv_trace_A1: float) -> float:
        """| d(3 tau - (tr A1)^-1 e34) - phi |."""
        primitive = 3.0 * self.torsion - inv_trace_A1 * e(3, 4)
        return form_norm(self.algebra.d(primitive) - self.phi, self.frame)

    def non_exactness_certificate(self, tol: float = 1e-6) -> "NonExactness":
        L = self.algebra
        img = orth(L.d_matrix(2))
        phi_v = self.phi.to_vector()
        dist = float(np.linalg.norm(phi_v - img @ (img.T @ phi_v))) if img.shape[1] else float(np.linalg.norm(phi_v))
        probe = e(3, 4, 7)
        pairing = [abs(inner(L.d(KForm(7, 2, {(i, j): 1.0})), probe)) for i in range(7) for j in range(i + 1, 7)]
        return NonExactness(dist > tol, dist, float(max(pairing)), inner(self.phi, probe), len(pairing))

    def su3_restrict(self, normal, tol: float = 1e-9) -> "SU3Restriction":
        return su3_restrict(self, normal, tol)


@dataclass(frozen=True)
class NonExactness:
    not_exact: bool
    distance: float  # | phi - projection of phi onto d(Lambda^2) |
    max_pairing_e347: float  # max |<d e^ij, e^347>|
    phi_e347: float
    pairs: int

    @property
    def argument_holds(self) -> bool:
        """phi pairs nontrivially with e^347 while every exact 3-form pairs to zero."""
        return self.max_pairing_e347 < 1e-12 and abs(self.phi_e347) > 0.5


@dataclass(frozen=True)
class SU3Restriction:
    omega: KForm  # on the 6-dim subalgebra, in the adapted basis
    rho_plus: KForm
    algebra: LieAlgebra
    basis: np.ndarray  # 7x6, columns orthonormal, spanning normal^perp
    d_omega2: float
    d_rho: float
    d_omega: float
    coupled_constant: float  # c minimizing |d omega - c rho+|
    coupled_gap: float  # |d omega - c rho+| at that c
    extras: dict = field(default_factory=dict)

    def half_flat(self, tol: float = 1e-9) -> bool:
        return self.d_omega2 < tol and self.d_rho < tol

    def coupled(self, tol: float = 1e-9) -> bool:
        return self.half_flat(tol) and self.coupled_gap < tol and abs(self.coupled_constant) > tol

    def symplectic_half_flat(self, tol: float = 1e-9) -> bool:
        return self.half_flat(tol) and self.d_omega < tol


def hyperplane_basis(normal: np.ndarray) -> np.ndarray:
    """Orthonormal basis of normal^perp, ordered so that (basis, normal) is positively oriented."""
    Q, _ = np.linalg.qr(np.column_stack([normal, np.eye(len(normal))]))
    Q = Q[:, :len(normal)]
    if Q[:, 0] @ normal < 0:
        Q[:, 0] = -Q[:, 0]
    basis = Q[:, 1:]
    if np.linalg.det(np.column_stack([basis, normal])) < 0:
        basis[:, 0] = -basis[:, 0]
    return basis


def su3_restrict(S: G2Structure, normal, tol: float = 1e-9) -> SU3Restriction:
    """Split phi = omega ^ N^flat + rho+ along a unit normal N and restrict to N^perp."""
    if not np.allclose(S.metric, np.eye(7), atol=1e-12):
        raise ValueError("SU(3) restriction implemented for orthonormal frames only")
    N = np.asarray(normal, dtype=float)
    N = N / np.linalg.norm(N)
    L = S.algebra
    Q = hyperplane_basis(N)
    brackets = np.einsum("ia,jb,ijk->abk", Q, Q, L.c)
    leak = float(np.max(np.abs(np.einsum("abk,k->ab", brackets, N))))
    if leak > tol:
        raise NotSubalgebra(f"normal^perp is not a subalgebra (residual {leak:.2e})")
    sub = LieAlgebra(np.einsum("abk,kc->abc", brackets, Q), name=f"{L.name or 'g'}|hyperplane")
    omega7 = contract(N, S.phi)
    rho7 = S.phi - (omega7 ^ KForm.from_vector(7, 1, N))
    omega = pullback(Q, omega7)
    rho = pullback(Q, rho7)
    d_omega = sub.d(omega)
    c = inner(d_omega, rho) / form_norm2(rho)
    return SU3Restriction(
        omega=omega,
        rho_plus=rho,
        algebra=sub,
        basis=Q,
        d_omega2=form_norm(sub.d(omega ^ omega)),
        d_rho=form_norm(sub.d(rho)),
        d_omega=form_norm(d_omega),
        coupled_constant=float(c),
        coupled_gap=form_norm(d_omega - c * rho),
        extras={
            "restriction_residual": form_norm(pullback(Q, S.phi) - rho),
            "gap_to_plus_third": form_norm(d_omega - rho / 3.0),
        },
    )
