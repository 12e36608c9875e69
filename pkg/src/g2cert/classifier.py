"""Numerical re-derivation of the case analysis, and finite symmetry groups.

Each nilradical case becomes a polynomial system in the entries of the
quadruple (A1, A, B, C) with the case's gauge fixed. Random starts are driven
to zeros by Levenberg-Marquardt followed by a Gauss-Newton polish, and zeros
are grouped by conjugation-invariant fingerprints.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import least_squares

from .exterior import basis_indices
from .liealg import LieAlgebra
from .quadruple import (
    OMEGA3, OMEGA4, OMEGA7, TAU, Quadruple, act_g, act_u0, reference_phi, theta_on_form,
)

log = logging.getLogger(__name__)

SOLVE_TOL = 1e-11
DEDUP_TOL = 1e-6
ORDER_TOL = 1e-7
MAX_ORDER = 48
CLOSURE_CAP = 1000

_IU4 = np.triu_indices(4, 1)
_IU4_DIAG = np.triu_indices(4)


def _sym_traceless(p) -> np.ndarray:
    """9 parameters -> symmetric traceless 4x4 matrix (complex-step safe)."""
    M = np.zeros((4, 4), dtype=np.result_type(p, float))
    M[_IU4] = p[:6]
    M = M + M.T
    d = p[6:9]
    M[0, 0], M[1, 1], M[2, 2] = d[0], d[1], d[2]
    M[3, 3] = -(d[0] + d[1] + d[2])
    return M


def _traceless(p) -> np.ndarray:
    """15 parameters -> traceless 4x4 matrix."""
    M = np.zeros(16, dtype=np.result_type(p, float))
    M[:15] = p
    M = M.reshape(4, 4)
    M[3, 3] = -(M[0, 0] + M[1, 1] + M[2, 2])
    return M


def _sym_params(M: np.ndarray) -> np.ndarray:
    return np.concatenate([M[_IU4], np.diag(M)[:3]])


def _traceless_params(M: np.ndarray) -> np.ndarray:
    return M.ravel()[:15]


def _skew_part(M) -> np.ndarray:
    return M[_IU4]


def theorem_residual_vector(A1, A, B, C) -> np.ndarray:
    """The tau and omega conditions and the Jacobi blocks as one residual vector."""
    (a, b), (c, d) = A1
    parts = [
        _skew_part(theta_on_form(A, TAU) - OMEGA7 / 3),
        _skew_part(theta_on_form(B, TAU) - OMEGA3 / 3),
        _skew_part(theta_on_form(C, TAU) - OMEGA4 / 3),
        _skew_part(theta_on_form(A, OMEGA7) + theta_on_form(B, OMEGA3) + theta_on_form(C, OMEGA4)
                   - TAU - (a + d) * OMEGA7),
        (A @ B - B @ A - a * B - c * C).ravel(),
        (A @ C - C @ A - b * B - d * C).ravel(),
        (B @ C - C @ B).ravel(),
    ]
    return np.concatenate(parts)


def _nilpotent_residual(X) -> np.ndarray:
    X2 = X @ X
    return np.concatenate([(X2 @ X2).ravel(), [np.trace(X2)]])


@dataclass(frozen=True)
class ConstraintSystem:
    case: int
    subcase: str
    unknowns: tuple[str, ...]
    unpack: Callable[[np.ndarray], tuple]  # params -> (A1, A, B, C)
    pack: Callable[[Quadruple], np.ndarray]  # gauge-fixed quadruple -> params
    extra: Callable[[tuple], np.ndarray]  # case-specific shape residuals

    @property
    def n_unknowns(self) -> int:
        return len(self.unknowns)

    def residual(self, x) -> np.ndarray:
        mats = self.unpack(x)
        return np.concatenate([theorem_residual_vector(*mats), self.extra(mats)])

    @property
    def n_residuals(self) -> int:
        return len(self.residual(np.zeros(self.n_unknowns)))

    def jacobian(self, x) -> np.ndarray:
        """Complex-step derivative; exact to rounding for these polynomial residuals."""
        x = np.asarray(x, dtype=float)
        h = 1e-30
        cols = []
        for i in range(len(x)):
            xc = x.astype(complex)
            xc[i] += 1j * h
            cols.append(self.residual(xc).imag / h)
        return np.array(cols).T

    def quadruple(self, x, name: str | None = None) -> Quadruple:
        A1, A, B, C = (np.real(M) for M in self.unpack(np.asarray(x, dtype=float)))
        return Quadruple(A1, A, B, C, name=name)

    def residual_at(self, q: Quadruple) -> float:
        return float(np.max(np.abs(self.residual(self.pack(q)))))


def _names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def build_system(case: int, subcase: str = "symmetric") -> ConstraintSystem:
    """Constraint system for nilradical dimension 4, 5 or 6.

    case 4: A1 = 0; A, B, C symmetric, commuting, {sqrt3 A, sqrt3 B, sqrt3 C} orthonormal.
    case 5: A1 = diag(0, delta); A, B symmetric; C nilpotent.
    case 6 ("symmetric"): A1 = diag(alpha, delta); A symmetric; B, C nilpotent.
    case 6 ("normal"): A1 = [[a, b], [-b, a]]; A normal; B, C nilpotent.
    """
    if case == 4:
        def unpack(x):
            return np.zeros((2, 2), dtype=np.result_type(x, float)), _sym_traceless(x[:9]), \
                _sym_traceless(x[9:18]), _sym_traceless(x[18:27])

        def pack(q):
            return np.concatenate([_sym_params(q.A), _sym_params(q.B), _sym_params(q.C)])

        def extra(m):
            _, A, B, C = m
            gram = [np.sum(X * Y) for X, Y in ((A, A), (B, B), (C, C))]
            cross = [np.sum(X * Y) for X, Y in ((A, B), (A, C), (B, C))]
            return np.concatenate([np.array(gram) - 1 / 3, np.array(cross)])

        names = _names("a", 9) + _names("b", 9) + _names("c", 9)
        return ConstraintSystem(4, "symmetric", tuple(names), unpack, pack, extra)

    if case == 5:
        def unpack(x):
            A1 = np.zeros((2, 2), dtype=np.result_type(x, float))
            A1[1, 1] = x[0]
            return A1, _sym_traceless(x[1:10]), _sym_traceless(x[10:19]), _traceless(x[19:34])

        def pack(q):
            return np.concatenate([[q.A1[1, 1]], _sym_params(q.A), _sym_params(q.B), _traceless_params(q.C)])

        def extra(m):
            return _nilpotent_residual(m[3])

        names = ["delta"] + _names("a", 9) + _names("b", 9) + _names("c", 15)
        return ConstraintSystem(5, "symmetric", tuple(names), unpack, pack, extra)

    if case == 6 and subcase == "symmetric":
        def unpack(x):
            A1 = np.zeros((2, 2), dtype=np.result_type(x, float))
            A1[0, 0], A1[1, 1] = x[0], x[1]
            return A1, _sym_traceless(x[2:11]), _traceless(x[11:26]), _traceless(x[26:41])

        def pack(q):
            return np.concatenate([[q.A1[0, 0], q.A1[1, 1]], _sym_params(q.A),
                                   _traceless_params(q.B), _traceless_params(q.C)])

        def extra(m):
            return np.concatenate([_nilpotent_residual(m[2]), _nilpotent_residual(m[3])])

        names = ["alpha", "delta"] + _names("a", 9) + _names("b", 15) + _names("c", 15)
        return ConstraintSystem(6, "symmetric", tuple(names), unpack, pack, extra)

    if case == 6 and subcase == "normal":
        def unpack(x):
            A1 = np.zeros((2, 2), dtype=np.result_type(x, float))
            A1[0, 0] = A1[1, 1] = x[0]
            A1[0, 1], A1[1, 0] = x[1], -x[1]
            return A1, _traceless(x[2:17]), _traceless(x[17:32]), _traceless(x[32:47])

        def pack(q):
            return np.concatenate([[q.A1[0, 0], q.A1[0, 1]], _traceless_params(q.A),
                                   _traceless_params(q.B), _traceless_params(q.C)])

        def extra(m):
            A = m[1]
            return np.concatenate([(A @ A.T - A.T @ A)[_IU4_DIAG],
                                   _nilpotent_residual(m[2]), _nilpotent_residual(m[3])])

        names = ["a", "b"] + _names("a", 15) + _names("b", 15) + _names("c", 15)
        return ConstraintSystem(6, "normal", tuple(names), unpack, pack, extra)

    raise ValueError(f"unknown case {case!r}/{subcase!r}")


# fingerprints --------------------------------------------------------------------

def _sign_key(spec: np.ndarray) -> tuple:
    return tuple(np.round(np.concatenate([spec.real, spec.imag]), 9))


def _sorted_spectrum(M: np.ndarray) -> np.ndarray:
    ev = np.linalg.eigvals(M)
    ev = np.where(np.abs(ev.imag) < 1e-9, ev.real + 0j, ev)
    return ev[np.lexsort((np.round(ev.imag, 9), np.round(ev.real, 9)))]


def _pencil_invariants(B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Rotation-invariant harmonics of t -> tr((cos t B + sin t C)^k), k = 2, 3."""
    P, Q, R = np.trace(B @ B), np.trace(B @ C), np.trace(C @ C)
    a3, b, bp, d3 = np.trace(B @ B @ B), np.trace(B @ B @ C), np.trace(B @ C @ C), np.trace(C @ C @ C)
    h0 = (P + R) / 2
    h2 = np.hypot((P - R) / 2, Q)
    h1 = np.hypot(3 * (a3 + bp) / 4, 3 * (b + d3) / 4)
    h3 = np.hypot((a3 - 3 * bp) / 4, (3 * b - d3) / 4)
    return np.array([h0, h2, h1, h3])


def _joint_weights(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Weights of a commuting symmetric triple, rows (A, B, C)-eigenvalues per common eigenvector."""
    rng = np.random.default_rng(0)
    coeffs = rng.normal(size=3)
    _, V = np.linalg.eigh(coeffs[0] * A + coeffs[1] * B + coeffs[2] * C)
    return np.array([[v @ X @ v for X in (A, B, C)] for v in V.T])


@dataclass(frozen=True)
class Fingerprint:
    case: int
    spec_A1: np.ndarray
    spec_A: np.ndarray
    pencil: np.ndarray  # (h0, h2) quadratic and (h1, h3) cubic harmonic magnitudes
    weights: np.ndarray  # case 4 only: sorted |w_i|^2 and pairwise <w_i, w_j>
    tr_B3: float  # informational, not gauge invariant
    abs_tr_C3: float  # informational, invariant only outside case 4

    def vector(self) -> np.ndarray:
        return np.concatenate([
            [self.case], self.spec_A1.real, self.spec_A1.imag, self.spec_A.real, self.spec_A.imag,
            self.pencil, self.weights,
        ])

    def distance(self, other: "Fingerprint") -> float:
        a, b = self.vector(), other.vector()
        if a.shape != b.shape:
            return float("inf")
        return float(np.max(np.abs(a - b)))

    def as_dict(self, digits: int = 9) -> dict:
        """Gauge-invariant part only, rounded well inside the solver accuracy."""
        def r(v):
            return round(float(v), digits) + 0.0

        return {
            "case": self.case,
            "spec_A1": [str(complex(r(v.real), r(v.imag))) for v in self.spec_A1],
            "spec_A": [str(complex(r(v.real), r(v.imag))) for v in self.spec_A],
            "pencil": [r(v) for v in self.pencil],
            "weights": [r(v) for v in self.weights],
        }


def fingerprint(q: Quadruple, case: int = 0) -> Fingerprint:
    """Invariants of the U0 and g actions on a quadruple.

    Spectra of A1 and A are taken up to the common sign flip of the g-action;
    B and C enter through rotation-invariant harmonics of their pencil. In
    case 4 both are replaced by the Gram data of the joint weights of the
    commuting triple, which survives any rotation mixing A, B and C.
    Case 4 must be requested explicitly; the default is the generic form.
    """
    s1, sA = _sorted_spectrum(q.A1), _sorted_spectrum(q.A)
    t = np.trace(q.A1)
    flip = t < -1e-9 or (abs(t) <= 1e-9 and _sign_key(_sorted_spectrum(-q.A)) > _sign_key(sA))
    if flip:
        s1, sA = _sorted_spectrum(-q.A1), _sorted_spectrum(-q.A)
    weights = np.zeros(0)
    if case == 4:
        W = _joint_weights(q.A, q.B, q.C)
        G = W @ W.T
        weights = np.concatenate([np.sort(np.diag(G)), np.sort(G[np.triu_indices(4, 1)])])
        # with A1 = 0 rotations of span(e7, e3, e4) mix A, B, C; only the weight Gram survives
        sA = np.zeros(0, dtype=complex)
        pencil = np.zeros(0)
    else:
        pencil = _pencil_invariants(q.B, q.C)
    return Fingerprint(
        case=case,
        spec_A1=s1,
        spec_A=sA,
        pencil=pencil + 0.0,
        weights=weights,
        tr_B3=float(np.trace(q.B @ q.B @ q.B)),
        abs_tr_C3=float(abs(np.trace(q.C @ q.C @ q.C))),
    )


def rt_parameters(q: Quadruple, tol: float = 1e-7) -> tuple[float, float] | None:
    """Read (r, t) off a normal-sub-case solution, or None if the spectra do not have the mu_rt shape.

    The shape is spec A1 = 1/3 +- i r/3 and spec A = {-1/6 +- i t/3, 1/6 +- i (r+t)/3};
    (r, t) and (-r, -t) give conjugate spectra, so r >= 0 is chosen.
    """
    if np.trace(q.A1) < 0:
        q = act_g(q)
    l1 = np.linalg.eigvals(q.A1)
    lA = np.linalg.eigvals(q.A)
    if np.max(np.abs(l1.real - 1 / 3)) > tol:
        return None
    lo, hi = lA[lA.real < 0], lA[lA.real > 0]
    if len(lo) != 2 or len(hi) != 2 or np.max(np.abs(lo.real + 1 / 6)) > tol or np.max(np.abs(hi.real - 1 / 6)) > tol:
        return None
    r = 3 * abs(l1[0].imag)
    t_abs, s_abs = 3 * abs(lo[0].imag), 3 * abs(hi[0].imag)
    for t in (t_abs, -t_abs):
        if abs(abs(r + t) - s_abs) < tol:
            if r < tol:
                t = abs(t)
            return float(r) + 0.0, float(t) + 0.0
    return None


# solving -------------------------------------------------------------------------

@dataclass
class Solution:
    seed: int
    params: np.ndarray
    quadruple: Quadruple
    residual: float
    fingerprint: Fingerprint


@dataclass
class FingerprintClass:
    fingerprint: Fingerprint
    representative: Solution
    seeds: list[int] = field(default_factory=list)
    label: str | None = None

    @property
    def count(self) -> int:
        return len(self.seeds)


@dataclass
class SolveReport:
    case: int
    subcase: str
    n_seeds: int
    rng_seed: int
    n_unknowns: int
    n_residuals: int
    converged: int
    classes: list[FingerprintClass]
    failures: dict[str, int]
    jacobian_rank_deficiency: dict[str, int] = field(default_factory=dict)


def canonicalize(q: Quadruple, case: int, subcase: str = "symmetric") -> Quadruple:
    """Bring a solution into the case's sign and ordering convention (trace A1 >= 0, alpha <= delta)."""
    if np.trace(q.A1) < -1e-12:
        q = act_g(q)
    if case == 6 and subcase == "symmetric" and q.A1[0, 0] > q.A1[1, 1] + 1e-12:
        # quarter turn in U0: h1 swaps e3 and e4
        h2 = np.eye(2)
        h3 = np.array([[0.0, -1.0], [1.0, 0.0]])  # inverse of h1 = [[0, 1], [-1, 0]]
        q = act_u0(q, 0.0, 1.0, h2, h3)
    return q


def _polish(system: ConstraintSystem, x: np.ndarray, steps: int = 8) -> np.ndarray:
    for _ in range(steps):
        r = system.residual(x)
        if np.max(np.abs(r)) < 1e-14:
            break
        J = system.jacobian(x)
        dx, *_ = np.linalg.lstsq(J, -r, rcond=None)
        x = x + dx
    return x


def solve_one(system: ConstraintSystem, seed: int, rng_seed: int, max_nfev: int = 200):
    rng = np.random.default_rng([rng_seed, seed])
    x0 = rng.uniform(-1.0, 1.0, size=system.n_unknowns)
    try:
        res = least_squares(system.residual, x0, jac=system.jacobian, method="lm",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    except (ValueError, np.linalg.LinAlgError) as exc:  # pragma: no cover - solver breakdown
        return None, f"solver error: {exc}"
    x = _polish(system, res.x)
    r = float(np.max(np.abs(system.residual(x))))
    if not np.isfinite(r) or r >= SOLVE_TOL:
        return None, "no convergence"
    return (x, r), None


def solve_from_seeds(system: ConstraintSystem, n_seeds: int, rng_seed: int = 0,
                     labels: dict[str, Quadruple] | None = None) -> SolveReport:
    """Run every seed, keep converged points and group them by fingerprint."""
    classes: list[FingerprintClass] = []
    failures: dict[str, int] = {}
    converged = 0
    label_fps = {name: fingerprint(canonicalize(q, system.case, system.subcase), system.case)
                 for name, q in (labels or {}).items()}
    rank_def: dict[str, int] = {}
    for seed in range(n_seeds):
        out, why = solve_one(system, seed, rng_seed)
        if out is None:
            failures[why] = failures.get(why, 0) + 1
            continue
        x, r = out
        converged += 1
        q = canonicalize(system.quadruple(x), system.case, system.subcase)
        fp = fingerprint(q, system.case)
        sol = Solution(seed, x, q, r, fp)
        for cl in classes:
            if cl.fingerprint.distance(fp) < DEDUP_TOL:
                cl.seeds.append(seed)
                break
        else:
            cl = FingerprintClass(fp, sol, [seed])
            for name, lfp in label_fps.items():
                if lfp.distance(fp) < DEDUP_TOL:
                    cl.label = name
                    break
            if system.subcase == "normal":
                rt = rt_parameters(q)
                if rt is not None:
                    cl.label = f"mu_rt(r={rt[0]:.6f},t={rt[1]:.6f})"
            classes.append(cl)
            J = system.jacobian(x)
            s = np.linalg.svd(J, compute_uv=False)
            rank = int(np.sum(s > 1e-8 * s[0]))
            rank_def[cl.label or f"class{len(classes)}"] = system.n_unknowns - rank
    classes.sort(key=lambda c: tuple(np.round(c.fingerprint.vector(), 9)))
    return SolveReport(system.case, system.subcase, n_seeds, rng_seed, system.n_unknowns,
                       system.n_residuals, converged, classes, failures, rank_def)


# symmetries ----------------------------------------------------------------------

class PositiveDimensional(ValueError):
    pass


class ClosureDiverged(RuntimeError):
    pass


def _phi_tensor() -> np.ndarray:
    T = np.zeros((7, 7, 7))
    for (i, j, k), v in reference_phi().terms.items():
        for perm, s in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                        ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            T[perm] = s * v
    return T


_PHI = _phi_tensor()
_I3 = np.array(basis_indices(7, 3)).T
_IU7 = np.triu_indices(7, 1)
_IU7D = np.triu_indices(7)


def _pull3(T, a, b, c):
    """T(a., b., c.) for a 3-tensor T."""
    X = np.tensordot(T, a, axes=(0, 0))  # j k a
    X = np.tensordot(X, b, axes=(0, 0))  # k a b
    return np.tensordot(X, c, axes=(0, 0))  # a b c


def symmetry_residual(L: LieAlgebra, h, g2: bool) -> np.ndarray:
    c, eye = L.c, np.eye(7)
    lhs = np.tensordot(c, h, axes=(2, 1))
    parts = [(lhs - _pull3(c, h, h, eye))[_IU7].ravel(), (h.T @ h - eye)[_IU7D]]
    if g2:
        parts.append((_pull3(_PHI, h, h, h) - _PHI)[tuple(_I3)])
    return np.concatenate(parts)


def _slot_derivative(T, h, slots) -> np.ndarray:
    """d/dh_pq of T(h., h., h.) with h in the given slots and the identity elsewhere.

    Axes of the result: (p, q, a, b, c).
    """
    eye = np.eye(7)
    out = np.zeros((7,) * 5)
    for s in slots:
        f = [h if t in slots else eye for t in range(3)]
        f[s] = eye
        Y = np.moveaxis(_pull3(T, *f), s, 0)  # free slot first, indexed by p
        D = np.einsum("qx,pyz->pqxyz", eye, Y)  # x is output slot s
        out += np.moveaxis(D, 2, 2 + s)
    return out


def symmetry_jacobian(L: LieAlgebra, h, g2: bool) -> np.ndarray:
    """Jacobian of symmetry_residual with respect to the entries of h (row-major)."""
    c, eye = L.c, np.eye(7)
    d_aut = np.einsum("kp,ijq->pqijk", eye, c) - _slot_derivative(c, h, (0, 1))
    d_orth = np.einsum("qj,pi->pqij", eye, h) + np.einsum("qi,pj->pqij", eye, h)
    parts = [d_aut[:, :, _IU7[0], _IU7[1]].reshape(49, -1), d_orth[:, :, _IU7D[0], _IU7D[1]].reshape(49, -1)]
    if g2:
        d_phi = _slot_derivative(_PHI, h, (0, 1, 2))
        parts.append(d_phi[:, :, _I3[0], _I3[1], _I3[2]].reshape(49, -1))
    return np.concatenate(parts, axis=1).T


def element_order(h: np.ndarray, max_order: int = MAX_ORDER, tol: float = ORDER_TOL) -> int | None:
    P = np.eye(len(h))
    for k in range(1, max_order + 1):
        P = P @ h
        if np.max(np.abs(P - np.eye(len(h)))) < tol:
            return k
    return None


def _find(elements: list[np.ndarray], h: np.ndarray, tol: float) -> bool:
    return any(np.max(np.abs(g - h)) < tol for g in elements)


def _key(h: np.ndarray) -> tuple:
    return tuple(np.round(h.ravel(), 4) + 0.0)


def close_group(gens: list[np.ndarray], tol: float = DEDUP_TOL, cap: int = CLOSURE_CAP) -> list[np.ndarray]:
    """Group generated by gens: breadth-first products with the generators, hashed on rounded entries."""
    table: dict[tuple, np.ndarray] = {_key(np.eye(7)): np.eye(7)}
    gens = [g for g in gens if np.max(np.abs(g - np.eye(7))) >= tol]
    frontier = [np.eye(7)]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                p = a @ g
                k = _key(p)
                hit = table.get(k)
                if hit is None:
                    table[k] = p
                    new.append(p)
                    if len(table) > cap:
                        raise ClosureDiverged(f"closure exceeded {cap} elements")
                elif np.max(np.abs(hit - p)) >= tol:
                    raise ClosureDiverged("rounded keys collide; elements are not isolated")
        frontier = new
    return list(table.values())


@dataclass
class SymmetryGroup:
    group: str
    elements: list[np.ndarray]
    order_histogram: dict[int, int]
    converged_seeds: int
    n_seeds: int

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, h: np.ndarray, tol: float = 1e-6) -> bool:
        return _find(self.elements, h, tol)


def _canonical_sort(elements: list[np.ndarray]) -> list[np.ndarray]:
    return sorted(elements, key=lambda m: tuple(np.round(m.ravel(), 8)))


def enumerate_symmetries(L: LieAlgebra, group: str = "g2", n_seeds: int = 200, rng_seed: int = 0,
                         extra_generators: list[np.ndarray] | None = None) -> SymmetryGroup:
    """Aut(L) ∩ G2 or Aut(L) ∩ O(7), by random-start Gauss-Newton plus multiplicative closure."""
    if group not in ("g2", "o7"):
        raise ValueError("group must be 'g2' or 'o7'")
    if L.skew_derivations_dim() > 0:
        raise PositiveDimensional("positive-dimensional symmetry group")
    g2 = group == "g2"
    found: list[np.ndarray] = []
    converged = 0
    for seed in range(n_seeds):
        rng = np.random.default_rng([rng_seed, seed])
        Q, R = np.linalg.qr(rng.normal(size=(7, 7)))
        h0 = Q * np.sign(np.diag(R))
        res = least_squares(lambda v: symmetry_residual(L, v.reshape(7, 7), g2), h0.ravel(),
                            jac=lambda v: symmetry_jacobian(L, v.reshape(7, 7), g2), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=60)
        h = res.x.reshape(7, 7)
        # snap to the nearest orthogonal matrix, then one residual check
        U, _, Vt = np.linalg.svd(h)
        h = U @ Vt
        if np.max(np.abs(symmetry_residual(L, h, g2))) < 1e-9:
            converged += 1
            if not _find(found, h, DEDUP_TOL):
                found.append(h)
    gens = found + list(extra_generators or [])
    elements = _canonical_sort(close_group(gens))
    hist: dict[int, int] = {}
    for h in elements:
        k = element_order(h)
        key = -1 if k is None else k
        hist[key] = hist.get(key, 0) + 1
    return SymmetryGroup(group, elements, dict(sorted(hist.items())), converged, n_seeds)


@dataclass
class GeneratorCheck:
    name: str
    automorphism: float
    orthogonality: float
    g2_residual: float
    declared_g2: bool

    @property
    def passed(self) -> bool:
        g2_ok = (self.g2_residual < 1e-9) == self.declared_g2
        return self.automorphism < 1e-9 and self.orthogonality < 1e-9 and g2_ok


def verify_generators(L: LieAlgebra, declared: list[tuple[str, np.ndarray, bool]]) -> list[GeneratorCheck]:
    from .quadruple import g2_residual

    out = []
    for name, h, is_g2 in declared:
        out.append(GeneratorCheck(
            name,
            L.automorphism_residual(h),
            float(np.max(np.abs(h.T @ h - np.eye(7)))),
            g2_residual(h),
            is_g2,
        ))
    return out


def word_residual(mats: list[np.ndarray]) -> float:
    P = np.eye(7)
    for m in mats:
        P = P @ m
    return float(np.max(np.abs(P - np.eye(7))))


def commutator_residual(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a @ b - b @ a)))


__all__ = [
    "ConstraintSystem", "build_system", "Fingerprint", "fingerprint", "solve_from_seeds", "SolveReport",
    "enumerate_symmetries", "SymmetryGroup", "verify_generators", "element_order", "close_group",
    "PositiveDimensional", "ClosureDiverged", "canonicalize", "rt_parameters",
]
