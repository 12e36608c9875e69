"""The encoding mu = (A1, A, B, C) of an adapted Lie bracket and the theta representation.

Subspaces of the 7-dimensional algebra (0-based form indices in parentheses):

    h1 = span{e3, e4}          (2, 3)
    g1 = span{e1, e2, e5, e6}  (0, 1, 4, 5)
    g0 = span{e7, e3, e4}      (6, 2, 3)

Quadruple-facing 7x7 matrices use the ordered basis {e7, e3, e4, e1, e2, e5, e6};
forms always use e1..e7. ``QBASIS`` converts between the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exterior import KForm, e, pullback, form_norm
from .liealg import LieAlgebra

H1 = (2, 3)
G1 = (0, 1, 4, 5)
E7 = 6
# position i of the quadruple basis is form index QBASIS[i]
QBASIS = (6, 2, 3, 0, 1, 4, 5)


def to_form_order(M: np.ndarray) -> np.ndarray:
    """Matrix in the basis {e7,e3,e4,e1,e2,e5,e6} -> matrix in e1..e7."""
    P = np.zeros((7, 7))
    for pos, idx in enumerate(QBASIS):
        P[idx, pos] = 1.0
    return P @ np.asarray(M) @ P.T


def to_quadruple_order(M: np.ndarray) -> np.ndarray:
    P = np.zeros((7, 7))
    for pos, idx in enumerate(QBASIS):
        P[idx, pos] = 1.0
    return P.T @ np.asarray(M) @ P


def reference_phi() -> KForm:
    """e127 + e347 + e567 + e135 - e146 - e236 - e245."""
    return (e(1, 2, 7) + e(3, 4, 7) + e(5, 6, 7) + e(1, 3, 5)
            - e(1, 4, 6) - e(2, 3, 6) - e(2, 4, 5))


# 2-forms on g1 as antisymmetric 4x4 matrices in the local basis (e1, e2, e5, e6)
def _local(pairs: dict[tuple[int, int], float]) -> np.ndarray:
    M = np.zeros((4, 4))
    for (i, j), v in pairs.items():
        M[i, j] += v
        M[j, i] -= v
    return M


TAU = _local({(0, 1): 1, (2, 3): -1})
OMEGA_BAR3 = _local({(1, 3): 1, (0, 2): 1})
OMEGA_BAR4 = _local({(0, 3): 1, (1, 2): -1})
OMEGA7 = _local({(0, 1): 1, (2, 3): 1})
OMEGA3 = _local({(1, 3): 1, (0, 2): -1})
OMEGA4 = _local({(0, 3): 1, (1, 2): 1})
BETA = (TAU, OMEGA_BAR3, OMEGA_BAR4, OMEGA7, OMEGA3, OMEGA4)
BETA_NAMES = ("tau", "omega_bar3", "omega_bar4", "omega7", "omega3", "omega4")

T7 = np.diag([-1.0, -1.0, 1.0, 1.0]) / 6
T3 = np.fliplr(np.eye(4)) / 6
T4 = np.array([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float) / 6


def local_to_form(M: np.ndarray) -> KForm:
    """Antisymmetric 4x4 matrix on g1 -> 2-form on the 7-dim space."""
    terms = {}
    for i, j in combinations(range(4), 2):
        if M[i, j] != 0:
            terms[(G1[i], G1[j])] = M[i, j]
    return KForm(7, 2, terms)


def form_to_local(a: KForm) -> np.ndarray:
    M = np.zeros((4, 4))
    for i, j in combinations(range(4), 2):
        M[i, j] = a.coefficient((G1[i], G1[j]))
        M[j, i] = -M[i, j]
    return M


def local_norm(M: np.ndarray) -> float:
    """Form norm of a 2-form on g1 given as an antisymmetric matrix."""
    return float(np.sqrt(0.5 * np.sum(np.asarray(M) ** 2)))


def theta_on_form(E: np.ndarray, M: np.ndarray) -> np.ndarray:
    """theta(E) alpha = -alpha(E., .) - alpha(., E.) for alpha given as a matrix."""
    return -(E.T @ M + M @ E)


def beta_coordinates(M: np.ndarray) -> np.ndarray:
    """Coordinates of a 2-form on g1 in the orthogonal basis beta (each of norm sqrt 2)."""
    return np.array([0.5 * np.sum(np.triu(M * b, 1)) for b in BETA])


def theta(E: np.ndarray) -> np.ndarray:
    """6x6 matrix of theta(E) on 2-forms of g1, in the ordered basis beta.

    Column k holds the beta-coordinates of theta(E) applied to the k-th basis form.
    """
    E = np.asarray(E)
    return np.column_stack([beta_coordinates(theta_on_form(E, b)) for b in BETA])


def so33_residual(T: np.ndarray) -> float:
    """Distance from the block shape [[M1, M2], [M2^t, M3]] with M1, M3 skew."""
    M1, M2, M2t, M3 = T[:3, :3], T[:3, 3:], T[3:, :3], T[3:, 3:]
    return float(max(np.max(np.abs(M1 + M1.T)), np.max(np.abs(M3 + M3.T)), np.max(np.abs(M2.T - M2t))))


@dataclass(frozen=True)
class Quadruple:
    A1: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for key, shape in (("A1", (2, 2)), ("A", (4, 4)), ("B", (4, 4)), ("C", (4, 4))):
            M = np.array(getattr(self, key), dtype=float)
            if M.shape != shape:
                raise ValueError(f"{key} must have shape {shape}")
            M.setflags(write=False)
            object.__setattr__(self, key, M)

    @classmethod
    def zero(cls) -> "Quadruple":
        return cls(np.zeros((2, 2)), np.zeros((4, 4)), np.zeros((4, 4)), np.zeros((4, 4)), "zero")

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.A1.ravel(), self.A.ravel(), self.B.ravel(), self.C.ravel()])

    def distance(self, other: "Quadruple") -> float:
        return float(np.max(np.abs(self.as_vector() - other.as_vector())))

    def trace_residual(self) -> float:
        return float(max(abs(np.trace(self.A)), abs(np.trace(self.B)), abs(np.trace(self.C))))

    def jacobi_blocks(self) -> dict[str, float]:
        """Residuals of [A,B] = aB + cC, [A,C] = bB + dC, [B,C] = 0."""
        (a, b), (c, d) = self.A1
        A, B, C = self.A, self.B, self.C
        return {
            "AB": float(np.max(np.abs(A @ B - B @ A - a * B - c * C))),
            "AC": float(np.max(np.abs(A @ C - C @ A - b * B - d * C))),
            "BC": float(np.max(np.abs(B @ C - C @ B))),
        }

    def check_invariants(self, tol: float = 1e-9) -> None:
        if self.trace_residual() > 10 * tol:
            raise ValueError(f"A, B, C must be traceless (residual {self.trace_residual():.2e})")
        jac = max(self.jacobi_blocks().values())
        if jac > tol:
            raise ValueError(f"Jacobi block conditions fail (residual {jac:.2e})")


def _full_tensor() -> np.ndarray:
    return np.zeros((7, 7, 7))


def _set(c: np.ndarray, i: int, j: int, vec: np.ndarray) -> None:
    c[i, j] += vec
    c[j, i] -= vec


def assemble_bracket(q: Quadruple, check: bool = True, name: str | None = None) -> LieAlgebra:
    if check:
        q.check_invariants()
    c = _full_tensor()
    for b, jb in enumerate(H1):
        v = np.zeros(7)
        v[list(H1)] = q.A1[:, b]
        _set(c, E7, jb, v)
    for col, jg in enumerate(G1):
        for X, src in ((q.A, E7), (q.B, 2), (q.C, 3)):
            v = np.zeros(7)
            v[list(G1)] = X[:, col]
            _set(c, src, jg, v)
    # LieAlgebra reads only i<j, so store the upper triangle
    upper = np.zeros_like(c)
    for i, j in combinations(range(7), 2):
        upper[i, j] = c[i, j]
    return LieAlgebra(upper, name=name or q.name)


class NotAdapted(ValueError):
    pass


def extract_quadruple(L: LieAlgebra, tol: float = 1e-9) -> Quadruple:
    ad7, ad3, ad4 = L.ad_basis[E7], L.ad_basis[2], L.ad_basis[3]
    q = Quadruple(
        ad7[np.ix_(H1, H1)], ad7[np.ix_(G1, G1)], ad3[np.ix_(G1, G1)], ad4[np.ix_(G1, G1)], name=L.name
    )
    resid = np.max(np.abs(assemble_bracket(q, check=False).c - L.c))
    if resid > tol:
        raise NotAdapted(f"bracket is not in the adapted form (residual {resid:.2e})")
    return q


# Theorem-style conditions ------------------------------------------------------

def main_theorem_residuals(q: Quadruple) -> dict[str, float]:
    """Residuals of the trace, Jacobi, tau and omega conditions; all ~0 certifies an ERP structure with tau = e12 - e56."""
    th = {k: lambda M, X=X: theta_on_form(X, M) for k, X in (("A", q.A), ("B", q.B), ("C", q.C))}
    out = {
        "trace": q.trace_residual(),
        "jacobi": max(q.jacobi_blocks().values()),
        "tau_A": local_norm(th["A"](TAU) - OMEGA7 / 3),
        "tau_B": local_norm(th["B"](TAU) - OMEGA3 / 3),
        "tau_C": local_norm(th["C"](TAU) - OMEGA4 / 3),
        "omega": local_norm(th["A"](OMEGA7) + th["B"](OMEGA3) + th["C"](OMEGA4)
                          - TAU - np.trace(q.A1) * OMEGA7),
    }
    return out


def check_main_theorem(q: Quadruple, tol: float = 1e-9) -> tuple[bool, dict[str, float]]:
    res = main_theorem_residuals(q)
    return all(v < tol for v in res.values()), res


# Equivalence actions -----------------------------------------------------------

def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, s], [-s, c]])


def _is_so2(h: np.ndarray, tol: float = 1e-12) -> bool:
    h = np.asarray(h)
    return h.shape == (2, 2) and np.allclose(h @ h.T, np.eye(2), atol=tol) and abs(np.linalg.det(h) - 1) < tol


def u0_element(x: float, y: float, h2: np.ndarray, h3: np.ndarray) -> np.ndarray:
    """7x7 matrix (basis e1..e7) of diag(1, h1, h2, h3) with h1 = [[x, y], [-y, x]]."""
    h1 = np.array([[x, y], [-y, x]])
    if abs(x * x + y * y - 1) > 1e-12 or not (_is_so2(h2) and _is_so2(h3)):
        raise ValueError("U0 parameters must be rotations")
    if np.max(np.abs(h1 @ h2 @ h3 - np.eye(2))) > 1e-12:
        raise ValueError("U0 requires h1 h2 h3 = I")
    Hq = np.eye(7)
    Hq[1:3, 1:3] = h1
    Hq[3:5, 3:5] = h2
    Hq[5:7, 5:7] = h3
    return to_form_order(Hq)


def u0_from_angles(a1: float, a2: float) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Parameters (x, y, h2, h3) of the U0 element with h1 = rotation(a1), h2 = rotation(a2)."""
    h1, h2 = rotation(a1), rotation(a2)
    h3 = np.linalg.inv(h1 @ h2)
    return float(np.cos(a1)), float(np.sin(a1)), h2, h3


def act_u0(q: Quadruple, x: float, y: float, h2: np.ndarray, h3: np.ndarray) -> Quadruple:
    """Conjugation of the bracket by the U0 element diag(1, h1, h2, h3).

    With h1 = [[x, y], [-y, x]] this sends (A1, A, B, C) to
    (h1 A1 h1^-1, h4 A h4^-1, h4 (xB + yC) h4^-1, h4 (-yB + xC) h4^-1).
    """
    u0_element(x, y, h2, h3)  # validates the constraint
    h1 = np.array([[x, y], [-y, x]])
    h4 = np.zeros((4, 4))
    h4[:2, :2] = h2
    h4[2:, 2:] = h3
    h4i = h4.T
    return Quadruple(
        h1 @ q.A1 @ h1.T,
        h4 @ q.A @ h4i,
        h4 @ (x * q.B + y * q.C) @ h4i,
        h4 @ (-y * q.B + x * q.C) @ h4i,
        name=q.name,
    )


G_H1 = np.diag([1.0, -1.0])
G_G1 = np.array([[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)


def g_element() -> np.ndarray:
    Hq = np.zeros((7, 7))
    Hq[0, 0] = -1.0
    Hq[1:3, 1:3] = G_H1
    Hq[3:, 3:] = G_G1
    return to_form_order(Hq)


def act_g(q: Quadruple) -> Quadruple:
    g1, g2 = G_H1, G_G1
    g1i, g2i = np.linalg.inv(g1), np.linalg.inv(g2)
    return Quadruple(-g1 @ q.A1 @ g1i, -g2 @ q.A @ g2i, g2 @ q.B @ g2i, -g2 @ q.C @ g2i, name=q.name)


def g2_residual(h: np.ndarray, phi: KForm | None = None) -> float:
    phi = reference_phi() if phi is None else phi
    return form_norm(pullback(h, phi) - phi)


def g2_membership(h: np.ndarray, tol: float = 1e-9) -> bool:
    return g2_residual(h) < tol


# sym_0(4) = p1 + p2 -----------------------------------------------------------

def sym0_decompose(M: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Split a traceless symmetric 4x4 matrix into its p1 part and p2 coefficients on (T7, T3, T4)."""
    M = np.asarray(M, dtype=float)
    if np.max(np.abs(M - M.T)) > tol:
        raise ValueError("input is not symmetric")
    if abs(np.trace(M)) > tol:
        raise ValueError("input is not traceless")
    coef = np.array([np.sum(M * T) / np.sum(T * T) for T in (T7, T3, T4)])
    p1 = M - coef[0] * T7 - coef[1] * T3 - coef[2] * T4
    return p1, coef


def in_p1(M: np.ndarray, tol: float = 1e-12) -> bool:
    a, b, e_, f = M[0, 0], M[0, 1], M[0, 2], M[0, 3]
    c, d = M[2, 2], M[2, 3]
    P = np.array([[a, b, e_, f], [b, -a, -f, e_], [e_, -f, c, d], [f, e_, d, -c]])
    return bool(np.max(np.abs(P - M)) <= tol)
