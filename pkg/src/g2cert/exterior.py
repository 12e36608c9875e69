"""Exterior algebra of a real inner-product space with a fixed orthonormal frame.

Forms are stored sparsely as ``{multi-index: coefficient}`` with 0-based,
strictly increasing multi-indices. The basis k-forms ``e^I`` are declared
orthonormal and ``e^1 ^ ... ^ e^n`` is the positive volume form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

DEDUP_EPS = 1e-15


class FrameMismatch(ValueError):
    pass


def perm_sign(seq: Iterable[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has a repeated entry."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def basis_indices(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Lexicographically ordered increasing multi-indices of length ``degree``."""
    return tuple(combinations(range(dim), degree))


@lru_cache(maxsize=None)
def _index_lookup(dim: int, degree: int) -> dict[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(basis_indices(dim, degree))}


@dataclass(frozen=True)
class Frame:
    dim: int
    metric: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("frame dimension must be positive")
        g = np.eye(self.dim) if self.metric is None else np.asarray(self.metric, dtype=float)
        if g.shape != (self.dim, self.dim):
            raise ValueError(f"metric must be {self.dim}x{self.dim}")
        if np.max(np.abs(g - g.T)) > 1e-12:
            raise ValueError("metric is not symmetric")
        if np.min(np.linalg.eigvalsh(g)) <= 0:
            raise ValueError("metric is not positive definite")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "metric", g)

    def is_orthonormal(self) -> bool:
        return bool(np.allclose(self.metric, np.eye(self.dim), atol=1e-14, rtol=0))


class KForm:
    """A homogeneous k-form on an n-dimensional space.

    Immutable; arithmetic returns new instances.
    """

    __slots__ = ("dim", "degree", "_terms")

    def __init__(self, dim: int, degree: int, terms: Mapping[tuple[int, ...], float] | None = None):
        if not 0 <= degree <= dim:
            raise ValueError(f"degree {degree} out of range for dimension {dim}")
        self.dim = dim
        self.degree = degree
        clean: dict[tuple[int, ...], float] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != degree:
                raise ValueError(f"multi-index {idx} has wrong length for degree {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise ValueError(f"multi-index {idx} out of range")
            s = perm_sign(idx)
            if s == 0:
                continue
            key = tuple(sorted(idx))
            clean[key] = clean.get(key, 0.0) + s * float(c)
        self._terms = {k: v for k, v in sorted(clean.items()) if abs(v) >= DEDUP_EPS}

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls(dim, degree)

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec: np.ndarray) -> "KForm":
        idx = basis_indices(dim, degree)
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (len(idx),):
            raise ValueError("vector length does not match the form space")
        return cls(dim, degree, {i: c for i, c in zip(idx, vec) if c != 0.0})

    def to_vector(self) -> np.ndarray:
        lookup = _index_lookup(self.dim, self.degree)
        out = np.zeros(len(lookup))
        for idx, c in self._terms.items():
            out[lookup[idx]] = c
        return out

    @property
    def terms(self) -> dict[tuple[int, ...], float]:
        return dict(self._terms)

    def coefficient(self, idx: Iterable[int]) -> float:
        idx = tuple(idx)
        s = perm_sign(idx)
        if s == 0:
            return 0.0
        return s * self._terms.get(tuple(sorted(idx)), 0.0)

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "KForm") -> None:
        if not isinstance(other, KForm):
            raise TypeError("expected a KForm")
        if other.dim != self.dim:
            raise FrameMismatch(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, 0.0) + v
        return KForm(self.dim, self.degree, terms)

    def __neg__(self) -> "KForm":
        return KForm(self.dim, self.degree, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, c: float) -> "KForm":
        return KForm(self.dim, self.degree, {k: c * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "KForm":
        return self * (1.0 / c)

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.dim, self.degree, self._terms) == (other.dim, other.degree, other._terms)

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(self._terms.items())))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self._terms.values())

    def __repr__(self) -> str:
        if not self._terms:
            return f"KForm(dim={self.dim}, degree={self.degree}, 0)"
        parts = []
        for idx, c in self._terms.items():
            label = "".join(str(i + 1) for i in idx) if idx else "1"
            parts.append(f"{c:+.6g}*e{label}")
        return " ".join(parts)


def e(*labels: int, dim: int = 7) -> KForm:
    """Basis form from 1-based labels, e.g. ``e(1, 2, 7)`` is e^127."""
    return KForm(dim, len(labels), {tuple(i - 1 for i in labels): 1.0})


def volume_form(dim: int) -> KForm:
    return KForm(dim, dim, {tuple(range(dim)): 1.0})


def wedge(a: KForm, b: KForm) -> KForm:
    a._check(b)
    if a.degree + b.degree > a.dim:
        raise ValueError("degree of the product exceeds the dimension")
    terms: dict[tuple[int, ...], float] = {}
    for ia, ca in a._terms.items():
        sa = set(ia)
        for ib, cb in b._terms.items():
            if sa.intersection(ib):
                continue
            merged = ia + ib
            s = perm_sign(merged)
            key = tuple(sorted(merged))
            terms[key] = terms.get(key, 0.0) + s * ca * cb
    return KForm(a.dim, a.degree + b.degree, terms)


def wedge_all(*forms: KForm) -> KForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def contract(v, a: KForm) -> KForm:
    """Interior product v ⌟ a for a vector given in frame coordinates."""
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    v = np.asarray(v, dtype=float)
    if v.shape != (a.dim,):
        raise FrameMismatch("vector dimension does not match the form")
    terms: dict[tuple[int, ...], float] = {}
    for idx, c in a._terms.items():
        for pos, i in enumerate(idx):
            if v[i] == 0.0:
                continue
            rest = idx[:pos] + idx[pos + 1:]
            terms[rest] = terms.get(rest, 0.0) + (-1) ** pos * v[i] * c
    return KForm(a.dim, a.degree - 1, terms)


def unit_vector(i: int, dim: int = 7) -> np.ndarray:
    """Basis vector e_i from a 1-based label."""
    v = np.zeros(dim)
    v[i - 1] = 1.0
    return v


def _star_orthonormal(a: KForm) -> KForm:
    n = a.dim
    full = set(range(n))
    terms = {}
    for idx, c in a._terms.items():
        comp = tuple(sorted(full.difference(idx)))
        terms[comp] = perm_sign(idx + comp) * c
    return KForm(n, n - a.degree, terms)


def pullback(h: np.ndarray, a: KForm) -> KForm:
    """(h^* a)(v1, .., vk) = a(h v1, .., h vk) for a linear map h given as a matrix.

    ``h`` may be rectangular (n x m), mapping an m-dimensional space into the
    n-dimensional one; the result then lives in dimension m (restriction to a subspace).
    """
    h = np.asarray(h, dtype=float)
    n, k = a.dim, a.degree
    if h.ndim != 2 or h.shape[0] != n:
        raise FrameMismatch("map dimension does not match the form")
    m = h.shape[1]
    if k > m:
        raise ValueError(f"cannot pull a {k}-form back to a {m}-dimensional space")
    if k == 0:
        return KForm(m, 0, a.terms)
    cols = basis_indices(m, k)
    out = np.zeros(len(cols))
    for idx, c in a._terms.items():
        rows = h[list(idx), :]
        for pos, J in enumerate(cols):
            out[pos] += c * np.linalg.det(rows[:, list(J)])
    return KForm.from_vector(m, k, out)


def hodge(a: KForm, frame: Frame | None = None) -> KForm:
    """Hodge star with the convention  alpha ^ *beta = <alpha, beta> vol.

    For a non-identity metric the volume form is sqrt(det g) e^1..n.
    """
    if frame is None or frame.is_orthonormal():
        if frame is not None and frame.dim != a.dim:
            raise FrameMismatch("frame dimension does not match the form")
        return _star_orthonormal(a)
    if frame.dim != a.dim:
        raise FrameMismatch("frame dimension does not match the form")
    # h maps the standard basis onto a g-orthonormal, positively oriented basis
    w, U = np.linalg.eigh(frame.metric)
    h = U @ np.diag(w ** -0.5) @ U.T
    return pullback(np.linalg.inv(h), _star_orthonormal(pullback(h, a)))


def inner(a: KForm, b: KForm, frame: Frame | None = None) -> float:
    a._check(b)
    if a.degree != b.degree:
        return 0.0
    if frame is None or frame.is_orthonormal():
        return float(sum(c * b._terms.get(idx, 0.0) for idx, c in a._terms.items()))
    top = wedge(a, hodge(b, frame))
    return top.coefficient(range(a.dim)) / np.sqrt(np.linalg.det(frame.metric))


def form_norm2(a: KForm, frame: Frame | None = None) -> float:
    return inner(a, a, frame)


def form_norm(a: KForm, frame: Frame | None = None) -> float:
    return float(np.sqrt(max(form_norm2(a, frame), 0.0)))


def random_form(rng: np.random.Generator, dim: int, degree: int, density: float = 0.5) -> KForm:
    idx = basis_indices(dim, degree)
    vec = rng.normal(size=len(idx)) * (rng.random(len(idx)) < density)
    return KForm.from_vector(dim, degree, vec)
