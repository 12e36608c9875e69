"""Loading the six Lie brackets of the classification from their registry files.

Each file mirrors the coframe presentation ``d e^k = sum coeff e^ij`` and also
carries the quadruple (A1, A, B, C) of the corresponding example. Loading
cross-checks the presentation, the assembled bracket and the quadruple.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .coeffs import parse_coefficient
from .exterior import KForm
from .liealg import LieAlgebra
from .quadruple import Quadruple, assemble_bracket, extract_quadruple, to_form_order

NAMES = ("mu_B", "mu_M1", "mu_M2", "mu_M3", "mu_J", "mu_rt")
CROSS_CHECK_TOL = 1e-12


class RegistryError(ValueError):
    pass


def registry_dir() -> Path:
    env = os.environ.get("G2CERT_REGISTRY")
    if env:
        return Path(env)
    return Path(str(resources.files("g2cert") / "data"))


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    params: dict[str, float]
    algebra: LieAlgebra
    quadruple: Quadruple
    presentation: dict[int, KForm]  # 0-based coframe index -> d e^k as printed
    metadata: dict[str, Any] = field(default_factory=dict)
    cross_check: dict[str, float] = field(default_factory=dict)

    @property
    def label(self) -> str:
        if self.params:
            inner = ",".join(f"{k}={v:g}" for k, v in self.params.items())
            return f"{self.name}({inner})"
        return self.name

    @property
    def inv_trace_A1(self) -> float | None:
        raw = self.metadata.get("inv_trace_A1")
        return None if raw is None else parse_coefficient(str(raw))


def list_entries(directory: Path | None = None) -> list[str]:
    directory = registry_dir() if directory is None else Path(directory)
    if not directory.is_dir():
        raise RegistryError(f"registry directory not found: {directory}")
    names = sorted(p.stem for p in directory.glob("mu_*.yaml"))
    if not names:
        raise RegistryError(f"no registry entries in {directory}")
    order = {n: i for i, n in enumerate(NAMES)}
    return sorted(names, key=lambda n: (order.get(n, len(order)), n))


def _read(path: Path) -> dict:
    try:
        with open(path) as fh:
            return yaml.safe_load(fh)
    except FileNotFoundError:
        raise RegistryError(f"unknown registry entry: {path.stem} (looked in {path.parent})") from None


def _coeff(raw: Any, where: str) -> float:
    try:
        return parse_coefficient(str(raw))
    except ValueError as exc:
        raise RegistryError(f"{where}: {exc}") from None


def _matrix(rows, where: str) -> np.ndarray:
    return np.array([[_coeff(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(rows)])


def parse_presentation(doc: dict, params: dict[str, float]) -> dict[int, KForm]:
    dim = int(doc["dim"])
    out = {}
    for label, records in (doc.get("d") or {}).items():
        k = int(str(label).lstrip("e")) - 1
        terms: dict[tuple[int, int], float] = {}
        for rec in records or []:
            i, j = rec["form"]
            val = _coeff(rec["coeff"], f"{doc['name']}.d.{label}")
            if "param" in rec:
                val *= params[rec["param"]]
            key = (i - 1, j - 1)
            terms[key] = terms.get(key, 0.0) + val
        out[k] = KForm(dim, 2, terms)
    for k in range(dim):
        out.setdefault(k, KForm(dim, 2))
    return out


def bracket_from_presentation(pres: dict[int, KForm], dim: int, name: str | None = None) -> LieAlgebra:
    """c_ij^k = -(d e^k)_ij, i.e. d e^k(e_i, e_j) = -e^k([e_i, e_j])."""
    c = np.zeros((dim, dim, dim))
    for k, form in pres.items():
        for (i, j), v in form.terms.items():
            c[i, j, k] = -v
    return LieAlgebra(c, name=name)


def _quadruple(doc: dict, params: dict[str, float]) -> Quadruple | None:
    raw = doc.get("quadruple")
    if raw is None:
        return None
    mats = {key: _matrix(raw[key], f"{doc['name']}.quadruple.{key}") for key in ("A1", "A", "B", "C")}
    for pname, parts in (doc.get("quadruple_params") or {}).items():
        for key, rows in parts.items():
            mats[key] = mats[key] + params[pname] * _matrix(rows, f"{doc['name']}.quadruple_params.{pname}.{key}")
    return Quadruple(mats["A1"], mats["A"], mats["B"], mats["C"], name=doc["name"])


def _parse_params(doc: dict, params: dict[str, float] | None) -> dict[str, float]:
    declared = list(doc.get("params") or [])
    params = dict(params or {})
    unknown = set(params) - set(declared)
    if unknown:
        raise RegistryError(f"{doc['name']} has no parameters {sorted(unknown)}")
    return {p: float(params.get(p, 0.0)) for p in declared}


@lru_cache(maxsize=256)
def _load_cached(name: str, directory: str, param_items: tuple) -> RegistryEntry:
    path = Path(directory) / f"{name}.yaml"
    doc = _read(path)
    params = _parse_params(doc, dict(param_items))
    pres = parse_presentation(doc, params)
    L = bracket_from_presentation(pres, int(doc["dim"]), name=name)

    # d computed from the bracket must reproduce the printed presentation
    ce = max(float(np.max(np.abs(L.d_one_form(k).to_vector() - pres[k].to_vector()), initial=0.0))
             for k in range(L.dim))
    q = _quadruple(doc, params)
    checks = {"presentation_vs_bracket": ce}
    if q is not None:
        checks["quadruple_vs_bracket"] = float(np.max(np.abs(assemble_bracket(q, check=False).c - L.c)))
    else:
        q = extract_quadruple(L)
    bad = {k: v for k, v in checks.items() if v > CROSS_CHECK_TOL}
    if bad:
        raise RegistryError(f"{name}: cross-check failed {bad}")
    return RegistryEntry(name, params, L, q, pres, dict(doc.get("metadata") or {}), checks)


def load(name: str, params: dict[str, float] | None = None, directory: Path | None = None) -> RegistryEntry:
    directory = registry_dir() if directory is None else Path(directory)
    return _load_cached(name, str(directory), tuple(sorted((params or {}).items())))


def load_all(directory: Path | None = None) -> list[RegistryEntry]:
    return [load(n, directory=directory) for n in list_entries(directory)]


def parse_params(text: str | None) -> dict[str, float]:
    """'r=1,t=2' -> {'r': 1.0, 't': 2.0}."""
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        if not sep:
            raise ValueError(f"bad parameter assignment {part!r}")
        out[key.strip()] = float(val)
    return out


@lru_cache(maxsize=None)
def _generator_doc(directory: str) -> dict:
    return _read(Path(directory) / "generators.yaml")


def generator(name: str, directory: Path | None = None) -> np.ndarray:
    """Symmetry generator as a 7x7 matrix in the e1..e7 basis."""
    directory = registry_dir() if directory is None else Path(directory)
    doc = _generator_doc(str(directory))
    if name not in doc:
        raise RegistryError(f"unknown generator {name}")
    Hq = np.zeros((7, 7))
    Hq[:3, :3] = _matrix(doc[name]["g0"], f"{name}.g0")
    Hq[3:, 3:] = _matrix(doc[name]["g1"], f"{name}.g1")
    return to_form_order(Hq)


def generator_relations(directory: Path | None = None) -> list[dict]:
    directory = registry_dir() if directory is None else Path(directory)
    return list(_generator_doc(str(directory)).get("relations", []))


def presentation_pairs(dim: int = 7):
    return list(combinations(range(dim), 2))
