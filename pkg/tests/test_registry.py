import shutil

import numpy as np
import pytest

from g2cert import registry
from g2cert.quadruple import extract_quadruple


def test_all_entries_load_with_cross_checks(entries):
    assert list(entries) == list(registry.NAMES)
    for ent in entries.values():
        assert ent.cross_check["presentation_vs_bracket"] <= registry.CROSS_CHECK_TOL
        assert ent.cross_check["quadruple_vs_bracket"] <= registry.CROSS_CHECK_TOL


def test_every_entry_is_a_lie_algebra(entry):
    assert entry.algebra.jacobi_residual() < 1e-14


def test_quadruple_recovered_from_bracket(entry):
    assert extract_quadruple(entry.algebra).distance(entry.quadruple) < 1e-14


def test_mu_rt_at_origin_is_mu_B():
    B = registry.load("mu_B").algebra
    rt = registry.load("mu_rt").algebra
    assert np.max(np.abs(B.c - rt.c)) < 1e-15  # [PAPER]


@pytest.mark.parametrize("r,t", [(1.0, 0.0), (0.0, 1.0), (2.5, -1.25)])
def test_mu_rt_family_is_consistent(r, t):
    ent = registry.load("mu_rt", {"r": r, "t": t})
    assert ent.params == {"r": r, "t": t}
    assert ent.label == f"mu_rt(r={r:g},t={t:g})"
    assert ent.algebra.jacobi_residual() < 1e-14


def test_parse_params():
    assert registry.parse_params("r=1, t=-2.5") == {"r": 1.0, "t": -2.5}
    assert registry.parse_params(None) == {}
    with pytest.raises(ValueError):
        registry.parse_params("r1")


def test_unknown_entry_and_parameter():
    with pytest.raises(registry.RegistryError, match="unknown registry entry"):
        registry.load("mu_X")
    with pytest.raises(registry.RegistryError, match="no parameters"):
        registry.load("mu_B", {"r": 1.0})


def test_inv_trace_A1(entries):
    for name, ent in entries.items():
        if ent.inv_trace_A1 is None:
            assert name == "mu_J"
        else:
            assert np.isclose(ent.inv_trace_A1 * np.trace(ent.quadruple.A1), 1.0)


def test_generators_are_orthogonal():
    for name in ("f0", "f1", "f2", "f3", "f4", "f5", "f6"):
        h = registry.generator(name)
        assert np.allclose(h @ h.T, np.eye(7), atol=1e-14)
    with pytest.raises(registry.RegistryError):
        registry.generator("f99")
    assert registry.generator_relations()


def test_env_override_and_empty_directory(tmp_path, monkeypatch):
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(registry.RegistryError, match="no registry entries"):
        registry.list_entries(empty)
    with pytest.raises(registry.RegistryError, match="not found"):
        registry.list_entries(tmp_path / "missing")
    copy = tmp_path / "copy"
    shutil.copytree(registry.registry_dir(), copy)
    monkeypatch.setenv("G2CERT_REGISTRY", str(copy))
    assert registry.registry_dir() == copy
    assert registry.list_entries() == list(registry.NAMES)


def test_corrupted_presentation_is_rejected(tmp_path):
    shutil.copytree(registry.registry_dir(), tmp_path, dirs_exist_ok=True)
    path = tmp_path / "mu_M1.yaml"
    text = path.read_text()
    # change the quadruple but not the presentation
    path.write_text(text.replace('A1: [["', 'A1: [["1/7+', 1))
    with pytest.raises(registry.RegistryError, match="cross-check"):
        registry.load("mu_M1", directory=tmp_path)


def test_bad_coefficient_is_reported(tmp_path):
    shutil.copytree(registry.registry_dir(), tmp_path, dirs_exist_ok=True)
    path = tmp_path / "mu_M3.yaml"
    path.write_text(path.read_text().replace('coeff: "', 'coeff: "@', 1))
    with pytest.raises(registry.RegistryError, match="mu_M3.d"):
        registry.load("mu_M3", directory=tmp_path)
