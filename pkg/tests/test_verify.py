import numpy as np
import pytest
from pydantic import ValidationError
from sympy import ImmutableMatrix, Rational

from qtembed.chardata import Character, char_matrix
from qtembed.config import Settings
from qtembed.embed import EmbeddingDescription, assemble_embedding, build_character_set
from qtembed.errors import NonInteriorPointError
from qtembed.exactlin import int_matrix
from qtembed.polytope import cube, interior_point, simplex
from qtembed.verify import (
    Sampler,
    VerifyConfig,
    check_equivariance,
    check_modulus,
    check_nonvanishing,
    check_rank,
    check_separation,
    eval_monomial,
    run_all,
)

from .conftest import K5_CHARACTER

ACCEPTANCE = VerifyConfig(samples=200, seed=42, tol_eq=1e-9, tol_sep=1e-6)


def _assert_clean(bundle):
    for report in bundle.reports:
        assert report.failures == [], (report.check, report.failures[:3])


def test_k5_affine_suite(k5, k5_cm, k5_lattice):
    spec = build_character_set(k5, k5_cm, Character.trivial(6), k5_lattice)
    bundle = run_all(assemble_embedding(spec), k5, k5_cm, ACCEPTANCE, k5_lattice)
    _assert_clean(bundle)
    assert bundle.passed
    assert bundle.get("rank").details["toric"] is True


def test_k5_projective_suite(k5, k5_cm, k5_lattice):
    spec = build_character_set(k5, k5_cm, Character(coords=K5_CHARACTER), k5_lattice)
    bundle = run_all(assemble_embedding(spec), k5, k5_cm, ACCEPTANCE, k5_lattice)
    _assert_clean(bundle)


@pytest.mark.parametrize("coords", [(0,), (1,)], ids=["trivial", "identity"])
def test_cp2_suite(coords):
    P = simplex(2)
    cm = char_matrix(ImmutableMatrix(P.A.T))
    spec = build_character_set(P, cm, Character(coords=coords))
    bundle = run_all(assemble_embedding(spec), P, cm, ACCEPTANCE)
    _assert_clean(bundle)


def test_reports_depend_only_on_config(cube3, cube3_cm):
    spec = build_character_set(cube3, cube3_cm, Character.trivial(3))
    description = assemble_embedding(spec)
    config = VerifyConfig(samples=20, seed=7)
    first = run_all(description, cube3, cube3_cm, config)
    second = run_all(description, cube3, cube3_cm, config)
    assert first.model_dump() == second.model_dump()


def _tampered(description: EmbeddingDescription, **changes) -> EmbeddingDescription:
    return description.model_copy(update=changes)


def test_equivariance_detects_wrong_character(cube3, cube3_cm):
    spec = build_character_set(cube3, cube3_cm, Character(coords=(1, 2, 3)))
    description = _tampered(assemble_embedding(spec), character=[1, 2, 4])
    sampler = Sampler(cube3, cube3_cm)
    report = check_equivariance(description, sampler, VerifyConfig(samples=10))
    assert {f.code for f in report.failures} == {"kernel"}


def test_separation_detects_collapsed_orbits(cube3, cube3_cm):
    spec = build_character_set(cube3, cube3_cm, Character.trivial(3))
    description = assemble_embedding(spec)
    # the moment map alone cannot tell points of one torus orbit apart
    crippled = _tampered(
        description, coordinates=[], strings=[], weights=[], provenance=[], q=1
    )
    sampler = Sampler(cube3, cube3_cm)
    report = check_separation(crippled, sampler, VerifyConfig(samples=40))
    assert "torus_orbit" in {f.code for f in report.failures}


def test_modulus_and_nonvanishing(cube3, cube3_cm):
    spec = build_character_set(cube3, cube3_cm, Character(coords=(1, 1, 1)))
    description = assemble_embedding(spec)
    sampler = Sampler(cube3, cube3_cm)
    config = VerifyConfig(samples=30, seed=3)
    assert check_modulus(description, sampler, config).passed
    assert check_nonvanishing(description, sampler, config).passed


def test_check_rank_for_non_toric_trivial_character():
    P = cube(2)
    cm = char_matrix(int_matrix([[1, 0, 1, 0], [0, 1, 1, 1]]))
    p = interior_point(P, np.random.default_rng(0))
    report = check_rank(P, cm, p)
    assert report.passed
    assert report.details["toric"] is False


def test_check_rank_skips_nontrivial_non_toric():
    P = cube(2)
    cm = char_matrix(int_matrix([[1, 0, 1, 0], [0, 1, 1, 1]]))
    p = interior_point(P, np.random.default_rng(0))
    report = check_rank(P, cm, p, trivial=False)
    assert report.passed
    assert "skipped" in report.details


def test_check_rank_rejects_boundary_point(k5, k5_cm):
    with pytest.raises(NonInteriorPointError):
        check_rank(k5, k5_cm, (1, 0, 0))


def test_sampler_outside_kernel_moves_lambda(k5, k5_cm):
    sampler = Sampler(k5, k5_cm)
    rng = np.random.default_rng(0)
    for _ in range(20):
        pairing = sampler.lam @ sampler.outside_kernel(rng)
        assert np.max(np.abs(pairing - np.round(pairing))) > 1e-3
        kernel = sampler.lam @ sampler.kernel(rng)
        assert np.allclose(kernel, np.round(kernel))


def test_eval_monomial_accepts_vectors():
    z = np.array([2.0, 1j])
    assert eval_monomial((1, -1), z) == pytest.approx(-2j)


def test_config_validation():
    with pytest.raises(ValidationError):
        VerifyConfig(tol_eq=1e-6, tol_sep=1e-9)
    with pytest.raises(ValidationError):
        VerifyConfig(samples=0)
    with pytest.raises(ValidationError):
        VerifyConfig(tol_eq=0.0)


def test_config_from_settings():
    settings = Settings(samples=12, tol_eq=1e-10, tol_sep=1e-5)
    config = VerifyConfig.from_settings(settings, seed=9, samples=None)
    assert (config.samples, config.seed) == (12, 9)
    assert (config.tol_eq, config.tol_sep) == (1e-10, 1e-5)


def test_edge_monomial_matches_direct_product(k5):
    rng = np.random.default_rng(11)
    z = Sampler(k5, char_matrix(ImmutableMatrix(k5.A.T))).interior(rng).z
    a = (0, 0, 1, 0, 0, -1, -1, 1, 0)
    direct = z[2] * np.conj(z[5]) * np.conj(z[6]) * z[7]
    assert eval_monomial(a, z) == pytest.approx(direct)


def test_check_rank_segment_and_near_vertex(k5, k5_cm, k5_lattice):
    P = cube(1)
    report = check_rank(P, char_matrix(ImmutableMatrix(P.A.T)), (Rational(1, 2),))
    assert report.passed
    assert report.details["condition_number"] == pytest.approx(1.0)

    v = k5_lattice.vertices[0].coords
    p = interior_point(k5, np.random.default_rng(0))
    near = tuple(a + (b - a) / 10 for a, b in zip(v, p))
    report = check_rank(k5, k5_cm, near)
    assert report.passed
    assert report.details["condition_number"] > 1.0
