"""Diagonalization oracle against the mode product."""

import math

import pytest

from ising_fidelity import (
    ChainSpec,
    DomainError,
    PrecisionError,
    ResourceError,
    ed_oracle_fidelity,
    log_fidelity,
)


def test_identical_states_give_unity():
    assert ed_oracle_fidelity(6, 2.0, 0.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("size,g,delta", [(8, 1.0, 0.1), (10, 1.5, 0.2)])
def test_named_points_match_product(size, g, delta):
    product = math.exp(log_fidelity(ChainSpec(size, g, delta)).log_f)
    assert abs(ed_oracle_fidelity(size, g, delta) - product) < 1e-10


@pytest.mark.parametrize("size", [4, 6])
@pytest.mark.parametrize("g", [0.5, 1.0, 1.5, 2.0])
@pytest.mark.parametrize("delta", [0.05, 0.1, 0.3])
def test_small_chain_grid(size, g, delta):
    # the full N in {4..12} grid runs in the acceptance suite
    product = log_fidelity(ChainSpec(size, g, delta)).f
    assert abs(ed_oracle_fidelity(size, g, delta) - product) < 1e-10


def test_sparse_path_matches_dense_path():
    # N=12 goes through Lanczos, N=6 through the dense solver
    product = log_fidelity(ChainSpec(12, 0.5, 0.3)).f
    assert abs(ed_oracle_fidelity(12, 0.5, 0.3) - product) < 1e-10


def test_deterministic():
    a = ed_oracle_fidelity(10, 1.0, 0.1)
    b = ed_oracle_fidelity(10, 1.0, 0.1)
    assert a == b


def test_size_cap_is_resource_error():
    with pytest.raises(ResourceError):
        ed_oracle_fidelity(14, 1.0, 0.1)


def test_odd_size_rejected():
    with pytest.raises(DomainError):
        ed_oracle_fidelity(7, 1.0, 0.1)


def test_weak_field_rejected():
    with pytest.raises(DomainError, match="0.3"):
        ed_oracle_fidelity(8, 0.1, 0.05)


def test_degenerate_sector_raises_precision_error(monkeypatch):
    # no in-domain parameters degenerate the even sector, so feed the
    # solver a doctored Hamiltonian to exercise the guard
    import scipy.sparse as sparse

    from ising_fidelity import ed

    monkeypatch.setattr(
        ed, "_even_sector_hamiltonian", lambda n, g: sparse.eye(8, format="csr")
    )
    with pytest.raises(PrecisionError):
        ed_oracle_fidelity(4, 1.0, 0.1)
