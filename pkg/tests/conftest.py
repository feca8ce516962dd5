"""Shared fixtures: small codes, channel models and seeded generators."""

import json
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "engine"))

from architectures.codes import augmented_code, local_global_code
from architectures.connection import ConnectionMap
from density.channel import ChannelModel
from density.construct import bhattacharyya_construct
from polar.profile import CodeProfile, SystematicProfile

BEC_ORDER_N3 = (8, 7, 6, 4, 5, 3, 2, 1)


@pytest.fixture
def bec_half():
    return ChannelModel.bec(0.5)


@pytest.fixture
def awgn_model():
    """Eb/N0 = 2 dB at rate 1/2."""
    return ChannelModel.awgn(2.0, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def profile_n3():
    """BEC(0.5) design, N=8, K=4: A = {4, 6, 7, 8}."""
    return CodeProfile.from_order(BEC_ORDER_N3, 4)


@pytest.fixture
def systematic_n3(profile_n3):
    return SystematicProfile(base=profile_n3)


@pytest.fixture
def inner_order_n4():
    return bhattacharyya_construct(0.5, 4).reliability_order()


@pytest.fixture
def four_link_connection():
    """Outer N0=4 onto inner positions 2, 4, 6, 7 of one inner code."""
    return ConnectionMap.from_triples([(1, 1, 2), (2, 1, 4), (3, 1, 6), (4, 1, 7)])


@pytest.fixture
def small_augmented(inner_order_n4):
    """Outer N0=4, K0=2 on an N=16 inner code with K1=6."""
    outer = CodeProfile.from_order(bhattacharyya_construct(0.5, 2).reliability_order(), 2)
    return augmented_code(outer, inner_order_n4, 6)


@pytest.fixture
def small_local_global(profile_n3, inner_order_n4):
    """Outer N0=8, K_a=4 split over two N=16 inner codes with K_b=4 each."""
    return local_global_code(profile_n3, inner_order_n4, [4, 4], "example1")


@pytest.fixture
def workdir(tmp_path):
    return tmp_path


@pytest.fixture
def write_config(workdir):
    """Write an architecture config into the workdir and return its name."""

    def _write(name: str, **fields) -> str:
        (workdir / name).write_text(json.dumps({"version": 1, **fields}))
        return name

    return _write


@pytest.fixture
def tiny_augmented_config(write_config):
    return write_config(
        "tiny_augmented.json",
        arch="augmented",
        M=1,
        n0=2,
        n_inner=[4],
        R0=0.5,
        K_b=[6],
        design={"snr_db": 2.0, "s": 1, "t": 2},
        inner={"snr_db": 2.0},
    )


@pytest.fixture
def tiny_local_global_config(write_config):
    return write_config(
        "tiny_lg.json",
        arch="local-global",
        M=2,
        n0=3,
        n_inner=[4, 4],
        R0=0.5,
        K_b=[4, 4],
        connection="example1",
        design={"snr_db": 2.0, "s": 1, "t": 2},
        inner={"snr_db": 2.0},
    )
