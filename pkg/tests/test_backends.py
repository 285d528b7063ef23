"""Compiled-kernel / pure-Python parity: identical outputs, identical
operation counts, identical sweep sample streams."""

import random

import numpy as np
import pytest

from nttmul import backend
from nttmul.nttcore import OpCounter, Polynomial, intt_gs_scaled, ntt_ct
from nttmul.params import build_plan
from nttmul.polymul import polymul_fused, polymul_ntt

needs_native = pytest.mark.skipif(not backend.native_available(),
                                  reason="compiled kernels not built")


@pytest.fixture
def restore_backend():
    yield
    backend.set_backend("auto")


def test_python_backend_selectable(restore_backend):
    backend.set_backend("python")
    assert backend.active() == "python"
    assert backend.kernels().NATIVE is False


@needs_native
def test_native_backend_selectable(restore_backend):
    backend.set_backend("native")
    assert backend.active() == "native"
    assert backend.kernels().NATIVE is True


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        backend.set_backend("gpu")


def _run_all(plan, a, b):
    """Transform roundtrip + both product pipelines + their counters."""
    p = Polynomial.from_list(a)
    ctr_t = OpCounter()
    intt_gs_scaled(ntt_ct(p, plan, ctr_t), plan, ctr_t)
    ctr_m = OpCounter()
    prod = polymul_ntt(a, b, plan, ctr_m)
    ctr_f = OpCounter()
    fused = polymul_fused(a, b, plan, ctr_f)
    return p.coeffs, prod, fused, ctr_t, ctr_m, ctr_f


@needs_native
@pytest.mark.parametrize("n,bits", [(4, 12), (64, 28), (256, 30), (256, 62)])
def test_backend_outputs_and_counts_identical(restore_backend, n, bits):
    plan = build_plan(n, bits=bits, seed=0)
    rng = random.Random(n ^ bits)
    a = [rng.randrange(plan.q) for _ in range(n)]
    b = [rng.randrange(plan.q) for _ in range(n)]
    backend.set_backend("python")
    py = _run_all(plan, a, b)
    backend.set_backend("native")
    nat = _run_all(plan, a, b)
    for x, y in zip(py[:3], nat[:3]):
        assert np.array_equal(x, y)
    for cx, cy in zip(py[3:], nat[3:]):
        assert (cx.modmul, cx.modadd_sub, cx.half_scalings,
                cx.twiddle_loads, cx.negations) == \
            (cy.modmul, cy.modadd_sub, cy.half_scalings,
             cy.twiddle_loads, cy.negations)


@needs_native
@pytest.mark.parametrize("bits", [28, 30, 62])
def test_sweep_streams_identical(bits):
    t_py = np.zeros((3, 4), dtype=np.uint64)
    t_nat = np.zeros((3, 4), dtype=np.uint64)
    m_py, f_py = backend.get("python").sweep_random(bits, 5000, 42, t_py)
    m_nat, f_nat = backend.get("native").sweep_random(bits, 5000, 42, t_nat)
    assert m_py == m_nat == 0
    assert f_py is None and f_nat is None
    assert np.array_equal(t_py, t_nat)


@needs_native
def test_exhaustive_sweep_identical():
    t_py = np.zeros((3, 4), dtype=np.uint64)
    t_nat = np.zeros((3, 4), dtype=np.uint64)
    m_py, _ = backend.get("python").sweep_exhaustive(3, 63, t_py)
    m_nat, _ = backend.get("native").sweep_exhaustive(3, 63, t_nat)
    assert m_py == m_nat == 0
    assert np.array_equal(t_py, t_nat)


@needs_native
def test_mulmod_loop_sinks_agree():
    q = (1 << 30) - 35
    rng = random.Random(0)
    a = np.array([rng.randrange(q) for _ in range(256)], dtype=np.uint64)
    b = np.array([rng.randrange(q) for _ in range(256)], dtype=np.uint64)
    from nttmul.modarith import Modulus
    mod = Modulus(q)
    for variant in ("builtin", "classical", "dhem", "proposed"):
        mode, mu, s_in, s_out = mod.reduction_params(variant)
        s_py = backend.get("python").mulmod_loop(a, b, q, mode, mu,
                                                 s_in, s_out, 2)
        s_nat = backend.get("native").mulmod_loop(a, b, q, mode, mu,
                                                  s_in, s_out, 2)
        assert s_py == s_nat
