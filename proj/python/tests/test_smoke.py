import pytest
from hypothesis import given, settings, strategies as st

import idring


def test_basic_normal_forms():
    assert idring.normalize("d*i") == "1"
    assert idring.normalize("i*d") == "1 - e"
    assert idring.normalize("e*i") == "0"


def test_prove_with_witness():
    equal, diff = idring.prove("i*f*d", "f - e*f - i*(D f)", ring="laurentlog", defs={"f": "x^-1"})
    assert equal and diff == "0"
    equal, diff = idring.prove("d*i", "i*d")
    assert not equal and diff == "e"


def test_confluence_report():
    rep = idring.confluence("ido-phi")
    assert rep["ambiguities"] == 54
    assert rep["unresolved"] == 0
    assert idring.confluence("ido-defining")["unresolved"] >= 1
    assert "ido-phi-mult" in idring.systems()


def test_calculus_helpers():
    assert idring.taylor("ln(x)", 1, ring="laurentlog") == ("0", "1 + ln(x)", "-1")
    assert idring.ring_op("integrate", "x^-1", ring="laurentlog") == "ln(x)"
    assert idring.x_n(2) == "1/2*x^2"


def test_errors():
    with pytest.raises(ValueError):
        idring.normalize("d*(i")
    with pytest.raises(Exception):
        idring.normalize("d", ring="nope")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_derivative_inverts_integral(coeffs):
    poly = " + ".join(f"({c})*x^{k}" for k, c in enumerate(coeffs))
    op = f"d*i*({poly})"
    assert idring.prove(op, f"({poly})")[0]
