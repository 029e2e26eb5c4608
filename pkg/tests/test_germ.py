import json
import random

import pytest
from hypothesis import given, strategies as st

from bslab.germ import (
    NoetherianOperator,
    SpaceError,
    JetElement,
    apply_operator,
    jet_mul,
    load_space,
    dump_space,
    make_jet,
    make_space,
    member_of_J,
    noetherian_set,
    reconstruct,
    taylor_jet,
)
from bslab.polycore import groebner, normal_form
from bslab.sampling import random_polynomial

from conftest import polynomials

W3 = make_space(1, ["w^3"])
W12 = make_space(1, ["w1^2", "w2"], w_count=2)


def test_staircase_w3():
    assert W3.staircase == ((0,), (1,), (2,))
    assert W3.k == 3 and W3.max_order == 2


def test_staircase_reduced():
    assert make_space(1, ["w"]).staircase == ((0,),)


def test_staircase_two_w():
    assert W12.staircase == ((0, 0), (1, 0))
    assert W12.k is None


@pytest.mark.parametrize(
    "args,kwargs",
    [
        ((1, ["w + w^2"]), {}),
        ((1, ["w1*w2"]), {"w_count": 2}),
        ((1, ["z*w^2"]), {}),
        ((1, ["1"]), {}),
    ],
)
def test_make_space_errors(args, kwargs):
    with pytest.raises(SpaceError):
        make_space(*args, **kwargs)


def test_taylor_jet_examples():
    R = W3.ring
    assert taylor_jet(R.parse("z + 3*z*w + w^5"), W3).as_dict() == {
        (0,): R.parse("z"),
        (1,): R.parse("3*z"),
        (2,): R.zero(),
    }
    assert taylor_jet(R.parse("w^3"), W3).is_zero()
    assert taylor_jet(R.parse("w^2*z^2"), W3)[(2,)] == R.parse("2*z^2")


def test_jet_mul_examples():
    R = W3.ring
    j = lambda t: taylor_jet(R.parse(t), W3)
    assert jet_mul(j("w"), j("w^2")).is_zero()
    f = R.parse("z^2 + 2*z*w - w^2 + 7")
    assert jet_mul(j("z"), taylor_jet(f, W3)) == taylor_jet(R.parse("z") * f, W3)
    prod = jet_mul(j("1+w"), j("1-w"))
    assert prod.as_dict() == {(0,): R.one(), (1,): R.zero(), (2,): R.const(-2)}
    assert prod == j("1 - w^2")


def test_noetherian_sets():
    assert [op.alpha for op in noetherian_set(W3)] == [(0,), (1,), (2,)]
    assert [op.alpha for op in noetherian_set(make_space(1, ["w"]))] == [(0,)]
    assert [op.alpha for op in noetherian_set(W12)] == [(0, 0), (1, 0)]
    assert [op.order for op in noetherian_set(W3)] == [0, 1, 2]


def test_apply_operator_examples():
    R = W3.ring
    assert apply_operator(NoetherianOperator((1,)), R.parse("w*z"), W3) == R.parse("z")
    assert apply_operator(NoetherianOperator((0,)), R.parse("z^2 + w"), W3) == R.parse("z^2")
    assert apply_operator(NoetherianOperator((2,)), R.parse("w^3"), W3).is_zero()


def test_member_of_J_examples():
    R = W3.ring
    assert not member_of_J(R.parse("w"), W3, crosscheck=True)
    assert member_of_J(R.parse("w^3*(1+z)"), W3, crosscheck=True)
    assert member_of_J(W12.ring.parse("w1*w2"), W12, crosscheck=True)


def test_jet_rejects_w_coefficients():
    with pytest.raises(SpaceError):
        make_jet(W3, {(0,): W3.ring.parse("w")})


SPACES = [W3, W12, make_space(2, ["w^2"]), make_space(1, ["w1^2", "w1*w2", "w2^3"], w_count=2)]


@pytest.mark.parametrize("space", SPACES, ids=lambda s: ",".join(map(str, s.j_generators())))
def test_jet_ring_isomorphism(space):
    rng = random.Random(3)
    for _ in range(40):
        f = random_polynomial(rng, space.ring, 5, 4)
        g = random_polynomial(rng, space.ring, 5, 4)
        assert jet_mul(taylor_jet(f, space), taylor_jet(g, space)) == taylor_jet(f * g, space)


@pytest.mark.parametrize("space", SPACES, ids=lambda s: ",".join(map(str, s.j_generators())))
def test_kernel_identification(space):
    rng = random.Random(5)
    gb = groebner(space.j_ideal())
    for _ in range(40):
        f = random_polynomial(rng, space.ring, 6, 3)
        if rng.random() < 0.5:
            f = f * space.j_generators()[rng.randrange(len(space.j_exponents))]
        assert member_of_J(f, space) == normal_form(f, gb)[0].is_zero()


@pytest.mark.parametrize("space", SPACES, ids=lambda s: ",".join(map(str, s.j_generators())))
def test_defining_set_soundness(space):
    rng = random.Random(8)
    for g in space.j_generators():
        for _ in range(10):
            h = random_polynomial(rng, space.ring, 4, 3)
            assert member_of_J(g * h, space)


@given(polynomials(W12.ring, 4, 5))
def test_reconstruction(f):
    jet = taylor_jet(f, W12)
    assert taylor_jet(reconstruct(jet), W12) == jet
    assert member_of_J(f - reconstruct(jet), W12)


def test_space_file_roundtrip(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"z_vars": ["x", "y"], "w_vars": ["t"], "J": ["t^4"]}))
    space = load_space(path)
    assert space.z_names == ("x", "y") and space.k == 4
    dump_space(space, tmp_path / "t.json")
    assert load_space(tmp_path / "t.json") == space


def test_jet_json_roundtrip():
    jet = taylor_jet(W3.ring.parse("z + 3/2*z*w - w^2*z^3"), W3)
    data = jet.to_json()
    assert data == [[[0], "z"], [[1], "3/2*z"], [[2], "-2*z^3"]]
    assert JetElement.from_json(json.loads(json.dumps(data)), W3) == jet
