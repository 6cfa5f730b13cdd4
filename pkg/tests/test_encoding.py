"""
有限域变量的布尔编码测试
"""
import itertools

import pytest
from hypothesis import given, strategies as st

from splv.core.conformance import mapping_from_pairs
from splv.lang.predicate import TRUE, eq, evaluate
from splv.lang.variables import Configuration, VarDecl, all_assignments
from splv.qbf.circuit import TRUE as TRUE_REF
from splv.qbf.encoding import BoolEncoding, bit_width, encode_config_space, encode_mapping, encode_predicate
from splv.utils.errors import ScopeError, ValidityError
from tests.model_strategies import predicates, scopes


def bit_assignments(enc):
    names = enc.input_names()
    for bits in itertools.product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def test_bit_width():
    assert [bit_width(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_two_value_domain_uses_one_bit_without_validity_constraint():
    enc = encode_config_space([VarDecl("x", ("a", "b"))])
    assert enc.input_names() == ["x#0"]
    assert enc.validity() == TRUE_REF


def test_three_value_domain_excludes_one_pattern():
    enc = encode_config_space([VarDecl("x", ("a", "b", "c"))])
    valid = [bits for bits in bit_assignments(enc) if enc.circuit.evaluate(enc.validity(), bits)]
    assert len(valid) == 3
    assert {"x#0": True, "x#1": True} not in valid


def test_single_value_domain_has_no_bits():
    enc = encode_config_space([VarDecl("x", ("only",))])
    assert enc.input_names() == []
    assert enc.decode({}) == Configuration([("x", "only")])


def test_encode_decode_round_trip():
    scope = [VarDecl("x", ("a", "b", "c")), VarDecl("y", ("p", "q", "r", "s", "t"))]
    enc = encode_config_space(scope, prefix="x:")
    assert enc.input_names()[0] == "x:x#0"
    for env in all_assignments(scope):
        config = Configuration(env)
        assert enc.decode(enc.encode(config)) == config


def test_decode_rejects_unused_pattern():
    enc = encode_config_space([VarDecl("x", ("a", "b", "c"))])
    with pytest.raises(ValidityError):
        enc.decode({"x#0": True, "x#1": True})


def test_unknown_variable():
    enc = encode_config_space([VarDecl("x", ("a", "b"))])
    with pytest.raises(ScopeError):
        enc.value_is("y", "a")


def test_constant_and_literal_predicates():
    enc = encode_config_space([VarDecl("x", ("a", "b"))])
    assert encode_predicate(TRUE, enc) == TRUE_REF
    ref = encode_predicate(eq("x", "b"), enc)
    assert abs(ref) == enc.circuit.input("x#0")


@given(st.data())
def test_predicate_circuit_agrees_with_evaluation(data):
    scope = data.draw(scopes(max_vars=3, max_values=4))
    p = data.draw(predicates(scope))
    enc = BoolEncoding(scope)
    root = encode_predicate(p, enc)
    for env in all_assignments(scope):
        assert enc.circuit.evaluate(root, enc.encode(env)) == evaluate(p, env)


def test_identity_mapping_is_equality_under_validity():
    scope = (VarDecl("m", ("a", "b")),)
    configs = [Configuration([("m", v)]) for v in ("a", "b")]
    phi = mapping_from_pairs("F", scope, scope, configs, configs, [(c, c) for c in configs])
    enc_d = BoolEncoding(scope, prefix="x:")
    enc_r = BoolEncoding(scope, enc_d.circuit, prefix="y:")
    root = encode_mapping(phi, enc_d, enc_r)
    for x, y in itertools.product((False, True), repeat=2):
        assert enc_d.circuit.evaluate(root, {"x:m#0": x, "y:m#0": y}) == (x == y)


def test_empty_image_is_falsifiable_at_that_design_configuration():
    scope = (VarDecl("m", ("a", "b")),)
    configs = [Configuration([("m", v)]) for v in ("a", "b")]
    phi = mapping_from_pairs("F", scope, scope, configs, configs, [(configs[0], configs[0])])
    enc_d = BoolEncoding(scope, prefix="x:")
    enc_r = BoolEncoding(scope, enc_d.circuit, prefix="y:")
    root = encode_mapping(phi, enc_d, enc_r)
    assert not any(enc_d.circuit.evaluate(root, {"x:m#0": True, "y:m#0": y}) for y in (False, True))
    assert enc_d.circuit.evaluate(root, {"x:m#0": False, "y:m#0": False})
