import pytest

from cdakit.model import (
    And,
    Atom,
    DSLSyntaxError,
    Implies,
    ModelError,
    Not,
    Parameter,
    SutModel,
    TestArray,
    UnsatisfiableModelError,
    evaluate,
    format_model,
    parse_model,
    validate_model,
)

SIMPLE = """
model "m";
param A : x | y ;
param B : p | q | r ;
"""


def test_running_example_shape(shop):
    assert shop.k == 4
    assert shop.sizes == (3, 2, 3, 4)
    assert len(shop.constraints) == 2
    assert shop.parameters[1].values == ("Domestic", "International")


def test_valid_and_invalid_cases(shop):
    assert shop.is_valid((0, 0, 0, 0))
    assert not shop.is_valid((0, 1, 0, 0))


def test_no_constraints_means_everything_valid():
    m = parse_model(SIMPLE)
    assert m.constraints == ()
    assert len(m.valid_rows()) == 6


def test_value_index_follows_declaration_order(shop):
    assert shop.value_index(3, "GiftCard") == 3
    assert shop.value_index(0, "$500") == 1
    assert shop.value_index(0, "2") == 2  # numeric fallback


def test_unknown_value_in_constraint():
    with pytest.raises(ModelError, match="unknown value"):
        parse_model(SIMPLE + "constraint B = s ;")


def test_unknown_parameter_in_constraint():
    with pytest.raises(ModelError, match="unknown parameter"):
        parse_model(SIMPLE + "constraint C = x ;")


def test_duplicate_parameter():
    with pytest.raises(ModelError, match="duplicate parameter"):
        parse_model(SIMPLE + "param A : u | v ;")


def test_domain_too_small():
    with pytest.raises(ModelError, match="at least two"):
        parse_model('model "m"; param A : x ;')


def test_duplicate_value():
    with pytest.raises(ModelError, match="duplicate value"):
        parse_model('model "m"; param A : x | x ;')


def test_syntax_error_position():
    with pytest.raises(DSLSyntaxError) as info:
        parse_model('model "m";\nparam A : x | y ;\nconstraint A = x && ;\n')
    assert info.value.line == 3
    assert info.value.column > 1


def test_contradiction_rejected():
    text = 'model "m"; param F1 : 0 | 1 ; constraint F1 = 0 ; constraint F1 = 1 ;'
    with pytest.raises(UnsatisfiableModelError):
        parse_model(text)
    m = parse_model(text, validate=False)
    with pytest.raises(UnsatisfiableModelError):
        validate_model(m)


def test_validate_ok(shop):
    validate_model(shop)
    validate_model(SutModel.from_domains([2, 2]))


def test_operator_precedence():
    m = parse_model(SIMPLE + "constraint A = x -> B = p || B = q && !(A = y) ;")
    phi = m.constraints[0]
    assert isinstance(phi, Implies)
    # && binds tighter than ||
    assert evaluate(phi, (0, 1))
    assert not evaluate(phi, (0, 2))
    assert evaluate(phi, (1, 2))


def test_implication_is_right_associative():
    m = parse_model(SIMPLE + "constraint A = x -> B = p -> B = q ;")
    phi = m.constraints[0]
    assert isinstance(phi.rhs, Implies)


def test_true_false_constants():
    m = parse_model(SIMPLE + "constraint true ;")
    assert len(m.valid_rows()) == 6
    with pytest.raises(UnsatisfiableModelError):
        parse_model(SIMPLE + "constraint false ;")


def test_comments_and_quoted_names(shop):
    m = parse_model('# c\nmodel "q";\nparam "Total Price" : "$50" | "a b" ; # trailing\n')
    assert m.parameters[0].name == "Total Price"
    assert m.parameters[0].values == ("$50", "a b")


def test_round_trip(shop):
    again = parse_model(format_model(shop))
    assert again == shop


def test_round_trip_nested():
    m = parse_model(SIMPLE + "constraint !(A = x && (B = p || B != q)) -> A = y ;")
    assert parse_model(format_model(m)) == m


def test_test_array_rejects_invalid_rows(shop):
    with pytest.raises(ModelError, match="violates"):
        TestArray(shop, [(0, 1, 0, 0)])
    with pytest.raises(ModelError):
        TestArray(shop, [(0, 0, 0)])
    with pytest.raises(ModelError):
        TestArray(shop, [(0, 0, 0, 4)])


def test_test_array_masks(shop):
    a = TestArray(shop, [(0, 0, 0, 0), (1, 0, 0, 3), (0, 0, 0, 0)])
    assert a.mask(()) == 0b111
    assert a.mask(((0, 0),)) == 0b101
    assert a.mask(((0, 0), (3, 3))) == 0
    assert a.without(1).rows == ((0, 0, 0, 0), (0, 0, 0, 0))


def test_ast_evaluation():
    e = And((Atom(0, 1), Not(Atom(1, 0, negated=True))))
    assert evaluate(e, (1, 0))
    assert not evaluate(e, (1, 1))


def test_parameter_needs_two_values():
    with pytest.raises(ModelError):
        Parameter("x", ("a",))
