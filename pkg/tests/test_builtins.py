"""Builtin value semantics shared by both evaluators."""

from choreo.builtins import Builtins, Console, display, java_div, java_rem, value_equals
from choreo.distributed import LocalInterpreter
from choreo.local import LBinary, LLit, LUnit
from choreo.runtime import (
    UNIT, ChannelRegistry, ChoreoRuntimeError, EnumV, ExecutionContext, ListV,
    OptionalV, is_unit,
)


def test_java_division_truncates_toward_zero():
    assert java_div(3, 2) == 1
    assert java_div(-3, 2) == -1
    assert java_div(3, -2) == -1
    assert java_div(-3, -2) == 1
    assert java_rem(-3, 2) == -1
    assert java_rem(3, -2) == 1
    try:
        java_div(1, 0)
    except ChoreoRuntimeError:
        pass
    else:
        raise AssertionError("division by zero must fail")


def test_unit_operand_binops_yield_unit():
    interp = LocalInterpreter([], "A", ChannelRegistry(ExecutionContext(None)),
                              Console(), ExecutionContext(None))
    out = interp.eval(None, LBinary(LUnit(), "<=", LLit(3)))
    assert is_unit(out)
    out = interp.eval(None, LBinary(LLit(1), "+", LUnit()))
    assert is_unit(out)


def test_value_equality_is_structural_for_prelude_values():
    assert value_equals(ListV([1, 2]), ListV([1, 2]))
    assert not value_equals(ListV([1]), ListV([2]))
    assert value_equals(OptionalV(True, "x"), OptionalV(True, "x"))
    assert not value_equals(OptionalV(False), OptionalV(True, "x"))
    assert value_equals(EnumV("C", "GO"), EnumV("C", "GO"))
    assert not value_equals(EnumV("C", "GO"), EnumV("C", "STOP"))
    assert value_equals(1, 1.0)  # numeric comparison crosses int/float
    assert not value_equals(True, 1)


def test_display_forms():
    assert display(True) == "true"
    assert display(False) == "false"
    assert display(UNIT) == "unit"
    assert display(EnumV("Choice", "GO")) == "GO"
    assert display(ListV([1, "a"])) == "[1, a]"


def test_string_methods():
    b = Builtins(Console())
    hit, value = b.try_call_method("hello", "reverse", [])
    assert hit and value == "olleh"
    hit, value = b.try_call_method("hello", "substring", [1, 3])
    assert hit and value == "el"
    hit, value = b.try_call_method("in:guide", "startsWith", ["in:"])
    assert hit and value is True
    hit, value = b.try_call_method("abc", "length", [])
    assert hit and value == 3


def test_optional_if_present_invokes_consumer():
    seen = []
    b = Builtins(Console(), invoke=lambda recv, m, args: seen.append((recv, m, args)))
    b.try_call_method(OptionalV(True, 9), "ifPresent", ["consumer"])
    assert seen == [("consumer", "accept", [9])]
    b.try_call_method(OptionalV(False), "ifPresent", ["consumer"])
    assert len(seen) == 1


def test_iterator_protocol():
    b = Builtins(Console())
    lst = ListV([10, 20])
    hit, it = b.try_call_method(lst, "iterator", [])
    assert hit
    assert b.try_call_method(it, "hasNext", [])[1] is True
    assert b.try_call_method(it, "next", [])[1] == 10
    assert b.try_call_method(it, "next", [])[1] == 20
    assert b.try_call_method(it, "hasNext", [])[1] is False


def test_math_statics():
    b = Builtins(Console())
    assert b.try_static_call("Math", "floor", [3])[1] == 3.0
    assert b.try_static_call("Math", "min", [4, 2])[1] == 2
    assert b.try_static_call("Math", "pow", [10, 3])[1] == 1000
    assert b.try_static_call("Double", "valueOf", [1.5])[1] == 1.5
