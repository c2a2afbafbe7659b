# -*- coding: utf-8 -*-
"""Module to simplify report comparisons.

.. warning::
    This module was created to simplify testing. As such, it's not recommended for
    production use.

Result objects keep their fields in ``__dict__``; geometry objects use slots, so
both are read through :func:`_fields`.
"""
from functools import partial

import crystalwalk.test
from crystalwalk.lattice import HeightFunction
from crystalwalk.loops import Loop
from crystalwalk.models import (
    DiffusivityEstimate,
    DiffusivityReport,
    GraphSummary,
    SuiteResult,
    TauReport,
    VerificationReport,
)
from crystalwalk.shapes import Shape

__all__ = [
    "assert_shape_equal",
    "assert_loop_equal",
    "assert_height_function_equal",
    "assert_graph_summary_equal",
    "assert_diffusivity_report_equal",
    "assert_diffusivity_estimate_equal",
    "assert_suite_result_equal",
    "assert_tau_report_equal",
    "assert_verification_report_equal",
]


def _assert(condition, message):
    """Helper to ensure AssertionError is always raised.

    If assertions are disabled (python -O) then using these assertions in production
    would result in them always returning True.
    """
    if not condition:
        raise AssertionError(message)


def _fields(obj):
    slots = getattr(type(obj), "__slots__", None)
    if slots is not None:
        return list(slots)
    return list(obj.__dict__.keys())


def _assert_equal(obj1, obj2, expected_type=None, deep_fields=None):
    """Assert that two objects are equal field by field.

    Args:
        obj1: The first object
        obj2: The second object
        expected_type: Both objects will be checked (using isinstance) against this type
        deep_fields: A dictionary of field name to comparison function

    Raises:
        AssertionError: A comparison assertion failed
    """
    if obj1 is None and obj2 is None:
        return

    deep_fields = deep_fields or {}

    if expected_type is not None:
        _assert(
            isinstance(obj1, expected_type),
            "type mismatch for obj1: expected '{0}' but was '{1}'".format(
                expected_type, type(obj1)
            ),
        )
        _assert(
            isinstance(obj2, expected_type),
            "type mismatch for obj2: expected '{0}' but was '{1}'".format(
                expected_type, type(obj2)
            ),
        )
    _assert(type(obj1) is type(obj2), "obj1 and obj2 are not the same type.")

    for key in _fields(obj1):
        _assert(hasattr(obj2, key), "obj2 does not have an attribute '%s'" % key)

        if key not in deep_fields:
            _assert(
                getattr(obj1, key) == getattr(obj2, key),
                "%s was not the same (%s, %s)" % (key, getattr(obj1, key), getattr(obj2, key)),
            )
            continue

        nested1 = getattr(obj1, key)
        nested2 = getattr(obj2, key)
        if isinstance(nested1, list) and isinstance(nested2, list):
            _assert(len(nested1) == len(nested2), "Length of list field %s was different" % key)
            for item1, item2 in zip(nested1, nested2):
                deep_fields[key](item1, item2)
        else:
            deep_fields[key](nested1, nested2)


def _assert_wrapper(obj1, obj2, expected_type=None, do_raise=False, **kwargs):
    """Wrapper that will translate AssertionError to a boolean.

    Inside a test run the AssertionError is re-raised so the failing field is
    reported; elsewhere the comparison returns False unless ``do_raise`` is set.

    Returns:
        bool: True if the comparison was equal
    """
    try:
        _assert_equal(obj1, obj2, expected_type=expected_type, **kwargs)
    except AssertionError:
        if do_raise or hasattr(crystalwalk.test, "_running_tests"):
            raise
        return False

    return True


assert_shape_equal = partial(_assert_wrapper, expected_type=Shape)
assert_loop_equal = partial(_assert_wrapper, expected_type=Loop)
assert_height_function_equal = partial(_assert_wrapper, expected_type=HeightFunction)
assert_graph_summary_equal = partial(_assert_wrapper, expected_type=GraphSummary)
assert_diffusivity_report_equal = partial(_assert_wrapper, expected_type=DiffusivityReport)
assert_diffusivity_estimate_equal = partial(_assert_wrapper, expected_type=DiffusivityEstimate)
assert_suite_result_equal = partial(_assert_wrapper, expected_type=SuiteResult)


def assert_tau_report_equal(obj1, obj2, do_raise=False):
    return _assert_wrapper(
        obj1,
        obj2,
        expected_type=TauReport,
        deep_fields={"shape": partial(assert_shape_equal, do_raise=True)},
        do_raise=do_raise,
    )


def assert_verification_report_equal(obj1, obj2, do_raise=False):
    return _assert_wrapper(
        obj1,
        obj2,
        expected_type=VerificationReport,
        deep_fields={"suites": partial(assert_suite_result_equal, do_raise=True)},
        do_raise=do_raise,
    )
