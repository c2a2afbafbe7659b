# -*- coding: utf-8 -*-

import json
import logging


class CrystalWalkException(Exception):
    """Base exception"""

    exit_code = 1


# Error Logging Control
class SuppressStacktrace(Exception):
    """Mixin that will suppress stacktrace logging"""

    _cw_suppress_stacktrace = True


class ErrorLogLevelError(Exception):
    """Mixin to log an exception at the ERROR level"""

    _cw_error_log_level = logging.ERROR


class ErrorLogLevelWarning(Exception):
    """Mixin to log an exception at the WARNING level"""

    _cw_error_log_level = logging.WARNING


# Parameters
class ParameterError(CrystalWalkException, ErrorLogLevelWarning, SuppressStacktrace):
    """Invalid parameters, flags or walk signatures"""

    exit_code = 2


# Geometry
class ShapeError(CrystalWalkException):
    """An edge set is not a valid shape"""

    pass


class GeometryError(CrystalWalkException):
    """A loop system is not simple and disjoint up to touches"""

    pass


class DomainError(CrystalWalkException):
    """An operation was called outside of its domain"""

    pass


# Computation
class BudgetExceededError(CrystalWalkException, ErrorLogLevelWarning, SuppressStacktrace):
    """Enumeration refused because its size bound exceeds the configured budget

    Args:
        bound: The computed upper bound on the number of objects
        budget: The configured cap
    """

    exit_code = 3

    def __init__(self, message, bound=None, budget=None):
        super(BudgetExceededError, self).__init__(message)
        self.bound = bound
        self.budget = budget


class SolverError(CrystalWalkException, ErrorLogLevelError):
    """Corrector solve did not reach the requested residual"""

    def __init__(self, message, residual=None):
        super(SolverError, self).__init__(message)
        self.residual = residual


class EstimationError(CrystalWalkException, ErrorLogLevelWarning):
    """Not enough data to form an estimate"""

    pass


class VerificationFailure(CrystalWalkException, ErrorLogLevelError, SuppressStacktrace):
    """An identity check failed

    Args:
        suite: Name of the suite containing the failing check
        locus: JSON-serializable description of the failing object
    """

    exit_code = 4

    def __init__(self, message, suite=None, locus=None):
        super(VerificationFailure, self).__init__(message)
        self.suite = suite
        self.locus = locus


def parse_exception_as_json(exc):
    """Format an exception as the JSON object written to stderr on failure

    The object has the form::

        {
            "message": "",
            "arguments": [],
            "attributes": {}
        }

    where ``attributes`` carries fields such as the ``locus`` of a
    :class:`VerificationFailure`. Values that are not JSON-serializable are written
    as strings.

    Args:
        exc (Exception): The exception to format

    Raises:
        ValueError: If the value passed in is not an Exception.

    Returns:
        str: A JSON string with sorted keys
    """
    if not isinstance(exc, Exception):
        raise ValueError("Attempted to parse a non-exception as JSON.")

    return json.dumps(
        {
            "message": str(exc),
            "arguments": [_jsonify_value(arg) for arg in exc.args],
            "attributes": {key: _jsonify_value(value) for key, value in exc.__dict__.items()},
        },
        sort_keys=True,
    )


def _jsonify_value(value):
    try:
        json.dumps(value)
        return value
    except (TypeError, ValueError):
        return str(value)
