# -*- coding: utf-8 -*-
"""Result objects written into crystalwalk artifacts

Geometry types (:class:`~crystalwalk.shapes.Shape`, :class:`~crystalwalk.loops.Loop`,
:class:`~crystalwalk.lattice.HeightFunction`) live with their operations; this module
holds the reports computed from them.
"""

from fractions import Fraction

__all__ = [
    "BaseModel",
    "GraphSummary",
    "DiffusivityReport",
    "DiffusivityEstimate",
    "StripStatistics",
    "GateReport",
    "SimplexReport",
    "CountingReport",
    "TauReport",
    "SuiteResult",
    "VerificationReport",
    "Artifact",
]


class BaseModel(object):
    schema = None


class GraphSummary(BaseModel):
    schema = "GraphSummarySchema"

    def __init__(
        self,
        p=None,
        n=None,
        shape_count=None,
        edge_count=None,
        connected=None,
        min_degree=None,
        max_degree=None,
        strategy=None,
    ):
        self.p = p
        self.n = n
        self.shape_count = shape_count
        self.edge_count = edge_count
        self.connected = connected
        self.min_degree = min_degree
        self.max_degree = max_degree
        self.strategy = strategy

    def __str__(self):
        return "%s%s: |S|=%s, |M|=%s" % (self.p, self.n, self.shape_count, self.edge_count)

    def __repr__(self):
        return "<GraphSummary: p=%s, n=%s, shape_count=%s, edge_count=%s>" % (
            self.p,
            self.n,
            self.shape_count,
            self.edge_count,
        )


class DiffusivityReport(BaseModel):
    """Exact (or high-precision) diffusivity of the average-height process

    ``sigma2_Xhat = sigma2_Y + p_same_shape`` holds by construction.
    """

    schema = "DiffusivityReportSchema"

    def __init__(
        self,
        p=None,
        n=None,
        shape_count=None,
        edge_count=None,
        sigma2_Y=None,
        p_same_shape=None,
        p_outside_P=None,
        sigma2_Xhat=None,
        limit_value=None,
        gap=None,
        solver_mode=None,
        residual=None,
    ):
        self.p = p
        self.n = n
        self.shape_count = shape_count
        self.edge_count = edge_count
        self.sigma2_Y = sigma2_Y
        self.p_same_shape = p_same_shape
        self.p_outside_P = p_outside_P
        self.sigma2_Xhat = sigma2_Xhat
        self.limit_value = limit_value
        self.gap = gap
        self.solver_mode = solver_mode
        self.residual = residual

    def __str__(self):
        return "%s%s: sigma2=%s" % (self.p, self.n, self.sigma2_Xhat)

    def __repr__(self):
        return "<DiffusivityReport: p=%s, n=%s, sigma2_Xhat=%s, gap=%s>" % (
            self.p,
            self.n,
            self.sigma2_Xhat,
            self.gap,
        )

    @property
    def exact(self):
        return isinstance(self.sigma2_Xhat, Fraction)

    def csv_row(self):
        return [
            self.p[0],
            self.p[1],
            self.n[0],
            self.n[1],
            self.shape_count,
            self.edge_count,
            self.sigma2_Xhat,
            self.gap,
            self.p_same_shape,
            self.p_outside_P,
        ]


class DiffusivityEstimate(BaseModel):
    """Monte Carlo estimate of Var(Xhat_n)/n with its standard error"""

    schema = "DiffusivityEstimateSchema"

    def __init__(
        self,
        p=None,
        n=None,
        estimate=None,
        standard_error=None,
        runs=None,
        steps=None,
        burn_in=None,
        batch_window=None,
        batch_count=None,
        same_shape_frequency=None,
        run_estimates=None,
    ):
        self.p = p
        self.n = n
        self.estimate = estimate
        self.standard_error = standard_error
        self.runs = runs
        self.steps = steps
        self.burn_in = burn_in
        self.batch_window = batch_window
        self.batch_count = batch_count
        self.same_shape_frequency = same_shape_frequency
        self.run_estimates = run_estimates or []

    def __repr__(self):
        return "<DiffusivityEstimate: p=%s, n=%s, estimate=%s, standard_error=%s>" % (
            self.p,
            self.n,
            self.estimate,
            self.standard_error,
        )


class StripStatistics(BaseModel):
    """Strip-width, strip-position and disjointness statistics of uniform loops"""

    schema = "StripStatisticsSchema"

    def __init__(
        self,
        p=None,
        n=None,
        samples=None,
        eps=None,
        narrow_fractions=None,
        ks_statistic=None,
        ks_pvalue=None,
        disjoint_fraction=None,
        disjoint_standard_error=None,
    ):
        self.p = p
        self.n = n
        self.samples = samples
        self.eps = eps or []
        self.narrow_fractions = narrow_fractions or []
        self.ks_statistic = ks_statistic
        self.ks_pvalue = ks_pvalue
        self.disjoint_fraction = disjoint_fraction
        self.disjoint_standard_error = disjoint_standard_error

    def __repr__(self):
        return "<StripStatistics: p=%s, n=%s, samples=%s>" % (self.p, self.n, self.samples)


class GateReport(BaseModel):
    schema = "GateReportSchema"

    def __init__(
        self,
        x=None,
        y=None,
        eps=None,
        bound=None,
        samples=None,
        fraction=None,
        standard_error=None,
        chebyshev_lower_bound=None,
        step_probabilities=None,
    ):
        self.x = x
        self.y = y
        self.eps = eps
        self.bound = bound
        self.samples = samples
        self.fraction = fraction
        self.standard_error = standard_error
        self.chebyshev_lower_bound = chebyshev_lower_bound
        self.step_probabilities = step_probabilities or []

    def __repr__(self):
        return "<GateReport: x=%s, y=%s, eps=%s, fraction=%s>" % (
            self.x,
            self.y,
            self.eps,
            self.fraction,
        )


class SimplexReport(BaseModel):
    schema = "SimplexReportSchema"

    def __init__(
        self,
        g=None,
        samples=None,
        integral=None,
        integral_standard_error=None,
        integral_exact=None,
        ordering_probability=None,
        ordering_standard_error=None,
        ordering_exact=None,
        conditional=None,
        conditional_standard_error=None,
        conditional_exact=None,
    ):
        self.g = g
        self.samples = samples
        self.integral = integral
        self.integral_standard_error = integral_standard_error
        self.integral_exact = integral_exact
        self.ordering_probability = ordering_probability
        self.ordering_standard_error = ordering_standard_error
        self.ordering_exact = ordering_exact
        self.conditional = conditional
        self.conditional_standard_error = conditional_standard_error
        self.conditional_exact = conditional_exact

    def __repr__(self):
        return "<SimplexReport: g=%s, conditional=%s, exact=%s>" % (
            self.g,
            self.conditional,
            self.conditional_exact,
        )


class CountingReport(BaseModel):
    schema = "CountingReportSchema"

    def __init__(
        self,
        p=None,
        n=None,
        samples=None,
        disjoint_samples=None,
        alternating_fraction=None,
        standard_error=None,
        expected=None,
    ):
        self.p = p
        self.n = n
        self.samples = samples
        self.disjoint_samples = disjoint_samples
        self.alternating_fraction = alternating_fraction
        self.standard_error = standard_error
        self.expected = expected

    def __repr__(self):
        return "<CountingReport: p=%s, n=%s, alternating_fraction=%s, expected=%s>" % (
            self.p,
            self.n,
            self.alternating_fraction,
            self.expected,
        )


class TauReport(BaseModel):
    """Outcome of the reflection-involution check at one shape"""

    schema = "TauReportSchema"

    def __init__(self, shape=None, pairs=None, total=None, passed=None, failures=None):
        self.shape = shape
        self.pairs = pairs
        self.total = total
        self.passed = passed
        self.failures = failures or []

    def __repr__(self):
        return "<TauReport: pairs=%s, total=%s, passed=%s>" % (
            self.pairs,
            self.total,
            self.passed,
        )


class SuiteResult(BaseModel):
    schema = "SuiteResultSchema"

    def __init__(self, name=None, passed=None, checked=None, details=None, locus=None):
        self.name = name
        self.passed = passed
        self.checked = checked
        self.details = details or {}
        self.locus = locus

    def __repr__(self):
        return "<SuiteResult: name=%s, passed=%s, checked=%s>" % (
            self.name,
            self.passed,
            self.checked,
        )


class VerificationReport(BaseModel):
    schema = "VerificationReportSchema"

    def __init__(self, p=None, n=None, suites=None):
        self.p = p
        self.n = n
        self.suites = suites or []

    def __repr__(self):
        return "<VerificationReport: p=%s, n=%s, suites=%s>" % (
            self.p,
            self.n,
            [s.name for s in self.suites],
        )

    @property
    def passed(self):
        return all(suite.passed for suite in self.suites)


class Artifact(BaseModel):
    """Self-describing envelope around a command result"""

    schema = "ArtifactSchema"

    def __init__(
        self,
        command=None,
        version=None,
        config=None,
        seed=None,
        result=None,
        duration=None,
    ):
        self.command = command
        self.version = version
        self.config = config or {}
        self.seed = seed
        self.result = result
        self.duration = duration

    def __repr__(self):
        return "<Artifact: command=%s, version=%s, seed=%s>" % (
            self.command,
            self.version,
            self.seed,
        )
