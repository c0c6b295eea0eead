"""Functional inequalities for stable-like operators ``a(x) Delta^(alpha/2)`` on the line.

Submodules
----------
special      constants of the stable kernel
measure      weights ``a`` and their invariant measures ``dx / a``
green        Green function of the killed stable process
orlicz       N-functions, gauge and Orlicz norms
criteria     inequality classification and constant bounds
fractional   fractional Laplacian, Levy-type operator, quadratic forms
simulate     Monte Carlo engine
suites       randomised property suites
cli          command-line interface
"""

from .criteria import ClassifyOptions, CriterionReport, Outcome, classify
from .measure import InfiniteMassError, TailHint, Weight
from .orlicz import NFunction
from .special import constants

__version__ = "0.1.0"

__all__ = ["ClassifyOptions", "CriterionReport", "Outcome", "classify",
           "InfiniteMassError", "TailHint", "Weight", "NFunction", "constants",
           "__version__"]
