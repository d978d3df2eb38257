"""Numerical toolkit for algebras of generalized functions built from sequence spaces.

Sequences over a base algebra are measured through ``<<f>> = limsup
p(f_n)^{r_n}`` for a scale ``r``; moderate sequences modulo negligible ones
form the algebra.  Subpackages:

* :mod:`gfakit.basealg` expressions, jets, seminorms
* :mod:`gfakit.scale` scales and families of scales
* :mod:`gfakit.seqspace` sequences, ultranorms, classification
* :mod:`gfakit.embed` constants, delta sequences, convolution
* :mod:`gfakit.scalefam` algebras over families of scales
* :mod:`gfakit.complete` Cauchy moduli and the diagonal limit
* :mod:`gfakit.dsl` experiment specs and the ``gfa`` runner
"""
from .basealg.seminorm import AbsoluteValue, SupDerivatives
from .complete import NotCauchy, diagonalize, extract_moduli, verify_convergence
from .embed import embed_by_convolution, embed_constant, make_delta
from .scale import EgorovScale, LogScale, PowerScale, custom_scale
from .seqspace import (
    GrowthCertificate, MonoSum, Seq, classify, distance, equal_in_quotient, tail_fit, ultranorm,
)

__version__ = "0.1.0"

__all__ = [
    "AbsoluteValue", "GrowthCertificate", "MonoSum", "SupDerivatives", "tail_fit",
    "EgorovScale", "LogScale", "NotCauchy", "PowerScale", "Seq", "classify", "custom_scale", "diagonalize",
    "distance", "embed_by_convolution", "embed_constant", "equal_in_quotient", "extract_moduli", "make_delta",
    "ultranorm", "verify_convergence",
]
