"""Exact computations with K_1-level Hecke algebras of GL(N) and PGL(N) over F_q((t)).

Submodules
----------
arith       finite fields, field towers, exact cyclotomic scalars
groups      G(F_q), parabolic data, twisted products
funspace    functions on flag spaces, Radon transforms
loophecke   double cosets K_1 \\ G(F_q((t))) / K_1, convolution, Jantzen flags
bundles     bundles on P^1 trivialized at 0 and ∞, the bimodule V, act and ι
divhecke    divisor Hecke operators, GL(1) and Langlands-parameter evaluation
characters  cuspidal characters from the Gelfand–Graev module, η scalars
suites      named verification suites
cli         command line harness
"""
from . import arith, groups, funspace, loophecke, bundles, divhecke, characters, suites
from .arith import Scalar, tower, gf
from .groups import build_group, FiniteGroup, parabolic_datum, twisted_product
from .divhecke import divisor_hecke, eval_phi, centrality_check
from .characters import cuspidal_characters, eta

__version__ = "0.1.0"
