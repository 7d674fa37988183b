"""Maass form L-series, twists and the elliptic matrix toolkit."""
from .errors import MaassKitError, NumericalError, ValidationError
from .specfun import SpectralParam, bessel_k, gamma, gamma_r, hurwitz_zeta, hyp2f1
from .characters import DirichletCharacter, character_group, gauss_sum, primitive_characters
from .lseries import CoeffSeq, Twist, completed_lambda, dirichlet_sum, vandermonde_coeffs
from .maassform import MaassSpec, evaluate, load, save
from .corpus import eisenstein_spec, load_hecke, sym2_coeffs
from .hyperbolic import Moebius, build_m, classify, two_circles_test
from .report import CheckReport

__version__ = "0.1.0"
