"""Certify convexity of the polynomials f_d through constant-size block matrices."""
from .coefficients import CoeffCache, b_alpha_bruteforce, b_hat, c_hat
from .combinatorics import Edge, ExponentVector, Permutation
from .hessian import SimplexPoint, fd_eval, hessian_fd_check, mgamma_rgamma, qgamma_entry, qgamma_matrix
from .matrices import RationalSymMatrix
from .multigraphs import Multigraph, canonical_form, enumerate_multigraphs, is_isomorphic
from .pipeline import DegreeReport, RunConfig, emit_report, observe_extremes, verify_degree
from .psdcert import EigenReport, PsdCertificate, Verdict, jacobi_eigen, ldlt_natural, ldlt_pivoted
from .reduction import ReductionBlocks, blockvalue, k0_pattern_eigen, reduced_blocks
from .repset import block_formulas, compress, orbit_count_bruteforce, orbit_count_formula, representative_vectors

__version__ = "0.1.0"
