"""
kwitness

Exact verification of the homotopy invariance of Euler characteristics for
bounded complexes of graded free modules: cones, null-homotopies, R/L
witnesses, homotopy inverses and Grothendieck classes.
"""

__version__ = "1.0.0"

from .complex import (ChainMap, Complex, Homotopy, HomotopyEquivalence, NullHomotopy, cone,
                      shift, validate_chain_map, validate_complex, validate_equivalence,
                      validate_null_homotopy)
from .errors import KWitnessError
from .grothendieck import KClass, euler_characteristic
from .io import dumps, loads
from .matrix import GradedObject, Matrix
from .scalar import RingDescriptor, Scalar
from .witness import (alphas, build_rl_witness, cone_null_homotopy,
                      homotopy_inverse_from_cone)

__all__ = [
    '__version__',
    'ChainMap',
    'Complex',
    'GradedObject',
    'Homotopy',
    'HomotopyEquivalence',
    'KClass',
    'KWitnessError',
    'Matrix',
    'NullHomotopy',
    'RingDescriptor',
    'Scalar',
    'alphas',
    'build_rl_witness',
    'cone',
    'cone_null_homotopy',
    'dumps',
    'euler_characteristic',
    'homotopy_inverse_from_cone',
    'loads',
    'shift',
    'validate_chain_map',
    'validate_complex',
    'validate_equivalence',
    'validate_null_homotopy',
]
