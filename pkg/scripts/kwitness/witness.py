"""
Witness Constructions

Explicit, self-checking witnesses:

- the null-homotopy of cone(phi) built from a homotopy equivalence, and the
  equivalence recovered from a null-homotopy of a cone;
- the matrices R and L that identify the even and the odd terms of a
  null-homotopic complex, with coefficients from the signed Catalan
  recursion.

Every function here verifies its output before returning it.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from .complex import (ChainMap, Complex, Homotopy, HomotopyEquivalence, NullHomotopy,
                      ValidationReport, Violation, assemble_cone, cone, cone_summands,
                      pad_to_even_window, reindex_null_homotopy, validate_chain_map,
                      validate_complex, validate_equivalence, validate_null_homotopy)
from .errors import (ExtractionError, InternalVerificationError, InvalidComplexError,
                     InvalidEquivalenceError, NotNullHomotopicError, SignResolutionError)
from .matrix import (GradedObject, Matrix, add, compose, compose_all, from_blocks, is_identity,
                     is_zero, negate, scale, to_blocks)

logger = logging.getLogger(__name__)


class SignConvention(Enum):
    """
    Which homotopy identity a cone homotopy satisfies.

    dH - Hd = id together with d^2 = 0 forces 2d = 0 and then d = 0 over
    every supported ring except ZZ/2, where the two identities coincide. The
    minus form therefore never holds without the plus form.
    """
    PLUS = "id=dH+Hd"


@dataclass(frozen=True)
class AlphaSequence:
    """Coefficients alpha_0..alpha_n of the R/L witness."""
    values: Tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.values)


@lru_cache(maxsize=None)
def _alpha_values(n: int) -> Tuple[int, ...]:
    values = [1]
    for k in range(1, n + 1):
        values.append(-sum(values[j] * values[k - 1 - j] for j in range(k)))
    return tuple(values)


def alphas(n: int) -> AlphaSequence:
    """
    alpha_0 = 1 and alpha_k = -sum_{j<k} alpha_j alpha_{k-1-j}.

    Args:
        n: Index of the last coefficient; must be nonnegative

    Returns:
        AlphaSequence of length n + 1
    """
    if n < 0:
        raise ValueError(f"alphas needs a nonnegative index, got {n}")
    return AlphaSequence(_alpha_values(n))


@dataclass(frozen=True)
class ConeBlocks:
    """
    The four blocks of a cone homotopy component h^j: cone^j -> cone^{j-1}.

    h11: A1^{j+1} -> A1^j      h12: A2^j -> A1^j
    h21: A1^{j+1} -> A2^{j-1}  h22: A2^j -> A2^{j-1}
    """
    h11: Matrix
    h12: Matrix
    h21: Matrix
    h22: Matrix


@dataclass(frozen=True)
class ConeNullHomotopy:
    """A verified null-homotopy of cone(phi) together with its block split."""
    cone_complex: Complex
    blocks: Dict[int, ConeBlocks]
    homotopy: NullHomotopy
    convention: SignConvention = SignConvention.PLUS

    @property
    def components(self) -> Dict[int, Matrix]:
        return self.homotopy.components


def split_cone_homotopy(phi: ChainMap, h: NullHomotopy) -> Dict[int, ConeBlocks]:
    """Split each component of a homotopy on cone(phi) into its four blocks."""
    blocks = {}
    for j in h.complex.degrees():
        grid = to_blocks(h.component(j), list(cone_summands(phi, j - 1)),
                         list(cone_summands(phi, j)))
        blocks[j] = ConeBlocks(h11=grid[0][0], h12=grid[0][1], h21=grid[1][0], h22=grid[1][1])
    return blocks


def cone_null_homotopy(e: HomotopyEquivalence, check_input: bool = True) -> ConeNullHomotopy:
    """
    Null-homotopy of cone(phi) from a homotopy equivalence (phi, psi, H1, H2).

    Component j is the block matrix

        [[H1^{j+1} + psi^j H2^{j+1} phi^{j+1} - psi^j phi^j H1^{j+1},  -psi^j ],
         [H2^j H2^{j+1} phi^{j+1} - H2^j phi^j H1^{j+1},              -H2^j  ]]

    Args:
        e: Homotopy equivalence
        check_input: Validate e before building

    Returns:
        ConeNullHomotopy satisfying id = dH + Hd on cone(phi)

    Raises:
        InvalidEquivalenceError: If e fails validation
        SignResolutionError: If the assembled blocks do not verify
    """
    if check_input:
        validate_equivalence(e).raise_for(InvalidEquivalenceError)
    phi, psi, h1, h2 = e.phi, e.psi, e.h1, e.h2
    target = cone(phi, verify=False)

    components = {}
    blocks = {}
    for j in target.degrees():
        top_left = add(add(h1.component(j + 1),
                           compose_all([psi.component(j), h2.component(j + 1), phi.component(j + 1)])),
                       negate(compose_all([psi.component(j), phi.component(j), h1.component(j + 1)])))
        bottom_left = add(compose_all([h2.component(j), h2.component(j + 1), phi.component(j + 1)]),
                          negate(compose_all([h2.component(j), phi.component(j), h1.component(j + 1)])))
        top_right = negate(psi.component(j))
        bottom_right = negate(h2.component(j))
        blocks[j] = ConeBlocks(top_left, top_right, bottom_left, bottom_right)
        components[j] = from_blocks([[top_left, top_right], [bottom_left, bottom_right]],
                                    list(cone_summands(phi, j - 1)), list(cone_summands(phi, j)),
                                    ring=phi.ring)

    homotopy = NullHomotopy(target, components)
    report = validate_null_homotopy(homotopy)
    if report.ok:
        logger.debug("cone homotopy verified as %s", SignConvention.PLUS.value)
        return ConeNullHomotopy(target, blocks, homotopy, SignConvention.PLUS)
    v = report.first
    raise SignResolutionError(
        f"cone homotopy verifies under no sign convention (first failure at degree {v.degree})",
        degree=v.degree, identity=v.identity)


@dataclass(frozen=True)
class Extraction:
    """An equivalence recovered from a cone homotopy and the signs put on h11 and h22."""
    equivalence: HomotopyEquivalence
    h1_sign: int
    h2_sign: int


# tried in order; the first entry is the one the block identities predict
EXTRACTION_SIGNS: Tuple[Tuple[int, int], ...] = ((1, -1), (1, 1), (-1, -1), (-1, 1))


def _signed(m: Matrix, sign: int) -> Matrix:
    return m if sign > 0 else negate(m)


def extract_equivalence(h: Union[ConeNullHomotopy, NullHomotopy], phi: ChainMap) -> Extraction:
    """
    Recover (phi, psi, H1, H2) from a null-homotopy of cone(phi).

    psi^j = -h12^j, H1^i = +/-h11^i (taken from cone degree i-1) and
    H2^j = +/-h22^j, with the signs found by trying EXTRACTION_SIGNS.

    Raises:
        NotNullHomotopicError: If h is not a null-homotopy
        ExtractionError: If h is not on cone(phi), psi is not a chain map,
            or no sign pair gives a valid equivalence
    """
    homotopy = h.homotopy if isinstance(h, ConeNullHomotopy) else h
    if homotopy.complex != assemble_cone(phi):
        raise ExtractionError("null-homotopy is not defined on cone(phi)")
    validate_null_homotopy(homotopy).raise_for(NotNullHomotopicError)

    blocks = split_cone_homotopy(phi, homotopy)
    a1, a2 = phi.source, phi.target

    psi = ChainMap(a2, a1, {j: negate(blocks[j].h12) for j in a2.degrees() if j in blocks})
    psi_report = validate_chain_map(psi)
    if not psi_report.ok:
        v = psi_report.first
        raise ExtractionError(f"-h12 is not a chain map at degree {v.degree}",
                              degree=v.degree, identity="-d1 h12 + h12 d2 = 0")

    first_failure: Optional[Violation] = None
    for s1, s2 in EXTRACTION_SIGNS:
        h1 = Homotopy(a1, a1, {i: _signed(blocks[i - 1].h11, s1)
                               for i in a1.degrees() if i - 1 in blocks})
        h2 = Homotopy(a2, a2, {j: _signed(blocks[j].h22, s2)
                               for j in a2.degrees() if j in blocks})
        equivalence = HomotopyEquivalence(phi, psi, h1, h2)
        report = validate_equivalence(equivalence)
        if report.ok:
            logger.debug("extracted equivalence with H1 sign %+d and H2 sign %+d", s1, s2)
            return Extraction(equivalence, s1, s2)
        if first_failure is None:
            first_failure = report.first
    raise ExtractionError(
        f"no sign variant verifies; '{first_failure.identity}' fails at degree {first_failure.degree}",
        degree=first_failure.degree, identity=first_failure.identity)


def homotopy_inverse_from_cone(h: Union[ConeNullHomotopy, NullHomotopy],
                               phi: ChainMap) -> HomotopyEquivalence:
    """Homotopy inverse psi = -h12 of phi, with its homotopies, from a cone null-homotopy."""
    return extract_equivalence(h, phi).equivalence


def h_chain(h: NullHomotopy, start: int, stop: int) -> Matrix:
    """
    h^start h^{start+1} ... h^stop, with h^stop applied first.

    Maps A^stop to A^{start-1}. start > stop gives the identity of A^stop.
    """
    if start > stop:
        return h.complex.identity(stop)
    return compose_all([h.component(i) for i in range(start, stop + 1)])


def verify_h_relations(h: NullHomotopy, j: int, l: int,
                       c: Optional[Complex] = None) -> ValidationReport:
    """
    Check h^j...h^{j+2l+1} = d^{j-2} h^{j-1}...h^{j+2l+1} + h^j...h^{j+2l+2} d^{j+2l+1}.

    Holds for every j once h is a null-homotopy; degrees outside the window
    contribute zero objects.

    Args:
        h: Null-homotopy; its complex supplies the differentials
        j: First degree of the chain
        l: Chain length parameter, nonnegative
        c: The complex h is claimed on, checked against h.complex when given

    Raises:
        ValueError: If l is negative
        NotNullHomotopicError: If c is given and h is defined on another complex
    """
    if l < 0:
        raise ValueError(f"l must be nonnegative, got {l}")
    if c is not None and c != h.complex:
        raise NotNullHomotopicError("null-homotopy is defined on a different complex")
    c = h.complex
    last = j + 2 * l + 1
    lhs = h_chain(h, j, last)
    rhs = add(compose(c.d(j - 2), h_chain(h, j - 1, last)),
              compose(h_chain(h, j, last + 1), c.d(last)))
    report = ValidationReport("h-relation")
    residual = add(lhs, negate(rhs))
    if not is_zero(residual):
        report.violations.append(Violation(j, f"h-relation l={l}", residual))
    return report


@dataclass(frozen=True)
class WitnessPair:
    """
    R: (+)_i A^{2i} -> (+)_i A^{2i+1} and L in the opposite direction, with
    RL = id and LR = id, for a complex padded to degrees 0..2k+1. shift is
    the re-indexing applied by the padding.
    """
    R: Matrix
    L: Matrix
    k: int
    shift: int = 0

    @property
    def even_object(self) -> GradedObject:
        return self.R.source

    @property
    def odd_object(self) -> GradedObject:
        return self.R.target


def check_witness_pair(pair: WitnessPair) -> ValidationReport:
    """Re-check RL = id and LR = id."""
    report = ValidationReport("witness pair")
    if pair.L.source != pair.R.target or pair.L.target != pair.R.source:
        report.violations.append(Violation(0, "RL=id", message="R and L do not compose"))
        return report
    if not is_identity(compose(pair.R, pair.L)):
        report.violations.append(Violation(0, "RL=id", compose(pair.R, pair.L)))
    if not is_identity(compose(pair.L, pair.R)):
        report.violations.append(Violation(0, "LR=id", compose(pair.L, pair.R)))
    return report


def _rl_blocks(h: NullHomotopy, k: int) -> Tuple[List[List[Optional[Matrix]]],
                                                  List[List[Optional[Matrix]]]]:
    c = h.complex
    coefficients = alphas(k)
    chains: Dict[Tuple[int, int], Matrix] = {}

    def chain(start: int, stop: int) -> Matrix:
        if (start, stop) not in chains:
            chains[(start, stop)] = compose(h_chain(h, start, start), chain(start + 1, stop)) \
                if start < stop else h_chain(h, start, stop)
        return chains[(start, stop)]

    r_blocks: List[List[Optional[Matrix]]] = []
    l_blocks: List[List[Optional[Matrix]]] = []
    for i in range(k + 1):
        r_row: List[Optional[Matrix]] = []
        l_row: List[Optional[Matrix]] = []
        for j in range(k + 1):
            # R: column A^{2j}, row A^{2i+1}
            if j == i:
                r_row.append(c.d(2 * i))
            elif j > i:
                r_row.append(scale(chain(2 * i + 2, 2 * j), coefficients[j - i - 1]))
            else:
                r_row.append(None)
            # L: column A^{2j+1}, row A^{2i}
            if j == i - 1:
                l_row.append(c.d(2 * i - 1))
            elif j >= i:
                l_row.append(scale(chain(2 * i + 1, 2 * j + 1), coefficients[j - i]))
            else:
                l_row.append(None)
        r_blocks.append(r_row)
        l_blocks.append(l_row)
    return r_blocks, l_blocks


def build_rl_witness(c: Complex, h: NullHomotopy) -> WitnessPair:
    """
    Build and verify the even/odd isomorphism of a null-homotopic complex.

    With the complex re-indexed onto 0..2k+1 (0-indexed blocks):

        R[i][i] = d^{2i},      R[i][j] = alpha_{j-i-1} h^{2i+2}...h^{2j}   (j > i)
        L[i][i-1] = d^{2i-1},  L[i][j] = alpha_{j-i} h^{2i+1}...h^{2j+1}   (j >= i)

    Args:
        c: Complex
        h: Null-homotopy of c

    Returns:
        Verified WitnessPair

    Raises:
        InvalidComplexError: If c fails validation
        NotNullHomotopicError: If h is not a null-homotopy of c
        InternalVerificationError: If RL or LR is not the identity
    """
    validate_complex(c).raise_for(InvalidComplexError)
    if h.complex != c:
        raise NotNullHomotopicError("null-homotopy is defined on a different complex")
    validate_null_homotopy(h).raise_for(NotNullHomotopicError)

    padded = pad_to_even_window(c)
    hp = reindex_null_homotopy(h, padded)
    pc = padded.complex
    k = padded.k
    even = [pc.obj(2 * i) for i in range(k + 1)]
    odd = [pc.obj(2 * i + 1) for i in range(k + 1)]

    r_blocks, l_blocks = _rl_blocks(hp, k)
    R = from_blocks(r_blocks, odd, even, ring=c.ring)
    L = from_blocks(l_blocks, even, odd, ring=c.ring)
    pair = WitnessPair(R, L, k, padded.shift)

    report = check_witness_pair(pair)
    if not report.ok:
        raise InternalVerificationError(report.describe(), identity=report.first.identity)
    if sorted(R.source.gradings) != sorted(R.target.gradings):
        raise InternalVerificationError("even and odd graded ranks differ", identity="rank")
    logger.debug("R/L witness verified with k=%d, ranks %d", k, R.source.rank)
    return pair
