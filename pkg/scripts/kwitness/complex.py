"""
Cochain Complexes

Bounded cochain complexes over a matrix category, the maps between them,
and the constructions the witnesses are built from: shifts, direct sums,
mapping cones, conjugation by degreewise isomorphisms and the re-indexing
onto an even window.

Sign conventions:
    shift:  A[m]^j = A^{j-m},  d[m]^j = (-1)^m d^{j-m}
    cone:   cone(f)^j = A1^{j+1} (+) A2^j with differential
            [[-d1^{j+1}, 0], [-f^{j+1}, d2^j]]
    pad_to_even_window re-indexes without changing any sign.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Type

from .errors import InvalidChainMapError, RingMismatchError, ShapeMismatchError, HomogeneityError
from .matrix import (GradedObject, Matrix, add, check_homogeneous, check_object, compose,
                     direct_sum, from_blocks, is_zero, negate)
from .scalar import RingDescriptor

logger = logging.getLogger(__name__)


@dataclass
class Violation:
    """One failed identity at one degree."""
    degree: int
    identity: str
    residual: Optional[Matrix] = None
    message: str = ""


@dataclass
class ValidationReport:
    """
    Outcome of a validate_* operation.

    Violations are ordered by the order the checks ran, so ``first`` is the
    lowest failing degree of the first failing identity.
    """
    subject: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def extend(self, other: 'ValidationReport', prefix: str = "") -> None:
        for violation in other.violations:
            self.violations.append(Violation(
                violation.degree, prefix + violation.identity,
                violation.residual, violation.message))

    def describe(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        v = self.first
        text = f"{self.subject}: '{v.identity}' fails at degree {v.degree}"
        if v.message:
            text += f" ({v.message})"
        return text

    def raise_for(self, error_type: Type[Exception]) -> None:
        """Raise error_type describing the first violation, if any."""
        if self.ok:
            return
        v = self.first
        raise error_type(self.describe(), degree=v.degree, identity=v.identity)


@dataclass(frozen=True)
class Complex:
    """
    A bounded cochain complex.

    objects[i] sits in degree min_degree + i and differentials[i] maps it to
    objects[i + 1]. Degrees outside the stored window hold the zero object.
    """
    ring: RingDescriptor
    min_degree: int
    objects: Tuple[GradedObject, ...]
    differentials: Tuple[Matrix, ...]

    def __post_init__(self):
        objects = tuple(o if isinstance(o, GradedObject) else GradedObject(tuple(o))
                        for o in self.objects)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if not objects:
            object.__setattr__(self, "min_degree", 0)

        expected = max(len(objects) - 1, 0)
        if len(self.differentials) != expected:
            raise ShapeMismatchError(
                f"{len(objects)} objects need {expected} differentials, "
                f"got {len(self.differentials)}")
        for obj in objects:
            check_object(self.ring, obj)
        for i, d in enumerate(self.differentials):
            if d.ring != self.ring:
                raise RingMismatchError(f"differential d^{self.min_degree + i} is over {d.ring}")
            if d.source != objects[i] or d.target != objects[i + 1]:
                raise ShapeMismatchError(
                    f"differential d^{self.min_degree + i} does not map "
                    f"A^{self.min_degree + i} to A^{self.min_degree + i + 1}")

    @classmethod
    def zero(cls, ring: RingDescriptor) -> 'Complex':
        return cls(ring, 0, (), ())

    @classmethod
    def concentrated(cls, ring: RingDescriptor, obj: GradedObject, degree: int = 0) -> 'Complex':
        """The complex with a single object in one degree."""
        return cls(ring, degree, (obj,), ())

    @classmethod
    def from_differentials(cls, differentials: Sequence[Matrix], min_degree: int = 0) -> 'Complex':
        """Build a complex whose objects are read off a nonempty list of differentials."""
        if not differentials:
            raise ShapeMismatchError("need at least one differential")
        objects = [differentials[0].source] + [d.target for d in differentials]
        return cls(differentials[0].ring, min_degree, tuple(objects), tuple(differentials))

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.objects) - 1

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def obj(self, j: int) -> GradedObject:
        i = j - self.min_degree
        if 0 <= i < len(self.objects):
            return self.objects[i]
        return GradedObject.zero()

    def d(self, j: int) -> Matrix:
        i = j - self.min_degree
        if 0 <= i < len(self.differentials):
            return self.differentials[i]
        return Matrix.zero(self.ring, self.obj(j), self.obj(j + 1))

    def identity(self, j: int) -> Matrix:
        return Matrix.identity(self.ring, self.obj(j))

    def is_zero(self) -> bool:
        return all(o.is_zero() for o in self.objects)

    def support(self) -> Optional[Tuple[int, int]]:
        """Lowest and highest degree holding a nonzero object, or None."""
        nonzero = [j for j in self.degrees() if not self.obj(j).is_zero()]
        if not nonzero:
            return None
        return (nonzero[0], nonzero[-1])

    def trimmed(self) -> 'Complex':
        """Copy with leading and trailing zero objects removed."""
        span = self.support()
        if span is None:
            return Complex.zero(self.ring)
        lo, hi = span
        start, stop = lo - self.min_degree, hi - self.min_degree
        return Complex(self.ring, lo, self.objects[start:stop + 1],
                       self.differentials[start:stop])


def _window(*complexes: Complex) -> Optional[Tuple[int, int]]:
    nonempty = [c for c in complexes if c.objects]
    if not nonempty:
        return None
    return (min(c.min_degree for c in nonempty), max(c.max_degree for c in nonempty))


def _canonical_components(components: Dict[int, Matrix], degrees: range,
                          source_of: Callable[[int], GradedObject],
                          target_of: Callable[[int], GradedObject],
                          ring: RingDescriptor, what: str) -> Dict[int, Matrix]:
    result: Dict[int, Matrix] = {}
    for key, m in components.items():
        j = int(key)
        if m.ring != ring:
            raise RingMismatchError(f"{what} component at degree {j} is over {m.ring}")
        if m.source != source_of(j) or m.target != target_of(j):
            raise ShapeMismatchError(f"{what} component at degree {j} has the wrong shape")
        if j in degrees:
            result[j] = m
    for j in degrees:
        if j not in result:
            result[j] = Matrix.zero(ring, source_of(j), target_of(j))
    return dict(sorted(result.items()))


def _overlap(source: Complex, target: Complex, offset: int) -> range:
    # degrees j with source^j and target^{j + offset} both inside their windows
    if not source.objects or not target.objects:
        return range(0)
    lo = max(source.min_degree, target.min_degree - offset)
    hi = min(source.max_degree, target.max_degree - offset)
    return range(lo, hi + 1)


@dataclass(frozen=True)
class ChainMap:
    """Degreewise maps f^j: source^j -> target^j (stored on the window overlap)."""
    source: Complex
    target: Complex
    components: Dict[int, Matrix]

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise RingMismatchError("chain map between complexes over different rings")
        object.__setattr__(self, "components", _canonical_components(
            dict(self.components), _overlap(self.source, self.target, 0),
            self.source.obj, self.target.obj, self.source.ring, "chain map"))

    @property
    def ring(self) -> RingDescriptor:
        return self.source.ring

    def component(self, j: int) -> Matrix:
        if j in self.components:
            return self.components[j]
        return Matrix.zero(self.ring, self.source.obj(j), self.target.obj(j))


@dataclass(frozen=True)
class Homotopy:
    """Degreewise maps H^j: source^j -> target^{j-1}."""
    source: Complex
    target: Complex
    components: Dict[int, Matrix]

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise RingMismatchError("homotopy between complexes over different rings")
        object.__setattr__(self, "components", _canonical_components(
            dict(self.components), _overlap(self.source, self.target, -1),
            self.source.obj, lambda j: self.target.obj(j - 1), self.source.ring, "homotopy"))

    @property
    def ring(self) -> RingDescriptor:
        return self.source.ring

    def component(self, j: int) -> Matrix:
        if j in self.components:
            return self.components[j]
        return Matrix.zero(self.ring, self.source.obj(j), self.target.obj(j - 1))


@dataclass(frozen=True)
class NullHomotopy:
    """Maps h^j: A^j -> A^{j-1} claimed to satisfy id_j = d^{j-1} h^j + h^{j+1} d^j."""
    complex: Complex
    components: Dict[int, Matrix]

    def __post_init__(self):
        c = self.complex
        object.__setattr__(self, "components", _canonical_components(
            dict(self.components), _overlap(c, c, -1),
            c.obj, lambda j: c.obj(j - 1), c.ring, "null-homotopy"))

    @property
    def ring(self) -> RingDescriptor:
        return self.complex.ring

    def component(self, j: int) -> Matrix:
        if j in self.components:
            return self.components[j]
        return Matrix.zero(self.ring, self.complex.obj(j), self.complex.obj(j - 1))


@dataclass(frozen=True)
class HomotopyEquivalence:
    """
    Chain maps phi: A1 -> A2 and psi: A2 -> A1 with homotopies H1 on A1 and
    H2 on A2 claimed to satisfy

        phi^j psi^j - id = d2^{j-1} H2^j + H2^{j+1} d2^j
        psi^j phi^j - id = d1^{j-1} H1^j + H1^{j+1} d1^j
    """
    phi: ChainMap
    psi: ChainMap
    h1: Homotopy
    h2: Homotopy

    def __post_init__(self):
        a1, a2 = self.phi.source, self.phi.target
        if self.psi.source != a2 or self.psi.target != a1:
            raise ShapeMismatchError("psi must map the target of phi back to its source")
        if self.h1.source != a1 or self.h1.target != a1:
            raise ShapeMismatchError("H1 must be a homotopy on the source of phi")
        if self.h2.source != a2 or self.h2.target != a2:
            raise ShapeMismatchError("H2 must be a homotopy on the target of phi")

    @property
    def source(self) -> Complex:
        return self.phi.source

    @property
    def target(self) -> Complex:
        return self.phi.target

    @property
    def ring(self) -> RingDescriptor:
        return self.phi.ring


def validate_complex(c: Complex) -> ValidationReport:
    """Check d^{j+1} d^j = 0 at every degree, and graded homogeneity of every d^j."""
    report = ValidationReport("complex")
    for j in c.degrees():
        try:
            check_homogeneous(c.d(j))
        except HomogeneityError as e:
            report.violations.append(Violation(j, "d^j homogeneous", message=str(e)))
    for j in range(c.min_degree, c.max_degree - 1):
        residual = compose(c.d(j + 1), c.d(j))
        if not is_zero(residual):
            report.violations.append(Violation(j, "d^{j+1}d^j=0", residual))
    return report


def _homotopy_residual(d_at: Callable[[int], Matrix], h_at: Callable[[int], Matrix],
                       target: Matrix, j: int) -> Matrix:
    # d^{j-1} h^j + h^{j+1} d^j - target
    total = add(compose(d_at(j - 1), h_at(j)), compose(h_at(j + 1), d_at(j)))
    return add(total, negate(target))


def validate_chain_map(f: ChainMap) -> ValidationReport:
    """Check d_target^j f^j = f^{j+1} d_source^j at every degree."""
    report = ValidationReport("chain map")
    for j in _overlap(f.source, f.target, 1):
        residual = add(compose(f.target.d(j), f.component(j)),
                       negate(compose(f.component(j + 1), f.source.d(j))))
        if not is_zero(residual):
            report.violations.append(Violation(j, "d f^j = f^{j+1} d", residual))
    return report


def validate_null_homotopy(h: NullHomotopy) -> ValidationReport:
    """Check id_j = d^{j-1} h^j + h^{j+1} d^j at every degree of the window."""
    c = h.complex
    report = ValidationReport("null-homotopy")
    for j in c.degrees():
        residual = _homotopy_residual(c.d, h.component, c.identity(j), j)
        if not is_zero(residual):
            report.violations.append(Violation(j, "id=dh+hd", residual))
    return report


def validate_equivalence(e: HomotopyEquivalence) -> ValidationReport:
    """Check that phi and psi are chain maps and both homotopy identities hold."""
    report = ValidationReport("homotopy equivalence")
    report.extend(validate_chain_map(e.phi), "phi: ")
    report.extend(validate_chain_map(e.psi), "psi: ")
    a1, a2 = e.source, e.target
    for j in a2.degrees():
        excess = add(compose(e.phi.component(j), e.psi.component(j)), negate(a2.identity(j)))
        residual = _homotopy_residual(a2.d, e.h2.component, excess, j)
        if not is_zero(residual):
            report.violations.append(Violation(j, "phi psi - id = d H2 + H2 d", residual))
    for j in a1.degrees():
        excess = add(compose(e.psi.component(j), e.phi.component(j)), negate(a1.identity(j)))
        residual = _homotopy_residual(a1.d, e.h1.component, excess, j)
        if not is_zero(residual):
            report.violations.append(Violation(j, "psi phi - id = d H1 + H1 d", residual))
    return report


def shift(c: Complex, m: int) -> Complex:
    """A[m]^j = A^{j-m} with differentials multiplied by (-1)^m."""
    if m % 2:
        differentials = tuple(negate(d) for d in c.differentials)
    else:
        differentials = c.differentials
    return Complex(c.ring, c.min_degree + m, c.objects, differentials)


def shift_null_homotopy(h: NullHomotopy, m: int) -> NullHomotopy:
    """Carry a null-homotopy along shift(c, m); h[m]^j = (-1)^m h^{j-m}."""
    sign = negate if m % 2 else (lambda x: x)
    return NullHomotopy(shift(h.complex, m),
                        {j + m: sign(comp) for j, comp in h.components.items()})


def direct_sum_complex(a: Complex, b: Complex) -> Complex:
    """Degreewise biproduct with block-diagonal differentials."""
    if a.ring != b.ring:
        raise RingMismatchError(f"cannot sum complexes over {a.ring} and {b.ring}")
    span = _window(a, b)
    if span is None:
        return Complex.zero(a.ring)
    lo, hi = span
    objects = tuple(a.obj(j).direct_sum(b.obj(j)) for j in range(lo, hi + 1))
    differentials = tuple(direct_sum(a.d(j), b.d(j)) for j in range(lo, hi))
    return Complex(a.ring, lo, objects, differentials)


def direct_sum_null_homotopy(ha: NullHomotopy, hb: NullHomotopy) -> NullHomotopy:
    total = direct_sum_complex(ha.complex, hb.complex)
    return NullHomotopy(total, {j: direct_sum(ha.component(j), hb.component(j))
                                for j in total.degrees()})


def identity_map(c: Complex) -> ChainMap:
    return ChainMap(c, c, {j: c.identity(j) for j in c.degrees()})


def zero_map(a: Complex, b: Complex) -> ChainMap:
    return ChainMap(a, b, {})


def compose_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    """Degreewise composite g after f."""
    if f.target != g.source:
        raise ShapeMismatchError("cannot compose chain maps: f.target != g.source")
    return ChainMap(f.source, g.target, {
        j: compose(g.component(j), f.component(j)) for j in _overlap(f.source, g.target, 0)})


def inclusion(a: Complex, b: Complex, summand: int = 0) -> ChainMap:
    """Inclusion of the first (summand=0) or second summand into a (+) b."""
    total = direct_sum_complex(a, b)
    part = a if summand == 0 else b
    components = {}
    for j in part.degrees():
        blocks = [[part.identity(j)], [None]] if summand == 0 else [[None], [part.identity(j)]]
        components[j] = from_blocks(blocks, [a.obj(j), b.obj(j)], [part.obj(j)], ring=a.ring)
    return ChainMap(part, total, components)


def projection(a: Complex, b: Complex, summand: int = 0) -> ChainMap:
    """Projection of a (+) b onto the first (summand=0) or second summand."""
    total = direct_sum_complex(a, b)
    part = a if summand == 0 else b
    components = {}
    for j in part.degrees():
        blocks = [[part.identity(j), None]] if summand == 0 else [[None, part.identity(j)]]
        components[j] = from_blocks(blocks, [part.obj(j)], [a.obj(j), b.obj(j)], ring=a.ring)
    return ChainMap(total, part, components)


def cone_summands(f: ChainMap, j: int) -> Tuple[GradedObject, GradedObject]:
    """The two summands A1^{j+1} and A2^j of cone(f)^j, in block order."""
    return (f.source.obj(j + 1), f.target.obj(j))


def assemble_cone(f: ChainMap) -> Complex:
    """
    Lay out the cone of f without checking that f is a chain map.

    Raises:
        ShapeMismatchError: Never for well-formed f; d∘d is not checked here
    """
    a1, a2 = f.source, f.target
    bounds = []
    if a1.objects:
        bounds.append((a1.min_degree - 1, a1.max_degree - 1))
    if a2.objects:
        bounds.append((a2.min_degree, a2.max_degree))
    if not bounds:
        return Complex.zero(f.ring)
    lo = min(b[0] for b in bounds)
    hi = max(b[1] for b in bounds)

    objects = tuple(GradedObject.concat(cone_summands(f, j)) for j in range(lo, hi + 1))
    differentials = []
    for j in range(lo, hi):
        blocks = [[negate(a1.d(j + 1)), None],
                  [negate(f.component(j + 1)), a2.d(j)]]
        differentials.append(from_blocks(blocks, list(cone_summands(f, j + 1)),
                                         list(cone_summands(f, j)), ring=f.ring))
    return Complex(f.ring, lo, objects, tuple(differentials))


def cone(f: ChainMap, verify: bool = True) -> Complex:
    """
    Mapping cone of a chain map.

    Raises:
        InvalidChainMapError: If verify is set and f is not a chain map
    """
    if verify:
        validate_chain_map(f).raise_for(InvalidChainMapError)
    result = assemble_cone(f)
    logger.debug("cone built on degrees %s..%s", result.min_degree, result.max_degree)
    return result


@dataclass(frozen=True)
class PaddedWindow:
    """A complex re-indexed onto degrees 0..2k+1 and the shift that was applied."""
    complex: Complex
    shift: int

    @property
    def k(self) -> int:
        return (len(self.complex.objects) - 2) // 2


def pad_to_even_window(c: Complex) -> PaddedWindow:
    """
    Re-index a complex so its support starts in degree 0 and has even length.

    Leading and trailing zero objects are dropped, the lowest nonzero object
    moves to degree 0 and one zero object is appended when the support
    length is odd. No signs change. The zero complex becomes two zero
    objects in degrees 0 and 1.
    """
    span = c.support()
    if span is None:
        zero = GradedObject.zero()
        return PaddedWindow(Complex(c.ring, 0, (zero, zero),
                                    (Matrix.zero(c.ring, zero, zero),)), 0)
    trimmed = c.trimmed()
    objects = list(trimmed.objects)
    differentials = list(trimmed.differentials)
    if len(objects) % 2:
        differentials.append(Matrix.zero(c.ring, objects[-1], GradedObject.zero()))
        objects.append(GradedObject.zero())
    return PaddedWindow(Complex(c.ring, 0, tuple(objects), tuple(differentials)), -span[0])


def reindex_null_homotopy(h: NullHomotopy, padded: PaddedWindow) -> NullHomotopy:
    """Carry a null-homotopy of c onto pad_to_even_window(c)."""
    return NullHomotopy(padded.complex, {
        j: h.component(j - padded.shift) for j in padded.complex.degrees()})


@dataclass(frozen=True)
class DegreewiseIso:
    """Isomorphisms u^j: A^j -> B^j with inverses; identity outside the stored degrees."""
    forward: Dict[int, Matrix]
    backward: Dict[int, Matrix]

    def u(self, c: Complex, j: int) -> Matrix:
        return self.forward.get(j) or c.identity(j)

    def u_inv(self, c: Complex, j: int) -> Matrix:
        return self.backward.get(j) or c.identity(j)


def transport_complex(c: Complex, iso: DegreewiseIso) -> Complex:
    """The conjugated complex with differentials u^{j+1} d^j (u^j)^{-1}."""
    if not c.objects:
        return c
    objects = tuple(iso.u(c, j).target for j in c.degrees())
    differentials = tuple(
        compose(iso.u(c, j + 1), compose(c.d(j), iso.u_inv(c, j)))
        for j in range(c.min_degree, c.max_degree))
    return Complex(c.ring, c.min_degree, objects, differentials)


def _conjugate_down(source: Complex, comp: Callable[[int], Matrix],
                    iso: DegreewiseIso, j: int) -> Matrix:
    # u^{j-1} comp(j) (u^j)^{-1}
    return compose(iso.u(source, j - 1), compose(comp(j), iso.u_inv(source, j)))


def transport_null_homotopy(h: NullHomotopy, transported: Complex,
                            iso: DegreewiseIso) -> NullHomotopy:
    """h'^j = u^{j-1} h^j (u^j)^{-1}; verifies on the transported complex."""
    c = h.complex
    return NullHomotopy(transported, {
        j: _conjugate_down(c, h.component, iso, j) for j in range(c.min_degree + 1, c.max_degree + 1)})


def transport_homotopy(h: Homotopy, transported: Complex, iso: DegreewiseIso) -> Homotopy:
    """Same conjugation as transport_null_homotopy for a self-homotopy of a complex."""
    c = h.source
    return Homotopy(transported, transported, {
        j: _conjugate_down(c, h.component, iso, j) for j in range(c.min_degree + 1, c.max_degree + 1)})


def iso_chain_maps(c: Complex, transported: Complex,
                   iso: DegreewiseIso) -> Tuple[ChainMap, ChainMap]:
    """The chain isomorphism c -> transported and its inverse."""
    forward = ChainMap(c, transported, {j: iso.u(c, j) for j in c.degrees()})
    backward = ChainMap(transported, c, {j: iso.u_inv(c, j) for j in c.degrees()})
    return forward, backward


def brutal_truncation(c: Complex) -> Tuple[Complex, Complex]:
    """
    Split off the lowest stored term.

    Returns:
        (A^k alone in degree k, the complex A^{k+1} -> ... -> A^l)
    """
    if not c.objects:
        return Complex.zero(c.ring), Complex.zero(c.ring)
    lowest = Complex.concentrated(c.ring, c.objects[0], c.min_degree)
    if len(c.objects) == 1:
        return lowest, Complex.zero(c.ring)
    rest = Complex(c.ring, c.min_degree + 1, c.objects[1:], c.differentials[1:])
    return lowest, rest
