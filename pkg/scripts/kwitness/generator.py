"""
Instance Generator

Deterministic construction of test instances whose witnesses are known by
construction: contractible complexes with null-homotopies, homotopy
equivalences, null-homotopic chain maps and general complexes.

Randomness comes from SplitMix64:

    state = state + 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

all modulo 2^64. Each operation starts a fresh stream from the seed xor the
64-bit FNV-1a hash of an operation salt, so different operations on the
same seed do not share draws. Bounded draws use rejection sampling.

Degreewise automorphisms are products of transvections (add a homogeneous
multiple of one generator to another), swaps and sign flips, which are
invertible over every supported ring without division.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence, Tuple

from .complex import (ChainMap, Complex, DegreewiseIso, Homotopy, HomotopyEquivalence,
                      NullHomotopy, compose_maps, direct_sum_complex, direct_sum_null_homotopy,
                      inclusion, iso_chain_maps, projection, shift, shift_null_homotopy,
                      transport_complex, transport_homotopy, transport_null_homotopy,
                      validate_chain_map, validate_complex, validate_equivalence,
                      validate_null_homotopy)
from .errors import InternalVerificationError, InvalidComplexError, RingMismatchError
from .matrix import GradedObject, Matrix, add, compose, direct_sum, negate
from .scalar import RingDescriptor, arithmetic

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _fnv1a(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return h


class SplitMix64:
    """The SplitMix64 generator with bounded draws."""

    def __init__(self, seed: int, salt: str = ""):
        self.state = (seed ^ _fnv1a(salt)) & MASK64 if salt else seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError(f"below needs a positive bound, got {n}")
        limit = ((MASK64 + 1) // n) * n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def nonzero(self, bound: int) -> int:
        """Uniform integer in [-bound, bound] other than 0."""
        x = self.randint(1, bound)
        return x if self.below(2) else -x

    def choice(self, items: Sequence[Any]) -> Any:
        return items[self.below(len(items))]


@dataclass(frozen=True)
class GenParams:
    """
    Bounds for generated instances. Out-of-range values are clamped with a
    warning instead of rejected.
    """
    seed: int = 0
    ring: RingDescriptor = RingDescriptor.integers()
    max_blocks: int = 3
    max_rank: int = 2
    max_shift: int = 10
    max_grading: int = 2
    entry_bound: int = 3
    conjugation_steps: int = 6

    def __post_init__(self):
        minimums = {"max_blocks": 1, "max_rank": 1, "max_shift": 0, "max_grading": 0,
                    "entry_bound": 1, "conjugation_steps": 0}
        for name, minimum in minimums.items():
            value = getattr(self, name)
            if value < minimum:
                logger.warning("clamping %s from %s to %s", name, value, minimum)
                object.__setattr__(self, name, minimum)
        if not 0 <= self.seed <= MASK64:
            logger.warning("reducing seed %s modulo 2^64", self.seed)
            object.__setattr__(self, "seed", self.seed & MASK64)

    def stream(self, salt: str) -> SplitMix64:
        return SplitMix64(self.seed, salt)


GENERATOR_FIELDS = ("seed", "max_blocks", "max_rank", "max_shift", "max_grading",
                    "entry_bound", "conjugation_steps")


def gen_params_from_settings(settings: Any, **overrides) -> GenParams:
    """
    Build GenParams from application settings, letting non-None overrides win.

    Args:
        settings: Object with a ``ring`` text attribute and the GENERATOR_FIELDS
        **overrides: Values from command-line flags; ``ring`` may be text or a RingDescriptor
    """
    values = {name: getattr(settings, name) for name in GENERATOR_FIELDS}
    values.update({k: v for k, v in overrides.items() if v is not None and k != "ring"})
    ring = overrides.get("ring") or settings.ring
    if isinstance(ring, str):
        ring = RingDescriptor.parse(ring)
    return GenParams(ring=ring, **values)


def _exponent_for(ring: RingDescriptor, degree: int) -> Optional[int]:
    # exponent e with e * x_degree == degree, if a homogeneous entry of that degree exists
    if not ring.is_graded:
        return 0 if degree == 0 else None
    if degree % ring.x_degree:
        return None
    e = degree // ring.x_degree
    return e if e >= 0 else None


def _random_object(rng: SplitMix64, p: GenParams) -> GradedObject:
    rank = rng.randint(1, p.max_rank)
    if p.ring.is_graded:
        return GradedObject(tuple(rng.randint(-p.max_grading, p.max_grading) for _ in range(rank)))
    return GradedObject.ungraded(rank)


def _random_matrix(rng: SplitMix64, p: GenParams, source: GradedObject,
                   target: GradedObject) -> Matrix:
    zero = arithmetic(p.ring).zero
    rows = []
    for r in range(target.rank):
        row = []
        for c in range(source.rank):
            e = _exponent_for(p.ring, target.gradings[r] - source.gradings[c])
            if e is None or rng.below(2) == 0:
                row.append(zero)
            else:
                row.append(p.ring.monomial(rng.nonzero(p.entry_bound), e))
        rows.append(tuple(row))
    return Matrix(p.ring, source, target, tuple(rows))


def _random_automorphism(rng: SplitMix64, p: GenParams,
                         obj: GradedObject) -> Tuple[Matrix, Matrix]:
    """u: obj -> Y and its inverse, from p.conjugation_steps elementary operations."""
    ops = arithmetic(p.ring)
    n = obj.rank
    u = [[ops.one if r == c else ops.zero for c in range(n)] for r in range(n)]
    u_inv = [[ops.one if r == c else ops.zero for c in range(n)] for r in range(n)]
    gradings = list(obj.gradings)

    for _ in range(p.conjugation_steps):
        if n == 0:
            break
        kind = rng.below(3)
        if kind == 2 or n == 1:
            # flip the sign of generator a
            a = rng.below(n)
            u[a] = [ops.neg(v) for v in u[a]]
            for row in u_inv:
                row[a] = ops.neg(row[a])
            continue
        a = rng.below(n)
        b = (a + 1 + rng.below(n - 1)) % n
        if kind == 0:
            # generator a += t * generator b, t homogeneous of degree g[a] - g[b]
            e = _exponent_for(p.ring, gradings[a] - gradings[b])
            if e is None:
                continue
            t = p.ring.monomial(rng.nonzero(p.entry_bound), e)
            u[a] = [ops.add(x, ops.mul(t, y)) for x, y in zip(u[a], u[b])]
            for row in u_inv:
                row[b] = ops.add(row[b], ops.neg(ops.mul(row[a], t)))
        else:
            u[a], u[b] = u[b], u[a]
            for row in u_inv:
                row[a], row[b] = row[b], row[a]
            gradings[a], gradings[b] = gradings[b], gradings[a]

    image = GradedObject(tuple(gradings))
    forward = Matrix(p.ring, obj, image, tuple(tuple(row) for row in u))
    backward = Matrix(p.ring, image, obj, tuple(tuple(row) for row in u_inv))
    return forward, backward


def _random_iso(rng: SplitMix64, p: GenParams, c: Complex) -> DegreewiseIso:
    forward, backward = {}, {}
    for j in c.degrees():
        forward[j], backward[j] = _random_automorphism(rng, p, c.obj(j))
    return DegreewiseIso(forward, backward)


def _elementary_sum(rng: SplitMix64, p: GenParams) -> Tuple[Complex, NullHomotopy]:
    """Sum of blocks 0 -> X --id--> X -> 0, lowest degree 0, with h = id on each block."""
    blocks = []
    for _ in range(rng.randint(1, p.max_blocks)):
        obj = _random_object(rng, p)
        blocks.append((rng.randint(0, p.max_shift), obj))
    low = min(s for s, _ in blocks)

    total: Optional[Complex] = None
    homotopy: Optional[NullHomotopy] = None
    for s, obj in blocks:
        identity = Matrix.identity(p.ring, obj)
        block = Complex(p.ring, s - low, (obj, obj), (identity,))
        h = NullHomotopy(block, {s - low + 1: identity})
        if total is None:
            total, homotopy = block, h
        else:
            total = direct_sum_complex(total, block)
            homotopy = direct_sum_null_homotopy(homotopy, h)
    return total, homotopy


def _contractible(rng: SplitMix64, p: GenParams) -> Tuple[Complex, NullHomotopy]:
    c, h = _elementary_sum(rng, p)
    iso = _random_iso(rng, p, c)
    transported = transport_complex(c, iso)
    return transported, transport_null_homotopy(h, transported, iso)


def perturb_null_homotopy(p: GenParams, h: NullHomotopy, salt: str = "perturb") -> NullHomotopy:
    """
    h + dk - kd for a random homogeneous k: A^j -> A^{j-2}.

    The result is again a null-homotopy of the same complex, but in general
    h h != 0, so longer h-chains survive.

    Raises:
        InternalVerificationError: If the perturbed homotopy fails to verify
    """
    rng = p.stream(salt)
    c = h.complex
    k = {j: _random_matrix(rng, p, c.obj(j), c.obj(j - 2))
         for j in c.degrees() if not c.obj(j - 2).is_zero()}

    def k_at(j: int) -> Matrix:
        return k[j] if j in k else Matrix.zero(p.ring, c.obj(j), c.obj(j - 2))

    perturbed = NullHomotopy(c, {
        j: add(h.component(j), add(compose(c.d(j - 2), k_at(j)),
                                   negate(compose(k_at(j + 1), c.d(j)))))
        for j in c.degrees()})
    report = validate_null_homotopy(perturbed)
    if not report.ok:
        raise InternalVerificationError(report.describe(), degree=report.first.degree)
    return perturbed


def gen_contractible(p: GenParams, perturb: bool = False) -> Tuple[Complex, NullHomotopy]:
    """
    A conjugated sum of elementary contractible blocks and its null-homotopy.

    Args:
        p: Generator parameters
        perturb: Replace h by perturb_null_homotopy(p, h), so that h h != 0

    Raises:
        InternalVerificationError: If the transported homotopy fails to verify
    """
    c, h = _contractible(p.stream("contractible"), p)
    if perturb:
        h = perturb_null_homotopy(p, h)
    report = validate_null_homotopy(h)
    if not report.ok:
        raise InternalVerificationError(report.describe(), degree=report.first.degree)
    logger.debug("generated contractible complex on degrees %s..%s (seed %s)",
                 c.min_degree, c.max_degree, p.seed)
    return c, h


def gen_complex(p: GenParams, salt: str = "complex") -> Complex:
    """A conjugated sum of a contractible part and terms with zero differential."""
    rng = p.stream(salt)
    c, _ = _elementary_sum(rng, p)
    for _ in range(rng.randint(0, p.max_blocks)):
        term = Complex.concentrated(p.ring, _random_object(rng, p), rng.randint(0, p.max_shift))
        c = direct_sum_complex(c, term)
    result = transport_complex(c, _random_iso(rng, p, c))
    validate_complex(result).raise_for(InternalVerificationError)
    return result


def gen_equivalence(p: GenParams, base: Optional[Complex] = None) -> HomotopyEquivalence:
    """
    A homotopy equivalence base -> B where B is base (+) C, conjugated, and C contractible.

    phi is the inclusion followed by the automorphism, psi the inverse
    automorphism followed by the projection, H1 = 0 and H2 the conjugate of
    0 (+) (-h_C).

    Raises:
        RingMismatchError: If base is not over p.ring
        InvalidComplexError: If base is not a valid complex
        InternalVerificationError: If the result fails to verify
    """
    if base is None:
        base = gen_complex(p, salt="equivalence:base")
    if base.ring != p.ring:
        raise RingMismatchError(f"base complex is over {base.ring}, parameters over {p.ring}")
    validate_complex(base).raise_for(InvalidComplexError)

    rng = p.stream("equivalence")
    c, h_c = _contractible(rng, p)
    if base.objects:
        offset = rng.randint(base.min_degree - 1, base.max_degree)
        c, h_c = shift(c, offset), shift_null_homotopy(h_c, offset)

    total = direct_sum_complex(base, c)
    h2_plain = Homotopy(total, total, {
        j: direct_sum(Matrix.zero(p.ring, base.obj(j), base.obj(j - 1)), negate(h_c.component(j)))
        for j in total.degrees()})

    iso = _random_iso(rng, p, total)
    conjugated = transport_complex(total, iso)
    forward, backward = iso_chain_maps(total, conjugated, iso)
    phi = compose_maps(forward, inclusion(base, c, 0))
    psi = compose_maps(projection(base, c, 0), backward)
    equivalence = HomotopyEquivalence(phi, psi, Homotopy(base, base, {}),
                                      transport_homotopy(h2_plain, conjugated, iso))

    report = validate_equivalence(equivalence)
    if not report.ok:
        raise InternalVerificationError(report.describe(), degree=report.first.degree)
    logger.debug("generated equivalence onto degrees %s..%s (seed %s)",
                 conjugated.min_degree, conjugated.max_degree, p.seed)
    return equivalence


def gen_chain_map(p: GenParams, a: Complex, b: Complex) -> ChainMap:
    """
    A null-homotopic chain map f = d_b g + g d_a for a random homogeneous g.

    Raises:
        RingMismatchError: If a, b and p disagree on the ring
        InternalVerificationError: If f fails to commute with the differentials
    """
    if a.ring != p.ring or b.ring != p.ring:
        raise RingMismatchError("chain map endpoints must be over the parameter ring")
    rng = p.stream("chain_map")
    g = Homotopy(a, b, {
        j: _random_matrix(rng, p, a.obj(j), b.obj(j - 1))
        for j in a.degrees() if not b.obj(j - 1).is_zero()})

    components = {}
    for j in a.degrees():
        components[j] = add(compose(b.d(j - 1), g.component(j)),
                            compose(g.component(j + 1), a.d(j)))
    f = ChainMap(a, b, components)

    report = validate_chain_map(f)
    if not report.ok:
        raise InternalVerificationError(report.describe(), degree=report.first.degree)
    return f

