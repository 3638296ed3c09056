"""
Graded Matrices

Dense exact matrices between graded free objects. These are the morphisms
of the additive category every complex lives in: composition, the
abelian group structure on Hom, biproducts and block assembly.

Morphisms have degree zero: entry (r, c) is zero or homogeneous of degree
target.gradings[r] - source.gradings[c].
"""

import logging
from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import HomogeneityError, RingMismatchError, ShapeMismatchError
from .scalar import Homogeneity, RingDescriptor, Scalar, arithmetic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GradedObject:
    """A graded free object: one internal grading shift per generator."""
    gradings: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gradings", tuple(int(g) for g in self.gradings))

    @property
    def rank(self) -> int:
        return len(self.gradings)

    @classmethod
    def zero(cls) -> 'GradedObject':
        return cls(())

    @classmethod
    def ungraded(cls, rank: int) -> 'GradedObject':
        return cls((0,) * rank)

    def is_zero(self) -> bool:
        return not self.gradings

    def direct_sum(self, other: 'GradedObject') -> 'GradedObject':
        return GradedObject(self.gradings + other.gradings)

    @staticmethod
    def concat(objects: Iterable['GradedObject']) -> 'GradedObject':
        gradings: Tuple[int, ...] = ()
        for obj in objects:
            gradings += obj.gradings
        return GradedObject(gradings)


ObjectLike = Union[GradedObject, Sequence[int]]


def _as_object(obj: ObjectLike) -> GradedObject:
    return obj if isinstance(obj, GradedObject) else GradedObject(tuple(obj))


def check_object(ring: RingDescriptor, obj: GradedObject) -> None:
    """
    Check that an object is admissible over a ring.

    Raises:
        HomogeneityError: If the ring is ungraded and a grading is nonzero
    """
    if not ring.is_graded and any(obj.gradings):
        raise HomogeneityError(f"object {list(obj.gradings)} has nonzero gradings over {ring}")


@dataclass(frozen=True)
class Matrix:
    """
    A morphism source -> target stored as target.rank rows of raw
    canonical values (see scalar.RingDescriptor.canonical).

    The public constructor validates shape, ring and homogeneity. Results
    of the operations below are built through _unchecked because every
    operation preserves those invariants.
    """
    ring: RingDescriptor
    source: GradedObject
    target: GradedObject
    entries: Tuple[Tuple[Any, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "source", _as_object(self.source))
        object.__setattr__(self, "target", _as_object(self.target))
        canonical = self.ring.canonical
        rows = tuple(tuple(canonical(value) for value in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)

        if len(rows) != self.target.rank:
            raise ShapeMismatchError(
                f"matrix has {len(rows)} rows but target rank is {self.target.rank}")
        for row in rows:
            if len(row) != self.source.rank:
                raise ShapeMismatchError(
                    f"matrix row has {len(row)} entries but source rank is {self.source.rank}")
        check_object(self.ring, self.source)
        check_object(self.ring, self.target)
        check_homogeneous(self)

    @classmethod
    def _unchecked(cls, ring: RingDescriptor, source: GradedObject, target: GradedObject,
                   entries: Tuple[Tuple[Any, ...], ...]) -> 'Matrix':
        matrix = object.__new__(cls)
        object.__setattr__(matrix, "ring", ring)
        object.__setattr__(matrix, "source", source)
        object.__setattr__(matrix, "target", target)
        object.__setattr__(matrix, "entries", entries)
        return matrix

    @classmethod
    def from_rows(cls, ring: RingDescriptor, rows: Sequence[Sequence[Any]],
                  source: Optional[ObjectLike] = None,
                  target: Optional[ObjectLike] = None) -> 'Matrix':
        """
        Build a matrix from row lists of ints, Fractions, raw values or Scalars.

        Omitted objects are ungraded of the rank the rows imply.
        """
        rows = [list(row) for row in rows]
        if target is None:
            target = GradedObject.ungraded(len(rows))
        if source is None:
            if not rows:
                raise ShapeMismatchError("source rank cannot be inferred from zero rows")
            source = GradedObject.ungraded(len(rows[0]))
        return cls(ring, _as_object(source), _as_object(target),
                   tuple(tuple(row) for row in rows))

    @classmethod
    def zero(cls, ring: RingDescriptor, source: ObjectLike, target: ObjectLike) -> 'Matrix':
        source, target = _as_object(source), _as_object(target)
        zero = arithmetic(ring).zero
        return cls._unchecked(ring, source, target,
                              tuple((zero,) * source.rank for _ in range(target.rank)))

    @classmethod
    def identity(cls, ring: RingDescriptor, obj: ObjectLike) -> 'Matrix':
        obj = _as_object(obj)
        ops = arithmetic(ring)
        n = obj.rank
        return cls._unchecked(ring, obj, obj, tuple(
            tuple(ops.one if r == c else ops.zero for c in range(n)) for r in range(n)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.target.rank, self.source.rank)

    def entry(self, row: int, col: int) -> Scalar:
        return Scalar(self.ring, self.entries[row][col])

    def rows(self) -> List[List[Scalar]]:
        return [[Scalar(self.ring, value) for value in row] for row in self.entries]

    def __matmul__(self, other: 'Matrix') -> 'Matrix':
        return compose(self, other)

    def __add__(self, other: 'Matrix') -> 'Matrix':
        return add(self, other)

    def __sub__(self, other: 'Matrix') -> 'Matrix':
        return add(self, negate(other))

    def __neg__(self) -> 'Matrix':
        return negate(self)


def check_homogeneous(f: Matrix) -> None:
    """
    Re-run the graded homogeneity check on a matrix.

    Raises:
        HomogeneityError: If a nonzero entry has the wrong internal degree
    """
    if not f.ring.is_graded:
        return
    for r, row in enumerate(f.entries):
        for c, value in enumerate(row):
            degree = f.ring.degree_of(value)
            if degree is Homogeneity.ZERO_ANY_DEGREE:
                continue
            expected = f.target.gradings[r] - f.source.gradings[c]
            if degree is Homogeneity.NON_HOMOGENEOUS or degree != expected:
                raise HomogeneityError(
                    f"entry ({r}, {c}) must be homogeneous of degree {expected}")


def _same_ring(f: Matrix, g: Matrix) -> None:
    if f.ring != g.ring:
        raise RingMismatchError(f"matrices over {f.ring} and {g.ring}")


def compose(g: Matrix, f: Matrix) -> Matrix:
    """
    Composite g after f.

    Raises:
        ShapeMismatchError: If f.target differs from g.source
        RingMismatchError: If the rings differ
    """
    _same_ring(g, f)
    if f.target != g.source:
        raise ShapeMismatchError(
            f"cannot compose: target {list(f.target.gradings)} "
            f"!= source {list(g.source.gradings)}")
    ops = arithmetic(f.ring)
    zero, add_, mul = ops.zero, ops.add, ops.mul
    width = f.source.rank
    f_rows = f.entries
    rows = []
    for g_row in g.entries:
        out = [zero] * width
        for k, a in enumerate(g_row):
            if not a:
                continue
            for c, b in enumerate(f_rows[k]):
                if b:
                    out[c] = add_(out[c], mul(a, b))
        rows.append(tuple(out))
    return Matrix._unchecked(f.ring, f.source, g.target, tuple(rows))


def compose_all(factors: Sequence[Matrix]) -> Matrix:
    """Composite of factors[0] after factors[1] after ... (last applied first)."""
    if not factors:
        raise ValueError("compose_all needs at least one factor")
    result = factors[-1]
    for factor in reversed(factors[:-1]):
        result = compose(factor, result)
    return result


def add(f: Matrix, g: Matrix) -> Matrix:
    """Entrywise sum of two parallel morphisms."""
    _same_ring(f, g)
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatchError("cannot add morphisms with different source or target")
    add_ = arithmetic(f.ring).add
    return Matrix._unchecked(f.ring, f.source, f.target, tuple(
        tuple(add_(a, b) for a, b in zip(row_f, row_g))
        for row_f, row_g in zip(f.entries, g.entries)))


def negate(f: Matrix) -> Matrix:
    neg = arithmetic(f.ring).neg
    return Matrix._unchecked(f.ring, f.source, f.target,
                             tuple(tuple(neg(a) for a in row) for row in f.entries))


def scale(f: Matrix, factor: Union[int, Scalar]) -> Matrix:
    """Multiply every entry by an integer or a scalar of the same ring."""
    ops = arithmetic(f.ring)
    c = f.ring.canonical(factor)
    return Matrix._unchecked(f.ring, f.source, f.target,
                             tuple(tuple(ops.mul(c, a) for a in row) for row in f.entries))


def direct_sum(f: Matrix, g: Matrix) -> Matrix:
    """Block-diagonal sum f (+) g."""
    _same_ring(f, g)
    zero = arithmetic(f.ring).zero
    pad_right = (zero,) * g.source.rank
    pad_left = (zero,) * f.source.rank
    rows = tuple(row + pad_right for row in f.entries) + \
        tuple(pad_left + row for row in g.entries)
    return Matrix._unchecked(f.ring, f.source.direct_sum(g.source),
                             f.target.direct_sum(g.target), rows)


def from_blocks(blocks: Sequence[Sequence[Optional[Matrix]]],
                row_objects: Sequence[GradedObject],
                col_objects: Sequence[GradedObject],
                ring: Optional[RingDescriptor] = None) -> Matrix:
    """
    Assemble a block matrix.

    Args:
        blocks: Grid of blocks; block (r, c) maps col_objects[c] to row_objects[r].
            None stands for a zero block.
        row_objects: Target summands, top to bottom
        col_objects: Source summands, left to right
        ring: Required only when every block is None

    Returns:
        Matrix from the concatenated column objects to the concatenated row objects

    Raises:
        ShapeMismatchError: If a block does not fit its slot
    """
    present = [b for row in blocks for b in row if b is not None]
    if ring is None:
        if not present:
            raise ValueError("from_blocks needs a ring when every block is None")
        ring = present[0].ring
    if len(blocks) != len(row_objects):
        raise ShapeMismatchError(f"{len(blocks)} block rows for {len(row_objects)} row objects")
    zero = arithmetic(ring).zero
    rows: List[Tuple[Any, ...]] = []
    for r, block_row in enumerate(blocks):
        if len(block_row) != len(col_objects):
            raise ShapeMismatchError(
                f"block row {r} has {len(block_row)} blocks for {len(col_objects)} columns")
        pieces = []
        for c, block in enumerate(block_row):
            if block is None:
                pieces.append(None)
                continue
            if block.ring != ring:
                raise RingMismatchError(f"block ({r}, {c}) is over {block.ring}, not {ring}")
            if block.source != col_objects[c] or block.target != row_objects[r]:
                raise ShapeMismatchError(f"block ({r}, {c}) does not fit its slot")
            pieces.append(block.entries)
        for i in range(row_objects[r].rank):
            row: Tuple[Any, ...] = ()
            for c, piece in enumerate(pieces):
                row += piece[i] if piece is not None else (zero,) * col_objects[c].rank
            rows.append(row)
    return Matrix._unchecked(ring, GradedObject.concat(col_objects),
                             GradedObject.concat(row_objects), tuple(rows))


def to_blocks(m: Matrix, row_objects: Sequence[GradedObject],
              col_objects: Sequence[GradedObject]) -> List[List[Matrix]]:
    """Split a matrix into blocks; exact inverse of from_blocks."""
    if GradedObject.concat(row_objects) != m.target or GradedObject.concat(col_objects) != m.source:
        raise ShapeMismatchError("block objects do not concatenate to the matrix objects")
    grid = []
    row_start = 0
    for row_obj in row_objects:
        block_row = []
        col_start = 0
        for col_obj in col_objects:
            entries = tuple(
                m.entries[i][col_start:col_start + col_obj.rank]
                for i in range(row_start, row_start + row_obj.rank))
            block_row.append(Matrix._unchecked(m.ring, col_obj, row_obj, entries))
            col_start += col_obj.rank
        grid.append(block_row)
        row_start += row_obj.rank
    return grid


def is_zero(f: Matrix) -> bool:
    return not any(a for row in f.entries for a in row)


def is_identity(f: Matrix) -> bool:
    """
    Exact identity test.

    Raises:
        ShapeMismatchError: If source and target differ
    """
    if f.source != f.target:
        raise ShapeMismatchError("identity test needs equal source and target")
    one = arithmetic(f.ring).one
    for r, row in enumerate(f.entries):
        for c, a in enumerate(row):
            if r == c:
                if a != one:
                    return False
            elif a:
                return False
    return True
