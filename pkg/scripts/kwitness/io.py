"""
Document Format

Canonical JSON documents for every domain object:

    {"kind": ..., "payload": ..., "ring": "ZZ", "version": "1"}

Output is json.dumps with sorted keys, two-space indent, UTF-8 and a final
LF, so equal objects always serialize to equal bytes. Matrices are written
row-major (rows index the target), scalars in their canonical text form,
and degree-indexed families as objects keyed by the decimal degree.

Parsing reports the failing field path: DocumentSyntaxError for malformed
JSON, DocumentSchemaError for missing, extra or mistyped fields, and
DocumentValidationError for well-formed documents describing invalid
objects.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from .complex import (ChainMap, Complex, Homotopy, HomotopyEquivalence, NullHomotopy,
                      ValidationReport, validate_chain_map, validate_complex,
                      validate_equivalence, validate_null_homotopy)
from .errors import (DocumentError, DocumentSchemaError, DocumentSyntaxError,
                     DocumentValidationError, KWitnessError, RingDescriptorError, ScalarParseError)
from .grothendieck import KClass
from .matrix import GradedObject, Matrix
from .scalar import RingDescriptor, format_value, parse_value
from .witness import ConeNullHomotopy, Extraction, WitnessPair, check_witness_pair

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1"


class PayloadKind(Enum):
    """Payload kinds a document can carry."""
    COMPLEX = "complex"
    CHAIN_MAP = "chain_map"
    NULL_HOMOTOPY = "null_homotopy"
    EQUIVALENCE = "equivalence"
    WITNESS_PAIR = "witness_pair"
    KCLASS = "kclass"
    MATRIX = "matrix"
    CERTIFICATE = "certificate"


@dataclass
class Certificate:
    """
    A claim with the data needed to re-check it.

    identities names every identity the producer verified; sections holds
    the inputs and the witness as typed domain objects; notes holds plain
    strings such as the resolved sign convention.
    """
    claim: str
    identities: List[str]
    sections: Dict[str, Any] = field(default_factory=dict)
    notes: Dict[str, str] = field(default_factory=dict)


@dataclass
class Document:
    """A versioned payload over a ring."""
    ring: RingDescriptor
    kind: PayloadKind
    payload: Any
    version: str = FORMAT_VERSION


# -- encoding ---------------------------------------------------------------

def _encode_entries(m: Matrix) -> List[List[str]]:
    return [[format_value(m.ring, value) for value in row] for row in m.entries]


def _encode_matrix(m: Matrix) -> Dict[str, Any]:
    return {"source": list(m.source.gradings), "target": list(m.target.gradings),
            "entries": _encode_entries(m)}


def _encode_family(components: Dict[int, Matrix]) -> Dict[str, Any]:
    return {str(j): _encode_entries(m) for j, m in components.items()}


def _encode_complex(c: Complex) -> Dict[str, Any]:
    return {"min_degree": c.min_degree,
            "objects": [list(o.gradings) for o in c.objects],
            "differentials": [_encode_entries(d) for d in c.differentials]}


def _encode_payload(kind: PayloadKind, obj: Any) -> Any:
    if kind is PayloadKind.COMPLEX:
        return _encode_complex(obj)
    if kind is PayloadKind.MATRIX:
        return _encode_matrix(obj)
    if kind is PayloadKind.CHAIN_MAP:
        return {"source": _encode_complex(obj.source), "target": _encode_complex(obj.target),
                "components": _encode_family(obj.components)}
    if kind is PayloadKind.NULL_HOMOTOPY:
        return {"complex": _encode_complex(obj.complex),
                "components": _encode_family(obj.components)}
    if kind is PayloadKind.EQUIVALENCE:
        return {"source": _encode_complex(obj.source), "target": _encode_complex(obj.target),
                "phi": _encode_family(obj.phi.components),
                "psi": _encode_family(obj.psi.components),
                "H1": _encode_family(obj.h1.components),
                "H2": _encode_family(obj.h2.components)}
    if kind is PayloadKind.WITNESS_PAIR:
        return {"k": obj.k, "shift": obj.shift,
                "R": _encode_matrix(obj.R), "L": _encode_matrix(obj.L)}
    if kind is PayloadKind.KCLASS:
        return {"coefficients": {str(g): c for g, c in obj.coefficients.items()},
                "text": str(obj)}
    return {"claim": obj.claim, "identities": list(obj.identities),
            "notes": dict(obj.notes),
            "sections": {name: {"kind": _kind_of(value).value,
                                "value": _encode_payload(_kind_of(value), _unwrap(value))}
                         for name, value in obj.sections.items()}}


def _unwrap(obj: Any) -> Any:
    if isinstance(obj, ConeNullHomotopy):
        return obj.homotopy
    if isinstance(obj, Extraction):
        return obj.equivalence
    return obj


_KINDS = ((Complex, PayloadKind.COMPLEX), (ChainMap, PayloadKind.CHAIN_MAP),
          (NullHomotopy, PayloadKind.NULL_HOMOTOPY), (HomotopyEquivalence, PayloadKind.EQUIVALENCE),
          (WitnessPair, PayloadKind.WITNESS_PAIR), (KClass, PayloadKind.KCLASS),
          (Matrix, PayloadKind.MATRIX), (Certificate, PayloadKind.CERTIFICATE))


def _kind_of(obj: Any) -> PayloadKind:
    obj = _unwrap(obj)
    for cls, kind in _KINDS:
        if isinstance(obj, cls):
            return kind
    raise TypeError(f"no document kind for {type(obj).__name__}")


def _ring_of(obj: Any) -> Optional[RingDescriptor]:
    obj = _unwrap(obj)
    if isinstance(obj, WitnessPair):
        return obj.R.ring
    if isinstance(obj, Certificate):
        for value in obj.sections.values():
            ring = _ring_of(value)
            if ring is not None:
                return ring
        return None
    return getattr(obj, "ring", None)


def to_document(obj: Any, ring: Optional[RingDescriptor] = None) -> Document:
    """
    Wrap a domain object in a Document, inferring kind and ring.

    Args:
        obj: Complex, ChainMap, NullHomotopy, ConeNullHomotopy, HomotopyEquivalence,
            Extraction, WitnessPair, KClass, Matrix or Certificate
        ring: Used when the object carries no ring (classes); defaults to ZZ
    """
    kind = _kind_of(obj)
    inferred = _ring_of(obj)
    return Document(inferred or ring or RingDescriptor.integers(), kind, _unwrap(obj))


def _validation_report(kind: PayloadKind, obj: Any) -> Optional[ValidationReport]:
    if kind is PayloadKind.COMPLEX:
        return validate_complex(obj)
    if kind is PayloadKind.CHAIN_MAP:
        return validate_chain_map(obj)
    if kind is PayloadKind.NULL_HOMOTOPY:
        return validate_null_homotopy(obj)
    if kind is PayloadKind.EQUIVALENCE:
        return validate_equivalence(obj)
    if kind is PayloadKind.WITNESS_PAIR:
        return check_witness_pair(obj)
    return None


def _check_serializable(kind: PayloadKind, obj: Any, path: str) -> None:
    if kind is PayloadKind.CERTIFICATE:
        for name, value in obj.sections.items():
            _check_serializable(_kind_of(value), _unwrap(value), f"{path}.sections.{name}")
        return
    report = _validation_report(kind, obj)
    if report is not None and not report.ok:
        v = report.first
        raise DocumentValidationError(f"refusing to serialize: {report.describe()}",
                                      path=path, degree=v.degree)


def serialize(doc: Document) -> str:
    """
    Canonical UTF-8 JSON text of a document.

    Raises:
        DocumentValidationError: If the payload fails its validation
    """
    _check_serializable(doc.kind, doc.payload, "payload")
    body = {"version": doc.version, "ring": str(doc.ring), "kind": doc.kind.value,
            "payload": _encode_payload(doc.kind, doc.payload)}
    return json.dumps(body, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dumps(obj: Any, ring: Optional[RingDescriptor] = None) -> str:
    return serialize(to_document(obj, ring))


# -- decoding ---------------------------------------------------------------

def _fields(value: Any, path: str, required: List[str]) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise DocumentSchemaError("expected an object", path=path)
    missing = [k for k in required if k not in value]
    if missing:
        raise DocumentSchemaError(f"missing field(s) {', '.join(missing)}", path=path)
    extra = sorted(k for k in value if k not in required)
    if extra:
        raise DocumentSchemaError(f"unexpected field(s) {', '.join(extra)}", path=path)
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentSchemaError("expected an integer", path=path)
    return value


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise DocumentSchemaError("expected a string", path=path)
    return value


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise DocumentSchemaError("expected an array", path=path)
    return value


class _Decoder:
    """Decodes one payload tree over a fixed ring, tracking field paths."""

    def __init__(self, ring: RingDescriptor, check_claims: bool):
        self.ring = ring
        self.check_claims = check_claims

    def _construct(self, path: str, build: Callable[[], Any]) -> Any:
        try:
            return build()
        except DocumentError:
            raise
        except KWitnessError as e:
            raise DocumentValidationError(str(e), path=path, degree=e.degree)

    def _require(self, report: ValidationReport, path: str) -> None:
        if not report.ok:
            v = report.first
            raise DocumentValidationError(report.describe(), path=path, degree=v.degree)

    def gradings(self, value: Any, path: str) -> GradedObject:
        items = _list(value, path)
        return GradedObject(tuple(_int(g, f"{path}[{i}]") for i, g in enumerate(items)))

    def entries(self, value: Any, path: str, source: GradedObject,
                target: GradedObject) -> Matrix:
        rows = []
        for r, row in enumerate(_list(value, path)):
            values = []
            for c, text in enumerate(_list(row, f"{path}[{r}]")):
                cell = f"{path}[{r}][{c}]"
                try:
                    values.append(parse_value(self.ring, _str(text, cell)))
                except ScalarParseError as e:
                    raise DocumentSchemaError(str(e), path=cell)
            rows.append(tuple(values))
        return self._construct(path, lambda: Matrix(self.ring, source, target, tuple(rows)))

    def matrix(self, value: Any, path: str) -> Matrix:
        data = _fields(value, path, ["source", "target", "entries"])
        source = self.gradings(data["source"], f"{path}.source")
        target = self.gradings(data["target"], f"{path}.target")
        return self.entries(data["entries"], f"{path}.entries", source, target)

    def complex(self, value: Any, path: str) -> Complex:
        data = _fields(value, path, ["min_degree", "objects", "differentials"])
        min_degree = _int(data["min_degree"], f"{path}.min_degree")
        objects = [self.gradings(o, f"{path}.objects[{i}]")
                   for i, o in enumerate(_list(data["objects"], f"{path}.objects"))]
        raw = _list(data["differentials"], f"{path}.differentials")
        if len(raw) != max(len(objects) - 1, 0):
            raise DocumentValidationError(
                f"{len(objects)} objects need {max(len(objects) - 1, 0)} differentials",
                path=f"{path}.differentials")
        differentials = [self.entries(d, f"{path}.differentials[{i}]", objects[i], objects[i + 1])
                         for i, d in enumerate(raw)]
        c = self._construct(path, lambda: Complex(self.ring, min_degree, tuple(objects),
                                                  tuple(differentials)))
        self._require(validate_complex(c), path)
        return c

    def family(self, value: Any, path: str, source_of: Callable[[int], GradedObject],
               target_of: Callable[[int], GradedObject]) -> Dict[int, Matrix]:
        if not isinstance(value, dict):
            raise DocumentSchemaError("expected an object keyed by degree", path=path)
        result = {}
        for key, entries in value.items():
            try:
                j = int(key)
            except ValueError:
                raise DocumentSchemaError(f"degree key '{key}' is not an integer", path=path)
            if str(j) != key:
                raise DocumentSchemaError(f"degree key '{key}' is not canonical", path=path)
            result[j] = self.entries(entries, f"{path}.{key}", source_of(j), target_of(j))
        return result

    def chain_map(self, value: Any, path: str) -> ChainMap:
        data = _fields(value, path, ["source", "target", "components"])
        a = self.complex(data["source"], f"{path}.source")
        b = self.complex(data["target"], f"{path}.target")
        components = self.family(data["components"], f"{path}.components", a.obj, b.obj)
        f = self._construct(path, lambda: ChainMap(a, b, components))
        self._require(validate_chain_map(f), path)
        return f

    def null_homotopy(self, value: Any, path: str) -> NullHomotopy:
        data = _fields(value, path, ["complex", "components"])
        c = self.complex(data["complex"], f"{path}.complex")
        components = self.family(data["components"], f"{path}.components",
                                 c.obj, lambda j: c.obj(j - 1))
        h = self._construct(path, lambda: NullHomotopy(c, components))
        if self.check_claims:
            self._require(validate_null_homotopy(h), path)
        return h

    def equivalence(self, value: Any, path: str) -> HomotopyEquivalence:
        data = _fields(value, path, ["source", "target", "phi", "psi", "H1", "H2"])
        a1 = self.complex(data["source"], f"{path}.source")
        a2 = self.complex(data["target"], f"{path}.target")
        phi = self._construct(path, lambda: ChainMap(
            a1, a2, self.family(data["phi"], f"{path}.phi", a1.obj, a2.obj)))
        psi = self._construct(path, lambda: ChainMap(
            a2, a1, self.family(data["psi"], f"{path}.psi", a2.obj, a1.obj)))
        self._require(validate_chain_map(phi), f"{path}.phi")
        self._require(validate_chain_map(psi), f"{path}.psi")
        h1 = self._construct(path, lambda: Homotopy(
            a1, a1, self.family(data["H1"], f"{path}.H1", a1.obj, lambda j: a1.obj(j - 1))))
        h2 = self._construct(path, lambda: Homotopy(
            a2, a2, self.family(data["H2"], f"{path}.H2", a2.obj, lambda j: a2.obj(j - 1))))
        e = self._construct(path, lambda: HomotopyEquivalence(phi, psi, h1, h2))
        if self.check_claims:
            self._require(validate_equivalence(e), path)
        return e

    def witness_pair(self, value: Any, path: str) -> WitnessPair:
        data = _fields(value, path, ["k", "shift", "R", "L"])
        pair = WitnessPair(self.matrix(data["R"], f"{path}.R"), self.matrix(data["L"], f"{path}.L"),
                           _int(data["k"], f"{path}.k"), _int(data["shift"], f"{path}.shift"))
        if self.check_claims:
            self._require(check_witness_pair(pair), path)
        return pair

    def kclass(self, value: Any, path: str) -> KClass:
        data = _fields(value, path, ["coefficients", "text"])
        raw = data["coefficients"]
        if not isinstance(raw, dict):
            raise DocumentSchemaError("expected an object keyed by grading", path=f"{path}.coefficients")
        coefficients = {}
        for key, c in raw.items():
            try:
                coefficients[int(key)] = _int(c, f"{path}.coefficients.{key}")
            except ValueError:
                raise DocumentSchemaError(f"grading key '{key}' is not an integer",
                                          path=f"{path}.coefficients")
        kclass = KClass(coefficients)
        text = _str(data["text"], f"{path}.text")
        if str(kclass) != text:
            raise DocumentValidationError(f"text '{text}' does not match the coefficients",
                                          path=f"{path}.text")
        return kclass

    def certificate(self, value: Any, path: str) -> Certificate:
        data = _fields(value, path, ["claim", "identities", "sections", "notes"])
        identities = [_str(s, f"{path}.identities[{i}]")
                      for i, s in enumerate(_list(data["identities"], f"{path}.identities"))]
        notes_raw = data["notes"]
        if not isinstance(notes_raw, dict):
            raise DocumentSchemaError("expected an object", path=f"{path}.notes")
        notes = {k: _str(v, f"{path}.notes.{k}") for k, v in notes_raw.items()}
        sections_raw = data["sections"]
        if not isinstance(sections_raw, dict):
            raise DocumentSchemaError("expected an object", path=f"{path}.sections")
        sections = {}
        for name, section in sections_raw.items():
            section_path = f"{path}.sections.{name}"
            entry = _fields(section, section_path, ["kind", "value"])
            kind = _payload_kind(entry["kind"], f"{section_path}.kind")
            if kind is PayloadKind.CERTIFICATE:
                raise DocumentSchemaError("certificates do not nest", path=f"{section_path}.kind")
            sections[name] = self.payload(kind, entry["value"], f"{section_path}.value")
        return Certificate(_str(data["claim"], f"{path}.claim"), identities, sections, notes)

    def payload(self, kind: PayloadKind, value: Any, path: str) -> Any:
        return getattr(self, kind.value)(value, path)


def _payload_kind(value: Any, path: str) -> PayloadKind:
    try:
        return PayloadKind(_str(value, path))
    except ValueError:
        raise DocumentSchemaError(f"unknown payload kind '{value}'", path=path)


def parse(text: str, check_claims: bool = True) -> Document:
    """
    Parse and validate a document.

    Args:
        text: Document text
        check_claims: When False, null-homotopy, equivalence and witness-pair
            identities are left unchecked so a caller can report them as
            false claims rather than input errors

    Returns:
        Document whose payload is a validated domain object

    Raises:
        DocumentSyntaxError: Malformed JSON
        DocumentSchemaError: Missing, extra or mistyped fields; unknown version, ring or kind
        DocumentValidationError: Invalid objects (d∘d != 0 and so on), with the degree
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.msg, line=e.lineno)

    top = _fields(data, "", ["version", "ring", "kind", "payload"])
    version = _str(top["version"], "version")
    if version != FORMAT_VERSION:
        raise DocumentSchemaError(f"unsupported version '{version}'", path="version")
    try:
        ring = RingDescriptor.parse(_str(top["ring"], "ring"))
    except RingDescriptorError as e:
        raise DocumentSchemaError(str(e), path="ring")
    kind = _payload_kind(top["kind"], "kind")

    payload = _Decoder(ring, check_claims).payload(kind, top["payload"], "payload")
    logger.debug("parsed %s document over %s", kind.value, ring)
    return Document(ring, kind, payload, version)


def loads(text: str, check_claims: bool = True) -> Any:
    """Parse a document and return its payload."""
    return parse(text, check_claims).payload
