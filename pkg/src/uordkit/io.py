"""JSON structure files.

A structure file describes one finite carrier and whatever is known about
it::

    {
      "carrier": ["0", "1"],
      "basis": [{"name": "leq", "pairs": [["0", "0"], ["0", "1"], ["1", "1"]]}],
      "meet": [["0", "0"], ["0", "1"]],
      "top": "1",
      "order": [["0", "1"]],
      "bco_funs": [{"name": "f", "map": {"0": "0", "1": "1"}}],
      "maps": {"f": {"0": "1", "1": "1"}},
      "pca": {"table": [["0", null], ...], "filter": ["0"], "k": "0", "s": "0"}
    }

Only ``carrier`` is required, and even it may be dropped for the SK
instance (``"pca": {"sk": {"budget": 10000}}``).  The uniform preorder is
built from ``basis`` when given, otherwise from ``order`` (plus
``bco_funs``).  ``order`` pairs are closed under reflexivity; unlisted
``bco_funs`` inputs are outside the domain.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ParseError, SchemaError, UnknownName
from .pca.combinators import Filter, RelPca
from .pca.opas import DEFAULT_BUDGET, SKOpas, TableOpas
from .relcore import BinRel, Carrier, FunTable, binary_table
from .uord import Basis, PartialFun, UniformPreorder, from_basis, import_ordered


@dataclass
class Structure:
    source: str
    digest: str
    carrier: Optional[Carrier] = None
    basis: Optional[Basis] = None
    order: Optional[BinRel] = None
    bco_funs: list = field(default_factory=list)
    meet: Optional[FunTable] = None
    top: Optional[int] = None
    maps: dict = field(default_factory=dict)
    pca: Optional[RelPca] = None
    auto_reflexive: bool = False
    _uord: Optional[UniformPreorder] = None

    @property
    def uord(self) -> UniformPreorder:
        if self._uord is None:
            if self.basis is not None:
                self._uord = from_basis(self.basis, auto_reflexive=self.auto_reflexive)
            elif self.order is not None:
                self._uord = import_ordered(self.carrier, self.order, self.bco_funs)
            else:
                raise SchemaError("basis: the file has neither 'basis' nor 'order'")
        return self._uord


def _expect(doc, key, kind, where=""):
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{where}{key}: expected {kind.__name__ if isinstance(kind, type) else 'value'}")
    return value


def _pairs(carrier: Carrier, raw, where):
    if not isinstance(raw, list):
        raise SchemaError(f"{where}: expected a list of pairs")
    out = []
    for p in raw:
        if not (isinstance(p, list) and len(p) == 2):
            raise SchemaError(f"{where}: pair {p!r} is not a two-element list")
        out.append((carrier.index(p[0]), carrier.index(p[1])))
    return out


def _table(carrier: Carrier, raw, where, partial=False):
    n = carrier.size
    if not (isinstance(raw, list) and len(raw) == n and all(isinstance(r, list) and len(r) == n for r in raw)):
        raise SchemaError(f"{where}: expected a {n}x{n} table")
    out = np.full((n, n), -1, dtype=np.int64)
    for a, row in enumerate(raw):
        for b, v in enumerate(row):
            if v is None:
                if not partial:
                    raise SchemaError(f"{where}: entry ({carrier.names[a]}, {carrier.names[b]}) is missing")
                continue
            out[a, b] = carrier.index(v)
    return out


def _pca(doc, carrier: Optional[Carrier]) -> RelPca:
    if not isinstance(doc, dict):
        raise SchemaError("pca: expected an object")
    if "sk" in doc:
        opts = doc["sk"] if isinstance(doc["sk"], dict) else {}
        budget = int(opts.get("budget", DEFAULT_BUDGET))
        return RelPca(SKOpas(budget), Filter.everything(), doc.get("strength", "weak"))
    if carrier is None:
        raise SchemaError("carrier: required for a table pca")
    if "table" not in doc:
        raise SchemaError("pca: needs 'table' or 'sk'")
    table = _table(carrier, doc["table"], "pca.table", partial=True)
    order = None
    if "order" in doc:
        order = _reflexive(carrier, _pairs(carrier, doc["order"], "pca.order"))
    k = carrier.index(doc["k"]) if doc.get("k") is not None else None
    s = carrier.index(doc["s"]) if doc.get("s") is not None else None
    filt = doc.get("filter", "all")
    members = range(carrier.size) if filt == "all" else [carrier.index(x) for x in filt]
    strength = doc.get("strength", "weak")
    if strength not in ("weak", "strong"):
        raise SchemaError("pca.strength: expected 'weak' or 'strong'")
    return RelPca(TableOpas(carrier, table, order, k, s), Filter.of(members), strength)


def _reflexive(carrier, pairs) -> BinRel:
    bits = np.eye(carrier.size, dtype=np.bool_)
    for a, b in pairs:
        bits[a, b] = True
    return BinRel(carrier, carrier, bits)


def parse_structure(doc, source: str = "<memory>", digest: str = "", auto_reflexive: bool = False) -> Structure:
    if not isinstance(doc, dict):
        raise SchemaError("top level: expected a JSON object")
    known = {"carrier", "basis", "meet", "top", "order", "bco_funs", "maps", "pca", "name", "description"}
    extra = sorted(set(doc) - known)
    if extra:
        raise SchemaError(f"{extra[0]}: unknown field")
    st = Structure(source, digest, auto_reflexive=auto_reflexive)
    if "carrier" in doc:
        names = _expect(doc, "carrier", list)
        if not names or not all(isinstance(x, (str, int)) for x in names):
            raise SchemaError("carrier: expected a non-empty list of names")
        try:
            st.carrier = Carrier(names)
        except ValueError as exc:
            raise SchemaError(f"carrier: {exc}") from None
    elif "pca" not in doc:
        raise SchemaError("carrier: missing")
    c = st.carrier
    if "basis" in doc:
        rels = []
        for i, entry in enumerate(_expect(doc, "basis", list)):
            if not isinstance(entry, dict) or "pairs" not in entry:
                raise SchemaError(f"basis[{i}]: expected an object with 'pairs'")
            name = str(entry.get("name", f"r{i}"))
            rels.append((name, BinRel.from_pairs(c, c, _pairs(c, entry["pairs"], f"basis[{i}].pairs"))))
        st.basis = Basis(c, rels)
    if "order" in doc:
        st.order = _reflexive(c, _pairs(c, doc["order"], "order"))
    for i, f in enumerate(doc.get("bco_funs", [])):
        if not isinstance(f, dict) or not isinstance(f.get("map"), dict):
            raise SchemaError(f"bco_funs[{i}]: expected an object with a 'map' object")
        values, domain = [0] * c.size, [False] * c.size
        for a, b in f["map"].items():
            values[c.index(a)] = c.index(b)
            domain[c.index(a)] = True
        st.bco_funs.append(PartialFun(str(f.get("name", f"f{i}")), tuple(values), tuple(domain)))
    if "meet" in doc:
        st.meet = binary_table(c, _table(c, doc["meet"], "meet"))
    if "top" in doc:
        st.top = c.index(doc["top"])
    for name, mapping in doc.get("maps", {}).items():
        if not isinstance(mapping, dict):
            raise SchemaError(f"maps.{name}: expected an object")
        missing = [x for x in c.names if x not in mapping]
        if missing:
            raise SchemaError(f"maps.{name}: no value for {missing[0]!r}")
        st.maps[name] = mapping
    if "pca" in doc:
        st.pca = _pca(doc["pca"], c)
    return st


def load_structure(path, auto_reflexive: bool = False) -> Structure:
    data = Path(path).read_bytes()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    try:
        return parse_structure(doc, str(path), hashlib.sha256(data).hexdigest(), auto_reflexive)
    except KeyError as exc:
        if isinstance(exc, UnknownName):
            raise
        raise SchemaError(f"{exc.args[0]}: missing") from None


def uord_to_json(u: UniformPreorder) -> list:
    return [{"name": name, "pairs": g.named_pairs()} for name, g in u.generators]
