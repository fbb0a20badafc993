"""JSON description files and the catalog.

Integers that do not fit in a signed 64-bit word are written as decimal
strings; readers accept either form, so every file round-trips bit-exactly.
"""
from dataclasses import dataclass, field
import json
from pathlib import Path

import sympy

from .cremona import RationalMapP2, form_to_string
from .curves import RationalSubspace
from .errors import DataConsistencyError
from .lattice import PolarizedLattice
from .maps import PullbackMapData, Stability

DEFAULT_CATALOG = Path(__file__).with_name("catalog")
_INT64 = 2**63


def enc_int(x):
    x = int(x)
    return str(x) if abs(x) >= _INT64 else x


def dec_int(x):
    if isinstance(x, bool):
        raise DataConsistencyError("boolean where an integer was expected")
    if isinstance(x, int):
        return x
    if isinstance(x, str) and x.lstrip("-").isdigit():
        return int(x)
    raise DataConsistencyError(f"not an integer: {x!r}")


def _vec(v):
    return [dec_int(x) for x in v]


def _mat(m):
    return [_vec(r) for r in m]


def _enc_vec(v):
    return [enc_int(x) for x in v]


def _enc_mat(m):
    return [_enc_vec(r) for r in m]


# -- lattices ----------------------------------------------------------------


def lattice_from_dict(d):
    Q = _mat(d["intersection"])
    if "rank" in d and d["rank"] != len(Q):
        raise DataConsistencyError(f"rank {d['rank']} but a {len(Q)}x{len(Q)} intersection matrix")
    curves = [(c["label"], _vec(c["class"])) for c in d.get("known_curves", [])]
    return PolarizedLattice.build(Q, _vec(d["canonical"]), dec_int(d.get("pa", 0)),
                                  d.get("basis_labels"), curves)


def lattice_to_dict(L):
    return {
        "rank": L.rank,
        "intersection": _enc_mat(L.intersection),
        "canonical": _enc_vec(L.canonical.coeffs),
        "pa": enc_int(L.pa),
        "basis_labels": list(L.basis_labels),
        "known_curves": [{"label": lab, "class": _enc_vec(C.coeffs)} for lab, C in L.known_curves],
    }


# -- pullback data -----------------------------------------------------------


def stability_from_dict(d):
    if d is None:
        return Stability()
    return Stability(d.get("kind", "unknown"), d.get("horizon"), d.get("source", ""), d.get("witness"))


def stability_to_dict(s):
    out = {"kind": s.kind}
    if s.horizon is not None:
        out["horizon"] = s.horizon
    if s.source:
        out["source"] = s.source
    if s.witness is not None:
        out["witness"] = s.witness
    return out


def map_from_dict(d, lattice):
    return PullbackMapData.build(
        lattice, _mat(d["P"]), _mat(d["P_inv"]) if d.get("P_inv") is not None else None,
        [_vec(c) for c in d.get("exceptional", [])], [_vec(c) for c in d.get("contracted", [])],
        stability_from_dict(d.get("stability")),
        [_vec(r) for r in d["decomposition"]] if d.get("decomposition") is not None else None)


def map_to_dict(M, lattice_ref):
    out = {"lattice": lattice_ref, "P": _enc_mat(M.P)}
    if M.P_inv is not None:
        out["P_inv"] = _enc_mat(M.P_inv)
    out["exceptional"] = [_enc_vec(E.coeffs) for E in M.exceptional]
    out["contracted"] = [_enc_vec(V.coeffs) for V in M.contracted]
    if M.decomposition is not None:
        out["decomposition"] = [list(r) for r in M.decomposition]
    out["stability"] = stability_to_dict(M.stability)
    return out


# -- coordinate maps ---------------------------------------------------------


def coordinate_from_dict(d, name=""):
    return RationalMapP2.build(
        d["forms"], [_vec(p) for p in d.get("fundamental_points", [])],
        [(c["label"], c["form"], _vec(c["image"])) for c in d.get("contracted_curves", [])],
        name=d.get("name", name))


def coordinate_to_dict(M, inverse_ref=None):
    out = {"name": M.name, "forms": [form_to_string(f) for f in M.forms],
           "fundamental_points": [_enc_vec(p) for p in M.fundamental_points],
           "contracted_curves": [{"label": lab, "form": form_to_string(f), "image": _enc_vec(p)}
                                 for lab, f, p in M.contracted_curves]}
    if inverse_ref:
        out["inverse"] = inverse_ref
    return out


# -- curve families ----------------------------------------------------------


_N, _T = sympy.Symbol("n", integer=True, nonnegative=True), sympy.Symbol("t")


def family_from_dict(d):
    """A function n -> RationalSubspace from generator expressions in t and n."""
    gens = [sympy.sympify(g, locals={"n": _N, "t": _T}) for g in d["generators"]]
    rng = d.get("range")

    def family(n):
        if rng:
            lo, hi = (sympy.sympify(x, locals={"n": _N}).subs(_N, n) for x in rng)
            elems = [g.subs({_N: n, sympy.Symbol("k"): k}) for g in gens for k in range(int(lo), int(hi) + 1)]
        else:
            elems = [g.subs(_N, n) for g in gens]
        return RationalSubspace.span(elems)

    return family


def expected_sequence(expr, n_values):
    e = sympy.sympify(expr, locals={"n": _N})
    return [int(e.subs(_N, n)) for n in n_values]


# -- catalog -----------------------------------------------------------------


@dataclass
class CatalogEntry:
    name: str
    kind: str
    root: Path
    spec: dict
    _cache: dict = field(default_factory=dict, repr=False)

    def _load(self, key, loader):
        if key not in self._cache:
            self._cache[key] = loader()
        return self._cache[key]

    def _read(self, rel):
        return read_json(self.root / rel)

    @property
    def map_path(self):
        return self.root / self.spec["map"] if "map" in self.spec else None

    def lattice(self):
        def load():
            m = self._read(self.spec["map"])
            return lattice_from_dict(read_json(self.map_path.parent / m["lattice"]))
        return self._load("lattice", load)

    def pullback(self):
        if "map" not in self.spec:
            raise DataConsistencyError(f"entry {self.name} has no map file")
        return self._load("map", lambda: map_from_dict(self._read(self.spec["map"]), self.lattice()))

    def ample(self):
        return self.lattice().divisor(_vec(self.spec["ample"]))

    def coordinate(self):
        if "coordinate" not in self.spec:
            raise DataConsistencyError(f"entry {self.name} has no coordinate map")

        def load():
            d = self._read(self.spec["coordinate"])
            M = coordinate_from_dict(d, self.name)
            inv_ref = d.get("inverse")
            if inv_ref:
                Mi = coordinate_from_dict(self._read(Path(self.spec["coordinate"]).parent / inv_ref))
            else:
                Mi = M
            return M, Mi
        return self._load("coord", load)

    def family(self):
        return self._load("family", lambda: family_from_dict(self._read(self.spec["family"])))

    def family_spec(self):
        return self._read(self.spec["family"])

    @property
    def expected(self):
        return self.spec.get("expected", {})


class Catalog:
    def __init__(self, root=None):
        self.root = Path(root) if root else DEFAULT_CATALOG
        index = read_json(self.root / "index.json")
        self.entries = {}
        for e in index["entries"]:
            self.entries[e["name"]] = CatalogEntry(e["name"], e["kind"], self.root, e)

    def __getitem__(self, name):
        try:
            return self.entries[name]
        except KeyError:
            raise KeyError(f"no catalog entry {name!r}; known: {', '.join(self.entries)}") from None

    def __iter__(self):
        return iter(self.entries.values())

    def of_kind(self, *kinds):
        return [e for e in self if e.kind in kinds]

    def files(self):
        return sorted(p for p in self.root.rglob("*.json"))


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj) + "\n")


def dumps(obj, indent=0):
    """Indented JSON with lists of scalars (and matrices of them) kept on one line."""
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj) or \
                all(isinstance(v, list) and all(not isinstance(w, (dict, list)) for w in v) for v in obj):
            return json.dumps(obj)
        return "[\n" + ",\n".join(inner + dumps(v, indent + 2) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj)


def roundtrip(path):
    """Parse, serialize and re-parse a catalog file; True when both parses agree."""
    path = Path(path)
    d = read_json(path)
    kind = path.parent.name
    if kind == "lattices":
        first = lattice_from_dict(d)
        again = lattice_from_dict(_through_text(lattice_to_dict(first)))
        return first == again and _ints_exact(d, lattice_to_dict(first))
    if kind == "maps":
        L = lattice_from_dict(read_json(path.parent / d["lattice"]))
        first = map_from_dict(d, L)
        again = map_from_dict(_through_text(map_to_dict(first, d["lattice"])), L)
        return first == again
    if kind == "coordinate":
        first = coordinate_from_dict(d)
        again = coordinate_from_dict(_through_text(coordinate_to_dict(first, d.get("inverse"))))
        return (first.forms, first.fundamental_points, first.contracted_curves) == \
            (again.forms, again.fundamental_points, again.contracted_curves)
    return _through_text(d) == d


def _through_text(obj):
    return json.loads(json.dumps(obj))


def _ints_exact(src, out):
    """Integer payloads agree after normalizing decimal-string spellings."""
    return _canon(src.get("intersection")) == _canon(out["intersection"])


def _canon(obj):
    if isinstance(obj, list):
        return [_canon(v) for v in obj]
    if isinstance(obj, str) and obj.lstrip("-").isdigit():
        return int(obj)
    return obj
