"""Project config (YAML) and presentation files (JSON).

Config layout::

    groups:                      # name -> definition
      H0: {cyclic: 2, gen: x}
      H1: {cyclic: 3}
      A5: {alternating: 5}
      K:  {elements: [e, x], table: [[e, x], [x, e]]}
    hosts:                       # name -> simple group with generators s, t, ...
      big: {group: A5, gens: ["(12345)", "(12)(34)"]}
    family:                      # members in index order
      - {group: H0, host: big, h: x}
      - {group: H1, host: big, embedding: {g: "(123)"}, h: g, h_bar: g^2}
    construction: {theorem: a, n: 23, force: false}
    verification: {lambda: 1/6, min_length: 7}
    search: {bound: 64, coprime6: true, jobs: 1}
    output: {presentation: build.json}

``host`` defaults to A5 with generators (12345), (12)(34); a missing
``embedding`` is searched for.  For the indexed variant the construction
section also takes ``J``, ``alpha`` (list of ``[i, j, image]``), ``L``
(list of pairs) and ``h_indexed`` (member -> list of element-name pairs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from .cancellation import VerificationParams
from .construct import ConstructionError, ConstructionParams, FamilyMemberSpec, Presentation, TaggedRelator, TheoremBSpec
from .freeprod import FactorFamily, Letter, LiteralError
from .groups import (
    GroupError,
    GroupTable,
    Homomorphism,
    SimpleFactorSpec,
    alternating_group,
    cyclic_group,
    default_host,
    find_embedding,
)

FORMAT = "smallcancel-presentation"
VERSION = 1


class ConfigError(ValueError):
    """Malformed input; carries a source position when one is known."""

    def __init__(self, msg: str, line: int | None = None, col: int | None = None, source: str = "config"):
        self.line, self.col = line, col
        where = f"{source} line {line}, column {col}: " if line is not None else f"{source}: "
        super().__init__(where + msg)


# ------------------------------------------------------------ config

class _Doc:
    """YAML document with node positions for error messages."""

    def __init__(self, text: str):
        try:
            loader = yaml.SafeLoader(text)
            try:
                self.node = loader.get_single_node()
                self.data = loader.construct_document(self.node) if self.node is not None else {}
            finally:
                loader.dispose()
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark or exc.context_mark
            raise ConfigError(exc.problem or str(exc), mark.line + 1 if mark else None,
                              mark.column + 1 if mark else None) from None
        if not isinstance(self.data, dict):
            raise ConfigError("top level must be a mapping", 1, 1)

    def _node(self, path: tuple) -> Any:
        node = self.node
        best = node
        for key in path:
            nxt = None
            if isinstance(node, yaml.MappingNode):
                for k, v in node.value:
                    if k.value == str(key):
                        nxt = v
                        break
            elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
                nxt = node.value[key]
            if nxt is None:
                break
            node = best = nxt
        return best

    def error(self, path: tuple, msg: str) -> ConfigError:
        mark = self._node(path).start_mark
        return ConfigError(msg, mark.line + 1, mark.column + 1)


@dataclass
class ProjectConfig:
    groups: dict[str, GroupTable]
    hosts: dict[str, SimpleFactorSpec]
    family: tuple[FamilyMemberSpec, ...]
    theorem: str = "a"
    n: int = 23
    force: bool = False
    theorem_b: TheoremBSpec | None = None
    verification: VerificationParams = field(default_factory=VerificationParams)
    bound: int = 64
    coprime6: bool = False
    jobs: int = 1
    output: str | None = None

    def construction(self, n: int | None = None, force: bool | None = None) -> ConstructionParams:
        return ConstructionParams(self.n if n is None else n, self.family,
                                  self.force if force is None else force)


def _group(doc: _Doc, name: str, spec: Any) -> GroupTable:
    path = ("groups", name)
    if not isinstance(spec, dict):
        raise doc.error(path, f"group {name} must be a mapping")
    try:
        if "cyclic" in spec:
            return cyclic_group(int(spec["cyclic"]), str(spec.get("gen", "g")), name)
        if "alternating" in spec:
            return alternating_group(int(spec["alternating"]))
        if "elements" in spec:
            return GroupTable.from_names(name, [str(x) for x in spec["elements"]],
                                         [[str(x) for x in row] for row in spec.get("table", [])])
    except (GroupError, TypeError, ValueError) as exc:
        raise doc.error(path, str(exc)) from None
    raise doc.error(path, f"group {name}: expected one of cyclic, alternating, elements")


def _elem(doc: _Doc, path: tuple, g: GroupTable, x: Any) -> int:
    try:
        return g.index(str(x) if not isinstance(x, int) else x)
    except (GroupError, ValueError, IndexError):
        raise doc.error(path, f"{x!r} is not an element of {g.name}") from None


def load_config(path: str | Path) -> ProjectConfig:
    return parse_config(Path(path).read_text())


def parse_config(text: str) -> ProjectConfig:
    doc = _Doc(text)
    data = doc.data
    groups: dict[str, GroupTable] = {}
    for name, spec in (data.get("groups") or {}).items():
        groups[str(name)] = _group(doc, str(name), spec)

    def ref(path, name):
        if name not in groups:
            raise doc.error(path, f"unknown group {name!r}")
        return groups[name]

    hosts: dict[str, SimpleFactorSpec] = {}
    for name, spec in (data.get("hosts") or {}).items():
        p = ("hosts", name)
        if not isinstance(spec, dict) or "group" not in spec:
            raise doc.error(p, f"host {name} needs a group")
        g = ref(p + ("group",), str(spec["group"]))
        gens = spec.get("gens") or []
        if not gens:
            raise doc.error(p, f"host {name} needs generators")
        hosts[str(name)] = SimpleFactorSpec(g, tuple(_elem(doc, p + ("gens", k), g, x) for k, x in enumerate(gens)))

    members = []
    fam = data.get("family")
    if not isinstance(fam, list):
        raise doc.error(("family",), "family must be a list of members")
    for i, spec in enumerate(fam):
        p = ("family", i)
        if not isinstance(spec, dict) or "group" not in spec:
            raise doc.error(p, "member needs a group")
        g = ref(p + ("group",), str(spec["group"]))
        if "host" in spec:
            if spec["host"] not in hosts:
                raise doc.error(p + ("host",), f"unknown host {spec['host']!r}")
            host = hosts[spec["host"]]
        else:
            host = default_host()
        if spec.get("embedding"):
            mapping = spec["embedding"]
            if not isinstance(mapping, dict):
                raise doc.error(p + ("embedding",), "embedding must map generators to host elements")
            try:
                emb = Homomorphism.from_names(g, host.group, {str(k): str(v) for k, v in mapping.items()})
            except (GroupError, ValueError) as exc:
                raise doc.error(p + ("embedding",), str(exc)) from None
        else:
            emb = find_embedding(g, host.group)
            if emb is None:
                # a semantic failure, not a syntax one
                raise ConstructionError(f"member {i}: {g.name} does not embed in {host.group.name}")
        if spec.get("h") is None:
            raise doc.error(p, "member needs a distinguished element h")
        h = _elem(doc, p + ("h",), g, spec["h"])
        hb = spec.get("h_bar")
        h_bar = None if hb is None else _elem(doc, p + ("h_bar",), g, hb)
        members.append(FamilyMemberSpec(g, host, emb, h, h_bar))

    cfg = ProjectConfig(groups, hosts, tuple(members))
    con = data.get("construction") or {}
    cfg.theorem = str(con.get("theorem", "a")).lower()
    if cfg.theorem not in ("a", "b"):
        raise doc.error(("construction", "theorem"), "theorem must be a or b")
    cfg.n = int(con.get("n", 23))
    cfg.force = bool(con.get("force", False))
    if cfg.theorem == "b" or "J" in con:
        cfg.theorem_b = _theorem_b(doc, con, members)
    ver = data.get("verification") or {}
    try:
        cfg.verification = VerificationParams(Fraction(str(ver.get("lambda", "1/6"))),
                                              int(ver.get("min_length", 7)))
    except (ValueError, ZeroDivisionError) as exc:
        raise doc.error(("verification",), str(exc)) from None
    search = data.get("search") or {}
    cfg.bound = int(search.get("bound", 64))
    cfg.coprime6 = bool(search.get("coprime6", False))
    cfg.jobs = int(search.get("jobs", 1))
    cfg.output = (data.get("output") or {}).get("presentation")
    return cfg


def _theorem_b(doc: _Doc, con: dict, members: list[FamilyMemberSpec]) -> TheoremBSpec:
    p = ("construction",)
    J = tuple(int(j) for j in con.get("J", [0]))
    alpha = None
    if con.get("alpha") is not None:
        alpha = {}
        for k, row in enumerate(con["alpha"]):
            if not isinstance(row, list) or len(row) != 3:
                raise doc.error(p + ("alpha", k), "alpha entries are [i, j, image]")
            alpha[(int(row[0]), int(row[1]))] = int(row[2])
    L = None
    if con.get("L") is not None:
        L = tuple((int(a), int(b)) for a, b in con["L"])
    h_indexed = {}
    for k, pairs in (con.get("h_indexed") or {}).items():
        k = int(k)
        if not 0 <= k < len(members):
            raise doc.error(p + ("h_indexed",), f"no member {k}")
        g = members[k].group
        h_indexed[k] = tuple((_elem(doc, p + ("h_indexed", k), g, x), _elem(doc, p + ("h_indexed", k), g, y))
                             for x, y in pairs)
    return TheoremBSpec(J, alpha, L, h_indexed)


# ------------------------------------------------------------ presentations

def presentation_to_dict(pres: Presentation) -> dict:
    fam = pres.family
    return {
        "format": FORMAT,
        "version": VERSION,
        "meta": pres.meta,
        "factors": [{"id": fid, "name": g.name, "elements": list(g.elements),
                     "table": [list(row) for row in g.mul]} for fid, g in fam.factors],
        "generators": {fid: [fam.letter_name(x) for x in gens] for fid, gens in pres.generators.items()},
        "relators": [{"tag": r.tag, "indices": list(r.indices), "word": r.word.serialize()}
                     for r in pres.relators],
    }


def dumps_presentation(pres: Presentation) -> str:
    return json.dumps(presentation_to_dict(pres), indent=1) + "\n"


def save_presentation(pres: Presentation, path: str | Path) -> None:
    Path(path).write_text(dumps_presentation(pres))


def loads_presentation(text: str, source: str = "presentation") -> Presentation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, exc.lineno, exc.colno, source) from None
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise ConfigError(f"not a {FORMAT} file", source=source)
    if data.get("version") != VERSION:
        raise ConfigError(f"unsupported version {data.get('version')!r}", source=source)
    try:
        factors = tuple((f["id"], GroupTable(f["name"], tuple(f["elements"]),
                                             tuple(tuple(row) for row in f["table"])))
                        for f in data["factors"])
        fam = FactorFamily(factors)
        rels = []
        for k, r in enumerate(data["relators"]):
            try:
                w = fam.parse(r["word"])
            except LiteralError as exc:
                raise ConfigError(f"relator {k}: {exc}", source=source) from None
            rels.append(TaggedRelator(w, r["tag"], tuple(r["indices"])))
        gens = {}
        for fid, names in data["generators"].items():
            letters = []
            for name in names:
                w = fam.parse(name)
                if len(w) != 1:
                    raise ConfigError(f"generator {name!r} is not a letter", source=source)
                letters.append(Letter(*w.letters[0]))
            gens[fid] = tuple(letters)
        return Presentation(fam, rels, gens, data.get("meta") or {})
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"missing or malformed field {exc}", source=source) from None
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), source=source) from None


def load_presentation(path: str | Path) -> Presentation:
    return loads_presentation(Path(path).read_text(), str(path))
