"""Session files: a YAML document naming a tower, xi, matrices, classes and words.

    tower:
      variables: [u, v]
      layers:
        - {name: t, radicand: u}
    xi: v
    seed: 0
    b: "w*t^2*s"                # optional, two-layer towers only
    matrices:
      A1: {vector: [1, 2, 3]}   # automorphism with this first column (side S unless side: S_op)
      N: {rows: [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
    classes:
      - {label: q, kind: three, distinguished: true}
      - {label: p, kind: three}
    words:
      W: |
        link q fwd
        aut S_op 1
        link p inv

Every error carries the line and column of the offending node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from ..abelianization import PointClass, Registry, Word, class_expr, parse_word
from ..errors import SBError, SessionSyntaxError, UnknownName, WordError
from ..fields import tower_make
from ..matrices import Mat3
from ..severi import S, S_OP, SBContext, aut_from_vector, context_make


class SessionIo(SBError):
    pass


@dataclass
class Session:
    path: str
    tower: object
    ctx: SBContext | None
    seed: int = 0
    b: object = None
    b_text: str | None = None
    matrices: dict = field(default_factory=dict)
    matrix_sides: dict = field(default_factory=dict)
    registry: Registry | None = None
    words: dict = field(default_factory=dict)

    def matrix(self, name: str) -> Mat3:
        if name not in self.matrices:
            raise UnknownName(f"no matrix named {name!r} in the session")
        return self.matrices[name]

    def word(self, name: str) -> Word:
        if name not in self.words:
            raise UnknownName(f"no word named {name!r} in the session")
        return self.words[name]

    def parse(self, text: str):
        return self.tower.parse(text)


def _pos(node):
    return node.start_mark.line + 1, node.start_mark.column + 1


def _fail(node, msg, cls=SessionSyntaxError):
    line, col = _pos(node)
    if cls is SessionSyntaxError:
        return SessionSyntaxError(msg, line, col)
    err = cls(f"line {line}, col {col}: {msg}")
    err.line, err.col = line, col
    return err


def _mapping(node, what):
    if not isinstance(node, yaml.MappingNode):
        raise _fail(node, f"{what} must be a mapping")
    out = {}
    for k, v in node.value:
        if not isinstance(k, yaml.ScalarNode):
            raise _fail(k, f"keys of {what} must be plain names")
        if k.value in out:
            raise _fail(k, f"duplicate key {k.value!r} in {what}")
        out[k.value] = (k, v)
    return out


def _seq(node, what):
    if not isinstance(node, yaml.SequenceNode):
        raise _fail(node, f"{what} must be a list")
    return node.value


def _scalar(node, what) -> str:
    if not isinstance(node, yaml.ScalarNode):
        raise _fail(node, f"{what} must be a single value")
    return node.value


def _expr_col(node) -> int:
    col = node.start_mark.column + 1
    return col + 1 if node.style in ("'", '"') else col


def _parse_expr(tower, node, what):
    text = _scalar(node, what)
    from ..fields.parse import parse_expression

    line, _ = _pos(node)
    try:
        return tower.coerce(parse_expression(text, tower.resolve, tower.one(), line, _expr_col(node)))
    except SessionSyntaxError:
        raise
    except UnknownName as exc:
        if not hasattr(exc, "line"):
            raise _fail(node, str(exc), UnknownName) from None
        raise
    except SBError as exc:
        raise _fail(node, f"{what}: {exc}") from None


def _allowed(keys: dict, allowed, what):
    for name, (k, _) in keys.items():
        if name not in allowed:
            raise _fail(k, f"unknown key {name!r} in {what}")


def _tower(node):
    keys = _mapping(node, "tower")
    _allowed(keys, {"variables", "layers", "order"}, "tower")
    if "variables" not in keys:
        raise _fail(node, "tower needs 'variables'")
    variables = [_scalar(v, "variable name") for v in _seq(keys["variables"][1], "variables")]
    layers = []
    if "layers" in keys:
        for item in _seq(keys["layers"][1], "layers"):
            lk = _mapping(item, "layer")
            _allowed(lk, {"name", "radicand"}, "layer")
            if "name" not in lk or "radicand" not in lk:
                raise _fail(item, "a layer needs 'name' and 'radicand'")
            layers.append((_scalar(lk["name"][1], "layer name"), lk["radicand"][1]))
    order = _scalar(keys["order"][1], "order") if "order" in keys else "deglex"
    # radicands are parsed in the base field first, to report positions
    from ..fields.tower import base_tower

    try:
        base = base_tower(variables)
    except SBError as exc:
        raise _fail(keys["variables"][1], str(exc)) from None
    rads = [(name, _parse_expr(base, rnode, f"radicand of {name}").to_expr()) for name, rnode in layers]
    try:
        return tower_make(variables, rads, order=order)
    except (SBError, ValueError) as exc:
        raise _fail(node, f"tower: {exc}") from None


def _matrix(session, name, node):
    T = session.tower
    if isinstance(node, yaml.SequenceNode):
        node_map = {"rows": (None, node)}
    else:
        node_map = _mapping(node, f"matrix {name}")
    _allowed(node_map, {"rows", "vector", "side"}, f"matrix {name}")
    side = None
    if "side" in node_map:
        side = _scalar(node_map["side"][1], "side")
        if side not in (S, S_OP):
            raise _fail(node_map["side"][1], f"side must be S or S_op, not {side!r}")
    if ("rows" in node_map) == ("vector" in node_map):
        raise _fail(node, f"matrix {name} needs exactly one of 'rows' or 'vector'")
    if "rows" in node_map:
        rows_node = node_map["rows"][1]
        rows = _seq(rows_node, "rows")
        if len(rows) != 3:
            raise _fail(rows_node, "a matrix needs three rows")
        out = []
        for r in rows:
            entries = _seq(r, "row")
            if len(entries) != 3:
                raise _fail(r, "a row needs three entries")
            out.append([_parse_expr(T, e, f"entry of {name}") for e in entries])
        return Mat3(T, out), side
    vec_node = node_map["vector"][1]
    vec = _seq(vec_node, "vector")
    if len(vec) != 3:
        raise _fail(vec_node, "a vector needs three entries")
    if session.ctx is None:
        raise _fail(vec_node, "'vector' matrices need xi")
    a, b, c = (_parse_expr(T, e, f"entry of {name}") for e in vec)
    try:
        return aut_from_vector(session.ctx, a, b, c, side=side or S), side or S
    except SBError as exc:
        raise _fail(vec_node, f"matrix {name}: {exc}") from None


def _classes(node):
    out = []
    for item in _seq(node, "classes"):
        keys = _mapping(item, "class")
        _allowed(keys, {"label", "kind", "distinguished"}, "class")
        if "label" not in keys or "kind" not in keys:
            raise _fail(item, "a class needs 'label' and 'kind'")
        dist = False
        if "distinguished" in keys:
            raw = _scalar(keys["distinguished"][1], "distinguished").lower()
            if raw not in ("true", "false", "yes", "no"):
                raise _fail(keys["distinguished"][1], "distinguished must be true or false")
            dist = raw in ("true", "yes")
        try:
            out.append(PointClass(_scalar(keys["label"][1], "label"), _scalar(keys["kind"][1], "kind"), dist))
        except WordError as exc:
            raise _fail(item, str(exc)) from None
    try:
        return Registry(out)
    except WordError as exc:
        raise _fail(node, str(exc)) from None


def _word(session, name, node):
    text = _scalar(node, f"word {name}")
    first = node.start_mark.line + 1
    # block scalars start on the line after the indicator
    offset = first if node.style in ("|", ">") else first - 1

    def resolve(token, side):
        if token in session.matrices:
            return session.matrices[token], token
        try:
            return class_expr(session.tower, token), None
        except UnknownName as exc:
            raise WordError(f"unknown matrix or name in {token!r}: {exc}") from None
        except SBError as exc:
            raise WordError(str(exc)) from None

    try:
        w = parse_word(text, resolve)
    except WordError as exc:
        line = offset + getattr(exc, "line", 1)
        cls = UnknownName if "unknown matrix" in str(exc) else SessionSyntaxError
        if cls is SessionSyntaxError:
            raise SessionSyntaxError(f"word {name}: {exc}", line, node.start_mark.column + 1) from None
        err = UnknownName(f"line {line}: word {name}: {exc}")
        err.line, err.col = line, node.start_mark.column + 1
        raise err from None
    if session.registry is not None:
        from ..abelianization import word_check

        reason = word_check(w, session.registry)
        if reason is not None:
            raise _fail(node, f"word {name}: {reason}")
    return w


def parse_session_text(text: str, path: str = "<string>") -> Session:
    try:
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (1, 1)
        raise SessionSyntaxError(exc.problem or "malformed document", line, col) from None
    except yaml.YAMLError as exc:
        raise SessionSyntaxError(str(exc), 1, 1) from None
    if root is None:
        raise SessionSyntaxError("empty session", 1, 1)
    keys = _mapping(root, "session")
    _allowed(keys, {"tower", "xi", "seed", "b", "matrices", "classes", "words"}, "session")
    if "tower" not in keys:
        raise _fail(root, "session needs a 'tower'")
    tower = _tower(keys["tower"][1])
    ctx = None
    if "xi" in keys:
        xnode = keys["xi"][1]
        xi = _parse_expr(tower, xnode, "xi")
        try:
            ctx = context_make(tower, xi)
        except (SBError, ValueError) as exc:
            raise _fail(xnode, f"xi: {exc}") from None
    seed = 0
    if "seed" in keys:
        raw = _scalar(keys["seed"][1], "seed")
        if not raw.isdigit():
            raise _fail(keys["seed"][1], "seed must be a non-negative integer")
        seed = int(raw)
    session = Session(path, tower, ctx, seed)
    if "b" in keys:
        session.b = _parse_expr(tower, keys["b"][1], "b")
        session.b_text = _scalar(keys["b"][1], "b")
    names = set()
    if "matrices" in keys:
        for name, (knode, vnode) in _mapping(keys["matrices"][1], "matrices").items():
            names.add(name)
            session.matrices[name], session.matrix_sides[name] = _matrix(session, name, vnode)
    if "classes" in keys:
        session.registry = _classes(keys["classes"][1])
    if "words" in keys:
        for name, (knode, vnode) in _mapping(keys["words"][1], "words").items():
            if name in names:
                raise _fail(knode, f"name {name!r} is already used by a matrix")
            session.words[name] = _word(session, name, vnode)
    return session


def parse_session(path: str) -> Session:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SessionIo(f"cannot read session {path}: {exc.strerror or exc}") from None
    return parse_session_text(text, path)
