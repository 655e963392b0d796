"""Line-oriented instance/stream formats, canonical JSON reports, snapshots.

Everything here is diff-able text.  Floats are serialized with 17
significant digits and reports use a fixed key order, so a replay of the
same inputs is byte-identical.  Snapshots carry a version header and a
trailing sha256 checksum over the body.
"""

from __future__ import annotations

import hashlib
import math

from .core import Mode, VertexAttrs
from .errors import SnapshotError

SNAPSHOT_MAGIC = "levelcover-snapshot"
SNAPSHOT_VERSION = 1


class ParseError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__("%s:%d: %s" % (path, lineno, message))
        self.path = path
        self.lineno = lineno


def fmt_float(x):
    if x != x or x in (math.inf, -math.inf):
        raise ValueError("non-finite float in report: %r" % x)
    return "%.17g" % x


def canonical_json(obj):
    """JSON with insertion key order and %.17g floats (replay-stable)."""
    if isinstance(obj, dict):
        return "{" + ", ".join(
            '"%s": %s' % (k, canonical_json(v)) for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if obj is None:
        return "null"
    raise TypeError("cannot serialize %r" % (obj,))


# -- instance files --------------------------------------------------------------


class InstanceSpec:
    """Parsed instance file: everything new_instance needs, plus the mode."""

    def __init__(self):
        self.beta = None
        self.epsilon = None
        self.mode = None
        self.f = None
        self.d_max = None
        self.budget = None
        self.vertices = []

    def require_complete(self, path):
        if self.beta is None and self.mode is not Mode.WEIGHTED_VC:
            raise ParseError(path, 0, "missing 'param beta'")
        if self.epsilon is None:
            raise ParseError(path, 0, "missing 'param epsilon'")
        if self.mode is None:
            raise ParseError(path, 0, "missing 'mode' line")
        if not self.vertices:
            raise ParseError(path, 0, "no vertices declared")


def _parse_kv(tokens, path, lineno):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(path, lineno, "expected key=value, got %r" % tok)
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def parse_instance(text, path="<instance>"):
    spec = InstanceSpec()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0]
        try:
            if kind == "param":
                if len(toks) != 3 or toks[1] not in ("beta", "epsilon"):
                    raise ValueError("expected 'param beta|epsilon <float>'")
                setattr(spec, toks[1], float(toks[2]))
            elif kind == "mode":
                spec.mode = Mode(toks[1])
                kv = _parse_kv(toks[2:], path, lineno)
                if "f" in kv:
                    spec.f = int(kv.pop("f"))
                if "dmax" in kv:
                    spec.d_max = int(kv.pop("dmax"))
                if kv:
                    raise ValueError("unknown mode options %r" % sorted(kv))
            elif kind == "budget":
                spec.budget = int(toks[1])
            elif kind == "vertex":
                vid = int(toks[1])
                kv = _parse_kv(toks[2:], path, lineno)
                cost = float(kv.pop("cost"))
                cap = int(kv.pop("cap", "1"))
                if kv:
                    raise ValueError("unknown vertex options %r" % sorted(kv))
                spec.vertices.append(VertexAttrs(vid, cost, cap))
            else:
                raise ValueError("unknown directive %r" % kind)
        except ParseError:
            raise
        except (ValueError, KeyError, IndexError) as exc:
            raise ParseError(path, lineno, str(exc)) from exc
    spec.require_complete(path)
    if spec.budget is None:
        spec.budget = len(spec.vertices)
    if spec.beta is None:
        spec.beta = 1.0 + spec.epsilon
    return spec


def render_instance(spec):
    lines = ["param beta %s" % fmt_float(spec.beta),
             "param epsilon %s" % fmt_float(spec.epsilon)]
    mode_line = "mode %s" % spec.mode.value
    if spec.f is not None:
        mode_line += " f=%d" % spec.f
    if spec.d_max is not None:
        mode_line += " dmax=%d" % spec.d_max
    lines.append(mode_line)
    lines.append("budget %d" % spec.budget)
    for a in sorted(spec.vertices, key=lambda a: a.id):
        lines.append("vertex %d cost=%s cap=%d" % (a.id, fmt_float(a.cost), a.capacity))
    return "\n".join(lines) + "\n"


# -- stream files -----------------------------------------------------------------


class StreamOp:
    __slots__ = ("kind", "payload", "lineno")

    def __init__(self, kind, payload, lineno):
        self.kind = kind          # insert|delete|inserthyper|deletehyper|query|snapshot
        self.payload = payload
        self.lineno = lineno

    def __repr__(self):
        return "StreamOp(%s, %r)" % (self.kind, self.payload)


def parse_stream(text, path="<stream>"):
    ops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "+":
                d = 1
                ends = []
                for tok in toks[1:]:
                    if tok.startswith("d="):
                        d = int(tok[2:])
                    else:
                        ends.append(int(tok))
                if len(ends) != 2:
                    raise ValueError("insert needs exactly two endpoints")
                ops.append(StreamOp("insert", (ends[0], ends[1], d), lineno))
            elif toks[0] == "-":
                if len(toks) != 3:
                    raise ValueError("delete needs exactly two endpoints")
                ops.append(StreamOp("delete", (int(toks[1]), int(toks[2])), lineno))
            elif toks[0] == "+e":
                if len(toks) < 4:
                    raise ValueError("hyperedge insert: +e <id> <v1> <v2> ...")
                ops.append(StreamOp(
                    "inserthyper",
                    (int(toks[1]), tuple(int(t) for t in toks[2:])), lineno))
            elif toks[0] == "-e":
                if len(toks) != 2:
                    raise ValueError("hyperedge delete: -e <id>")
                ops.append(StreamOp("deletehyper", (int(toks[1]),), lineno))
            elif toks[0] == "query":
                ops.append(StreamOp("query", (), lineno))
            elif toks[0] == "snapshot":
                if len(toks) != 2:
                    raise ValueError("snapshot needs a path")
                ops.append(StreamOp("snapshot", (toks[1],), lineno))
            else:
                raise ValueError("unknown op %r" % toks[0])
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from exc
    return ops


def render_stream(ops):
    lines = []
    for op in ops:
        if op.kind == "insert":
            u, v, d = op.payload
            lines.append("+ %d %d" % (u, v) if d == 1 else "+ %d %d d=%d" % (u, v, d))
        elif op.kind == "delete":
            lines.append("- %d %d" % op.payload)
        elif op.kind == "inserthyper":
            eid, ends = op.payload
            lines.append("+e %d %s" % (eid, " ".join(str(x) for x in ends)))
        elif op.kind == "deletehyper":
            lines.append("-e %d" % op.payload[0])
        elif op.kind == "query":
            lines.append("query")
        elif op.kind == "snapshot":
            lines.append("snapshot %s" % op.payload[0])
        else:
            raise ValueError("unknown op kind %r" % op.kind)
    return "\n".join(lines) + "\n"


# -- snapshots --------------------------------------------------------------------


def _engine_lines(state):
    lines = [
        "state tight=%s t=%d touched=%d ops=%d nexteid=%d version=%d"
        % (fmt_float(state.tight_factor), state.updates_applied,
           state.touched_total, state._ops, state.next_eid, state.version),
        "levels %s" % " ".join(str(state.level(v)) for v in range(state.n)),
    ]
    for eid in sorted(state.edges):
        e = state.edges[eid]
        lines.append("edge %d ends=%s d=%d level=%d owner=%d" % (
            eid, ",".join(str(u) for u in e.ends), e.demand, e.level, e.owner))
    return lines


def _restore_engine(state, lines, path):
    it = iter(lines)
    try:
        head = next(it)
    except StopIteration:
        raise SnapshotError("%s: empty engine section" % path)
    toks = head.split()
    if toks[0] != "state":
        raise SnapshotError("%s: expected state line, got %r" % (path, head))
    kv = dict(t.split("=", 1) for t in toks[1:])
    state.tight_factor = float(kv["tight"])
    state.updates_applied = int(kv["t"])
    state.touched_total = int(kv["touched"])
    state._ops = int(kv["ops"])
    state.version = int(kv["version"])
    levels_line = next(it).split()
    if levels_line[0] != "levels" or len(levels_line) != state.n + 1:
        raise SnapshotError("%s: bad levels line" % path)
    for v, tok in enumerate(levels_line[1:]):
        state.profiles[v].set_level(int(tok))
    for line in it:
        toks = line.split()
        if toks[0] != "edge":
            raise SnapshotError("%s: bad edge line %r" % (path, line))
        eid = int(toks[1])
        ekv = dict(t.split("=", 1) for t in toks[2:])
        ends = tuple(int(x) for x in ekv["ends"].split(","))
        e = state.insert_edge_raw(ends, int(ekv["d"]), eid)
        if e.level != int(ekv["level"]):
            raise SnapshotError(
                "%s: edge %d level %s inconsistent with vertex levels"
                % (path, eid, ekv["level"]))
        owner = int(ekv["owner"])
        if state.level(owner) != e.level:
            raise SnapshotError("%s: edge %d owner below edge level" % (path, eid))
        if owner != e.owner:
            state._set_owner(e, owner)
    state.next_eid = int(kv["nexteid"])
    state._ops = int(kv["ops"])      # raw inserts bumped it; restore exactly


def checksum_lines(lines):
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


def write_snapshot(path, header_kv, sections):
    """sections: list of (section name line, body lines)."""
    lines = ["%s %d" % (SNAPSHOT_MAGIC, SNAPSHOT_VERSION)]
    for k, v in header_kv.items():
        lines.append("%s %s" % (k, v))
    for name, body in sections:
        lines.append("section %s" % name)
        lines.extend(body)
        lines.append("end")
    lines.append("checksum %s" % checksum_lines(lines))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_snapshot(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise SnapshotError("%s: empty snapshot" % path)
    magic = lines[0].split()
    if len(magic) != 2 or magic[0] != SNAPSHOT_MAGIC:
        raise SnapshotError("%s: not a levelcover snapshot" % path)
    if int(magic[1]) != SNAPSHOT_VERSION:
        raise SnapshotError("%s: unsupported snapshot version %s" % (path, magic[1]))
    if not lines[-1].startswith("checksum "):
        raise SnapshotError("%s: missing checksum" % path)
    expected = lines[-1].split()[1]
    actual = checksum_lines(lines[:-1])
    if actual != expected:
        raise SnapshotError("%s: checksum mismatch (truncated or edited?)" % path)
    header = {}
    sections = []
    i = 1
    while i < len(lines) - 1 and not lines[i].startswith("section "):
        k, _, v = lines[i].partition(" ")
        header[k] = v
        i += 1
    while i < len(lines) - 1:
        if not lines[i].startswith("section "):
            raise SnapshotError("%s: expected section at line %d" % (path, i + 1))
        name = lines[i].split(" ", 1)[1]
        body = []
        i += 1
        while lines[i] != "end":
            body.append(lines[i])
            i += 1
            if i >= len(lines) - 1:
                raise SnapshotError("%s: unterminated section %r" % (path, name))
        sections.append((name, body))
        i += 1
    return header, sections
