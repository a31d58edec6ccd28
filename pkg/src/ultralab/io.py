"""JSON documents for spaces, maps, ball spaces, ball-maps and measures.

Document references ("domain": "sX.json") resolve relative to the file that
names them; inline objects are accepted anywhere a path is.
"""

import json
import os

from .ball_space import BallSpace, ball_space_from_doc, enumerate_balls
from .ballmaps import BallMap, CpBallDomain
from .core import SpaceValidationError, make_space, space_spec
from .maps import PointMap, ScalarField, ScalarFunction
from .measures import measure_from_doc
from .rational import fmt, rat

SCHEMA = "ultrametric-lab/1"


class DocumentError(ValueError):
    pass


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path} is not valid JSON: {e.msg} at line {e.lineno}")


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path, doc):
    with open(path, "w") as fh:
        fh.write(dumps(doc))


def _resolve(ref, base):
    """Return (document, directory for nested references)."""
    if isinstance(ref, dict):
        return ref, base
    if not isinstance(ref, str):
        raise DocumentError(f"expected a path or an inline object, got {ref!r}")
    path = ref if os.path.isabs(ref) else os.path.join(base, ref)
    return read_json(path), os.path.dirname(path)


def _strip(doc):
    return {k: v for k, v in doc.items() if k not in ("schema", "kind")}


def load_space(ref, base="."):
    doc, _ = _resolve(ref, base)
    return make_space(_strip(doc))


def load_codomain(ref, base="."):
    doc, _ = _resolve(ref, base)
    if "p" in doc and "model" not in doc:
        return ScalarField(int(doc["p"]))
    return make_space(_strip(doc))


def codomain_doc(cod):
    if isinstance(cod, ScalarField):
        return {"p": cod.p}
    return space_spec(cod)


def _point_index(space, key):
    try:
        return space.index(str(key))
    except (KeyError, ValueError):
        pass
    try:
        i = int(key)
    except (TypeError, ValueError):
        raise DocumentError(f"{key!r} is not a point of the space")
    if not 0 <= i < len(space):
        raise DocumentError(f"{key!r} is not a point of the space")
    return i


def _table(raw, n, convert):
    if isinstance(raw, list):
        if len(raw) != n:
            raise DocumentError(f"table has {len(raw)} entries, expected {n}")
        return [convert(v) for v in raw]
    if not isinstance(raw, dict):
        raise DocumentError("table must be an object or a list")
    return raw


def _scalar_domain(doc, base, count, p):
    if "domain" in doc:
        return load_space(doc["domain"], base)
    n, size = 0, 1
    while size < count:
        size *= p
        n += 1
    if size != count or n == 0:
        raise DocumentError("scalar function without a domain needs p^n values")
    return make_space({"model": "pquotient", "p": p, "n": n})


def map_from_doc(doc, base="."):
    """A PointMap or, for {"values": ..., "p": ...}, a ScalarFunction."""
    doc = _strip(doc)
    if "values" in doc:
        p = int(doc["p"])
        X = _scalar_domain(doc, base, len(doc["values"]), p)
        raw = _table(doc["values"], len(X), rat)
        if isinstance(raw, dict):
            vals = [None] * len(X)
            for k, v in raw.items():
                vals[_point_index(X, k)] = rat(v)
            if None in vals:
                raise DocumentError("scalar function must be total on its domain")
            raw = vals
        return ScalarFunction(X, raw, p)
    X = load_space(doc["domain"], base)
    Y = load_codomain(doc["codomain"], base)
    if isinstance(Y, ScalarField):
        conv = rat
    else:
        def conv(v):
            return _point_index(Y, v)
    raw = _table(doc["table"], len(X), conv)
    if isinstance(raw, dict):
        vals = [None] * len(X)
        for k, v in raw.items():
            vals[_point_index(X, k)] = conv(v)
        if any(v is None for v in vals):
            raise DocumentError("map table must be total on the domain")
        raw = vals
    return PointMap(X, Y, raw)


def map_doc(f):
    X = f.domain
    if isinstance(f.codomain, ScalarField):
        return {"schema": SCHEMA, "domain": space_spec(X), "p": f.codomain.p,
                "values": {X.labels[i]: fmt(v) for i, v in enumerate(f.table)}}
    return {"schema": SCHEMA, "domain": space_spec(X), "codomain": space_spec(f.codomain),
            "table": {X.labels[i]: f.codomain.labels[v] for i, v in enumerate(f.table)}}


def load_map(path):
    doc, base = _resolve(path, ".")
    return map_from_doc(doc, base)


def ball_domain_from_doc(doc):
    """A ball-space document, a cpchain space (its radius grid) or any other
    space document (its ball space)."""
    doc = _strip(doc)
    if "balls" in doc:
        return ball_space_from_doc(doc)
    if doc.get("model") == "cpchain":
        return CpBallDomain(int(doc["p"]), doc["radii"])
    return enumerate_balls(make_space(doc))


def ball_domain_doc(dom):
    if isinstance(dom, CpBallDomain):
        return space_spec(dom.space)
    return {"schema": SCHEMA, **dom.to_doc()}


def ballmap_from_doc(doc, base="."):
    doc = _strip(doc)
    dom_doc, _ = _resolve(doc["ball_domain"], base)
    dom = ball_domain_from_doc(dom_doc)
    Y = load_codomain(doc["codomain"], base)
    if isinstance(Y, ScalarField):
        conv = rat
    else:
        def conv(v):
            return _point_index(Y, v)
    raw = _table(doc["table"], len(dom), conv)
    if isinstance(raw, dict):
        vals = [None] * len(dom)
        for k, v in raw.items():
            try:
                i = int(k)
            except ValueError:
                raise DocumentError(f"ball index {k!r} is not an integer")
            if not 0 <= i < len(dom):
                raise DocumentError(f"ball index {k} outside 0..{len(dom) - 1}")
            vals[i] = conv(v)
        if any(v is None for v in vals):
            raise DocumentError("ball-map table must be total on the ball domain")
        raw = vals
    return BallMap(dom, Y, raw)


def ballmap_doc(P):
    if isinstance(P.codomain, ScalarField):
        table = {str(i): fmt(v) for i, v in enumerate(P.table)}
    else:
        table = {str(i): P.codomain.labels[v] for i, v in enumerate(P.table)}
    return {"schema": SCHEMA, "ball_domain": ball_domain_doc(P.ball_domain),
            "codomain": codomain_doc(P.codomain), "table": table}


def load_ballmap(path):
    doc, base = _resolve(path, ".")
    return ballmap_from_doc(doc, base)


def load_measure(path):
    doc, _ = _resolve(path, ".")
    return measure_from_doc(_strip(doc))


def measure_doc(mu):
    return {"schema": SCHEMA, **mu.to_doc()}


def space_doc(space):
    return {"schema": SCHEMA, **space_spec(space)}


def load_ball_space(path):
    doc, _ = _resolve(path, ".")
    dom = ball_domain_from_doc(doc)
    if not isinstance(dom, BallSpace):
        raise DocumentError("expected a ball-space document")
    return dom


__all__ = ["DocumentError", "SpaceValidationError", "read_json", "dumps", "write_json",
           "load_space", "load_codomain", "map_from_doc", "map_doc", "load_map",
           "ball_domain_from_doc", "ballmap_from_doc", "ballmap_doc", "load_ballmap",
           "load_measure", "measure_doc", "space_doc", "load_ball_space"]
